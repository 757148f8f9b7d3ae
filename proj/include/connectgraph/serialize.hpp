#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "connectgraph/experiments.hpp"
#include "connectgraph/graph_core.hpp"
#include "connectgraph/probe.hpp"
#include "connectgraph/sbm.hpp"
#include "connectgraph/spectral.hpp"

namespace connectgraph {

using Json = nlohmann::ordered_json;

/// %.17g; non-finite values become null in JSON.
std::string format_number(double v);

/// Two-space indented JSON with floats at 17 significant digits, plus a
/// trailing newline.
std::string dump_json(const Json& j);

Json matrix_json(const Matrix& m);  // row-major flat array
Json labels_json(const std::vector<NodeLabel>& labels);

Json to_json(const PairGraph& g);
/// PairGraph schema with seed and edge_count; above 512 nodes the adjacency
/// goes out as "edges": [[i, j], ...] with 0-based i <= j.
Json to_json(const SampledGraph& g);
Json to_json(const SpectralEmbedding& e);
Json to_json(const SbmParams& p);
Json to_json(const ToyReport& r);
Json to_json(const SeparationReport& r);
Json to_json(const TrialRecord& r);
Json to_json(const FitResult& f);
Json to_json(const PaperTableReport& r);

Json probe_json(double eta, const Matrix& weights, double target_error, double domain_error,
                const Cosines& cosines);

inline constexpr std::string_view kSweepCsvHeader =
    "vary,value,trial,seed,target_error,domain_error,scaling_factor,op_norm_dev,cos_src_tgt,cos_src_dom";

std::string sweep_csv(const std::vector<SweepRow>& rows);
Json sweep_json(const std::vector<SweepRow>& rows);

/// Reads pair_id,accuracy,alpha,beta,gamma rows; a header line and '#'
/// comments are skipped.
std::vector<ConnectivityRecord> parse_connectivity_csv(std::string_view text);

}  // namespace connectgraph
