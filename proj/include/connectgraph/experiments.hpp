#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "connectgraph/baselines.hpp"
#include "connectgraph/graph_core.hpp"
#include "connectgraph/matrix.hpp"
#include "connectgraph/probe.hpp"
#include "connectgraph/sbm.hpp"

namespace connectgraph {

struct ToyReport {
    ToyKernelParams params;
    PairParams pair;
    double eta = 0.0;
    std::size_t k = 3;
    /// Full spectrum of N^2 W, descending.
    Vector eigenvalues;
    /// Eigenvalue tie at k, or fewer than k positive eigenvalues.
    bool degenerate = false;
    std::optional<double> target_error;
    std::optional<double> domain_error;
    std::vector<int> predicted;
    /// Per-node coordinates in the two non-constant feature directions.
    Matrix coordinates;
};

ToyReport run_toy(const ToyKernelParams& p, double eta);

struct SeparationReport {
    SeparationKernelParams params;
    double lambda = 1.0;
    double eta = 0.0;
    double erm_err = 0.0;
    double erm_err_oracle_completion = 0.0;
    double dann_err = 0.0;
    double dann_domain_term = 0.0;
    double contrastive_err = 0.0;
    bool condition_alpha_gt_gamma_plus_beta = false;
    bool contrastive_degenerate = false;
    double contrastive_off_parity_weight = 0.0;
};

SeparationReport run_separation(const SeparationKernelParams& p, double lambda, double eta);

struct TrialRecord {
    SbmParams params;
    std::size_t k = 0;
    double eta = 0.0;
    std::uint64_t seed = 0;
    double target_error = 0.0;
    double domain_error = 0.0;
    double src_vs_tgt_cos = 0.0;
    double src_vs_dom_cos = 0.0;
    double tgt_vs_dom_cos = 0.0;
    double scaling_factor_empirical = 0.0;
    /// ||A - E[A]||_2 / sqrt(N); zero for expected-graph trials.
    double op_norm_deviation = 0.0;
    /// m > 2: the domain probe is multiclass.
    bool domain_extension = false;
    /// Source class probe, k x r.
    Matrix probe_weights;
};

/// r + m - 1.
std::size_t default_k(const SbmParams& p);

/// Sample, embed, probe with source domain 1. k == 0 selects default_k.
TrialRecord run_sbm_trial(const SbmParams& p, std::size_t k, double eta, std::uint64_t seed);
/// Same pipeline on E[A] instead of a sample.
TrialRecord run_expected_trial(const SbmParams& p, std::size_t k, double eta);
/// Same pipeline on a given graph (used after ablation).
TrialRecord run_graph_trial(const SampledGraph& g, std::size_t k, double eta);

inline constexpr double kDefaultSweepEta = 0.01;

struct SweepSpec {
    SbmParams base;
    std::string vary;
    Vector grid;
    int trials = 1;
    std::uint64_t base_seed = 0;
    double eta = kDefaultSweepEta;
    std::size_t k = 0;
};

struct SweepRow {
    std::string vary;
    double value = 0.0;
    int trial = 0;
    std::uint64_t seed = 0;
    TrialRecord record;
};

/// `steps` evenly spaced values from `from` to `to` inclusive.
Vector linear_grid(double from, double to, int steps);
bool is_sweep_parameter(std::string_view name);
/// Params and eta with `vary` set to `value`; validates the result.
std::pair<SbmParams, double> apply_sweep_value(const SbmParams& base, double eta, std::string_view vary,
                                               double value);
/// Trials run in parallel; rows come back in grid order.
std::vector<SweepRow> sweep(const SweepSpec& spec);

/// Removes round(fraction * C) of the C cross-domain edges, picking the
/// smallest keyed hashes.
SampledGraph ablate_cross_edges(const SampledGraph& g, double fraction, std::uint64_t seed);
std::uint64_t count_cross_domain_edges(const SampledGraph& g);

/// For each trial, one sampled graph ablated at every fraction with a
/// shared key, so removed edge sets are nested. Rows use vary = "fraction".
std::vector<SweepRow> ablation_sweep(const SbmParams& p, const Vector& fractions, int trials,
                                     std::uint64_t base_seed, double eta, std::size_t k = 0);

struct ConnectivityRecord {
    std::string pair_id;
    double accuracy = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

struct FitResult {
    double w1 = 0.0;
    double w2 = 0.0;
    double r_squared = 0.0;
    Vector residuals;
};

/// log(acc) ~ w1 log(alpha/gamma) + w2 log(beta/gamma), no intercept.
FitResult fit_connectivity(const std::vector<ConnectivityRecord>& records);

struct SwavAccuracy {
    std::string source;
    std::string target;
    double accuracy = 0.0;
};

struct SwavConnectivity {
    std::string domain1;
    std::string domain2;
    double beta1 = 0.0;
    double beta2 = 0.0;
    double alpha = 0.0;
    double gamma = 0.0;
};

struct SwavTable {
    std::vector<SwavAccuracy> accuracies;
    std::vector<SwavConnectivity> connectivity;
};

std::string_view embedded_swav_csv();
SwavTable parse_swav_table(std::string_view csv);

struct ConventionFit {
    std::string beta_convention;
    std::vector<ConnectivityRecord> records;
    FitResult fit;
};

struct PaperTableReport {
    std::vector<ConventionFit> fits;
    double floor_points = 1.0;
    double published_w1 = 14.9;
    double published_w2 = 2.7;
    double published_r_squared = 0.78;
};

/// Normalized accuracy (acc - min over the same target + floor) / 100,
/// fitted under source, target and average beta.
PaperTableReport paper_table_fit(const SwavTable& table);
PaperTableReport paper_table_fit();

}  // namespace connectgraph
