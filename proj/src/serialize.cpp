#include "connectgraph/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "connectgraph/error.hpp"

namespace connectgraph {

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void dump_value(const Json& j, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                out += Json(it.key()).dump();
                out += ": ";
                dump_value(it.value(), out, depth + 1);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // scalar arrays stay on one line
            bool flat = true;
            for (const auto& v : j)
                if (v.is_structured()) flat = false;
            out += "[";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += flat ? ", " : ",";
                first = false;
                if (!flat) out += "\n" + pad;
                dump_value(v, out, depth + 1);
            }
            if (!flat) out += "\n" + close_pad;
            out += "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_number(v) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string dump_json(const Json& j) {
    std::string out;
    dump_value(j, out, 0);
    out += "\n";
    return out;
}

Json matrix_json(const Matrix& m) {
    Json a = Json::array();
    for (double v : m.data()) a.push_back(v);
    return a;
}

Json labels_json(const std::vector<NodeLabel>& labels) {
    Json a = Json::array();
    for (const auto& l : labels) a.push_back(Json::array({l.class_id, l.domain_id}));
    return a;
}

Json to_json(const PairGraph& g) {
    Json j;
    j["n"] = g.n_nodes;
    j["labels"] = labels_json(g.labels);
    j["weights"] = matrix_json(g.weights);
    j["source_domain"] = g.source_domain;
    return j;
}

Json to_json(const SampledGraph& g) {
    const std::size_t n = g.labels.size();
    Json j;
    j["n"] = n;
    j["labels"] = labels_json(g.labels);
    if (n > 512) {
        Json edges = Json::array();
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = i; k < n; ++k)
                if (g.adjacency(i, k) != 0.0) edges.push_back(Json::array({i, k}));
        j["edges"] = std::move(edges);
    } else {
        j["weights"] = matrix_json(g.adjacency);
    }
    j["source_domain"] = 1;
    j["seed"] = g.seed;
    j["edge_count"] = g.edge_count;
    return j;
}

Json to_json(const SpectralEmbedding& e) {
    Json j;
    j["k"] = e.k;
    j["eigenvalues"] = e.retained_eigenvalues;
    j["features"] = matrix_json(e.features);
    return j;
}

Json to_json(const SbmParams& p) {
    Json j;
    j["r"] = p.r;
    j["m"] = p.m;
    j["n"] = p.n;
    j["rho"] = p.rho;
    j["alpha"] = p.alpha;
    j["beta"] = p.beta;
    j["gamma"] = p.gamma;
    return j;
}

namespace {

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json to_json(const ToyReport& r) {
    Json j;
    j["params"] = {{"rho_p", r.params.rho_p},
                   {"alpha_p", r.params.alpha_p},
                   {"beta_p", r.params.beta_p},
                   {"gamma_p", r.params.gamma_p}};
    j["pair_params"] = {{"rho", r.pair.rho}, {"alpha", r.pair.alpha}, {"beta", r.pair.beta}, {"gamma", r.pair.gamma}};
    j["eta"] = r.eta;
    j["k"] = r.k;
    j["eigenvalues"] = r.eigenvalues;
    j["degenerate"] = r.degenerate;
    j["target_error"] = optional_number(r.target_error);
    j["domain_error"] = optional_number(r.domain_error);
    j["predicted_classes"] = r.predicted;
    Json coords = Json::array();
    for (std::size_t i = 0; i < r.coordinates.rows(); ++i)
        coords.push_back(Json::array({r.coordinates(i, 0), r.coordinates(i, 1)}));
    j["coordinates"] = std::move(coords);
    return j;
}

Json to_json(const SeparationReport& r) {
    Json j;
    j["erm_err"] = r.erm_err;
    j["erm_err_oracle_completion"] = r.erm_err_oracle_completion;
    j["dann_err"] = r.dann_err;
    j["dann_domain_term"] = r.dann_domain_term;
    j["contrastive_err"] = r.contrastive_err;
    j["condition_alpha_gt_gamma_plus_beta"] = r.condition_alpha_gt_gamma_plus_beta;
    j["contrastive_degenerate"] = r.contrastive_degenerate;
    j["contrastive_off_parity_weight"] = r.contrastive_off_parity_weight;
    j["lambda"] = r.lambda;
    j["eta"] = r.eta;
    return j;
}

Json probe_json(double eta, const Matrix& weights, double target_error, double domain_error,
                const Cosines& cosines) {
    Json j;
    j["eta"] = eta;
    j["weights"] = matrix_json(weights);
    j["target_error"] = target_error;
    j["domain_error"] = domain_error;
    j["cosines"] = {{"src_vs_tgt", cosines.src_vs_tgt},
                    {"src_vs_dom", cosines.src_vs_dom},
                    {"tgt_vs_dom", cosines.tgt_vs_dom}};
    return j;
}

Json to_json(const TrialRecord& r) {
    Json j;
    j["params"] = to_json(r.params);
    j["k"] = r.k;
    j["seed"] = r.seed;
    j["probe"] = probe_json(r.eta, r.probe_weights, r.target_error, r.domain_error,
                            {r.src_vs_tgt_cos, r.src_vs_dom_cos, r.tgt_vs_dom_cos});
    j["scaling_factor_empirical"] = r.scaling_factor_empirical;
    j["op_norm_deviation"] = r.op_norm_deviation;
    if (r.domain_extension) j["domain_probe"] = "extension";
    return j;
}

Json to_json(const FitResult& f) {
    Json j;
    j["w1"] = f.w1;
    j["w2"] = f.w2;
    j["r_squared"] = f.r_squared;
    j["residuals"] = f.residuals;
    return j;
}

Json to_json(const PaperTableReport& r) {
    Json j;
    j["published"] = {{"w1", r.published_w1}, {"w2", r.published_w2}, {"r_squared", r.published_r_squared}};
    j["floor_points"] = r.floor_points;
    Json fits = Json::array();
    for (const auto& cf : r.fits) {
        Json f = to_json(cf.fit);
        f["beta_convention"] = cf.beta_convention;
        Json recs = Json::array();
        for (const auto& rec : cf.records)
            recs.push_back({{"pair", rec.pair_id},
                            {"normalized_accuracy", rec.accuracy},
                            {"alpha", rec.alpha},
                            {"beta", rec.beta},
                            {"gamma", rec.gamma}});
        f["records"] = std::move(recs);
        fits.push_back(std::move(f));
    }
    j["fits"] = std::move(fits);
    return j;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out(kSweepCsvHeader);
    out += "\n";
    for (const auto& r : rows) {
        const TrialRecord& t = r.record;
        out += r.vary + "," + format_number(r.value) + "," + std::to_string(r.trial) + "," +
               std::to_string(r.seed) + "," + format_number(t.target_error) + "," +
               format_number(t.domain_error) + "," + format_number(t.scaling_factor_empirical) + "," +
               format_number(t.op_norm_deviation) + "," + format_number(t.src_vs_tgt_cos) + "," +
               format_number(t.src_vs_dom_cos) + "\n";
    }
    return out;
}

Json sweep_json(const std::vector<SweepRow>& rows) {
    Json a = Json::array();
    for (const auto& r : rows) {
        Json j;
        j["vary"] = r.vary;
        j["value"] = r.value;
        j["trial"] = r.trial;
        j["seed"] = r.seed;
        j["target_error"] = r.record.target_error;
        j["domain_error"] = r.record.domain_error;
        j["scaling_factor"] = r.record.scaling_factor_empirical;
        j["op_norm_dev"] = r.record.op_norm_deviation;
        j["cos_src_tgt"] = r.record.src_vs_tgt_cos;
        j["cos_src_dom"] = r.record.src_vs_dom_cos;
        a.push_back(std::move(j));
    }
    return a;
}

std::vector<ConnectivityRecord> parse_connectivity_csv(std::string_view text) {
    std::vector<ConnectivityRecord> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (f.size() != 5) throw ValidationError("line " + std::to_string(lineno) + ": expected 5 fields");
        if (f[1] == "accuracy") continue;  // header
        try {
            out.push_back({f[0], std::stod(f[1]), std::stod(f[2]), std::stod(f[3]), std::stod(f[4])});
        } catch (const std::logic_error&) {
            throw ValidationError("line " + std::to_string(lineno) + ": bad number");
        }
    }
    return out;
}

}  // namespace connectgraph
