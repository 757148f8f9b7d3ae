#include "connectgraph/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <sstream>
#include <tuple>

#include "connectgraph/eigen.hpp"
#include "connectgraph/error.hpp"
#include "connectgraph/rng.hpp"
#include "connectgraph/spectral.hpp"

namespace connectgraph {

namespace {


// Shared probe stage: embed W, fit on domain 1, score the rest.
TrialRecord evaluate_graph(const SbmParams& p, const std::vector<NodeLabel>& labels, const Matrix& graph,
                           std::size_t k, double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be positive");
    TrialRecord rec;
    rec.params = p;
    rec.k = k;
    rec.eta = eta;
    const PairGraph g = to_pair_graph(labels, graph, 1);
    const SpectralEmbedding emb = embed(g, k);
    const auto src = nodes_in_domain(labels, 1);
    const auto tgt = nodes_outside_domain(labels, 1);
    const auto truth = class_ids(labels);

    const ProbeWeights cls = ridge_fit_nodes(emb.features, src, class_label_matrix(labels, src, p.r), eta);
    const Predictions pred = predict(emb.features, cls);
    rec.target_error = zero_one_error(pred.classes, truth, tgt);
    rec.probe_weights = cls.weights;

    const double ynorm2 = 1.0 - 1.0 / p.r;
    double factor = 0.0;
    for (std::size_t x : tgt) {
        const Vector y = mean_zero_onehot(truth[x], p.r);
        factor += dot(pred.scores.row(x), y) / ynorm2;
    }
    rec.scaling_factor_empirical = factor / static_cast<double>(tgt.size());

    const DomainProbe dom = domain_probe(emb.features, labels, eta);
    rec.domain_error = dom.domain_error;
    rec.domain_extension = dom.extension;

    const ProbeWeights tgt_probe =
        ridge_fit_nodes(emb.features, tgt, class_label_matrix(labels, tgt, p.r), eta);
    const Cosines c = disentanglement_cosines(cls.weights, tgt_probe.weights, dom.weights.weights);
    rec.src_vs_tgt_cos = c.src_vs_tgt;
    rec.src_vs_dom_cos = c.src_vs_dom;
    rec.tgt_vs_dom_cos = c.tgt_vs_dom;
    return rec;
}

}  // namespace

ToyReport run_toy(const ToyKernelParams& p, double eta) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be positive");
    const AugmentationKernel kernel = build_toy_kernel(p);
    const PairGraph g = positive_pair_graph(kernel);
    ToyReport rep;
    rep.params = p;
    rep.pair = toy_pair_params(p);
    rep.eta = eta;
    const double nn = static_cast<double>(g.n_nodes * g.n_nodes);
    rep.eigenvalues = symmetric_eigenvalues(g.weights * nn);
    const double floor = 1e-12 * std::max(1.0, std::abs(rep.eigenvalues.front()));
    rep.degenerate = has_tie_at(rep.eigenvalues, rep.k) || !(rep.eigenvalues[rep.k - 1] > floor);
    if (rep.degenerate) return rep;

    const SpectralEmbedding emb = embed(g, rep.k);
    const std::vector<std::size_t> src{0, 1};
    const std::vector<std::size_t> tgt{2, 3};
    const ProbeWeights pw = ridge_fit_nodes(emb.features, src, class_label_matrix(g.labels, src, 2), eta);
    const Predictions pred = predict(emb.features, pw);
    rep.predicted = pred.classes;
    rep.target_error = zero_one_error(pred.classes, class_ids(g.labels), tgt);
    rep.domain_error = domain_probe(emb.features, g.labels, eta).domain_error;
    rep.coordinates = Matrix(g.n_nodes, 2);
    for (std::size_t i = 0; i < g.n_nodes; ++i) {
        rep.coordinates(i, 0) = emb.features(i, 1);
        rep.coordinates(i, 1) = emb.features(i, 2);
    }
    return rep;
}

SeparationReport run_separation(const SeparationKernelParams& p, double lambda, double eta) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be positive");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be positive");
    const AugmentationKernel k = build_separation_kernel(p);
    const auto tgt = separation_target_nodes();
    const auto truth = class_ids(k.labels);
    SeparationReport rep;
    rep.params = p;
    rep.lambda = lambda;
    rep.eta = eta;
    rep.erm_err = zero_one_error(erm_minimizer(k, 1, Completion::adversarial).classes(), truth, tgt);
    rep.erm_err_oracle_completion = zero_one_error(erm_minimizer(k, 1, Completion::oracle).classes(), truth, tgt);
    const DannResult dann = dann_construction(k, lambda);
    rep.dann_err = zero_one_error(dann.predictor.classes(), truth, tgt);
    rep.dann_domain_term = dann.domain_term;
    const ContrastiveSeparation con = contrastive_pipeline_separation(k, eta);
    rep.contrastive_err = con.target_error;
    rep.condition_alpha_gt_gamma_plus_beta = con.condition_met;
    rep.contrastive_degenerate = con.degenerate;
    rep.contrastive_off_parity_weight = con.off_parity_weight;
    return rep;
}

std::size_t default_k(const SbmParams& p) { return static_cast<std::size_t>(p.r + p.m - 1); }

TrialRecord run_graph_trial(const SampledGraph& g, std::size_t k, double eta) {
    if (g.edge_count == 0) throw ValidationError("sampled graph has no edges");
    if (k == 0) k = default_k(g.params);
    TrialRecord rec = evaluate_graph(g.params, g.labels, g.adjacency, k, eta);
    rec.seed = g.seed;
    const Matrix expected = expected_adjacency(g.params).matrix;
    rec.op_norm_deviation =
        operator_norm(g.adjacency - expected) / std::sqrt(static_cast<double>(g.labels.size()));
    return rec;
}

TrialRecord run_sbm_trial(const SbmParams& p, std::size_t k, double eta, std::uint64_t seed) {
    p.validate();
    return run_graph_trial(sample_adjacency(p, seed), k, eta);
}

TrialRecord run_expected_trial(const SbmParams& p, std::size_t k, double eta) {
    const ExpectedGraph g = expected_adjacency(p);
    if (k == 0) k = default_k(p);
    return evaluate_graph(p, g.labels, g.matrix, k, eta);
}

Vector linear_grid(double from, double to, int steps) {
    if (steps < 0) throw ValidationError("steps must be nonnegative");
    Vector grid;
    if (steps == 0) return grid;
    if (steps == 1) return {from};
    grid.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i) {
        const double t = static_cast<double>(i) / (steps - 1);
        grid.push_back(i == steps - 1 ? to : from + t * (to - from));
    }
    return grid;
}

bool is_sweep_parameter(std::string_view name) {
    return name == "alpha" || name == "beta" || name == "gamma" || name == "n" || name == "eta" ||
           name == "rho";
}

std::pair<SbmParams, double> apply_sweep_value(const SbmParams& base, double eta, std::string_view vary,
                                               double value) {
    SbmParams p = base;
    if (vary == "alpha") p.alpha = value;
    else if (vary == "beta") p.beta = value;
    else if (vary == "gamma") p.gamma = value;
    else if (vary == "rho") p.rho = value;
    else if (vary == "eta") eta = value;
    else if (vary == "n") {
        if (!(value >= 1.0) || value != std::floor(value) || value > 1e6)
            throw ValidationError("n grid values must be positive integers");
        p.n = static_cast<int>(value);
    } else {
        throw ValidationError("vary must be one of alpha, beta, gamma, n, eta, rho");
    }
    p.validate();
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be positive");
    return {p, eta};
}

std::vector<SweepRow> sweep(const SweepSpec& spec) {
    if (!is_sweep_parameter(spec.vary))
        throw ValidationError("vary must be one of alpha, beta, gamma, n, eta, rho");
    if (spec.trials < 0) throw ValidationError("trials must be nonnegative");
    const std::size_t points = spec.grid.size();
    const auto trials = static_cast<std::size_t>(spec.trials);
    // validate the whole grid before any work
    std::vector<std::pair<SbmParams, double>> settings;
    settings.reserve(points);
    for (double v : spec.grid) settings.push_back(apply_sweep_value(spec.base, spec.eta, spec.vary, v));

    std::vector<SweepRow> rows(points * trials);
    std::vector<std::exception_ptr> errors(rows.size());
    const auto total = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const auto u = static_cast<std::size_t>(idx);
        const std::size_t point = u / trials;
        const std::size_t trial = u % trials;
        SweepRow& row = rows[u];
        row.vary = spec.vary;
        row.value = spec.grid[point];
        row.trial = static_cast<int>(trial);
        row.seed = derive_seed(spec.base_seed, point, trial);
        try {
            row.record = run_sbm_trial(settings[point].first, spec.k, settings[point].second, row.seed);
        } catch (...) {
            errors[u] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::uint64_t count_cross_domain_edges(const SampledGraph& g) {
    std::uint64_t c = 0;
    const std::size_t n = g.labels.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (g.labels[i].domain_id != g.labels[j].domain_id && g.adjacency(i, j) != 0.0) ++c;
    return c;
}

SampledGraph ablate_cross_edges(const SampledGraph& g, double fraction, std::uint64_t seed) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) throw ValidationError("fraction must lie in [0, 1]");
    const std::size_t n = g.labels.size();
    require(g.adjacency.rows() == n && g.adjacency.cols() == n, "ablate_cross_edges: shape mismatch");
    std::vector<std::tuple<std::uint64_t, std::size_t, std::size_t>> cross;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (g.labels[i].domain_id != g.labels[j].domain_id && g.adjacency(i, j) != 0.0)
                cross.emplace_back(keyed_hash(seed, i, j), i, j);
    const auto remove = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(cross.size())));
    std::partial_sort(cross.begin(), cross.begin() + static_cast<std::ptrdiff_t>(remove), cross.end());
    SampledGraph out = g;
    for (std::size_t e = 0; e < remove; ++e) {
        const auto [h, i, j] = cross[e];
        out.adjacency(i, j) = 0.0;
        out.adjacency(j, i) = 0.0;
    }
    out.edge_count = count_edges(out.adjacency);
    return out;
}

std::vector<SweepRow> ablation_sweep(const SbmParams& p, const Vector& fractions, int trials,
                                     std::uint64_t base_seed, double eta, std::size_t k) {
    p.validate();
    if (trials < 0) throw ValidationError("trials must be nonnegative");
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be positive");
    for (double f : fractions)
        if (!(f >= 0.0 && f <= 1.0)) throw ValidationError("fraction must lie in [0, 1]");
    const auto t = static_cast<std::size_t>(trials);
    std::vector<SweepRow> rows(fractions.size() * t);
    std::vector<std::exception_ptr> errors(rows.size());
    const auto total = static_cast<std::int64_t>(rows.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t idx = 0; idx < total; ++idx) {
        const auto u = static_cast<std::size_t>(idx);
        const std::size_t point = u / t;
        const std::size_t trial = u % t;
        SweepRow& row = rows[u];
        row.vary = "fraction";
        row.value = fractions[point];
        row.trial = static_cast<int>(trial);
        row.seed = derive_seed(base_seed, 0, trial);
        try {
            const SampledGraph g = sample_adjacency(p, row.seed);
            const SampledGraph cut = ablate_cross_edges(g, row.value, derive_seed(base_seed, 1, trial));
            row.record = run_graph_trial(cut, k, eta);
        } catch (...) {
            errors[u] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

FitResult fit_connectivity(const std::vector<ConnectivityRecord>& records) {
    if (records.size() < 2) throw ValidationError("fit needs at least 2 records");
    const std::size_t n = records.size();
    Vector x1(n), x2(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& r = records[i];
        if (!(r.accuracy > 0.0) || !std::isfinite(r.accuracy))
            throw ValidationError("accuracy must be positive (record " + r.pair_id + ")");
        if (!(r.alpha > 0.0 && r.beta > 0.0 && r.gamma > 0.0) || !std::isfinite(r.alpha + r.beta + r.gamma))
            throw ValidationError("connectivity values must be positive (record " + r.pair_id + ")");
        x1[i] = std::log(r.alpha / r.gamma);
        x2[i] = std::log(r.beta / r.gamma);
        y[i] = std::log(r.accuracy);
    }
    const double s11 = dot(x1, x1), s12 = dot(x1, x2), s22 = dot(x2, x2);
    const double s1y = dot(x1, y), s2y = dot(x2, y);
    const double det = s11 * s22 - s12 * s12;
    const double scale = (s11 + s22) * (s11 + s22);
    if (!(scale > 0.0) || !(det > 1e-12 * scale))
        throw ValidationError("connectivity ratios are collinear; the fit is not identifiable");
    FitResult f;
    f.w1 = (s22 * s1y - s12 * s2y) / det;
    f.w2 = (s11 * s2y - s12 * s1y) / det;
    double mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double ss_res = 0.0, ss_tot = 0.0;
    f.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        f.residuals[i] = y[i] - (f.w1 * x1[i] + f.w2 * x2[i]);
        ss_res += f.residuals[i] * f.residuals[i];
        ss_tot += (y[i] - mean) * (y[i] - mean);
    }
    if (ss_tot > 0.0)
        f.r_squared = 1.0 - ss_res / ss_tot;
    else
        f.r_squared = ss_res == 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
    return f;
}

SwavTable parse_swav_table(std::string_view csv) {
    SwavTable t;
    std::istringstream in{std::string(csv)};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> f;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) f.push_back(cell);
        if (f.empty() || f[0] == "kind") continue;
        try {
            if (f[0] == "accuracy" && f.size() >= 4) {
                t.accuracies.push_back({f[1], f[2], std::stod(f[3])});
            } else if (f[0] == "connectivity" && f.size() >= 7) {
                t.connectivity.push_back(
                    {f[1], f[2], std::stod(f[3]), std::stod(f[4]), std::stod(f[5]), std::stod(f[6])});
            } else {
                throw ValidationError("unrecognized table row: " + line);
            }
        } catch (const std::logic_error&) {
            throw ValidationError("malformed table row: " + line);
        }
    }
    return t;
}

PaperTableReport paper_table_fit(const SwavTable& table) {
    PaperTableReport rep;
    std::map<std::string, double> worst;
    for (const auto& a : table.accuracies) {
        auto it = worst.find(a.target);
        if (it == worst.end()) worst.emplace(a.target, a.accuracy);
        else it->second = std::min(it->second, a.accuracy);
    }
    const char* conventions[] = {"source", "target", "average"};
    for (const char* conv : conventions) {
        ConventionFit cf;
        cf.beta_convention = conv;
        for (const auto& a : table.accuracies) {
            const SwavConnectivity* row = nullptr;
            for (const auto& c : table.connectivity)
                if ((c.domain1 == a.source && c.domain2 == a.target) ||
                    (c.domain1 == a.target && c.domain2 == a.source))
                    row = &c;
            if (!row) throw ValidationError("no connectivity row for " + a.source + "->" + a.target);
            const double beta_src = row->domain1 == a.source ? row->beta1 : row->beta2;
            const double beta_tgt = row->domain1 == a.target ? row->beta1 : row->beta2;
            double beta = 0.5 * (beta_src + beta_tgt);
            if (cf.beta_convention == "source") beta = beta_src;
            else if (cf.beta_convention == "target") beta = beta_tgt;
            ConnectivityRecord rec;
            rec.pair_id = a.source + "->" + a.target;
            rec.accuracy = (a.accuracy - worst.at(a.target) + rep.floor_points) / 100.0;
            rec.alpha = row->alpha;
            rec.beta = beta;
            rec.gamma = row->gamma;
            cf.records.push_back(rec);
        }
        cf.fit = fit_connectivity(cf.records);
        rep.fits.push_back(std::move(cf));
    }
    return rep;
}

PaperTableReport paper_table_fit() { return paper_table_fit(parse_swav_table(embedded_swav_csv())); }

}  // namespace connectgraph
