#include "connectgraph/verify.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <algorithm>
#include <random>

#include "connectgraph/baselines.hpp"
#include "connectgraph/draws.hpp"
#include "connectgraph/eigen.hpp"
#include "connectgraph/error.hpp"
#include "connectgraph/experiments.hpp"
#include "connectgraph/kernels.hpp"
#include "connectgraph/probe.hpp"
#include "connectgraph/rng.hpp"
#include "connectgraph/sbm.hpp"
#include "connectgraph/serialize.hpp"
#include "connectgraph/spectral.hpp"

namespace connectgraph {

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

struct Entry {
    const char* suite;
    const char* name;
    std::function<Outcome()> run;
};

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// restores the OpenMP thread count on scope exit
struct ThreadGuard {
    int saved = kernels::max_threads();
    ~ThreadGuard() { kernels::set_threads(saved); }
};

Matrix random_symmetric(std::mt19937_64& rng, std::size_t n) {
    std::normal_distribution<double> g;
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = g(rng);
    return m;
}

Matrix random_orthonormal(std::mt19937_64& rng, std::size_t k) {
    return symmetric_eigensystem(random_symmetric(rng, k)).eigenvectors;
}

AugmentationKernel random_kernel(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> size(2, 7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    AugmentationKernel k;
    k.n_nodes = size(rng);
    k.kernel = Matrix(k.n_nodes, k.n_nodes);
    for (std::size_t i = 0; i < k.n_nodes; ++i) {
        k.labels.push_back({static_cast<int>(i % 2) + 1, static_cast<int>(i / 2 % 2) + 1});
        double s = 0.0;
        for (double& v : k.kernel.row(i)) s += (v = u(rng) + 1e-3);
        for (double& v : k.kernel.row(i)) v /= s;
    }
    double s = 0.0;
    for (std::size_t i = 0; i < k.n_nodes; ++i) k.base_weights.push_back(u(rng) + 1e-3);
    for (double w : k.base_weights) s += w;
    for (double& w : k.base_weights) w /= s;
    return k;
}

struct Graph {
    std::string name;
    PairGraph g;
    std::size_t k;
};

// Small corpus shared by the spectral and probe checks.
std::vector<Graph> corpus(std::mt19937_64& rng, int sampled) {
    std::vector<Graph> out;
    for (int i = 0; i < 10; ++i) {
        out.push_back({"toy", positive_pair_graph(build_toy_kernel(draws::favorable_toy(rng))), 3});
        out.push_back({"toy-flipped", positive_pair_graph(build_toy_kernel(draws::flipped_toy(rng))), 3});
        out.push_back(
            {"separation", positive_pair_graph(build_separation_kernel(draws::separation_ordered(rng))), 3});
        out.push_back({"separation-zero",
                       positive_pair_graph(build_separation_kernel(draws::separation_zero_beta_gamma(rng))), 3});
    }
    for (int r : {2, 3})
        for (int m : {2, 3})
            for (int n : {1, 3}) {
                const SbmParams p = draws::ordered_sbm(rng, r, m, n);
                out.push_back({"expected-sbm", to_pair_graph(expected_adjacency(p)), default_k(p)});
            }
    std::uniform_int_distribution<int> nn(8, 16);
    for (int i = 0; i < sampled; ++i) {
        SbmParams p = draws::ordered_sbm(rng, 2, 2, nn(rng));
        p.rho = std::max(p.rho, 0.7);
        const SampledGraph s = sample_adjacency(p, rng());
        out.push_back({"sampled-sbm", to_pair_graph(s), default_k(p)});
    }
    return out;
}

// ---- graph_core ----

Outcome pair_graph_valid() {
    std::mt19937_64 rng(101);
    std::vector<AugmentationKernel> ks;
    for (int i = 0; i < 100; ++i) {
        ks.push_back(build_toy_kernel(draws::favorable_toy(rng)));
        ks.push_back(build_toy_kernel(draws::flipped_toy(rng)));
        ks.push_back(build_separation_kernel(draws::separation_ordered(rng)));
        ks.push_back(random_kernel(rng));
    }
    for (int i = 0; i < 50; ++i) ks.push_back(build_separation_kernel(draws::separation_zero_beta_gamma(rng)));
    double worst_sym = 0.0, worst_sum = 0.0, min_entry = 0.0;
    for (const auto& k : ks) {
        const PairGraph g = positive_pair_graph(k);
        worst_sym = std::max(worst_sym, asymmetry(g.weights));
        worst_sum = std::max(worst_sum, std::abs(sum_all(g.weights) - 1.0));
        for (double v : g.weights.data()) min_entry = std::min(min_entry, v);
    }
    return {worst_sym <= 1e-10 && worst_sum <= 1e-10 && min_entry >= 0.0,
            fmt("%zu kernels, max asymmetry %.3g, max |sum-1| %.3g", ks.size(), worst_sym, worst_sum)};
}

Outcome monotonicity_transfer() {
    std::mt19937_64 rng(102);
    int bad = 0;
    for (int i = 0; i < 1000; ++i) {
        const PairParams q = toy_pair_params(draws::favorable_toy(rng));
        if (!(q.rho > std::max(q.alpha, q.beta) && std::min(q.alpha, q.beta) > q.gamma)) ++bad;
    }
    return {bad == 0, fmt("1000 draws, %d violations", bad)};
}

Outcome closed_form_matches_pair_graph() {
    std::mt19937_64 rng(103);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const ToyKernelParams tp = draws::favorable_toy(rng);
        const PairGraph g = positive_pair_graph(build_toy_kernel(tp));
        const PairParams q = toy_pair_params(tp);
        for (std::size_t a = 0; a < 4; ++a)
            for (std::size_t b = 0; b < 4; ++b) {
                const bool sc = g.labels[a].class_id == g.labels[b].class_id;
                const bool sd = g.labels[a].domain_id == g.labels[b].domain_id;
                const double want = sc && sd ? q.rho : sc ? q.alpha : sd ? q.beta : q.gamma;
                worst = std::max(worst, std::abs(g.weights(a, b) - want));
            }
        const SeparationKernelParams sp =
            i % 2 == 0 ? draws::separation_ordered(rng) : draws::separation_zero_beta_gamma(rng);
        const PairGraph s = positive_pair_graph(build_separation_kernel(sp));
        const SeparationPairParams c = separation_pair_params(sp);
        for (std::size_t a = 0; a < 8; ++a)
            for (std::size_t b = 0; b < 8; ++b) {
                double want = -1.0;
                if (a == b) want = c.rho;
                else if (separation::is_alpha_pair(a, b)) want = c.alpha;
                else if (separation::is_beta_pair(a, b)) want = c.beta;
                else if (separation::is_gamma_pair(a, b)) want = c.gamma;
                if (want >= 0.0) worst = std::max(worst, std::abs(s.weights(a, b) - want * c.normalizer));
            }
    }
    return {worst <= 1e-12, fmt("300 toy + 300 separation draws, max deviation %.3g", worst)};
}

Outcome separation_reachability() {
    std::mt19937_64 rng(104);
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
        const AugmentationKernel k = build_separation_kernel(
            i % 2 == 0 ? draws::separation_ordered(rng) : draws::separation_zero_beta_gamma(rng));
        for (std::size_t s : {0, 1})
            for (std::size_t x : {4, 5}) worst = std::max(worst, k.kernel(s, x));
    }
    return {worst == 0.0, fmt("200 kernels, max K(source, {5,6}) = %.3g", worst)};
}

// ---- sbm ----

Outcome spectrum_grid(int draws_per_point, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    int cases = 0;
    for (int r : {2, 3, 4})
        for (int m : {2, 3})
            for (int n : {1, 2, 5})
                for (int d = 0; d < draws_per_point; ++d) {
                    const SbmParams p = draws::ordered_sbm(rng, r, m, n);
                    const Vector got = symmetric_eigenvalues(expected_adjacency(p).matrix);
                    const Vector want = closed_form_spectrum(p).sorted(p.num_nodes());
                    for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - want[i]));
                    ++cases;
                }
    return {worst <= 1e-9, fmt("%d parameter sets, max eigenvalue deviation %.3g", cases, worst)};
}

Outcome sampling_reproducible() {
    ThreadGuard guard;
    const SbmParams p{3, 2, 20, 0.6, 0.4, 0.3, 0.1};
    kernels::set_threads(1);
    const SampledGraph a = sample_adjacency(p, 42);
    kernels::set_threads(8);
    const SampledGraph b = sample_adjacency(p, 42);
    const SampledGraph c = sample_adjacency(p, 43);
    const bool same = a.adjacency == b.adjacency && a.edge_count == b.edge_count;
    return {same && !(a.adjacency == c.adjacency) && asymmetry(a.adjacency) == 0.0,
            fmt("identical across thread counts: %s", same ? "yes" : "no")};
}

Outcome concentration() {
    const std::vector<int> ns{24, 48, 96, 192};  // N = 96 .. 768
    int bad = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        double base = 0.0;
        for (int n : ns) {
            const SbmParams p{2, 2, n, 0.6, 0.4, 0.4, 0.1};
            const SampledGraph g = sample_adjacency(p, derive_seed(7, static_cast<std::uint64_t>(n), seed));
            const double v = operator_norm(g.adjacency - expected_adjacency(p).matrix) /
                             std::sqrt(static_cast<double>(p.num_nodes()));
            if (n == ns.front()) base = v;
            worst = std::max(worst, v / base);
            if (v > 3.0 * base) ++bad;
        }
    }
    return {bad == 0, fmt("10 seeds x N in {96,192,384,768}, max ratio to N=96 value %.3f", worst)};
}

Outcome constant_eigenvector() {
    std::mt19937_64 rng(105);
    double worst = 0.0;
    for (int r : {2, 3, 4})
        for (int m : {2, 3})
            for (int n : {1, 2, 5}) {
                const SbmParams p = draws::ordered_sbm(rng, r, m, n);
                const Matrix e = expected_adjacency(p).matrix;
                const double la = closed_form_spectrum(p).lambda_a;
                for (std::size_t i = 0; i < e.rows(); ++i) {
                    double s = 0.0;
                    for (double v : e.row(i)) s += v;
                    worst = std::max(worst, std::abs(s - la) / la);
                }
            }
    return {worst <= 1e-12, fmt("max relative row-sum deviation from lambda_a %.3g", worst)};
}

// ---- spectral ----

Outcome reconstruction_optimality() {
    std::mt19937_64 rng(106);
    std::uniform_int_distribution<std::size_t> size(3, 40);
    double worst = 0.0;
    for (int t = 0; t < 30; ++t) {
        const std::size_t n = size(rng);
        const std::size_t k = std::uniform_int_distribution<std::size_t>(1, n)(rng);
        const Matrix m = random_symmetric(rng, n);
        const EigenSystem es = symmetric_eigensystem(m);
        double tail = 0.0;
        for (std::size_t i = k; i < n; ++i) tail += es.eigenvalues[i] * es.eigenvalues[i];
        const double r = frobenius_norm(m - rank_k_approx(m, k));
        worst = std::max(worst, std::abs(r * r - tail));
    }
    return {worst <= 1e-9, fmt("30 random matrices, max deviation %.3g", worst)};
}

Outcome gram_identity() {
    std::mt19937_64 rng(107);
    double worst = 0.0;
    const auto graphs = corpus(rng, 5);
    for (const auto& c : graphs) {
        const SpectralEmbedding e = embed(c.g, c.k);
        const double nn = static_cast<double>(c.g.n_nodes * c.g.n_nodes);
        const double d = frobenius_norm(kernels::matmul_bt(e.features, e.features) - rank_k_approx(c.g.weights * nn, c.k));
        worst = std::max(worst, d / nn);
    }
    return {worst <= 1e-8, fmt("%zu graphs, max ||FF^T - M_k||_F / N^2 = %.3g", graphs.size(), worst)};
}

Outcome loss_equality() {
    std::mt19937_64 rng(108);
    std::normal_distribution<double> g;
    double worst = 0.0;
    int not_minimal = 0;
    for (int t = 0; t < 50; ++t) {
        const PairGraph pg = positive_pair_graph(build_toy_kernel(draws::favorable_toy(rng)));
        const SpectralEmbedding e = embed(pg, 3);
        Matrix f(4, 3);
        for (double& v : f.data()) v = g(rng);
        for (const Matrix* feat : {&e.features, static_cast<const Matrix*>(&f)})
            worst = std::max(worst, std::abs(spectral_contrastive_loss(pg, *feat) - spectral_loss_matrix_form(pg, *feat)));
        if (spectral_contrastive_loss(pg, e.features) > spectral_contrastive_loss(pg, f) + 1e-12) ++not_minimal;
    }
    return {worst <= 1e-9 && not_minimal == 0,
            fmt("50 toy graphs, max brute-force vs matrix-form gap %.3g, embedding beaten %d times", worst, not_minimal)};
}

Outcome rotation_invariance() {
    std::mt19937_64 rng(109);
    double gram_dev = 0.0, score_dev = 0.0;
    int argmax_changes = 0;
    const auto graphs = corpus(rng, 3);
    for (const auto& c : graphs) {
        const SpectralEmbedding e = embed(c.g, c.k);
        const Matrix q = random_orthonormal(rng, c.k);
        const Matrix rotated = kernels::matmul(e.features, q);
        const double scale = std::max(1.0, max_abs(e.features));
        gram_dev = std::max(gram_dev, max_abs(kernels::matmul_bt(rotated, rotated) -
                                              kernels::matmul_bt(e.features, e.features)) / (scale * scale));
        const auto src = nodes_in_domain(c.g.labels, 1);
        const Matrix y = class_label_matrix(c.g.labels, src, c.g.num_classes());
        const Predictions a = predict(e.features, ridge_fit_nodes(e.features, src, y, 0.01));
        const Predictions b = predict(rotated, ridge_fit_nodes(rotated, src, y, 0.01));
        score_dev = std::max(score_dev, max_abs(a.scores - b.scores));
        // argmax may only differ where scores are tied to rounding
        for (std::size_t i = 0; i < a.classes.size(); ++i) {
            if (a.classes[i] == b.classes[i]) continue;
            const auto ca = static_cast<std::size_t>(a.classes[i] - 1);
            const auto cb = static_cast<std::size_t>(b.classes[i] - 1);
            if (std::abs(a.scores(i, ca) - a.scores(i, cb)) > 1e-9) ++argmax_changes;
        }
    }
    return {gram_dev <= 1e-10 && score_dev <= 1e-10 && argmax_changes == 0,
            fmt("%zu graphs, Gram deviation %.3g, score deviation %.3g", graphs.size(), gram_dev, score_dev)};
}

Outcome sign_determinism() {
    ThreadGuard guard;
    std::mt19937_64 rng(110);
    bool same = true;
    for (const auto& c : corpus(rng, 3)) {
        kernels::set_threads(1);
        const SpectralEmbedding a = embed(c.g, c.k);
        kernels::set_threads(8);
        const SpectralEmbedding b = embed(c.g, c.k);
        const SpectralEmbedding d = embed(c.g, c.k);
        same = same && a.features == b.features && b.features == d.features &&
               a.retained_eigenvalues == b.retained_eigenvalues;
    }
    return {same, same ? "bit-identical embeddings across repeats and thread counts" : "embeddings differ"};
}

// ---- probe ----

Outcome dual_path() {
    std::mt19937_64 rng(111);
    double worst = 0.0;
    const auto graphs = corpus(rng, 20);
    for (const auto& c : graphs) {
        const SpectralEmbedding e = embed(c.g, c.k);
        const auto src = nodes_in_domain(c.g.labels, 1);
        const auto tgt = nodes_outside_domain(c.g.labels, 1);
        for (double eta : {1e-3, 0.1}) {
            const Matrix y = class_label_matrix(c.g.labels, src, c.g.num_classes());
            const Predictions p = predict(e.features, ridge_fit_nodes(e.features, src, y, eta));
            const Matrix cf = closed_form_target_prediction(c.g, c.k, eta, src, tgt);
            for (std::size_t a = 0; a < tgt.size(); ++a)
                for (std::size_t j = 0; j < cf.cols(); ++j)
                    worst = std::max(worst, std::abs(p.scores(tgt[a], j) - cf(a, j)));
        }
    }
    return {worst <= 1e-8, fmt("%zu graphs x 2 eta, max deviation %.3g", graphs.size(), worst)};
}

Outcome scaling_law() {
    std::mt19937_64 rng(112);
    double worst = 0.0;
    int cases = 0;
    for (int r : {2, 3, 4})
        for (int m : {2, 3})
            for (int n : {1, 2, 5}) {
                const SbmParams p = draws::ordered_sbm(rng, r, m, n);
                const ExpectedGraph g = expected_adjacency(p);
                const PairGraph pg = to_pair_graph(g);
                const SpectralEmbedding e = embed(pg, default_k(p));
                const auto src = nodes_in_domain(g.labels, 1);
                const auto tgt = nodes_outside_domain(g.labels, 1);
                const Matrix y = class_label_matrix(g.labels, src, r);
                for (double xi : {1e-4, 1e-2, 0.1, 1.0, 10.0}) {
                    const double eta = eta_for_xi(sum_all(g.matrix), g.labels.size(), src.size(), xi);
                    const Predictions pr = predict(e.features, ridge_fit_nodes(e.features, src, y, eta));
                    const double f = ideal_scaling_factor(p, xi);
                    for (std::size_t x : tgt) {
                        const Vector yx = mean_zero_onehot(g.labels[x].class_id, r);
                        for (int j = 0; j < r; ++j)
                            worst = std::max(worst, std::abs(pr.scores(x, static_cast<std::size_t>(j)) - f * yx[static_cast<std::size_t>(j)]));
                    }
                    ++cases;
                }
            }
    return {worst <= 1e-8, fmt("%d (graph, xi) cases, max deviation from factor * y %.3g", cases, worst)};
}

Outcome theorem_guarantee() {
    std::mt19937_64 rng(113);
    double worst_margin = 1.0;
    for (int r : {2, 3, 4})
        for (int m : {2, 3})
            for (int n : {1, 2, 5}) {
                const SbmParams p = draws::ordered_sbm(rng, r, m, n);
                const double mass = sum_all(expected_adjacency(p).matrix);
                for (double eps : {0.1, 0.25, 0.45}) {
                    const double eta = theorem_eta_bound(p, eps);
                    const double xi = equivalent_xi(mass, p.num_nodes(), static_cast<std::size_t>(r * n), eta);
                    const double f = ideal_scaling_factor(p, xi);
                    const double emp = run_expected_trial(p, 0, eta).scaling_factor_empirical;
                    worst_margin = std::min({worst_margin, f - (1.0 - eps), emp - (1.0 - eps) + 1e-9});
                }
            }
    return {worst_margin >= -1e-12, fmt("smallest factor - (1 - eps) = %.3g", worst_margin)};
}

Outcome label_rows() {
    double worst = 0.0;
    bool shape = true;
    for (int r = 2; r <= 10; ++r)
        for (int c = 1; c <= r; ++c) {
            const Vector y = mean_zero_onehot(c, r);
            double s = 0.0;
            int top = 0;
            for (double v : y) {
                s += v;
                if (v == 1.0 - 1.0 / r) ++top;
            }
            worst = std::max(worst, std::abs(s));
            shape = shape && top == 1;
        }
    return {worst <= 1e-15 && shape, fmt("r = 2..10, max |row sum| %.3g", worst)};
}

// ---- baselines ----

Outcome erm_optimality() {
    std::mt19937_64 rng(114);
    std::normal_distribution<double> g;
    double worst = 0.0;
    int not_increasing = 0;
    for (int t = 0; t < 50; ++t) {
        const AugmentationKernel k = build_separation_kernel(draws::separation_ordered(rng));
        const PointwisePredictor f = erm_minimizer(k);
        // per-node optimum: weighted sum of ||e||^2 minus ||weighted mean||^2 * mass
        double analytic = 0.0;
        for (std::size_t x = 0; x < 8; ++x) {
            const double w1 = 0.5 * k.kernel(0, x), w2 = 0.5 * k.kernel(1, x);
            if (w1 + w2 == 0.0) continue;
            analytic += (w1 + w2) - (w1 * w1 + w2 * w2) / (w1 + w2);
        }
        worst = std::max(worst, std::abs(erm_objective(k, f) - analytic));
        const double base = erm_objective(k, f);
        for (int p = 0; p < 200; ++p) {
            PointwisePredictor h = f;
            for (std::size_t x = 0; x < 8; ++x)
                if (h.reachable[x])
                    for (double& v : h.scores.row(x)) v += 1e-3 * g(rng);
            if (!(erm_objective(k, h) > base)) ++not_increasing;
        }
    }
    return {worst <= 1e-12 && not_increasing == 0,
            fmt("50 kernels, objective vs analytic optimum %.3g, %d of 10000 perturbations failed to increase", worst,
                not_increasing)};
}

Outcome erm_reachable() {
    std::mt19937_64 rng(115);
    int bad = 0;
    const std::vector<std::size_t> reach{2, 3, 6, 7};
    for (int t = 0; t < 100; ++t) {
        const AugmentationKernel k = build_separation_kernel(
            t % 2 == 0 ? draws::separation_ordered(rng) : draws::separation_zero_beta_gamma(rng));
        const auto truth = class_ids(k.labels);
        const auto adv = erm_minimizer(k).classes();
        const auto orc = erm_minimizer(k, 1, Completion::oracle).classes();
        if (zero_one_error(adv, truth, reach) != 0.0) ++bad;
        if (zero_one_error(adv, truth, separation_target_nodes()) != 1.0 / 3.0) ++bad;
        if (zero_one_error(orc, truth, separation_target_nodes()) != 0.0) ++bad;
    }
    return {bad == 0, fmt("100 kernels, %d failures (reachable correct, error 1/3, oracle 0)", bad)};
}

Outcome dann_bound() {
    std::mt19937_64 rng(116);
    std::uniform_real_distribution<double> u(0.1, 5.0);
    std::normal_distribution<double> g;
    double term_dev = 0.0;
    int above = 0, below = 0;
    for (int t = 0; t < 30; ++t) {
        const AugmentationKernel k = build_separation_kernel(
            t % 2 == 0 ? draws::separation_ordered(rng) : draws::separation_zero_beta_gamma(rng));
        const double lambda = u(rng);
        const DannResult d = dann_construction(k, lambda);
        term_dev = std::max(term_dev, std::abs(d.domain_term - 3.0 * lambda / 8.0));
        const std::vector<int> swapped{1, 0, 1, 0, 0, 1, 1, 0};
        term_dev = std::max(term_dev, std::abs(dann_domain_term(k, swapped, lambda) - 3.0 * lambda / 8.0));
        for (int c = 0; c < 100; ++c) {
            const int points = std::uniform_int_distribution<int>(1, 8)(rng);
            std::vector<int> enc(8);
            for (int& z : enc) z = std::uniform_int_distribution<int>(0, points - 1)(rng);
            if (dann_domain_term(k, enc, lambda) > 3.0 * lambda / 8.0 + 1e-12) ++above;
            Matrix head = d.domain_head;
            for (double& v : head.data()) v += 0.1 * g(rng);
            if (dann_domain_loss(k, d.encoder, head, lambda) < d.domain_term - 1e-12) ++below;
        }
    }
    return {term_dev <= 1e-12 && above == 0 && below == 0,
            fmt("|term - 3 lambda/8| <= %.3g; %d challenger encoders above, %d heads below", term_dev, above, below)};
}

Outcome eigen_ordering() {
    std::mt19937_64 rng(117);
    int accepted = 0, bad = 0;
    double worst = 0.0;
    const Matrix u = separation_basis();
    while (accepted < 500) {
        const SeparationPairParams p = separation_pair_params(draws::separation_ordered(rng));
        if (!(p.alpha > p.gamma + p.beta)) continue;
        ++accepted;
        const Matrix s = separation_block_matrix(p);
        const auto l = separation_closed_form_eigenvalues(p);
        for (std::size_t j = 0; j < 8; ++j) {
            const Vector col = u.column(j);
            const Vector su = kernels::matvec(s, col);
            for (std::size_t i = 0; i < 8; ++i) worst = std::max(worst, std::abs(su[i] - l[j] * col[i]));
        }
        Vector sorted(l.begin(), l.end());
        std::sort(sorted.begin(), sorted.end(), std::greater<>());
        const Vector numeric = symmetric_eigenvalues(s);
        for (std::size_t i = 0; i < 8; ++i) worst = std::max(worst, std::abs(sorted[i] - numeric[i]));
        const bool order = l[0] > l[7] && l[7] > l[1] && l[1] == l[2] && l[2] > l[5] && l[7] > l[3] && l[3] == l[4];
        if (!order) ++bad;
    }
    return {bad == 0 && worst <= 1e-12,
            fmt("500 draws with alpha > gamma + beta, %d ordering violations, eigen residual %.3g", bad, worst)};
}

Outcome separation_report() {
    const SeparationReport r = run_separation({0.6, 0.2, 0.0, 0.0}, 1.0, 0.01);
    const bool ok = r.erm_err == 1.0 / 3.0 && r.dann_err == 1.0 / 3.0 && r.erm_err_oracle_completion == 0.0 &&
                    std::abs(r.dann_domain_term - 0.375) <= 1e-12 && r.condition_alpha_gt_gamma_plus_beta;
    return {ok, fmt("erm %.4f, dann %.4f, oracle %.4f, contrastive %.4f (degenerate: %s)", r.erm_err, r.dann_err,
                    r.erm_err_oracle_completion, r.contrastive_err, r.contrastive_degenerate ? "yes" : "no")};
}

// ---- experiments ----

Outcome sweep_determinism() {
    ThreadGuard guard;
    SweepSpec spec;
    spec.base = {2, 2, 12, 0.6, 0.4, 0.3, 0.1};
    spec.vary = "alpha";
    spec.grid = linear_grid(0.2, 0.5, 3);
    spec.trials = 3;
    spec.base_seed = 9;
    std::string first;
    bool same = true;
    for (int t : {1, 2, 8}) {
        kernels::set_threads(t);
        const std::string csv = sweep_csv(sweep(spec));
        if (first.empty()) first = csv;
        same = same && csv == first;
    }
    return {same, same ? "byte-identical CSV for 1, 2 and 8 threads" : "CSV differs across thread counts"};
}

Outcome fit_exact() {
    std::mt19937_64 rng(118);
    std::uniform_real_distribution<double> w(-20.0, 20.0), ratio(1.1, 6.0);
    double worst = 0.0, worst_r2 = 0.0;
    for (int t = 0; t < 100; ++t) {
        const double w1 = w(rng), w2 = w(rng);
        std::vector<ConnectivityRecord> recs;
        for (int i = 0; i < 12; ++i) {
            const double a = ratio(rng), b = ratio(rng);
            recs.push_back({"r" + std::to_string(i), std::pow(a, w1) * std::pow(b, w2), a, b, 1.0});
        }
        const FitResult f = fit_connectivity(recs);
        worst = std::max({worst, std::abs(f.w1 - w1), std::abs(f.w2 - w2)});
        worst_r2 = std::max(worst_r2, std::abs(f.r_squared - 1.0));
    }
    bool collinear_rejected = false;
    try {
        fit_connectivity({{"a", 0.5, 2.0, 2.0, 1.0}, {"b", 0.7, 3.0, 3.0, 1.0}, {"c", 0.2, 4.0, 4.0, 1.0}});
    } catch (const ValidationError&) {
        collinear_rejected = true;
    }
    return {worst <= 1e-9 && worst_r2 <= 1e-12 && collinear_rejected,
            fmt("100 noiseless fits, max weight error %.3g, max |R^2 - 1| %.3g, collinear input rejected: %s", worst,
                worst_r2, collinear_rejected ? "yes" : "no")};
}

Outcome ablation() {
    const SbmParams p{2, 2, 15, 0.6, 0.4, 0.3, 0.1};
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const SampledGraph g = sample_adjacency(p, seed);
        const SampledGraph same = ablate_cross_edges(g, 0.0, seed);
        ok = ok && same.adjacency == g.adjacency && same.edge_count == g.edge_count;
        const std::uint64_t cross = count_cross_domain_edges(g);
        const SampledGraph part = ablate_cross_edges(g, 0.5, seed);
        ok = ok && (cross == 0 || part.edge_count < g.edge_count);
        ok = ok && count_cross_domain_edges(part) == cross - static_cast<std::uint64_t>(std::llround(0.5 * static_cast<double>(cross)));
        ok = ok && count_cross_domain_edges(ablate_cross_edges(g, 1.0, seed)) == 0;
        ok = ok && asymmetry(part.adjacency) == 0.0;
    }
    return {ok, "fraction 0 is the identity, 0.5 removes half, 1 removes every cross-domain edge"};
}

double mean_error(const SbmParams& p, double eta, int trials, std::uint64_t base, std::uint64_t point) {
    double s = 0.0;
    for (int t = 0; t < trials; ++t)
        s += run_sbm_trial(p, 0, eta, derive_seed(base, point, static_cast<std::uint64_t>(t))).target_error;
    return s / trials;
}

Outcome trend_in_n() {
    Vector errs;
    std::string d;
    for (int n : {10, 40, 160}) {
        errs.push_back(mean_error({2, 2, n, 0.5, 0.35, 0.35, 0.2}, 0.01, 10, 11, static_cast<std::uint64_t>(n)));
        d += fmt("n=%d: %.4f ", n, errs.back());
    }
    const bool ok = errs[1] <= errs[0] + 0.005 && errs[2] <= errs[1] + 0.005 && errs[2] <= errs[0];
    return {ok, "mean target error " + d};
}

Outcome trend_in_gap() {
    Vector errs;
    std::string d;
    int idx = 0;
    for (double alpha : {0.22, 0.3, 0.4}) {
        errs.push_back(mean_error({2, 2, 40, 0.6, alpha, 0.4, 0.2}, 0.01, 10, 12, static_cast<std::uint64_t>(idx++)));
        d += fmt("alpha=%.2f: %.4f ", alpha, errs.back());
    }
    const bool ok = errs[1] <= errs[0] + 0.005 && errs[2] <= errs[1] + 0.005 && errs[2] <= errs[0];
    return {ok, "mean target error " + d};
}

Outcome domain_separable() {
    double s = 0.0, t = 0.0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const TrialRecord r = run_sbm_trial({2, 2, 50, 0.6, 0.4, 0.4, 0.1}, 0, 0.01, seed);
        s += r.domain_error;
        t += r.target_error;
    }
    s /= 5.0;
    t /= 5.0;
    return {s <= 0.05 && t <= 0.05, fmt("mean domain error %.4f, mean target error %.4f", s, t)};
}

// ---- linalg ----

Outcome kernels_match() {
    std::mt19937_64 rng(119);
    bool same = true;
    for (std::size_t n : {5, 63, 300}) {
        const Matrix a = random_symmetric(rng, n), b = random_symmetric(rng, n);
        const Vector x = a.column(0);
        same = same && kernels::matmul(a, b) == kernels::serial::matmul(a, b);
        same = same && kernels::matmul_bt(a, b) == kernels::serial::matmul_bt(a, b);
        same = same && kernels::matmul_at(a, b) == kernels::serial::matmul_at(a, b);
        same = same && kernels::matvec(a, x) == kernels::serial::matvec(a, x);
    }
    return {same, same ? "parallel kernels bit-identical to serial reference" : "parallel and serial kernels differ"};
}

Outcome solver_agreement() {
    std::mt19937_64 rng(120);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        const std::size_t n = std::uniform_int_distribution<std::size_t>(2, 30)(rng);
        const Matrix m = random_symmetric(rng, n);
        const Vector a = symmetric_eigenvalues(m);
        const Vector b = jacobi_eigensystem(m).eigenvalues;
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return {worst <= 1e-10, fmt("tridiagonal QL vs Jacobi, max eigenvalue gap %.3g", worst)};
}

const std::vector<Entry>& registry() {
    static const std::vector<Entry> entries = {
        {"graph_core", "pair_graph_symmetric_nonnegative_normalized", pair_graph_valid},
        {"graph_core", "monotonicity_transfer", monotonicity_transfer},
        {"graph_core", "closed_form_matches_pair_graph", closed_form_matches_pair_graph},
        {"graph_core", "separation_reachability", separation_reachability},
        {"sbm", "closed_form_spectrum", [] { return spectrum_grid(2, 121); }},
        {"sbm", "sampling_reproducible", sampling_reproducible},
        {"sbm", "operator_norm_concentration", concentration},
        {"sbm", "constant_eigenvector", constant_eigenvector},
        {"spectral", "reconstruction_optimality", reconstruction_optimality},
        {"spectral", "gram_identity", gram_identity},
        {"spectral", "loss_equality", loss_equality},
        {"spectral", "rotation_invariance", rotation_invariance},
        {"spectral", "sign_determinism", sign_determinism},
        {"probe", "dual_path_equivalence", dual_path},
        {"probe", "scaling_factor_law", scaling_law},
        {"probe", "theorem_guarantee", theorem_guarantee},
        {"probe", "label_rows_sum_to_zero", label_rows},
        {"baselines", "erm_optimality", erm_optimality},
        {"baselines", "erm_reachable_and_completion", erm_reachable},
        {"baselines", "dann_domain_term_bound", dann_bound},
        {"baselines", "eigenvalue_ordering", eigen_ordering},
        {"baselines", "separation_report", separation_report},
        {"experiments", "sweep_determinism", sweep_determinism},
        {"experiments", "fit_exact", fit_exact},
        {"experiments", "ablation", ablation},
        {"experiments", "trend_in_n", trend_in_n},
        {"experiments", "trend_in_gap", trend_in_gap},
        {"experiments", "domain_separable", domain_separable},
        {"linalg", "parallel_matches_serial", kernels_match},
        {"linalg", "tridiagonal_matches_jacobi", solver_agreement},
    };
    return entries;
}

}  // namespace

std::vector<std::string> verify_suites() {
    std::vector<std::string> out;
    for (const auto& e : registry())
        if (out.empty() || out.back() != e.suite) out.push_back(e.suite);
    return out;
}

std::vector<CheckResult> run_verify(std::string_view suite) {
    bool known = suite == "all";
    for (const auto& s : verify_suites()) known = known || s == suite;
    if (!known) throw ValidationError("unknown suite '" + std::string(suite) + "'");
    std::vector<CheckResult> out;
    for (const auto& e : registry()) {
        if (suite != "all" && suite != e.suite) continue;
        CheckResult r{e.suite, e.name, false, ""};
        try {
            const Outcome o = e.run();
            r.passed = o.passed;
            r.detail = o.detail;
        } catch (const std::exception& ex) {
            r.detail = std::string("exception: ") + ex.what();
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::string format_report(const std::vector<CheckResult>& results) {
    std::string out;
    int passed = 0;
    for (const auto& r : results) {
        out += (r.passed ? "PASS " : "FAIL ") + r.suite + "/" + r.name + ": " + r.detail + "\n";
        passed += r.passed ? 1 : 0;
    }
    out += fmt("%d/%zu checks passed\n", passed, results.size());
    return out;
}

bool all_passed(const std::vector<CheckResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

}  // namespace connectgraph
