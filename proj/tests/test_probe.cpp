#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "connectgraph/error.hpp"
#include "connectgraph/graph_core.hpp"
#include "connectgraph/kernels.hpp"
#include "connectgraph/probe.hpp"
#include "connectgraph/sbm.hpp"
#include "connectgraph/spectral.hpp"

using namespace connectgraph;

namespace {

const std::vector<std::size_t> kToySource{0, 1};
const std::vector<std::size_t> kToyTarget{2, 3};

SpectralEmbedding toy_embedding() {
    return embed(positive_pair_graph(build_toy_kernel({0.7, 0.15, 0.1, 0.05})), 3);
}

// Normal equations solved by Gauss-Jordan, separately from the library's Cholesky.
Matrix ridge_reference(const Matrix& f, const Matrix& y, double reg) {
    const std::size_t k = f.cols(), r = y.cols();
    Matrix aug(k, k + r);
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j)
            for (std::size_t s = 0; s < f.rows(); ++s) aug(i, j) += f(s, i) * f(s, j);
        aug(i, i) += reg;
        for (std::size_t c = 0; c < r; ++c)
            for (std::size_t s = 0; s < f.rows(); ++s) aug(i, k + c) += f(s, i) * y(s, c);
    }
    for (std::size_t p = 0; p < k; ++p) {
        const double piv = aug(p, p);
        for (std::size_t j = 0; j < k + r; ++j) aug(p, j) /= piv;
        for (std::size_t i = 0; i < k; ++i) {
            if (i == p) continue;
            const double f0 = aug(i, p);
            for (std::size_t j = 0; j < k + r; ++j) aug(i, j) -= f0 * aug(p, j);
        }
    }
    Matrix b(k, r);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t c = 0; c < r; ++c) b(i, c) = aug(i, k + c);
    return b;
}

Matrix rotation(std::size_t k, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix q(k, k);
    for (std::size_t j = 0; j < k; ++j) {
        Vector v(k);
        for (double& x : v) x = g(rng);
        for (std::size_t p = 0; p < j; ++p) {
            double s = 0.0;
            for (std::size_t i = 0; i < k; ++i) s += q(i, p) * v[i];
            for (std::size_t i = 0; i < k; ++i) v[i] -= s * q(i, p);
        }
        const double nrm = norm2(v);
        for (std::size_t i = 0; i < k; ++i) q(i, j) = v[i] / nrm;
    }
    return q;
}

}  // namespace

TEST(Probe, MeanZeroOnehot) {
    EXPECT_EQ(mean_zero_onehot(1, 2), (Vector{0.5, -0.5}));
    EXPECT_EQ(mean_zero_onehot(2, 2), (Vector{-0.5, 0.5}));
    EXPECT_EQ(mean_zero_onehot(3, 4), (Vector{-0.25, -0.25, 0.75, -0.25}));
    EXPECT_THROW(mean_zero_onehot(0, 2), ValidationError);
    EXPECT_THROW(mean_zero_onehot(3, 2), ValidationError);
}

TEST(Probe, LabelRowsSumToZero) {
    const SbmParams p{4, 3, 2, 0.5, 0.3, 0.2, 0.1};
    const auto labels = p.labels();
    std::vector<std::size_t> all(labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    for (const Matrix& y : {class_label_matrix(labels, all, 4), domain_label_matrix(labels, all, 3)}) {
        for (std::size_t i = 0; i < y.rows(); ++i) {
            double s = 0.0;
            int top = 0;
            for (double v : y.row(i)) {
                s += v;
                top += std::abs(v - (1.0 - 1.0 / static_cast<double>(y.cols()))) < 1e-15;
            }
            EXPECT_NEAR(s, 0.0, 1e-15);
            EXPECT_EQ(top, 1);
        }
    }
}

TEST(Probe, RidgeLimits) {
    const Matrix f{{1.0, 0.0}};
    const Matrix y{{0.5, -0.5}};
    const auto tight = ridge_fit(f, y, 1e-12);
    const auto s = predict(f, tight).scores;
    EXPECT_NEAR(s(0, 0), 0.5, 1e-9);
    EXPECT_NEAR(s(0, 1), -0.5, 1e-9);
    const auto loose = ridge_fit(f, y, 1e12);
    EXPECT_LT(max_abs(loose.weights), 1e-11);
    EXPECT_THROW(ridge_fit(f, y, 0.0), ValidationError);
    EXPECT_THROW(ridge_fit(f, y, -1.0), ValidationError);
}

TEST(Probe, RidgeMatchesReference) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        const std::size_t s = 3 + t % 7, k = 1 + t % 4, r = 2 + t % 3;
        Matrix f(s, k), y(s, r);
        for (double& v : f.data()) v = u(rng);
        for (double& v : y.data()) v = u(rng);
        const double eta = 0.01 * (1 + t);
        const auto pw = ridge_fit(f, y, eta);
        EXPECT_LT(max_abs(pw.weights - ridge_reference(f, y, eta * static_cast<double>(s))), 1e-10);
    }
}

TEST(Probe, PredictAndArgmax) {
    const Matrix f{{1, 2}, {3, 4}};
    ProbeWeights zero{Matrix(2, 3), 0.1, {}};
    const auto p = predict(f, zero);
    EXPECT_EQ(p.classes, (std::vector<int>{1, 1}));
    EXPECT_EQ(max_abs(p.scores), 0.0);
    EXPECT_EQ(argmax_rows(Matrix{{0, 2, 2}, {3, 1, 3}, {-1, -2, -0.5}}), (std::vector<int>{2, 1, 3}));
    ProbeWeights wrong{Matrix(3, 2), 0.1, {}};
    EXPECT_THROW(predict(f, wrong), ValidationError);
}

TEST(Probe, ToyFavorableZeroTargetError) {
    const auto emb = toy_embedding();
    const auto labels = build_toy_kernel({0.7, 0.15, 0.1, 0.05}).labels;
    const auto pw = ridge_fit_nodes(emb.features, kToySource, class_label_matrix(labels, kToySource, 2), 0.01);
    const auto pred = predict(emb.features, pw);
    EXPECT_EQ(pred.classes, (std::vector<int>{1, 2, 1, 2}));
    EXPECT_EQ(zero_one_error(pred.classes, class_ids(labels), kToyTarget), 0.0);
    const auto dom = domain_probe(emb.features, labels, 0.01);
    EXPECT_EQ(dom.domain_error, 0.0);
    EXPECT_FALSE(dom.extension);
}

TEST(Probe, MaxMarginAgreesWithRidgeOnToy) {
    // two source points: the hard-margin separator is the perpendicular bisector
    const auto emb = toy_embedding();
    const auto labels = build_toy_kernel({0.7, 0.15, 0.1, 0.05}).labels;
    const auto pw = ridge_fit_nodes(emb.features, kToySource, class_label_matrix(labels, kToySource, 2), 0.01);
    const auto ridge = predict(emb.features, pw).classes;
    for (std::size_t x = 0; x < 4; ++x) {
        double side = 0.0;
        for (std::size_t c = 0; c < 3; ++c) {
            const double w = emb.features(0, c) - emb.features(1, c);
            side += w * (emb.features(x, c) - 0.5 * (emb.features(0, c) + emb.features(1, c)));
        }
        EXPECT_EQ(side > 0 ? 1 : 2, ridge[x]);
    }
}

TEST(Probe, RotationInvariance) {
    std::mt19937_64 rng(6);
    const auto g = to_pair_graph(sample_adjacency({2, 2, 15, 0.6, 0.4, 0.3, 0.1}, 3));
    const auto emb = embed(g, 3);
    const auto src = nodes_in_domain(g.labels, 1);
    const Matrix y = class_label_matrix(g.labels, src, 2);
    const auto base = predict(emb.features, ridge_fit_nodes(emb.features, src, y, 0.05));
    for (int t = 0; t < 5; ++t) {
        const Matrix fq = kernels::matmul(emb.features, rotation(3, rng));
        const auto rot = predict(fq, ridge_fit_nodes(fq, src, y, 0.05));
        EXPECT_LT(max_abs(rot.scores - base.scores), 1e-10);
        EXPECT_EQ(rot.classes, base.classes);
    }
}

TEST(Probe, DualPathEquivalence) {
    std::vector<PairGraph> graphs{positive_pair_graph(build_toy_kernel({0.7, 0.15, 0.1, 0.05})),
                                  to_pair_graph(expected_adjacency({3, 2, 3, 0.7, 0.4, 0.3, 0.1})),
                                  to_pair_graph(sample_adjacency({2, 3, 8, 0.6, 0.4, 0.3, 0.1}, 5))};
    for (const auto& g : graphs) {
        const std::size_t k = static_cast<std::size_t>(g.num_classes() + g.num_domains() - 1);
        const auto emb = embed(g, k);
        const auto src = nodes_in_domain(g.labels, 1);
        const auto tgt = nodes_outside_domain(g.labels, 1);
        for (double eta : {1e-3, 0.1, 1.0}) {
            const auto pw = ridge_fit_nodes(emb.features, src, class_label_matrix(g.labels, src, g.num_classes()), eta);
            const Matrix ridge = predict(emb.features, pw).scores.select_rows(tgt);
            const Matrix closed = closed_form_target_prediction(g, k, eta, src, tgt);
            EXPECT_LT(max_abs(ridge - closed), 1e-8);
        }
    }
}

TEST(Probe, ClosedFormVanishesForLargeEta) {
    const auto g = positive_pair_graph(build_toy_kernel({0.7, 0.15, 0.1, 0.05}));
    EXPECT_LT(max_abs(closed_form_target_prediction(g, 3, 1e12, kToySource, kToyTarget)), 1e-10);
    EXPECT_THROW(closed_form_target_prediction(g, 3, 0.0, kToySource, kToyTarget), ValidationError);
}

TEST(Probe, ScalingFactorLaw) {
    for (int r : {2, 3})
        for (int m : {2, 3})
            for (int n : {1, 4}) {
                const SbmParams p{r, m, n, 0.7, 0.45, 0.3, 0.1};
                const auto e = expected_adjacency(p);
                const auto g = to_pair_graph(e);
                const auto src = nodes_in_domain(g.labels, 1);
                const auto tgt = nodes_outside_domain(g.labels, 1);
                const double mass = sum_all(e.matrix);
                for (double xi : {0.01, 0.3, 2.0}) {
                    const double eta = eta_for_xi(mass, p.num_nodes(), src.size(), xi);
                    const Matrix pred = closed_form_target_prediction(
                        g, static_cast<std::size_t>(r + m - 1), eta, src, tgt);
                    // lambda_c / (lambda_c + m xi) from the block formulas, computed here directly
                    const double lc = n * (p.rho - p.beta + (m - 1) * p.alpha - (m - 1) * p.gamma);
                    const double s = lc / (lc + m * xi);
                    EXPECT_NEAR(s, ideal_scaling_factor(p, xi), 1e-14);
                    for (std::size_t i = 0; i < tgt.size(); ++i) {
                        const Vector y = mean_zero_onehot(g.labels[tgt[i]].class_id, r);
                        for (int c = 0; c < r; ++c) EXPECT_NEAR(pred(i, c), s * y[c], 1e-8);
                    }
                }
            }
}

TEST(Probe, TheoremGuaranteeOnExpectedGraphs) {
    for (double eps : {0.05, 0.25, 0.45}) {
        const SbmParams p{2, 2, 3, 0.8, 0.5, 0.35, 0.1};
        const double eta = theorem_eta_bound(p, eps);
        EXPECT_GE(ideal_scaling_factor(p, eta), 1.0 - eps - 1e-12);
    }
}

TEST(Probe, ZeroOneError) {
    const std::vector<int> truth{1, 2, 1, 2};
    const std::vector<std::size_t> all{0, 1, 2, 3};
    EXPECT_EQ(zero_one_error(truth, truth, all), 0.0);
    EXPECT_EQ(zero_one_error(std::vector<int>{2, 1, 2, 1}, truth, all), 1.0);
    EXPECT_DOUBLE_EQ(zero_one_error(std::vector<int>{1, 1, 1, 1}, truth, all), 0.5);
    EXPECT_THROW(zero_one_error(truth, truth, std::vector<std::size_t>{}), ValidationError);
}

TEST(Probe, DomainProbeIndistinguishable) {
    // features depend on class only
    const auto labels = SbmParams{2, 2, 3, 0.5, 0.3, 0.2, 0.1}.labels();
    Matrix f(labels.size(), 2);
    for (std::size_t i = 0; i < labels.size(); ++i) f(i, labels[i].class_id - 1) = 1.0;
    EXPECT_DOUBLE_EQ(domain_probe(f, labels, 0.1).domain_error, 0.5);
    std::vector<NodeLabel> missing{{1, 1}, {2, 2}, {1, 1}, {2, 1}};
    EXPECT_THROW(domain_probe(Matrix(4, 2, 1.0), missing, 0.1), ValidationError);
}

TEST(Probe, DomainProbeSbm) {
    const SbmParams p{3, 2, 200, 0.6, 0.4, 0.4, 0.1};
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto emb = embed_sampled(sample_adjacency(p, seed), 4);
        EXPECT_LE(domain_probe(emb.features, p.labels(), 0.01).domain_error, 0.02) << "seed " << seed;
    }
}

TEST(Probe, Cosines) {
    const Matrix a{{1, 0}, {0, 1}, {0, 0}};
    const Matrix d{{0}, {0}, {1}};
    const auto c = disentanglement_cosines(a, a, d);
    EXPECT_DOUBLE_EQ(c.src_vs_tgt, 1.0);
    EXPECT_DOUBLE_EQ(c.src_vs_dom, 0.0);
    EXPECT_DOUBLE_EQ(c.tgt_vs_dom, 0.0);
    EXPECT_NEAR(cosine(Vector{1, 1}, Vector{1, 0}), std::sqrt(0.5), 1e-15);
    EXPECT_THROW(cosine(Vector{0, 0}, Vector{1, 0}), NumericalError);
    EXPECT_THROW(disentanglement_cosines(a, a, Matrix(2, 1)), ValidationError);
}

TEST(Probe, ExpectedGraphCosinesAreOrthogonal) {
    const SbmParams p{3, 2, 4, 0.7, 0.45, 0.3, 0.1};
    const auto g = to_pair_graph(expected_adjacency(p));
    const auto emb = embed(g, 4);
    const auto src = nodes_in_domain(g.labels, 1);
    const auto tgt = nodes_outside_domain(g.labels, 1);
    const auto ps = ridge_fit_nodes(emb.features, src, class_label_matrix(g.labels, src, 3), 0.01);
    const auto pt = ridge_fit_nodes(emb.features, tgt, class_label_matrix(g.labels, tgt, 3), 0.01);
    const auto dom = domain_probe(emb.features, g.labels, 0.01);
    const auto c = disentanglement_cosines(ps.weights, pt.weights, dom.weights.weights);
    EXPECT_NEAR(c.src_vs_dom, 0.0, 1e-8);
    EXPECT_NEAR(c.tgt_vs_dom, 0.0, 1e-8);
    EXPECT_NEAR(c.src_vs_tgt, 1.0, 1e-8);
}

TEST(Probe, SymmetricPinv) {
    const Matrix m{{2, 0, 0}, {0, 0, 0}, {0, 0, 4}};
    const Matrix pinv = symmetric_pinv(m);
    EXPECT_NEAR(pinv(0, 0), 0.5, 1e-15);
    EXPECT_NEAR(pinv(1, 1), 0.0, 1e-15);
    EXPECT_NEAR(pinv(2, 2), 0.25, 1e-15);
    const Matrix spd{{4, 1}, {1, 3}};
    const Matrix x = cholesky_solve(spd, Matrix::identity(2));
    EXPECT_LT(max_abs(kernels::matmul(spd, x) - Matrix::identity(2)), 1e-15);
}
