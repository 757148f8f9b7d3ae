#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "connectgraph/eigen.hpp"
#include "connectgraph/error.hpp"
#include "connectgraph/graph_core.hpp"
#include "connectgraph/kernels.hpp"
#include "connectgraph/sbm.hpp"
#include "connectgraph/spectral.hpp"

using namespace connectgraph;

namespace {

PairGraph toy_graph() { return positive_pair_graph(build_toy_kernel({0.7, 0.15, 0.1, 0.05})); }

Matrix gram(const Matrix& f) {
    Matrix g(f.rows(), f.rows());
    for (std::size_t i = 0; i < f.rows(); ++i)
        for (std::size_t j = 0; j < f.rows(); ++j)
            for (std::size_t c = 0; c < f.cols(); ++c) g(i, j) += f(i, c) * f(j, c);
    return g;
}

Matrix random_orthogonal(std::size_t k, std::mt19937_64& rng) {
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

// Loss by explicit expectation over sampled pairs of the finite population.
double loss_by_expectation(const PairGraph& g, const Matrix& f) {
    const std::size_t n = g.n_nodes;
    Vector w(n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) w[x] += g.weights(x, y);
    double pos = 0.0, neg = 0.0;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            double d = 0.0;
            for (std::size_t c = 0; c < f.cols(); ++c) d += f(x, c) * f(y, c);
            pos += g.weights(x, y) * d;
            neg += w[x] * w[y] * d * d;
        }
    return -2.0 * pos + neg;
}

}  // namespace

TEST(Spectral, OperatorNorm) {
    EXPECT_NEAR(operator_norm(Matrix::identity(5)), 1.0, 1e-14);
    EXPECT_NEAR(operator_norm(Matrix::identity(5) * -2.0), 2.0, 1e-14);
    const auto e = expected_adjacency({2, 2, 1, 0.13125, 0.055, 0.03875, 0.025});
    EXPECT_NEAR(operator_norm(e.matrix), 0.25, 1e-14);
}

TEST(Spectral, RankKExamples) {
    const Matrix m{{2, 1, 0}, {1, 3, 1}, {0, 1, 4}};
    EXPECT_LT(frobenius_norm(rank_k_approx(m, 3) - m), 1e-10);
    const Vector v{1, -2, 3};
    Matrix vv(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) vv(i, j) = v[i] * v[j];
    EXPECT_LT(frobenius_norm(rank_k_approx(vv, 1) - vv), 1e-12);
    EXPECT_THROW(rank_k_approx(m, 0), ValidationError);
    EXPECT_THROW(rank_k_approx(m, 4), ValidationError);

    // toy matrix: the dropped part is lambda_d times a unit projector
    const auto toy = expected_adjacency({2, 2, 1, 0.13125, 0.055, 0.03875, 0.025}).matrix;
    const Matrix rest = toy - rank_k_approx(toy, 3);
    EXPECT_NEAR(operator_norm(rest), 0.0625, 1e-12);
    EXPECT_NEAR(frobenius_norm(rest), 0.0625, 1e-12);
}

TEST(Spectral, ReconstructionOptimality) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t n : {5u, 12u, 40u}) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i; j < n; ++j) m(i, j) = m(j, i) = u(rng);
        const Vector values = symmetric_eigenvalues(m);
        for (std::size_t k = 1; k <= n; k += 3) {
            // descending order here is by signed value, so the dropped tail holds the rest
            double tail = 0.0;
            for (std::size_t i = k; i < n; ++i) tail += values[i] * values[i];
            const double err = frobenius_norm(m - rank_k_approx(m, k));
            EXPECT_NEAR(err * err, tail, 1e-9);
        }
    }
}

TEST(Spectral, ToyEmbeddingPattern) {
    const auto g = toy_graph();
    const auto emb = embed(g, 3);
    const Vector lam{0.25, 0.1225, 0.09};
    ASSERT_EQ(emb.features.rows(), 4u);
    for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_NEAR(emb.retained_eigenvalues[j], 16 * lam[j], 1e-12);
        for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(emb.features(i, j)), 2 * std::sqrt(lam[j]), 1e-12);
    }
    // class direction second (alternates in class), domain direction third
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_GT(emb.features(i, 0), 0.0);
        const double cls = (i % 2 == 0) ? 1.0 : -1.0;
        const double dom = (i < 2) ? 1.0 : -1.0;
        EXPECT_GT(emb.features(i, 1) * cls * emb.features(0, 1), 0.0);
        EXPECT_GT(emb.features(i, 2) * dom * emb.features(0, 2), 0.0);
    }
    EXPECT_FALSE(emb.tie_warning);
}

TEST(Spectral, GramIdentityAndLossEquality) {
    const auto g = toy_graph();
    for (std::size_t k = 1; k <= 4; ++k) {
        const auto emb = embed(g, k);
        Matrix scaled = g.weights * 16.0;
        EXPECT_LT(frobenius_norm(gram(emb.features) - rank_k_approx(scaled, k)), 1e-8 * 16);
        const double a = loss_by_expectation(g, emb.features);
        EXPECT_NEAR(spectral_contrastive_loss(g, emb.features), a, 1e-12);
        EXPECT_NEAR(spectral_loss_matrix_form(g, emb.features), a, 1e-9);
    }
}

TEST(Spectral, KOneIsTopEigenvector) {
    const auto g = to_pair_graph(expected_adjacency({3, 2, 2, 0.7, 0.3, 0.2, 0.1}));
    const auto emb = embed(g, 1);
    const double first = emb.features(0, 0);
    for (std::size_t i = 0; i < emb.features.rows(); ++i) EXPECT_NEAR(emb.features(i, 0), first, 1e-12);
}

TEST(Spectral, CompleteGraphGivesUnitFeature) {
    const auto g = sample_adjacency({2, 2, 5, 1, 1, 1, 1}, 3);
    const auto emb = embed_sampled(g, 1);
    for (std::size_t i = 0; i < g.adjacency.rows(); ++i) EXPECT_NEAR(emb.features(i, 0), 1.0, 1e-12);
    EXPECT_THROW(embed_sampled(sample_adjacency({2, 2, 5, 0, 0, 0, 0}, 3), 1), ValidationError);
}

TEST(Spectral, ExpectedGraphResidual) {
    const SbmParams p{3, 2, 4, 0.6, 0.4, 0.3, 0.1};
    const auto e = expected_adjacency(p);
    const auto g = to_pair_graph(e);
    const std::size_t k = 4;
    const auto emb = embed(g, k);
    const double n = static_cast<double>(p.num_nodes());
    const double mass = sum_all(e.matrix);
    const Matrix target = g.weights * (n * n);
    const double res = frobenius_norm(target - gram(emb.features));
    // dropped part: lambda_d of N^2 E[A] / |E| with multiplicity (m-1)(r-1)
    const double ld = closed_form_spectrum(p).lambda_d * n * n / mass;
    EXPECT_NEAR(res * res, ld * ld * 2.0, 1e-8 * n * n);
}

TEST(Spectral, SeparationEmbeddingSpansParity) {
    // the top two eigenvalues coincide here, so only the span is determined
    const auto g = positive_pair_graph(build_separation_kernel({0.5, 0.25, 0.0, 0.0}));
    const auto emb = embed(g, 2);
    EXPECT_FALSE(emb.tie_warning);
    auto captured = [&](const Vector& v) {
        double s = 0.0;
        for (std::size_t j = 0; j < 2; ++j) {
            const Vector c = emb.features.column(j);
            const double d = dot(c, v) / norm2(c);
            s += d * d;
        }
        return s / dot(v, v);
    };
    EXPECT_NEAR(captured({-1, 1, -1, 1, -1, 1, -1, 1}), 1.0, 1e-10);
    EXPECT_NEAR(captured({1, 1, 1, 1, 1, 1, 1, 1}), 1.0, 1e-10);
}

TEST(Spectral, RotationInvariance) {
    std::mt19937_64 rng(2);
    const auto g = to_pair_graph(expected_adjacency({2, 3, 3, 0.7, 0.4, 0.3, 0.05}));
    const auto emb = embed(g, 4);
    const Matrix q = random_orthogonal(4, rng);
    const Matrix fq = kernels::matmul(emb.features, q);
    EXPECT_LT(max_abs(gram(fq) - gram(emb.features)), 1e-12);
}

TEST(Spectral, SignDeterminism) {
    const auto g = to_pair_graph(sample_adjacency({2, 2, 20, 0.6, 0.4, 0.3, 0.1}, 9));
    const auto a = embed(g, 3);
    const auto b = embed(g, 3);
    EXPECT_EQ(a.features, b.features);
    for (std::size_t j = 0; j < 3; ++j) {
        std::size_t i = 0;
        while (std::abs(a.features(i, j)) <= 1e-10 * std::sqrt(a.retained_eigenvalues[j])) ++i;
        EXPECT_GT(a.features(i, j), 0.0);
    }
}

TEST(Spectral, TieWarningAndRankErrors) {
    // all-0.25 toy kernel: pair matrix is rank one
    const auto g = positive_pair_graph(build_toy_kernel({0.25, 0.25, 0.25, 0.25}));
    EXPECT_NO_THROW(embed(g, 1));
    EXPECT_THROW(embed(g, 2), NumericalError);
    EXPECT_THROW(embed(g, 5), ValidationError);
    const auto sep = embed(positive_pair_graph(build_separation_kernel({0.5, 0.25, 0.0, 0.0})), 3);
    EXPECT_TRUE(sep.tie_warning);
    EXPECT_TRUE(has_tie_at({3, 2, 2, 1}, 2));
    EXPECT_FALSE(has_tie_at({3, 2, 2, 1}, 1));
}

TEST(Spectral, PerturbationBound) {
    const auto e = expected_adjacency({2, 2, 50, 0.6, 0.4, 0.3, 0.1}).matrix;
    const auto same = rank_k_perturbation_bound(e, e, 3);
    EXPECT_TRUE(same.applicable);
    EXPECT_EQ(same.bound, 0.0);
    int applicable = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto a = sample_adjacency({2, 2, 50, 0.6, 0.4, 0.3, 0.1}, seed).adjacency;
        const auto b = rank_k_perturbation_bound(a, e, 3);
        if (!b.applicable) continue;
        ++applicable;
        EXPECT_GE(b.bound, operator_norm(rank_k_approx(a, 3) - rank_k_approx(e, 3)));
    }
    EXPECT_GT(applicable, 0);
    const Matrix small = Matrix::identity(4) * 1e-3;
    Matrix big = small;
    big(0, 0) = 1.0;
    EXPECT_FALSE(rank_k_perturbation_bound(big, small, 1).applicable);
    EXPECT_THROW(rank_k_perturbation_bound(e, Matrix::identity(3), 1), ValidationError);
}
