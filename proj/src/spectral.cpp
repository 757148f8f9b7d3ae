#include "connectgraph/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "connectgraph/error.hpp"
#include "connectgraph/kernels.hpp"

namespace connectgraph {

namespace {

constexpr double kTieTol = 1e-10;
constexpr double kPositiveTol = 1e-12;

}  // namespace

bool has_tie_at(const Vector& sorted_eigenvalues, std::size_t k) {
    if (k == 0 || k >= sorted_eigenvalues.size()) return false;
    const double scale = std::max(1.0, std::abs(sorted_eigenvalues.front()));
    return std::abs(sorted_eigenvalues[k - 1] - sorted_eigenvalues[k]) < kTieTol * scale;
}

SpectralEmbedding embed_matrix(const Matrix& w, std::size_t k) {
    require(w.is_square(), "embed: pair matrix must be square");
    const std::size_t n = w.rows();
    if (k < 1 || k > n) throw ValidationError("k must lie in [1, N]");
    const double nn = static_cast<double>(n) * static_cast<double>(n);
    Matrix scaled = w;
    scaled *= nn;
    const EigenSystem es = top_eigenpairs(scaled, k);
    const double floor = kPositiveTol * std::max(1.0, std::abs(es.eigenvalues.front()));
    if (!(es.eigenvalues[k - 1] > floor))
        throw NumericalError("pair matrix has fewer than k = " + std::to_string(k) +
                             " positive eigenvalues");
    SpectralEmbedding emb;
    emb.k = k;
    emb.retained_eigenvalues.assign(es.eigenvalues.begin(), es.eigenvalues.begin() + static_cast<std::ptrdiff_t>(k));
    emb.tie_warning = has_tie_at(es.eigenvalues, k);
    emb.features = Matrix(n, k);
    for (std::size_t j = 0; j < k; ++j) {
        const double s = std::sqrt(emb.retained_eigenvalues[j]);
        for (std::size_t i = 0; i < n; ++i) emb.features(i, j) = s * es.eigenvectors(i, j);
    }
    return emb;
}

SpectralEmbedding embed(const PairGraph& g, std::size_t k) {
    g.validate();
    return embed_matrix(g.weights, k);
}

SpectralEmbedding embed_sampled(const SampledGraph& g, std::size_t k) {
    if (g.edge_count == 0) throw ValidationError("sampled graph has no edges");
    return embed(to_pair_graph(g), k);
}

PerturbationBound rank_k_perturbation_bound(const Matrix& a, const Matrix& a_tilde, std::size_t k) {
    require(a.rows() == a_tilde.rows() && a.cols() == a_tilde.cols(),
            "rank_k_perturbation_bound: shape mismatch");
    require(a.is_square(), "rank_k_perturbation_bound: matrices must be square");
    require(k >= 1 && k < a.rows(), "rank_k_perturbation_bound: k must lie in [1, N)");
    PerturbationBound out;
    out.deviation = operator_norm(a - a_tilde);
    const Vector lt = symmetric_eigenvalues(a_tilde);
    const double norm_tilde = std::max(std::abs(lt.front()), std::abs(lt.back()));
    out.gap = lt[k - 1] - lt[k];
    out.applicable = out.deviation < out.gap;
    if (out.applicable) {
        const double d = out.deviation;
        out.bound = (1.0 + (2.0 * d + 2.0 * norm_tilde) / (out.gap - d)) * d;
    } else {
        out.bound = std::numeric_limits<double>::infinity();
    }
    return out;
}

double spectral_contrastive_loss(const PairGraph& g, const Matrix& features) {
    const std::size_t n = g.n_nodes;
    require(features.rows() == n, "spectral_contrastive_loss: feature rows must match nodes");
    const Matrix gram = kernels::matmul_bt(features, features);
    Vector marginal(n, 0.0);
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) marginal[x] += g.weights(x, y);
    double attract = 0.0, repel = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            attract += g.weights(x, y) * gram(x, y);
            repel += marginal[x] * marginal[y] * gram(x, y) * gram(x, y);
        }
    }
    return -2.0 * attract + repel;
}

double spectral_loss_matrix_form(const PairGraph& g, const Matrix& features) {
    const std::size_t n = g.n_nodes;
    require(features.rows() == n, "spectral_loss_matrix_form: feature rows must match nodes");
    const double nn = static_cast<double>(n) * static_cast<double>(n);
    Matrix target = g.weights;
    target *= nn;
    const Matrix gram = kernels::matmul_bt(features, features);
    const double diff = frobenius_norm(target - gram);
    const double base = frobenius_norm(target);
    return (diff * diff - base * base) / nn;
}

}  // namespace connectgraph
