#pragma once

#include <cstddef>

#include "connectgraph/eigen.hpp"
#include "connectgraph/graph_core.hpp"
#include "connectgraph/matrix.hpp"
#include "connectgraph/sbm.hpp"

namespace connectgraph {

/// Rows of `features` are node embeddings; F F^T is the best rank-k
/// approximation of N^2 W for the pair matrix W.
struct SpectralEmbedding {
    Matrix features;
    /// Top-k eigenvalues of N^2 W, descending.
    Vector retained_eigenvalues;
    std::size_t k = 0;
    /// Set when the k-th and (k+1)-th eigenvalues coincide (to 1e-10
    /// relative), so the embedding is not unique.
    bool tie_warning = false;
};

/// Embedding of a pair matrix W (entries sum to 1). Throws NumericalError
/// when fewer than k eigenvalues are positive.
SpectralEmbedding embed_matrix(const Matrix& w, std::size_t k);
SpectralEmbedding embed(const PairGraph& g, std::size_t k);
/// embed() applied to W = adjacency / edge_count.
SpectralEmbedding embed_sampled(const SampledGraph& g, std::size_t k);

/// True when the k-th eigenvalue of the sorted spectrum is tied with the next.
bool has_tie_at(const Vector& sorted_eigenvalues, std::size_t k);

struct PerturbationBound {
    double bound = 0.0;
    bool applicable = false;
    /// ||A - A~||
    double deviation = 0.0;
    /// lambda~_k - lambda~_{k+1}
    double gap = 0.0;
};

/// (1 + (2 d + 2 ||A~||) / (gap - d)) d with d = ||A - A~||; the bound is
/// +inf when d >= gap.
PerturbationBound rank_k_perturbation_bound(const Matrix& a, const Matrix& a_tilde, std::size_t k);

/// Population spectral contrastive loss
///   -2 sum_{x,x'} W(x,x') f(x).f(x') + sum_{x,x'} w(x) w(x') (f(x).f(x'))^2
/// with marginals w(x) = sum_x' W(x,x'), evaluated by brute force.
double spectral_contrastive_loss(const PairGraph& g, const Matrix& features);

/// (||N^2 W - F F^T||_F^2 - ||N^2 W||_F^2) / N^2. Equals the population loss
/// whenever the marginal of W is uniform.
double spectral_loss_matrix_form(const PairGraph& g, const Matrix& features);

}  // namespace connectgraph
