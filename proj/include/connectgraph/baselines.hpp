#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "connectgraph/graph_core.hpp"
#include "connectgraph/matrix.hpp"
#include "connectgraph/probe.hpp"
#include "connectgraph/spectral.hpp"

namespace connectgraph {

/// Per-node score vectors (rows) and which nodes the source can reach.
struct PointwisePredictor {
    Matrix scores;
    std::vector<bool> reachable;

    std::vector<int> classes() const;
};

enum class Completion { adversarial, oracle };

/// Nodes x with sum over source x' of K(x', x) > 0.
std::vector<bool> reachable_mask(const AugmentationKernel& k, int source_domain = 1);

/// Weighted-average ERM minimizer on reachable nodes. Unreachable nodes get
/// class 1 at node 6 and class 2 at node 5 (adversarial) or their true class
/// (oracle).
PointwisePredictor erm_minimizer(const AugmentationKernel& k, int source_domain = 1,
                                 Completion completion = Completion::adversarial);

/// sum_{x in S} P_S(x) sum_x' K(x, x') ||f(x') - e_{y_x}||^2, P_S uniform over source nodes.
double erm_objective(const AugmentationKernel& k, const PointwisePredictor& f, int source_domain = 1);

struct DannResult {
    PointwisePredictor predictor;
    /// Representation index per node: 0 for {1,3,6,7}, 1 for {2,4,5,8}.
    std::vector<int> encoder;
    /// Best domain head at each representation point, rows in R^2.
    Matrix domain_head;
    double domain_term = 0.0;
};

/// Best domain-head squared loss for an arbitrary encoder (assignment of
/// nodes to representation points), scaled by lambda. Also returns the head.
double dann_domain_term(const AugmentationKernel& k, const std::vector<int>& encoder, double lambda,
                        Matrix* head = nullptr);
/// Domain term for a given head (one row per representation point).
double dann_domain_loss(const AugmentationKernel& k, const std::vector<int>& encoder, const Matrix& head,
                        double lambda);

DannResult dann_construction(const AugmentationKernel& k, double lambda);

/// Pair matrix of the separation family written from the closed-form entries
/// (2-hop positions are zero).
Matrix separation_block_matrix(const SeparationPairParams& p);
/// Unnormalized eigenvector basis, columns in the order of the closed form.
Matrix separation_basis();
/// lambda_1..lambda_8 of separation_block_matrix in basis order.
std::array<double, 8> separation_closed_form_eigenvalues(const SeparationPairParams& p);

struct ContrastiveSeparation {
    SpectralEmbedding embedding;
    ProbeWeights probe;
    std::vector<int> predicted;
    double target_error = 0.0;
    /// alpha > gamma + beta on the pair values.
    bool condition_met = false;
    /// Eigenvalue tie at k; the embedding (and so the error) is not unique.
    bool degenerate = false;
    /// ||(I - P) F B||_F / ||F B||_F with P the projector onto the
    /// class-parity vector (-1, 1, -1, 1, ...). Zero when the probe only uses
    /// the parity direction.
    double off_parity_weight = 0.0;
};

/// Embeds the pair graph with k_dim features, fits the probe on nodes {1, 2}
/// and evaluates on nodes {3..8}.
ContrastiveSeparation contrastive_pipeline_separation(const AugmentationKernel& k, double eta,
                                                      std::size_t k_dim = 3);

/// 0-based source and target node lists of the separation graph.
std::vector<std::size_t> separation_source_nodes();
std::vector<std::size_t> separation_target_nodes();

}  // namespace connectgraph
