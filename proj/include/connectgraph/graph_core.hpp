#pragma once

#include <cstddef>
#include <vector>

#include "connectgraph/matrix.hpp"

namespace connectgraph {

/// Class and domain of a node, both 1-based.
struct NodeLabel {
    int class_id = 1;
    int domain_id = 1;

    bool operator==(const NodeLabel&) const = default;
};

int count_classes(const std::vector<NodeLabel>& labels);
int count_domains(const std::vector<NodeLabel>& labels);

/// Finite augmentation distribution: kernel(x, x') = A(x' | x).
struct AugmentationKernel {
    std::size_t n_nodes = 0;
    std::vector<NodeLabel> labels;
    Matrix kernel;
    Vector base_weights;

    /// Row sums and base weights must each be 1 within 1e-12.
    void validate() const;
};

struct ToyKernelParams {
    double rho_p = 0.0;
    double alpha_p = 0.0;
    double beta_p = 0.0;
    double gamma_p = 0.0;

    void validate() const;
    /// rho' > max(alpha', beta'), min(alpha', beta') > gamma', all distinct.
    bool strictly_ordered() const;
};

/// Augmentation probabilities on the 8-node cycle. rho' + 2 alpha' + beta' + 2 gamma' = 1.
struct SeparationKernelParams {
    double rho_p = 0.0;
    double alpha_p = 0.0;
    double beta_p = 0.0;
    double gamma_p = 0.0;

    void validate() const;
    bool strictly_ordered() const;
};

/// Positive-pair distribution over ordered node pairs.
struct PairGraph {
    std::size_t n_nodes = 0;
    std::vector<NodeLabel> labels;
    Matrix weights;
    int source_domain = 1;

    /// Symmetric to 1e-14, nonnegative, total mass 1 within 1e-10.
    void validate() const;
    int num_classes() const { return count_classes(labels); }
    int num_domains() const { return count_domains(labels); }
};

/// Distinct entry values of a 2x2-block pair matrix.
struct PairParams {
    double rho = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

struct SeparationPairParams {
    double rho = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    /// C with 8 rho + 16 alpha + 8 beta + 16 gamma = 1 after division.
    double normalizer = 1.0;
};

/// Nodes: clock-sketch, butterfly-sketch, clock-photo, butterfly-photo.
AugmentationKernel build_toy_kernel(const ToyKernelParams& p);
AugmentationKernel build_separation_kernel(const SeparationKernelParams& p);

/// S(x, x') = sum_b w_b K(b, x) K(b, x').
PairGraph positive_pair_graph(const AugmentationKernel& k);

/// Entry values of the toy pair graph, base weight 1/4 included.
PairParams toy_pair_params(const ToyKernelParams& p);

/// Closed-form separation pair values. Multiplying by `normalizer` gives the
/// raw pair probabilities; the pair graph also carries two-hop entries that
/// the closed form does not list, so the normalized values do not sum to 1
/// over the full graph.
SeparationPairParams separation_pair_params(const SeparationKernelParams& p);

/// 0-based node sets of the 8-node cycle.
namespace separation {
inline constexpr std::size_t kNodes = 8;
bool is_alpha_pair(std::size_t a, std::size_t b);
bool is_beta_pair(std::size_t a, std::size_t b);
bool is_gamma_pair(std::size_t a, std::size_t b);
}  // namespace separation

}  // namespace connectgraph
