#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "connectgraph/graph_core.hpp"
#include "connectgraph/matrix.hpp"
#include "connectgraph/spectral.hpp"

namespace connectgraph {

/// e_c - (1/r) 1, with 1-based class_id.
Vector mean_zero_onehot(int class_id, int r);

/// One mean-zero one-hot row per node in `nodes`, from class ids.
Matrix class_label_matrix(const std::vector<NodeLabel>& labels, std::span<const std::size_t> nodes, int r);
/// Same, with domain ids as the target.
Matrix domain_label_matrix(const std::vector<NodeLabel>& labels, std::span<const std::size_t> nodes, int m);

/// Linear head: scores = F B.
struct ProbeWeights {
    Matrix weights;  // k x r
    double eta = 0.0;
    std::vector<std::size_t> trained_on;
};

/// B = argmin sum_x ||B^T f(x) - y_x||^2 + eta |S| ||B||_F^2
///   = (F_S^T F_S + eta |S| I)^-1 F_S^T Y_S.
ProbeWeights ridge_fit(const Matrix& features_s, const Matrix& labels_s, double eta,
                       std::vector<std::size_t> trained_on = {});

/// Fits on the given rows of a full feature matrix.
ProbeWeights ridge_fit_nodes(const Matrix& features, std::span<const std::size_t> nodes,
                             const Matrix& labels_s, double eta);

struct Predictions {
    Matrix scores;
    /// 1-based argmax per row; ties go to the lowest index.
    std::vector<int> classes;
};

Predictions predict(const Matrix& features, const ProbeWeights& pw);
std::vector<int> argmax_rows(const Matrix& scores);

/// Moore-Penrose pseudoinverse of a symmetric matrix; eigenvalues below
/// 1e-12 * max |lambda| are dropped.
Matrix symmetric_pinv(const Matrix& m);

/// M_k(T, S) (M_k(S, S) + eta |S| I)^+ Y_S, where M_k is the rank-k
/// approximation of `scaled` (N^2 W for a pair graph).
Matrix closed_form_target_prediction(const Matrix& scaled, std::size_t k, double eta,
                                     std::span<const std::size_t> source,
                                     std::span<const std::size_t> target, const Matrix& labels_s);
/// Pair-graph form: uses N^2 W.
Matrix closed_form_target_prediction(const PairGraph& g, std::size_t k, double eta,
                                     std::span<const std::size_t> source,
                                     std::span<const std::size_t> target);

/// Fraction of `nodes` whose predicted class differs from the truth.
double zero_one_error(std::span<const int> predicted, std::span<const int> truth,
                      std::span<const std::size_t> nodes);

struct DomainProbe {
    ProbeWeights weights;  // k x m
    double domain_error = 0.0;
    /// m > 2 uses a multiclass head, beyond the two-domain setting.
    bool extension = false;
};

/// Fits a domain head on class-1 nodes and reports the 0-1 domain error over all nodes.
DomainProbe domain_probe(const Matrix& features, const std::vector<NodeLabel>& labels, double eta);

struct Cosines {
    double src_vs_tgt = 0.0;
    double src_vs_dom = 0.0;
    double tgt_vs_dom = 0.0;
};

/// src_vs_tgt: mean over classes of the cosine between matching columns.
/// *_vs_dom: mean |cosine| between every class column and every domain column.
Cosines disentanglement_cosines(const Matrix& class_probe_src, const Matrix& class_probe_tgt,
                                const Matrix& domain_probe);

double cosine(std::span<const double> a, std::span<const double> b);

/// Nodes whose domain equals / differs from `domain`.
std::vector<std::size_t> nodes_in_domain(const std::vector<NodeLabel>& labels, int domain);
std::vector<std::size_t> nodes_outside_domain(const std::vector<NodeLabel>& labels, int domain);
std::vector<int> class_ids(const std::vector<NodeLabel>& labels);
std::vector<int> domain_ids(const std::vector<NodeLabel>& labels);

/// Solves the symmetric positive definite system M X = B by Cholesky.
Matrix cholesky_solve(const Matrix& m, const Matrix& b);

}  // namespace connectgraph
