#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "connectgraph/graph_core.hpp"
#include "connectgraph/matrix.hpp"

namespace connectgraph {

/// Stochastic block model: r classes, m domains, n nodes per (class, domain)
/// block. rho: same class and domain; alpha: same class, other domain;
/// beta: other class, same domain; gamma: other class and domain.
struct SbmParams {
    int r = 2;
    int m = 2;
    int n = 1;
    double rho = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;

    std::size_t num_nodes() const noexcept {
        return static_cast<std::size_t>(r) * static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
    }
    void validate() const;
    /// rho > max(alpha, beta) and min(alpha, beta) > gamma.
    bool ordered() const;
    void require_ordered() const;
    /// Label of node `index` under domain-major, then class, then index order.
    NodeLabel label_of(std::size_t index) const;
    std::vector<NodeLabel> labels() const;
    double edge_probability(const NodeLabel& a, const NodeLabel& b) const;
};

/// E[A], with the block labels.
struct ExpectedGraph {
    SbmParams params;
    std::vector<NodeLabel> labels;
    Matrix matrix;
};

struct SampledGraph {
    SbmParams params;
    std::uint64_t seed = 0;
    std::vector<NodeLabel> labels;
    Matrix adjacency;
    /// Ordered-pair count: sum of all adjacency entries.
    std::uint64_t edge_count = 0;
};

struct SbmSpectrum {
    double lambda_a = 0.0;
    double lambda_b = 0.0;
    double lambda_c = 0.0;
    double lambda_d = 0.0;
    int mult_a = 1;
    int mult_b = 0;
    int mult_c = 0;
    int mult_d = 0;

    /// All N eigenvalues of E[A] including the zeros, sorted descending.
    Vector sorted(std::size_t num_nodes) const;
};

ExpectedGraph expected_adjacency(const SbmParams& p);

/// Each unordered pair {x, x'} with x <= x' (diagonal included) is an
/// independent Bernoulli draw keyed on (seed, x, x').
SampledGraph sample_adjacency(const SbmParams& p, std::uint64_t seed);

/// Recounts edge_count from the adjacency.
std::uint64_t count_edges(const Matrix& adjacency);

SbmSpectrum closed_form_spectrum(const SbmParams& p);

/// n * min(r (beta - gamma), m (alpha - gamma)); requires the ordering hypotheses.
double eigengap(const SbmParams& p);

/// lambda_c / (lambda_c + m xi).
double ideal_scaling_factor(const SbmParams& p, double xi);

/// (alpha - gamma) epsilon / (2 r rho), for epsilon in (0, 1/2).
double theorem_eta_bound(const SbmParams& p, double epsilon);

/// Regularization xi = (|E| / N^2) eta |S| seen by the closed-form prediction
/// on an adjacency with total mass |E| and |S| source nodes.
double equivalent_xi(double total_mass, std::size_t num_nodes, std::size_t source_count, double eta);
/// Inverse of equivalent_xi.
double eta_for_xi(double total_mass, std::size_t num_nodes, std::size_t source_count, double xi);

/// Normalizes a nonnegative symmetric matrix to a pair distribution.
PairGraph to_pair_graph(const std::vector<NodeLabel>& labels, const Matrix& m, int source_domain = 1);
PairGraph to_pair_graph(const ExpectedGraph& g);
PairGraph to_pair_graph(const SampledGraph& g);

}  // namespace connectgraph
