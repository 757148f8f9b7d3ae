#include "connectgraph/sbm.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "connectgraph/error.hpp"
#include "connectgraph/rng.hpp"

namespace connectgraph {

namespace {

void require_unit_interval(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError(std::string(name) + " must lie in [0, 1]");
}

}  // namespace

void SbmParams::validate() const {
    if (r < 2) throw ValidationError("r must be at least 2");
    if (m < 2) throw ValidationError("m must be at least 2");
    if (n < 1) throw ValidationError("n must be at least 1");
    require_unit_interval(rho, "rho");
    require_unit_interval(alpha, "alpha");
    require_unit_interval(beta, "beta");
    require_unit_interval(gamma, "gamma");
}

bool SbmParams::ordered() const {
    return rho > std::max(alpha, beta) && std::min(alpha, beta) > gamma;
}

void SbmParams::require_ordered() const {
    if (!ordered())
        throw ValidationError("SBM parameters must satisfy rho > max(alpha, beta) > min(alpha, beta) > gamma");
}

NodeLabel SbmParams::label_of(std::size_t index) const {
    const auto block = index / static_cast<std::size_t>(n);
    const auto rr = static_cast<std::size_t>(r);
    return {static_cast<int>(block % rr) + 1, static_cast<int>(block / rr) + 1};
}

std::vector<NodeLabel> SbmParams::labels() const {
    std::vector<NodeLabel> out(num_nodes());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = label_of(i);
    return out;
}

double SbmParams::edge_probability(const NodeLabel& a, const NodeLabel& b) const {
    const bool same_class = a.class_id == b.class_id;
    const bool same_domain = a.domain_id == b.domain_id;
    if (same_class && same_domain) return rho;
    if (same_class) return alpha;
    if (same_domain) return beta;
    return gamma;
}

ExpectedGraph expected_adjacency(const SbmParams& p) {
    p.validate();
    ExpectedGraph g;
    g.params = p;
    g.labels = p.labels();
    const std::size_t n = g.labels.size();
    g.matrix = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) g.matrix(i, j) = p.edge_probability(g.labels[i], g.labels[j]);
    return g;
}

std::uint64_t count_edges(const Matrix& adjacency) {
    std::uint64_t count = 0;
    for (double v : adjacency.data())
        if (v != 0.0) ++count;
    return count;
}

SampledGraph sample_adjacency(const SbmParams& p, std::uint64_t seed) {
    p.validate();
    SampledGraph g;
    g.params = p;
    g.seed = seed;
    g.labels = p.labels();
    const std::size_t n = g.labels.size();
    g.adjacency = Matrix(n, n);
    const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t ii = 0; ii < rows; ++ii) {
        const auto i = static_cast<std::size_t>(ii);
        for (std::size_t j = i; j < n; ++j) {
            const double prob = p.edge_probability(g.labels[i], g.labels[j]);
            if (keyed_uniform(seed, i, j) < prob) g.adjacency(i, j) = 1.0;
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) g.adjacency(j, i) = g.adjacency(i, j);
    g.edge_count = count_edges(g.adjacency);
    return g;
}

Vector SbmSpectrum::sorted(std::size_t num_nodes) const {
    Vector v;
    v.reserve(num_nodes);
    v.insert(v.end(), static_cast<std::size_t>(mult_a), lambda_a);
    v.insert(v.end(), static_cast<std::size_t>(mult_b), lambda_b);
    v.insert(v.end(), static_cast<std::size_t>(mult_c), lambda_c);
    v.insert(v.end(), static_cast<std::size_t>(mult_d), lambda_d);
    v.resize(num_nodes, 0.0);
    std::sort(v.begin(), v.end(), std::greater<>());
    return v;
}

SbmSpectrum closed_form_spectrum(const SbmParams& p) {
    p.validate();
    const double n = p.n, r = p.r, m = p.m;
    SbmSpectrum s;
    s.lambda_a = n * (p.rho + (r - 1) * p.beta + (m - 1) * p.alpha + (m - 1) * (r - 1) * p.gamma);
    s.lambda_b = n * (p.rho + (r - 1) * p.beta - p.alpha - (r - 1) * p.gamma);
    s.lambda_c = n * (p.rho - p.beta + (m - 1) * p.alpha - (m - 1) * p.gamma);
    s.lambda_d = n * (p.rho - p.beta - p.alpha + p.gamma);
    s.mult_a = 1;
    s.mult_b = p.m - 1;
    s.mult_c = p.r - 1;
    s.mult_d = (p.m - 1) * (p.r - 1);
    return s;
}

double eigengap(const SbmParams& p) {
    p.validate();
    p.require_ordered();
    const double gap = p.n * std::min(p.r * (p.beta - p.gamma), p.m * (p.alpha - p.gamma));
    if (!(gap > 0.0)) throw ValidationError("eigengap is not positive");
    return gap;
}

double ideal_scaling_factor(const SbmParams& p, double xi) {
    if (!(xi >= 0.0)) throw ValidationError("xi must be nonnegative");
    const double lc = closed_form_spectrum(p).lambda_c;
    if (!(lc > 0.0)) throw ValidationError("lambda_c must be positive");
    return lc / (lc + p.m * xi);
}

double theorem_eta_bound(const SbmParams& p, double epsilon) {
    p.validate();
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ValidationError("epsilon must lie in (0, 1/2)");
    if (!(p.alpha > p.gamma)) throw ValidationError("theorem eta bound requires alpha > gamma");
    if (!(p.rho > 0.0)) throw ValidationError("theorem eta bound requires rho > 0");
    return (p.alpha - p.gamma) * epsilon / (2.0 * p.r * p.rho);
}

double equivalent_xi(double total_mass, std::size_t num_nodes, std::size_t source_count, double eta) {
    const double nn = static_cast<double>(num_nodes);
    return total_mass / (nn * nn) * eta * static_cast<double>(source_count);
}

double eta_for_xi(double total_mass, std::size_t num_nodes, std::size_t source_count, double xi) {
    const double nn = static_cast<double>(num_nodes);
    require(total_mass > 0.0 && source_count > 0, "eta_for_xi: empty graph or source set");
    return xi * nn * nn / (total_mass * static_cast<double>(source_count));
}

PairGraph to_pair_graph(const std::vector<NodeLabel>& labels, const Matrix& m, int source_domain) {
    require(m.is_square() && m.rows() == labels.size(), "to_pair_graph: shape mismatch");
    const double total = sum_all(m);
    if (!(total > 0.0)) throw ValidationError("graph has no edges");
    PairGraph g;
    g.n_nodes = labels.size();
    g.labels = labels;
    g.weights = m;
    for (double& v : g.weights.data()) v /= total;
    g.source_domain = source_domain;
    return g;
}

PairGraph to_pair_graph(const ExpectedGraph& g) { return to_pair_graph(g.labels, g.matrix); }

PairGraph to_pair_graph(const SampledGraph& g) {
    if (g.edge_count == 0) throw ValidationError("sampled graph has no edges");
    return to_pair_graph(g.labels, g.adjacency);
}

}  // namespace connectgraph
