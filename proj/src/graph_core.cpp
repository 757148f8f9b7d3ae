#include "connectgraph/graph_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "connectgraph/error.hpp"

namespace connectgraph {

namespace {

constexpr double kNormTol = 1e-12;

void require_probability(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw ValidationError(std::string(name) + " must be a nonnegative finite number");
}

bool all_distinct(double a, double b, double c, double d) {
    return a != b && a != c && a != d && b != c && b != d && c != d;
}

bool ordered(double rho, double alpha, double beta, double gamma) {
    return rho > std::max(alpha, beta) && std::min(alpha, beta) > gamma &&
           all_distinct(rho, alpha, beta, gamma);
}

bool pair_in(std::size_t a, std::size_t b, std::initializer_list<std::pair<int, int>> pairs) {
    // pairs are written 1-based and unordered
    for (const auto& [x, y] : pairs) {
        const auto u = static_cast<std::size_t>(x - 1);
        const auto v = static_cast<std::size_t>(y - 1);
        if ((a == u && b == v) || (a == v && b == u)) return true;
    }
    return false;
}

}  // namespace

int count_classes(const std::vector<NodeLabel>& labels) {
    int r = 0;
    for (const auto& l : labels) r = std::max(r, l.class_id);
    return r;
}

int count_domains(const std::vector<NodeLabel>& labels) {
    int m = 0;
    for (const auto& l : labels) m = std::max(m, l.domain_id);
    return m;
}

void AugmentationKernel::validate() const {
    require(n_nodes > 0, "augmentation kernel has no nodes");
    require(labels.size() == n_nodes, "augmentation kernel: label count mismatch");
    require(kernel.rows() == n_nodes && kernel.cols() == n_nodes,
            "augmentation kernel: matrix shape mismatch");
    require(base_weights.size() == n_nodes, "augmentation kernel: base weight length mismatch");
    for (std::size_t i = 0; i < n_nodes; ++i) {
        double s = 0.0;
        for (double v : kernel.row(i)) {
            require(v >= 0.0, "augmentation kernel: negative entry");
            s += v;
        }
        require(std::abs(s - 1.0) <= kNormTol,
                "augmentation kernel: row " + std::to_string(i + 1) + " does not sum to 1");
    }
    double s = 0.0;
    for (double w : base_weights) {
        require(w >= 0.0, "augmentation kernel: negative base weight");
        s += w;
    }
    require(std::abs(s - 1.0) <= kNormTol, "augmentation kernel: base weights do not sum to 1");
    for (const auto& l : labels)
        require(l.class_id >= 1 && l.domain_id >= 1, "augmentation kernel: labels are 1-based");
}

void ToyKernelParams::validate() const {
    require_probability(rho_p, "rho-p");
    require_probability(alpha_p, "alpha-p");
    require_probability(beta_p, "beta-p");
    require_probability(gamma_p, "gamma-p");
    const double total = rho_p + alpha_p + beta_p + gamma_p;
    if (std::abs(total - 1.0) > kNormTol)
        throw ValidationError("toy parameters must satisfy rho-p + alpha-p + beta-p + gamma-p = 1 (got " +
                              std::to_string(total) + ")");
}

bool ToyKernelParams::strictly_ordered() const { return ordered(rho_p, alpha_p, beta_p, gamma_p); }

void SeparationKernelParams::validate() const {
    require_probability(rho_p, "rho-p");
    require_probability(alpha_p, "alpha-p");
    require_probability(beta_p, "beta-p");
    require_probability(gamma_p, "gamma-p");
    const double total = rho_p + 2.0 * alpha_p + beta_p + 2.0 * gamma_p;
    if (std::abs(total - 1.0) > kNormTol)
        throw ValidationError(
            "separation parameters must satisfy rho-p + 2 alpha-p + beta-p + 2 gamma-p = 1 (got " +
            std::to_string(total) + ")");
}

bool SeparationKernelParams::strictly_ordered() const {
    return ordered(rho_p, alpha_p, beta_p, gamma_p);
}

void PairGraph::validate() const {
    require(n_nodes > 0, "pair graph has no nodes");
    require(labels.size() == n_nodes, "pair graph: label count mismatch");
    require(weights.rows() == n_nodes && weights.cols() == n_nodes, "pair graph: shape mismatch");
    require(asymmetry(weights) <= 1e-14, "pair graph: weights are not symmetric");
    double s = 0.0;
    for (double v : weights.data()) {
        require(v >= 0.0, "pair graph: negative weight");
        s += v;
    }
    require(std::abs(s - 1.0) <= 1e-10, "pair graph: weights do not sum to 1");
    require(source_domain >= 1 && source_domain <= num_domains(), "pair graph: bad source domain");
}

namespace separation {

bool is_alpha_pair(std::size_t a, std::size_t b) {
    return pair_in(a, b, {{1, 3}, {3, 5}, {5, 7}, {7, 1}, {2, 4}, {4, 6}, {6, 8}, {8, 2}});
}

bool is_beta_pair(std::size_t a, std::size_t b) {
    return pair_in(a, b, {{1, 2}, {3, 4}, {5, 6}, {7, 8}});
}

bool is_gamma_pair(std::size_t a, std::size_t b) {
    return pair_in(a, b, {{1, 4}, {2, 3}, {3, 6}, {4, 5}, {5, 8}, {6, 7}, {7, 2}, {8, 1}});
}

}  // namespace separation

AugmentationKernel build_toy_kernel(const ToyKernelParams& p) {
    p.validate();
    AugmentationKernel k;
    k.n_nodes = 4;
    k.labels = {{1, 1}, {2, 1}, {1, 2}, {2, 2}};
    k.kernel = Matrix(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            const bool same_class = k.labels[i].class_id == k.labels[j].class_id;
            const bool same_domain = k.labels[i].domain_id == k.labels[j].domain_id;
            double v = p.gamma_p;
            if (same_class && same_domain)
                v = p.rho_p;
            else if (same_class)
                v = p.alpha_p;
            else if (same_domain)
                v = p.beta_p;
            k.kernel(i, j) = v;
        }
    }
    k.base_weights.assign(4, 0.25);
    return k;
}

AugmentationKernel build_separation_kernel(const SeparationKernelParams& p) {
    p.validate();
    using namespace separation;
    AugmentationKernel k;
    k.n_nodes = kNodes;
    k.kernel = Matrix(kNodes, kNodes);
    for (std::size_t i = 0; i < kNodes; ++i) {
        // odd ids are class 1; ids 1 and 2 form the source domain
        k.labels.push_back({i % 2 == 0 ? 1 : 2, i < 2 ? 1 : 2});
        for (std::size_t j = 0; j < kNodes; ++j) {
            double v = 0.0;
            if (i == j)
                v = p.rho_p;
            else if (is_alpha_pair(i, j))
                v = p.alpha_p;
            else if (is_beta_pair(i, j))
                v = p.beta_p;
            else if (is_gamma_pair(i, j))
                v = p.gamma_p;
            k.kernel(i, j) = v;
        }
    }
    k.base_weights.assign(kNodes, 1.0 / static_cast<double>(kNodes));
    return k;
}

PairGraph positive_pair_graph(const AugmentationKernel& k) {
    k.validate();
    const std::size_t n = k.n_nodes;
    PairGraph g;
    g.n_nodes = n;
    g.labels = k.labels;
    g.weights = Matrix(n, n);
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            double s = 0.0;
            for (std::size_t b = 0; b < n; ++b) s += k.base_weights[b] * k.kernel(b, x) * k.kernel(b, y);
            g.weights(x, y) = s;
        }
    }
    g.source_domain = 1;
    return g;
}

PairParams toy_pair_params(const ToyKernelParams& p) {
    p.validate();
    const double r = p.rho_p, a = p.alpha_p, b = p.beta_p, c = p.gamma_p;
    return {0.25 * (r * r + a * a + b * b + c * c), 0.5 * (r * a + b * c), 0.5 * (r * b + a * c),
            0.5 * (r * c + a * b)};
}

SeparationPairParams separation_pair_params(const SeparationKernelParams& p) {
    p.validate();
    const double r = p.rho_p, a = p.alpha_p, b = p.beta_p, c = p.gamma_p;
    const double rho = (r * r + 2.0 * a * a + b * b + 2.0 * c * c) / 8.0;
    const double alpha = (r * a + b * c) / 4.0;
    const double beta = (r * b + 2.0 * a * c) / 4.0;
    const double gamma = (r * c + a * b) / 4.0;
    const double cn = 8.0 * rho + 16.0 * alpha + 8.0 * beta + 16.0 * gamma;
    return {rho / cn, alpha / cn, beta / cn, gamma / cn, cn};
}

}  // namespace connectgraph
