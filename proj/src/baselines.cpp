#include "connectgraph/baselines.hpp"

#include <cmath>
#include <string>

#include "connectgraph/error.hpp"
#include "connectgraph/kernels.hpp"

namespace connectgraph {

namespace {

constexpr std::size_t kClasses = 2;

void require_separation_shape(const AugmentationKernel& k) {
    k.validate();
    if (k.n_nodes != separation::kNodes) throw ValidationError("kernel is not an 8-node separation kernel");
    for (std::size_t i = 0; i < k.n_nodes; ++i) {
        const NodeLabel expect{i % 2 == 0 ? 1 : 2, i < 2 ? 1 : 2};
        if (!(k.labels[i] == expect)) throw ValidationError("kernel labels are not in separation layout");
    }
}

Vector onehot(int c) {
    Vector e(kClasses, 0.0);
    e[static_cast<std::size_t>(c - 1)] = 1.0;
    return e;
}

std::vector<std::size_t> source_nodes(const AugmentationKernel& k, int source_domain) {
    std::vector<std::size_t> s;
    for (std::size_t i = 0; i < k.n_nodes; ++i)
        if (k.labels[i].domain_id == source_domain) s.push_back(i);
    if (s.empty()) throw ValidationError("source domain has no nodes");
    return s;
}

}  // namespace

std::vector<int> PointwisePredictor::classes() const { return argmax_rows(scores); }

std::vector<std::size_t> separation_source_nodes() { return {0, 1}; }
std::vector<std::size_t> separation_target_nodes() { return {2, 3, 4, 5, 6, 7}; }

std::vector<bool> reachable_mask(const AugmentationKernel& k, int source_domain) {
    k.validate();
    std::vector<bool> mask(k.n_nodes, false);
    for (std::size_t s : source_nodes(k, source_domain))
        for (std::size_t x = 0; x < k.n_nodes; ++x)
            if (k.kernel(s, x) > 0.0) mask[x] = true;
    return mask;
}

PointwisePredictor erm_minimizer(const AugmentationKernel& k, int source_domain, Completion completion) {
    require_separation_shape(k);
    const auto src = source_nodes(k, source_domain);
    PointwisePredictor f;
    f.reachable = reachable_mask(k, source_domain);
    f.scores = Matrix(k.n_nodes, kClasses);
    for (std::size_t x = 0; x < k.n_nodes; ++x) {
        if (f.reachable[x]) {
            double mass = 0.0;
            for (std::size_t s : src) {
                const double w = k.kernel(s, x);
                mass += w;
                f.scores(x, static_cast<std::size_t>(k.labels[s].class_id - 1)) += w;
            }
            for (double& v : f.scores.row(x)) v /= mass;
            continue;
        }
        int c = k.labels[x].class_id;
        if (completion == Completion::adversarial) {
            // node 6 -> class 1, node 5 -> class 2
            if (x == 5) c = 1;
            else if (x == 4) c = 2;
        }
        const Vector e = onehot(c);
        std::copy(e.begin(), e.end(), f.scores.row(x).begin());
    }
    return f;
}

double erm_objective(const AugmentationKernel& k, const PointwisePredictor& f, int source_domain) {
    k.validate();
    require(f.scores.rows() == k.n_nodes && f.scores.cols() == kClasses, "erm_objective: predictor shape");
    const auto src = source_nodes(k, source_domain);
    const double ps = 1.0 / static_cast<double>(src.size());
    double total = 0.0;
    for (std::size_t s : src) {
        const Vector e = onehot(k.labels[s].class_id);
        for (std::size_t x = 0; x < k.n_nodes; ++x) {
            double d = 0.0;
            for (std::size_t c = 0; c < kClasses; ++c) {
                const double t = f.scores(x, c) - e[c];
                d += t * t;
            }
            total += ps * k.kernel(s, x) * d;
        }
    }
    return total;
}

namespace {

int point_count(const std::vector<int>& encoder) {
    int n = 0;
    for (int z : encoder) {
        require(z >= 0, "encoder indices must be nonnegative");
        n = std::max(n, z + 1);
    }
    return n;
}

}  // namespace

double dann_domain_loss(const AugmentationKernel& k, const std::vector<int>& encoder, const Matrix& head,
                        double lambda) {
    k.validate();
    require(encoder.size() == k.n_nodes, "encoder must map every node");
    require(head.rows() >= static_cast<std::size_t>(point_count(encoder)) && head.cols() == 2,
            "domain head shape mismatch");
    const double base = 1.0 / static_cast<double>(k.n_nodes);
    double total = 0.0;
    for (std::size_t x = 0; x < k.n_nodes; ++x) {
        const int d = k.labels[x].domain_id;
        for (std::size_t y = 0; y < k.n_nodes; ++y) {
            const auto z = static_cast<std::size_t>(encoder[y]);
            const double t0 = head(z, 0) - (d == 1 ? 1.0 : 0.0);
            const double t1 = head(z, 1) - (d == 2 ? 1.0 : 0.0);
            total += base * k.kernel(x, y) * (t0 * t0 + t1 * t1);
        }
    }
    return lambda * total;
}

double dann_domain_term(const AugmentationKernel& k, const std::vector<int>& encoder, double lambda,
                        Matrix* head) {
    k.validate();
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be positive");
    require(encoder.size() == k.n_nodes, "encoder must map every node");
    const auto points = static_cast<std::size_t>(point_count(encoder));
    // squared loss: the best head at each point is the weighted mean target
    Matrix h(points, 2);
    Vector mass(points, 0.0);
    for (std::size_t x = 0; x < k.n_nodes; ++x) {
        const auto d = static_cast<std::size_t>(k.labels[x].domain_id - 1);
        require(d < 2, "domain term needs two domains");
        for (std::size_t y = 0; y < k.n_nodes; ++y) {
            const auto z = static_cast<std::size_t>(encoder[y]);
            h(z, d) += k.kernel(x, y);
            mass[z] += k.kernel(x, y);
        }
    }
    for (std::size_t z = 0; z < points; ++z)
        if (mass[z] > 0.0)
            for (double& v : h.row(z)) v /= mass[z];
    const double value = dann_domain_loss(k, encoder, h, lambda);
    if (head) *head = std::move(h);
    return value;
}

DannResult dann_construction(const AugmentationKernel& k, double lambda) {
    require_separation_shape(k);
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ValidationError("lambda must be positive");
    DannResult r;
    // {1,3,6,7} -> z1, {2,4,5,8} -> z2
    r.encoder = {0, 1, 0, 1, 1, 0, 0, 1};
    r.domain_term = dann_domain_term(k, r.encoder, lambda, &r.domain_head);
    r.predictor.reachable = reachable_mask(k);
    r.predictor.scores = Matrix(k.n_nodes, kClasses);
    for (std::size_t x = 0; x < k.n_nodes; ++x)
        r.predictor.scores(x, static_cast<std::size_t>(r.encoder[x])) = 1.0;
    return r;
}

Matrix separation_block_matrix(const SeparationPairParams& p) {
    using namespace separation;
    Matrix s(kNodes, kNodes);
    for (std::size_t i = 0; i < kNodes; ++i) {
        for (std::size_t j = 0; j < kNodes; ++j) {
            if (i == j) s(i, j) = p.rho;
            else if (is_alpha_pair(i, j)) s(i, j) = p.alpha;
            else if (is_beta_pair(i, j)) s(i, j) = p.beta;
            else if (is_gamma_pair(i, j)) s(i, j) = p.gamma;
        }
    }
    return s;
}

Matrix separation_basis() {
    const double cols[8][8] = {
        {1, 1, 1, 1, 1, 1, 1, 1},
        {1, -1, 0, 0, -1, 1, 0, 0},
        {0, 0, 1, -1, 0, 0, -1, 1},
        {-1, -1, 0, 0, 1, 1, 0, 0},
        {0, 0, -1, -1, 0, 0, 1, 1},
        {1, -1, -1, 1, 1, -1, -1, 1},
        {-1, -1, 1, 1, -1, -1, 1, 1},
        {-1, 1, -1, 1, -1, 1, -1, 1},
    };
    Matrix u(8, 8);
    for (std::size_t j = 0; j < 8; ++j)
        for (std::size_t i = 0; i < 8; ++i) u(i, j) = cols[j][i];
    return u;
}

std::array<double, 8> separation_closed_form_eigenvalues(const SeparationPairParams& p) {
    const double r = p.rho, a = p.alpha, b = p.beta, g = p.gamma;
    return {r + 2 * a + b + 2 * g, r - b, r - b, r + b, r + b,
            r - 2 * a - b + 2 * g, r - 2 * a + b - 2 * g, r + 2 * a - b - 2 * g};
}

ContrastiveSeparation contrastive_pipeline_separation(const AugmentationKernel& k, double eta,
                                                      std::size_t k_dim) {
    require_separation_shape(k);
    if (!(eta > 0.0)) throw ValidationError("eta must be positive");
    const PairGraph g = positive_pair_graph(k);
    ContrastiveSeparation out;
    // pair values from the kernel entries; k is in separation shape
    const SeparationKernelParams kp{k.kernel(0, 0), k.kernel(0, 2), k.kernel(0, 1), k.kernel(0, 3)};
    const SeparationPairParams pp = separation_pair_params(kp);
    out.condition_met = pp.alpha > pp.gamma + pp.beta;
    out.embedding = embed(g, k_dim);
    out.degenerate = out.embedding.tie_warning;
    const auto src = separation_source_nodes();
    const auto tgt = separation_target_nodes();
    out.probe = ridge_fit_nodes(out.embedding.features, src, class_label_matrix(g.labels, src, 2), eta);
    const Predictions p = predict(out.embedding.features, out.probe);
    out.predicted = p.classes;
    out.target_error = zero_one_error(p.classes, class_ids(g.labels), tgt);
    const double total = frobenius_norm(p.scores);
    if (total > 0.0) {
        Matrix rest = p.scores;
        const double inv = 1.0 / std::sqrt(8.0);
        for (std::size_t c = 0; c < rest.cols(); ++c) {
            double proj = 0.0;
            for (std::size_t i = 0; i < 8; ++i) proj += rest(i, c) * (i % 2 == 0 ? -inv : inv);
            for (std::size_t i = 0; i < 8; ++i) rest(i, c) -= proj * (i % 2 == 0 ? -inv : inv);
        }
        out.off_parity_weight = frobenius_norm(rest) / total;
    }
    return out;
}

}  // namespace connectgraph
