#include "connectgraph/probe.hpp"

#include <cmath>
#include <string>

#include "connectgraph/eigen.hpp"
#include "connectgraph/error.hpp"
#include "connectgraph/kernels.hpp"

namespace connectgraph {

Vector mean_zero_onehot(int class_id, int r) {
    if (r < 1) throw ValidationError("label count must be positive");
    if (class_id < 1 || class_id > r)
        throw ValidationError("class id " + std::to_string(class_id) + " outside [1, " + std::to_string(r) + "]");
    Vector y(static_cast<std::size_t>(r), -1.0 / r);
    y[static_cast<std::size_t>(class_id - 1)] += 1.0;
    return y;
}

namespace {

Matrix onehot_rows(std::span<const int> ids, std::span<const std::size_t> nodes, int r) {
    Matrix y(nodes.size(), static_cast<std::size_t>(r));
    for (std::size_t a = 0; a < nodes.size(); ++a) {
        const Vector row = mean_zero_onehot(ids[nodes[a]], r);
        std::copy(row.begin(), row.end(), y.row(a).begin());
    }
    return y;
}

}  // namespace

std::vector<int> class_ids(const std::vector<NodeLabel>& labels) {
    std::vector<int> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(l.class_id);
    return out;
}

std::vector<int> domain_ids(const std::vector<NodeLabel>& labels) {
    std::vector<int> out;
    out.reserve(labels.size());
    for (const auto& l : labels) out.push_back(l.domain_id);
    return out;
}

Matrix class_label_matrix(const std::vector<NodeLabel>& labels, std::span<const std::size_t> nodes, int r) {
    return onehot_rows(class_ids(labels), nodes, r);
}

Matrix domain_label_matrix(const std::vector<NodeLabel>& labels, std::span<const std::size_t> nodes, int m) {
    return onehot_rows(domain_ids(labels), nodes, m);
}

std::vector<std::size_t> nodes_in_domain(const std::vector<NodeLabel>& labels, int domain) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i].domain_id == domain) out.push_back(i);
    return out;
}

std::vector<std::size_t> nodes_outside_domain(const std::vector<NodeLabel>& labels, int domain) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i].domain_id != domain) out.push_back(i);
    return out;
}

Matrix cholesky_solve(const Matrix& m, const Matrix& b) {
    require(m.is_square() && m.rows() == b.rows(), "cholesky_solve: shape mismatch");
    const std::size_t n = m.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t p = 0; p < j; ++p) d -= l(j, p) * l(j, p);
        if (!(d > 0.0)) throw NumericalError("cholesky_solve: matrix is not positive definite");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t p = 0; p < j; ++p) s -= l(i, p) * l(j, p);
            l(i, j) = s / l(j, j);
        }
    }
    Matrix x = b;
    for (std::size_t c = 0; c < b.cols(); ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = x(i, c);
            for (std::size_t p = 0; p < i; ++p) s -= l(i, p) * x(p, c);
            x(i, c) = s / l(i, i);
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double s = x(ii, c);
            for (std::size_t p = ii + 1; p < n; ++p) s -= l(p, ii) * x(p, c);
            x(ii, c) = s / l(ii, ii);
        }
    }
    return x;
}

ProbeWeights ridge_fit(const Matrix& features_s, const Matrix& labels_s, double eta,
                       std::vector<std::size_t> trained_on) {
    if (!(eta > 0.0) || !std::isfinite(eta)) throw ValidationError("eta must be positive");
    require(features_s.rows() >= 1, "ridge_fit: empty source set");
    require(features_s.rows() == labels_s.rows(), "ridge_fit: feature and label rows differ");
    Matrix gram = kernels::matmul_at(features_s, features_s);
    const double reg = eta * static_cast<double>(features_s.rows());
    for (std::size_t i = 0; i < gram.rows(); ++i) gram(i, i) += reg;
    const Matrix rhs = kernels::matmul_at(features_s, labels_s);
    ProbeWeights pw;
    pw.weights = cholesky_solve(gram, rhs);
    pw.eta = eta;
    pw.trained_on = std::move(trained_on);
    return pw;
}

ProbeWeights ridge_fit_nodes(const Matrix& features, std::span<const std::size_t> nodes,
                             const Matrix& labels_s, double eta) {
    return ridge_fit(features.select_rows(nodes), labels_s, eta,
                     std::vector<std::size_t>(nodes.begin(), nodes.end()));
}

std::vector<int> argmax_rows(const Matrix& scores) {
    std::vector<int> out(scores.rows(), 1);
    for (std::size_t i = 0; i < scores.rows(); ++i) {
        std::size_t best = 0;
        for (std::size_t j = 1; j < scores.cols(); ++j)
            if (scores(i, j) > scores(i, best)) best = j;
        out[i] = static_cast<int>(best) + 1;
    }
    return out;
}

Predictions predict(const Matrix& features, const ProbeWeights& pw) {
    if (features.cols() != pw.weights.rows())
        throw ValidationError("predict: feature dimension does not match probe weights");
    Predictions p;
    p.scores = kernels::matmul(features, pw.weights);
    p.classes = argmax_rows(p.scores);
    return p;
}

Matrix symmetric_pinv(const Matrix& m) {
    const EigenSystem es = symmetric_eigensystem(m);
    const std::size_t n = m.rows();
    double top = 0.0;
    for (double v : es.eigenvalues) top = std::max(top, std::abs(v));
    const double cutoff = 1e-12 * top;
    Matrix scaled(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double v = es.eigenvalues[j];
        if (std::abs(v) <= cutoff) continue;
        for (std::size_t i = 0; i < n; ++i) scaled(i, j) = es.eigenvectors(i, j) / v;
    }
    return kernels::matmul_bt(scaled, es.eigenvectors);
}

Matrix closed_form_target_prediction(const Matrix& scaled, std::size_t k, double eta,
                                     std::span<const std::size_t> source,
                                     std::span<const std::size_t> target, const Matrix& labels_s) {
    if (!(eta > 0.0)) throw ValidationError("eta must be positive");
    require(!source.empty(), "closed_form_target_prediction: empty source set");
    require(labels_s.rows() == source.size(), "closed_form_target_prediction: label rows differ");
    const Matrix mk = rank_k_approx(scaled, k);
    Matrix ss = mk.submatrix(source, source);
    // exact symmetry for the eigensolver
    for (std::size_t i = 0; i < ss.rows(); ++i)
        for (std::size_t j = i + 1; j < ss.cols(); ++j) ss(j, i) = ss(i, j);
    const double reg = eta * static_cast<double>(source.size());
    for (std::size_t i = 0; i < ss.rows(); ++i) ss(i, i) += reg;
    const Matrix ts = mk.submatrix(target, source);
    return kernels::matmul(ts, kernels::matmul(symmetric_pinv(ss), labels_s));
}

Matrix closed_form_target_prediction(const PairGraph& g, std::size_t k, double eta,
                                     std::span<const std::size_t> source,
                                     std::span<const std::size_t> target) {
    g.validate();
    Matrix scaled = g.weights;
    const double n = static_cast<double>(g.n_nodes);
    scaled *= n * n;
    return closed_form_target_prediction(scaled, k, eta, source, target,
                                         class_label_matrix(g.labels, source, g.num_classes()));
}

double zero_one_error(std::span<const int> predicted, std::span<const int> truth,
                      std::span<const std::size_t> nodes) {
    if (nodes.empty()) throw ValidationError("zero_one_error: empty node set");
    std::size_t wrong = 0;
    for (std::size_t i : nodes) {
        require(i < predicted.size() && i < truth.size(), "zero_one_error: node index out of range");
        if (predicted[i] != truth[i]) ++wrong;
    }
    return static_cast<double>(wrong) / static_cast<double>(nodes.size());
}

DomainProbe domain_probe(const Matrix& features, const std::vector<NodeLabel>& labels, double eta) {
    require(features.rows() == labels.size(), "domain_probe: feature rows must match labels");
    const int m = count_domains(labels);
    std::vector<std::size_t> nodes;
    std::vector<int> seen(static_cast<std::size_t>(m) + 1, 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].class_id == 1) {
            nodes.push_back(i);
            seen[static_cast<std::size_t>(labels[i].domain_id)] = 1;
        }
    }
    for (int d = 1; d <= m; ++d)
        if (!seen[static_cast<std::size_t>(d)])
            throw ValidationError("domain_probe: class 1 has no node in domain " + std::to_string(d));
    DomainProbe out;
    out.weights = ridge_fit_nodes(features, nodes, domain_label_matrix(labels, nodes, m), eta);
    const Predictions p = predict(features, out.weights);
    std::vector<std::size_t> all(labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    out.domain_error = zero_one_error(p.classes, domain_ids(labels), all);
    out.extension = m > 2;
    return out;
}

double cosine(std::span<const double> a, std::span<const double> b) {
    const double na = norm2(a);
    const double nb = norm2(b);
    if (na == 0.0 || nb == 0.0) throw NumericalError("cosine of a zero-norm weight vector");
    return dot(a, b) / (na * nb);
}

Cosines disentanglement_cosines(const Matrix& class_probe_src, const Matrix& class_probe_tgt,
                                const Matrix& domain_probe) {
    const std::size_t k = class_probe_src.rows();
    if (class_probe_tgt.rows() != k || domain_probe.rows() != k)
        throw ValidationError("disentanglement_cosines: probes must share the feature dimension");
    if (class_probe_tgt.cols() != class_probe_src.cols())
        throw ValidationError("disentanglement_cosines: class probes must share the class count");
    Cosines c;
    const std::size_t r = class_probe_src.cols();
    const std::size_t m = domain_probe.cols();
    for (std::size_t j = 0; j < r; ++j)
        c.src_vs_tgt += cosine(class_probe_src.column(j), class_probe_tgt.column(j));
    c.src_vs_tgt /= static_cast<double>(r);
    for (std::size_t j = 0; j < r; ++j) {
        for (std::size_t d = 0; d < m; ++d) {
            const Vector dom = domain_probe.column(d);
            c.src_vs_dom += std::abs(cosine(class_probe_src.column(j), dom));
            c.tgt_vs_dom += std::abs(cosine(class_probe_tgt.column(j), dom));
        }
    }
    c.src_vs_dom /= static_cast<double>(r * m);
    c.tgt_vs_dom /= static_cast<double>(r * m);
    return c;
}

}  // namespace connectgraph
