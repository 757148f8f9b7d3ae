#include "connectgraph/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <string>

#include "connectgraph/error.hpp"
#include "connectgraph/kernels.hpp"
#include "connectgraph/rng.hpp"

namespace connectgraph {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kSignThreshold = 1e-10;

Matrix symmetrized(const Matrix& m) {
    Matrix s = m;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) {
            const double avg = 0.5 * (m(i, j) + m(j, i));
            s(i, j) = avg;
            s(j, i) = avg;
        }
    return s;
}

std::vector<std::size_t> descending_order(const Vector& values) {
    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
    return order;
}

// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix.
// `e` has length n with e[i] coupling i and i+1 (e[n-1] unused). When
// `rows` is non-null, the rotations are applied to its rows, so starting from
// Q^T the rows end up as eigenvectors.
void implicit_ql(Vector& d, Vector& e, Matrix* rows) {
    const std::size_t n = d.size();
    if (n == 0) return;
    e.resize(n, 0.0);
    e[n - 1] = 0.0;
    constexpr int kMaxIter = 60;
    // absolute floor keeps clusters of (near) zero eigenvalues from stalling
    double tnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) tnorm = std::max(tnorm, std::abs(d[i]) + std::abs(e[i]));
    const double floor = kEps * tnorm;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m = l;
        while (true) {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= kEps * dd || std::abs(e[m]) <= floor) break;
            }
            if (m == l) break;
            if (iter++ == kMaxIter)
                throw NumericalError("implicit QL: no convergence within iteration budget");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t ii = m; ii-- > l;) {
                const std::size_t i = ii;
                double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (rows != nullptr) {
                    auto zi = rows->row(i);
                    auto zi1 = rows->row(i + 1);
                    for (std::size_t k = 0; k < zi.size(); ++k) {
                        f = zi1[k];
                        zi1[k] = s * zi[k] + c * f;
                        zi[k] = c * zi[k] - s * f;
                    }
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

// LU factorization with partial pivoting of (T - shift I), LAPACK dgttrf style.
struct TridiagonalLU {
    Vector dl, dd, du, du2;
    std::vector<char> pivot;

    TridiagonalLU(const Vector& diag, const Vector& off, double shift, double tiny) {
        const std::size_t n = diag.size();
        dd.resize(n);
        for (std::size_t i = 0; i < n; ++i) dd[i] = diag[i] - shift;
        dl = off;
        du = off;
        du2.assign(n > 2 ? n - 2 : 0, 0.0);
        pivot.assign(n > 0 ? n - 1 : 0, 0);
        auto guard = [tiny](double& v) {
            if (std::abs(v) < tiny) v = v < 0.0 ? -tiny : tiny;
        };
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (std::abs(dd[i]) >= std::abs(dl[i])) {
                guard(dd[i]);
                const double fact = dl[i] / dd[i];
                dl[i] = fact;
                dd[i + 1] -= fact * du[i];
            } else {
                const double fact = dd[i] / dl[i];
                dd[i] = dl[i];
                dl[i] = fact;
                const double temp = du[i];
                du[i] = dd[i + 1];
                dd[i + 1] = temp - fact * dd[i + 1];
                if (i + 2 < n) {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                pivot[i] = 1;
            }
        }
        if (n > 0) guard(dd[n - 1]);
    }

    void solve(std::span<double> b) const {
        const std::size_t n = dd.size();
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (!pivot[i]) {
                b[i + 1] -= dl[i] * b[i];
            } else {
                const double temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - dl[i] * b[i];
            }
        }
        for (std::size_t ii = n; ii-- > 0;) {
            double v = b[ii];
            if (ii + 1 < n) v -= du[ii] * b[ii + 1];
            if (ii + 2 < n) v -= du2[ii] * b[ii + 2];
            b[ii] = v / dd[ii];
        }
    }
};

void scale_to_unit(std::span<double> v) {
    const double nrm = norm2(v);
    if (nrm == 0.0) return;
    for (double& x : v) x /= nrm;
}

double tridiagonal_residual(const Vector& d, const Vector& e, std::span<const double> x,
                            double lambda) {
    const std::size_t n = d.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = (d[i] - lambda) * x[i];
        if (i > 0) r += e[i - 1] * x[i - 1];
        if (i + 1 < n) r += e[i] * x[i + 1];
        s += r * r;
    }
    return std::sqrt(s);
}

// Eigenvectors of T for the given eigenvalues (sorted descending) by inverse
// iteration, reorthogonalizing inside clusters of close eigenvalues.
Matrix tridiagonal_inverse_iteration(const Vector& d, const Vector& e, const Vector& lambdas) {
    const std::size_t n = d.size();
    const std::size_t k = lambdas.size();
    double tnorm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double row = std::abs(d[i]);
        if (i > 0) row += std::abs(e[i - 1]);
        if (i + 1 < n) row += std::abs(e[i]);
        tnorm = std::max(tnorm, row);
    }
    if (tnorm == 0.0) tnorm = 1.0;
    const double tiny = kEps * tnorm;
    const double cluster_tol = 1e-3 * tnorm;
    const double converged = 4.0 * static_cast<double>(n) * kEps * tnorm;

    Matrix vecs(k, n);  // row j = eigenvector j
    std::size_t cluster_start = 0;
    for (std::size_t j = 0; j < k; ++j) {
        if (j > 0 && std::abs(lambdas[j] - lambdas[j - 1]) > cluster_tol) cluster_start = j;
        TridiagonalLU lu(d, e, lambdas[j], tiny);
        auto x = vecs.row(j);
        for (std::size_t i = 0; i < n; ++i) x[i] = keyed_uniform(0xE1CE, j, i) - 0.5;
        auto reorthogonalize = [&] {
            for (std::size_t q = cluster_start; q < j; ++q) {
                const auto prev = vecs.row(q);
                const double proj = dot(prev, x);
                for (std::size_t i = 0; i < n; ++i) x[i] -= proj * prev[i];
            }
        };
        reorthogonalize();
        scale_to_unit(x);
        for (int iter = 0; iter < 8; ++iter) {
            lu.solve(x);
            reorthogonalize();
            scale_to_unit(x);
            if (iter >= 1 && tridiagonal_residual(d, e, x, lambdas[j]) <= converged) break;
        }
        // a final pass guarantees orthogonality after the last solve
        reorthogonalize();
        scale_to_unit(x);
        if (norm2(x) == 0.0) throw NumericalError("inverse iteration collapsed to zero vector");
    }
    return vecs;
}

EigenSystem assemble(const Vector& values, const Matrix& vector_rows, std::size_t count,
                     const std::vector<std::size_t>& order, double tol) {
    const std::size_t n = values.size();
    EigenSystem es;
    es.residual_tol = tol;
    es.eigenvalues.resize(n);
    for (std::size_t j = 0; j < n; ++j) es.eigenvalues[j] = values[order[j]];
    es.eigenvectors = Matrix(vector_rows.cols(), count);
    for (std::size_t j = 0; j < count; ++j) es.eigenvectors.set_column(j, vector_rows.row(order[j]));
    normalize_signs(es.eigenvectors);
    return es;
}

}  // namespace

void require_symmetric(const Matrix& m, double rel_tol) {
    require(m.is_square(), "expected a square matrix");
    const double scale = std::max(1.0, max_abs(m));
    if (asymmetry(m) > rel_tol * scale)
        throw ValidationError("matrix is not symmetric (max asymmetry " +
                              std::to_string(asymmetry(m)) + ")");
}

void normalize_signs(Matrix& vectors) {
    for (std::size_t j = 0; j < vectors.cols(); ++j) {
        double lead = 0.0;
        for (std::size_t i = 0; i < vectors.rows(); ++i) {
            if (std::abs(vectors(i, j)) > kSignThreshold) {
                lead = vectors(i, j);
                break;
            }
        }
        if (lead < 0.0)
            for (std::size_t i = 0; i < vectors.rows(); ++i) vectors(i, j) = -vectors(i, j);
    }
}

Tridiagonal tridiagonalize(Matrix a) {
    require(a.is_square(), "tridiagonalize: matrix must be square");
    const std::size_t n = a.rows();
    Tridiagonal t;
    t.diag.assign(n, 0.0);
    t.offdiag.assign(n > 0 ? n - 1 : 0, 0.0);
    t.tau.assign(n > 0 ? n - 1 : 0, 0.0);
    // Reflectors for columns this small would only amplify round-off (and can
    // overflow through 1 / (alpha - beta)); the column is treated as reduced.
    const double negligible = kEps * kEps * max_abs(a);

    // Builds H_k from row k (columns k+1..), storing v_k in place.
    auto make_reflector = [&](std::size_t k) {
        const std::size_t len = n - k - 1;
        auto x = a.row(k).subspan(k + 1, len);
        const double alpha = x[0];
        const double xnorm = len > 1 ? norm2(x.subspan(1)) : 0.0;
        x[0] = 1.0;
        if (xnorm <= negligible) {
            t.offdiag[k] = alpha;
            return false;
        }
        const double beta = -std::copysign(std::hypot(alpha, xnorm), alpha);
        const double scale = 1.0 / (alpha - beta);
        for (std::size_t i = 1; i < len; ++i) x[i] *= scale;
        t.offdiag[k] = beta;
        t.tau[k] = (beta - alpha) / beta;
        return true;
    };

    // p holds B v_k for the pending step; the update of step k and the
    // product B' v_{k+1} share a single pass over the trailing block.
    Vector p(n), p_next(n), w(n);
    bool active = n > 1 && make_reflector(0);
    if (active) kernels::trailing_matvec(a, 1, a.row(0).subspan(1), std::span<double>(p.data(), n - 1));
    for (std::size_t k = 0; k + 1 < n; ++k) {
        t.diag[k] = a(k, k);
        const std::size_t len = n - k - 1;
        const bool has_next = k + 2 < n;
        if (!active) {
            active = has_next && make_reflector(k + 1);
            if (active)
                kernels::trailing_matvec(a, k + 2, a.row(k + 1).subspan(k + 2),
                                         std::span<double>(p.data(), len - 1));
            continue;
        }
        const double tau = t.tau[k];
        const std::span<const double> v = a.row(k).subspan(k + 1, len);
        auto pk = std::span<double>(p.data(), len);
        auto wk = std::span<double>(w.data(), len);
        for (double& pi : pk) pi *= tau;
        const double kk = 0.5 * tau * dot(pk, v);
        for (std::size_t i = 0; i < len; ++i) wk[i] = pk[i] - kk * v[i];

        kernels::rank2_update_row(a, k + 1, 0, v, wk);
        active = has_next && make_reflector(k + 1);
        if (active) {
            kernels::trailing_rank2_update_matvec(a, k + 1, v, wk, a.row(k + 1).subspan(k + 2),
                                                  std::span<double>(p_next.data(), len - 1));
            std::swap(p, p_next);
        } else {
            // column k+1 below the diagonal is never read again
            kernels::trailing_rank2_update(a, k + 2, v.subspan(1),
                                           std::span<const double>(wk).subspan(1));
        }
    }
    if (n > 0) t.diag[n - 1] = a(n - 1, n - 1);
    t.reflectors = std::move(a);
    return t;
}

void apply_q(const Tridiagonal& t, std::span<double> z) {
    const std::size_t n = t.n();
    require(z.size() == n, "apply_q: size mismatch");
    for (std::size_t kk = t.tau.size(); kk-- > 0;) {
        const double tau = t.tau[kk];
        if (tau == 0.0) continue;
        const auto v = t.reflectors.row(kk).subspan(kk + 1);
        auto zs = z.subspan(kk + 1);
        const double s = tau * dot(v, zs);
        for (std::size_t i = 0; i < v.size(); ++i) zs[i] -= s * v[i];
    }
}

Matrix form_q(const Tridiagonal& t) {
    const std::size_t n = t.n();
    Matrix q = Matrix::identity(n);
    Vector s(n);
    for (std::size_t kk = t.tau.size(); kk-- > 0;) {
        const double tau = t.tau[kk];
        if (tau == 0.0) continue;
        const auto v = t.reflectors.row(kk).subspan(kk + 1);
        const std::size_t off = kk + 1;
        std::fill(s.begin(), s.end(), 0.0);
        for (std::size_t i = 0; i < v.size(); ++i) {
            const auto qrow = q.row(off + i);
            for (std::size_t j = off; j < n; ++j) s[j] += v[i] * qrow[j];
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            auto qrow = q.row(off + i);
            const double f = tau * v[i];
            for (std::size_t j = off; j < n; ++j) qrow[j] -= f * s[j];
        }
    }
    return q;
}

Vector tridiagonal_eigenvalues(Vector diag, Vector offdiag) {
    implicit_ql(diag, offdiag, nullptr);
    return diag;
}

EigenSystem symmetric_eigensystem(const Matrix& m, double tol) {
    require_symmetric(m);
    const std::size_t n = m.rows();
    Tridiagonal t = tridiagonalize(symmetrized(m));
    Matrix rows = form_q(t).transposed();
    Vector d = t.diag;
    Vector e = t.offdiag;
    implicit_ql(d, e, &rows);
    return assemble(d, rows, n, descending_order(d), tol);
}

EigenSystem top_eigenpairs(const Matrix& m, std::size_t k) {
    require_symmetric(m);
    const std::size_t n = m.rows();
    require(k <= n, "top_eigenpairs: k exceeds matrix dimension");
    if (4 * k >= n) {
        EigenSystem full = symmetric_eigensystem(m);
        full.eigenvectors = full.eigenvectors.leading_columns(k);
        return full;
    }
    Tridiagonal t = tridiagonalize(symmetrized(m));
    Vector values = tridiagonal_eigenvalues(t.diag, t.offdiag);
    const auto order = descending_order(values);
    Vector lambdas(k);
    for (std::size_t j = 0; j < k; ++j) lambdas[j] = values[order[j]];
    Matrix rows = tridiagonal_inverse_iteration(t.diag, t.offdiag, lambdas);
    const auto count = static_cast<std::int64_t>(k);
#pragma omp parallel for schedule(static)
    for (std::int64_t j = 0; j < count; ++j) apply_q(t, rows.row(static_cast<std::size_t>(j)));

    EigenSystem es;
    es.residual_tol = 1e-10;
    es.eigenvalues.resize(n);
    for (std::size_t j = 0; j < n; ++j) es.eigenvalues[j] = values[order[j]];
    es.eigenvectors = rows.transposed();
    normalize_signs(es.eigenvectors);
    return es;
}

Vector symmetric_eigenvalues(const Matrix& m) {
    require_symmetric(m);
    Tridiagonal t = tridiagonalize(symmetrized(m));
    Vector values = tridiagonal_eigenvalues(t.diag, t.offdiag);
    std::sort(values.begin(), values.end(), std::greater<>());
    return values;
}

EigenSystem jacobi_eigensystem(const Matrix& m, int max_sweeps) {
    require_symmetric(m);
    const std::size_t n = m.rows();
    Matrix a = symmetrized(m);
    Matrix v = Matrix::identity(n);
    const double target = 1e-13 * frobenius_norm(a);
    auto off_mass = [&] {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) s += a(i, j) * a(i, j);
        return std::sqrt(s);
    };
    bool converged = off_mass() <= target;
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
        converged = off_mass() <= target;
    }
    if (!converged) throw NumericalError("Jacobi eigensolver: no convergence within sweep budget");
    Vector values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
    return assemble(values, v.transposed(), n, descending_order(values), 1e-12);
}

double operator_norm(const Matrix& m) {
    if (m.empty()) return 0.0;
    const Vector values = symmetric_eigenvalues(m);
    return std::max(std::abs(values.front()), std::abs(values.back()));
}

Matrix rank_k_approx(const EigenSystem& es, std::size_t k) {
    require(k >= 1 && k <= es.vector_count(), "rank_k_approx: k out of range");
    const Matrix& u = es.eigenvectors;
    Matrix scaled(u.rows(), k);
    for (std::size_t i = 0; i < u.rows(); ++i)
        for (std::size_t j = 0; j < k; ++j) scaled(i, j) = u(i, j) * es.eigenvalues[j];
    return kernels::matmul_bt(scaled, u.leading_columns(k));
}

Matrix rank_k_approx(const Matrix& m, std::size_t k) {
    require(m.is_square(), "rank_k_approx: matrix must be square");
    require(k >= 1 && k <= m.rows(), "rank_k_approx: k out of range");
    return rank_k_approx(top_eigenpairs(m, k), k);
}

}  // namespace connectgraph
