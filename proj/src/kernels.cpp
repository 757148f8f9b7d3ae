#include "connectgraph/kernels.hpp"

#include <algorithm>
#include <cstdint>
#include <string>

#include "connectgraph/error.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace connectgraph::kernels {

namespace {

// Row kernels shared by the serial and parallel drivers. Keeping one body per
// output row is what makes the two paths bit-identical.

inline void matmul_row(const Matrix& a, const Matrix& b, std::size_t i, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    const std::size_t inner = a.cols();
    const std::size_t cols = b.cols();
    for (std::size_t k = 0; k < inner; ++k) {
        const double aik = a(i, k);
        if (aik == 0.0) continue;
        const double* brow = b.row(k).data();
        double* o = out.data();
        for (std::size_t j = 0; j < cols; ++j) o[j] += aik * brow[j];
    }
}

inline void matmul_bt_row(const Matrix& a, const Matrix& b, std::size_t i, std::span<double> out) {
    const auto arow = a.row(i);
    for (std::size_t j = 0; j < b.rows(); ++j) out[j] = dot(arow, b.row(j));
}

// Row i of A^T B, i.e. sum_k A(k,i) B(k,:)
inline void matmul_at_row(const Matrix& a, const Matrix& b, std::size_t i, std::span<double> out) {
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < a.rows(); ++k) {
        const double aki = a(k, i);
        if (aki == 0.0) continue;
        const auto brow = b.row(k);
        for (std::size_t j = 0; j < brow.size(); ++j) out[j] += aki * brow[j];
    }
}

inline double trailing_dot(const Matrix& a, std::size_t offset, std::size_t i,
                           std::span<const double> v) {
    return dot(a.row(offset + i).subspan(offset), v);
}

inline void trailing_update_row(Matrix& a, std::size_t offset, std::size_t i,
                                std::span<const double> v, std::span<const double> w) {
    double* row = a.row(offset + i).data() + offset;
    const double vi = v[i];
    const double wi = w[i];
    for (std::size_t j = 0; j < v.size(); ++j) row[j] -= vi * w[j] + wi * v[j];
}

inline void update_and_dot_row(Matrix& a, std::size_t offset, std::size_t i,
                               std::span<const double> v, std::span<const double> w,
                               std::span<const double> v_next, std::span<double> p_next) {
    trailing_update_row(a, offset, i, v, w);
    p_next[i - 1] = trailing_dot(a, offset + 1, i - 1, v_next);
}

void check_inner(std::size_t ainner, std::size_t binner, const char* what) {
    if (ainner != binner) throw ValidationError(std::string(what) + ": inner dimension mismatch");
}

}  // namespace

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

void set_threads(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_inner(a.cols(), b.rows(), "matmul");
    Matrix c(a.rows(), b.cols());
    const auto rows = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) matmul_row(a, b, static_cast<std::size_t>(i), c.row(i));
    return c;
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
    check_inner(a.cols(), b.cols(), "matmul_bt");
    Matrix c(a.rows(), b.rows());
    const auto rows = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i)
        matmul_bt_row(a, b, static_cast<std::size_t>(i), c.row(i));
    return c;
}

Matrix matmul_at(const Matrix& a, const Matrix& b) {
    check_inner(a.rows(), b.rows(), "matmul_at");
    Matrix c(a.cols(), b.cols());
    const auto rows = static_cast<std::int64_t>(a.cols());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i)
        matmul_at_row(a, b, static_cast<std::size_t>(i), c.row(i));
    return c;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
    require(a.cols() == x.size(), "matvec: dimension mismatch");
    Vector y(a.rows());
    const auto rows = static_cast<std::int64_t>(a.rows());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) y[i] = dot(a.row(i), x);
    return y;
}

void trailing_matvec(const Matrix& a, std::size_t offset, std::span<const double> v,
                     std::span<double> p) {
    const auto len = static_cast<std::int64_t>(v.size());
#pragma omp parallel for schedule(static) if (len > 256)
    for (std::int64_t i = 0; i < len; ++i)
        p[i] = trailing_dot(a, offset, static_cast<std::size_t>(i), v);
}

void trailing_rank2_update(Matrix& a, std::size_t offset, std::span<const double> v,
                           std::span<const double> w) {
    const auto len = static_cast<std::int64_t>(v.size());
#pragma omp parallel for schedule(static) if (len > 256)
    for (std::int64_t i = 0; i < len; ++i)
        trailing_update_row(a, offset, static_cast<std::size_t>(i), v, w);
}

void rank2_update_row(Matrix& a, std::size_t offset, std::size_t i, std::span<const double> v,
                      std::span<const double> w) {
    trailing_update_row(a, offset, i, v, w);
}

void trailing_rank2_update_matvec(Matrix& a, std::size_t offset, std::span<const double> v,
                                  std::span<const double> w, std::span<const double> v_next,
                                  std::span<double> p_next) {
    const auto len = static_cast<std::int64_t>(v.size());
#pragma omp parallel for schedule(static) if (len > 256)
    for (std::int64_t i = 1; i < len; ++i)
        update_and_dot_row(a, offset, static_cast<std::size_t>(i), v, w, v_next, p_next);
}

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b) {
    check_inner(a.cols(), b.rows(), "matmul");
    Matrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) matmul_row(a, b, i, c.row(i));
    return c;
}

Matrix matmul_bt(const Matrix& a, const Matrix& b) {
    check_inner(a.cols(), b.cols(), "matmul_bt");
    Matrix c(a.rows(), b.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) matmul_bt_row(a, b, i, c.row(i));
    return c;
}

Matrix matmul_at(const Matrix& a, const Matrix& b) {
    check_inner(a.rows(), b.rows(), "matmul_at");
    Matrix c(a.cols(), b.cols());
    for (std::size_t i = 0; i < a.cols(); ++i) matmul_at_row(a, b, i, c.row(i));
    return c;
}

Vector matvec(const Matrix& a, std::span<const double> x) {
    require(a.cols() == x.size(), "matvec: dimension mismatch");
    Vector y(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) y[i] = dot(a.row(i), x);
    return y;
}

void trailing_matvec(const Matrix& a, std::size_t offset, std::span<const double> v,
                     std::span<double> p) {
    for (std::size_t i = 0; i < v.size(); ++i) p[i] = trailing_dot(a, offset, i, v);
}

void trailing_rank2_update(Matrix& a, std::size_t offset, std::span<const double> v,
                           std::span<const double> w) {
    for (std::size_t i = 0; i < v.size(); ++i) trailing_update_row(a, offset, i, v, w);
}

void trailing_rank2_update_matvec(Matrix& a, std::size_t offset, std::span<const double> v,
                                  std::span<const double> w, std::span<const double> v_next,
                                  std::span<double> p_next) {
    for (std::size_t i = 1; i < v.size(); ++i) update_and_dot_row(a, offset, i, v, w, v_next, p_next);
}

}  // namespace serial

}  // namespace connectgraph::kernels
