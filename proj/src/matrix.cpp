#include "connectgraph/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "connectgraph/error.hpp"

namespace connectgraph {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        require(r.size() == cols_, "Matrix: ragged initializer list");
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::diagonal(std::span<const double> values) {
    Matrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

Matrix Matrix::from_rows(std::size_t rows, std::size_t cols, std::vector<double> data) {
    require(data.size() == rows * cols, "Matrix::from_rows: size mismatch");
    Matrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    m.data_ = std::move(data);
    return m;
}

Vector Matrix::column(std::size_t j) const {
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

void Matrix::set_column(std::size_t j, std::span<const double> values) {
    require(values.size() == rows_, "Matrix::set_column: size mismatch");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = values[i];
}

Matrix Matrix::transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

Matrix Matrix::submatrix(std::span<const std::size_t> row_idx,
                         std::span<const std::size_t> col_idx) const {
    Matrix out(row_idx.size(), col_idx.size());
    for (std::size_t a = 0; a < row_idx.size(); ++a)
        for (std::size_t b = 0; b < col_idx.size(); ++b) out(a, b) = (*this)(row_idx[a], col_idx[b]);
    return out;
}

Matrix Matrix::select_rows(std::span<const std::size_t> row_idx) const {
    Matrix out(row_idx.size(), cols_);
    for (std::size_t a = 0; a < row_idx.size(); ++a) {
        auto src = row(row_idx[a]);
        std::copy(src.begin(), src.end(), out.row(a).begin());
    }
    return out;
}

Matrix Matrix::leading_columns(std::size_t count) const {
    require(count <= cols_, "Matrix::leading_columns: count exceeds columns");
    Matrix out(rows_, count);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < count; ++j) out(i, j) = (*this)(i, j);
    return out;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "Matrix +=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    require(rows_ == other.rows_ && cols_ == other.cols_, "Matrix -=: shape mismatch");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
    return *this;
}

Matrix& Matrix::operator*=(double s) noexcept {
    for (double& v : data_) v *= s;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

double frobenius_norm(const Matrix& m) { return norm2(m.data()); }

double max_abs(const Matrix& m) {
    double best = 0.0;
    for (double v : m.data()) best = std::max(best, std::abs(v));
    return best;
}

double sum_all(const Matrix& m) {
    double s = 0.0;
    for (double v : m.data()) s += v;
    return s;
}

double trace(const Matrix& m) {
    double s = 0.0;
    for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) s += m(i, i);
    return s;
}

double asymmetry(const Matrix& m) {
    require(m.is_square(), "asymmetry: matrix must be square");
    double worst = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j)
            worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
    return worst;
}

double dot(std::span<const double> a, std::span<const double> b) {
    require(a.size() == b.size(), "dot: size mismatch");
    // four interleaved partial sums: a fixed order that still vectorizes
    const std::size_t n = a.size();
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s0 += a[i] * b[i];
        s1 += a[i + 1] * b[i + 1];
        s2 += a[i + 2] * b[i + 2];
        s3 += a[i + 3] * b[i + 3];
    }
    for (; i < n; ++i) s0 += a[i] * b[i];
    return (s0 + s1) + (s2 + s3);
}

double norm2(std::span<const double> v) {
    // scaled to avoid overflow on large entries
    double scale = 0.0;
    for (double x : v) scale = std::max(scale, std::abs(x));
    if (scale == 0.0) return 0.0;
    double s = 0.0;
    for (double x : v) {
        const double t = x / scale;
        s += t * t;
    }
    return scale * std::sqrt(s);
}

}  // namespace connectgraph
