#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace connectgraph {

using Vector = std::vector<double>;

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix diagonal(std::span<const double> values);
    static Matrix from_rows(std::size_t rows, std::size_t cols, std::vector<double> data);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }
    bool is_square() const noexcept { return rows_ == cols_; }

    double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const noexcept {
        return {data_.data() + i * cols_, cols_};
    }
    Vector column(std::size_t j) const;
    void set_column(std::size_t j, std::span<const double> values);

    std::span<double> data() noexcept { return data_; }
    std::span<const double> data() const noexcept { return data_; }

    Matrix transposed() const;
    /// Rows `row_idx` and columns `col_idx`, in the given order.
    Matrix submatrix(std::span<const std::size_t> row_idx, std::span<const std::size_t> col_idx) const;
    Matrix select_rows(std::span<const std::size_t> row_idx) const;
    Matrix leading_columns(std::size_t count) const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double s) noexcept;

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Matrix a, double s);
Matrix operator*(double s, Matrix a);

double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
double sum_all(const Matrix& m);
double trace(const Matrix& m);
/// max |m(i,j) - m(j,i)|
double asymmetry(const Matrix& m);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);

}  // namespace connectgraph
