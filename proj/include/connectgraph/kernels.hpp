#pragma once

// Data-parallel dense kernels. Every routine partitions work by output row and
// evaluates each output entry with a fixed summation order, so results are
// bit-identical for any OpenMP thread count and identical to the serial
// reference versions in `kernels::serial`.

#include <cstddef>
#include <span>

#include "connectgraph/matrix.hpp"

namespace connectgraph::kernels {

/// C = A * B
Matrix matmul(const Matrix& a, const Matrix& b);
/// C = A * B^T
Matrix matmul_bt(const Matrix& a, const Matrix& b);
/// C = A^T * B
Matrix matmul_at(const Matrix& a, const Matrix& b);
/// y = A * x
Vector matvec(const Matrix& a, std::span<const double> x);

/// Trailing-block Householder step used by tridiagonalization:
/// with B = A[offset:, offset:], computes p = B v.
void trailing_matvec(const Matrix& a, std::size_t offset, std::span<const double> v,
                     std::span<double> p);
/// B -= v w^T + w v^T on the trailing block starting at `offset`.
void trailing_rank2_update(Matrix& a, std::size_t offset, std::span<const double> v,
                           std::span<const double> w);

/// Applies the rank-2 update to row `i` of the trailing block only.
void rank2_update_row(Matrix& a, std::size_t offset, std::size_t i, std::span<const double> v,
                      std::span<const double> w);
/// Fused step: applies the rank-2 update to rows 1.. of the trailing block at
/// `offset` (row 0 must already be updated) and, from each updated row,
/// computes p_next = B' v_next where B' is the block at offset + 1.
void trailing_rank2_update_matvec(Matrix& a, std::size_t offset, std::span<const double> v,
                                  std::span<const double> w, std::span<const double> v_next,
                                  std::span<double> p_next);

/// Number of threads the parallel kernels will use.
int max_threads();
/// Sets the OpenMP thread count (no-op without OpenMP).
void set_threads(int threads);

namespace serial {

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_bt(const Matrix& a, const Matrix& b);
Matrix matmul_at(const Matrix& a, const Matrix& b);
Vector matvec(const Matrix& a, std::span<const double> x);
void trailing_matvec(const Matrix& a, std::size_t offset, std::span<const double> v,
                     std::span<double> p);
void trailing_rank2_update(Matrix& a, std::size_t offset, std::span<const double> v,
                           std::span<const double> w);
void trailing_rank2_update_matvec(Matrix& a, std::size_t offset, std::span<const double> v,
                                  std::span<const double> w, std::span<const double> v_next,
                                  std::span<double> p_next);

}  // namespace serial

}  // namespace connectgraph::kernels
