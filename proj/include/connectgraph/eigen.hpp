#pragma once

#include <cstddef>

#include "connectgraph/matrix.hpp"

namespace connectgraph {

/// Eigen-decomposition of a real symmetric matrix.
///
/// `eigenvalues` holds the full spectrum sorted descending. `eigenvectors`
/// holds orthonormal columns paired with the leading eigenvalues; it has N
/// columns for a full decomposition and k columns for a partial one.
/// Each column is sign-normalized so that its first component with magnitude
/// above 1e-10 is positive.
struct EigenSystem {
    Vector eigenvalues;
    Matrix eigenvectors;
    double residual_tol = 0.0;

    std::size_t vector_count() const noexcept { return eigenvectors.cols(); }
};

/// Symmetric tridiagonal form T = Q^T M Q with Q stored as Householder reflectors.
struct Tridiagonal {
    Vector diag;
    Vector offdiag;      // offdiag[i] couples i and i+1; size n-1 (empty when n <= 1)
    Matrix reflectors;   // row k holds v_k in columns k+1..n-1 (v_k[k+1] == 1)
    Vector tau;          // H_k = I - tau[k] v_k v_k^T

    std::size_t n() const noexcept { return diag.size(); }
};

Tridiagonal tridiagonalize(Matrix m);
/// Explicit Q with M = Q T Q^T.
Matrix form_q(const Tridiagonal& t);
/// Overwrites z (length n) with Q z.
void apply_q(const Tridiagonal& t, std::span<double> z);
/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL, unsorted.
Vector tridiagonal_eigenvalues(Vector diag, Vector offdiag);

/// Full eigensystem by Householder tridiagonalization and implicit QL.
/// Throws ValidationError for non-symmetric input (tolerance 1e-12 relative
/// to max |M|) and NumericalError on QL non-convergence.
EigenSystem symmetric_eigensystem(const Matrix& m, double tol = 1e-10);

/// Leading k eigenpairs (all eigenvalues are still returned). Uses inverse
/// iteration on the tridiagonal form for the requested vectors, falling back
/// to the full solver when k is a large fraction of N.
EigenSystem top_eigenpairs(const Matrix& m, std::size_t k);

/// Full spectrum, sorted descending.
Vector symmetric_eigenvalues(const Matrix& m);

/// Serial cyclic Jacobi rotations. Converges when the off-diagonal Frobenius
/// mass falls below 1e-13 * ||M||_F. Reference implementation for tests and
/// benchmarks; O(N^3) per sweep.
EigenSystem jacobi_eigensystem(const Matrix& m, int max_sweeps = 100);

/// Spectral norm of a symmetric matrix: max |lambda_i|.
double operator_norm(const Matrix& m);

/// Best rank-k approximation sum_{i<k} lambda_i u_i u_i^T (descending order).
Matrix rank_k_approx(const Matrix& m, std::size_t k);
Matrix rank_k_approx(const EigenSystem& es, std::size_t k);

/// Flips each column so its first significant component is positive.
void normalize_signs(Matrix& vectors);

void require_symmetric(const Matrix& m, double rel_tol = 1e-12);

}  // namespace connectgraph
