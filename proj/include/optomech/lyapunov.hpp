#pragma once

#include <Eigen/Dense>

#include "optomech/error.hpp"
#include "optomech/gaussian.hpp"

namespace optomech {

/// Solves A X + X Aᵀ + D = 0 for X by vectorization,
///   (I ⊗ A + A ⊗ I) vec X = −vec D,
/// with a fully pivoted LU and two steps of iterative refinement. Intended for
/// the small systems met here (n ≤ ~10); cost is O(n⁶).
template <typename DerivedA, typename DerivedD>
DenseMatrix<typename DerivedA::Scalar> solve_continuous_lyapunov(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedD>& d) {
  using Scalar = typename DerivedA::Scalar;
  const Index n = a.rows();
  if (a.cols() != n || d.rows() != n || d.cols() != n)
    throw DomainError("Lyapunov: dimension mismatch");

  const DenseMatrix<Scalar> eye = DenseMatrix<Scalar>::Identity(n, n);
  DenseMatrix<Scalar> k(n * n, n * n);
  // Column-major vec: vec(A X) = (I ⊗ A) vec X, vec(X Aᵀ) = (A ⊗ I) vec X.
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      k.block(i * n, j * n, n, n) = eye(i, j) * a + a(i, j) * eye;

  Eigen::FullPivLU<DenseMatrix<Scalar>> lu(k);
  if (!lu.isInvertible()) throw NumericalError("Lyapunov: A and −A share an eigenvalue");

  DenseMatrix<Scalar> rhs = -d;
  const Eigen::Map<const DenseVector<Scalar>> b(rhs.data(), n * n);
  DenseVector<Scalar> x = lu.solve(b);
  for (int pass = 0; pass < 2; ++pass) x += lu.solve(b - k * x);

  DenseMatrix<Scalar> out = Eigen::Map<const DenseMatrix<Scalar>>(x.data(), n, n);
  return out;
}

}  // namespace optomech
