#include "evenbe/mappings.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace evenbe {

Matrix pseudoinverse(const Matrix& A, double rank_tol) {
  if (A.size() == 0) return Matrix::Zero(A.cols(), A.rows());
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_tol * (sv.size() > 0 ? sv(0) : 0.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) inv(i) = 1.0 / sv(i);
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

MapSolution skew_hermitian_minimal_map(const Matrix& X, const Matrix& Y) {
  if (X.rows() != Y.rows() || X.cols() != Y.cols())
    throw DegenerateInput("skew_hermitian_minimal_map: X and Y must have equal shapes");

  MapSolution sol;
  const double tol = kCompatTol * (1.0 + X.norm() * Y.norm());

  Matrix Xd = pseudoinverse(X);
  Matrix P = Y * Xd;

  const double range_res = (P * X - Y).norm();
  const double skew_res = (Y.adjoint() * X + X.adjoint() * Y).norm();
  if (range_res > tol) {
    sol.failure_reason = "no solution: Y X^+ X = Y fails (residual " +
                         std::to_string(range_res) + ")";
    return sol;
  }
  if (skew_res > tol) {
    sol.failure_reason = "no solution: Y^H X = -X^H Y fails (residual " +
                         std::to_string(skew_res) + ")";
    return sol;
  }

  sol.exists = true;
  sol.delta = P - P.adjoint() - Xd.adjoint() * X.adjoint() * Y * Xd;
  sol.fro_norm = sol.delta.norm();
  const double radicand =
      2.0 * P.squaredNorm() -
      (P * P.adjoint() * (X * Xd)).trace().real();
  sol.closed_form_fro_norm = std::sqrt(std::max(0.0, radicand));
  return sol;
}

MapSolution two_sided_minimal_map(const Vector& u, const Vector& r,
                                  const Vector& w, const Vector& s) {
  if (u.norm() == 0.0 || w.norm() == 0.0)
    throw DegenerateInput("two_sided_minimal_map: u and w must be nonzero");
  if (r.size() != w.size() || s.size() != u.size())
    throw DegenerateInput("two_sided_minimal_map: shape mismatch");

  MapSolution sol;
  const double tol =
      kCompatTol * (1.0 + u.norm() * s.norm() + r.norm() * w.norm());
  const Complex compat = u.dot(s) - r.dot(w);  // u^H s - r^H w
  if (std::abs(compat) > tol) {
    sol.failure_reason = "no solution: u^H s = r^H w fails (gap " +
                         std::to_string(std::abs(compat)) + ")";
    return sol;
  }

  const double u2 = u.squaredNorm();
  const double w2 = w.squaredNorm();
  const Complex su = s.dot(u);  // s^H u
  sol.exists = true;
  sol.delta = r * u.adjoint() / u2 + w * s.adjoint() / w2 -
              su * w * u.adjoint() / (w2 * u2);
  sol.fro_norm = sol.delta.norm();
  sol.spectral_inf = std::max(r.norm() / u.norm(), s.norm() / w.norm());
  const double radicand = r.squaredNorm() / u2 + s.squaredNorm() / w2 -
                          std::norm(su) / (w.norm() * u.norm());
  if (radicand >= 0.0) sol.closed_form_fro_norm = std::sqrt(radicand);
  return sol;
}

MapSolution real_two_sided_minimal_map(const Vector& u, const Vector& r,
                                       const Vector& w, const Vector& s) {
  if (r.size() != w.size() || s.size() != u.size())
    throw DegenerateInput("real_two_sided_minimal_map: shape mismatch");

  Matrix U2(u.size(), 2), W2(w.size(), 2);
  U2.col(0) = u;
  U2.col(1) = u.conjugate();
  W2.col(0) = w;
  W2.col(1) = w.conjugate();

  auto rank2 = [](const Matrix& A) {
    if (A.rows() < 2) return false;
    Eigen::JacobiSVD<Matrix> svd(A);
    return svd.singularValues()(1) > kRankTol * svd.singularValues()(0);
  };
  if (!rank2(U2))
    throw RankDeficient("real_two_sided_minimal_map: [u conj(u)] must have rank 2");
  if (!rank2(W2))
    throw RankDeficient("real_two_sided_minimal_map: [w conj(w)] must have rank 2");

  MapSolution sol;
  const double tol =
      kCompatTol * (1.0 + u.norm() * s.norm() + r.norm() * w.norm());
  const Complex herm_gap = u.dot(s) - r.dot(w);             // u^H s - r^H w
  const Complex bilin_gap =
      u.conjugate().dot(s) - r.conjugate().dot(w);  // u^T s - r^T w
  if (std::abs(herm_gap) > tol) {
    sol.failure_reason = "no solution: u^H s = r^H w fails (gap " +
                         std::to_string(std::abs(herm_gap)) + ")";
    return sol;
  }
  if (std::abs(bilin_gap) > tol) {
    sol.failure_reason = "no solution: u^T s = r^T w fails (gap " +
                         std::to_string(std::abs(bilin_gap)) + ")";
    return sol;
  }

  Matrix R2(r.size(), 2), S2(s.size(), 2);
  R2.col(0) = r;
  R2.col(1) = r.conjugate();
  S2.col(0) = s;
  S2.col(1) = s.conjugate();

  Matrix U2d = pseudoinverse(U2);
  Matrix W2d = pseudoinverse(W2);
  Matrix T = (S2 * W2d).adjoint();
  sol.exists = true;
  sol.delta = R2 * U2d + T - T * U2 * U2d;
  sol.fro_norm = sol.delta.norm();
  return sol;
}

}  // namespace evenbe
