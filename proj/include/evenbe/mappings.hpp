#pragma once

#include "evenbe/pencil.hpp"

namespace evenbe {

// Outcome of a minimal-Frobenius-norm mapping problem.
struct MapSolution {
  bool exists = false;
  Matrix delta;          // minimizer, meaningful iff exists
  double fro_norm = 0.0; // ‖delta‖_F computed from delta itself
  // Spectral-norm infimum of the feasible set (two-sided problem only).
  std::optional<double> spectral_inf;
  // Value of the analytic norm expression when it is well defined; kept for
  // diagnostics so a mismatch with fro_norm is visible instead of asserted.
  std::optional<double> closed_form_fro_norm;
  std::string failure_reason;
};

// Moore-Penrose pseudoinverse via SVD; singular values <= rank_tol * sigma_max
// are treated as zero.
Matrix pseudoinverse(const Matrix& A, double rank_tol = kRankTol);

// Minimal skew-Hermitian Delta with Delta X = Y.
// Solvable iff Y X^+ X = Y and Y^H X = -X^H Y; the minimizer is
// Y X^+ - (Y X^+)^H - (X^+)^H X^H Y X^+.
MapSolution skew_hermitian_minimal_map(const Matrix& X, const Matrix& Y);

// Minimal Delta with Delta u = r and Delta^H w = s (u, w nonzero).
// Solvable iff u^H s = r^H w.
MapSolution two_sided_minimal_map(const Vector& u, const Vector& r,
                                  const Vector& w, const Vector& s);

// Minimal real Delta with Delta u = r and Delta^T w = s, for complex data with
// rank [u conj(u)] = rank [w conj(w)] = 2. Solvable iff u^H s = r^H w and
// u^T s = r^T w.
MapSolution real_two_sided_minimal_map(const Vector& u, const Vector& r,
                                       const Vector& w, const Vector& s);

}  // namespace evenbe
