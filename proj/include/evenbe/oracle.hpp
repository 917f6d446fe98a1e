#pragma once

#include <cstdint>
#include <random>

#include "evenbe/pencil.hpp"

namespace evenbe {

// Deterministic random stream. mt19937_64 raw draws are mapped to doubles
// explicitly ((x >> 11) * 2^-53) and normals come from Box-Muller, so the
// sequence is bit-identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

  double uniform();                  // [0, 1)
  double uniform(double a, double b);
  double normal();                   // standard normal
  Complex normal_complex();          // independent N(0,1) parts
  Vector normal_vector(Index n, bool real_valued = false);
  Matrix normal_matrix(Index rows, Index cols, bool real_valued = false);

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stream-splitting: independent child seed for (base, stream).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

// Orthonormal basis of null(A) as matrix columns (empty when A has full
// column rank). Singular values <= rank_tol * sigma_max count as zero.
Matrix null_space(const Matrix& A, double rank_tol = kRankTol);

struct OracleConfig {
  int restarts = 20;        // reparameterized solves, min-reduced in order
  int max_iter = 500;       // cap on total linear solves
  std::uint64_t seed = 1;   // seeds the restart reparameterizations
  double tol_opt = 1e-9;    // relative feasibility tolerance of the solve
};

// Infimum of sqrt(sum_k ||Delta_k||_F^2) over perturbations of the scope's
// blocks (in the scope's symmetry classes and field) solving the eigenpair
// equation (L - DeltaL)(lambda) x = 0. The blocks are expanded in
// Frobenius-orthonormal bases of their classes, the equation rows become a
// real-linear system in the coordinates, and the minimum-norm least-squares
// solution is the convex minimum. Restart k >= 1 re-poses the same problem
// in a seeded Householder-rotated coordinate basis; results are min-reduced
// in restart order. Throws Infeasible when the scope's finiteness conditions
// fail or the linear system is inconsistent beyond cfg.tol_opt.
double least_norm_feasible(const StructuredPencil& p, const EigenPairQuery& q,
                           const PerturbationScope& scope,
                           const OracleConfig& cfg = {});

// sigma_min((L - DeltaL)(lambda)): values <= 1e-10 * ||L(lambda)||_F certify
// that lambda became an eigenvalue of the perturbed pencil.
double certify_eigenvalue(const StructuredPencil& p, const MinimizerBlocks& d,
                          Complex lambda);

// Finite eigenvalues of M + zN via a shift-and-invert solve; generalized
// eigenvalues with |mu| <= 1e-12 * max|mu| in the inverted spectrum are
// classified infinite and dropped.
std::vector<Complex> finite_eigenvalues(const StructuredPencil& p);

// Seeded generator. J skew-Hermitian, E Hermitian, B arbitrary,
// S = G2^H G2 + 0.1 I positive definite, R = G^H G positive semidefinite.
// When m < n, the kernel of R is aligned to contain min(2, n-m) vectors of
// null(B^H) plus one extra direction so admissible queries exist (two
// intersection vectors, needed for real-field queries, require m <= n-2).
// With strictly_passive, draws are rejected while some finite eigenvalue has
// |Re| <= 1e-6 (at most 100 redraws, then GenerationFailed).
StructuredPencil random_structured_pencil(Index n, Index m, std::uint64_t seed,
                                          bool strictly_passive = true,
                                          bool real_valued = false);

// Seeded admissible query: x3 = 0, x1 in null(B^H) ∩ null(R), x2 in null(R),
// lambda = i t with t uniform on [-3, 3] and |t| >= 0.05; passes the
// finiteness checks of every complex scope. For scope.field == Real, x2 is
// additionally drawn orthogonal to conj(E x1) and conj((J + R) x1) so the
// real bilinear conditions hold as well. Throws EmptyKernel when a required
// null space (or its constrained subspace) is trivial.
EigenPairQuery admissible_query(
    const StructuredPencil& p, std::uint64_t seed,
    const PerturbationScope& scope = {BlockSet::JE, Structure::BlockOnly,
                                      Field::Complex});

}  // namespace evenbe
