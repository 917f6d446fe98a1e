#pragma once

#include "evenbe/mappings.hpp"
#include "evenbe/pencil.hpp"

namespace evenbe {

// Eigenpair backward errors of (lambda, x) under unstructured and
// even-structure perturbations of the whole pencil.
double eta_unstructured(const StructuredPencil& p, const EigenPairQuery& q);
double eta_even(const StructuredPencil& p, const EigenPairQuery& q);

// Mapping data of a scope. Writing r = (J-R+lambda E)x2 + Bx3,
// sn = -(J+R+lambda E)x1 and sB = B^H x1 + S x3:
//   - scopes without B: u = x2, w = x1, s = sn;
//   - scopes with B:    u = [c x2; x3], w = x1, s = [sn/conj(c); sB], where the
//     scale c is 1 (JB, RB and all symmetry scopes), lambda (EB), sqrt(2)
//     (JRB), sqrt(1+|lambda|^2) (REB, JEB) or sqrt(2+|lambda|^2) (JREB);
//   - JE/sym: u holds X = [x2 x1] and r holds Y = [r -sn]; w, s are empty.
struct ScopeVectors {
  Matrix u, w, r, s;
  std::string scale_record;
};

ScopeVectors scope_vectors(const StructuredPencil& p, const EigenPairQuery& q,
                           const PerturbationScope& scope);

// Finiteness conditions of the scope, each with its measured residual; the
// backward error is finite iff every condition passes.
std::vector<ConditionDiagnostic> finiteness_check(
    const StructuredPencil& p, const EigenPairQuery& q,
    const PerturbationScope& scope);
bool all_passed(const std::vector<ConditionDiagnostic>& conditions);

// Eigenpair backward errors per scope. Exact reports set lower = upper =
// value; Bounds reports leave value = 0 and carry the upper-bound feasible
// point as minimizer; Infinite reports carry diagnostics only.
BackwardErrorReport eta_block(const StructuredPencil& p,
                              const EigenPairQuery& q,
                              const PerturbationScope& scope);
BackwardErrorReport eta_symmetry(const StructuredPencil& p,
                                 const EigenPairQuery& q,
                                 const PerturbationScope& scope);
BackwardErrorReport eta_block_real(const StructuredPencil& p,
                                   const EigenPairQuery& q,
                                   const PerturbationScope& scope);

// Dispatches to eta_block / eta_symmetry / eta_block_real by scope.
BackwardErrorReport eigenpair_backward_error(const StructuredPencil& p,
                                             const EigenPairQuery& q,
                                             const PerturbationScope& scope);

// Eigenvalue backward errors (infimum of the eigenpair error over all x).
double eta_block_eigenvalue(const StructuredPencil& p, Complex lambda,
                            BlockSet blocks);
double eta_symmetry_eigenvalue(const StructuredPencil& p, Complex lambda,
                               BlockSet blocks);  // JR and JRB only

// Rank-one perturbation attaining the eigenvalue backward error, together
// with an eigenvector of the perturbed pencil at lambda.
struct EigenvalueCertificate {
  double value = 0.0;
  MinimizerBlocks minimizer;
  Vector x;
};
EigenvalueCertificate eigenvalue_minimizer(
    const StructuredPencil& p, Complex lambda, BlockSet blocks,
    Structure structure = Structure::BlockOnly);

// Splits a mapping-level minimizer (n x n, or n x (n+m) when the scope
// includes B) into perturbation blocks; for Bounds scopes this yields the
// upper-bound feasible point. Blocks outside the scope are zero; for
// field=Real the imaginary roundoff of the real mapping is dropped.
MinimizerBlocks reconstruct_minimizer(const PerturbationScope& scope,
                                      const Matrix& delta, Complex lambda,
                                      Index m);

}  // namespace evenbe
