#include "evenbe/backward_errors.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>

namespace evenbe {

namespace {

Complex imaginary_axis(Complex lambda) {
  const double mag = std::abs(lambda);
  if (!(mag >= 1e-300))
    throw std::invalid_argument("lambda must be nonzero purely imaginary");
  if (std::abs(lambda.real()) > 1e-12 * mag)
    throw std::invalid_argument(
        "lambda must lie on the imaginary axis (got nonzero real part)");
  return Complex(0.0, lambda.imag());
}

struct RowData {
  Vector r;   // (J-R+lambda E) x2 + B x3
  Vector sn;  // -(J+R+lambda E) x1
  Vector sB;  // B^H x1 + S x3
};

RowData row_data(const StructuredPencil& p, const EigenPairQuery& q) {
  RowData d;
  const Complex l = q.lambda;
  d.r = (p.J - p.R + l * p.E) * q.x2 + p.B * q.x3;
  d.sn = -((p.J + p.R + l * p.E) * q.x1);
  d.sB = p.B.adjoint() * q.x1 + p.S * q.x3;
  return d;
}

// Scale c with u = [c x2; x3] for scopes that include B.
Complex u_scale(const PerturbationScope& scope, Complex lambda) {
  if (scope.structure == Structure::SymmetryPreserving) return Complex(1.0);
  const double a2 = std::norm(lambda);
  switch (scope.blocks) {
    case BlockSet::EB: return lambda;
    case BlockSet::JRB: return Complex(std::sqrt(2.0));
    case BlockSet::REB:
    case BlockSet::JEB: return Complex(std::sqrt(1.0 + a2));
    case BlockSet::JREB: return Complex(std::sqrt(2.0 + a2));
    default: return Complex(1.0);  // JB, RB
  }
}

std::string u_scale_name(const PerturbationScope& scope) {
  if (scope.structure == Structure::SymmetryPreserving) return "1";
  switch (scope.blocks) {
    case BlockSet::EB: return "lambda";
    case BlockSet::JRB: return "sqrt(2)";
    case BlockSet::REB:
    case BlockSet::JEB: return "sqrt(1+|lambda|^2)";
    case BlockSet::JREB: return "sqrt(2+|lambda|^2)";
    default: return "1";
  }
}

// Frobenius divisor applied to the combined minimizer of scopes without B.
double combined_divisor(BlockSet blocks, Complex lambda) {
  const double a2 = std::norm(lambda);
  switch (blocks) {
    case BlockSet::JE:
    case BlockSet::RE: return std::sqrt(1.0 + a2);
    case BlockSet::JR: return std::sqrt(2.0);
    case BlockSet::JRE: return std::sqrt(2.0 + a2);
    default:
      throw InvalidScope("combined_divisor: scope includes B");
  }
}

ConditionDiagnostic make_cond(std::string name, double residual,
                              double threshold) {
  ConditionDiagnostic c;
  c.name = std::move(name);
  c.residual = residual;
  c.threshold = threshold;
  c.passed = residual <= threshold;
  return c;
}

// Second singular value of [v conj(v)] relative to the first; rank 2 means
// v has a genuinely complex direction.
ConditionDiagnostic rank2_cond(const std::string& name, const Vector& v) {
  ConditionDiagnostic c;
  c.name = name;
  Matrix pair(v.size(), 2);
  pair.col(0) = v;
  pair.col(1) = v.conjugate();
  Eigen::JacobiSVD<Matrix> svd(pair);
  const double s0 = v.size() > 0 ? svd.singularValues()(0) : 0.0;
  const double s1 = v.size() > 1 ? svd.singularValues()(1) : 0.0;
  c.residual = s1;
  c.threshold = kRankTol * s0;
  c.passed = s1 > c.threshold;  // lower bound: rank must be 2
  return c;
}

ConditionDiagnostic x3_cond(const EigenPairQuery& q) {
  return make_cond("x3 = 0", q.x3.norm(), kFiniteTol * full_x(q).norm());
}

ConditionDiagnostic bh_x1_cond(const StructuredPencil& p,
                               const EigenPairQuery& q) {
  return make_cond("B^H x1 = 0", (p.B.adjoint() * q.x1).norm(),
                   kFiniteTol * p.B.norm() * q.x1.norm());
}

// Branch thresholds of the minimizer formulas.
bool effectively_zero(const Vector& v, double x_norm) {
  return v.norm() <= kFiniteTol * x_norm;
}

MapSolution branch_minimal_map(const ScopeVectors& sv, const EigenPairQuery& q) {
  const double xn = full_x(q).norm();
  MapSolution sol;
  if (effectively_zero(q.x1, xn)) {
    sol.exists = true;
    sol.delta = sv.r * sv.u.adjoint() / sv.u.squaredNorm();
  } else if (effectively_zero(q.x2, xn)) {
    sol.exists = true;
    sol.delta = sv.w * sv.s.adjoint() / sv.w.squaredNorm();
  } else {
    sol = two_sided_minimal_map(sv.u.col(0), sv.r.col(0), sv.w.col(0),
                                sv.s.col(0));
    if (!sol.exists) return sol;
  }
  sol.fro_norm = sol.delta.norm();
  return sol;
}

BackwardErrorReport infeasible_map_report(
    std::vector<ConditionDiagnostic> conds, const std::string& reason) {
  BackwardErrorReport rep;
  ConditionDiagnostic c;
  c.name = "mapping feasibility: " + reason;
  c.residual = 1.0;
  c.threshold = 0.0;
  c.passed = false;
  conds.push_back(c);
  rep.kind = ReportKind::Infinite;
  rep.finiteness = std::move(conds);
  return rep;
}

double sigma_min(const Matrix& A) {
  Eigen::JacobiSVD<Matrix> svd(A);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

Matrix hermitian_part(const Matrix& A) { return 0.5 * (A + A.adjoint()); }
Matrix skew_part(const Matrix& A) { return 0.5 * (A - A.adjoint()); }

}  // namespace

double eta_unstructured(const StructuredPencil& p, const EigenPairQuery& q) {
  validate(p, q);
  const Vector x = full_x(q);
  return (evaluate(p, q.lambda) * x).norm() /
         (x.norm() * std::sqrt(1.0 + std::norm(q.lambda)));
}

double eta_even(const StructuredPencil& p, const EigenPairQuery& q) {
  validate(p, q);
  const Vector x = full_x(q);
  const Vector Lx = evaluate(p, q.lambda) * x;
  const double x2 = x.squaredNorm();
  const double radicand =
      2.0 * x2 * Lx.squaredNorm() - std::norm(x.dot(Lx));
  return std::sqrt(std::max(0.0, radicand) /
                   (x2 * x2 * (1.0 + std::norm(q.lambda))));
}

ScopeVectors scope_vectors(const StructuredPencil& p, const EigenPairQuery& q,
                           const PerturbationScope& scope) {
  require_valid_scope(scope);
  validate(p, q);
  const RowData d = row_data(p, q);
  ScopeVectors sv;

  if (scope.blocks == BlockSet::JE &&
      scope.structure == Structure::SymmetryPreserving) {
    Matrix X(p.n, 2), Y(p.n, 2);
    X.col(0) = q.x2;
    X.col(1) = q.x1;
    Y.col(0) = d.r;
    Y.col(1) = -d.sn;
    sv.u = X;
    sv.r = Y;
    sv.scale_record = "X=[x2 x1], Y=[(J-R+lambda E)x2+Bx3 (J+R+lambda E)x1]";
    return sv;
  }

  sv.w = q.x1;
  sv.r = d.r;
  if (!has_block(scope.blocks, 'B')) {
    sv.u = q.x2;
    sv.s = d.sn;
    sv.scale_record = "u=x2, w=x1, s=-(J+R+lambda E)x1";
    return sv;
  }

  const Complex c = u_scale(scope, q.lambda);
  Matrix u(p.n + p.m, 1), s(p.n + p.m, 1);
  u << c * q.x2, q.x3;
  s << d.sn / std::conj(c), d.sB;
  sv.u = u;
  sv.s = s;
  sv.scale_record = "u=[c x2; x3], w=x1, s=[sn/conj(c); B^H x1+S x3], c=" +
                    u_scale_name(scope);
  return sv;
}

std::vector<ConditionDiagnostic> finiteness_check(
    const StructuredPencil& p, const EigenPairQuery& q,
    const PerturbationScope& scope) {
  require_valid_scope(scope);
  validate(p, q);
  std::vector<ConditionDiagnostic> conds;

  if (scope.field == Field::Real) {
    conds.push_back(rank2_cond("rank([x1 conj(x1)]) = 2", q.x1));
    conds.push_back(rank2_cond("rank([x2 conj(x2)]) = 2", q.x2));
    conds.push_back(x3_cond(q));
    if (scope.blocks == BlockSet::JR)
      conds.push_back(make_cond("B^T x1 = 0",
                                (p.B.transpose() * q.x1).norm(),
                                kFiniteTol * p.B.norm() * q.x1.norm()));
    const ScopeVectors sv = scope_vectors(p, q, scope);
    const Complex gap = Vector(sv.u).conjugate().dot(Vector(sv.s)) -
                        Vector(sv.r).conjugate().dot(Vector(sv.w));
    conds.push_back(make_cond(
        "u^T s = r^T w", std::abs(gap),
        kCompatTol * (1.0 + sv.u.norm() * sv.s.norm() +
                      sv.r.norm() * sv.w.norm())));
    return conds;
  }

  if (scope.blocks == BlockSet::JE &&
      scope.structure == Structure::SymmetryPreserving) {
    const ScopeVectors sv = scope_vectors(p, q, scope);
    const Matrix& X = sv.u;
    const Matrix& Y = sv.r;
    const double tol = kCompatTol * (1.0 + X.norm() * Y.norm());
    const Matrix Xd = pseudoinverse(X);
    conds.push_back(make_cond("Y X^+ X = Y", (Y * Xd * X - Y).norm(), tol));
    conds.push_back(make_cond("Y^H X = -X^H Y",
                              (Y.adjoint() * X + X.adjoint() * Y).norm(), tol));
    conds.push_back(make_cond(
        "B^H x1 + S x3 = 0", (p.B.adjoint() * q.x1 + p.S * q.x3).norm(),
        kFiniteTol * (p.B.norm() * q.x1.norm() + p.S.norm() * q.x3.norm())));
    return conds;
  }

  conds.push_back(x3_cond(q));
  switch (scope.blocks) {
    case BlockSet::JE:
    case BlockSet::RE:
    case BlockSet::JR:
    case BlockSet::JRE:
      conds.push_back(bh_x1_cond(p, q));
      break;
    default:
      break;  // scopes with B need x3 = 0 only
  }
  return conds;
}

bool all_passed(const std::vector<ConditionDiagnostic>& conditions) {
  for (const auto& c : conditions)
    if (!c.passed) return false;
  return true;
}

BackwardErrorReport eta_block(const StructuredPencil& p,
                              const EigenPairQuery& q,
                              const PerturbationScope& scope) {
  require_valid_scope(scope);
  if (scope.structure != Structure::BlockOnly ||
      scope.field != Field::Complex)
    throw InvalidScope("eta_block expects a block-only complex scope, got " +
                       to_string(scope));
  validate(p, q);

  BackwardErrorReport rep;
  rep.finiteness = finiteness_check(p, q, scope);
  if (!all_passed(rep.finiteness)) {
    rep.kind = ReportKind::Infinite;
    return rep;
  }

  const ScopeVectors sv = scope_vectors(p, q, scope);
  const MapSolution sol = branch_minimal_map(sv, q);
  if (!sol.exists)
    return infeasible_map_report(std::move(rep.finiteness),
                                 sol.failure_reason);

  rep.kind = ReportKind::Exact;
  rep.value = has_block(scope.blocks, 'B')
                  ? sol.fro_norm
                  : sol.fro_norm / combined_divisor(scope.blocks, q.lambda);
  rep.lower = rep.upper = rep.value;
  rep.minimizer = reconstruct_minimizer(scope, sol.delta, q.lambda, p.m);
  return rep;
}

BackwardErrorReport eta_symmetry(const StructuredPencil& p,
                                 const EigenPairQuery& q,
                                 const PerturbationScope& scope) {
  require_valid_scope(scope);
  if (scope.structure != Structure::SymmetryPreserving ||
      scope.field != Field::Complex)
    throw InvalidScope(
        "eta_symmetry expects a symmetry-preserving complex scope, got " +
        to_string(scope));
  validate(p, q);

  BackwardErrorReport rep;
  rep.finiteness = finiteness_check(p, q, scope);
  if (!all_passed(rep.finiteness)) {
    rep.kind = ReportKind::Infinite;
    return rep;
  }

  const double a2 = std::norm(q.lambda);
  const double amag = std::abs(q.lambda);

  if (scope.blocks == BlockSet::JE) {
    const ScopeVectors sv = scope_vectors(p, q, scope);
    const MapSolution sol = skew_hermitian_minimal_map(sv.u, sv.r);
    if (!sol.exists)
      return infeasible_map_report(std::move(rep.finiteness),
                                   sol.failure_reason);
    rep.kind = ReportKind::Exact;
    rep.value = sol.fro_norm / std::sqrt(1.0 + a2);
    rep.lower = rep.upper = rep.value;
    rep.minimizer = reconstruct_minimizer(scope, sol.delta, q.lambda, p.m);
    return rep;
  }

  const ScopeVectors sv = scope_vectors(p, q, scope);
  const MapSolution sol = branch_minimal_map(sv, q);
  if (!sol.exists)
    return infeasible_map_report(std::move(rep.finiteness),
                                 sol.failure_reason);
  const Matrix& delta = sol.delta;
  const Index n = p.n;
  rep.minimizer = reconstruct_minimizer(scope, delta, q.lambda, p.m);

  switch (scope.blocks) {
    case BlockSet::JR:
    case BlockSet::JRB:
      rep.kind = ReportKind::Exact;
      rep.value = sol.fro_norm;
      rep.lower = rep.upper = rep.value;
      return rep;
    case BlockSet::RE: {
      const Matrix H = hermitian_part(delta);
      const Matrix K = skew_part(delta);
      rep.kind = ReportKind::Bounds;
      rep.lower = amag <= 1.0 ? sol.fro_norm : sol.fro_norm / amag;
      rep.upper = std::sqrt(H.squaredNorm() + K.squaredNorm() / a2);
      return rep;
    }
    case BlockSet::JRE: {
      const Matrix H = hermitian_part(delta);
      const Matrix K = skew_part(delta);
      rep.kind = ReportKind::Bounds;
      rep.lower = sol.fro_norm / std::sqrt(1.0 + a2);
      rep.upper = std::sqrt(H.squaredNorm() + K.squaredNorm() / (1.0 + a2));
      return rep;
    }
    case BlockSet::REB: {
      const Matrix d1 = delta.leftCols(n);
      const Matrix d2 = delta.rightCols(p.m);
      const Matrix H = hermitian_part(d1);
      const Matrix K = skew_part(d1);
      const double d1sq = d1.squaredNorm();
      rep.kind = ReportKind::Bounds;
      rep.lower = std::sqrt((amag <= 1.0 ? d1sq : d1sq / a2) +
                            d2.squaredNorm());
      rep.upper = std::sqrt(H.squaredNorm() + K.squaredNorm() / a2 +
                            d2.squaredNorm());
      return rep;
    }
    case BlockSet::JREB: {
      const Matrix d1 = delta.leftCols(n);
      const Matrix d2 = delta.rightCols(p.m);
      const Matrix H = hermitian_part(d1);
      const Matrix K = skew_part(d1);
      rep.kind = ReportKind::Bounds;
      rep.lower = std::sqrt(d1.squaredNorm() / (1.0 + a2) + d2.squaredNorm());
      rep.upper = std::sqrt(H.squaredNorm() + K.squaredNorm() / (1.0 + a2) +
                            d2.squaredNorm());
      return rep;
    }
    default:
      throw InvalidScope("eta_symmetry: unsupported scope " +
                         to_string(scope));
  }
}

BackwardErrorReport eta_block_real(const StructuredPencil& p,
                                   const EigenPairQuery& q,
                                   const PerturbationScope& scope) {
  require_valid_scope(scope);
  if (scope.field != Field::Real)
    throw InvalidScope("eta_block_real expects a real scope, got " +
                       to_string(scope));
  if (!p.is_real)
    throw DegenerateInput("real backward errors require a real pencil");
  validate(p, q);

  BackwardErrorReport rep;
  rep.finiteness = finiteness_check(p, q, scope);
  const ConditionDiagnostic& rank1 = rep.finiteness[0];
  const ConditionDiagnostic& rank2 = rep.finiteness[1];
  if (!rank1.passed)
    throw RankDeficient("rank([x1 conj(x1)]) must be 2 for real scopes");
  if (!rank2.passed)
    throw RankDeficient("rank([x2 conj(x2)]) must be 2 for real scopes");
  if (!all_passed(rep.finiteness)) {
    rep.kind = ReportKind::Infinite;
    return rep;
  }

  const ScopeVectors sv = scope_vectors(p, q, scope);
  const MapSolution sol = real_two_sided_minimal_map(
      sv.u.col(0), sv.r.col(0), sv.w.col(0), sv.s.col(0));
  if (!sol.exists)
    return infeasible_map_report(std::move(rep.finiteness),
                                 sol.failure_reason);

  rep.kind = ReportKind::Exact;
  const bool jr_block = scope.blocks == BlockSet::JR &&
                        scope.structure == Structure::BlockOnly;
  rep.value = jr_block ? sol.fro_norm / std::sqrt(2.0) : sol.fro_norm;
  rep.lower = rep.upper = rep.value;
  rep.minimizer = reconstruct_minimizer(scope, sol.delta, q.lambda, p.m);
  return rep;
}

BackwardErrorReport eigenpair_backward_error(const StructuredPencil& p,
                                             const EigenPairQuery& q,
                                             const PerturbationScope& scope) {
  require_valid_scope(scope);
  if (scope.field == Field::Real) return eta_block_real(p, q, scope);
  return scope.structure == Structure::BlockOnly ? eta_block(p, q, scope)
                                                 : eta_symmetry(p, q, scope);
}

double eta_block_eigenvalue(const StructuredPencil& p, Complex lambda,
                            BlockSet blocks) {
  validate(p);
  lambda = imaginary_axis(lambda);
  const Matrix A = p.J - p.R + lambda * p.E;
  if (!has_block(blocks, 'B'))
    return sigma_min(A) / combined_divisor(blocks, lambda);

  const PerturbationScope scope{blocks, Structure::BlockOnly, Field::Complex};
  const Complex c = u_scale(scope, lambda);
  Matrix W(p.n, p.n + p.m);
  W << A / c, p.B;
  return std::min(sigma_min(W.adjoint()), sigma_min(A) / std::abs(c));
}

double eta_symmetry_eigenvalue(const StructuredPencil& p, Complex lambda,
                               BlockSet blocks) {
  validate(p);
  lambda = imaginary_axis(lambda);
  const Matrix A = p.J - p.R + lambda * p.E;
  if (blocks == BlockSet::JR) return sigma_min(A);
  if (blocks == BlockSet::JRB) {
    Matrix W(p.n, p.n + p.m);
    W << A, p.B;
    return std::min(sigma_min(W.adjoint()), sigma_min(A));
  }
  throw InvalidScope(
      "symmetry eigenvalue backward errors exist only for JR and JRB");
}

EigenvalueCertificate eigenvalue_minimizer(const StructuredPencil& p,
                                           Complex lambda, BlockSet blocks,
                                           Structure structure) {
  validate(p);
  lambda = imaginary_axis(lambda);
  const PerturbationScope scope{blocks, structure, Field::Complex};
  require_valid_scope(scope);
  if (structure == Structure::SymmetryPreserving && blocks != BlockSet::JR &&
      blocks != BlockSet::JRB)
    throw InvalidScope(
        "symmetry eigenvalue backward errors exist only for JR and JRB");

  const Matrix A = p.J - p.R + lambda * p.E;
  const bool with_B = has_block(blocks, 'B');
  const Complex c = with_B ? u_scale(scope, lambda) : Complex(1.0);
  const double divisor =
      with_B ? std::abs(c)
             : (structure == Structure::SymmetryPreserving
                    ? 1.0
                    : combined_divisor(blocks, lambda));

  Eigen::JacobiSVD<Matrix> svdA(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Index last = svdA.singularValues().size() - 1;
  const double candA = svdA.singularValues()(last) / divisor;

  double candW = std::numeric_limits<double>::infinity();
  Eigen::JacobiSVD<Matrix> svdW;
  if (with_B) {
    Matrix W(p.n, p.n + p.m);
    W << A / c, p.B;
    svdW.compute(W.adjoint(), Eigen::ComputeThinU | Eigen::ComputeThinV);
    candW = svdW.singularValues()(svdW.singularValues().size() - 1);
  }

  EigenvalueCertificate cert;
  Vector x = Vector::Zero(2 * p.n + p.m);
  if (candA <= candW) {
    // x = (0, v, 0) with A v = sigma u_sv; the combined perturbation is
    // sigma u_sv v^H, handed to the reconstruction in mapping coordinates.
    cert.value = candA;
    const Vector usv = svdA.matrixU().col(last);
    const Vector v = svdA.matrixV().col(last);
    const Matrix combined = svdA.singularValues()(last) * usv * v.adjoint();
    Matrix delta;
    if (with_B) {
      delta = Matrix::Zero(p.n, p.n + p.m);
      delta.leftCols(p.n) = combined / c;
    } else {
      delta = combined;
    }
    cert.minimizer = reconstruct_minimizer(scope, delta, lambda, p.m);
    x.segment(p.n, p.n) = v;
  } else {
    // x = (g, 0, 0) with [A/c B]^H g = sigma* h; delta = sigma* g h^H.
    cert.value = candW;
    const Index lastW = svdW.singularValues().size() - 1;
    const Vector g = svdW.matrixV().col(lastW);
    const Vector h = svdW.matrixU().col(lastW);
    const Matrix delta = svdW.singularValues()(lastW) * g * h.adjoint();
    cert.minimizer = reconstruct_minimizer(scope, delta, lambda, p.m);
    x.head(p.n) = g;
  }
  cert.x = x;
  return cert;
}

MinimizerBlocks reconstruct_minimizer(const PerturbationScope& scope,
                                      const Matrix& delta, Complex lambda,
                                      Index m) {
  require_valid_scope(scope);
  lambda = imaginary_axis(lambda);
  const Index n = delta.rows();
  const bool with_B = has_block(scope.blocks, 'B');
  if (delta.cols() != (with_B ? n + m : n))
    throw DegenerateInput("reconstruct_minimizer: delta has the wrong shape");

  const Complex lc = std::conj(lambda);
  const double a2 = std::norm(lambda);
  const Matrix d1 = delta.leftCols(n);

  MinimizerBlocks d;
  d.dJ = Matrix::Zero(n, n);
  d.dR = Matrix::Zero(n, n);
  d.dE = Matrix::Zero(n, n);
  d.dB = Matrix::Zero(n, m);
  if (with_B) d.dB = delta.rightCols(m);

  if (scope.structure == Structure::BlockOnly) {
    switch (scope.blocks) {
      case BlockSet::JE:
        d.dJ = d1 / (1.0 + a2);
        d.dE = lc * d1 / (1.0 + a2);
        break;
      case BlockSet::RE:
        d.dR = -d1 / (1.0 + a2);
        d.dE = lc * d1 / (1.0 + a2);
        break;
      case BlockSet::JR:
        d.dJ = 0.5 * d1;
        d.dR = -0.5 * d1;
        break;
      case BlockSet::JB:
        d.dJ = d1;
        break;
      case BlockSet::RB:
        d.dR = -d1;
        break;
      case BlockSet::EB:
        d.dE = d1;
        break;
      case BlockSet::JRB:
        d.dJ = d1 / std::sqrt(2.0);
        d.dR = -d1 / std::sqrt(2.0);
        break;
      case BlockSet::REB:
        d.dR = -d1 / std::sqrt(1.0 + a2);
        d.dE = lc * d1 / std::sqrt(1.0 + a2);
        break;
      case BlockSet::JEB:
        d.dJ = d1 / std::sqrt(1.0 + a2);
        d.dE = lc * d1 / std::sqrt(1.0 + a2);
        break;
      case BlockSet::JRE:
        d.dJ = d1 / (2.0 + a2);
        d.dR = -d1 / (2.0 + a2);
        d.dE = lc * d1 / (2.0 + a2);
        break;
      case BlockSet::JREB:
        d.dJ = d1 / std::sqrt(2.0 + a2);
        d.dR = -d1 / std::sqrt(2.0 + a2);
        d.dE = lc * d1 / std::sqrt(2.0 + a2);
        break;
    }
  } else {
    const Matrix H = hermitian_part(d1);
    const Matrix K = skew_part(d1);
    switch (scope.blocks) {
      case BlockSet::JE:  // d1 is the skew-Hermitian map minimizer
        d.dJ = d1 / (1.0 + a2);
        d.dE = lc * d1 / (1.0 + a2);
        break;
      case BlockSet::JR:
      case BlockSet::JRB:
        d.dJ = K;
        d.dR = -H;
        break;
      case BlockSet::RE:
      case BlockSet::REB:
        d.dR = -H;
        d.dE = (lc / a2) * K;
        break;
      case BlockSet::JRE:
      case BlockSet::JREB:
        d.dR = -H;
        d.dJ = K / (1.0 + a2);
        d.dE = lc * K / (1.0 + a2);
        break;
      default:
        throw InvalidScope("reconstruct_minimizer: unsupported scope " +
                           to_string(scope));
    }
  }

  if (scope.field == Field::Real) {
    d.dJ = d.dJ.real().cast<Complex>();
    d.dR = d.dR.real().cast<Complex>();
    d.dE = d.dE.real().cast<Complex>();
    d.dB = d.dB.real().cast<Complex>();
  }
  return d;
}

}  // namespace evenbe
