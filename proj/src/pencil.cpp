#include "evenbe/pencil.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <utility>

namespace evenbe {

namespace {

double sym_threshold(const Matrix& a) {
  return kSymTol * std::max(1.0, a.norm());
}

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

StructuredPencil make_pencil(Matrix J, Matrix R, Matrix E, Matrix B, Matrix S) {
  StructuredPencil p;
  p.n = J.rows();
  p.m = S.rows();
  p.J = std::move(J);
  p.R = std::move(R);
  p.E = std::move(E);
  p.B = std::move(B);
  p.S = std::move(S);

  double max_imag = 0.0;
  for (const Matrix* blk : {&p.J, &p.R, &p.E, &p.B, &p.S})
    if (blk->size() > 0)
      max_imag = std::max(max_imag, blk->imag().cwiseAbs().maxCoeff());
  p.is_real = max_imag <= kSymTol;

  validate(p);
  return p;
}

void validate(const StructuredPencil& p) {
  require(p.n >= 1 && p.m >= 1, "pencil dimensions must be positive");
  require(p.J.rows() == p.n && p.J.cols() == p.n, "J must be n x n");
  require(p.R.rows() == p.n && p.R.cols() == p.n, "R must be n x n");
  require(p.E.rows() == p.n && p.E.cols() == p.n, "E must be n x n");
  require(p.B.rows() == p.n && p.B.cols() == p.m, "B must be n x m");
  require(p.S.rows() == p.m && p.S.cols() == p.m, "S must be m x m");

  require((p.J + p.J.adjoint()).norm() <= sym_threshold(p.J),
          "J must be skew-Hermitian");
  require((p.R - p.R.adjoint()).norm() <= sym_threshold(p.R),
          "R must be Hermitian");
  require((p.E - p.E.adjoint()).norm() <= sym_threshold(p.E),
          "E must be Hermitian");
  require((p.S - p.S.adjoint()).norm() <= sym_threshold(p.S),
          "S must be Hermitian");

  Matrix s_herm = 0.5 * (p.S + p.S.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(s_herm, Eigen::EigenvaluesOnly);
  require(es.info() == Eigen::Success && es.eigenvalues().minCoeff() > kPdTol * p.S.norm(),
          "S must be positive definite");

  if (p.is_real) {
    for (const Matrix* blk : {&p.J, &p.R, &p.E, &p.B, &p.S})
      require(blk->imag().cwiseAbs().maxCoeff() <= kSymTol,
              "real pencil has a complex entry");
  }
}

EigenPairQuery make_query(Complex lambda, Vector x1, Vector x2, Vector x3) {
  double mag = std::abs(lambda);
  if (!(mag >= 1e-300))
    throw std::invalid_argument("lambda must be nonzero purely imaginary");
  if (std::abs(lambda.real()) > 1e-12 * mag)
    throw std::invalid_argument("lambda must lie on the imaginary axis (got nonzero real part)");
  EigenPairQuery q;
  q.lambda = Complex(0.0, lambda.imag());
  q.x1 = std::move(x1);
  q.x2 = std::move(x2);
  q.x3 = std::move(x3);
  if (q.x1.norm() == 0.0 && q.x2.norm() == 0.0 && q.x3.norm() == 0.0)
    throw std::invalid_argument("x must be nonzero");
  return q;
}

void validate(const StructuredPencil& p, const EigenPairQuery& q) {
  if (q.x1.size() != p.n || q.x2.size() != p.n || q.x3.size() != p.m)
    throw std::invalid_argument("query dimensions do not match the pencil");
}

Vector full_x(const EigenPairQuery& q) {
  Vector x(q.x1.size() + q.x2.size() + q.x3.size());
  x << q.x1, q.x2, q.x3;
  return x;
}

bool has_block(BlockSet s, char block) {
  const std::string_view name = [&]() -> std::string_view {
    switch (s) {
      case BlockSet::JE: return "JE";
      case BlockSet::RE: return "RE";
      case BlockSet::JR: return "JR";
      case BlockSet::JB: return "JB";
      case BlockSet::RB: return "RB";
      case BlockSet::EB: return "EB";
      case BlockSet::JRB: return "JRB";
      case BlockSet::REB: return "REB";
      case BlockSet::JEB: return "JEB";
      case BlockSet::JRE: return "JRE";
      case BlockSet::JREB: return "JREB";
    }
    return "";
  }();
  return name.find(block) != std::string_view::npos;
}

bool scope_is_valid(const PerturbationScope& scope) {
  if (scope.structure == Structure::SymmetryPreserving) {
    switch (scope.blocks) {
      case BlockSet::JE:
      case BlockSet::RE:
      case BlockSet::JR:
      case BlockSet::JRB:
      case BlockSet::REB:
      case BlockSet::JRE:
      case BlockSet::JREB:
        break;
      default:
        return false;
    }
  }
  if (scope.field == Field::Real) {
    switch (scope.blocks) {
      case BlockSet::JR:
      case BlockSet::JRB:
        break;  // both structures
      case BlockSet::JB:
      case BlockSet::RB:
      case BlockSet::EB:
        if (scope.structure != Structure::BlockOnly) return false;
        break;
      default:
        return false;
    }
  }
  return true;
}

void require_valid_scope(const PerturbationScope& scope) {
  if (!scope_is_valid(scope))
    throw InvalidScope("unsupported scope combination: " + to_string(scope));
}

std::string to_string(BlockSet s) {
  switch (s) {
    case BlockSet::JE: return "JE";
    case BlockSet::RE: return "RE";
    case BlockSet::JR: return "JR";
    case BlockSet::JB: return "JB";
    case BlockSet::RB: return "RB";
    case BlockSet::EB: return "EB";
    case BlockSet::JRB: return "JRB";
    case BlockSet::REB: return "REB";
    case BlockSet::JEB: return "JEB";
    case BlockSet::JRE: return "JRE";
    case BlockSet::JREB: return "JREB";
  }
  return "?";
}

std::string to_string(const PerturbationScope& scope) {
  std::string out = to_string(scope.blocks);
  out += scope.structure == Structure::BlockOnly ? "/block" : "/sym";
  if (scope.field == Field::Real) out += "/real";
  return out;
}

std::optional<BlockSet> block_set_from_string(std::string_view name) {
  for (BlockSet s : kAllBlockSets)
    if (to_string(s) == name) return s;
  return std::nullopt;
}

MinimizerBlocks zero_minimizer(const StructuredPencil& p) {
  MinimizerBlocks d;
  d.dJ = Matrix::Zero(p.n, p.n);
  d.dR = Matrix::Zero(p.n, p.n);
  d.dE = Matrix::Zero(p.n, p.n);
  d.dB = Matrix::Zero(p.n, p.m);
  return d;
}

Matrix assemble_M_blocks(const Matrix& J, const Matrix& R, const Matrix& E,
                         const Matrix& B, const Matrix& S) {
  (void)E;
  const Index n = J.rows();
  const Index m = S.rows();
  Matrix M = Matrix::Zero(2 * n + m, 2 * n + m);
  Matrix G = J - R;
  M.block(0, n, n, n) = G;
  M.block(0, 2 * n, n, m) = B;
  M.block(n, 0, n, n) = G.adjoint();
  M.block(2 * n, 0, m, n) = B.adjoint();
  M.block(2 * n, 2 * n, m, m) = S;
  return M;
}

Matrix assemble_N_blocks(const Matrix& E, Index m) {
  const Index n = E.rows();
  Matrix N = Matrix::Zero(2 * n + m, 2 * n + m);
  N.block(0, n, n, n) = E;
  N.block(n, 0, n, n) = -E.adjoint();
  return N;
}

Matrix evaluate_blocks(const Matrix& J, const Matrix& R, const Matrix& E,
                       const Matrix& B, const Matrix& S, Complex z) {
  return assemble_M_blocks(J, R, E, B, S) + z * assemble_N_blocks(E, S.rows());
}

Matrix assemble_M(const StructuredPencil& p) {
  return assemble_M_blocks(p.J, p.R, p.E, p.B, p.S);
}

Matrix assemble_N(const StructuredPencil& p) {
  return assemble_N_blocks(p.E, p.m);
}

Matrix evaluate(const StructuredPencil& p, Complex z) {
  return assemble_M(p) + z * assemble_N(p);
}

double residual(const StructuredPencil& p, const EigenPairQuery& q) {
  validate(p, q);
  return (evaluate(p, q.lambda) * full_x(q)).norm();
}

Matrix evaluate_perturbed(const StructuredPencil& p, const MinimizerBlocks& d,
                          Complex z) {
  return evaluate_blocks(p.J - d.dJ, p.R - d.dR, p.E - d.dE, p.B - d.dB, p.S,
                         z);
}

}  // namespace evenbe
