#include "evenbe/oracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "evenbe/backward_errors.hpp"

namespace evenbe {

double RandomStream::uniform() {
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double RandomStream::uniform(double a, double b) {
  return a + (b - a) * uniform();
}

double RandomStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  const double u2 = uniform();
  const double rad = std::sqrt(-2.0 * std::log(u1));
  const double ang = 2.0 * std::numbers::pi_v<double> * u2;
  spare_ = rad * std::sin(ang);
  has_spare_ = true;
  return rad * std::cos(ang);
}

Complex RandomStream::normal_complex() {
  const double re = normal();
  const double im = normal();
  return {re, im};
}

Vector RandomStream::normal_vector(Index n, bool real_valued) {
  Vector v(n);
  for (Index i = 0; i < n; ++i)
    v(i) = real_valued ? Complex(normal(), 0.0) : normal_complex();
  return v;
}

Matrix RandomStream::normal_matrix(Index rows, Index cols, bool real_valued) {
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      a(i, j) = real_valued ? Complex(normal(), 0.0) : normal_complex();
  return a;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Matrix null_space(const Matrix& A, double rank_tol) {
  const Index n = A.cols();
  if (A.rows() == 0 || A.norm() == 0.0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = rank_tol * sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

namespace {

enum class BlockClass { Full, Hermitian, SkewHermitian };

// Frobenius-orthonormal basis of the class, so that a coordinate vector's
// Euclidean norm equals the block's Frobenius norm.
std::vector<Matrix> block_basis(Index rows, Index cols, BlockClass cls,
                                bool real_field) {
  const Complex iu(0.0, 1.0);
  const double inv_rt2 = 1.0 / std::numbers::sqrt2_v<double>;
  std::vector<Matrix> basis;
  auto unit = [&](Index i, Index j) {
    Matrix g = Matrix::Zero(rows, cols);
    g(i, j) = 1.0;
    return g;
  };
  switch (cls) {
    case BlockClass::Full:
      for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j) {
          basis.push_back(unit(i, j));
          if (!real_field) basis.push_back(iu * unit(i, j));
        }
      break;
    case BlockClass::Hermitian:
      for (Index i = 0; i < rows; ++i) basis.push_back(unit(i, i));
      for (Index i = 0; i < rows; ++i)
        for (Index j = i + 1; j < cols; ++j) {
          basis.push_back(inv_rt2 * (unit(i, j) + unit(j, i)));
          if (!real_field)
            basis.push_back(iu * inv_rt2 * (unit(i, j) - unit(j, i)));
        }
      break;
    case BlockClass::SkewHermitian:
      if (!real_field)
        for (Index i = 0; i < rows; ++i) basis.push_back(iu * unit(i, i));
      for (Index i = 0; i < rows; ++i)
        for (Index j = i + 1; j < cols; ++j) {
          basis.push_back(inv_rt2 * (unit(i, j) - unit(j, i)));
          if (!real_field)
            basis.push_back(iu * inv_rt2 * (unit(i, j) + unit(j, i)));
        }
      break;
  }
  return basis;
}

// Minimum-norm least-squares solution of A z = b.
Eigen::VectorXd min_norm_solve(const Eigen::MatrixXd& A,
                               const Eigen::VectorXd& b) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() ? kRankTol * sv(0) : 0.0;
  Eigen::VectorXd coeff = svd.matrixU().transpose() * b;
  for (Index i = 0; i < sv.size(); ++i)
    coeff(i) = sv(i) > cutoff ? coeff(i) / sv(i) : 0.0;
  return svd.matrixV() * coeff;
}

// Orthonormal basis of the column span; for real-valued data the QR runs in
// real arithmetic so the result stays exactly real.
Matrix orthonormal_columns(const Matrix& A, bool real_valued) {
  const Index k = std::min(A.rows(), A.cols());
  if (k == 0) return Matrix(A.rows(), 0);
  if (real_valued) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(A.real());
    Eigen::MatrixXd q =
        qr.householderQ() * Eigen::MatrixXd::Identity(A.rows(), k);
    return q.cast<Complex>();
  }
  Eigen::HouseholderQR<Matrix> qr(A);
  return qr.householderQ() * Matrix::Identity(A.rows(), k);
}

Matrix real_null_space(const Matrix& A) {
  const Index n = A.cols();
  if (A.rows() == 0 || A.norm() == 0.0) return Matrix::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(A.real()),
                                        Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = kRankTol * sv(0);
  Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixV().rightCols(n - rank).cast<Complex>();
}

}  // namespace

double least_norm_feasible(const StructuredPencil& p, const EigenPairQuery& q,
                           const PerturbationScope& scope,
                           const OracleConfig& cfg) {
  require_valid_scope(scope);
  validate(p, q);
  if (cfg.restarts < 1 || cfg.max_iter < 1 || !(cfg.tol_opt > 0.0))
    throw std::invalid_argument("oracle config fields must be positive");
  const auto conditions = finiteness_check(p, q, scope);
  if (!all_passed(conditions))
    throw Infeasible("finiteness conditions fail for " + to_string(scope));

  const Index n = p.n;
  const Index m = p.m;
  const bool real_field = scope.field == Field::Real;
  const bool sym = scope.structure == Structure::SymmetryPreserving;

  // Right-hand side: the three block rows of L(lambda) x.
  const Vector r = (p.J - p.R + q.lambda * p.E) * q.x2 + p.B * q.x3;
  const Vector sn = -(p.J + p.R + q.lambda * p.E) * q.x1;
  const Vector sB = p.B.adjoint() * q.x1 + p.S * q.x3;
  const Index rows_c = n + n + m;
  Eigen::VectorXd b(2 * rows_c);
  {
    Vector rhs(rows_c);
    rhs << r, sn, sB;
    b << rhs.real(), rhs.imag();
  }

  // One column of the real constraint matrix per basis element per block.
  std::vector<Eigen::VectorXd> columns;
  auto add_block = [&](char name, BlockClass cls, Index rows, Index cols) {
    if (!has_block(scope.blocks, name)) return;
    for (const Matrix& g : block_basis(rows, cols, cls, real_field)) {
      Vector col = Vector::Zero(rows_c);
      switch (name) {
        case 'J':
          col.segment(0, n) = g * q.x2;
          col.segment(n, n) = g.adjoint() * q.x1;
          break;
        case 'R':
          col.segment(0, n) = -(g * q.x2);
          col.segment(n, n) = -(g.adjoint() * q.x1);
          break;
        case 'E':
          col.segment(0, n) = q.lambda * (g * q.x2);
          col.segment(n, n) = std::conj(q.lambda) * (g.adjoint() * q.x1);
          break;
        case 'B':
          col.segment(0, n) = g * q.x3;
          col.segment(2 * n, m) = g.adjoint() * q.x1;
          break;
      }
      Eigen::VectorXd rc(2 * rows_c);
      rc << col.real(), col.imag();
      columns.push_back(std::move(rc));
    }
  };
  add_block('J', sym ? BlockClass::SkewHermitian : BlockClass::Full, n, n);
  add_block('R', sym ? BlockClass::Hermitian : BlockClass::Full, n, n);
  add_block('E', sym ? BlockClass::Hermitian : BlockClass::Full, n, n);
  add_block('B', BlockClass::Full, n, m);

  const Index k = static_cast<Index>(columns.size());
  Eigen::MatrixXd acon(2 * rows_c, k);
  for (Index j = 0; j < k; ++j) acon.col(j) = columns[j];

  const int solves = std::min(cfg.restarts, cfg.max_iter);
  double best = std::numeric_limits<double>::infinity();
  double best_residual = std::numeric_limits<double>::infinity();
  for (int restart = 0; restart < solves; ++restart) {
    Eigen::MatrixXd a = acon;
    if (restart > 0) {
      RandomStream rs(derive_seed(cfg.seed, static_cast<std::uint64_t>(restart)));
      Eigen::VectorXd h(k);
      for (Index i = 0; i < k; ++i) h(i) = rs.normal();
      const double hn = h.norm();
      if (hn > 0.0) {
        h /= hn;
        a = acon - 2.0 * (acon * h) * h.transpose();
      }
    }
    const Eigen::VectorXd z = min_norm_solve(a, b);
    best_residual = std::min(best_residual, (a * z - b).norm());
    best = std::min(best, z.norm());
  }
  if (best_residual > cfg.tol_opt * (1.0 + b.norm()))
    throw Infeasible("eigenpair equation is inconsistent for " +
                     to_string(scope));
  return best;
}

double certify_eigenvalue(const StructuredPencil& p, const MinimizerBlocks& d,
                          Complex lambda) {
  const bool ok = d.dJ.rows() == p.n && d.dJ.cols() == p.n &&
                  d.dR.rows() == p.n && d.dR.cols() == p.n &&
                  d.dE.rows() == p.n && d.dE.cols() == p.n &&
                  d.dB.rows() == p.n && d.dB.cols() == p.m;
  if (!ok)
    throw std::invalid_argument("minimizer blocks do not match the pencil");
  Eigen::JacobiSVD<Matrix> svd(evaluate_perturbed(p, d, lambda));
  return svd.singularValues().minCoeff();
}

std::vector<Complex> finite_eigenvalues(const StructuredPencil& p) {
  const Matrix mm = assemble_M(p);
  const Matrix nn = assemble_N(p);
  const Index d = mm.rows();
  const Complex shifts[] = {
      {0.8321, 0.4179}, {1.1937, -0.2718}, {-0.6553, 0.9241}};
  for (const Complex& shift : shifts) {
    Eigen::FullPivLU<Matrix> lu(mm + shift * nn);
    if (!lu.isInvertible()) continue;
    Eigen::ComplexEigenSolver<Matrix> es(lu.solve(nn));
    if (es.info() != Eigen::Success) continue;
    const auto& mu = es.eigenvalues();
    const double mu_max = mu.cwiseAbs().maxCoeff();
    std::vector<Complex> out;
    for (Index i = 0; i < d; ++i) {
      if (std::abs(mu(i)) <= 1e-12 * mu_max) continue;  // infinite eigenvalue
      out.push_back(shift - 1.0 / mu(i));
    }
    return out;
  }
  throw GenerationFailed("eigenvalue solve failed: all shifts are singular");
}

StructuredPencil random_structured_pencil(Index n, Index m, std::uint64_t seed,
                                          bool strictly_passive,
                                          bool real_valued) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("pencil dimensions must be positive");
  for (int attempt = 0; attempt < 100; ++attempt) {
    RandomStream rs(derive_seed(seed, 1000 + static_cast<std::uint64_t>(attempt)));
    const Matrix a = rs.normal_matrix(n, n, real_valued);
    const Matrix j = 0.5 * (a - a.adjoint());
    const Matrix a2 = rs.normal_matrix(n, n, real_valued);
    const Matrix e = 0.5 * (a2 + a2.adjoint());
    const Matrix bb = rs.normal_matrix(n, m, real_valued);
    const Matrix g2 = rs.normal_matrix(m, m, real_valued);
    const Matrix s = g2.adjoint() * g2 + 0.1 * Matrix::Identity(m, m);

    // Kernel-aligned R: null(R) spans min(2, n-m) vectors of null(B^H) plus
    // one extra direction, so admissible queries exist.
    Matrix kernel_dirs(n, 0);
    if (m < n) {
      const Matrix nb = real_valued ? real_null_space(bb.adjoint())
                                    : null_space(bb.adjoint());
      kernel_dirs = nb.leftCols(std::min<Index>(2, nb.cols()));
    }
    Matrix dirs(n, kernel_dirs.cols() + 1);
    dirs << kernel_dirs, rs.normal_vector(n, real_valued);
    const Matrix span = orthonormal_columns(dirs, real_valued);
    const Index rows_g = std::max<Index>(0, n - span.cols());
    Matrix rr = Matrix::Zero(n, n);
    if (rows_g > 0) {
      const Matrix g = rs.normal_matrix(rows_g, n, real_valued) *
                       (Matrix::Identity(n, n) - span * span.adjoint());
      rr = g.adjoint() * g;
      rr = 0.5 * (rr + rr.adjoint());
    }

    StructuredPencil p = make_pencil(j, rr, e, bb, s);
    if (!strictly_passive) return p;
    bool on_axis = false;
    for (const Complex& lam : finite_eigenvalues(p))
      if (std::abs(lam.real()) <= 1e-6) {
        on_axis = true;
        break;
      }
    if (!on_axis) return p;
  }
  throw GenerationFailed(
      "no strictly passive draw within 100 attempts; all had eigenvalues "
      "within 1e-6 of the imaginary axis");
}

EigenPairQuery admissible_query(const StructuredPencil& p, std::uint64_t seed,
                                const PerturbationScope& scope) {
  require_valid_scope(scope);
  Matrix stacked(p.n + p.m, p.n);
  stacked << p.R, p.B.adjoint();
  const Matrix n1 = null_space(stacked);
  const Matrix n2 = null_space(p.R);
  if (n1.cols() == 0)
    throw EmptyKernel(
        "null(B^H) ∩ null(R) is trivial; lower the rank of R or widen the "
        "kernel of B^H");
  if (scope.field == Field::Real && n1.cols() < 2)
    throw EmptyKernel(
        "real-field queries need two directions in null(B^H) ∩ null(R); "
        "lower the rank of R or widen the kernel of B^H");

  RandomStream rs(derive_seed(seed, 17));
  Vector x1 = n1 * rs.normal_vector(n1.cols());
  for (int tries = 0; x1.norm() < 1e-12 && tries < 10; ++tries)
    x1 = n1 * rs.normal_vector(n1.cols());
  x1 /= x1.norm();

  Vector x2;
  if (scope.field == Field::Real) {
    // x2^T (E x1) = 0 and x2^T ((J+R) x1) = 0 on top of R x2 = 0, so the
    // real-variant bilinear finiteness conditions hold for every scope.
    Matrix c(2, n2.cols());
    c.row(0) = (n2.transpose() * (p.E * x1)).transpose();
    c.row(1) = (n2.transpose() * ((p.J + p.R) * x1)).transpose();
    const Matrix z = null_space(c);
    if (z.cols() == 0)
      throw EmptyKernel(
          "null(R) admits no direction satisfying the real bilinear "
          "conditions; lower the rank of R");
    x2 = n2 * (z * rs.normal_vector(z.cols()));
  } else {
    x2 = n2 * rs.normal_vector(n2.cols());
  }
  for (int tries = 0; x2.norm() < 1e-12 && tries < 10; ++tries)
    x2 = n2 * rs.normal_vector(n2.cols());
  x2 /= x2.norm();

  double t = 0.0;
  do {
    t = rs.uniform(-3.0, 3.0);
  } while (std::abs(t) < 0.05);
  return make_query(Complex(0.0, t), std::move(x1), std::move(x2),
                    Vector::Zero(p.m));
}

}  // namespace evenbe
