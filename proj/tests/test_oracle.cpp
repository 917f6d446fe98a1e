#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "evenbe/backward_errors.hpp"
#include "evenbe/oracle.hpp"
#include "generators.hpp"

using namespace evenbe;
using testutil::all_complex_scopes;
using testutil::block_scope;
using testutil::rel_gap;
using testutil::sym_scope;

TEST_CASE("random stream is deterministic and respects the field flag") {
  RandomStream a(42), b(42), c(43);
  for (int i = 0; i < 50; ++i) {
    const double ua = a.uniform();
    CHECK(ua == b.uniform());
    CHECK(0.0 <= ua);
    CHECK(ua < 1.0);
  }
  CHECK(a.uniform() != c.uniform());

  RandomStream d(7), e(7);
  const Matrix md = d.normal_matrix(3, 4, false);
  CHECK((md - e.normal_matrix(3, 4, false)).norm() == 0.0);
  CHECK(md.imag().norm() > 0.0);
  CHECK(d.normal_matrix(3, 4, true).imag().norm() == 0.0);

  const double r = RandomStream(9).uniform(-3.0, 3.0);
  CHECK(-3.0 <= r);
  CHECK(r < 3.0);
}

TEST_CASE("seed derivation separates streams") {
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(5, 3) == derive_seed(5, 3));
}

TEST_CASE("null_space returns an orthonormal kernel basis") {
  RandomStream rng(3);
  Matrix a = rng.normal_matrix(3, 5, false);  // rank 3, kernel dim 2
  const Matrix n = null_space(a);
  REQUIRE(n.cols() == 2);
  CHECK((a * n).norm() <= 1e-12 * a.norm());
  CHECK((n.adjoint() * n - Matrix::Identity(2, 2)).norm() <= 1e-12);
  CHECK(null_space(Matrix::Zero(2, 3)).cols() == 3);
  CHECK(null_space(Matrix::Identity(4, 4)).cols() == 0);
}

TEST_CASE("generated pencils have the advertised structure") {
  for (int i = 0; i < 4; ++i) {
    const bool real_valued = i % 2 == 1;
    const auto p =
        random_structured_pencil(4, 3, derive_seed(21, i), true, real_valued);
    CHECK(p.n == 4);
    CHECK(p.m == 3);
    CHECK(p.is_real == real_valued);
    CHECK((p.J + p.J.adjoint()).norm() <= 1e-12 * (1.0 + p.J.norm()));
    CHECK((p.R - p.R.adjoint()).norm() <= 1e-12 * (1.0 + p.R.norm()));
    CHECK((p.E - p.E.adjoint()).norm() <= 1e-12 * (1.0 + p.E.norm()));
    Eigen::SelfAdjointEigenSolver<Matrix> es(p.R);
    CHECK(es.eigenvalues().minCoeff() >= -1e-10 * (1.0 + p.R.norm()));
    Eigen::SelfAdjointEigenSolver<Matrix> ss(p.S);
    CHECK(ss.eigenvalues().minCoeff() > 0.0);

    // strict passivity: no finite eigenvalue on (or near) the imaginary axis
    for (const Complex ev : finite_eigenvalues(p))
      CHECK(std::abs(ev.real()) > 1e-6);
  }

  // determinism: same seed reproduces the pencil bit for bit
  const auto p1 = random_structured_pencil(4, 3, 77);
  const auto p2 = random_structured_pencil(4, 3, 77);
  CHECK((p1.J - p2.J).norm() == 0.0);
  CHECK((p1.R - p2.R).norm() == 0.0);
  CHECK((p1.E - p2.E).norm() == 0.0);
  CHECK((p1.B - p2.B).norm() == 0.0);
  CHECK((p1.S - p2.S).norm() == 0.0);
}

TEST_CASE("finite eigenvalues satisfy the pencil equation") {
  const auto p = random_structured_pencil(4, 3, 23);
  const auto evs = finite_eigenvalues(p);
  REQUIRE_FALSE(evs.empty());
  for (const Complex ev : evs) {
    const Matrix l = evaluate(p, ev);
    const double smin = l.jacobiSvd().singularValues().minCoeff();
    CHECK(smin <= 1e-8 * l.norm());
  }
}

TEST_CASE("admissible queries meet every complex finiteness condition") {
  const auto p = random_structured_pencil(4, 3, 31);
  const auto q = admissible_query(p, 32);
  validate(p, q);
  CHECK(q.x3.norm() == 0.0);
  CHECK((p.B.adjoint() * q.x1).norm() <= 1e-10 * (1.0 + p.B.norm()));
  CHECK((p.R * q.x1).norm() <= 1e-10 * (1.0 + p.R.norm()));
  CHECK((p.R * q.x2).norm() <= 1e-10 * (1.0 + p.R.norm()));
  CHECK(std::abs(q.lambda.imag()) >= 0.05);
  for (const auto& scope : all_complex_scopes()) {
    if (scope.blocks == BlockSet::JE &&
        scope.structure == Structure::SymmetryPreserving)
      continue;  // the skew compatibility is not guaranteed by admissibility
    CAPTURE(to_string(scope));
    CHECK(all_passed(finiteness_check(p, q, scope)));
  }

  // determinism
  const auto q2 = admissible_query(p, 32);
  CHECK(q.lambda == q2.lambda);
  CHECK((q.x1 - q2.x1).norm() == 0.0);
  CHECK((q.x2 - q2.x2).norm() == 0.0);
}

TEST_CASE("admissible real queries satisfy the real conditions") {
  const auto p = random_structured_pencil(6, 2, 35, true, true);
  const auto q = admissible_query(
      p, 36, {BlockSet::JR, Structure::BlockOnly, Field::Real});
  for (BlockSet bs : {BlockSet::JR, BlockSet::JB, BlockSet::RB, BlockSet::EB,
                      BlockSet::JRB}) {
    CAPTURE(to_string(bs));
    CHECK(all_passed(finiteness_check(
        p, q, {bs, Structure::BlockOnly, Field::Real})));
  }
}

TEST_CASE("query generation reports trivial kernels") {
  // R positive definite leaves null(R) empty
  Matrix j = Matrix::Zero(2, 2), r = Matrix::Identity(2, 2),
         e = Matrix::Identity(2, 2), b = Matrix::Ones(2, 1),
         s = Matrix::Identity(1, 1);
  j(0, 1) = -1;
  j(1, 0) = 1;
  const auto p = make_pencil(j, r, e, b, s);
  CHECK_THROWS_AS(admissible_query(p, 1), EmptyKernel);
}

TEST_CASE("oracle matches the closed forms on exact scopes") {
  for (int i = 0; i < 2; ++i) {
    const auto p = random_structured_pencil(4, 3, derive_seed(51, i));
    const auto q = admissible_query(p, derive_seed(52, i));
    OracleConfig cfg;
    cfg.seed = derive_seed(53, i);
    for (const auto& scope : all_complex_scopes()) {
      if (scope.blocks == BlockSet::JE &&
          scope.structure == Structure::SymmetryPreserving)
        continue;
      CAPTURE(to_string(scope));
      const auto rep = eigenpair_backward_error(p, q, scope);
      REQUIRE(rep.kind != ReportKind::Infinite);
      const double oracle = least_norm_feasible(p, q, scope, cfg);
      if (rep.kind == ReportKind::Exact) {
        CHECK(rel_gap(oracle, rep.value) <= 1e-7);
      } else {
        CHECK(oracle >= rep.lower - 1e-8 * (1.0 + rep.lower));
        CHECK(oracle <= rep.upper + 1e-8 * (1.0 + rep.upper));
      }
    }
  }
}

TEST_CASE("oracle is infeasible exactly when finiteness fails") {
  const auto p = random_structured_pencil(4, 3, 61);
  auto q = admissible_query(p, 62);
  q.x3 = Vector::Ones(p.m);
  CHECK_THROWS_AS(least_norm_feasible(p, q, block_scope(BlockSet::JE)),
                  Infeasible);
  CHECK_THROWS_AS(least_norm_feasible(p, q, block_scope(BlockSet::JRB)),
                  Infeasible);
}

TEST_CASE("restart count one still yields the convex minimum") {
  const auto p = random_structured_pencil(4, 3, 71);
  const auto q = admissible_query(p, 72);
  OracleConfig one;
  one.restarts = 1;
  const auto rep = eta_block(p, q, block_scope(BlockSet::JEB));
  CHECK(rel_gap(least_norm_feasible(p, q, block_scope(BlockSet::JEB), one),
                rep.value) <= 1e-7);
}

TEST_CASE("eigenvalue certification measures sigma_min of the perturbed pencil") {
  const auto p = random_structured_pencil(4, 3, 81);
  const auto evs = finite_eigenvalues(p);
  REQUIRE_FALSE(evs.empty());

  // the zero perturbation certifies an actual eigenvalue ...
  CHECK(certify_eigenvalue(p, zero_minimizer(p), evs.front()) <=
        1e-8 * evaluate(p, evs.front()).norm());
  // ... but not an arbitrary point
  CHECK(certify_eigenvalue(p, zero_minimizer(p), Complex(0.0, 0.123)) >
        1e-6);

  auto bad = zero_minimizer(p);
  bad.dB = Matrix::Zero(p.n, p.m + 1);
  CHECK_THROWS_AS(certify_eigenvalue(p, bad, evs.front()),
                  std::invalid_argument);
}
