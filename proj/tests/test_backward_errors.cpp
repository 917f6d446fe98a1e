#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "evenbe/backward_errors.hpp"
#include "evenbe/oracle.hpp"
#include "generators.hpp"

using namespace evenbe;
using testutil::all_complex_scopes;
using testutil::block_scope;
using testutil::example_pencil;
using testutil::example_query;
using testutil::real_scope;
using testutil::rel_gap;
using testutil::sym_scope;

namespace {

struct Instance {
  StructuredPencil p;
  EigenPairQuery q;
};

std::vector<Instance> complex_instances(int count, std::uint64_t seed) {
  std::vector<Instance> out;
  for (int i = 0; i < count; ++i) {
    auto p = random_structured_pencil(4, 3, derive_seed(seed, 40 + i));
    auto q = admissible_query(p, derive_seed(seed, 80 + i));
    out.push_back({std::move(p), std::move(q)});
  }
  return out;
}

double perturbation_norm(const MinimizerBlocks& d) {
  return std::sqrt(d.dJ.squaredNorm() + d.dR.squaredNorm() +
                   d.dE.squaredNorm() + d.dB.squaredNorm());
}

void check_residual_closure(const StructuredPencil& p, const EigenPairQuery& q,
                            const PerturbationScope& scope,
                            const BackwardErrorReport& rep) {
  REQUIRE(rep.kind != ReportKind::Infinite);
  REQUIRE(rep.minimizer.has_value());
  const MinimizerBlocks& d = *rep.minimizer;
  const Vector x = full_x(q);
  const Matrix pert = evaluate_perturbed(p, d, q.lambda);
  const double scale =
      (evaluate(p, q.lambda).norm() + perturbation_norm(d)) * x.norm();
  CHECK((pert * x).norm() <= 1e-10 * (1.0 + scale));

  // blocks outside the scope stay untouched
  if (!has_block(scope.blocks, 'J')) CHECK(d.dJ.norm() == 0.0);
  if (!has_block(scope.blocks, 'R')) CHECK(d.dR.norm() == 0.0);
  if (!has_block(scope.blocks, 'E')) CHECK(d.dE.norm() == 0.0);
  if (!has_block(scope.blocks, 'B')) CHECK(d.dB.norm() == 0.0);

  if (scope.structure == Structure::SymmetryPreserving) {
    CHECK((d.dJ + d.dJ.adjoint()).norm() <= 1e-10);
    CHECK((d.dR - d.dR.adjoint()).norm() <= 1e-10);
    CHECK((d.dE - d.dE.adjoint()).norm() <= 1e-10);
  }
  if (scope.field == Field::Real) {
    CHECK(d.dJ.imag().norm() <= 1e-12);
    CHECK(d.dR.imag().norm() <= 1e-12);
    CHECK(d.dE.imag().norm() <= 1e-12);
    CHECK(d.dB.imag().norm() <= 1e-12);
  }

  // the reported value (or attained upper bound) is the norm of the
  // perturbation actually returned
  const double target = rep.kind == ReportKind::Exact ? rep.value : rep.upper;
  CHECK(testutil::rel_gap(perturbation_norm(d), target) <= 1e-12);
}

}  // namespace

TEST_CASE("worked example: whole-pencil backward errors") {
  const auto p = example_pencil();
  const auto q = example_query();
  CHECK(rel_gap(eta_unstructured(p, q), 4.0 / std::sqrt(34.0)) <= 1e-14);
  CHECK(rel_gap(eta_even(p, q), 4.0 / std::sqrt(17.0)) <= 1e-14);
  CHECK(eta_unstructured(p, q) <= eta_even(p, q));
}

TEST_CASE("worked example: frozen block-scope values") {
  const auto p = example_pencil();
  const auto q = example_query();
  const struct {
    BlockSet bs;
    double expect;
  } rows[] = {
      {BlockSet::JE, 0.6859943405700353},
      {BlockSet::RE, 0.6859943405700353},
      {BlockSet::JR, 0.5},
      {BlockSet::JB, 0.7071067811865476},
      {BlockSet::RB, 0.7071067811865476},
      {BlockSet::EB, 2.8284271247461903},
      {BlockSet::JRE, 0.4923659639173309},
      {BlockSet::JRB, 0.5},
      {BlockSet::REB, 0.6859943405700353},
      {BlockSet::JEB, 0.6859943405700353},
      {BlockSet::JREB, 0.4923659639173309},
  };
  for (const auto& row : rows) {
    CAPTURE(to_string(row.bs));
    const auto rep = eta_block(p, q, block_scope(row.bs));
    REQUIRE(rep.kind == ReportKind::Exact);
    CHECK(rel_gap(rep.value, row.expect) <= 1e-12);
    check_residual_closure(p, q, block_scope(row.bs), rep);
  }
}

TEST_CASE("worked example: symmetry-preserving scopes") {
  const auto p = example_pencil();
  const auto q = example_query();

  for (BlockSet bs : {BlockSet::JR, BlockSet::JRB}) {
    const auto rep = eta_symmetry(p, q, sym_scope(bs));
    REQUIRE(rep.kind == ReportKind::Exact);
    CHECK(rel_gap(rep.value, 0.7071067811865476) <= 1e-12);
    check_residual_closure(p, q, sym_scope(bs), rep);
  }

  const auto re = eta_symmetry(p, q, sym_scope(BlockSet::RE));
  REQUIRE(re.kind == ReportKind::Bounds);
  CHECK(rel_gap(re.lower, 0.7071067811865476) <= 1e-12);
  CHECK(rel_gap(re.upper, std::sqrt(2.375)) <= 1e-12);
  check_residual_closure(p, q, sym_scope(BlockSet::RE), re);

  for (BlockSet bs : {BlockSet::JRE, BlockSet::REB, BlockSet::JREB}) {
    const auto rep = eta_symmetry(p, q, sym_scope(bs));
    REQUIRE(rep.kind == ReportKind::Bounds);
    CHECK(rep.lower <= rep.upper + 1e-14);
    check_residual_closure(p, q, sym_scope(bs), rep);
  }

  // r^H x2 = -1 here, so the skew compatibility Y^H X = -X^H Y fails
  const auto je = eta_symmetry(p, q, sym_scope(BlockSet::JE));
  CHECK(je.kind == ReportKind::Infinite);
  CHECK_FALSE(all_passed(je.finiteness));
}

TEST_CASE("scale invariance: eta is homogeneous of degree zero in x") {
  const auto inst = complex_instances(3, 2026);
  const Complex alpha(1.7, -0.4);
  for (const auto& [p, q] : inst) {
    auto qs = q;
    qs.x1 *= alpha;
    qs.x2 *= alpha;
    qs.x3 *= alpha;
    CHECK(rel_gap(eta_unstructured(p, q), eta_unstructured(p, qs)) <= 1e-12);
    CHECK(rel_gap(eta_even(p, q), eta_even(p, qs)) <= 1e-12);
    for (const auto& scope : all_complex_scopes()) {
      CAPTURE(to_string(scope));
      const auto a = eigenpair_backward_error(p, q, scope);
      const auto b = eigenpair_backward_error(p, qs, scope);
      REQUIRE(a.kind == b.kind);
      if (a.kind == ReportKind::Exact)
        CHECK(rel_gap(a.value, b.value) <= 1e-12);
      if (a.kind == ReportKind::Bounds) {
        CHECK(rel_gap(a.lower, b.lower) <= 1e-12);
        CHECK(rel_gap(a.upper, b.upper) <= 1e-12);
      }
    }
  }
}

TEST_CASE("coinciding scopes: JE=RE, JB=RB, JEB=REB") {
  for (const auto& [p, q] : complex_instances(6, 11)) {
    const double je = eta_block(p, q, block_scope(BlockSet::JE)).value;
    const double re = eta_block(p, q, block_scope(BlockSet::RE)).value;
    const double jb = eta_block(p, q, block_scope(BlockSet::JB)).value;
    const double rb = eta_block(p, q, block_scope(BlockSet::RB)).value;
    const double jeb = eta_block(p, q, block_scope(BlockSet::JEB)).value;
    const double reb = eta_block(p, q, block_scope(BlockSet::REB)).value;
    CHECK(rel_gap(je, re) <= 1e-12);
    CHECK(rel_gap(jb, rb) <= 1e-12);
    CHECK(rel_gap(jeb, reb) <= 1e-12);
  }
}

TEST_CASE("divisor relations between JE-family scopes") {
  for (const auto& [p, q] : complex_instances(6, 12)) {
    const double a2 = std::norm(q.lambda);
    const double je = eta_block(p, q, block_scope(BlockSet::JE)).value;
    const double jr = eta_block(p, q, block_scope(BlockSet::JR)).value;
    const double jre = eta_block(p, q, block_scope(BlockSet::JRE)).value;
    const double jr_sym = eta_symmetry(p, q, sym_scope(BlockSet::JR)).value;
    CHECK(rel_gap(jr, je * std::sqrt((1.0 + a2) / 2.0)) <= 1e-12);
    CHECK(rel_gap(jre, je * std::sqrt((1.0 + a2) / (2.0 + a2))) <= 1e-12);
    CHECK(rel_gap(jr_sym, std::sqrt(2.0) * jr) <= 1e-12);
  }
}

TEST_CASE("dominance: eta <= eta_even <= sqrt2 * structured errors") {
  for (const auto& [p, q] : complex_instances(6, 13)) {
    const double eta = eta_unstructured(p, q);
    CHECK(eta <= eta_even(p, q) + 1e-10);
    for (const auto& scope : all_complex_scopes()) {
      CAPTURE(to_string(scope));
      const auto rep = eigenpair_backward_error(p, q, scope);
      REQUIRE(rep.kind != ReportKind::Infinite);
      const double floor_val =
          rep.kind == ReportKind::Exact ? rep.value : rep.lower;
      CHECK(eta <= std::sqrt(2.0) * floor_val + 1e-10);
      CHECK(rep.lower <= rep.upper + 1e-12);
    }
    // restricting the structure can only increase the error
    for (BlockSet bs : {BlockSet::JE, BlockSet::RE, BlockSet::JR, BlockSet::JRE,
                        BlockSet::JRB, BlockSet::REB, BlockSet::JREB}) {
      const auto blk = eta_block(p, q, block_scope(bs));
      const auto sym = eta_symmetry(p, q, sym_scope(bs));
      if (sym.kind != ReportKind::Infinite)
        CHECK(blk.value <= sym.upper + 1e-10);
    }
  }
}

TEST_CASE("minimizers close the residual on random instances") {
  for (const auto& [p, q] : complex_instances(4, 14)) {
    for (const auto& scope : all_complex_scopes()) {
      CAPTURE(to_string(scope));
      const auto rep = eigenpair_backward_error(p, q, scope);
      check_residual_closure(p, q, scope, rep);
    }
  }
}

TEST_CASE("finiteness dichotomy in x3 and B^H x1") {
  const auto p = random_structured_pencil(4, 3, 555);
  const auto q = admissible_query(p, 556);

  // x3 != 0 breaks every complex scope that cannot touch the third row
  auto q3 = q;
  q3.x3 = Vector::Ones(p.m);
  for (BlockSet bs : {BlockSet::JE, BlockSet::RE, BlockSet::JR, BlockSet::JRE,
                      BlockSet::JB, BlockSet::EB, BlockSet::JRB}) {
    CAPTURE(to_string(bs));
    CHECK(eta_block(p, q3, block_scope(bs)).kind == ReportKind::Infinite);
  }

  // B^H x1 != 0 breaks the B-free scopes but not the scopes containing B
  RandomStream rng(557);
  auto q1 = q;
  q1.x1 = p.B * Vector::Ones(p.m);  // guaranteed outside null(B^H)
  REQUIRE((p.B.adjoint() * q1.x1).norm() > 1e-6);
  for (BlockSet bs : {BlockSet::JE, BlockSet::RE, BlockSet::JR, BlockSet::JRE})
    CHECK(eta_block(p, q1, block_scope(bs)).kind == ReportKind::Infinite);
  for (BlockSet bs : {BlockSet::JB, BlockSet::RB, BlockSet::EB, BlockSet::JRB,
                      BlockSet::REB, BlockSet::JEB, BlockSet::JREB}) {
    CAPTURE(to_string(bs));
    const auto rep = eta_block(p, q1, block_scope(bs));
    CHECK(rep.kind == ReportKind::Exact);
    check_residual_closure(p, q1, block_scope(bs), rep);
  }
}

TEST_CASE("scope vectors record their scaling") {
  const auto p = example_pencil();
  const auto q = example_query();
  CHECK(scope_vectors(p, q, block_scope(BlockSet::JE)).scale_record.find(
            "u=x2") != std::string::npos);
  CHECK(scope_vectors(p, q, block_scope(BlockSet::JRB)).scale_record.find(
            "c=") != std::string::npos);
  CHECK(scope_vectors(p, q, sym_scope(BlockSet::JE)).scale_record.find(
            "X=[x2 x1]") != std::string::npos);
}

TEST_CASE("minimizer reconstruction splits the combined perturbation") {
  RandomStream rng(31);
  const Complex lambda(0.0, 0.6);
  const double a2 = std::norm(lambda);
  const Index n = 3, m = 2;
  const Matrix d1 = rng.normal_matrix(n, n, false);
  const Matrix d2 = rng.normal_matrix(n, m, false);
  Matrix d(n, n + m);
  d << d1, d2;

  // dJ - dR + lambda dE recombines to c * d1, where c is the scope scale of
  // the preconditioned mapping problem, and dB passes through as d2
  const struct {
    BlockSet bs;
    bool with_b;
    Complex c;
  } cases[] = {{BlockSet::JE, false, 1.0},
               {BlockSet::RE, false, 1.0},
               {BlockSet::JR, false, 1.0},
               {BlockSet::JRE, false, 1.0},
               {BlockSet::JB, true, 1.0},
               {BlockSet::RB, true, 1.0},
               {BlockSet::EB, true, lambda},
               {BlockSet::JRB, true, std::sqrt(2.0)},
               {BlockSet::REB, true, std::sqrt(1.0 + a2)},
               {BlockSet::JEB, true, std::sqrt(1.0 + a2)},
               {BlockSet::JREB, true, std::sqrt(2.0 + a2)}};
  for (const auto& c : cases) {
    CAPTURE(to_string(c.bs));
    const Matrix& input = c.with_b ? d : d1;
    const auto mb = reconstruct_minimizer(block_scope(c.bs), input, lambda, m);
    const Matrix recombined = mb.dJ - mb.dR + lambda * mb.dE;
    CHECK((recombined - c.c * d1).norm() <= 1e-12 * d1.norm());
    if (c.with_b) CHECK((mb.dB - d2).norm() <= 1e-14 * d2.norm());

    // shares are balanced: J against R, and E carries conj(lambda) times
    // the J (or -R) share
    if (has_block(c.bs, 'J') && has_block(c.bs, 'R'))
      CHECK((mb.dJ + mb.dR).norm() <= 1e-14 * d1.norm());
    if (has_block(c.bs, 'E') && has_block(c.bs, 'J'))
      CHECK((mb.dE - std::conj(lambda) * mb.dJ).norm() <= 1e-12 * d1.norm());
    if (has_block(c.bs, 'E') && !has_block(c.bs, 'J') &&
        has_block(c.bs, 'R'))
      CHECK((mb.dE + std::conj(lambda) * mb.dR).norm() <= 1e-12 * d1.norm());
  }
}

TEST_CASE("real scopes on real pencils with admissible queries") {
  for (int i = 0; i < 3; ++i) {
    const auto p = random_structured_pencil(6, 2, derive_seed(700, i), true,
                                            /*real_valued=*/true);
    REQUIRE(p.is_real);
    const auto q = admissible_query(
        p, derive_seed(701, i), {BlockSet::JR, Structure::BlockOnly,
                                 Field::Real});
    for (BlockSet bs : {BlockSet::JR, BlockSet::JB, BlockSet::RB, BlockSet::EB,
                        BlockSet::JRB}) {
      CAPTURE(to_string(bs));
      const auto rep = eta_block_real(p, q, real_scope(bs));
      REQUIRE(rep.kind == ReportKind::Exact);
      check_residual_closure(p, q, real_scope(bs), rep);
      // a real perturbation is also a complex one, so the complex error
      // can only be smaller
      const auto complex_rep = eta_block(p, q, block_scope(bs));
      CHECK(complex_rep.value <= rep.value + 1e-10);
    }
  }
}

TEST_CASE("scalar pencil: frozen eigenvalue backward errors") {
  Matrix j = Matrix::Zero(1, 1), r = Matrix::Ones(1, 1), e = Matrix::Ones(1, 1),
         b = Matrix::Ones(1, 1), s = Matrix::Ones(1, 1);
  const auto p = make_pencil(j, r, e, b, s);
  const Complex lambda(0, 1);
  // A = J - R + lambda E = -1 + i, sigma_min = sqrt(2)
  CHECK(rel_gap(eta_block_eigenvalue(p, lambda, BlockSet::JE),
                1.0) <= 1e-14);
  CHECK(rel_gap(eta_block_eigenvalue(p, lambda, BlockSet::JR),
                1.0) <= 1e-14);  // sqrt(2)/sqrt(2)
  CHECK(rel_gap(eta_symmetry_eigenvalue(p, lambda, BlockSet::JR),
                std::sqrt(2.0)) <= 1e-14);
  // B-scope: min of the stacked and the scaled A term
  CHECK(rel_gap(eta_block_eigenvalue(p, lambda, BlockSet::JB),
                std::sqrt(2.0)) <= 1e-14);
  CHECK(rel_gap(eta_block_eigenvalue(p, lambda, BlockSet::JRB),
                1.0) <= 1e-14);  // sigma_min(A)/sqrt(2)
  CHECK_THROWS_AS(eta_symmetry_eigenvalue(p, lambda, BlockSet::JE),
                  InvalidScope);
}

TEST_CASE("eigenvalue minimizers perturb lambda into the spectrum") {
  for (int i = 0; i < 3; ++i) {
    const auto p = random_structured_pencil(4, 3, derive_seed(900, i));
    const Complex lambda(0.0, 0.37 + 0.11 * i);
    for (BlockSet bs : kAllBlockSets) {
      CAPTURE(to_string(bs));
      const auto cert = eigenvalue_minimizer(p, lambda, bs);
      CHECK(rel_gap(cert.value, eta_block_eigenvalue(p, lambda, bs)) <= 1e-12);
      const Matrix pert = evaluate_perturbed(p, cert.minimizer, lambda);
      const double smin =
          pert.jacobiSvd().singularValues().minCoeff();
      CHECK(smin <= 1e-10 * evaluate(p, lambda).norm());
      CHECK((pert * cert.x).norm() <=
            1e-10 * evaluate(p, lambda).norm() * cert.x.norm());
      CHECK(perturbation_norm(cert.minimizer) <= cert.value + 1e-10);
    }
    for (BlockSet bs : {BlockSet::JR, BlockSet::JRB}) {
      const auto cert =
          eigenvalue_minimizer(p, lambda, bs, Structure::SymmetryPreserving);
      CHECK(rel_gap(cert.value, eta_symmetry_eigenvalue(p, lambda, bs)) <=
            1e-12);
      const Matrix pert = evaluate_perturbed(p, cert.minimizer, lambda);
      CHECK(pert.jacobiSvd().singularValues().minCoeff() <=
            1e-10 * evaluate(p, lambda).norm());
    }
  }
}

TEST_CASE("eigenvalue error is the infimum over eigenpair errors") {
  for (int i = 0; i < 2; ++i) {
    const auto p = random_structured_pencil(4, 3, derive_seed(950, i));
    for (int k = 0; k < 8; ++k) {
      const auto q = admissible_query(p, derive_seed(960 + i, k));
      for (BlockSet bs : kAllBlockSets) {
        CAPTURE(to_string(bs));
        const auto rep = eta_block(p, q, block_scope(bs));
        REQUIRE(rep.kind == ReportKind::Exact);
        CHECK(eta_block_eigenvalue(p, q.lambda, bs) <= rep.value + 1e-10);
      }
      for (BlockSet bs : {BlockSet::JR, BlockSet::JRB}) {
        const auto rep = eta_symmetry(p, q, sym_scope(bs));
        REQUIRE(rep.kind == ReportKind::Exact);
        CHECK(eta_symmetry_eigenvalue(p, q.lambda, bs) <= rep.value + 1e-10);
      }
    }
  }
}
