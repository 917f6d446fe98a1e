#include "evenbe/verify.hpp"

#include <cmath>
#include <sstream>

#include "evenbe/backward_errors.hpp"
#include "evenbe/mappings.hpp"

namespace evenbe {

namespace {

struct Check {
  PropertyResult result;

  explicit Check(std::string name) { result.name = std::move(name); }

  void expect(bool ok, const std::string& detail) {
    ++result.total;
    if (ok)
      ++result.passed;
    else if (result.first_failure.empty())
      result.first_failure = detail;
  }
};

std::vector<PerturbationScope> complex_scopes() {
  std::vector<PerturbationScope> v;
  for (BlockSet bs : kAllBlockSets)
    v.push_back({bs, Structure::BlockOnly, Field::Complex});
  for (BlockSet bs : kAllBlockSets) {
    const PerturbationScope sc{bs, Structure::SymmetryPreserving,
                               Field::Complex};
    if (scope_is_valid(sc)) v.push_back(sc);
  }
  return v;
}

double rel_gap(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
}

Matrix delta_of(const MinimizerBlocks& d, Complex z, Index m) {
  return evaluate_blocks(d.dJ, d.dR, d.dE, d.dB, Matrix::Zero(m, m), z);
}

struct Instance {
  StructuredPencil p;
  EigenPairQuery q;
};

std::vector<Instance> make_instances(const VerifyOptions& opts,
                                     const StructuredPencil* pencil) {
  std::vector<Instance> out;
  for (int i = 0; i < opts.instances; ++i) {
    Instance inst{pencil ? *pencil
                         : random_structured_pencil(
                               opts.n, opts.m,
                               derive_seed(opts.seed, 400 + i)),
                  {}};
    inst.q = admissible_query(inst.p, derive_seed(opts.seed, 300 + i));
    out.push_back(std::move(inst));
  }
  return out;
}

void check_two_sided_mapping(Check& ck, const VerifyOptions& opts) {
  const Index n = 5;
  for (int i = 0; i < opts.instances; ++i) {
    RandomStream rs(derive_seed(opts.seed, 100 + i));
    const Matrix planted = rs.normal_matrix(n, n);
    const Vector u = rs.normal_vector(n);
    const Vector w = rs.normal_vector(n);
    const Vector r = planted * u;
    const Vector s = planted.adjoint() * w;
    const auto map = two_sided_minimal_map(u, r, w, s);
    ck.expect(map.exists, "two-sided map reported infeasible");
    if (!map.exists) continue;
    const double scale = 1.0 + planted.norm() * (u.norm() + w.norm());
    ck.expect((map.delta * u - r).norm() <= 1e-10 * scale,
              "two-sided column constraint violated");
    ck.expect((map.delta.adjoint() * w - s).norm() <= 1e-10 * scale,
              "two-sided row constraint violated");
    ck.expect(map.fro_norm <= planted.norm() + 1e-10,
              "two-sided map larger than a feasible point");
    const Matrix pu = Matrix::Identity(n, n) - u * u.adjoint() / u.squaredNorm();
    const Matrix pw = Matrix::Identity(n, n) - w * w.adjoint() / w.squaredNorm();
    for (int k = 0; k < 10; ++k) {
      const Matrix z = pw * rs.normal_matrix(n, n) * pu;
      ck.expect(map.fro_norm <= (map.delta + z).norm() + 1e-10,
                "two-sided map undercut by a null-space move");
    }
  }
}

void check_skew_mapping(Check& ck, const VerifyOptions& opts) {
  const Index n = 5;
  for (int i = 0; i < opts.instances; ++i) {
    RandomStream rs(derive_seed(opts.seed, 120 + i));
    const Matrix a = rs.normal_matrix(n, n);
    const Matrix planted = 0.5 * (a - a.adjoint());
    const Matrix x = rs.normal_matrix(n, 2);
    const Matrix y = planted * x;
    const auto map = skew_hermitian_minimal_map(x, y);
    ck.expect(map.exists, "skew-Hermitian map reported infeasible");
    if (!map.exists) continue;
    const double scale = 1.0 + planted.norm() * x.norm();
    ck.expect((map.delta * x - y).norm() <= 1e-10 * scale,
              "skew-Hermitian constraint violated");
    ck.expect((map.delta + map.delta.adjoint()).norm() <=
                  1e-10 * (1.0 + map.fro_norm),
              "skew-Hermitian structure violated");
    ck.expect(map.fro_norm <= planted.norm() + 1e-10,
              "skew-Hermitian map larger than a feasible point");
    ck.expect(map.closed_form_fro_norm &&
                  rel_gap(*map.closed_form_fro_norm, map.fro_norm) <= 1e-10,
              "skew-Hermitian closed-form norm mismatch");
    const Matrix proj = Matrix::Identity(n, n) - x * pseudoinverse(x);
    for (int k = 0; k < 10; ++k) {
      const Matrix g = rs.normal_matrix(n, n);
      const Matrix z = proj * (0.5 * (g - g.adjoint())) * proj;
      ck.expect(map.fro_norm <= (map.delta + z).norm() + 1e-10,
                "skew-Hermitian map undercut by a null-space move");
    }
  }
}

void check_real_mapping(Check& ck, const VerifyOptions& opts) {
  const Index n = 5;
  for (int i = 0; i < opts.instances; ++i) {
    RandomStream rs(derive_seed(opts.seed, 140 + i));
    const Matrix planted = rs.normal_matrix(n, n, true);
    const Vector u = rs.normal_vector(n);
    const Vector w = rs.normal_vector(n);
    const Vector r = planted * u;
    const Vector s = planted.transpose() * w;
    const auto map = real_two_sided_minimal_map(u, r, w, s);
    ck.expect(map.exists, "real map reported infeasible");
    if (!map.exists) continue;
    const double scale = 1.0 + planted.norm() * (u.norm() + w.norm());
    ck.expect((map.delta * u - r).norm() <= 1e-10 * scale,
              "real map column constraint violated");
    ck.expect((map.delta.transpose() * w - s).norm() <= 1e-10 * scale,
              "real map row constraint violated");
    ck.expect(map.delta.imag().norm() <= 1e-10 * (1.0 + map.fro_norm),
              "real map is not real");
    ck.expect(map.fro_norm <= planted.norm() + 1e-10,
              "real map larger than a feasible point");
  }
}

void check_residual_closure(Check& ck, const std::vector<Instance>& instances) {
  const auto scopes = complex_scopes();
  for (const auto& inst : instances) {
    const Vector x = full_x(inst.q);
    const double lnorm = evaluate(inst.p, inst.q.lambda).norm();
    for (const auto& sc : scopes) {
      const auto rep = eigenpair_backward_error(inst.p, inst.q, sc);
      ck.expect(rep.kind != ReportKind::Infinite,
                to_string(sc) + " infinite on an admissible query");
      if (rep.kind == ReportKind::Infinite) continue;
      ck.expect(rep.minimizer.has_value(), to_string(sc) + " lacks minimizer");
      if (!rep.minimizer) continue;
      const Matrix pert = evaluate_perturbed(inst.p, *rep.minimizer,
                                             inst.q.lambda);
      const double dnorm =
          delta_of(*rep.minimizer, inst.q.lambda, inst.p.m).norm();
      ck.expect((pert * x).norm() <= 1e-10 * (lnorm + dnorm) * x.norm(),
                to_string(sc) + " minimizer fails the eigenpair equation");
      if (sc.structure == Structure::SymmetryPreserving) {
        const auto& d = *rep.minimizer;
        const double dn = 1.0 + dnorm;
        ck.expect((d.dJ + d.dJ.adjoint()).norm() <= 1e-10 * dn &&
                      (d.dR - d.dR.adjoint()).norm() <= 1e-10 * dn &&
                      (d.dE - d.dE.adjoint()).norm() <= 1e-10 * dn,
                  to_string(sc) + " minimizer leaves the symmetry classes");
      }
    }
  }
}

void check_equal_scopes(Check& ck, const std::vector<Instance>& instances) {
  const std::pair<BlockSet, BlockSet> pairs[] = {
      {BlockSet::RE, BlockSet::JE},
      {BlockSet::RB, BlockSet::JB},
      {BlockSet::JEB, BlockSet::REB}};
  for (const auto& inst : instances)
    for (const auto& [a, b] : pairs) {
      const auto ra = eta_block(inst.p, inst.q, {a, Structure::BlockOnly,
                                                 Field::Complex});
      const auto rb = eta_block(inst.p, inst.q, {b, Structure::BlockOnly,
                                                 Field::Complex});
      ck.expect(ra.kind == ReportKind::Exact && rb.kind == ReportKind::Exact &&
                    rel_gap(ra.value, rb.value) <= 1e-12,
                to_string(a) + " != " + to_string(b));
    }
}

void check_divisor_relations(Check& ck, const std::vector<Instance>& instances,
                             double fault) {
  for (const auto& inst : instances) {
    const double a2 = std::norm(inst.q.lambda);
    const auto rep = [&](BlockSet bs, Structure st) {
      return eigenpair_backward_error(inst.p, inst.q,
                                      {bs, st, Field::Complex});
    };
    const double je = rep(BlockSet::JE, Structure::BlockOnly).value;
    const double jr = rep(BlockSet::JR, Structure::BlockOnly).value;
    const double jre = rep(BlockSet::JRE, Structure::BlockOnly).value;
    const double jr_sym =
        rep(BlockSet::JR, Structure::SymmetryPreserving).value;
    ck.expect(rel_gap(fault * jr, je * std::sqrt((1.0 + a2) / 2.0)) <= 1e-12,
              "eta_B(J,R) != eta_B(J,E) * sqrt((1+|l|^2)/2)");
    ck.expect(rel_gap(fault * jre,
                      je * std::sqrt((1.0 + a2) / (2.0 + a2))) <= 1e-12,
              "eta_B(J,R,E) != eta_B(J,E) * sqrt((1+|l|^2)/(2+|l|^2))");
    ck.expect(rel_gap(fault * jr_sym, std::sqrt(2.0) * jr) <= 1e-12,
              "eta_S(J,R) != sqrt(2) * eta_B(J,R)");
  }
}

void check_dominance(Check& ck, const std::vector<Instance>& instances,
                     double fault) {
  for (const auto& inst : instances) {
    const double eta = eta_unstructured(inst.p, inst.q);
    const double eta_e = eta_even(inst.p, inst.q);
    ck.expect(eta <= eta_e + 1e-10, "eta > eta_even");
    for (BlockSet bs : kAllBlockSets) {
      const auto blk = eta_block(inst.p, inst.q,
                                 {bs, Structure::BlockOnly, Field::Complex});
      if (blk.kind != ReportKind::Exact) continue;
      ck.expect(eta <= std::sqrt(2.0) * fault * blk.value + 1e-10,
                "eta > sqrt(2) * eta_B(" + to_string(bs) + ")");
      const PerturbationScope sym{bs, Structure::SymmetryPreserving,
                                  Field::Complex};
      if (!scope_is_valid(sym)) continue;
      const auto symr = eta_symmetry(inst.p, inst.q, sym);
      if (symr.kind == ReportKind::Infinite) continue;
      ck.expect(blk.value <= symr.upper + 1e-10,
                "eta_B > eta_S upper for " + to_string(bs));
      if (symr.kind == ReportKind::Bounds)
        ck.expect(symr.lower <= symr.upper + 1e-10,
                  "crossed bounds for " + to_string(bs));
    }
  }
}

void check_oracle_sandwich(Check& ck, const std::vector<Instance>& instances,
                           const VerifyOptions& opts) {
  const auto scopes = complex_scopes();
  const double fault = opts.fault_injection_scale;
  int idx = 0;
  for (const auto& inst : instances) {
    OracleConfig cfg = opts.oracle;
    cfg.seed = derive_seed(opts.oracle.seed, 500 + idx++);
    for (const auto& sc : scopes) {
      const auto rep = eigenpair_backward_error(inst.p, inst.q, sc);
      if (rep.kind == ReportKind::Infinite) {
        ck.expect(false, to_string(sc) + " infinite on an admissible query");
        continue;
      }
      const double oracle = least_norm_feasible(inst.p, inst.q, sc, cfg);
      if (rep.kind == ReportKind::Exact) {
        const double closed = fault * rep.value;
        ck.expect(rel_gap(closed, oracle) <= 1e-7,
                  to_string(sc) + " oracle disagrees with the closed form");
        ck.expect(oracle >= closed - 1e-8 * (1.0 + closed),
                  to_string(sc) + " oracle undercuts the closed form");
      } else {
        ck.expect(oracle >= fault * rep.lower - 1e-8 &&
                      oracle <= fault * rep.upper + 1e-8,
                  to_string(sc) + " oracle escapes the bounds");
      }
    }
  }
}

void check_eigenvalue_certificates(Check& ck,
                                   const std::vector<Instance>& instances) {
  for (const auto& inst : instances) {
    const Complex lambda = inst.q.lambda;
    const double lnorm = evaluate(inst.p, lambda).norm();
    for (BlockSet bs : kAllBlockSets) {
      const auto cert = eigenvalue_minimizer(inst.p, lambda, bs);
      ck.expect(certify_eigenvalue(inst.p, cert.minimizer, lambda) <=
                    1e-10 * lnorm,
                "rank-one construction fails for " + to_string(bs));
      ck.expect(rel_gap(cert.value,
                        eta_block_eigenvalue(inst.p, lambda, bs)) <= 1e-12,
                "certificate value mismatch for " + to_string(bs));
      const auto blk = eta_block(inst.p, inst.q,
                                 {bs, Structure::BlockOnly, Field::Complex});
      if (blk.kind == ReportKind::Exact)
        ck.expect(cert.value <= blk.value + 1e-10,
                  "eigenvalue error above an eigenpair error for " +
                      to_string(bs));
    }
    for (BlockSet bs : {BlockSet::JR, BlockSet::JRB}) {
      const auto cert = eigenvalue_minimizer(inst.p, lambda, bs,
                                             Structure::SymmetryPreserving);
      ck.expect(certify_eigenvalue(inst.p, cert.minimizer, lambda) <=
                    1e-10 * lnorm,
                "symmetry rank-one construction fails for " + to_string(bs));
      const auto symr = eta_symmetry(inst.p, inst.q,
                                     {bs, Structure::SymmetryPreserving,
                                      Field::Complex});
      if (symr.kind == ReportKind::Exact)
        ck.expect(cert.value <= symr.value + 1e-10,
                  "symmetry eigenvalue error above an eigenpair error for " +
                      to_string(bs));
    }
  }
}

}  // namespace

VerifySummary run_verification(const VerifyOptions& opts,
                               const StructuredPencil* pencil) {
  if (opts.instances < 1)
    throw std::invalid_argument("instances must be positive");
  const auto instances = make_instances(opts, pencil);
  VerifySummary summary;
  auto run = [&](const char* name, auto&& fn) {
    Check ck(name);
    fn(ck);
    summary.properties.push_back(ck.result);
  };
  run("two-sided mapping closure",
      [&](Check& ck) { check_two_sided_mapping(ck, opts); });
  run("skew-Hermitian mapping closure",
      [&](Check& ck) { check_skew_mapping(ck, opts); });
  run("real mapping closure",
      [&](Check& ck) { check_real_mapping(ck, opts); });
  run("residual closure",
      [&](Check& ck) { check_residual_closure(ck, instances); });
  run("equal-scope identities",
      [&](Check& ck) { check_equal_scopes(ck, instances); });
  run("divisor relations", [&](Check& ck) {
    check_divisor_relations(ck, instances, opts.fault_injection_scale);
  });
  run("dominance chain", [&](Check& ck) {
    check_dominance(ck, instances, opts.fault_injection_scale);
  });
  if (opts.with_oracle)
    run("oracle sandwich",
        [&](Check& ck) { check_oracle_sandwich(ck, instances, opts); });
  run("eigenvalue certification",
      [&](Check& ck) { check_eigenvalue_certificates(ck, instances); });
  summary.all_passed = true;
  for (const auto& pr : summary.properties)
    if (pr.passed != pr.total) summary.all_passed = false;
  return summary;
}

}  // namespace evenbe
