#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "evenbe/backward_errors.hpp"
#include "evenbe/io.hpp"
#include "evenbe/oracle.hpp"
#include "evenbe/verify.hpp"

namespace {

using namespace evenbe;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitInfinite = 2;

// Runs fn(i) for i in [0, count) on a worker pool; rows are later emitted by
// index, so output does not depend on scheduling.
template <typename Fn>
void parallel_rows(std::size_t count, Fn&& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(
      std::max(1u, std::thread::hardware_concurrency()), count));
  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<BlockSet> parse_scopes(const std::string& csv) {
  std::vector<BlockSet> out;
  std::string token;
  std::istringstream ss(csv);
  while (std::getline(ss, token, ',')) {
    std::string name;
    for (char c : token)
      if (!std::isspace(static_cast<unsigned char>(c)))
        name.push_back(static_cast<char>(std::toupper(
            static_cast<unsigned char>(c))));
    if (name.empty()) continue;
    const auto bs = block_set_from_string(name);
    if (!bs)
      throw ParseError("unknown scope \"" + token +
                       "\" (expected a comma list from "
                       "JE,RE,JR,JB,RB,EB,JRB,REB,JEB,JRE,JREB)");
    if (std::find(out.begin(), out.end(), *bs) == out.end())
      out.push_back(*bs);
  }
  if (out.empty()) throw ParseError("scope list is empty");
  return out;
}

json matrix_json(const Matrix& a) {
  json rows = json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < a.cols(); ++j)
      row.push_back(json::array({a(i, j).real(), a(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string block_norms(const MinimizerBlocks& d, int precision) {
  std::ostringstream out;
  out << "|dJ|=" << format_significant(d.dJ.norm(), precision)
      << " |dR|=" << format_significant(d.dR.norm(), precision)
      << " |dE|=" << format_significant(d.dE.norm(), precision)
      << " |dB|=" << format_significant(d.dB.norm(), precision);
  return out.str();
}

// ---------------------------------------------------------------- compute --

struct ComputeOptions {
  std::string pencil_path, lambda_text, x_path;
  std::string scopes = "JE,RE,JR,JB,RB,EB,JRB,REB,JEB,JRE,JREB";
  std::string structure = "both";
  std::string field = "complex";
  std::string output = "text";
  int precision = 5;
};

int cmd_compute(const ComputeOptions& opt) {
  const StructuredPencil p = read_pencil_file(opt.pencil_path);
  const Complex lambda = parse_lambda(opt.lambda_text);
  const VectorTriple xs = read_vectors_file(opt.x_path);
  const EigenPairQuery q = make_query(lambda, xs.x1, xs.x2, xs.x3);
  validate(p, q);

  const Field field = opt.field == "real" ? Field::Real : Field::Complex;
  std::vector<Structure> structures;
  if (opt.structure == "block" || opt.structure == "both")
    structures.push_back(Structure::BlockOnly);
  if (opt.structure == "sym" || opt.structure == "both")
    structures.push_back(Structure::SymmetryPreserving);
  std::vector<PerturbationScope> combos;
  for (BlockSet bs : parse_scopes(opt.scopes))
    for (Structure st : structures) {
      const PerturbationScope sc{bs, st, field};
      if (scope_is_valid(sc)) combos.push_back(sc);
    }
  if (combos.empty())
    throw ParseError("no valid scope/structure/field combination requested");

  std::vector<BackwardErrorReport> reports(combos.size());
  parallel_rows(combos.size(), [&](std::size_t i) {
    reports[i] = eigenpair_backward_error(p, q, combos[i]);
  });

  bool any_infinite = false;
  for (const auto& rep : reports)
    if (rep.kind == ReportKind::Infinite) any_infinite = true;

  if (opt.output == "machine") {
    json out = json::array();
    for (std::size_t i = 0; i < combos.size(); ++i) {
      const auto& rep = reports[i];
      json item;
      item["scope"] = to_string(combos[i]);
      item["kind"] = rep.kind == ReportKind::Exact
                         ? "exact"
                         : rep.kind == ReportKind::Bounds ? "bounds"
                                                          : "infinite";
      if (rep.kind == ReportKind::Exact) item["value"] = rep.value;
      if (rep.kind != ReportKind::Infinite) {
        item["lower"] = rep.lower;
        item["upper"] = rep.upper;
      }
      json conds = json::array();
      for (const auto& c : rep.finiteness)
        conds.push_back({{"name", c.name},
                         {"residual", c.residual},
                         {"threshold", c.threshold},
                         {"passed", c.passed}});
      item["finiteness"] = std::move(conds);
      if (rep.minimizer) {
        item["minimizer"] = {{"dJ", matrix_json(rep.minimizer->dJ)},
                             {"dR", matrix_json(rep.minimizer->dR)},
                             {"dE", matrix_json(rep.minimizer->dE)},
                             {"dB", matrix_json(rep.minimizer->dB)}};
      }
      out.push_back(std::move(item));
    }
    std::cout << out.dump(2) << "\n";
  } else if (opt.output == "csv") {
    std::cout << "scope,kind,value,lower,upper\n";
    for (std::size_t i = 0; i < combos.size(); ++i) {
      const auto& rep = reports[i];
      std::cout << to_string(combos[i]) << ",";
      if (rep.kind == ReportKind::Exact)
        std::cout << "exact," << format_significant(rep.value, opt.precision)
                  << "," << format_significant(rep.lower, opt.precision) << ","
                  << format_significant(rep.upper, opt.precision);
      else if (rep.kind == ReportKind::Bounds)
        std::cout << "bounds,,"
                  << format_significant(rep.lower, opt.precision) << ","
                  << format_significant(rep.upper, opt.precision);
      else
        std::cout << "infinite,,,";
      std::cout << "\n";
    }
  } else {
    std::cout << "pencil: n=" << p.n << " m=" << p.m
              << "  lambda = " << format_lambda(lambda, opt.precision) << "\n";
    for (std::size_t i = 0; i < combos.size(); ++i) {
      const auto& rep = reports[i];
      std::ostringstream line;
      line << to_string(combos[i]);
      std::cout << line.str()
                << std::string(line.str().size() < 14 ? 14 - line.str().size()
                                                      : 1, ' ');
      switch (rep.kind) {
        case ReportKind::Exact:
          std::cout << "exact     " << format_significant(rep.value,
                                                          opt.precision);
          if (rep.minimizer)
            std::cout << "    " << block_norms(*rep.minimizer, opt.precision);
          break;
        case ReportKind::Bounds:
          std::cout << "bounds    ["
                    << format_significant(rep.lower, opt.precision) << ", "
                    << format_significant(rep.upper, opt.precision) << "]";
          if (rep.minimizer)
            std::cout << "    upper attained by "
                      << block_norms(*rep.minimizer, opt.precision);
          break;
        case ReportKind::Infinite:
          std::cout << "INFINITE";
          break;
      }
      std::cout << "\n";
      if (rep.kind == ReportKind::Infinite)
        for (const auto& c : rep.finiteness)
          if (!c.passed)
            std::cout << "    failed: " << c.name << " (residual "
                      << format_significant(c.residual, opt.precision)
                      << " > threshold "
                      << format_significant(c.threshold, opt.precision)
                      << ")\n";
    }
  }
  return any_infinite ? kExitInfinite : kExitOk;
}

// ------------------------------------------------------------------ sweep --

struct SweepOptions {
  std::string pencil_path, grid;
  std::string scopes = "JE,RE,JR,JB,RB,EB,JRB,REB,JEB,JRE,JREB";
  std::string structure = "block";
  std::string output = "csv";
  double min_abs_lambda = 0.05;
  int precision = 5;
};

int cmd_sweep(const SweepOptions& opt) {
  const StructuredPencil p = read_pencil_file(opt.pencil_path);
  double tmin = 0.0, tmax = 0.0;
  long count = 0;
  {
    std::istringstream ss(opt.grid);
    char c1 = 0, c2 = 0;
    if (!(ss >> tmin >> c1 >> tmax >> c2 >> count) || c1 != ':' ||
        c2 != ':' || count < 1 || !ss.eof())
      throw ParseError("grid must be t_min:t_max:count with count >= 1; got \"" +
                       opt.grid + "\"");
  }
  const auto scopes = parse_scopes(opt.scopes);
  const bool with_block =
      opt.structure == "block" || opt.structure == "both";
  const bool with_sym = opt.structure == "sym" || opt.structure == "both";

  struct Column {
    std::string header;
    BlockSet blocks;
    Structure structure;
  };
  std::vector<Column> columns;
  for (BlockSet bs : scopes) {
    if (with_block)
      columns.push_back({"etaB_" + to_string(bs), bs, Structure::BlockOnly});
    if (with_sym && (bs == BlockSet::JR || bs == BlockSet::JRB))
      columns.push_back(
          {"etaS_" + to_string(bs), bs, Structure::SymmetryPreserving});
  }
  if (columns.empty())
    throw ParseError("no eigenvalue-error columns for the requested "
                     "scopes/structure (symmetry variants exist only for JR "
                     "and JRB)");

  std::vector<double> ts;
  for (long k = 0; k < count; ++k) {
    const double t =
        count == 1 ? tmin : tmin + (tmax - tmin) * double(k) / double(count - 1);
    if (std::abs(t) < opt.min_abs_lambda) continue;
    ts.push_back(t);
  }
  if (ts.empty())
    throw ParseError("the grid is empty after excluding |t| < " +
                     format_significant(opt.min_abs_lambda, 6));

  std::vector<std::vector<double>> rows(ts.size(),
                                        std::vector<double>(columns.size()));
  parallel_rows(ts.size(), [&](std::size_t i) {
    const Complex lambda(0.0, ts[i]);
    for (std::size_t j = 0; j < columns.size(); ++j)
      rows[i][j] = columns[j].structure == Structure::BlockOnly
                       ? eta_block_eigenvalue(p, lambda, columns[j].blocks)
                       : eta_symmetry_eigenvalue(p, lambda,
                                                 columns[j].blocks);
  });

  std::vector<std::size_t> min_row(columns.size(), 0);
  for (std::size_t j = 0; j < columns.size(); ++j)
    for (std::size_t i = 1; i < ts.size(); ++i)
      if (rows[i][j] < rows[min_row[j]][j]) min_row[j] = i;

  if (opt.output == "machine") {
    json out;
    out["grid"] = ts;
    json cols = json::array();
    for (const auto& c : columns) cols.push_back(c.header);
    out["columns"] = std::move(cols);
    out["rows"] = rows;
    json mins;
    for (std::size_t j = 0; j < columns.size(); ++j)
      mins[columns[j].header] = {{"t", ts[min_row[j]]},
                                 {"value", rows[min_row[j]][j]}};
    out["minimizers"] = std::move(mins);
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "t";
    for (const auto& c : columns) std::cout << "," << c.header;
    std::cout << "\n";
    for (std::size_t i = 0; i < ts.size(); ++i) {
      std::cout << format_significant(ts[i], opt.precision);
      for (std::size_t j = 0; j < columns.size(); ++j)
        std::cout << "," << format_significant(rows[i][j], opt.precision);
      std::cout << "\n";
    }
    for (std::size_t j = 0; j < columns.size(); ++j)
      std::cout << "# minimizer " << columns[j].header
                << ": t=" << format_significant(ts[min_row[j]], opt.precision)
                << " value="
                << format_significant(rows[min_row[j]][j], opt.precision)
                << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------- compare --

struct CompareOptions {
  std::string pencil_path;
  Index n = 4, m = 3;
  int num_lambdas = 7;
  std::uint64_t seed = 1;
  std::string output = "text";
  int precision = 5;
};

struct CompareRow {
  Complex lambda;
  double eta = 0.0, eta_even = 0.0;
  double je = 0.0, re = 0.0, eb = 0.0, jb = 0.0, jeb = 0.0, reb = 0.0;
  BackwardErrorReport je_sym, re_sym, jre_sym;
};

void assert_row(bool ok, const std::string& what, Complex lambda) {
  if (!ok)
    throw std::runtime_error(
        "internal consistency violation at lambda = " +
        format_lambda(lambda, 6) + ": " + what);
}

int cmd_compare(const CompareOptions& opt) {
  StructuredPencil p =
      opt.pencil_path.empty()
          ? random_structured_pencil(opt.n, opt.m, opt.seed)
          : read_pencil_file(opt.pencil_path);
  if (opt.num_lambdas < 1) throw ParseError("num-lambdas must be positive");

  std::vector<EigenPairQuery> queries;
  for (int i = 0; i < opt.num_lambdas; ++i)
    queries.push_back(admissible_query(p, derive_seed(opt.seed, 7000 + i)));

  std::vector<CompareRow> rows(queries.size());
  parallel_rows(queries.size(), [&](std::size_t i) {
    const auto& q = queries[i];
    CompareRow row;
    row.lambda = q.lambda;
    row.eta = eta_unstructured(p, q);
    row.eta_even = eta_even(p, q);
    const auto blk = [&](BlockSet bs) {
      const auto rep =
          eta_block(p, q, {bs, Structure::BlockOnly, Field::Complex});
      assert_row(rep.kind == ReportKind::Exact,
                 "block scope " + to_string(bs) + " not finite", q.lambda);
      return rep.value;
    };
    row.je = blk(BlockSet::JE);
    row.re = blk(BlockSet::RE);
    row.eb = blk(BlockSet::EB);
    row.jb = blk(BlockSet::JB);
    row.jeb = blk(BlockSet::JEB);
    row.reb = blk(BlockSet::REB);
    row.je_sym = eta_symmetry(
        p, q, {BlockSet::JE, Structure::SymmetryPreserving, Field::Complex});
    row.re_sym = eta_symmetry(
        p, q, {BlockSet::RE, Structure::SymmetryPreserving, Field::Complex});
    row.jre_sym = eta_symmetry(
        p, q, {BlockSet::JRE, Structure::SymmetryPreserving, Field::Complex});
    rows[i] = std::move(row);
  });

  const double rt2 = std::sqrt(2.0);
  for (const auto& row : rows) {
    const auto rel = [](double a, double b) {
      return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300});
    };
    assert_row(row.eta <= row.eta_even + 1e-10, "eta > eta_even", row.lambda);
    assert_row(rel(row.je, row.re) <= 1e-12, "etaB(J,E) != etaB(R,E)",
               row.lambda);
    assert_row(rel(row.jeb, row.reb) <= 1e-12, "etaB(J,E,B) != etaB(R,E,B)",
               row.lambda);
    for (double v : {row.je, row.eb, row.jb, row.jeb})
      assert_row(row.eta <= rt2 * v + 1e-10, "eta > sqrt(2)*etaB",
                 row.lambda);
    assert_row(row.jeb <= row.je + 1e-10,
               "larger scope has larger backward error", row.lambda);
    assert_row(row.je_sym.kind == ReportKind::Exact &&
                   row.je <= row.je_sym.value + 1e-10,
               "etaB(J,E) > etaS(J,E)", row.lambda);
    assert_row(row.re_sym.kind == ReportKind::Bounds &&
                   row.re_sym.lower <= row.re_sym.upper + 1e-10 &&
                   row.re <= row.re_sym.upper + 1e-10,
               "etaS(R,E) bounds inconsistent", row.lambda);
    assert_row(row.jre_sym.kind == ReportKind::Bounds &&
                   row.jre_sym.lower <= row.jre_sym.upper + 1e-10,
               "etaS(J,R,E) bounds inconsistent", row.lambda);
  }

  ComparisonTable t1;
  t1.title = "Block-structure-preserving eigenpair backward errors "
             "(structured columns scaled by sqrt(2))";
  t1.headers = {"eta", "eta_even", "sqrt2*etaB(J,E)", "sqrt2*etaB(E,B)",
                "sqrt2*etaB(J,B)", "sqrt2*etaB(J,E,B)"};
  ComparisonTable t2;
  t2.title = "Symmetry-structure-preserving eigenpair backward errors";
  t2.headers = {"etaS(J,E)", "etaS(R,E)", "etaS(J,R,E)"};
  for (const auto& row : rows) {
    t1.lambdas.push_back(row.lambda);
    t1.rows.push_back({value_cell(row.eta), value_cell(row.eta_even),
                       value_cell(rt2 * row.je), value_cell(rt2 * row.eb),
                       value_cell(rt2 * row.jb), value_cell(rt2 * row.jeb)});
    t2.lambdas.push_back(row.lambda);
    t2.rows.push_back(
        {value_cell(row.je_sym.value),
         pair_cell(row.re_sym.lower, row.re_sym.upper),
         pair_cell(row.jre_sym.lower, row.jre_sym.upper)});
  }

  if (opt.output == "machine") {
    json out = json::array();
    out.push_back(json::parse(render_machine(t1)));
    out.push_back(json::parse(render_machine(t2)));
    std::cout << out.dump(2) << "\n";
  } else if (opt.output == "csv") {
    std::cout << render_csv(t1, opt.precision) << "\n"
              << render_csv(t2, opt.precision);
  } else {
    std::cout << render_text(t1, opt.precision) << "\n"
              << render_text(t2, opt.precision);
  }
  return kExitOk;
}

// ----------------------------------------------------------------- verify --

struct VerifyCliOptions {
  std::string pencil_path;
  VerifyOptions opts;
};

int cmd_verify(const VerifyCliOptions& vo) {
  std::optional<StructuredPencil> p;
  if (!vo.pencil_path.empty()) p = read_pencil_file(vo.pencil_path);
  const auto summary = run_verification(vo.opts, p ? &*p : nullptr);
  for (const auto& pr : summary.properties) {
    std::cout << pr.name << ": " << pr.passed << "/" << pr.total
              << (pr.passed == pr.total ? " ok" : " FAIL") << "\n";
    if (pr.passed != pr.total && !pr.first_failure.empty())
      std::cout << "    first failure: " << pr.first_failure << "\n";
  }
  std::cout << (summary.all_passed ? "verification passed"
                                   : "verification FAILED")
            << "\n";
  return summary.all_passed ? kExitOk : kExitInputError;
}

// --------------------------------------------------------------- generate --

struct GenerateOptions {
  Index n = 4, m = 3;
  std::uint64_t seed = 1;
  bool passive = true;
  bool real_valued = false;
  std::string out_path;
};

int cmd_generate(const GenerateOptions& opt) {
  const StructuredPencil p = random_structured_pencil(
      opt.n, opt.m, opt.seed, opt.passive, opt.real_valued);
  PencilFileMetadata meta;
  meta.seed = opt.seed;
  meta.description = std::string("seeded random pencil") +
                     (opt.passive ? ", strictly passive" : "") +
                     (opt.real_valued ? ", real" : "");
  const std::string text = write_pencil_json(p, meta);
  if (opt.out_path.empty() || opt.out_path == "-")
    std::cout << text;
  else
    write_text_file(opt.out_path, text);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structured eigenpair/eigenvalue backward errors for even "
               "optimal-control pencils L(z) = M + zN over blocks "
               "(J,R,E,B,S)"};
  app.require_subcommand(1);

  ComputeOptions copt;
  auto* compute = app.add_subcommand(
      "compute", "Eigenpair backward errors of (lambda, x) per scope");
  compute->add_option("--pencil", copt.pencil_path, "pencil JSON file")
      ->required();
  compute->add_option("--lambda", copt.lambda_text,
                      "purely imaginary eigenvalue, format i<real>")
      ->required();
  compute->add_option("--x", copt.x_path, "vector JSON file (x1, x2, x3)")
      ->required();
  compute->add_option("--scopes", copt.scopes, "comma list of block sets");
  compute->add_option("--structure", copt.structure, "block | sym | both")
      ->check(CLI::IsMember({"block", "sym", "both"}));
  compute->add_option("--field", copt.field, "complex | real")
      ->check(CLI::IsMember({"complex", "real"}));
  compute->add_option("--precision", copt.precision, "significant digits")
      ->check(CLI::Range(1, 17));
  compute->add_option("--output", copt.output, "text | csv | machine")
      ->check(CLI::IsMember({"text", "csv", "machine"}));

  SweepOptions sopt;
  auto* sweep = app.add_subcommand(
      "sweep", "Eigenvalue backward errors over a grid lambda = i t");
  sweep->add_option("--pencil", sopt.pencil_path, "pencil JSON file")
      ->required();
  sweep->add_option("--grid", sopt.grid, "t_min:t_max:count")->required();
  sweep->add_option("--scopes", sopt.scopes, "comma list of block sets");
  sweep->add_option("--structure", sopt.structure,
                    "block | sym | both (sym only for JR, JRB)")
      ->check(CLI::IsMember({"block", "sym", "both"}));
  sweep->add_option("--min-abs-lambda", sopt.min_abs_lambda,
                    "exclude |t| below this (default 0.05)");
  sweep->add_option("--precision", sopt.precision, "significant digits")
      ->check(CLI::Range(1, 17));
  sweep->add_option("--output", sopt.output, "csv | machine")
      ->check(CLI::IsMember({"csv", "text", "machine"}));

  CompareOptions mopt;
  auto* compare = app.add_subcommand(
      "compare", "Comparison tables over admissible random queries");
  compare->add_option("--pencil", mopt.pencil_path,
                      "pencil JSON file (omit to generate)");
  compare->add_option("--n", mopt.n, "generated pencil size n");
  compare->add_option("--m", mopt.m, "generated pencil size m");
  compare->add_option("--num-lambdas", mopt.num_lambdas,
                      "number of table rows");
  compare->add_option("--seed", mopt.seed, "generator seed");
  compare->add_option("--precision", mopt.precision, "significant digits")
      ->check(CLI::Range(1, 17));
  compare->add_option("--output", mopt.output, "text | csv | machine")
      ->check(CLI::IsMember({"text", "csv", "machine"}));

  VerifyCliOptions vopt;
  bool skip_oracle = false;
  auto* verify = app.add_subcommand(
      "verify", "Run the invariant suite and print per-property pass counts");
  verify->add_option("--pencil", vopt.pencil_path,
                     "pencil JSON file (omit to use seeded pencils)");
  verify->add_option("--seed", vopt.opts.seed, "suite seed");
  verify->add_option("--n", vopt.opts.n, "generated pencil size n");
  verify->add_option("--m", vopt.opts.m, "generated pencil size m");
  verify->add_option("--instances", vopt.opts.instances,
                     "instances per property");
  verify->add_option("--restarts", vopt.opts.oracle.restarts,
                     "oracle restarts");
  verify->add_flag("--skip-oracle", skip_oracle,
                   "skip the oracle sandwich property");
  verify->add_option("--fault-scale", vopt.opts.fault_injection_scale,
                     "test hook: corrupt closed-form values by this factor");

  GenerateOptions gopt;
  auto* generate = app.add_subcommand(
      "generate", "Write a seeded random structured pencil as JSON");
  generate->add_option("--n", gopt.n, "pencil size n");
  generate->add_option("--m", gopt.m, "pencil size m");
  generate->add_option("--seed", gopt.seed, "generator seed");
  generate->add_flag("--no-passive{false}", gopt.passive,
                     "skip the strict-passivity screen");
  generate->add_flag("--real", gopt.real_valued, "draw a real pencil");
  generate->add_option("--out", gopt.out_path,
                       "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitInputError;
  }

  try {
    if (*compute) return cmd_compute(copt);
    if (*sweep) return cmd_sweep(sopt);
    if (*compare) return cmd_compare(mopt);
    if (*verify) {
      vopt.opts.with_oracle = !skip_oracle;
      return cmd_verify(vopt);
    }
    if (*generate) return cmd_generate(gopt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
