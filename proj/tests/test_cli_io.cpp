#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "evenbe/io.hpp"
#include "evenbe/oracle.hpp"
#include "generators.hpp"
#include "json.hpp"

using namespace evenbe;
using testutil::example_pencil;
using testutil::rel_gap;

namespace {

const std::string& scratch_dir() {
  static const std::string dir = [] {
    char tmpl[] = "/tmp/evenbe_test_XXXXXX";
    const char* d = mkdtemp(tmpl);
    REQUIRE(d != nullptr);
    return std::string(d);
  }();
  return dir;
}

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const std::string base = scratch_dir() + "/run" + std::to_string(counter++);
  const std::string cmd = std::string(EVENBE_CLI_PATH) + " " + args + " > " +
                          base + ".out 2> " + base + ".err";
  const int status = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text_file(base + ".out");
  r.err = read_text_file(base + ".err");
  return r;
}

std::string example_files_pencil() {
  const std::string path = scratch_dir() + "/example_pencil.json";
  write_pencil_file(path, example_pencil());
  return path;
}

std::string example_files_vectors() {
  const std::string path = scratch_dir() + "/example_x.json";
  VectorTriple v;
  v.x1 = Vector::Zero(2);
  v.x2 = Vector(2);
  v.x2 << 1, 1;
  v.x3 = Vector::Zero(3);
  write_vectors_file(path, v);
  return path;
}

}  // namespace

TEST_CASE("pencil JSON round-trips every bit") {
  const auto p = random_structured_pencil(4, 3, 2024);
  PencilFileMetadata meta;
  meta.seed = 2024;
  meta.description = "round-trip fixture";
  const std::string text = write_pencil_json(p, meta);
  PencilFileMetadata back_meta;
  const auto back = read_pencil_json(text, &back_meta);
  CHECK((p.J - back.J).norm() == 0.0);
  CHECK((p.R - back.R).norm() == 0.0);
  CHECK((p.E - back.E).norm() == 0.0);
  CHECK((p.B - back.B).norm() == 0.0);
  CHECK((p.S - back.S).norm() == 0.0);
  CHECK(back.is_real == p.is_real);
  CHECK(back_meta.seed == meta.seed);
  CHECK(back_meta.description == meta.description);

  // writing the re-read pencil reproduces the identical file
  CHECK(write_pencil_json(back, back_meta) == text);

  const std::string path = scratch_dir() + "/roundtrip.json";
  write_pencil_file(path, p, meta);
  const auto from_file = read_pencil_file(path);
  CHECK((p.J - from_file.J).norm() == 0.0);
}

TEST_CASE("vector JSON round-trips") {
  RandomStream rng(5);
  VectorTriple v;
  v.x1 = rng.normal_vector(3, false);
  v.x2 = rng.normal_vector(3, false);
  v.x3 = rng.normal_vector(2, false);
  const auto back = read_vectors_json(write_vectors_json(v));
  CHECK((v.x1 - back.x1).norm() == 0.0);
  CHECK((v.x2 - back.x2).norm() == 0.0);
  CHECK((v.x3 - back.x3).norm() == 0.0);
}

TEST_CASE("pencil parse errors name the offending field") {
  const std::string good = write_pencil_json(example_pencil());
  using nlohmann::json;

  auto expect_error = [](json doc, const std::string& needle) {
    try {
      read_pencil_json(doc.dump());
      FAIL_CHECK("expected ParseError containing '" << needle << "'");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };

  json doc = json::parse(good);
  doc.erase("J");
  expect_error(doc, "J: missing matrix field");

  doc = json::parse(good);
  doc["R"].erase(1);
  expect_error(doc, "R: expected 2 rows");

  doc = json::parse(good);
  doc["E"][0].erase(1);
  expect_error(doc, "E[0]: expected 2 entries");

  doc = json::parse(good);
  doc["B"][1][2] = "oops";
  expect_error(doc, "B[1][2]: expected [re, im] number pair");

  doc = json::parse(good);
  doc["schema_version"] = 2;
  expect_error(doc, "schema_version: expected the integer 1");

  doc = json::parse(good);
  doc["n"] = -1;
  expect_error(doc, "n: expected a positive integer");

  CHECK_THROWS_AS(read_pencil_json("not json at all"), ParseError);
  CHECK_THROWS_AS(read_pencil_json("[1,2,3]"), ParseError);
}

TEST_CASE("lambda parsing accepts i<real> and rejects everything else") {
  CHECK(parse_lambda("i0.25") == Complex(0.0, 0.25));
  CHECK(parse_lambda("i-0.5") == Complex(0.0, -0.5));
  CHECK(parse_lambda("-i0.5") == Complex(0.0, -0.5));
  CHECK(parse_lambda("I2") == Complex(0.0, 2.0));
  CHECK(parse_lambda(" i1 ") == Complex(0.0, 1.0));
  CHECK_THROWS_AS(parse_lambda("0.25"), ParseError);
  CHECK_THROWS_AS(parse_lambda("i"), ParseError);
  CHECK_THROWS_AS(parse_lambda("ix"), ParseError);
  CHECK_THROWS_AS(parse_lambda("i0"), ParseError);
  try {
    parse_lambda("0.25");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("purely imaginary") != std::string::npos);
  }
}

TEST_CASE("full-precision formatting parses back to the same double") {
  for (double v : {1.0 / 3.0, 0.1, 4.0 / std::sqrt(34.0), 1e-300, -2.5e17,
                   0.0, 1.0}) {
    const std::string s = format_full(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_significant(0.6859943405700353, 5) == "0.68599");
  CHECK(format_significant(2.0, 5) == "2");
}

TEST_CASE("table renderers: frozen CSV, aligned text, JSON machine form") {
  ComparisonTable t;
  t.title = "demo";
  t.headers = {"alpha", "beta"};
  t.lambdas = {Complex(0.0, 0.5), Complex(0.0, -1.5)};
  t.rows = {{value_cell(1.25), pair_cell(0.5, 2.0)},
            {value_cell(0.25), value_cell(3.0)}};

  CHECK(render_csv(t, 5) ==
        "lambda_imag,alpha,beta_lower,beta_upper\n"
        "0.5,1.25,0.5,2\n"
        "-1.5,0.25,3,3\n");

  const std::string text = render_text(t, 5);
  CHECK(text.find("demo") != std::string::npos);
  CHECK(text.find("lambda") != std::string::npos);
  CHECK(text.find("[0.5, 2]") != std::string::npos);
  CHECK(text.find("----") != std::string::npos);

  const auto doc = nlohmann::json::parse(render_machine(t));
  CHECK(doc["headers"].size() == 2);
  CHECK(doc["rows"].size() == 2);
  CHECK(doc["rows"][0]["cells"][0]["value"] == 1.25);
  CHECK(doc["rows"][0]["cells"][1]["lower"] == 0.5);
  CHECK(doc["rows"][0]["cells"][1]["upper"] == 2.0);
}

TEST_CASE("cli compute: exact scopes, frozen value, exit codes") {
  const std::string pencil = example_files_pencil();
  const std::string x = example_files_vectors();

  const auto exact = run_cli("compute --pencil " + pencil +
                             " --lambda i0.25 --x " + x +
                             " --scopes JE --structure block");
  CHECK(exact.code == 0);
  CHECK(exact.out.find("JE/block") != std::string::npos);
  CHECK(exact.out.find("exact") != std::string::npos);
  CHECK(exact.out.find("0.68599") != std::string::npos);

  // the default scope list includes JE/sym, which is infinite here
  const auto full = run_cli("compute --pencil " + pencil +
                            " --lambda i0.25 --x " + x);
  CHECK(full.code == 2);
  CHECK(full.out.find("INFINITE") != std::string::npos);

  const auto machine = run_cli("compute --pencil " + pencil +
                               " --lambda i0.25 --x " + x +
                               " --output machine");
  CHECK(machine.code == 2);
  const auto doc = nlohmann::json::parse(machine.out);
  bool saw_je_block = false;
  for (const auto& item : doc) {
    if (item["scope"] == "JE/block") {
      saw_je_block = true;
      CHECK(item["kind"] == "exact");
      CHECK(rel_gap(item["value"].get<double>(), 4.0 / std::sqrt(34.0)) <=
            1e-12);
      CHECK(item.contains("minimizer"));
    }
    if (item["scope"] == "JE/sym") {
      CHECK(item["kind"] == "infinite");
      bool some_failed = false;
      for (const auto& c : item["finiteness"])
        if (!c["passed"].get<bool>()) some_failed = true;
      CHECK(some_failed);
    }
  }
  CHECK(saw_je_block);

  const auto bad = run_cli("compute --pencil " + pencil +
                           " --lambda 0.25 --x " + x);
  CHECK(bad.code == 1);
  CHECK(bad.err.find("purely imaginary") != std::string::npos);

  const auto missing = run_cli("compute --pencil /nonexistent.json "
                               "--lambda i1 --x " + x);
  CHECK(missing.code == 1);
  CHECK_FALSE(missing.err.empty());
}

TEST_CASE("cli generate feeds sweep and records metadata") {
  const std::string path = scratch_dir() + "/gen.json";
  const auto gen = run_cli("generate --n 4 --m 3 --seed 5 --out " + path);
  CHECK(gen.code == 0);
  PencilFileMetadata meta;
  const auto p = read_pencil_file(path, &meta);
  CHECK(p.n == 4);
  CHECK(p.m == 3);
  CHECK(meta.seed == 5);

  const auto real_gen = run_cli("generate --n 4 --m 2 --seed 6 --real --out " +
                                scratch_dir() + "/gen_real.json");
  CHECK(real_gen.code == 0);
  CHECK(read_pencil_file(scratch_dir() + "/gen_real.json").is_real);

  const auto sweep = run_cli("sweep --pencil " + path +
                             " --grid -1:1:5 --scopes JE,JRB --structure both");
  CHECK(sweep.code == 0);
  CHECK(sweep.out.rfind("t,", 0) == 0);  // grid parameter column comes first
  CHECK(sweep.out.find("etaB_JE") != std::string::npos);
  CHECK(sweep.out.find("etaB_JRB") != std::string::npos);
  CHECK(sweep.out.find("etaS_JRB") != std::string::npos);
  CHECK(sweep.out.find("# minimizer") != std::string::npos);

  const auto bad_grid = run_cli("sweep --pencil " + path + " --grid 1:2");
  CHECK(bad_grid.code == 1);
}

TEST_CASE("cli compare runs are byte-identical per seed") {
  const auto a = run_cli("compare --n 4 --m 3 --seed 9 --num-lambdas 3");
  const auto b = run_cli("compare --n 4 --m 3 --seed 9 --num-lambdas 3");
  CHECK(a.code == 0);
  CHECK_FALSE(a.out.empty());
  CHECK(a.out == b.out);

  const auto c = run_cli("compare --n 4 --m 3 --seed 10 --num-lambdas 3");
  CHECK(c.code == 0);
  CHECK(a.out != c.out);
}

TEST_CASE("cli verify passes honestly and fails under fault injection") {
  const auto ok = run_cli(
      "verify --n 4 --m 3 --seed 3 --instances 2 --restarts 4");
  CHECK(ok.code == 0);
  CHECK(ok.out.find("verification passed") != std::string::npos);
  CHECK(ok.out.find("FAIL") == std::string::npos);

  const auto bad = run_cli(
      "verify --n 4 --m 3 --seed 3 --instances 2 --skip-oracle "
      "--fault-scale 1.02");
  CHECK(bad.code == 1);
  CHECK(bad.out.find("FAIL") != std::string::npos);
}
