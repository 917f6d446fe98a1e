#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "evenbe/pencil.hpp"

namespace evenbe {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PencilFileMetadata {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> description;
};

// Pencil file: JSON with schema_version = 1, integer n and m, and J, R, E, B,
// S as row-major nested arrays of [re, im] number pairs; optional metadata
// {seed, description}. Doubles serialize losslessly (shortest round-trip
// form); parse failures carry the offending field and position, e.g.
// "J[1][2]: expected [re, im] number pair".
std::string write_pencil_json(const StructuredPencil& p,
                              const PencilFileMetadata& meta = {});
void write_pencil_file(const std::string& path, const StructuredPencil& p,
                       const PencilFileMetadata& meta = {});
StructuredPencil read_pencil_json(const std::string& text,
                                  PencilFileMetadata* meta = nullptr);
StructuredPencil read_pencil_file(const std::string& path,
                                  PencilFileMetadata* meta = nullptr);

// Vector file: fields x1, x2, x3 with the same [re, im] pairing convention.
struct VectorTriple {
  Vector x1, x2, x3;
};
std::string write_vectors_json(const VectorTriple& v);
void write_vectors_file(const std::string& path, const VectorTriple& v);
VectorTriple read_vectors_json(const std::string& text);
VectorTriple read_vectors_file(const std::string& path);

// Lambda in "i<real>" form ("i0.25", "i-0.5"; a leading sign is accepted,
// "-i0.5" == "i-0.5"). Throws ParseError citing the iR\{0} requirement.
Complex parse_lambda(const std::string& text);
std::string format_lambda(Complex lambda, int precision);

// Significant-digit formatting for tables; format_full is the shortest
// representation that parses back to the same double.
std::string format_significant(double v, int precision);
std::string format_full(double v);

enum class CellKind { Value, Pair, Missing };

struct TableCell {
  CellKind kind = CellKind::Missing;
  double value = 0.0;               // Value
  double lower = 0.0, upper = 0.0;  // Pair
};

TableCell value_cell(double v);
TableCell pair_cell(double lower, double upper);

// Rows keyed by lambda; one header per value column (the lambda column is
// implicit). Pair cells render as [lower, upper] in text and expand into
// <header>_lower/<header>_upper columns in CSV.
struct ComparisonTable {
  std::string title;
  std::vector<std::string> headers;
  std::vector<Complex> lambdas;
  std::vector<std::vector<TableCell>> rows;
};

std::string render_text(const ComparisonTable& t, int precision);
std::string render_csv(const ComparisonTable& t, int precision);
std::string render_machine(const ComparisonTable& t);  // JSON, full precision

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace evenbe
