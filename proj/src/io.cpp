#include "evenbe/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace evenbe {

namespace {

using nlohmann::json;

json complex_to_json(const Complex& z) {
  return json::array({z.real(), z.imag()});
}

json matrix_to_json(const Matrix& a) {
  json rows = json::array();
  for (Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < a.cols(); ++j) row.push_back(complex_to_json(a(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

Complex parse_complex_entry(const json& e, const std::string& where) {
  if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
    throw ParseError(where + ": expected [re, im] number pair");
  return {e[0].get<double>(), e[1].get<double>()};
}

Matrix parse_matrix(const json& root, const std::string& name, Index rows,
                    Index cols) {
  if (!root.contains(name))
    throw ParseError(name + ": missing matrix field");
  const json& j = root.at(name);
  if (!j.is_array() || static_cast<Index>(j.size()) != rows)
    throw ParseError(name + ": expected " + std::to_string(rows) + " rows");
  Matrix a(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Index>(row.size()) != cols)
      throw ParseError(name + "[" + std::to_string(i) + "]: expected " +
                       std::to_string(cols) + " entries");
    for (Index k = 0; k < cols; ++k)
      a(i, k) = parse_complex_entry(
          row[static_cast<std::size_t>(k)],
          name + "[" + std::to_string(i) + "][" + std::to_string(k) + "]");
  }
  return a;
}

Vector parse_vector(const json& root, const std::string& name) {
  if (!root.contains(name))
    throw ParseError(name + ": missing vector field");
  const json& j = root.at(name);
  if (!j.is_array()) throw ParseError(name + ": expected an array");
  Vector v(static_cast<Index>(j.size()));
  for (Index i = 0; i < v.size(); ++i)
    v(i) = parse_complex_entry(j[static_cast<std::size_t>(i)],
                               name + "[" + std::to_string(i) + "]");
  return v;
}

Index parse_dim(const json& root, const std::string& name) {
  if (!root.contains(name) || !root.at(name).is_number_integer())
    throw ParseError(name + ": expected a positive integer");
  const auto v = root.at(name).get<std::int64_t>();
  if (v < 1) throw ParseError(name + ": expected a positive integer");
  return static_cast<Index>(v);
}

json parse_root(const std::string& text) {
  json root = json::parse(text, nullptr, false);
  if (root.is_discarded()) throw ParseError("input is not valid JSON");
  if (!root.is_object()) throw ParseError("top level: expected a JSON object");
  return root;
}

}  // namespace

std::string write_pencil_json(const StructuredPencil& p,
                              const PencilFileMetadata& meta) {
  json root;
  root["schema_version"] = 1;
  root["n"] = p.n;
  root["m"] = p.m;
  root["J"] = matrix_to_json(p.J);
  root["R"] = matrix_to_json(p.R);
  root["E"] = matrix_to_json(p.E);
  root["B"] = matrix_to_json(p.B);
  root["S"] = matrix_to_json(p.S);
  if (meta.seed || meta.description) {
    json md = json::object();
    if (meta.seed) md["seed"] = *meta.seed;
    if (meta.description) md["description"] = *meta.description;
    root["metadata"] = std::move(md);
  }
  return root.dump(2) + "\n";
}

void write_pencil_file(const std::string& path, const StructuredPencil& p,
                       const PencilFileMetadata& meta) {
  write_text_file(path, write_pencil_json(p, meta));
}

StructuredPencil read_pencil_json(const std::string& text,
                                  PencilFileMetadata* meta) {
  const json root = parse_root(text);
  if (!root.contains("schema_version") ||
      !root.at("schema_version").is_number_integer() ||
      root.at("schema_version").get<int>() != 1)
    throw ParseError("schema_version: expected the integer 1");
  const Index n = parse_dim(root, "n");
  const Index m = parse_dim(root, "m");
  Matrix j = parse_matrix(root, "J", n, n);
  Matrix r = parse_matrix(root, "R", n, n);
  Matrix e = parse_matrix(root, "E", n, n);
  Matrix b = parse_matrix(root, "B", n, m);
  Matrix s = parse_matrix(root, "S", m, m);
  if (meta) {
    *meta = {};
    if (root.contains("metadata") && root.at("metadata").is_object()) {
      const json& md = root.at("metadata");
      if (md.contains("seed") && md.at("seed").is_number_unsigned())
        meta->seed = md.at("seed").get<std::uint64_t>();
      if (md.contains("description") && md.at("description").is_string())
        meta->description = md.at("description").get<std::string>();
    }
  }
  return make_pencil(std::move(j), std::move(r), std::move(e), std::move(b),
                     std::move(s));
}

StructuredPencil read_pencil_file(const std::string& path,
                                  PencilFileMetadata* meta) {
  return read_pencil_json(read_text_file(path), meta);
}

std::string write_vectors_json(const VectorTriple& v) {
  json root;
  root["x1"] = vector_to_json(v.x1);
  root["x2"] = vector_to_json(v.x2);
  root["x3"] = vector_to_json(v.x3);
  return root.dump(2) + "\n";
}

void write_vectors_file(const std::string& path, const VectorTriple& v) {
  write_text_file(path, write_vectors_json(v));
}

VectorTriple read_vectors_json(const std::string& text) {
  const json root = parse_root(text);
  VectorTriple v;
  v.x1 = parse_vector(root, "x1");
  v.x2 = parse_vector(root, "x2");
  v.x3 = parse_vector(root, "x3");
  return v;
}

VectorTriple read_vectors_file(const std::string& path) {
  return read_vectors_json(read_text_file(path));
}

Complex parse_lambda(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  double sign = 1.0;
  std::size_t pos = 0;
  if (pos < t.size() && (t[pos] == '+' || t[pos] == '-')) {
    if (t[pos] == '-') sign = -1.0;
    ++pos;
  }
  if (pos >= t.size() || (t[pos] != 'i' && t[pos] != 'I'))
    throw ParseError("lambda must be purely imaginary and nonzero, written "
                     "i<real> (e.g. i0.25); got \"" + text + "\"");
  ++pos;
  const std::string rest = t.substr(pos);
  double val = 0.0;
  const char* begin = rest.data();
  const char* end = rest.data() + rest.size();
  const auto res = std::from_chars(begin, end, val);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ParseError("lambda must be purely imaginary and nonzero, written "
                     "i<real> (e.g. i0.25); got \"" + text + "\"");
  val *= sign;
  if (val == 0.0)
    throw ParseError("lambda must be nonzero (it ranges over iR \\ {0})");
  return {0.0, val};
}

std::string format_lambda(Complex lambda, int precision) {
  return format_significant(lambda.imag(), precision) + "i";
}

std::string format_significant(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

std::string format_full(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

TableCell value_cell(double v) {
  TableCell c;
  c.kind = CellKind::Value;
  c.value = v;
  return c;
}

TableCell pair_cell(double lower, double upper) {
  TableCell c;
  c.kind = CellKind::Pair;
  c.lower = lower;
  c.upper = upper;
  return c;
}

namespace {

std::string cell_text(const TableCell& c, int precision) {
  switch (c.kind) {
    case CellKind::Value:
      return format_significant(c.value, precision);
    case CellKind::Pair:
      return "[" + format_significant(c.lower, precision) + ", " +
             format_significant(c.upper, precision) + "]";
    case CellKind::Missing:
      return "-";
  }
  return "-";
}

}  // namespace

std::string render_text(const ComparisonTable& t, int precision) {
  std::vector<std::vector<std::string>> grid;
  std::vector<std::string> head;
  head.push_back("lambda");
  for (const auto& h : t.headers) head.push_back(h);
  grid.push_back(head);
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    std::vector<std::string> row;
    row.push_back(format_lambda(t.lambdas[i], precision));
    for (const auto& c : t.rows[i]) row.push_back(cell_text(c, precision));
    grid.push_back(std::move(row));
  }
  std::vector<std::size_t> width(grid[0].size(), 0);
  for (const auto& row : grid)
    for (std::size_t j = 0; j < row.size(); ++j)
      width[j] = std::max(width[j], row[j].size());
  std::ostringstream out;
  if (!t.title.empty()) out << t.title << "\n";
  for (std::size_t r = 0; r < grid.size(); ++r) {
    for (std::size_t j = 0; j < grid[r].size(); ++j) {
      if (j) out << "  ";
      out << grid[r][j]
          << std::string(width[j] - grid[r][j].size(), ' ');
    }
    out << "\n";
    if (r == 0) {
      std::size_t total = 0;
      for (std::size_t j = 0; j < width.size(); ++j)
        total += width[j] + (j ? 2 : 0);
      out << std::string(total, '-') << "\n";
    }
  }
  return out.str();
}

std::string render_csv(const ComparisonTable& t, int precision) {
  std::ostringstream out;
  out << "lambda_imag";
  for (std::size_t j = 0; j < t.headers.size(); ++j) {
    bool has_pair = false;
    for (const auto& row : t.rows)
      if (j < row.size() && row[j].kind == CellKind::Pair) has_pair = true;
    if (has_pair)
      out << "," << t.headers[j] << "_lower," << t.headers[j] << "_upper";
    else
      out << "," << t.headers[j];
  }
  out << "\n";
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    out << format_significant(t.lambdas[i].imag(), precision);
    for (std::size_t j = 0; j < t.rows[i].size(); ++j) {
      bool has_pair = false;
      for (const auto& row : t.rows)
        if (j < row.size() && row[j].kind == CellKind::Pair) has_pair = true;
      const TableCell& c = t.rows[i][j];
      if (has_pair) {
        if (c.kind == CellKind::Pair)
          out << "," << format_significant(c.lower, precision) << ","
              << format_significant(c.upper, precision);
        else if (c.kind == CellKind::Value)
          out << "," << format_significant(c.value, precision) << ","
              << format_significant(c.value, precision);
        else
          out << ",,";
      } else {
        out << ","
            << (c.kind == CellKind::Value
                    ? format_significant(c.value, precision)
                    : std::string());
      }
    }
    out << "\n";
  }
  return out.str();
}

std::string render_machine(const ComparisonTable& t) {
  json root;
  root["title"] = t.title;
  root["headers"] = t.headers;
  json rows = json::array();
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    json row;
    row["lambda"] = complex_to_json(t.lambdas[i]);
    json cells = json::array();
    for (const auto& c : t.rows[i]) {
      json cell;
      switch (c.kind) {
        case CellKind::Value:
          cell["value"] = c.value;
          break;
        case CellKind::Pair:
          cell["lower"] = c.lower;
          cell["upper"] = c.upper;
          break;
        case CellKind::Missing:
          cell = nullptr;
          break;
      }
      cells.push_back(std::move(cell));
    }
    row["cells"] = std::move(cells);
    rows.push_back(std::move(row));
  }
  root["rows"] = std::move(rows);
  return root.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open file for writing: " + path);
  out << text;
}

}  // namespace evenbe
