#ifndef TVSKIT_IO_HPP
#define TVSKIT_IO_HPP

// JSON readers and writers for every value type the command-line tool
// consumes. Scalars are a number or a [re, im] pair.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "tvskit/convex_gauge.hpp"
#include "tvskit/dense_operator.hpp"
#include "tvskit/error.hpp"
#include "tvskit/function_spaces.hpp"
#include "tvskit/operator_algebra.hpp"
#include "tvskit/scalar.hpp"
#include "tvskit/sequence_spaces.hpp"
#include "tvskit/series_algebras.hpp"

namespace tvskit::io {

using Json = nlohmann::json;

namespace detail {

[[noreturn]] inline void fail(std::string_view what, std::string_view msg) {
  throw Error(ErrorKind::invalid_input, std::string(what) + ": " + std::string(msg));
}

inline const Json& field(const Json& j, const char* key, std::string_view what) {
  if (!j.is_object()) fail(what, "expected a JSON object");
  auto it = j.find(key);
  if (it == j.end()) fail(what, std::string("missing key \"") + key + "\"");
  return *it;
}

inline double number(const Json& j, std::string_view what) {
  if (!j.is_number()) fail(what, "expected a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) fail(what, "number is not finite");
  return x;
}

inline std::int64_t integer(const Json& j, std::string_view what) {
  if (!j.is_number_integer()) fail(what, "expected an integer");
  return j.get<std::int64_t>();
}

inline const Json& array(const Json& j, std::string_view what) {
  if (!j.is_array()) fail(what, "expected an array");
  return j;
}

inline Scalar scalar(const Json& j, std::string_view what) {
  if (j.is_number()) return number(j, what);
  if (j.is_array() && j.size() == 2) return Scalar(number(j[0], what), number(j[1], what));
  fail(what, "expected a number or a [re, im] pair");
}

// Any value written as a [re, im] pair makes the container complex.
inline std::vector<Scalar> scalars(const Json& j, std::string_view what, Field* field = nullptr) {
  std::vector<Scalar> out;
  if (field) *field = Field::real;
  for (const Json& x : array(j, what)) {
    out.push_back(scalar(x, what));
    if (field && x.is_array()) *field = Field::complex;
  }
  return out;
}

}  // namespace detail

inline Json scalar_to_json(Scalar z) { return Json::array({z.real(), z.imag()}); }

inline Json scalar_to_json(Scalar z, Field field) {
  return field == Field::real ? Json(z.real()) : scalar_to_json(z);
}

// ---------------------------------------------------------------------------
// Text and files.

// Parses JSON text; syntax errors report the 1-based line and column.
inline Json parse(std::string_view text, std::string_view source = "<input>") {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    if (auto pos = msg.find("syntax error"); pos != std::string::npos) msg = msg.substr(pos);
    throw Error(ErrorKind::invalid_input, std::string(source) + ":" + std::to_string(line) + ":" +
                                              std::to_string(column) + ": malformed JSON: " + msg);
  }
}

// Inline JSON when the argument starts with '{' or '[', a file path otherwise.
inline Json load(const std::string& arg) {
  const std::size_t first = arg.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (arg[first] == '{' || arg[first] == '[')) return parse(arg, "<inline>");
  std::ifstream in(arg, std::ios::binary);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot read " + arg);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), arg);
}

// ---------------------------------------------------------------------------
// Sequences and exponents.

inline FinSeq sequence_from_json(const Json& j) {
  constexpr std::string_view what = "sequence";
  const Json& kind = detail::field(j, "scalars", what);
  if (!kind.is_string() || (kind != "real" && kind != "complex")) detail::fail(what, "\"scalars\" must be \"real\" or \"complex\"");
  const Field field = kind == "real" ? Field::real : Field::complex;
  std::vector<FinSeq::Entry> entries;
  for (const Json& e : detail::array(detail::field(j, "entries", what), what)) {
    if (!e.is_array() || e.size() != 2) detail::fail(what, "entries are [index, value] pairs");
    const std::int64_t idx = detail::integer(e[0], what);
    if (idx < 1) detail::fail(what, "indices start at 1");
    if (!entries.empty() && static_cast<std::size_t>(idx) <= entries.back().index)
      detail::fail(what, "indices must be strictly increasing");
    entries.push_back({static_cast<std::size_t>(idx), detail::scalar(e[1], what)});
  }
  return FinSeq(field, std::move(entries));
}

inline Json sequence_to_json(const FinSeq& x) {
  Json entries = Json::array();
  for (const auto& e : x.entries()) entries.push_back(Json::array({e.index, scalar_to_json(e.value)}));
  return {{"scalars", x.field() == Field::real ? "real" : "complex"}, {"entries", entries}};
}

inline Exponent exponent_from_json(const Json& j) {
  if (j.is_string()) {
    if (j == "inf") return Exponent::infinity();
    detail::fail("exponent", "expected a number or \"inf\"");
  }
  return Exponent::finite(detail::number(j, "exponent"));
}

inline Json exponent_to_json(const Exponent& p) { return p.is_infinite() ? Json("inf") : Json(p.value()); }

// ---------------------------------------------------------------------------
// Matrices and kernels.

inline DenseOperator matrix_from_json(const Json& j) {
  constexpr std::string_view what = "matrix";
  const Json& rows = detail::array(detail::field(j, "rows", what), what);
  bool complex = false;
  if (auto it = j.find("complex"); it != j.end()) {
    if (!it->is_boolean()) detail::fail(what, "\"complex\" must be a boolean");
    complex = it->get<bool>();
  }
  const Json* imag = nullptr;
  if (auto it = j.find("imag_rows"); it != j.end()) {
    if (!complex) detail::fail(what, "\"imag_rows\" needs \"complex\": true");
    imag = &detail::array(*it, what);
    if (imag->size() != rows.size()) detail::fail(what, "\"imag_rows\" must match \"rows\" in shape");
  }
  std::vector<std::vector<Scalar>> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Json& r = detail::array(rows[i], what);
    std::vector<Scalar> row;
    for (std::size_t c = 0; c < r.size(); ++c) {
      double im = 0.0;
      if (imag) {
        const Json& ir = detail::array((*imag)[i], what);
        if (ir.size() != r.size()) detail::fail(what, "\"imag_rows\" must match \"rows\" in shape");
        im = detail::number(ir[c], what);
      }
      row.emplace_back(detail::number(r[c], what), im);
    }
    out.push_back(std::move(row));
  }
  return DenseOperator::from_rows(out, complex ? Field::complex : Field::real);
}

inline Json matrix_to_json(const DenseOperator& a) {
  Json rows = Json::array(), imag = Json::array();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Json r = Json::array(), ir = Json::array();
    for (std::size_t c = 0; c < a.cols(); ++c) {
      r.push_back(a(i, c).real());
      ir.push_back(a(i, c).imag());
    }
    rows.push_back(r);
    imag.push_back(ir);
  }
  Json out{{"rows", rows}, {"complex", a.field() == Field::complex}};
  if (a.field() == Field::complex) out["imag_rows"] = imag;
  return out;
}

inline KernelGrid kernel_from_json(const Json& j) {
  constexpr std::string_view what = "kernel";
  const std::int64_t n = detail::integer(detail::field(j, "n", what), what);
  if (n < 2) detail::fail(what, "\"n\" must be at least 2");
  Field field;
  std::vector<Scalar> values = detail::scalars(detail::field(j, "values", what), what, &field);
  if (values.size() != static_cast<std::size_t>(n * n)) detail::fail(what, "\"values\" must hold n*n entries");
  KernelGrid k = KernelGrid::uniform(static_cast<std::size_t>(n), [](double, double) { return Scalar{}; });
  k.field = field;
  k.values = std::move(values);
  return k;
}

inline Json kernel_to_json(const KernelGrid& k) {
  Json values = Json::array();
  for (Scalar z : k.values) values.push_back(scalar_to_json(z, k.field));
  return {{"n", k.size()}, {"values", values}};
}

// ---------------------------------------------------------------------------
// Series.

inline LaurentSeq laurent_from_json(const Json& j) {
  constexpr std::string_view what = "Laurent sequence";
  const std::int64_t offset = detail::integer(detail::field(j, "offset", what), what);
  return LaurentSeq(offset, detail::scalars(detail::field(j, "coeffs", what), what));
}

inline Json laurent_to_json(const LaurentSeq& g) {
  Json c = Json::array();
  for (Scalar z : g.coeffs()) c.push_back(scalar_to_json(z));
  return {{"offset", g.offset()}, {"coeffs", c}};
}

inline PowerSeries power_series_from_json(const Json& j) {
  constexpr std::string_view what = "power series";
  bool polynomial = false;
  if (auto it = j.find("polynomial"); j.is_object() && it != j.end()) {
    if (!it->is_boolean()) detail::fail(what, "\"polynomial\" must be a boolean");
    polynomial = it->get<bool>();
  }
  std::vector<Scalar> c = detail::scalars(detail::field(j, "coeffs", what), what);
  if (c.empty()) detail::fail(what, "\"coeffs\" must not be empty");
  return PowerSeries(std::move(c), polynomial);
}

inline Json power_series_to_json(const PowerSeries& f) {
  Json c = Json::array();
  for (Scalar z : f.coeffs()) c.push_back(scalar_to_json(z));
  return {{"coeffs", c}, {"polynomial", f.is_polynomial()}};
}

// ---------------------------------------------------------------------------
// Sampled functions, points, subspaces.

inline SampledFunction function_from_json(const Json& j) {
  constexpr std::string_view what = "function";
  const double x0 = detail::number(detail::field(j, "x0", what), what);
  const double h = detail::number(detail::field(j, "h", what), what);
  Field field;
  std::vector<Scalar> values = detail::scalars(detail::field(j, "values", what), what, &field);
  if (values.empty()) detail::fail(what, "\"values\" must not be empty");
  return SampledFunction::with_left_endpoint(x0, h, std::move(values), field);
}

inline Json function_to_json(const SampledFunction& f) {
  Json values = Json::array();
  for (Scalar z : f.values()) values.push_back(scalar_to_json(z, f.field()));
  return {{"x0", f.x0()}, {"h", f.h()}, {"values", values}};
}

inline Point point_from_json(const Json& j) {
  Point p;
  for (const Json& x : detail::array(j, "point")) p.push_back(detail::number(x, "point"));
  return p;
}

inline std::vector<Point> points_from_json(const Json& j) {
  std::vector<Point> out;
  for (const Json& p : detail::array(j, "points")) out.push_back(point_from_json(p));
  return out;
}

inline Json points_to_json(const std::vector<Point>& pts) {
  Json out = Json::array();
  for (const Point& p : pts) out.push_back(p);
  return out;
}

}  // namespace tvskit::io

#endif  // TVSKIT_IO_HPP
