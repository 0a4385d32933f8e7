#ifndef TVSKIT_CLI_HPP
#define TVSKIT_CLI_HPP

// Command-line front end: argv -> Command -> Report -> text.

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "tvskit/convex_gauge.hpp"
#include "tvskit/error.hpp"
#include "tvskit/function_spaces.hpp"
#include "tvskit/hilbert_space.hpp"
#include "tvskit/io.hpp"
#include "tvskit/operator_algebra.hpp"
#include "tvskit/sequence_spaces.hpp"
#include "tvskit/series_algebras.hpp"

namespace tvskit::cli {

using io::Json;

// ---------------------------------------------------------------------------
// Verb table.

struct OptionSpec {
  const char* name;  // without the leading dashes
  const char* help;
  bool required = false;
  const char* fallback = nullptr;  // value used when the option is absent
  bool flag = false;
};

struct VerbSpec {
  const char* name;
  const char* help;
  std::vector<OptionSpec> options;
};

inline const std::vector<VerbSpec>& verbs() {
  static const std::vector<VerbSpec> table{
      {"norms", "l^p norms of a finitely supported sequence",
       {{"seq", "sequence JSON (file or inline)", true},
        {"p", "comma-separated exponents, 'inf' allowed", false, "1,2,inf"}}},
      {"holder", "Hoelder inequality check for a sequence pair",
       {{"seq", "sequence JSON", true}, {"weights", "sequence JSON paired against --seq", true},
        {"p", "exponent p >= 1 (q is its conjugate)", true}}},
      {"gauge", "Minkowski gauge of a built-in body",
       {{"body", "'lp-ball p m', 'cube m', 'simplex m' or 'shifted-ball c1,c2,.. r'", true},
        {"point", "point as a JSON array; reports the gauge"},
        {"check", "'shape' or 'seminorm' instead of a point"},
        {"trials", "samples for --check", false, "1000"},
        {"tol", "bisection tolerance", false, "1e-12"}}},
      {"hull", "convex hull membership with certificate",
       {{"points", "JSON array of points", true}, {"query", "query point as a JSON array", true}}},
      {"gelfand", "Gelfand trace ||a^n||^(1/n) for n = 1, 2, 4, ...",
       {{"matrix", "matrix JSON", true}, {"nmax", "largest power", false, "64"}}},
      {"neumann", "Neumann series inverse of 1 - a (or of x with --invert)",
       {{"matrix", "matrix JSON", true}, {"tol", "stopping tolerance", false, "1e-12"},
        {"invert", "invert the matrix itself", false, nullptr, true},
        {"max-terms", "series length cap", false, "65536"}}},
      {"wiener", "Wiener algebra element: norms, inversion, spectral radius",
       {{"laurent", "Laurent JSON", true}, {"invert", "invert in the algebra", false, nullptr, true},
        {"gelfand", "largest convolution power for a Gelfand trace"},
        {"tol", "inversion residual target", false, "1e-10"},
        {"max-bandwidth", "largest inverse bandwidth tried", false, "1024"},
        {"grid", "circle grid size for the supremum", false, "65536"}}},
      {"series", "power series radius and seminorms",
       {{"series", "power series JSON", true}, {"r", "radius for the coefficient seminorm"},
        {"s", "radius for the circle supremum"}, {"samples", "circle samples", false, "512"},
        {"cauchy", "radius for the two-family Cauchy test"}}},
      {"project", "orthogonal projection onto a spanned subspace",
       {{"subspace", "matrix JSON whose rows span the subspace", true},
        {"vector", "vector as a JSON array", true},
        {"mode", "'gram' or 'sequence'", false, "gram"},
        {"steps", "minimizing-sequence length", false, "100"}}},
      {"convolve", "Riemann-sum convolution of sampled functions",
       {{"phi", "function JSON", true}, {"f", "function JSON", true}}},
      {"seminorm", "N_j, M_j or polynomial-growth constant of a sampled function",
       {{"function", "function JSON", true}, {"j", "seminorm index", true},
        {"family", "'N', 'M' or 'growth'", false, "N"}}},
  };
  return table;
}

struct Command {
  std::string verb;
  std::map<std::string, std::string> options;
  std::string format = "tsv";
  std::uint64_t seed = 0;
  std::optional<std::string> help;  // set when --help was requested
};

// Parses argv (without the program name). Usage problems throw Error with
// kind invalid_input.
inline Command parse_command(const std::vector<std::string>& args) {
  CLI::App app{"tvs_kit: numerical checks for sequence, operator and function spaces", "tvs_kit"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Command cmd;
  app.add_option("--format", cmd.format, "output format")->check(CLI::IsMember({"tsv", "json"}));
  app.add_option("--seed", cmd.seed, "seed for sampled checks");

  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, std::map<std::string, bool>> flags;
  std::map<std::string, CLI::App*> subs;
  for (const VerbSpec& v : verbs()) {
    CLI::App* sub = app.add_subcommand(v.name, v.help);
    subs[v.name] = sub;
    for (const OptionSpec& o : v.options) {
      const std::string flag_name = std::string("--") + o.name;
      std::string help = o.help;
      if (o.fallback) help += " (default " + std::string(o.fallback) + ")";
      if (o.flag) {
        sub->add_flag(flag_name, flags[v.name][o.name], help);
      } else {
        CLI::Option* opt = sub->add_option(flag_name, values[v.name][o.name], help);
        if (o.required) opt->required();
      }
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    std::string text;
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) text = sub->help();
    cmd.help = text.empty() ? app.help() : text;
    return cmd;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    const std::string expected =
        "expected one of norms, holder, gauge, hull, gelfand, neumann, wiener, series, project, convolve, seminorm";
    std::optional<std::string> first;
    for (std::size_t i = 0; i < args.size() && !first; ++i) {
      if (args[i] == "--format" || args[i] == "--seed") ++i;
      else if (args[i].rfind("-", 0) != 0) first = args[i];
    }
    const bool known = first && std::any_of(verbs().begin(), verbs().end(),
                                            [&](const VerbSpec& v) { return *first == v.name; });
    if (!first) msg = "missing verb; " + expected;
    else if (!known) msg = "unknown verb '" + *first + "'; " + expected;
    throw Error(ErrorKind::invalid_input, "usage: " + msg);
  }

  for (const VerbSpec& v : verbs()) {
    CLI::App* sub = subs[v.name];
    if (!sub->parsed()) continue;
    cmd.verb = v.name;
    for (const OptionSpec& o : v.options) {
      const std::string flag_name = std::string("--") + o.name;
      if (o.flag) {
        cmd.options[o.name] = flags[v.name][o.name] ? "true" : "false";
      } else if (sub->count(flag_name) > 0) {
        cmd.options[o.name] = values[v.name][o.name];
      } else if (o.fallback) {
        cmd.options[o.name] = o.fallback;
      }
    }
  }
  return cmd;
}

// ---------------------------------------------------------------------------
// Reports.

using Cell = std::variant<double, std::int64_t, bool, std::string, Json>;

struct Report {
  enum class Kind { table, scalar, verdict };
  Kind kind = Kind::table;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::string verdict;
  std::vector<std::pair<std::string, Cell>> details;
  Json provenance = Json::object();

  static Report scalar(double v) {
    Report r;
    r.kind = Kind::scalar;
    r.columns = {"value"};
    r.rows = {{v}};
    return r;
  }
  static Report make_verdict(std::string v) {
    Report r;
    r.kind = Kind::verdict;
    r.verdict = std::move(v);
    return r;
  }
};

inline constexpr int kDefaultPrecision = 12;

inline std::string format_number(double x, int precision) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof buf, "%#.*g", precision, x);
  return buf;
}

inline Json number_json(double x, int precision) {
  if (!std::isfinite(x)) return format_number(x, precision);
  if (x == 0.0) return 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, x);
  return std::strtod(buf, nullptr);
}

namespace detail {

inline Json round_json(const Json& j, int precision) {
  if (j.is_number_float()) return number_json(j.get<double>(), precision);
  if (j.is_array()) {
    Json out = Json::array();
    for (const Json& x : j) out.push_back(round_json(x, precision));
    return out;
  }
  if (j.is_object()) {
    Json out = Json::object();
    for (const auto& [k, v] : j.items()) out[k] = round_json(v, precision);
    return out;
  }
  return j;
}

inline std::string cell_tsv(const Cell& c, int precision) {
  return std::visit(
      [precision](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return format_number(v, precision);
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::string>) return v;
        else return round_json(v, precision).dump();
      },
      c);
}

inline Json cell_json(const Cell& c, int precision) {
  return std::visit(
      [precision](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) return number_json(v, precision);
        else if constexpr (std::is_same_v<T, Json>) return round_json(v, precision);
        else return Json(v);
      },
      c);
}

inline const char* kind_name(Report::Kind k) {
  switch (k) {
    case Report::Kind::table: return "table";
    case Report::Kind::scalar: return "scalar";
    case Report::Kind::verdict: return "verdict";
  }
  return "table";
}

}  // namespace detail

// TSV: header plus rows (scalar reports are a one-cell table; verdicts are a
// "verdict" row), then one "key<TAB>value" line per detail. JSON: a single
// object with sorted keys.
inline std::string render(const Report& r, const std::string& format, int precision = kDefaultPrecision) {
  for (const auto& row : r.rows)
    if (row.size() != r.columns.size()) throw std::logic_error("report row length differs from header");
  if (format == "json") {
    Json out{{"kind", detail::kind_name(r.kind)}};
    if (r.kind == Report::Kind::verdict) {
      out["verdict"] = r.verdict;
    } else {
      out["columns"] = r.columns;
      Json rows = Json::array();
      for (const auto& row : r.rows) {
        Json jr = Json::array();
        for (const Cell& c : row) jr.push_back(detail::cell_json(c, precision));
        rows.push_back(jr);
      }
      out["rows"] = rows;
    }
    Json details = Json::object();
    for (const auto& [k, v] : r.details) details[k] = detail::cell_json(v, precision);
    out["details"] = details;
    out["provenance"] = detail::round_json(r.provenance, precision);
    return out.dump(2) + "\n";
  }
  std::ostringstream os;
  if (r.kind == Report::Kind::verdict) {
    os << "verdict\t" << r.verdict << "\n";
  } else {
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "\t" : "") << r.columns[i];
    os << "\n";
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "\t" : "") << detail::cell_tsv(row[i], precision);
      os << "\n";
    }
  }
  for (const auto& [k, v] : r.details) os << k << "\t" << detail::cell_tsv(v, precision) << "\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// Execution.

namespace detail {

class Args {
 public:
  explicit Args(const Command& c) : c_(c) {}

  bool has(const std::string& k) const { return c_.options.count(k) > 0; }
  bool flag(const std::string& k) const { return has(k) && c_.options.at(k) == "true"; }

  const std::string& str(const std::string& k) const {
    auto it = c_.options.find(k);
    if (it == c_.options.end()) throw Error(ErrorKind::invalid_input, "usage: missing --" + k);
    return it->second;
  }

  double number(const std::string& k) const { return parse_number(str(k), k); }

  std::int64_t integer(const std::string& k, std::int64_t lo) const {
    const std::string& s = str(k);
    char* end = nullptr;
    errno = 0;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || *end != '\0' || errno != 0) throw Error(ErrorKind::invalid_input, "usage: --" + k + " expects an integer");
    if (v < lo) throw Error(ErrorKind::invalid_input, "usage: --" + k + " must be at least " + std::to_string(lo));
    return v;
  }

  Json json(const std::string& k) const { return io::load(str(k)); }

  static double parse_number(const std::string& s, const std::string& k) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || *end != '\0' || std::isnan(v)) throw Error(ErrorKind::invalid_input, "usage: --" + k + " expects a number");
    return v;
  }

 private:
  const Command& c_;
};

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else if (ch != ' ' && ch != '[' && ch != ']') {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

inline BodyOracle parse_body(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> tok;
  for (std::string t; in >> t;) tok.push_back(t);
  auto fail = [&]() -> BodyOracle {
    throw Error(ErrorKind::invalid_input, "usage: unrecognized body '" + text + "'");
  };
  auto dim = [&](const std::string& s) {
    const double m = Args::parse_number(s, "body");
    if (m < 1 || m != std::floor(m) || m > 64) fail();
    return static_cast<std::size_t>(m);
  };
  if (tok.empty()) return fail();
  if (tok[0] == "lp-ball" && tok.size() == 3) return bodies::lp_ball(Exponent::of(Args::parse_number(tok[1], "body")), dim(tok[2]));
  if (tok[0] == "cube" && tok.size() == 2) return bodies::cube(dim(tok[1]));
  if (tok[0] == "simplex" && tok.size() == 2) return bodies::simplex(dim(tok[1]));
  if (tok[0] == "shifted-ball" && tok.size() == 3) {
    Point c;
    for (const std::string& s : split(tok[1], ',')) c.push_back(Args::parse_number(s, "body"));
    return bodies::shifted_ball(c, Args::parse_number(tok[2], "body"));
  }
  return fail();
}

inline Json point_json(const Point& p) { return Json(p); }

inline HVector vector_from_json(const Json& j, Field* field) {
  if (!j.is_array()) throw Error(ErrorKind::invalid_input, "vector: expected a JSON array");
  HVector v;
  *field = Field::real;
  for (const Json& x : j) {
    if (x.is_number()) {
      v.emplace_back(x.get<double>());
    } else if (x.is_array() && x.size() == 2 && x[0].is_number() && x[1].is_number()) {
      v.emplace_back(x[0].get<double>(), x[1].get<double>());
      *field = Field::complex;
    } else {
      throw Error(ErrorKind::invalid_input, "vector: entries are numbers or [re, im] pairs");
    }
  }
  return v;
}

inline Report run_norms(const Args& a) {
  const FinSeq x = io::sequence_from_json(a.json("seq"));
  Report r;
  r.columns = {"p", "norm"};
  for (const std::string& s : split(a.str("p"), ',')) {
    const Exponent p = Exponent::of(Args::parse_number(s, "p"));
    r.rows.push_back({p.is_infinite() ? std::numeric_limits<double>::infinity() : p.value(), lp_norm(x, p)});
  }
  return r;
}

inline Report run_holder(const Args& a) {
  const FinSeq x = io::sequence_from_json(a.json("seq"));
  const FinSeq w = io::sequence_from_json(a.json("weights"));
  const HolderReport h = holder_check(x, w, Exponent::of(a.number("p")));
  auto val = [](const Exponent& e) { return e.is_infinite() ? std::numeric_limits<double>::infinity() : e.value(); };
  Report r;
  r.columns = {"p", "q", "pairing_modulus", "norm_product", "holds"};
  r.rows.push_back({val(h.p), val(h.q), h.pairing_modulus, h.norm_product, h.holds()});
  return r;
}

inline Report run_gauge(const Args& a, std::uint64_t seed) {
  const BodyOracle body = parse_body(a.str("body"));
  const double tol = a.number("tol");
  if (a.has("point") == a.has("check")) throw Error(ErrorKind::invalid_input, "usage: gauge needs exactly one of --point, --check");
  if (a.has("point")) {
    const Point p = io::point_from_json(a.json("point"));
    Report r = Report::scalar(minkowski_gauge(body, p, tol));
    r.provenance = {{"body", body.name}, {"tol", tol}};
    return r;
  }
  const std::size_t trials = static_cast<std::size_t>(a.integer("trials", 1));
  if (a.str("check") == "shape") {
    const ShapeReport s = shape_classify(body, trials, seed);
    Report r;
    r.columns = {"property", "falsified", "witness"};
    auto add = [&](const char* name, const FlagResult& f) {
      r.rows.push_back({std::string(name), f.falsified, f.witness ? Cell(point_json(*f.witness)) : Cell(std::string("-"))});
    };
    add("symmetric", s.symmetric);
    add("starlike", s.starlike);
    if (s.circular) add("circular", *s.circular);
    r.details.emplace_back("tested", static_cast<std::int64_t>(s.tested));
    r.provenance = {{"body", body.name}, {"seed", seed}};
    return r;
  }
  if (a.str("check") == "seminorm") {
    const SeminormCheckReport s = gauge_seminorm_check(body, trials, tol, seed);
    // The verdict covers both axioms even for bodies not declared convex.
    const bool seminorm = s.passes(tol) && s.worst_triangle <= 2.0 * tol;
    Report r = Report::make_verdict(seminorm ? "seminorm" : "not-seminorm");
    r.details = {{"worst_homogeneity", s.worst_homogeneity},
                 {"worst_triangle", s.worst_triangle},
                 {"triangle_expected", s.triangle_expected},
                 {"witness_v", point_json(s.witness_v)},
                 {"witness_w", point_json(s.witness_w)},
                 {"pairs", static_cast<std::int64_t>(s.pairs)}};
    r.provenance = {{"body", body.name}, {"seed", seed}, {"tol", tol}};
    return r;
  }
  throw Error(ErrorKind::invalid_input, "usage: --check must be 'shape' or 'seminorm'");
}

inline Report run_hull(const Args& a) {
  const std::vector<Point> pts = io::points_from_json(a.json("points"));
  const Point q = io::point_from_json(a.json("query"));
  const HullDecision d = hull_membership(pts, q);
  Report r = Report::make_verdict(d.inside ? "inside" : "outside");
  r.details.emplace_back("exact", d.exact);
  if (d.certificate) {
    r.details.emplace_back("vertices", io::points_to_json(d.certificate->vertices));
    r.details.emplace_back("weights", Json(d.certificate->weights));
  }
  if (d.separator) {
    r.details.emplace_back("normal", point_json(d.separator->normal));
    r.details.emplace_back("offset", d.separator->offset);
  }
  return r;
}

inline Report run_gelfand(const Args& a) {
  const DenseOperator m = io::matrix_from_json(a.json("matrix"));
  const GelfandTrace t = gelfand_trace(m, static_cast<std::size_t>(a.integer("nmax", 1)));
  Report r;
  r.columns = {"n", "rho_n", "running_inf"};
  double running = std::numeric_limits<double>::infinity();
  for (const GelfandEntry& e : t.entries) {
    running = std::min(running, e.rho);
    r.rows.push_back({static_cast<std::int64_t>(e.n), e.rho, running});
  }
  return r;
}

inline Report run_neumann(const Args& a) {
  const DenseOperator m = io::matrix_from_json(a.json("matrix"));
  const double tol = a.number("tol");
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_input, "usage: --tol must be positive");
  if (a.flag("invert")) {
    const DenseOperator inv = neumann_invert(m, tol);
    Report r = Report::make_verdict("inverted");
    r.details = {{"residual", two_norm(m * inv - DenseOperator::identity(m.rows()))},
                 {"inverse", io::matrix_to_json(inv)}};
    r.provenance = {{"tol", tol}};
    return r;
  }
  const NeumannResult n = neumann_inverse(m, tol, static_cast<std::size_t>(a.integer("max-terms", 1)));
  Report r = Report::make_verdict(n.certificate ? "certified" : "uncertified");
  r.details = {{"terms", static_cast<std::int64_t>(n.terms)},
               {"residual", n.residual},
               {"spectral_estimate", n.spectral_estimate}};
  if (n.certificate) {
    r.details.emplace_back("norm_a", n.certificate->norm_a);
    r.details.emplace_back("inverse_norm", n.certificate->inverse_norm);
    r.details.emplace_back("inverse_norm_bound", n.certificate->inverse_norm_bound);
    r.details.emplace_back("tail_bound", n.certificate->tail_bound);
  }
  r.details.emplace_back("inverse", io::matrix_to_json(n.inverse));
  r.provenance = {{"tol", tol}};
  return r;
}

inline Report run_wiener(const Args& a) {
  const LaurentSeq g = io::laurent_from_json(a.json("laurent"));
  const std::size_t grid = static_cast<std::size_t>(a.integer("grid", 1));
  if (a.flag("invert") && a.has("gelfand")) throw Error(ErrorKind::invalid_input, "usage: --invert and --gelfand are exclusive");
  if (a.flag("invert")) {
    const double tol = a.number("tol");
    WienerInverseOptions opt;
    opt.max_bandwidth = static_cast<std::size_t>(a.integer("max-bandwidth", 1));
    try {
      const WienerInverse w = wiener_invert(g, tol, opt);
      Report r = Report::make_verdict("invertible");
      r.details = {{"inverse_norm", wiener_norm(w.inverse)},
                   {"residual", w.residual},
                   {"bandwidth", static_cast<std::int64_t>(w.bandwidth)},
                   {"grid", static_cast<std::int64_t>(w.grid)},
                   {"newton_steps", static_cast<std::int64_t>(w.newton_steps)},
                   {"truncated_mass", w.truncated_mass},
                   {"inverse", io::laurent_to_json(w.inverse)}};
      r.provenance = {{"tol", tol}};
      return r;
    } catch (const NotInvertibleOnCircle& e) {
      Report r = Report::make_verdict("not-invertible");
      r.details = {{"angle", e.angle()}, {"modulus", e.modulus()}};
      r.provenance = {{"tol", tol}};
      return r;
    }
  }
  if (a.has("gelfand")) {
    const WienerGelfand w = wiener_gelfand(g, static_cast<std::size_t>(a.integer("gelfand", 1)), grid);
    Report r;
    r.columns = {"n", "rho_n", "running_inf", "circle_max"};
    double running = std::numeric_limits<double>::infinity();
    for (const GelfandEntry& e : w.entries) {
      running = std::min(running, e.rho);
      r.rows.push_back({static_cast<std::int64_t>(e.n), e.rho, running, w.circle_max});
    }
    return r;
  }
  const CircleMax cm = circle_max(g, grid);
  Report r;
  r.columns = {"quantity", "value"};
  r.rows = {{std::string("wiener_norm"), wiener_norm(g)},
            {std::string("circle_max"), cm.value},
            {std::string("circle_max_angle"), cm.angle}};
  return r;
}

inline Report run_series(const Args& a) {
  const PowerSeries f = io::power_series_from_json(a.json("series"));
  const std::size_t samples = static_cast<std::size_t>(a.integer("samples", 1));
  if (a.has("cauchy")) {
    const CauchyFamilyVerdict v = cauchy_family_verdict(f, a.number("cauchy"), 8, 1e-6, samples);
    Report r = Report::make_verdict(v.agree() ? "agree" : "disagree");
    r.details = {{"coeff_cauchy", v.coeff_cauchy},
                 {"sup_cauchy", v.sup_cauchy},
                 {"truncations", Json(v.truncations)},
                 {"coeff_gaps", Json(v.coeff_gaps)},
                 {"sup_gaps", Json(v.sup_gaps)}};
    return r;
  }
  Report r;
  r.columns = {"quantity", "value"};
  r.rows = {{std::string("truncation"), static_cast<std::int64_t>(f.truncation())},
            {std::string("polynomial"), f.is_polynomial()},
            {std::string("radius_estimate"), radius_estimate(f)},
            {std::string("derivative_radius"), radius_estimate(derivative(f))}};
  if (a.has("r")) r.rows.push_back({std::string("coeff_seminorm"), coeff_seminorm(f, a.number("r"))});
  if (a.has("s")) {
    const SupSeminorm s = circle_sup_seminorm(f, a.number("s"), samples);
    r.rows.push_back({std::string("circle_sup"), s.value});
    r.rows.push_back({std::string("tail_bound"), s.tail_bound});
  }
  return r;
}

inline Report run_project(const Args& a) {
  const DenseOperator span = io::matrix_from_json(a.json("subspace"));
  Field field;
  const HVector v = vector_from_json(a.json("vector"), &field);
  std::vector<HVector> rows;
  for (std::size_t i = 0; i < span.rows(); ++i) rows.push_back(span.row(i));
  if (!rows.empty() && span.cols() != v.size()) throw Error(ErrorKind::invalid_input, "vector and subspace dimensions differ");
  const Subspace w(v.size(), rows);
  const std::string& mode = a.str("mode");
  if (mode != "gram" && mode != "sequence") throw Error(ErrorKind::invalid_input, "usage: --mode must be 'gram' or 'sequence'");
  const ProjectionResult p = project(v, w, mode == "gram" ? ProjectionMode::gram : ProjectionMode::minimizing_sequence,
                                     static_cast<std::size_t>(a.integer("steps", 1)));
  const bool complex = field == Field::complex || span.field() == Field::complex;
  Report r;
  r.columns = complex ? std::vector<std::string>{"i", "re", "im"} : std::vector<std::string>{"i", "value"};
  for (std::size_t i = 0; i < p.projection.size(); ++i) {
    if (complex) r.rows.push_back({static_cast<std::int64_t>(i), p.projection[i].real(), p.projection[i].imag()});
    else r.rows.push_back({static_cast<std::int64_t>(i), p.projection[i].real()});
  }
  r.details = {{"distance", p.distance}, {"orthogonality_defect", p.orthogonality_defect},
               {"subspace_dim", static_cast<std::int64_t>(w.dim())}};
  if (p.sequence) {
    r.details.emplace_back("cauchy_bound_holds", p.sequence->cauchy_bound_holds);
    r.details.emplace_back("worst_cauchy_slack", p.sequence->worst_cauchy_slack);
    r.details.emplace_back("gap_to_gram", p.sequence->gap_to_gram);
    r.details.emplace_back("steps_to_tolerance", p.sequence->steps_to_tolerance
                                                     ? Cell(static_cast<std::int64_t>(*p.sequence->steps_to_tolerance))
                                                     : Cell(std::string("not-reached")));
  }
  return r;
}

inline Report function_table(const SampledFunction& f) {
  Report r;
  const bool complex = f.field() == Field::complex;
  r.columns = complex ? std::vector<std::string>{"x", "re", "im"} : std::vector<std::string>{"x", "value"};
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (complex) r.rows.push_back({f.x(i), f[i].real(), f[i].imag()});
    else r.rows.push_back({f.x(i), f[i].real()});
  }
  return r;
}

inline Report run_convolve(const Args& a) {
  const SampledFunction phi = io::function_from_json(a.json("phi"));
  const SampledFunction f = io::function_from_json(a.json("f"));
  return function_table(convolve(phi, f));
}

inline Report run_seminorm(const Args& a) {
  const SampledFunction f = io::function_from_json(a.json("function"));
  const std::int64_t j = a.integer("j", 0);
  if (j > 1000) throw Error(ErrorKind::invalid_input, "usage: --j is too large");
  const std::string& fam = a.str("family");
  Report r;
  if (fam == "N") r = Report::scalar(seminorm(f, static_cast<int>(j), SeminormFamily::N));
  else if (fam == "M") r = Report::scalar(seminorm(f, static_cast<int>(j), SeminormFamily::M));
  else if (fam == "growth") r = Report::scalar(poly_growth_fit(f, static_cast<int>(j)));
  else throw Error(ErrorKind::invalid_input, "usage: --family must be 'N', 'M' or 'growth'");
  r.provenance = {{"family", fam}, {"j", j}};
  return r;
}

}  // namespace detail

inline Report execute(const Command& cmd) {
  const detail::Args a(cmd);
  Report r;
  if (cmd.verb == "norms") r = detail::run_norms(a);
  else if (cmd.verb == "holder") r = detail::run_holder(a);
  else if (cmd.verb == "gauge") r = detail::run_gauge(a, cmd.seed);
  else if (cmd.verb == "hull") r = detail::run_hull(a);
  else if (cmd.verb == "gelfand") r = detail::run_gelfand(a);
  else if (cmd.verb == "neumann") r = detail::run_neumann(a);
  else if (cmd.verb == "wiener") r = detail::run_wiener(a);
  else if (cmd.verb == "series") r = detail::run_series(a);
  else if (cmd.verb == "project") r = detail::run_project(a);
  else if (cmd.verb == "convolve") r = detail::run_convolve(a);
  else if (cmd.verb == "seminorm") r = detail::run_seminorm(a);
  else throw Error(ErrorKind::invalid_input, "usage: unknown verb '" + cmd.verb + "'");
  r.provenance["verb"] = cmd.verb;
  r.provenance["seed"] = cmd.seed;
  return r;
}

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitEngine = 3;

// Display precision: TVS_KIT_PRECISION when set (1..17), else 12.
inline int display_precision(const char* env) {
  if (!env) return kDefaultPrecision;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*env == '\0' || *end != '\0' || v < 1 || v > 17)
    throw Error(ErrorKind::invalid_input, "TVS_KIT_PRECISION must be an integer in 1..17");
  return static_cast<int>(v);
}

// Full pipeline with exit codes: 0 success, 2 usage or input, 3 engine failure.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
               const char* precision_env = std::getenv("TVS_KIT_PRECISION")) {
  std::string verb = "tvs_kit";
  try {
    const int precision = display_precision(precision_env);
    const Command cmd = parse_command(args);
    if (cmd.help) {
      out << *cmd.help;
      return kExitOk;
    }
    verb = cmd.verb;
    out << render(execute(cmd), cmd.format, precision);
    return kExitOk;
  } catch (const Error& e) {
    err << "error: " << verb << ": " << e.what() << "\n";
    return is_input_error(e.kind()) ? kExitUsage : kExitEngine;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << verb << ": invalid-input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << verb << ": " << e.what() << "\n";
    return kExitEngine;
  }
}

}  // namespace tvskit::cli

#endif  // TVSKIT_CLI_HPP
