#ifndef TVSKIT_CONVEX_GAUGE_HPP
#define TVSKIT_CONVEX_GAUGE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tvskit/dense_operator.hpp"
#include "tvskit/error.hpp"
#include "tvskit/scalar.hpp"
#include "tvskit/sequence_spaces.hpp"

namespace tvskit {

using Point = std::vector<double>;

namespace detail {

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double euclidean(std::span<const double> a) {
  std::vector<double> m(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) m[i] = std::abs(a[i]);
  return rescaled_power_sum_norm(m, 2.0);
}

inline Point scaled(std::span<const double> v, double s) {
  Point out(v.begin(), v.end());
  for (double& x : out) x *= s;
  return out;
}

}  // namespace detail

// A star body in R^m given by membership. The radii bracket the body:
// the Euclidean ball of inner_radius lies inside it, and it lies inside
// the ball of outer_radius.
struct BodyOracle {
  std::size_t dimension = 0;
  std::function<bool(std::span<const double>)> contains;
  double outer_radius = 0.0;
  double inner_radius = 0.0;
  bool convex = false;
  std::string name;
};

namespace bodies {

// Radii are padded by one part in 10^12 so that boundary points of the
// bracketing balls test on the right side of the membership predicate.
inline constexpr double kRadiusPad = 1e-12;

inline BodyOracle lp_ball(const Exponent& p, std::size_t m) {
  if (m < 1) throw Error(ErrorKind::invalid_input, "body dimension must be at least 1");
  const double pv = p.value();
  const double md = static_cast<double>(m);
  const double factor = std::pow(md, 0.5 - p.reciprocal());  // ||x||_2 vs ||x||_p on R^m
  BodyOracle b;
  b.dimension = m;
  b.contains = [pv](std::span<const double> x) {
    std::vector<double> mod(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) mod[i] = std::abs(x[i]);
    return detail::rescaled_power_sum_norm(mod, pv) <= 1.0;
  };
  if (pv >= 2.0) {
    b.inner_radius = 1.0;
    b.outer_radius = factor;
  } else {
    b.inner_radius = factor;
    b.outer_radius = 1.0;
  }
  b.inner_radius *= 1.0 - kRadiusPad;
  b.outer_radius *= 1.0 + kRadiusPad;
  b.convex = pv >= 1.0;
  b.name = "lp-ball " + to_string(p) + " " + std::to_string(m);
  return b;
}

inline BodyOracle cube(std::size_t m) {
  BodyOracle b = lp_ball(Exponent::infinity(), m);
  b.name = "cube " + std::to_string(m);
  return b;
}

// { x : x_i >= -1 for all i, sum_i x_i <= 1 }, a simplex around the origin.
inline BodyOracle simplex(std::size_t m) {
  if (m < 1) throw Error(ErrorKind::invalid_input, "body dimension must be at least 1");
  const double md = static_cast<double>(m);
  BodyOracle b;
  b.dimension = m;
  b.contains = [](std::span<const double> x) {
    double sum = 0.0;
    for (double xi : x) {
      if (xi < -1.0) return false;
      sum += xi;
    }
    return sum <= 1.0;
  };
  b.inner_radius = (1.0 - kRadiusPad) / std::sqrt(md);
  b.outer_radius = (1.0 + kRadiusPad) * std::sqrt(md * md + md - 1.0);
  b.convex = true;
  b.name = "simplex " + std::to_string(m);
  return b;
}

// Closed Euclidean ball around center; inner_radius is 0 when the origin is
// not interior, which rules the body out for gauge computation.
inline BodyOracle shifted_ball(Point center, double r) {
  if (center.empty()) throw Error(ErrorKind::invalid_input, "body dimension must be at least 1");
  if (!(r > 0.0)) throw Error(ErrorKind::invalid_input, "ball radius must be positive");
  const double c = detail::euclidean(center);
  if (c > r) throw Error(ErrorKind::invalid_input, "shifted ball must contain the origin");
  BodyOracle b;
  b.dimension = center.size();
  b.name = "shifted-ball";
  b.contains = [center = std::move(center), r](std::span<const double> x) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - center[i]) * (x[i] - center[i]);
    return s <= r * r;
  };
  b.inner_radius = std::max(0.0, (r - c) * (1.0 - kRadiusPad));
  b.outer_radius = (r + c) * (1.0 + kRadiusPad);
  b.convex = true;
  return b;
}

// factor * body.
inline BodyOracle scaled(BodyOracle body, double factor) {
  if (!(factor > 0.0)) throw Error(ErrorKind::invalid_input, "scale factor must be positive");
  BodyOracle b = body;
  b.contains = [inner = std::move(body.contains), factor](std::span<const double> x) {
    return inner(detail::scaled(x, 1.0 / factor));
  };
  b.inner_radius *= factor;
  b.outer_radius *= factor;
  b.name = body.name + " scaled";
  return b;
}

}  // namespace bodies

// ---------------------------------------------------------------------------
// Gauge.

// mu(v) = inf { t > 0 : v / t in body } by bisection over
// [|v| / outer_radius, |v| / inner_radius], at most 64 halvings.
inline double minkowski_gauge(const BodyOracle& body, std::span<const double> v, double tol) {
  if (v.size() != body.dimension) throw Error(ErrorKind::invalid_input, "point dimension does not match body");
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_input, "tolerance must be positive");
  const double nv = detail::euclidean(v);
  if (nv == 0.0) return 0.0;
  if (!(body.inner_radius > 0.0)) {
    throw Error(ErrorKind::invalid_input, "body is not absorbing: inner radius must be positive");
  }
  double lo = nv / body.outer_radius;
  double hi = nv / body.inner_radius;
  if (!body.contains(detail::scaled(v, 1.0 / hi))) {
    throw Error(ErrorKind::oracle_inconsistency, "point of norm inner_radius reported outside the body");
  }
  if (body.contains(detail::scaled(v, 2.0 / lo))) {
    throw Error(ErrorKind::oracle_inconsistency, "point beyond outer_radius reported inside the body");
  }
  for (int it = 0; it < 64 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (body.contains(detail::scaled(v, 1.0 / mid))) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Shape classification by randomized falsification.

struct FlagResult {
  bool falsified = false;
  std::optional<Point> witness;  // the sampled point of largest norm that failed
};

struct ShapeReport {
  FlagResult symmetric;
  FlagResult starlike;
  std::optional<FlagResult> circular;  // only meaningful in R^2 ~ C
  std::size_t tested = 0;
};

namespace detail {

inline void record_failure(FlagResult& flag, const Point& p) {
  if (!flag.witness || euclidean(p) > euclidean(*flag.witness)) flag.witness = p;
  flag.falsified = true;
}

}  // namespace detail

inline ShapeReport shape_classify(const BodyOracle& body, std::size_t sample_count, std::uint64_t seed) {
  if (sample_count < 1) throw Error(ErrorKind::invalid_input, "sample_count must be at least 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> box(-body.outer_radius, body.outer_radius);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  ShapeReport report;
  if (body.dimension == 2) report.circular = FlagResult{};
  const std::size_t max_attempts = 1000 * sample_count;
  Point p(body.dimension);
  for (std::size_t attempt = 0; attempt < max_attempts && report.tested < sample_count; ++attempt) {
    for (double& x : p) x = box(rng);
    if (!body.contains(p)) continue;
    ++report.tested;
    if (!body.contains(detail::scaled(p, -1.0))) detail::record_failure(report.symmetric, p);
    if (!body.contains(detail::scaled(p, unit(rng)))) detail::record_failure(report.starlike, p);
    if (report.circular) {
      const double th = angle(rng);
      const Point q{std::cos(th) * p[0] - std::sin(th) * p[1], std::sin(th) * p[0] + std::cos(th) * p[1]};
      if (!body.contains(q)) detail::record_failure(*report.circular, p);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Seminorm axioms of the gauge, checked on signed coordinate pairs and
// random pairs normalized to gauge 1.

struct SeminormCheckReport {
  double worst_homogeneity = 0.0;  // max |mu(a v) - |a| mu(v)|
  double worst_triangle = 0.0;     // max (mu(v + w) - mu(v) - mu(w))_+
  Point witness_v;
  Point witness_w;
  bool triangle_expected = false;  // body declared convex
  std::size_t pairs = 0;

  bool passes(double tol) const {
    return worst_homogeneity <= 2.0 * tol && (!triangle_expected || worst_triangle <= 2.0 * tol);
  }
};

inline SeminormCheckReport gauge_seminorm_check(const BodyOracle& body, std::size_t trials, double tol,
                                                std::uint64_t seed) {
  const std::size_t m = body.dimension;
  std::vector<std::pair<Point, Point>> pairs;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i + 1; j < m; ++j)
      for (double sj : {1.0, -1.0}) {
        Point v(m, 0.0), w(m, 0.0);
        v[i] = 1.0;
        w[j] = sj;
        pairs.emplace_back(std::move(v), std::move(w));
      }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> alpha_dist(-3.0, 3.0);
  for (std::size_t t = 0; t < trials; ++t) {
    Point v(m), w(m);
    for (double& x : v) x = gauss(rng);
    for (double& x : w) x = gauss(rng);
    pairs.emplace_back(std::move(v), std::move(w));
  }

  SeminormCheckReport report;
  report.triangle_expected = body.convex;
  auto unit_gauge = [&](Point x) {
    const double g = minkowski_gauge(body, x, tol);
    return g > 0.0 ? detail::scaled(x, 1.0 / g) : x;
  };
  for (auto& [v0, w0] : pairs) {
    const Point v = unit_gauge(v0);
    const Point w = unit_gauge(w0);
    const double mv = minkowski_gauge(body, v, tol);
    const double mw = minkowski_gauge(body, w, tol);
    const double a = alpha_dist(rng);
    report.worst_homogeneity =
        std::max(report.worst_homogeneity, std::abs(minkowski_gauge(body, detail::scaled(v, a), tol) - std::abs(a) * mv));
    Point sum(m);
    for (std::size_t i = 0; i < m; ++i) sum[i] = v[i] + w[i];
    const double defect = minkowski_gauge(body, sum, tol) - mv - mw;
    if (defect > report.worst_triangle || report.witness_v.empty()) {
      report.worst_triangle = std::max(report.worst_triangle, defect);
      report.witness_v = v;
      report.witness_w = w;
    }
    ++report.pairs;
  }
  return report;
}

// ---------------------------------------------------------------------------
// Convex hull membership.

struct HullCertificate {
  std::vector<Point> vertices;  // at most m + 1
  std::vector<double> weights;  // nonnegative, sum 1
};

struct Hyperplane {
  Point normal;   // unit
  double offset;  // >= <normal, p> for every generator p
};

struct HullDecision {
  bool inside = false;
  std::optional<HullCertificate> certificate;
  std::optional<Hyperplane> separator;  // <normal, w> > offset
  bool exact = false;                   // decided by subset enumeration
};

namespace detail {

struct MinNormPoint {
  Point point;
  std::vector<std::size_t> support;
  std::vector<double> weights;
};

// Affine minimizer of |sum a_i q_i| over sum a_i = 1 for the corral q.
inline std::optional<std::vector<double>> affine_minimizer(const std::vector<Point>& q,
                                                           const std::vector<std::size_t>& s) {
  const std::size_t k = s.size();
  DenseOperator sys(k + 1, k + 1);
  DenseOperator rhs(k + 1, 1);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) sys(i, j) = dot(q[s[i]], q[s[j]]);
    sys(i, k) = 1.0;
    sys(k, i) = 1.0;
  }
  rhs(k, 0) = 1.0;
  auto sol = solve(sys, rhs, 1e-14 * (1.0 + sys.max_abs()));
  if (!sol) return std::nullopt;
  std::vector<double> a(k);
  for (std::size_t i = 0; i < k; ++i) a[i] = (*sol)(i, 0).real();
  return a;
}

// Wolfe's finite algorithm for the point of conv(q) nearest the origin. The
// final corral is affinely independent, hence has at most m + 1 members.
inline MinNormPoint wolfe_min_norm_point(const std::vector<Point>& q) {
  const std::size_t m = q.front().size();
  double scale = 0.0;
  for (const Point& p : q) scale = std::max(scale, dot(p, p));
  const double eps = 1e-12 * std::max(scale, 1e-300);

  std::size_t first = 0;
  for (std::size_t i = 1; i < q.size(); ++i)
    if (dot(q[i], q[i]) < dot(q[first], q[first])) first = i;
  std::vector<std::size_t> s{first};
  std::vector<double> lambda{1.0};
  Point x = q[first];
  auto combine = [&] {
    Point out(m, 0.0);
    for (std::size_t i = 0; i < s.size(); ++i)
      for (std::size_t d = 0; d < m; ++d) out[d] += lambda[i] * q[s[i]][d];
    return out;
  };

  for (int major = 0; major < 1000; ++major) {
    std::size_t j = 0;
    for (std::size_t i = 1; i < q.size(); ++i)
      if (dot(x, q[i]) < dot(x, q[j])) j = i;
    if (dot(x, x) - dot(x, q[j]) <= eps) break;
    if (std::find(s.begin(), s.end(), j) != s.end()) break;
    s.push_back(j);
    lambda.push_back(0.0);
    for (int minor = 0; minor < 1000; ++minor) {
      auto a = affine_minimizer(q, s);
      if (!a) break;
      if (std::all_of(a->begin(), a->end(), [](double v) { return v > 1e-15; })) {
        lambda = *a;
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if ((*a)[i] <= 1e-15 && lambda[i] - (*a)[i] > 0.0) theta = std::min(theta, lambda[i] / (lambda[i] - (*a)[i]));
      }
      for (std::size_t i = 0; i < s.size(); ++i) lambda[i] = theta * (*a)[i] + (1.0 - theta) * lambda[i];
      std::vector<std::size_t> s2;
      std::vector<double> l2;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (lambda[i] > 1e-15) {
          s2.push_back(s[i]);
          l2.push_back(lambda[i]);
        }
      }
      s = std::move(s2);
      lambda = std::move(l2);
    }
    double total = 0.0;
    for (double l : lambda) total += l;
    for (double& l : lambda) l /= total;
    x = combine();
  }
  return {x, s, lambda};
}

inline std::size_t binomial_sum(std::size_t n, std::size_t kmax, std::size_t cap) {
  std::size_t total = 0;
  double c = 1.0;
  for (std::size_t k = 1; k <= kmax && k <= n; ++k) {
    c = c * static_cast<double>(n - k + 1) / static_cast<double>(k);
    if (c > static_cast<double>(cap)) return cap + 1;
    total += static_cast<std::size_t>(c);
    if (total > cap) return cap + 1;
  }
  return total;
}

// Barycentric coordinates of w on the affinely independent subset, when w
// lies in its convex hull.
inline std::optional<std::vector<double>> barycentric(const std::vector<Point>& pts, const std::vector<std::size_t>& subset,
                                                      std::span<const double> w, double scale) {
  const std::size_t m = w.size();
  const std::size_t k = subset.size();
  DenseOperator aug(m + 1, k + 1);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < m; ++d) aug(d, c) = pts[subset[c]][d];
    aug(m, c) = 1.0;
  }
  for (std::size_t d = 0; d < m; ++d) aug(d, k) = w[d];
  aug(m, k) = 1.0;
  const Echelon e = row_echelon(aug, 1e-12 * scale);
  if (e.rank() != k || e.pivot_cols.back() != k - 1) return std::nullopt;  // dependent or inconsistent
  Vector rhs(k);
  for (std::size_t r = 0; r < k; ++r) rhs[r] = e.reduced(r, k);
  // The rows below the rank carry the consistency residual.
  for (std::size_t r = k; r < m + 1; ++r)
    if (std::abs(e.reduced(r, k)) > 1e-9 * scale) return std::nullopt;
  Vector lam = back_substitute(e, rhs, Vector(k));
  std::vector<double> out(k);
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    if (lam[c].real() < -1e-12) return std::nullopt;
    out[c] = std::max(0.0, lam[c].real());
    total += out[c];
  }
  for (double& l : out) l /= total;
  return out;
}

inline bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t k = idx.size();
  for (std::size_t i = k; i-- > 0;) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

inline bool reconstructs(const HullCertificate& c, std::span<const double> w) {
  for (std::size_t d = 0; d < w.size(); ++d) {
    double s = 0.0;
    for (std::size_t i = 0; i < c.vertices.size(); ++i) s += c.weights[i] * c.vertices[i][d];
    if (std::abs(s - w[d]) > 1e-9) return false;
  }
  return true;
}

}  // namespace detail

inline constexpr std::size_t kHullEnumerationLimit = 200000;

// Decides w in conv(points). Small problems (m <= 3) enumerate subsets of
// size <= m + 1 exactly, smallest first; larger ones use the min-norm-point
// route, whose inside/outside threshold is approximate at 1e-10 relative.
inline HullDecision hull_membership(const std::vector<Point>& points, std::span<const double> w) {
  if (points.empty()) throw Error(ErrorKind::invalid_input, "hull of an empty point set");
  const std::size_t m = w.size();
  if (m < 1) throw Error(ErrorKind::invalid_input, "dimension must be at least 1");
  for (const Point& p : points)
    if (p.size() != m) throw Error(ErrorKind::invalid_input, "dimension mismatch among hull points");

  double scale = 1.0;
  for (const Point& p : points)
    for (double x : p) scale = std::max(scale, std::abs(x));
  for (double x : w) scale = std::max(scale, std::abs(x));

  HullDecision decision;
  const std::size_t n = points.size();
  std::vector<Point> shifted(n, Point(m));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < m; ++d) shifted[i][d] = points[i][d] - w[d];

  if (m <= 3 && detail::binomial_sum(n, m + 1, kHullEnumerationLimit) <= kHullEnumerationLimit) {
    decision.exact = true;
    for (std::size_t k = 1; k <= std::min(m + 1, n); ++k) {
      std::vector<std::size_t> idx(k);
      for (std::size_t i = 0; i < k; ++i) idx[i] = i;
      do {
        if (auto lam = detail::barycentric(points, idx, w, scale)) {
          HullCertificate cert;
          for (std::size_t i = 0; i < k; ++i) {
            if ((*lam)[i] == 0.0) continue;
            cert.vertices.push_back(points[idx[i]]);
            cert.weights.push_back((*lam)[i]);
          }
          if (detail::reconstructs(cert, w)) {
            decision.inside = true;
            decision.certificate = std::move(cert);
            return decision;
          }
        }
      } while (detail::next_combination(idx, n));
    }
  }

  const detail::MinNormPoint mnp = detail::wolfe_min_norm_point(shifted);
  const double dist = detail::euclidean(mnp.point);
  if (!decision.exact && dist <= 1e-10 * scale) {
    HullCertificate cert;
    for (std::size_t i = 0; i < mnp.support.size(); ++i) {
      cert.vertices.push_back(points[mnp.support[i]]);
      cert.weights.push_back(mnp.weights[i]);
    }
    decision.inside = true;
    decision.certificate = std::move(cert);
    return decision;
  }
  if (dist == 0.0) {
    throw Error(ErrorKind::oracle_inconsistency, "enumeration and min-norm point disagree on hull membership");
  }
  Hyperplane h;
  h.normal = detail::scaled(mnp.point, -1.0 / dist);
  h.offset = -std::numeric_limits<double>::infinity();
  for (const Point& p : points) h.offset = std::max(h.offset, detail::dot(h.normal, p));
  decision.separator = std::move(h);
  return decision;
}

}  // namespace tvskit

#endif  // TVSKIT_CONVEX_GAUGE_HPP
