#ifndef TVSKIT_SERIES_ALGEBRAS_HPP
#define TVSKIT_SERIES_ALGEBRAS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tvskit/error.hpp"
#include "tvskit/operator_algebra.hpp"
#include "tvskit/scalar.hpp"

namespace tvskit {

// Truncated power series a_0 + a_1 z + ... + a_N z^N. `polynomial` records
// that every coefficient past N is known to vanish; otherwise the stored
// coefficients are a truncation of an infinite series.
class PowerSeries {
 public:
  PowerSeries() : coeffs_{Scalar{}}, polynomial_(true) {}

  explicit PowerSeries(std::vector<Scalar> coeffs, bool polynomial = false)
      : coeffs_(std::move(coeffs)), polynomial_(polynomial) {
    if (coeffs_.empty()) throw Error(ErrorKind::invalid_input, "power series needs at least one coefficient");
    for (Scalar a : coeffs_)
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw Error(ErrorKind::invalid_input, "power series coefficient is not finite");
  }

  static PowerSeries polynomial(std::vector<Scalar> coeffs) { return PowerSeries(std::move(coeffs), true); }

  std::size_t truncation() const { return coeffs_.size() - 1; }
  bool is_polynomial() const { return polynomial_; }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  Scalar operator[](std::size_t n) const { return n < coeffs_.size() ? coeffs_[n] : Scalar{}; }

  // The polynomial a_0 + ... + a_n z^n.
  PowerSeries partial(std::size_t n) const {
    std::vector<Scalar> c(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(std::min(n, truncation()) + 1));
    return polynomial(std::move(c));
  }

  friend bool operator==(const PowerSeries&, const PowerSeries&) = default;

 private:
  std::vector<Scalar> coeffs_;
  bool polynomial_;
};

// Finitely supported two-sided sequence: coeffs[k] is the coefficient of
// index offset + k.
class LaurentSeq {
 public:
  LaurentSeq() = default;
  LaurentSeq(std::int64_t offset, std::vector<Scalar> coeffs) : offset_(offset), coeffs_(std::move(coeffs)) {
    for (Scalar a : coeffs_)
      if (!std::isfinite(a.real()) || !std::isfinite(a.imag()))
        throw Error(ErrorKind::invalid_input, "Laurent coefficient is not finite");
    if (coeffs_.empty()) offset_ = 0;
  }

  static LaurentSeq delta(std::int64_t n, Scalar value = 1.0) { return LaurentSeq(n, {value}); }

  std::int64_t offset() const { return offset_; }
  std::int64_t highest() const { return offset_ + static_cast<std::int64_t>(coeffs_.size()) - 1; }
  const std::vector<Scalar>& coeffs() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  Scalar operator[](std::int64_t n) const {
    const std::int64_t k = n - offset_;
    return k >= 0 && k < static_cast<std::int64_t>(coeffs_.size()) ? coeffs_[static_cast<std::size_t>(k)] : Scalar{};
  }

  // max |n| over the stored range.
  std::int64_t bandwidth() const { return empty() ? 0 : std::max(std::abs(offset_), std::abs(highest())); }

  LaurentSeq truncated(std::int64_t k) const {
    if (empty()) return {};
    const std::int64_t lo = std::max(offset_, -k), hi = std::min(highest(), k);
    if (lo > hi) return {};
    std::vector<Scalar> c(coeffs_.begin() + (lo - offset_), coeffs_.begin() + (hi - offset_ + 1));
    return LaurentSeq(lo, std::move(c));
  }

  friend LaurentSeq operator+(const LaurentSeq& a, const LaurentSeq& b) { return combine(a, b, 1.0); }
  friend LaurentSeq operator-(const LaurentSeq& a, const LaurentSeq& b) { return combine(a, b, -1.0); }
  friend bool operator==(const LaurentSeq&, const LaurentSeq&) = default;

 private:
  static LaurentSeq combine(const LaurentSeq& a, const LaurentSeq& b, double sign) {
    if (a.empty() && b.empty()) return {};
    if (a.empty()) return combine(LaurentSeq(b.offset_, {}), b, sign);
    const std::int64_t lo = b.empty() ? a.offset_ : std::min(a.offset_, b.offset_);
    const std::int64_t hi = b.empty() ? a.highest() : std::max(a.highest(), b.highest());
    std::vector<Scalar> c(static_cast<std::size_t>(hi - lo + 1));
    for (std::int64_t n = lo; n <= hi; ++n) c[static_cast<std::size_t>(n - lo)] = a[n] + sign * b[n];
    return LaurentSeq(lo, std::move(c));
  }

  std::int64_t offset_ = 0;
  std::vector<Scalar> coeffs_;
};

// ---------------------------------------------------------------------------
// Power series.

// 1 / max |a_n|^(1/n) over the window n in [ceil((N+1)/2), N], n >= 1.
// Polynomials and all-zero windows give infinity.
inline double radius_estimate(const PowerSeries& f) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (f.is_polynomial()) return inf;
  const std::size_t n_top = f.truncation();
  const std::size_t start = std::max<std::size_t>(1, (n_top + 2) / 2);
  double worst = 0.0;
  for (std::size_t n = start; n <= n_top; ++n) {
    const double m = std::abs(f[n]);
    if (m == 0.0) continue;
    worst = std::max(worst, std::exp2(std::log2(m) / static_cast<double>(n)));
  }
  return worst == 0.0 ? inf : 1.0 / worst;
}

// max_n |a_n| r^n over the stored coefficients.
inline double coeff_seminorm(const PowerSeries& f, double r) {
  if (!(r > 0.0)) throw Error(ErrorKind::invalid_input, "seminorm radius must be positive");
  double best = 0.0;
  for (std::size_t n = 0; n <= f.truncation(); ++n) {
    const double m = std::abs(f[n]);
    if (m == 0.0) continue;
    best = std::max(best, std::exp(std::log(m) + static_cast<double>(n) * std::log(r)));
  }
  return best;
}

namespace detail {

inline Scalar horner(const std::vector<Scalar>& c, Scalar z) {
  Scalar s{};
  for (std::size_t k = c.size(); k-- > 0;) s = s * z + c[k];
  return s;
}

// Geometric bound on sum_{n > N} |a_n| s^n using |a_n| <= R^-n from the
// window estimate.
inline double geometric_tail(const PowerSeries& f, double s) {
  if (f.is_polynomial()) return 0.0;
  const double radius = radius_estimate(f);
  if (std::isinf(radius)) return 0.0;
  if (s >= radius)
    throw Error(ErrorKind::tail_unbounded,
                "|z| = " + std::to_string(s) + " is not inside the estimated radius " + std::to_string(radius));
  const double q = s / radius;
  return std::pow(q, static_cast<double>(f.truncation() + 1)) / (1.0 - q);
}

}  // namespace detail

struct SeriesValue {
  Scalar value;
  double tail_bound;
};

// Horner evaluation of the stored partial sum with a bound on the omitted tail.
inline SeriesValue eval(const PowerSeries& f, Scalar z) {
  const double tail = detail::geometric_tail(f, std::abs(z));
  return {detail::horner(f.coeffs(), z), tail};
}

struct SupSeminorm {
  double value;       // max of |partial sum| on the sampled circle
  double tail_bound;  // bound on the omitted tail on |z| = s
};

// Samples the circle |z| = s only: by the maximum principle the disk supremum
// of the partial sum is attained there.
inline SupSeminorm circle_sup_seminorm(const PowerSeries& f, double s, std::size_t samples) {
  if (!(s > 0.0)) throw Error(ErrorKind::invalid_input, "circle radius must be positive");
  if (samples == 0) throw Error(ErrorKind::invalid_input, "need at least one circle sample");
  const double tail = detail::geometric_tail(f, s);
  double best = 0.0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(samples);
    best = std::max(best, std::abs(detail::horner(f.coeffs(), std::polar(s, theta))));
  }
  return {best, tail};
}

namespace detail {

inline std::vector<Scalar> convolve_coeffs(const std::vector<Scalar>& a, const std::vector<Scalar>& b) {
  if (a.empty() || b.empty()) return {};
  std::vector<Scalar> c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == Scalar{}) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

}  // namespace detail

// Coefficients up to N_f + N_g; a truncation stays a truncation unless both
// factors are polynomials.
inline PowerSeries cauchy_product(const PowerSeries& f, const PowerSeries& g) {
  return PowerSeries(detail::convolve_coeffs(f.coeffs(), g.coeffs()), f.is_polynomial() && g.is_polynomial());
}

inline LaurentSeq cauchy_product(const LaurentSeq& f, const LaurentSeq& g) {
  if (f.empty() || g.empty()) return {};
  return LaurentSeq(f.offset() + g.offset(), detail::convolve_coeffs(f.coeffs(), g.coeffs()));
}

inline PowerSeries derivative(const PowerSeries& f) {
  if (f.truncation() == 0) return PowerSeries({Scalar{}}, f.is_polynomial());
  std::vector<Scalar> c(f.truncation());
  for (std::size_t n = 1; n <= f.truncation(); ++n) c[n - 1] = static_cast<double>(n) * f[n];
  return PowerSeries(std::move(c), f.is_polynomial());
}

// ---------------------------------------------------------------------------
// Two-family Cauchy test on truncations.

struct CauchyFamilyVerdict {
  double r;
  std::vector<std::size_t> truncations;  // N_0, 2 N_0, 4 N_0, ...
  std::vector<double> coeff_gaps;        // coeff_seminorm(f_{N_{k+1}} - f_{N_k}, r)
  std::vector<double> sup_gaps;          // circle_sup_seminorm of the same differences
  bool coeff_cauchy;
  bool sup_cauchy;
  bool agree() const { return coeff_cauchy == sup_cauchy; }
};

// A family calls the truncations Cauchy when its last gap has fallen to
// tol times the first (or absolute tol for small first gaps).
inline CauchyFamilyVerdict cauchy_family_verdict(const PowerSeries& f, double r, std::size_t n0 = 8,
                                                 double tol = 1e-6, std::size_t samples = 512) {
  if (n0 == 0 || 2 * n0 > f.truncation())
    throw Error(ErrorKind::invalid_input, "series is too short for a two-level Cauchy test");
  CauchyFamilyVerdict v{r, {}, {}, {}, false, false};
  for (std::size_t n = n0; n <= f.truncation(); n *= 2) v.truncations.push_back(n);
  for (std::size_t k = 0; k + 1 < v.truncations.size(); ++k) {
    std::vector<Scalar> d(v.truncations[k + 1] + 1);
    for (std::size_t n = v.truncations[k] + 1; n <= v.truncations[k + 1]; ++n) d[n] = f[n];
    const PowerSeries diff = PowerSeries::polynomial(std::move(d));
    v.coeff_gaps.push_back(coeff_seminorm(diff, r));
    v.sup_gaps.push_back(circle_sup_seminorm(diff, r, samples).value);
  }
  auto cauchy = [tol](const std::vector<double>& gaps) {
    return gaps.back() <= tol * std::max(1.0, gaps.front());
  };
  v.coeff_cauchy = cauchy(v.coeff_gaps);
  v.sup_cauchy = cauchy(v.sup_gaps);
  return v;
}

// ---------------------------------------------------------------------------
// Laurent sequences on the circle and the unit disk.

// sum_{n >= 0} a_n z^n + sum_{n < 0} a_n conj(z)^{|n|}.
inline Scalar eval_disk(const LaurentSeq& g, Scalar z) {
  if (std::abs(z) > 1.0) throw Error(ErrorKind::invalid_input, "disk extension needs |z| <= 1");
  if (g.empty()) return {};
  std::vector<Scalar> pos, neg;
  for (std::int64_t n = std::max<std::int64_t>(0, g.offset()); n <= g.highest(); ++n) {
    pos.resize(static_cast<std::size_t>(n) + 1);
    pos[static_cast<std::size_t>(n)] = g[n];
  }
  for (std::int64_t n = g.offset(); n < 0 && n <= g.highest(); ++n) {
    if (neg.size() < static_cast<std::size_t>(-n) + 1) neg.resize(static_cast<std::size_t>(-n) + 1);
    neg[static_cast<std::size_t>(-n)] = g[n];
  }
  return detail::horner(pos, z) + detail::horner(neg, std::conj(z));
}

inline std::vector<Scalar> eval_circle(const LaurentSeq& g, const std::vector<double>& thetas) {
  std::vector<Scalar> out;
  out.reserve(thetas.size());
  for (double t : thetas) out.push_back(eval_disk(g, std::polar(1.0, t)));
  return out;
}

inline std::vector<double> circle_grid(std::size_t m) {
  std::vector<double> t(m);
  for (std::size_t k = 0; k < m; ++k) t[k] = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
  return t;
}

struct CircleMax {
  double value;
  double angle;
};

inline CircleMax circle_max(const LaurentSeq& g, std::size_t m = std::size_t{1} << 16) {
  const std::vector<double> grid = circle_grid(m);
  const std::vector<Scalar> vals = eval_circle(g, grid);
  CircleMax best{0.0, 0.0};
  for (std::size_t k = 0; k < m; ++k)
    if (std::abs(vals[k]) > best.value) best = {std::abs(vals[k]), grid[k]};
  return best;
}

inline double wiener_norm(const LaurentSeq& g) {
  std::vector<double> m(g.coeffs().size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = std::abs(g.coeffs()[i]);
  return detail::rescaled_power_sum_norm(m, 1.0);
}

// ---------------------------------------------------------------------------
// Inversion in the Wiener algebra.

class NotInvertibleOnCircle : public Error {
 public:
  NotInvertibleOnCircle(double angle, double modulus)
      : Error(ErrorKind::not_invertible, "symbol nearly vanishes (|g| = " + std::to_string(modulus) +
                                             ") at angle " + std::to_string(angle)),
        angle_(angle),
        modulus_(modulus) {}
  double angle() const { return angle_; }
  double modulus() const { return modulus_; }

 private:
  double angle_;
  double modulus_;
};

struct WienerInverseOptions {
  std::optional<std::size_t> grid;       // M; defaults to 4 (2K + 1)
  std::optional<std::size_t> bandwidth;  // starting K; defaults to 8 times the input bandwidth
  std::size_t max_bandwidth = 1024;
  std::size_t max_newton = 64;
};

struct WienerInverse {
  LaurentSeq inverse;
  double residual;        // ||g * h - delta_0||_1
  std::size_t bandwidth;  // K of the returned iterate
  std::size_t grid;       // M used for the seed
  std::size_t newton_steps;
  double truncated_mass;  // l1 mass dropped by the last truncation
  double min_modulus;     // min |g| on the seed grid
};

// DFT seed of 1/g on an M-point grid, truncated to [-K, K], then Newton
// polishing h <- h + h * (delta_0 - g * h) with truncation after each step.
// K doubles (up to max_bandwidth) whenever the truncated iteration stalls.
inline WienerInverse wiener_invert(const LaurentSeq& g, double tol, const WienerInverseOptions& opt = {}) {
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_input, "tolerance must be positive");
  if (g.empty() || wiener_norm(g) == 0.0) throw NotInvertibleOnCircle(0.0, 0.0);

  std::size_t nonzero = 0;
  std::int64_t where = 0;
  for (std::int64_t n = g.offset(); n <= g.highest(); ++n)
    if (g[n] != Scalar{}) ++nonzero, where = n;
  if (nonzero == 1) {
    const double m = std::abs(g[where]);
    if (m <= 10.0 * tol) throw NotInvertibleOnCircle(0.0, m);
    return {LaurentSeq::delta(-where, 1.0 / g[where]), 0.0, static_cast<std::size_t>(std::abs(where)), 0, 0, 0.0, m};
  }

  const LaurentSeq unit = LaurentSeq::delta(0);
  std::size_t k = opt.bandwidth.value_or(8 * static_cast<std::size_t>(std::max<std::int64_t>(g.bandwidth(), 1)));
  k = std::max<std::size_t>(1, std::min(k, std::max(opt.max_bandwidth, std::size_t{1})));
  double best_residual = std::numeric_limits<double>::infinity();

  for (;;) {
    const std::size_t m = std::max(opt.grid.value_or(0), 4 * (2 * k + 1));
    const std::vector<double> grid = circle_grid(m);
    const std::vector<Scalar> vals = eval_circle(g, grid);
    double min_mod = std::numeric_limits<double>::infinity();
    double min_angle = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (std::abs(vals[j]) < min_mod) min_mod = std::abs(vals[j]), min_angle = grid[j];
    }
    if (min_mod <= 10.0 * tol) throw NotInvertibleOnCircle(min_angle, min_mod);

    std::vector<Scalar> roots(m);
    for (std::size_t j = 0; j < m; ++j) roots[j] = std::polar(1.0, -grid[j]);
    const std::int64_t kk = static_cast<std::int64_t>(k);
    std::vector<Scalar> seed(2 * k + 1);
    for (std::int64_t n = -kk; n <= kk; ++n) {
      Scalar s{};
      const std::size_t step = static_cast<std::size_t>(((n % static_cast<std::int64_t>(m)) + static_cast<std::int64_t>(m)) %
                                                        static_cast<std::int64_t>(m));
      std::size_t idx = 0;
      for (std::size_t j = 0; j < m; ++j) {
        s += roots[idx] / vals[j];
        idx = (idx + step) % m;
      }
      seed[static_cast<std::size_t>(n + kk)] = s / static_cast<double>(m);
    }
    LaurentSeq h(-kk, std::move(seed));

    double previous = std::numeric_limits<double>::infinity();
    double dropped = 0.0;
    for (std::size_t it = 0; it <= opt.max_newton; ++it) {
      const LaurentSeq e = unit - cauchy_product(g, h);
      const double r = wiener_norm(e);
      best_residual = std::min(best_residual, r);
      if (r <= tol) return {std::move(h), r, k, m, it, dropped, min_mod};
      if (it > 0 && r > 0.5 * previous) break;  // truncation floor reached
      previous = r;
      const LaurentSeq full = h + cauchy_product(h, e);
      const LaurentSeq cut = full.truncated(kk);
      dropped = std::max(0.0, wiener_norm(full) - wiener_norm(cut));
      h = cut;
    }
    if (k >= opt.max_bandwidth)
      throw Error(ErrorKind::bandwidth_insufficient,
                  "bandwidth " + std::to_string(k) + " reached best residual " + std::to_string(best_residual));
    k = std::min(2 * k, opt.max_bandwidth);
  }
}

// ---------------------------------------------------------------------------
// Spectral radius in the Wiener algebra.

struct WienerGelfand {
  std::vector<GelfandEntry> entries;  // n = 1, 2, 4, ... with ||g^{*n}||_1^{1/n}
  double running_inf = std::numeric_limits<double>::infinity();
  double circle_max;                  // max |g| on the 2^16-point grid
  double circle_max_angle;
};

// Convolution powers by repeated squaring, each rescaled to unit l1 norm with
// the logarithm of the scale carried separately.
inline WienerGelfand wiener_gelfand(const LaurentSeq& g, std::size_t n_max, std::size_t grid = std::size_t{1} << 16) {
  if (n_max < 1) throw Error(ErrorKind::invalid_input, "n_max must be at least 1");
  WienerGelfand out;
  const CircleMax cm = circle_max(g, grid);
  out.circle_max = cm.value;
  out.circle_max_angle = cm.angle;
  const double base = wiener_norm(g);
  auto record = [&](std::size_t n, double rho) {
    out.entries.push_back({n, rho});
    out.running_inf = std::min(out.running_inf, rho);
  };
  if (base == 0.0) {
    for (std::size_t n = 1; n <= n_max; n *= 2) record(n, 0.0);
    return out;
  }
  LaurentSeq p(g.offset(), g.coeffs());
  double log_scale = 0.0;  // log of the factor removed from p
  {
    std::vector<Scalar> c = p.coeffs();
    for (Scalar& z : c) z /= base;
    p = LaurentSeq(p.offset(), std::move(c));
    log_scale = std::log(base);
  }
  for (std::size_t n = 1; n <= n_max; n *= 2) {
    record(n, n == 1 ? base : std::exp(log_scale / static_cast<double>(n)));
    if (n > n_max / 2) break;
    p = cauchy_product(p, p);
    log_scale *= 2.0;
    const double s = wiener_norm(p);
    if (s == 0.0) {
      for (std::size_t m = 2 * n; m <= n_max; m *= 2) record(m, 0.0);
      break;
    }
    std::vector<Scalar> c = p.coeffs();
    for (Scalar& z : c) z /= s;
    p = LaurentSeq(p.offset(), std::move(c));
    log_scale += std::log(s);
  }
  return out;
}

}  // namespace tvskit

#endif  // TVSKIT_SERIES_ALGEBRAS_HPP
