#ifndef TVSKIT_FUNCTION_SPACES_HPP
#define TVSKIT_FUNCTION_SPACES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tvskit/error.hpp"
#include "tvskit/scalar.hpp"

namespace tvskit {

namespace detail {

// Integer k with x = k h, or an alignment error.
inline std::int64_t grid_steps(double x, double h, const char* what) {
  const double k = x / h;
  const double r = std::round(k);
  if (std::abs(k - r) > 1e-9 * std::max(1.0, std::abs(k)))
    throw Error(ErrorKind::alignment, std::string(what) + " " + std::to_string(x) + " is not a multiple of h");
  return static_cast<std::int64_t>(r);
}

}  // namespace detail

// Samples on the symmetric grid x_i = (i - (len - 1) / 2) h, i = 0..len-1.
// The function is identically zero off the grid.
class SampledFunction {
 public:
  SampledFunction(double h, std::vector<Scalar> values, Field field = Field::real)
      : h_(h), values_(std::move(values)), field_(field) {
    if (!(h_ > 0.0) || !std::isfinite(h_)) throw Error(ErrorKind::invalid_input, "step h must be positive");
    if (values_.empty()) throw Error(ErrorKind::invalid_input, "sampled function needs at least one value");
    for (Scalar v : values_) {
      check_field(field_, v);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(ErrorKind::invalid_input, "sample value is not finite");
    }
  }

  // Validates a stored left endpoint against the symmetric-grid rule.
  static SampledFunction with_left_endpoint(double x0, double h, std::vector<Scalar> values, Field field) {
    SampledFunction f(h, std::move(values), field);
    if (std::abs(x0 - f.x0()) > 1e-9 * std::max(h, std::abs(f.x0())))
      throw Error(ErrorKind::invalid_input, "grid must be symmetric: expected x0 = " + std::to_string(f.x0()));
    return f;
  }

  // Samples fn on [-half_width, half_width]; half_width must be a multiple of h.
  static SampledFunction sample(double h, double half_width, const std::function<Scalar(double)>& fn,
                                Field field = Field::real) {
    if (!(h > 0.0)) throw Error(ErrorKind::invalid_input, "step h must be positive");
    const std::int64_t k = detail::grid_steps(half_width, h, "half width");
    if (k < 0) throw Error(ErrorKind::invalid_input, "half width must be nonnegative");
    std::vector<Scalar> v(static_cast<std::size_t>(2 * k + 1));
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(node(i, v.size(), h));
    return SampledFunction(h, std::move(v), field);
  }

  static SampledFunction zero(double h, std::size_t len) { return SampledFunction(h, std::vector<Scalar>(len)); }

  double h() const { return h_; }
  std::size_t size() const { return values_.size(); }
  Field field() const { return field_; }
  const std::vector<Scalar>& values() const { return values_; }
  double x0() const { return node(0, values_.size(), h_); }
  double half_width() const { return static_cast<double>(values_.size() - 1) * h_ / 2.0; }
  double x(std::size_t i) const { return node(i, values_.size(), h_); }
  Scalar operator[](std::size_t i) const { return values_[i]; }

  // Value at a grid-aligned point; zero off the grid.
  Scalar at(double x) const {
    const std::int64_t twice = detail::grid_steps(2.0 * x, h_, "point");
    const std::int64_t shifted = twice + static_cast<std::int64_t>(values_.size()) - 1;
    if (shifted % 2 != 0) throw Error(ErrorKind::alignment, "point " + std::to_string(x) + " is not a grid node");
    const std::int64_t i = shifted / 2;
    return i >= 0 && i < static_cast<std::int64_t>(values_.size()) ? values_[static_cast<std::size_t>(i)] : Scalar{};
  }

  double sup_norm() const {
    double m = 0.0;
    for (Scalar v : values_) m = std::max(m, std::abs(v));
    return m;
  }

  // Same grid length and step, values combined pointwise.
  friend SampledFunction operator*(const SampledFunction& f, const SampledFunction& g) {
    return zip(f, g, [](Scalar a, Scalar b) { return a * b; });
  }
  friend SampledFunction operator+(const SampledFunction& f, const SampledFunction& g) {
    return zip(f, g, [](Scalar a, Scalar b) { return a + b; });
  }
  friend SampledFunction operator-(const SampledFunction& f, const SampledFunction& g) {
    return zip(f, g, [](Scalar a, Scalar b) { return a - b; });
  }
  friend SampledFunction operator*(Scalar c, SampledFunction f) {
    if (c.imag() != 0.0) f.field_ = Field::complex;
    for (Scalar& v : f.values_) v *= c;
    return f;
  }

  friend bool operator==(const SampledFunction&, const SampledFunction&) = default;

 private:
  static double node(std::size_t i, std::size_t len, double h) {
    // (2i - (len - 1)) h / 2 is exactly antisymmetric in i.
    return (2.0 * static_cast<double>(i) - static_cast<double>(len - 1)) * h / 2.0;
  }

  template <class Op>
  static SampledFunction zip(const SampledFunction& f, const SampledFunction& g, Op op) {
    if (f.h_ != g.h_ || f.size() != g.size())
      throw Error(ErrorKind::grid_incompatible, "pointwise operation needs identical grids");
    std::vector<Scalar> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = op(f.values_[i], g.values_[i]);
    return SampledFunction(f.h_, std::move(v), join(f.field_, g.field_));
  }

  double h_;
  std::vector<Scalar> values_;
  Field field_;
};

// Zero-pads f symmetrically to length len (len - size() must be even).
inline SampledFunction pad_to(const SampledFunction& f, std::size_t len) {
  if (len < f.size() || (len - f.size()) % 2 != 0) throw Error(ErrorKind::grid_incompatible, "cannot pad to that length");
  std::vector<Scalar> v(len);
  const std::size_t off = (len - f.size()) / 2;
  std::copy(f.values().begin(), f.values().end(), v.begin() + static_cast<std::ptrdiff_t>(off));
  return SampledFunction(f.h(), std::move(v), f.field());
}

// Equality as functions on the real line (zero off each grid).
inline bool same_function(const SampledFunction& f, const SampledFunction& g) {
  if (f.h() != g.h() || (f.size() % 2) != (g.size() % 2)) return false;
  const std::size_t len = std::max(f.size(), g.size());
  return pad_to(f, len).values() == pad_to(g, len).values();
}

// ---------------------------------------------------------------------------
// Seminorms.

enum class SeminormFamily { N, M };

inline std::string to_string(SeminormFamily f) { return f == SeminormFamily::N ? "N" : "M"; }

// N_j: max |f| over |x| <= j. M_j: max |f(x)| (|x| + 1)^j over the grid.
inline double seminorm(const SampledFunction& f, int j, SeminormFamily family) {
  if (j < 0) throw Error(ErrorKind::invalid_input, "seminorm index must be nonnegative");
  const double slack = 1e-9 * f.h();
  double best = 0.0;
  if (family == SeminormFamily::N) {
    if (static_cast<double>(j) > f.half_width() + slack)
      throw Error(ErrorKind::window_exceeds_grid,
                  "window |x| <= " + std::to_string(j) + " leaves the grid of half width " + std::to_string(f.half_width()));
    for (std::size_t i = 0; i < f.size(); ++i)
      if (std::abs(f.x(i)) <= j + slack) best = std::max(best, std::abs(f[i]));
  } else {
    for (std::size_t i = 0; i < f.size(); ++i)
      best = std::max(best, std::abs(f[i]) * std::pow(std::abs(f.x(i)) + 1.0, j));
  }
  return best;
}

// Smallest C with |f(x)| <= C (1 + |x|)^j on the grid.
inline double poly_growth_fit(const SampledFunction& f, int j) {
  if (j < 0) throw Error(ErrorKind::invalid_input, "growth exponent must be nonnegative");
  double best = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    best = std::max(best, std::abs(f[i]) / std::pow(1.0 + std::abs(f.x(i)), j));
  return best;
}

// Piecewise-linear phi_l: 1 on |x| <= l, 0 on |x| >= l + 1.
inline SampledFunction cutoff(int l, double h, double half_width) {
  if (l < 1) throw Error(ErrorKind::invalid_input, "cutoff level must be positive");
  if (l + 1 > half_width + 1e-9 * h)
    throw Error(ErrorKind::window_exceeds_grid, "cutoff support |x| <= l + 1 leaves the grid");
  const double ll = static_cast<double>(l);
  return SampledFunction::sample(h, half_width,
                                 [ll](double x) { return Scalar(std::clamp(ll + 1.0 - std::abs(x), 0.0, 1.0)); });
}

inline SampledFunction cutoff(int l, const SampledFunction& like) { return cutoff(l, like.h(), like.half_width()); }

// ---------------------------------------------------------------------------
// Convolution, translation, restriction and extension.

// (phi * f)(x_m) = h sum_k phi(y_k) f(x_m - y_k) on the grid of length
// len_phi + len_f - 1. Each output sums its products outside-in in pairs,
// so swapping the arguments reproduces every bit.
inline SampledFunction convolve(const SampledFunction& phi, const SampledFunction& f) {
  if (phi.h() != f.h()) throw Error(ErrorKind::grid_incompatible, "convolution needs equal steps");
  const std::size_t a = phi.size(), b = f.size();
  std::vector<Scalar> out(a + b - 1);
  std::vector<Scalar> terms;
  terms.reserve(std::min(a, b));
  for (std::size_t m = 0; m < out.size(); ++m) {
    const std::size_t lo = m + 1 > b ? m + 1 - b : 0;
    const std::size_t hi = std::min(m, a - 1);
    terms.clear();
    for (std::size_t k = lo; k <= hi; ++k) terms.push_back(phi[k] * f[m - k]);
    Scalar s{};
    const std::size_t n = terms.size();
    for (std::size_t i = 0; i < n / 2; ++i) s += terms[i] + terms[n - 1 - i];
    if (n % 2 == 1) s += terms[n / 2];
    out[m] = s * phi.h();
  }
  return SampledFunction(phi.h(), std::move(out), join(phi.field(), f.field()));
}

// x -> f(x - a) on a grid enlarged by |a| on both sides, so no sample is lost.
inline SampledFunction translate(const SampledFunction& f, double a) {
  const std::int64_t s = detail::grid_steps(a, f.h(), "shift");
  if (s == 0) return f;
  const std::size_t pad = static_cast<std::size_t>(std::abs(s));
  std::vector<Scalar> v(f.size() + 2 * pad);
  for (std::size_t i = 0; i < f.size(); ++i) v[static_cast<std::size_t>(static_cast<std::int64_t>(i + pad) + s)] = f[i];
  return SampledFunction(f.h(), std::move(v), f.field());
}

struct Interval {
  double lo;
  double hi;
};

// f on K = [a, b]; same grid, zero outside K.
inline SampledFunction restrict(const SampledFunction& f, Interval k) {
  const std::int64_t a = detail::grid_steps(k.lo, f.h(), "interval endpoint");
  const std::int64_t b = detail::grid_steps(k.hi, f.h(), "interval endpoint");
  if (a > b) throw Error(ErrorKind::geometry, "interval endpoints are reversed");
  std::vector<Scalar> v(f.size());
  const std::int64_t centre = static_cast<std::int64_t>(f.size() - 1) / 2;
  if (f.size() % 2 == 0) throw Error(ErrorKind::alignment, "grid nodes are offset from the integer multiples of h");
  for (std::size_t i = 0; i < f.size(); ++i) {
    const std::int64_t n = static_cast<std::int64_t>(i) - centre;
    if (n >= a && n <= b) v[i] = f[i];
  }
  return SampledFunction(f.h(), std::move(v), f.field());
}

// Extends g from K to a function supported in K1: continues g by its
// boundary values and multiplies by a ramp that is 1 on K and vanishes on the
// boundary of K1. The grid grows if K1 does not fit.
inline SampledFunction extend(const SampledFunction& g, Interval k, Interval k1) {
  const double h = g.h();
  const std::int64_t a = detail::grid_steps(k.lo, h, "interval endpoint");
  const std::int64_t b = detail::grid_steps(k.hi, h, "interval endpoint");
  const std::int64_t a1 = detail::grid_steps(k1.lo, h, "interval endpoint");
  const std::int64_t b1 = detail::grid_steps(k1.hi, h, "interval endpoint");
  if (a > b) throw Error(ErrorKind::geometry, "interval endpoints are reversed");
  if (!(a1 < a && b < b1)) throw Error(ErrorKind::geometry, "K must lie in the interior of K1");
  if (g.size() % 2 == 0) throw Error(ErrorKind::alignment, "grid nodes are offset from the integer multiples of h");
  const std::int64_t half = std::max({static_cast<std::int64_t>(g.size() - 1) / 2, -a1, b1});
  const SampledFunction base = pad_to(g, static_cast<std::size_t>(2 * half + 1));
  const Scalar left = base[static_cast<std::size_t>(a + half)];
  const Scalar right = base[static_cast<std::size_t>(b + half)];
  std::vector<Scalar> v(base.size());
  for (std::int64_t n = -half; n <= half; ++n) {
    Scalar value{};
    if (n >= a && n <= b) {
      value = base[static_cast<std::size_t>(n + half)];
    } else if (n > a1 && n < a) {
      value = left * (static_cast<double>(n - a1) / static_cast<double>(a - a1));
    } else if (n > b && n < b1) {
      value = right * (static_cast<double>(b1 - n) / static_cast<double>(b1 - b));
    }
    v[static_cast<std::size_t>(n + half)] = value;
  }
  return SampledFunction(h, std::move(v), g.field());
}

}  // namespace tvskit

#endif  // TVSKIT_FUNCTION_SPACES_HPP
