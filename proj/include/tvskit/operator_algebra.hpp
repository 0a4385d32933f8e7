#ifndef TVSKIT_OPERATOR_ALGEBRA_HPP
#define TVSKIT_OPERATOR_ALGEBRA_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "tvskit/dense_operator.hpp"
#include "tvskit/error.hpp"
#include "tvskit/scalar.hpp"
#include "tvskit/sequence_spaces.hpp"

namespace tvskit {

enum class NormQuality { exact, lower_bound };

struct NormEstimate {
  double value;
  NormQuality quality;
};

namespace detail {

inline double vector_lp(std::span<const Scalar> v, double p) {
  std::vector<double> m(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) m[i] = std::abs(v[i]);
  return rescaled_power_sum_norm(m, p);
}

inline void normalize(Vector& v) {
  double n = vector_lp(v, 2.0);
  if (n > 0.0)
    for (Scalar& z : v) z /= n;
}

inline double rayleigh(const DenseOperator& b, const Vector& v) {
  Vector bv = b.apply(v);
  Scalar num{};
  double den = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    num += bv[i] * std::conj(v[i]);
    den += std::norm(v[i]);
  }
  return den > 0.0 ? num.real() / den : 0.0;
}

// Largest eigenvalue of the Hermitian positive semidefinite b from a given
// start vector. The iteration runs on b^32 (repeated squaring, rescaled) so
// that close leading eigenvalues still separate quickly; the Rayleigh
// quotient is taken on b itself, so the result never exceeds the truth
// beyond rounding.
inline double hermitian_top_eigenvalue(const DenseOperator& b, Vector v) {
  const double scale = b.max_abs();
  if (scale == 0.0) return 0.0;
  DenseOperator c = (1.0 / scale) * b;
  for (int s = 0; s < 5; ++s) {
    c = c * c;
    const double m = c.max_abs();
    if (m == 0.0) break;
    c *= 1.0 / m;
  }
  normalize(v);
  double previous = rayleigh(b, v);
  int stable = 0;
  for (int it = 0; it < 2000 && stable < 2; ++it) {
    Vector next = c.apply(v);
    if (vector_lp(next, 2.0) == 0.0) {
      // Start vector sits in the numerically-null part of b^32; plain b
      // iteration still carries information.
      next = b.apply(v);
      if (vector_lp(next, 2.0) == 0.0) return 0.0;
    }
    normalize(next);
    v = std::move(next);
    const double current = rayleigh(b, v);
    const double change = std::abs(current - previous);
    stable = change <= 1e-14 * std::max(std::abs(current), 1e-300) ? stable + 1 : 0;
    previous = current;
  }
  return std::max(previous, 0.0);
}

inline Vector random_vector(std::size_t n, Field field, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Scalar& z : v) {
    const double re = gauss(rng);
    const double im = field == Field::complex ? gauss(rng) : 0.0;
    z = Scalar(re, im);
  }
  return v;
}

}  // namespace detail

// ||A||_{2->2} by power iteration on A^H A: all-ones start plus one seeded
// random restart.
inline double two_norm(const DenseOperator& a) {
  if (a.empty()) return 0.0;
  const DenseOperator b = a.adjoint() * a;
  Vector ones(b.cols(), Scalar(1.0));
  double best = detail::hermitian_top_eigenvalue(b, ones);
  std::mt19937_64 rng(0x5eedULL);
  best = std::max(best, detail::hermitian_top_eigenvalue(b, detail::random_vector(b.cols(), a.field(), rng)));
  return std::sqrt(best);
}

namespace detail {

// Random-restart local ascent for the ratio ||Av||_q / ||v||_p. Always a
// valid lower bound on the induced quantity.
inline double ascent_lower_bound(const DenseOperator& a, double p_in, double p_out, std::uint64_t seed) {
  const std::size_t n = a.cols();
  auto ratio = [&](const Vector& v) {
    const double den = vector_lp(v, p_in);
    return den > 0.0 ? vector_lp(a.apply(v), p_out) / den : 0.0;
  };
  double best = 0.0;
  std::vector<Vector> starts;
  for (std::size_t j = 0; j < n; ++j) {
    Vector e(n);
    e[j] = 1.0;
    starts.push_back(e);
  }
  starts.emplace_back(n, Scalar(1.0));
  std::mt19937_64 rng(seed);
  for (int r = 0; r < 8; ++r) starts.push_back(random_vector(n, a.field(), rng));
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (Vector v : starts) {
    double value = ratio(v);
    double step = 0.5 * vector_lp(v, 2.0);
    for (int it = 0; it < 300 && step > 1e-12; ++it) {
      Vector trial = v;
      for (Scalar& z : trial) {
        z += step * Scalar(gauss(rng), a.field() == Field::complex ? gauss(rng) : 0.0);
      }
      const double t = ratio(trial);
      if (t > value) {
        value = t;
        v = std::move(trial);
        step *= 1.5;
      } else {
        step *= 0.7;
      }
    }
    best = std::max(best, value);
  }
  return best;
}

}  // namespace detail

// Induced norm sup{ ||A v||_out : ||v||_in <= 1 }. Exact when p_in <= 1 with
// p_out >= 1 (extreme points of the l^1 ball), when p_out = inf with
// p_in >= 1 (row-wise Hoelder duality), and for (2, 2). Otherwise a
// random-restart ascent value tagged lower_bound.
inline NormEstimate operator_norm(const DenseOperator& a, const Exponent& p_in, const Exponent& p_out,
                                  std::uint64_t seed = 0) {
  if (a.empty()) throw Error(ErrorKind::invalid_input, "operator norm of a zero-dimensional matrix");
  if (p_in.value() <= 1.0 && p_out.value() >= 1.0) {
    double best = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j) best = std::max(best, detail::vector_lp(a.column(j), p_out.value()));
    return {best, NormQuality::exact};
  }
  if (p_out.is_infinite() && p_in.value() >= 1.0) {
    const double q = p_in.conjugate().value();
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) best = std::max(best, detail::vector_lp(a.row(i), q));
    return {best, NormQuality::exact};
  }
  if (p_in.value() == 2.0 && p_out.value() == 2.0) return {two_norm(a), NormQuality::exact};
  return {detail::ascent_lower_bound(a, p_in.value(), p_out.value(), seed), NormQuality::lower_bound};
}

inline double norm_1(const DenseOperator& a) { return operator_norm(a, Exponent::finite(1), Exponent::finite(1)).value; }
inline double norm_inf(const DenseOperator& a) {
  return operator_norm(a, Exponent::infinity(), Exponent::infinity()).value;
}

// ---------------------------------------------------------------------------
// Gelfand trace: ||a^n||^(1/n) along n = 1, 2, 4, ..., with log-scale tracking.

struct GelfandEntry {
  std::size_t n;
  double rho;
};

struct GelfandTrace {
  std::vector<GelfandEntry> entries;
  double running_inf = std::numeric_limits<double>::infinity();
};

inline GelfandTrace gelfand_trace(const DenseOperator& a, std::size_t n_max) {
  if (!a.is_square() || a.empty()) throw Error(ErrorKind::invalid_input, "gelfand trace needs a nonempty square matrix");
  if (n_max < 1) throw Error(ErrorKind::invalid_input, "n_max must be at least 1");
  GelfandTrace trace;
  double s = a.max_abs();
  DenseOperator power = a;
  bool zero = (s == 0.0);
  double log_scale = zero ? 0.0 : std::log(s);
  if (!zero) power *= 1.0 / s;
  for (std::size_t n = 1; n <= n_max; n *= 2) {
    double rho = 0.0;
    if (!zero) {
      const double norm = two_norm(power);
      rho = norm > 0.0 ? std::exp((std::log(norm) + log_scale) / static_cast<double>(n)) : 0.0;
    }
    trace.entries.push_back({n, rho});
    trace.running_inf = std::min(trace.running_inf, rho);
    if (n > n_max / 2) break;
    if (!zero) {
      power = power * power;
      const double m = power.max_abs();
      if (m == 0.0) {
        zero = true;
      } else {
        log_scale = 2.0 * log_scale + std::log(m);
        power *= 1.0 / m;
      }
    }
  }
  return trace;
}

// ---------------------------------------------------------------------------
// Neumann series (1 - a)^{-1} = sum_j a^j.

struct NeumannCertificate {
  double norm_a;              // ||a||_2 < 1
  double inverse_norm;        // ||S_N||_2
  double inverse_norm_bound;  // 1 / (1 - ||a||)
  double tail_bound;          // ||a||^(N+1) / (1 - ||a||)
};

struct NeumannResult {
  DenseOperator inverse;  // S_N = I + a + ... + a^N
  std::size_t terms;      // N + 1
  double residual;        // ||(I - a) S_N - I||_2
  double spectral_estimate;
  std::optional<NeumannCertificate> certificate;
};

inline NeumannResult neumann_inverse(const DenseOperator& a, double tol, std::size_t max_terms = 1u << 16) {
  if (!a.is_square() || a.empty()) throw Error(ErrorKind::invalid_input, "Neumann series needs a nonempty square matrix");
  if (!(tol > 0.0)) throw Error(ErrorKind::invalid_input, "tolerance must be positive");
  const std::size_t n = a.rows();
  const GelfandTrace trace = gelfand_trace(a, 64);
  if (trace.running_inf >= 1.0) {
    throw Error(ErrorKind::divergence,
                "spectral radius estimate " + std::to_string(trace.running_inf) + " >= 1 after n = 64");
  }
  const DenseOperator id = DenseOperator::identity(n);
  const DenseOperator one_minus_a = id - a;
  DenseOperator sum = id;
  DenseOperator power = id;
  std::size_t terms = 1;
  auto residual_of = [&](const DenseOperator& s) { return one_minus_a * s - id; };
  // Frobenius dominates the 2-norm, so it is a safe stopping test.
  while (residual_of(sum).frobenius() > tol) {
    if (terms >= max_terms) {
      throw Error(ErrorKind::divergence, "Neumann series did not reach tolerance within " +
                                             std::to_string(max_terms) + " terms");
    }
    power = power * a;
    sum = sum + power;
    ++terms;
  }
  NeumannResult result{sum, terms, two_norm(residual_of(sum)), trace.running_inf, std::nullopt};
  const double norm_a = two_norm(a);
  if (norm_a < 1.0) {
    const double bound = 1.0 / (1.0 - norm_a);
    result.certificate = NeumannCertificate{norm_a, two_norm(sum), bound,
                                            std::pow(norm_a, static_cast<double>(terms)) * bound};
  }
  return result;
}

// x^{-1} by a Neumann series that always applies to invertible x:
// x^{-1} = (c x^H x)^{-1} c x^H with c = 1 / ||x||^2, and
// I - c x^H x has spectral radius 1 - (s_min / s_max)^2 < 1.
inline DenseOperator neumann_invert(const DenseOperator& x, double tol) {
  if (!x.is_square() || x.empty()) throw Error(ErrorKind::invalid_input, "inversion needs a nonempty square matrix");
  const double nx = two_norm(x);
  if (nx == 0.0) throw Error(ErrorKind::precondition, "zero operator is not invertible");
  const double c = 1.0 / (nx * nx);
  const DenseOperator xh = x.adjoint();
  const DenseOperator gram_defect = DenseOperator::identity(x.rows()) - c * (xh * x);
  try {
    NeumannResult r = neumann_inverse(gram_defect, tol);
    return c * (r.inverse * xh);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::divergence) throw Error(ErrorKind::precondition, "x is not Neumann-invertible");
    throw;
  }
}

struct PerturbedInverse {
  DenseOperator inverse;  // (x - a)^{-1}
  double bound;           // ||x^{-1}|| / (1 - ||x^{-1}|| ||a||)
  double inverse_norm;    // measured ||(x - a)^{-1}||_2
  std::size_t terms;
  double residual;        // ||(x - a) inverse - I||_2
  bool certified(double tol) const { return inverse_norm <= bound + tol; }
};

// (x - a)^{-1} = (1 - x^{-1} a)^{-1} x^{-1}, valid when ||x^{-1}|| ||a|| < 1.
inline PerturbedInverse perturbed_inverse(const DenseOperator& x, const DenseOperator& a, double tol,
                                          std::optional<DenseOperator> x_inverse = std::nullopt) {
  if (!x.is_square() || x.rows() != a.rows() || x.cols() != a.cols()) {
    throw Error(ErrorKind::invalid_input, "perturbed inverse needs square operators of equal size");
  }
  const DenseOperator xinv = x_inverse ? *x_inverse : neumann_invert(x, tol * 1e-2);
  const double nxinv = two_norm(xinv);
  const double na = two_norm(a);
  const double k = nxinv * na;
  if (k >= 1.0) {
    throw Error(ErrorKind::perturbation_too_large,
                "||x^-1|| ||a|| = " + std::to_string(k) + " is not below 1");
  }
  NeumannResult series = neumann_inverse(xinv * a, tol);
  DenseOperator inv = series.inverse * xinv;
  const double residual = two_norm((x - a) * inv - DenseOperator::identity(x.rows()));
  const double inv_norm = two_norm(inv);
  return {std::move(inv), nxinv / (1.0 - k), inv_norm, series.terms, residual};
}

// ---------------------------------------------------------------------------
// Resolvent probing.

enum class SpectralVerdict { in_resolvent, in_spectrum, indeterminate };

inline std::string to_string(SpectralVerdict v) {
  switch (v) {
    case SpectralVerdict::in_resolvent: return "in-resolvent";
    case SpectralVerdict::in_spectrum: return "in-spectrum";
    case SpectralVerdict::indeterminate: return "indeterminate";
  }
  return "unknown";
}

struct ResolventProbe {
  SpectralVerdict verdict;
  double relative_sigma_min;              // s_min(lambda - a) / scale
  std::optional<double> resolvent_norm;   // ||(lambda - a)^{-1}||_2
  std::optional<std::size_t> criterion_n; // first n with |lambda|^n > ||a^n||
};

inline constexpr double kSingularThreshold = 1e-10;
inline constexpr double kIndeterminateBand = 1e-8;

inline ResolventProbe resolvent_probe(const DenseOperator& a, Scalar lambda, std::size_t n_max = 64) {
  if (!a.is_square() || a.empty()) throw Error(ErrorKind::invalid_input, "resolvent probe needs a nonempty square matrix");
  const std::size_t n = a.rows();
  const DenseOperator b = lambda * DenseOperator::identity(n) - a;
  const double scale = std::max(two_norm(a), std::abs(lambda));
  ResolventProbe probe{SpectralVerdict::in_spectrum, 0.0, std::nullopt, std::nullopt};

  if (scale > 0.0) {
    auto inv = detail::solve(b, DenseOperator::identity(n), 1e-14 * scale);
    if (inv) {
      const double inv_norm = two_norm(*inv);
      probe.relative_sigma_min = 1.0 / (inv_norm * scale);
      if (probe.relative_sigma_min > kIndeterminateBand) {
        probe.verdict = SpectralVerdict::in_resolvent;
        probe.resolvent_norm = inv_norm;
      } else if (probe.relative_sigma_min > kSingularThreshold) {
        probe.verdict = SpectralVerdict::indeterminate;
      }
    }
  }

  // |lambda|^n > ||a^n|| certifies lambda - a invertible through
  // lambda^n - a^n = (lambda - a)(lambda^{n-1} + ... + a^{n-1}).
  const double log_lambda = std::abs(lambda) > 0.0 ? std::log(std::abs(lambda)) : -std::numeric_limits<double>::infinity();
  DenseOperator power = a;
  double log_scale = 0.0;
  for (std::size_t k = 1; k <= n_max && std::isfinite(log_lambda); ++k) {
    const double nrm = two_norm(power);
    const double log_norm = nrm > 0.0 ? std::log(nrm) + log_scale : -std::numeric_limits<double>::infinity();
    if (static_cast<double>(k) * log_lambda > log_norm + 1e-12) {
      probe.criterion_n = k;
      break;
    }
    power = power * a;
    const double m = power.max_abs();
    if (m > 0.0) {
      log_scale += std::log(m);
      power *= 1.0 / m;
    }
  }
  return probe;
}

// ---------------------------------------------------------------------------
// Integral operators on [0, 1] with trapezoid weights.

// Kernel samples k(x_i, y_j) on a tensor grid, row-major in (i, j).
struct KernelGrid {
  std::vector<double> nodes;
  std::vector<Scalar> values;
  Field field = Field::real;

  std::size_t size() const { return nodes.size(); }
  Scalar operator()(std::size_t i, std::size_t j) const { return values[i * nodes.size() + j]; }

  static KernelGrid uniform(std::size_t n, const std::function<Scalar(double, double)>& kernel,
                            Field field = Field::real) {
    if (n < 2) throw Error(ErrorKind::invalid_input, "kernel grid needs at least 2 nodes");
    KernelGrid g;
    g.field = field;
    for (std::size_t i = 0; i < n; ++i) g.nodes.push_back(static_cast<double>(i) / static_cast<double>(n - 1));
    g.values.reserve(n * n);
    for (double x : g.nodes)
      for (double y : g.nodes) g.values.push_back(kernel(x, y));
    return g;
  }
};

namespace detail {

inline void check_kernel_grid(const KernelGrid& k) {
  const std::size_t n = k.size();
  if (n < 2) throw Error(ErrorKind::invalid_input, "kernel grid needs at least 2 nodes");
  if (k.values.size() != n * n) throw Error(ErrorKind::invalid_input, "kernel values must be n*n");
  const double h = 1.0 / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(k.nodes[i] - static_cast<double>(i) * h) > 1e-12) {
      throw Error(ErrorKind::invalid_input, "kernel grid must be uniform on [0, 1]");
    }
  }
}

inline std::vector<double> trapezoid_weights(std::size_t n) {
  const double h = 1.0 / static_cast<double>(n - 1);
  std::vector<double> w(n, h);
  w.front() = w.back() = 0.5 * h;
  return w;
}

// Contiguous near-equal blocks; the first n % r blocks get one extra index.
inline std::vector<std::size_t> block_of_index(std::size_t n, std::size_t r) {
  std::vector<std::size_t> block(n);
  const std::size_t base = n / r;
  const std::size_t extra = n % r;
  std::size_t i = 0;
  for (std::size_t b = 0; b < r; ++b) {
    const std::size_t len = base + (b < extra ? 1 : 0);
    for (std::size_t k = 0; k < len; ++k) block[i++] = b;
  }
  return block;
}

}  // namespace detail

// M[i][j] = k(x_i, y_j) w_j: the Nystrom matrix of f -> int_0^1 k(., y) f(y) dy.
inline DenseOperator discretize_integral_kernel(const KernelGrid& kernel) {
  detail::check_kernel_grid(kernel);
  const std::size_t n = kernel.size();
  const auto w = detail::trapezoid_weights(n);
  DenseOperator m(n, n, kernel.field);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = kernel(i, j) * w[j];
  return m;
}

struct FiniteRankApprox {
  DenseOperator approx;
  std::size_t rank_budget;
  double error_inf;  // ||A - A_r||_{inf -> inf}
};

// Block-averaged kernel on an r x r partition: an operator of rank <= r.
inline FiniteRankApprox finite_rank_truncate(const KernelGrid& kernel, std::size_t r) {
  detail::check_kernel_grid(kernel);
  const std::size_t n = kernel.size();
  if (r < 1 || r > n) throw Error(ErrorKind::invalid_input, "rank budget must lie in [1, grid size]");
  const auto block = detail::block_of_index(n, r);
  std::vector<Scalar> sums(r * r);
  std::vector<double> counts(r * r, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      sums[block[i] * r + block[j]] += kernel(i, j);
      counts[block[i] * r + block[j]] += 1.0;
    }
  const auto w = detail::trapezoid_weights(n);
  DenseOperator approx(n, n, kernel.field);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const std::size_t b = block[i] * r + block[j];
      approx(i, j) = (r == n ? kernel(i, j) : sums[b] / counts[b]) * w[j];
    }
  const double error = norm_inf(discretize_integral_kernel(kernel) - approx);
  return {std::move(approx), r, error};
}

// ---------------------------------------------------------------------------
// Invertible plus finite rank: invertible exactly when the kernel is trivial.

struct FredholmVerdict {
  bool invertible;
  std::size_t rank;
  std::optional<Vector> kernel_witness;  // unit vector z with (T + A) z ~ 0
  double witness_residual = 0.0;
};

inline FredholmVerdict fredholm_check(const DenseOperator& t, const DenseOperator& a) {
  if (!t.is_square() || t.rows() != a.rows() || t.cols() != a.cols() || t.empty()) {
    throw Error(ErrorKind::invalid_input, "fredholm check needs square operators of equal size");
  }
  if (resolvent_probe(t, 0.0, 1).verdict != SpectralVerdict::in_resolvent) {
    throw Error(ErrorKind::precondition, "T is not invertible");
  }
  const DenseOperator s = t + a;
  const double tol = 1e-10 * two_norm(s);
  const auto echelon = detail::row_echelon(s, tol);
  FredholmVerdict verdict{echelon.rank() == s.cols(), echelon.rank(), std::nullopt, 0.0};
  if (!verdict.invertible) {
    Vector z = *detail::kernel_vector(s, tol);
    verdict.witness_residual = detail::vector_lp(s.apply(z), 2.0);
    verdict.kernel_witness = std::move(z);
  }
  return verdict;
}

}  // namespace tvskit

#endif  // TVSKIT_OPERATOR_ALGEBRA_HPP
