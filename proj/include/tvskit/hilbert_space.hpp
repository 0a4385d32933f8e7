#ifndef TVSKIT_HILBERT_SPACE_HPP
#define TVSKIT_HILBERT_SPACE_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tvskit/dense_operator.hpp"
#include "tvskit/error.hpp"
#include "tvskit/operator_algebra.hpp"
#include "tvskit/scalar.hpp"

namespace tvskit {

using HVector = Vector;

// <v, w> = sum v_i conj(w_i): linear in the first slot.
inline Scalar inner_product(std::span<const Scalar> v, std::span<const Scalar> w) {
  if (v.size() != w.size()) throw Error(ErrorKind::invalid_input, "inner product of vectors of different dimension");
  Scalar s{};
  for (std::size_t i = 0; i < v.size(); ++i) s += v[i] * std::conj(w[i]);
  return s;
}

inline double norm(std::span<const Scalar> v) { return detail::vector_lp(v, 2.0); }

namespace detail {

inline void axpy(Scalar alpha, std::span<const Scalar> x, HVector& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

// Orthogonalizes r against an orthonormal list twice (classical MGS plus a
// re-orthogonalization sweep).
inline void orthogonalize(HVector& r, const std::vector<HVector>& basis) {
  for (int pass = 0; pass < 2; ++pass)
    for (const HVector& e : basis) axpy(-inner_product(r, e), e, r);
}

}  // namespace detail

// A subspace of C^d (or R^d) given by spanning vectors. The orthonormal
// basis drops spanning vectors whose residual after orthogonalization falls
// below 1e-12 times the largest input norm.
class Subspace {
 public:
  Subspace() = default;

  Subspace(std::size_t ambient_dim, std::vector<HVector> spanning)
      : ambient_(ambient_dim), spanning_(std::move(spanning)) {
    double scale = 0.0;
    for (const HVector& v : spanning_) {
      if (v.size() != ambient_) throw Error(ErrorKind::invalid_input, "spanning vector has the wrong dimension");
      scale = std::max(scale, norm(v));
    }
    for (const HVector& v : spanning_) {
      HVector r = v;
      detail::orthogonalize(r, basis_);
      const double n = norm(r);
      if (n < 1e-12 * scale || n == 0.0) continue;
      for (Scalar& z : r) z /= n;
      basis_.push_back(std::move(r));
    }
  }

  std::size_t ambient_dim() const { return ambient_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<HVector>& spanning() const { return spanning_; }
  const std::vector<HVector>& orthonormal_basis() const { return basis_; }

 private:
  std::size_t ambient_ = 0;
  std::vector<HVector> spanning_;
  std::vector<HVector> basis_;
};

// ---------------------------------------------------------------------------
// Projection.

enum class ProjectionMode { gram, minimizing_sequence };

struct MinimizingSequenceDiagnostics {
  std::size_t steps = 0;
  double worst_distance_slack = 0.0;  // max_j ||v - w_j|| - (dist + 1/j), should be <= 0
  double worst_cauchy_slack = 0.0;    // max_{j,l} ||w_j - w_l||^2 - bound(j, l), should be <= 0
  bool cauchy_bound_holds = true;
  double gap_to_gram = 0.0;                       // ||w_steps - P_W v||
  std::optional<std::size_t> steps_to_tolerance;  // first j with ||w_j - P_W v|| <= 1e-6
};

struct ProjectionResult {
  HVector projection;
  double distance = 0.0;             // ||v - P_W v||
  double orthogonality_defect = 0.0; // max_i |<v - result, e_i>|
  std::optional<MinimizingSequenceDiagnostics> sequence;
};

inline HVector gram_projection(std::span<const Scalar> v, const Subspace& w) {
  HVector p(v.size());
  for (const HVector& e : w.orthonormal_basis()) detail::axpy(inner_product(v, e), e, p);
  return p;
}

// Right-hand side of the Cauchy estimate for an almost-minimizing sequence
// ||v - w_j|| <= dist + 1/j.
inline double minimizing_sequence_bound(double dist, double j, double l) {
  return 4.0 * dist * (1.0 / j + 1.0 / l) + 2.0 / (j * j) + 2.0 / (l * l);
}

// The minimizing sequence is w_j = P_W v + t_j u_j with u_j a unit vector of
// W (cycling through the basis, alternating sign) and
// t_j = decay^(j-1) * sqrt(2 dist / j + 1 / j^2), which keeps
// ||v - w_j||^2 = dist^2 + t_j^2 <= (dist + 1/j)^2 while the first terms
// come close to saturating it.
inline ProjectionResult project(std::span<const Scalar> v, const Subspace& w, ProjectionMode mode,
                                std::size_t steps = 100, double decay = 0.5) {
  if (v.size() != w.ambient_dim()) throw Error(ErrorKind::invalid_input, "vector and subspace dimensions differ");
  ProjectionResult result;
  const HVector exact = gram_projection(v, w);
  HVector residual(v.begin(), v.end());
  detail::axpy(-1.0, exact, residual);
  result.distance = norm(residual);

  if (mode == ProjectionMode::gram) {
    result.projection = exact;
  } else {
    if (steps < 1) throw Error(ErrorKind::invalid_input, "minimizing sequence needs at least one step");
    MinimizingSequenceDiagnostics diag;
    diag.steps = steps;
    const auto& basis = w.orthonormal_basis();
    const double dist = result.distance;
    std::vector<HVector> iterates;
    iterates.reserve(steps);
    diag.worst_distance_slack = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 1; j <= steps; ++j) {
      const double jd = static_cast<double>(j);
      HVector wj = exact;
      if (!basis.empty()) {
        const double budget = std::sqrt(2.0 * dist / jd + 1.0 / (jd * jd));
        const double t = (1.0 - 1e-9) * budget * std::pow(decay, jd - 1.0);
        const double sign = (j % 2 == 1) ? 1.0 : -1.0;
        detail::axpy(sign * t, basis[(j - 1) % basis.size()], wj);
      }
      HVector r(v.begin(), v.end());
      detail::axpy(-1.0, wj, r);
      diag.worst_distance_slack = std::max(diag.worst_distance_slack, norm(r) - (dist + 1.0 / jd));
      HVector gap = wj;
      detail::axpy(-1.0, exact, gap);
      if (!diag.steps_to_tolerance && norm(gap) <= 1e-6) diag.steps_to_tolerance = j;
      if (j == steps) diag.gap_to_gram = norm(gap);
      iterates.push_back(std::move(wj));
    }
    diag.worst_cauchy_slack = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < steps; ++j) {
      for (std::size_t l = j + 1; l < steps; ++l) {
        HVector d = iterates[j];
        detail::axpy(-1.0, iterates[l], d);
        const double lhs = std::pow(norm(d), 2);
        const double rhs = minimizing_sequence_bound(dist, static_cast<double>(j + 1), static_cast<double>(l + 1));
        diag.worst_cauchy_slack = std::max(diag.worst_cauchy_slack, lhs - rhs);
        if (lhs > rhs * (1.0 + 1e-12)) diag.cauchy_bound_holds = false;
      }
    }
    if (steps == 1) diag.worst_cauchy_slack = 0.0;
    result.projection = std::move(iterates.back());
    result.sequence = diag;
  }

  HVector r(v.begin(), v.end());
  detail::axpy(-1.0, result.projection, r);
  for (const HVector& e : w.orthonormal_basis())
    result.orthogonality_defect = std::max(result.orthogonality_defect, std::abs(inner_product(r, e)));
  return result;
}

// Dense matrix of P_W in the standard basis.
inline DenseOperator projection_operator(const Subspace& w, Field field = Field::complex) {
  const std::size_t d = w.ambient_dim();
  DenseOperator p(d, d, field);
  for (const HVector& e : w.orthonormal_basis())
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) p(i, j) += e[i] * std::conj(e[j]);
  return p;
}

// ---------------------------------------------------------------------------
// Orthogonal complement.

// Pivoted completion: repeatedly adjoins the standard basis vector with the
// largest residual against everything chosen so far.
inline Subspace orthogonal_complement(const Subspace& w) {
  const std::size_t d = w.ambient_dim();
  std::vector<HVector> chosen = w.orthonormal_basis();
  std::vector<HVector> complement;
  while (chosen.size() < d) {
    HVector best;
    double best_norm = -1.0;
    for (std::size_t i = 0; i < d; ++i) {
      HVector r(d);
      r[i] = 1.0;
      detail::orthogonalize(r, chosen);
      const double n = norm(r);
      if (n > best_norm) {
        best_norm = n;
        best = std::move(r);
      }
    }
    for (Scalar& z : best) z /= best_norm;
    chosen.push_back(best);
    complement.push_back(std::move(best));
  }
  return Subspace(d, std::move(complement));
}

// A unit vector lying in both subspaces, found as a kernel vector of
// [Q_1, -Q_2]; nullopt when the intersection is {0}.
inline std::optional<HVector> common_unit_vector(const Subspace& a, const Subspace& b) {
  const std::size_t d = a.ambient_dim();
  const std::size_t ka = a.dim(), kb = b.dim();
  if (ka == 0 || kb == 0) return std::nullopt;
  DenseOperator stacked(d, ka + kb, Field::complex);
  for (std::size_t c = 0; c < ka; ++c)
    for (std::size_t i = 0; i < d; ++i) stacked(i, c) = a.orthonormal_basis()[c][i];
  for (std::size_t c = 0; c < kb; ++c)
    for (std::size_t i = 0; i < d; ++i) stacked(i, ka + c) = -b.orthonormal_basis()[c][i];
  auto coeffs = detail::kernel_vector(stacked, 1e-10);
  if (!coeffs) return std::nullopt;
  HVector z(d);
  for (std::size_t c = 0; c < ka; ++c) detail::axpy((*coeffs)[c], a.orthonormal_basis()[c], z);
  const double n = norm(z);
  if (n == 0.0) return std::nullopt;
  for (Scalar& x : z) x /= n;
  return z;
}

// ---------------------------------------------------------------------------
// Self-adjointness and positivity.

namespace detail {

inline HVector random_unit(std::size_t n, Field field, std::mt19937_64& rng) {
  HVector v = random_vector(n, field, rng);
  normalize(v);
  return v;
}

}  // namespace detail

// max over sampled unit pairs of |<A v, w> - <v, A w>|.
inline double self_adjoint_defect(const DenseOperator& a, std::size_t trials, std::uint64_t seed) {
  if (!a.is_square() || a.empty()) throw Error(ErrorKind::invalid_input, "self-adjointness needs a square operator");
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const HVector v = detail::random_unit(a.cols(), a.field(), rng);
    const HVector w = detail::random_unit(a.cols(), a.field(), rng);
    worst = std::max(worst, std::abs(inner_product(a.apply(v), w) - inner_product(v, a.apply(w))));
  }
  return worst;
}

class PositivityViolation : public Error {
 public:
  PositivityViolation(HVector witness, double rayleigh, double alpha)
      : Error(ErrorKind::positivity_violated,
              "Rayleigh quotient " + std::to_string(rayleigh) + " below alpha " + std::to_string(alpha)),
        witness_(std::move(witness)),
        rayleigh_(rayleigh) {}

  const HVector& witness() const { return witness_; }
  double rayleigh() const { return rayleigh_; }

 private:
  HVector witness_;
  double rayleigh_;
};

struct PositivityInverse {
  DenseOperator inverse;
  double inverse_norm;
  double bound;          // 1 / alpha
  double min_rayleigh;   // smallest sampled <A v, v> / |v|^2
  bool certified;        // inverse_norm <= bound + tol
};

// Inverts a self-adjoint A with <A v, v> >= alpha |v|^2 (sampled on the
// standard basis and `samples` random vectors) by a Neumann expansion
// around c I, c = ||A||.
inline PositivityInverse positivity_inverse(const DenseOperator& a, double alpha, double tol,
                                            std::size_t samples = 10000, std::uint64_t seed = 0) {
  if (!a.is_square() || a.empty()) throw Error(ErrorKind::invalid_input, "positivity inverse needs a square operator");
  if (!(alpha > 0.0)) throw Error(ErrorKind::invalid_input, "alpha must be positive");
  if (self_adjoint_defect(a, 64, seed) > 1e-10) throw Error(ErrorKind::precondition, "operator is not self-adjoint");
  const std::size_t n = a.rows();
  std::mt19937_64 rng(seed);
  double min_q = std::numeric_limits<double>::infinity();
  HVector witness;
  auto probe = [&](const HVector& v) {
    const double q = inner_product(a.apply(v), v).real();
    if (q < min_q) {
      min_q = q;
      witness = v;
    }
  };
  for (std::size_t i = 0; i < n; ++i) {
    HVector e(n);
    e[i] = 1.0;
    probe(e);
  }
  for (std::size_t s = 0; s < samples; ++s) probe(detail::random_unit(n, a.field(), rng));
  if (min_q < alpha - tol) throw PositivityViolation(witness, min_q, alpha);

  const double c = two_norm(a);
  DenseOperator x = c * DenseOperator::identity(n);
  DenseOperator xinv = (1.0 / c) * DenseOperator::identity(n);
  PerturbedInverse pi = perturbed_inverse(x, x - a, tol, xinv);
  const double bound = 1.0 / alpha;
  return {std::move(pi.inverse), pi.inverse_norm, bound, min_q, pi.inverse_norm <= bound + tol};
}

}  // namespace tvskit

#endif  // TVSKIT_HILBERT_SPACE_HPP
