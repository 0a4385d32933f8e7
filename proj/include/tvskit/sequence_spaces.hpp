#ifndef TVSKIT_SEQUENCE_SPACES_HPP
#define TVSKIT_SEQUENCE_SPACES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "tvskit/error.hpp"
#include "tvskit/scalar.hpp"

namespace tvskit {

// A finitely supported sequence x_1, x_2, ... (indices start at 1). Stored
// sparsely: strictly increasing indices, no stored zeros.
class FinSeq {
 public:
  struct Entry {
    std::size_t index;
    Scalar value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  FinSeq() = default;
  explicit FinSeq(Field field) : field_(field) {}

  FinSeq(Field field, std::vector<Entry> entries) : field_(field) {
    entries_.reserve(entries.size());
    std::size_t last = 0;
    for (const Entry& e : entries) {
      if (e.index < 1) throw Error(ErrorKind::invalid_input, "sequence indices start at 1");
      if (e.index <= last) throw Error(ErrorKind::invalid_input, "sequence indices must be strictly increasing");
      check_field(field, e.value);
      last = e.index;
      if (e.value != Scalar{}) entries_.push_back(e);
    }
  }

  // values[0] is x_1.
  static FinSeq dense(Field field, const std::vector<Scalar>& values) {
    std::vector<Entry> entries;
    for (std::size_t i = 0; i < values.size(); ++i) entries.push_back({i + 1, values[i]});
    return FinSeq(field, std::move(entries));
  }

  static FinSeq real(std::initializer_list<double> values) {
    std::vector<Scalar> v(values.begin(), values.end());
    return dense(Field::real, v);
  }

  Field field() const { return field_; }
  const std::vector<Entry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::size_t support_size() const { return entries_.size(); }
  std::size_t max_index() const { return entries_.empty() ? 0 : entries_.back().index; }

  Scalar operator[](std::size_t j) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), j,
                               [](const Entry& e, std::size_t k) { return e.index < k; });
    return (it != entries_.end() && it->index == j) ? it->value : Scalar{};
  }

  friend FinSeq operator*(Scalar alpha, const FinSeq& x) {
    Field field = alpha.imag() != 0.0 ? Field::complex : x.field_;
    std::vector<Entry> out;
    out.reserve(x.entries_.size());
    for (const Entry& e : x.entries_) out.push_back({e.index, alpha * e.value});
    return FinSeq(field, std::move(out));
  }

  friend FinSeq operator+(const FinSeq& x, const FinSeq& y) { return merge(x, y, 1.0); }
  friend FinSeq operator-(const FinSeq& x, const FinSeq& y) { return merge(x, y, -1.0); }

  // Support-wise equality; the field tag does not participate.
  friend bool operator==(const FinSeq& x, const FinSeq& y) { return x.entries_ == y.entries_; }

 private:
  static FinSeq merge(const FinSeq& x, const FinSeq& y, double sign) {
    std::vector<Entry> out;
    out.reserve(x.entries_.size() + y.entries_.size());
    auto a = x.entries_.begin();
    auto b = y.entries_.begin();
    while (a != x.entries_.end() || b != y.entries_.end()) {
      if (b == y.entries_.end() || (a != x.entries_.end() && a->index < b->index)) {
        out.push_back(*a++);
      } else if (a == x.entries_.end() || b->index < a->index) {
        out.push_back({b->index, sign * b->value});
        ++b;
      } else {
        out.push_back({a->index, a->value + sign * b->value});
        ++a;
        ++b;
      }
    }
    return FinSeq(join(x.field_, y.field_), std::move(out));
  }

  Field field_ = Field::real;
  std::vector<Entry> entries_;
};

namespace detail {

// (sum (m_i / big)^p)^(1/p) * big, stable for p in [0.1, 100] and beyond.
template <typename Range>
double rescaled_power_sum_norm(const Range& moduli, double p) {
  double big = 0.0;
  for (double m : moduli) big = std::max(big, m);
  if (big == 0.0) return 0.0;
  if (std::isinf(p)) return big;
  double sum = 0.0;
  for (double m : moduli) {
    if (m != 0.0) sum += std::pow(m / big, p);
  }
  return big * std::pow(sum, 1.0 / p);
}

inline std::vector<double> moduli(const FinSeq& x) {
  std::vector<double> out;
  out.reserve(x.support_size());
  for (const auto& e : x.entries()) out.push_back(modulus(e.value));
  return out;
}

}  // namespace detail

inline double lp_norm(const FinSeq& x, const Exponent& p) {
  return detail::rescaled_power_sum_norm(detail::moduli(x), p.value());
}

// Convenience overload; throws invalid-exponent for p <= 0.
inline double lp_norm(const FinSeq& x, double p) { return lp_norm(x, Exponent::of(p)); }

// lambda_w(x) = sum_j x_j w_j (bilinear, no conjugation).
inline Scalar dual_pairing(const FinSeq& x, const FinSeq& w) {
  Scalar sum{};
  auto a = x.entries().begin();
  auto b = w.entries().begin();
  while (a != x.entries().end() && b != w.entries().end()) {
    if (a->index < b->index) {
      ++a;
    } else if (b->index < a->index) {
      ++b;
    } else {
      sum += a->value * b->value;
      ++a;
      ++b;
    }
  }
  return sum;
}

enum class ShiftDirection { backward, forward };

// backward: (x_1, x_2, ...) -> (x_2, x_3, ...); forward: -> (0, x_1, x_2, ...).
inline FinSeq shift(const FinSeq& x, ShiftDirection direction) {
  std::vector<FinSeq::Entry> out;
  out.reserve(x.support_size());
  for (const auto& e : x.entries()) {
    if (direction == ShiftDirection::forward) {
      out.push_back({e.index + 1, e.value});
    } else if (e.index > 1) {
      out.push_back({e.index - 1, e.value});
    }
  }
  return FinSeq(x.field(), std::move(out));
}

inline FinSeq pointwise_multiply(const FinSeq& x, const FinSeq& w) {
  std::vector<FinSeq::Entry> out;
  auto a = x.entries().begin();
  auto b = w.entries().begin();
  while (a != x.entries().end() && b != w.entries().end()) {
    if (a->index < b->index) {
      ++a;
    } else if (b->index < a->index) {
      ++b;
    } else {
      out.push_back({a->index, a->value * b->value});
      ++a;
      ++b;
    }
  }
  return FinSeq(join(x.field(), w.field()), std::move(out));
}

// sup over the stored support of j^k |x_j|. For k < 0 this is the smallest C
// with |x_j| <= C j^(-k) on the support. The empty sequence gives 0.
inline double weighted_seminorm(const FinSeq& x, int k) {
  double best = 0.0;
  for (const auto& e : x.entries()) {
    double weight = std::pow(static_cast<double>(e.index), k);
    best = std::max(best, weight * modulus(e.value));
  }
  return best;
}

// Both sides of Hoelder's inequality for a conjugate pair (p, p').
struct HolderReport {
  Exponent p;
  Exponent q;
  double pairing_modulus;
  double norm_product;
  bool holds(double rel_tol = 1e-12) const { return pairing_modulus <= norm_product * (1.0 + rel_tol); }
};

inline HolderReport holder_check(const FinSeq& x, const FinSeq& w, const Exponent& p) {
  Exponent q = p.conjugate();
  return {p, q, modulus(dual_pairing(x, w)), lp_norm(x, p) * lp_norm(w, q)};
}

}  // namespace tvskit

#endif  // TVSKIT_SEQUENCE_SPACES_HPP
