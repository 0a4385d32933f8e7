#ifndef TVSKIT_SCALAR_HPP
#define TVSKIT_SCALAR_HPP

#include <cmath>
#include <cstdio>
#include <complex>
#include <limits>
#include <string>

#include "tvskit/error.hpp"

namespace tvskit {

// Every space in the kit is over R or C. Scalars are always stored as a
// (re, im) pair; containers carry the field tag and reject im != 0 in real mode.
using Scalar = std::complex<double>;

enum class Field { real, complex };

inline double modulus(Scalar z) { return std::abs(z); }
inline Scalar conjugate(Scalar z) { return std::conj(z); }

inline void check_field(Field field, Scalar z) {
  if (field == Field::real && z.imag() != 0.0) {
    throw Error(ErrorKind::invalid_input, "complex value in a real-scalar container");
  }
}

inline Field join(Field a, Field b) {
  return (a == Field::complex || b == Field::complex) ? Field::complex : Field::real;
}

// An l^p exponent: a positive real or infinity.
class Exponent {
 public:
  static Exponent infinity() { return Exponent(std::numeric_limits<double>::infinity()); }

  static Exponent finite(double p) {
    if (!(p > 0.0) || std::isinf(p)) {
      throw Error(ErrorKind::invalid_exponent, "exponent must be a positive real, got " + std::to_string(p));
    }
    return Exponent(p);
  }

  // Accepts +inf as well as positive reals.
  static Exponent of(double p) { return std::isinf(p) && p > 0 ? infinity() : finite(p); }

  bool is_infinite() const { return std::isinf(p_); }
  double value() const { return p_; }
  double reciprocal() const { return is_infinite() ? 0.0 : 1.0 / p_; }

  // The Hoelder partner q with 1/p + 1/q = 1, defined for 1 <= p <= inf.
  Exponent conjugate() const {
    if (p_ < 1.0) {
      throw Error(ErrorKind::invalid_exponent, "conjugate exponent needs p >= 1");
    }
    if (is_infinite()) return Exponent(1.0);
    if (p_ == 1.0) return infinity();
    return Exponent(p_ / (p_ - 1.0));
  }

  friend bool operator==(const Exponent&, const Exponent&) = default;

 private:
  explicit Exponent(double p) : p_(p) {}
  double p_;
};

inline std::string to_string(const Exponent& p) {
  if (p.is_infinite()) return "inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", p.value());
  return buf;
}

}  // namespace tvskit

#endif  // TVSKIT_SCALAR_HPP
