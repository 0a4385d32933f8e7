#ifndef TVSKIT_TESTS_SUPPORT_HPP
#define TVSKIT_TESTS_SUPPORT_HPP

// Seeded generators shared by the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "tvskit/dense_operator.hpp"
#include "tvskit/scalar.hpp"
#include "tvskit/sequence_spaces.hpp"

namespace tvskit::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  double gauss() { return std::normal_distribution<double>(0.0, 1.0)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin() { return integer(0, 1) == 1; }

  Scalar scalar(Field field) { return Scalar(gauss(), field == Field::complex ? gauss() : 0.0); }

  // Sparse sequence with up to max_len stored terms spread over indices
  // 1..2*max_len, occasionally with a wide dynamic range.
  FinSeq finseq(Field field, int max_len = 12) {
    const int len = integer(0, max_len);
    std::vector<FinSeq::Entry> entries;
    const double spread = coin() ? 1.0 : uniform(1.0, 20.0);
    for (std::size_t j = 1; static_cast<int>(entries.size()) < len && j <= 2 * static_cast<std::size_t>(max_len); ++j) {
      if (coin()) entries.push_back({j, std::exp(spread * gauss() * 0.3) * scalar(field)});
    }
    return FinSeq(field, std::move(entries));
  }

  Vector vector(std::size_t n, Field field) {
    Vector v(n);
    for (Scalar& z : v) z = scalar(field);
    return v;
  }

  DenseOperator matrix(std::size_t rows, std::size_t cols, Field field) {
    DenseOperator m(rows, cols, field);
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t j = 0; j < cols; ++j) m(i, j) = scalar(field);
    return m;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace tvskit::testing

#endif  // TVSKIT_TESTS_SUPPORT_HPP
