#ifndef TVSKIT_DENSE_OPERATOR_HPP
#define TVSKIT_DENSE_OPERATOR_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "tvskit/error.hpp"
#include "tvskit/scalar.hpp"

namespace tvskit {

using Vector = std::vector<Scalar>;

// An m x n matrix over R or C, row-major. The desk-scale bounded operator.
class DenseOperator {
 public:
  DenseOperator() = default;

  DenseOperator(std::size_t rows, std::size_t cols, Field field = Field::real)
      : rows_(rows), cols_(cols), field_(field), data_(rows * cols) {}

  DenseOperator(std::size_t rows, std::size_t cols, std::vector<Scalar> data, Field field)
      : rows_(rows), cols_(cols), field_(field), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw Error(ErrorKind::invalid_input, "matrix data size mismatch");
    for (Scalar z : data_) check_field(field_, z);
  }

  static DenseOperator from_rows(const std::vector<std::vector<Scalar>>& rows, Field field) {
    if (rows.empty()) return DenseOperator(0, 0, field);
    const std::size_t cols = rows.front().size();
    std::vector<Scalar> data;
    data.reserve(rows.size() * cols);
    for (const auto& row : rows) {
      if (row.size() != cols) throw Error(ErrorKind::invalid_input, "matrix rows differ in length");
      data.insert(data.end(), row.begin(), row.end());
    }
    return DenseOperator(rows.size(), cols, std::move(data), field);
  }

  static DenseOperator real(std::initializer_list<std::initializer_list<double>> rows) {
    std::vector<std::vector<Scalar>> out;
    for (const auto& row : rows) out.emplace_back(row.begin(), row.end());
    return from_rows(out, Field::real);
  }

  static DenseOperator identity(std::size_t n) {
    DenseOperator out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = 1.0;
    return out;
  }

  static DenseOperator diagonal(const std::vector<Scalar>& d) {
    Field field = Field::real;
    for (Scalar z : d) {
      if (z.imag() != 0.0) field = Field::complex;
    }
    DenseOperator out(d.size(), d.size(), field);
    for (std::size_t i = 0; i < d.size(); ++i) out(i, i) = d[i];
    return out;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Field field() const { return field_; }
  bool is_square() const { return rows_ == cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  std::span<const Scalar> data() const { return data_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Scalar operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  Vector row(std::size_t i) const { return Vector(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_); }
  Vector column(std::size_t j) const {
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
  }

  DenseOperator adjoint() const {
    DenseOperator out(cols_, rows_, field_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
  }

  Vector apply(std::span<const Scalar> v) const {
    if (v.size() != cols_) throw Error(ErrorKind::invalid_input, "operator/vector dimension mismatch");
    Vector out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      Scalar sum{};
      const Scalar* r = &data_[i * cols_];
      for (std::size_t j = 0; j < cols_; ++j) sum += r[j] * v[j];
      out[i] = sum;
    }
    return out;
  }

  double max_abs() const {
    double m = 0.0;
    for (Scalar z : data_) m = std::max(m, std::abs(z));
    return m;
  }

  double frobenius() const {
    double scale = max_abs();
    if (scale == 0.0) return 0.0;
    double sum = 0.0;
    for (Scalar z : data_) sum += std::norm(z / scale);
    return scale * std::sqrt(sum);
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](Scalar z) { return z == Scalar{}; });
  }

  DenseOperator& operator*=(Scalar alpha) {
    if (alpha.imag() != 0.0) field_ = Field::complex;
    for (Scalar& z : data_) z *= alpha;
    return *this;
  }

  friend DenseOperator operator*(Scalar alpha, DenseOperator a) { return a *= alpha; }

  friend DenseOperator operator+(const DenseOperator& a, const DenseOperator& b) { return combine(a, b, 1.0); }
  friend DenseOperator operator-(const DenseOperator& a, const DenseOperator& b) { return combine(a, b, -1.0); }

  friend DenseOperator operator*(const DenseOperator& a, const DenseOperator& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorKind::invalid_input, "operator product dimension mismatch");
    DenseOperator out(a.rows_, b.cols_, join(a.field_, b.field_));
    for (std::size_t i = 0; i < a.rows_; ++i) {
      Scalar* o = &out.data_[i * b.cols_];
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const Scalar aik = a(i, k);
        if (aik == Scalar{}) continue;
        const Scalar* r = &b.data_[k * b.cols_];
        for (std::size_t j = 0; j < b.cols_; ++j) o[j] += aik * r[j];
      }
    }
    return out;
  }

  friend bool operator==(const DenseOperator& a, const DenseOperator& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  static DenseOperator combine(const DenseOperator& a, const DenseOperator& b, double sign) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw Error(ErrorKind::invalid_input, "operator shape mismatch");
    DenseOperator out(a.rows_, a.cols_, join(a.field_, b.field_));
    for (std::size_t k = 0; k < a.data_.size(); ++k) out.data_[k] = a.data_[k] + sign * b.data_[k];
    return out;
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  Field field_ = Field::real;
  std::vector<Scalar> data_;
};

namespace detail {

// Row echelon form by Gaussian elimination with partial (row) pivoting.
// Entries with modulus <= tol are treated as zero when choosing pivots.
struct Echelon {
  DenseOperator reduced;
  std::vector<std::size_t> pivot_cols;
  std::size_t rank() const { return pivot_cols.size(); }
};

inline Echelon row_echelon(DenseOperator m, double tol) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t best = r;
    double best_mod = std::abs(m(r, c));
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      if (std::abs(m(i, c)) > best_mod) {
        best = i;
        best_mod = std::abs(m(i, c));
      }
    }
    if (best_mod <= tol) {
      for (std::size_t i = r; i < m.rows(); ++i) m(i, c) = 0.0;
      continue;
    }
    if (best != r)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(r, j), m(best, j));
    const Scalar piv = m(r, c);
    for (std::size_t i = r + 1; i < m.rows(); ++i) {
      const Scalar f = m(i, c) / piv;
      if (f == Scalar{}) continue;
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= f * m(r, j);
      m(i, c) = 0.0;
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

// Back substitution on an echelon form with the given free-column values.
inline Vector back_substitute(const Echelon& e, std::span<const Scalar> rhs_in_last_col, Vector x) {
  const DenseOperator& m = e.reduced;
  for (std::size_t k = e.rank(); k-- > 0;) {
    const std::size_t c = e.pivot_cols[k];
    Scalar sum = rhs_in_last_col.empty() ? Scalar{} : rhs_in_last_col[k];
    for (std::size_t j = c + 1; j < x.size(); ++j) sum -= m(k, j) * x[j];
    x[c] = sum / m(k, c);
  }
  return x;
}

// A unit vector in ker(m), or nullopt when the numerical rank is full.
inline std::optional<Vector> kernel_vector(const DenseOperator& m, double tol) {
  Echelon e = row_echelon(m, tol);
  if (e.rank() == m.cols()) return std::nullopt;
  std::size_t free_col = 0;
  for (std::size_t c = 0, k = 0; c < m.cols(); ++c) {
    if (k < e.rank() && e.pivot_cols[k] == c) {
      ++k;
    } else {
      free_col = c;
      break;
    }
  }
  Vector x(m.cols());
  x[free_col] = 1.0;
  // Zero every other free column: back substitution only touches pivots.
  x = back_substitute(e, {}, std::move(x));
  double n = 0.0;
  for (Scalar z : x) n += std::norm(z);
  n = std::sqrt(n);
  for (Scalar& z : x) z /= n;
  return x;
}

// Solves a x = b for square a via LU with partial pivoting; nullopt when a
// pivot falls to <= tol.
inline std::optional<DenseOperator> solve(const DenseOperator& a, const DenseOperator& b, double tol) {
  const std::size_t n = a.rows();
  DenseOperator aug(n, n + b.cols(), join(a.field(), b.field()));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) aug(i, n + j) = b(i, j);
  }
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t best = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::abs(aug(i, c)) > std::abs(aug(best, c))) best = i;
    if (std::abs(aug(best, c)) <= tol) return std::nullopt;
    if (best != c)
      for (std::size_t j = 0; j < aug.cols(); ++j) std::swap(aug(c, j), aug(best, j));
    for (std::size_t i = c + 1; i < n; ++i) {
      const Scalar f = aug(i, c) / aug(c, c);
      if (f == Scalar{}) continue;
      for (std::size_t j = c; j < aug.cols(); ++j) aug(i, j) -= f * aug(c, j);
    }
  }
  DenseOperator x(n, b.cols(), aug.field());
  for (std::size_t col = 0; col < b.cols(); ++col) {
    for (std::size_t i = n; i-- > 0;) {
      Scalar sum = aug(i, n + col);
      for (std::size_t j = i + 1; j < n; ++j) sum -= aug(i, j) * x(j, col);
      x(i, col) = sum / aug(i, i);
    }
  }
  return x;
}

}  // namespace detail

}  // namespace tvskit

#endif  // TVSKIT_DENSE_OPERATOR_HPP
