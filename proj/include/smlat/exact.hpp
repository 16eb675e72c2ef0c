#pragma once

// Exact integer / rational linear algebra on top of GMP.

#include <gmpxx.h>

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace smlat {

using Int = mpz_class;
using Rat = mpq_class;
using IntVec = std::vector<Int>;
using RatVec = std::vector<Rat>;

/// Raised when an input violates a mathematical precondition (not PD, not integral, ...).
class MathError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a computation hits a resource cap; never a statement about the mathematics.
class InfrastructureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed user input (files, flags).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  Matrix(std::initializer_list<std::initializer_list<T>> init) {
    rows_ = init.size();
    cols_ = rows_ ? init.begin()->size() : 0;
    data_.reserve(rows_ * cols_);
    for (const auto& row : init) {
      if (row.size() != cols_) throw InputError("ragged matrix literal");
      for (const auto& x : row) data_.push_back(x);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
  }
  std::vector<T> col(std::size_t j) const {
    std::vector<T> c(rows_);
    for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: shape mismatch");
    Matrix c(a.rows_, b.cols_);
    T acc;
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t j = 0; j < b.cols_; ++j) {
        acc = 0;
        for (std::size_t k = 0; k < a.cols_; ++k) acc += a(i, k) * b(k, j);
        c(i, j) = acc;
      }
    return c;
  }
  friend Matrix operator+(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix sum: shape mismatch");
    Matrix c(a);
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
  }
  friend Matrix operator-(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("matrix difference: shape mismatch");
    Matrix c(a);
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] -= b.data_[i];
    return c;
  }
  Matrix scaled(const T& c) const {
    Matrix m(*this);
    for (auto& x : m.data_) x *= c;
    return m;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::vector<T> apply(const std::vector<T>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("matrix-vector: shape mismatch");
    std::vector<T> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
      T acc = 0;
      for (std::size_t j = 0; j < cols_; ++j) acc += (*this)(i, j) * v[j];
      out[i] = acc;
    }
    return out;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using IntMat = Matrix<Int>;
using RatMat = Matrix<Rat>;

RatMat to_rat(const IntMat& m);
/// Throws MathError if some entry is not an integer.
IntMat to_int(const RatMat& m);
bool is_integral(const RatMat& m);
bool is_symmetric(const IntMat& m);
bool is_symmetric(const RatMat& m);

/// Least common multiple of all entry denominators.
Int common_denominator(const RatMat& m);
Int common_denominator(const RatVec& v);

Int det(const IntMat& m);
Rat det(const RatMat& m);
/// Throws MathError on a singular matrix.
RatMat inverse(const RatMat& m);
RatMat inverse(const IntMat& m);
std::size_t rank(const RatMat& m);

/// U * A = H, U unimodular; H in row-style HNF with lower-triangular staircase.
struct HnfResult {
  IntMat H;
  IntMat U;
};
HnfResult hnf(const IntMat& a);

/// Rows of the returned matrix form a basis of { x : x * A = 0 } over the integers.
IntMat integer_kernel(const IntMat& a);

/// A rational lattice as rows / denom. Rows are a basis when square and nonsingular.
struct ScaledBasis {
  Int denom = 1;
  IntMat rows;

  RatMat to_rat() const;
  static ScaledBasis from_rat(const RatMat& m);
  static ScaledBasis from_int(const IntMat& m) { return {1, m}; }
};

/// Square full-rank basis of the lattice spanned by generator rows (HNF, zero rows dropped).
ScaledBasis basis_of(const ScaledBasis& generators);
ScaledBasis lattice_sum(const ScaledBasis& a, const ScaledBasis& b);
ScaledBasis lattice_intersect(const ScaledBasis& a, const ScaledBasis& b);
/// Dual with respect to the standard dot product of the coordinate frame.
ScaledBasis coordinate_dual(const ScaledBasis& a);
bool contains(const ScaledBasis& lattice, const RatVec& v);
bool contains_all(const ScaledBasis& lattice, const ScaledBasis& other);

/// LLL (delta = 3/4) of a positive definite Gram matrix: gram = U^T G U.
struct LllResult {
  IntMat gram;
  IntMat U;
};
LllResult lll_reduce(const IntMat& gram);

/// Positive definiteness via leading principal minors.
bool is_positive_definite(const IntMat& gram);
bool is_positive_definite(const RatMat& gram);

Int floor_div(const Int& a, const Int& b);
Int ceil_div(const Int& a, const Int& b);
Int isqrt(const Int& a);
Int mod_pos(const Int& a, const Int& m);

std::string to_string(const Rat& r);
std::string to_string(const IntMat& m);

}  // namespace smlat
