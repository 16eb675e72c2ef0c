#pragma once

// Enumeration of { w in Z^n : w = r (mod D), w^T A w <= K } for an integral
// positive definite form A. Pruning is exact: with Delta_i the leading minors of
// the (LLL-reduced) form and P_i = Delta_i * Q_i the scaled partial minima,
//
//   Q_i <= K  <=>  (Delta_{i+1} x_i + b_i)^2 <= Delta_i (Delta_{i+1} K - P_{i+1})
//   P_i = ((Delta_{i+1} x_i + b_i)^2 + Delta_i P_{i+1}) / Delta_{i+1}
//
// where b_i = sum_{j>i} a^{(i)}_{ij} x_j uses row i of the fraction-free
// (Bareiss) elimination. Everything is an integer.

#include <cstdint>
#include <map>
#include <vector>

#include "smlat/exact.hpp"

namespace smlat::detail {

class FormEnumerator {
 public:
  FormEnumerator(const IntMat& form, const Int& modulus, const IntVec& residues);

  struct Output {
    std::map<std::int64_t, std::uint64_t> histogram;  // w^T A w -> count
    std::vector<std::vector<std::int64_t>> vectors;  // original frame, sorted
    std::vector<std::int64_t> values;                // parallel to vectors
    std::uint64_t total = 0;
  };

  /// Throws InfrastructureError (via the caller-supplied message) when more than cap vectors qualify.
  Output run(const Int& bound, bool include_zero, bool keep_vectors, std::uint64_t cap) const;

  std::size_t dim() const { return n_; }

 private:
  template <class T>
  Output run_impl(const Int& bound, bool include_zero, bool keep_vectors, std::uint64_t cap) const;
  bool fits_int128(const Int& bound) const;

  std::size_t n_ = 0;
  Int modulus_;
  IntVec residues_;             // in the reduced frame, in [0, modulus)
  IntMat reduced_;              // U^T A U
  IntMat transform_;            // w = U w'
  std::vector<Int> delta_;      // leading minors, delta_[0] = 1
  std::vector<IntVec> rows_;    // rows_[i][j] = a^{(i)}_{ij} for j > i
  std::vector<double> coord_scale_;  // sqrt((A'^{-1})_jj), for magnitude estimates
};

class EnumerationCapExceeded : public std::exception {
 public:
  const char* what() const noexcept override { return "enumeration cap exceeded"; }
};

}  // namespace smlat::detail
