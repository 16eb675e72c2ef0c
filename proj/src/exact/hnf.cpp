#include "smlat/exact.hpp"

namespace smlat {

namespace {

void row_submul(IntMat& m, std::size_t dst, std::size_t src, const Int& q) {
  if (q == 0) return;
  for (std::size_t j = 0; j < m.cols(); ++j) m(dst, j) -= q * m(src, j);
}

void row_negate(IntMat& m, std::size_t r) {
  for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) = -m(r, j);
}

}  // namespace

// Columns are processed right to left; each pivot lands in the lowest free row,
// so a full-rank square input yields a lower-triangular H.
HnfResult hnf(const IntMat& a) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  HnfResult res{a, IntMat::identity(m)};
  IntMat& H = res.H;
  IntMat& U = res.U;
  std::size_t bottom = m;
  for (std::size_t cc = n; cc-- > 0 && bottom > 0;) {
    const std::size_t p = bottom - 1;
    for (;;) {
      // smallest nonzero |entry| among the free rows becomes the pivot candidate
      std::size_t best = m;
      for (std::size_t i = 0; i < bottom; ++i) {
        if (H(i, cc) == 0) continue;
        if (best == m || abs(H(i, cc)) < abs(H(best, cc))) best = i;
      }
      if (best == m) break;
      H.swap_rows(best, p);
      U.swap_rows(best, p);
      bool done = true;
      for (std::size_t i = 0; i < p; ++i) {
        if (H(i, cc) == 0) continue;
        Int q = floor_div(H(i, cc), H(p, cc));
        row_submul(H, i, p, q);
        row_submul(U, i, p, q);
        if (H(i, cc) != 0) done = false;
      }
      if (done) break;
    }
    if (H(p, cc) == 0) continue;  // no pivot in this column
    if (H(p, cc) < 0) {
      row_negate(H, p);
      row_negate(U, p);
    }
    for (std::size_t i = p + 1; i < m; ++i) {
      Int q = floor_div(H(i, cc), H(p, cc));
      row_submul(H, i, p, q);
      row_submul(U, i, p, q);
    }
    --bottom;
  }
  return res;
}

IntMat integer_kernel(const IntMat& a) {
  HnfResult r = hnf(a);
  std::vector<std::size_t> zero_rows;
  for (std::size_t i = 0; i < r.H.rows(); ++i) {
    bool zero = true;
    for (std::size_t j = 0; j < r.H.cols() && zero; ++j) zero = r.H(i, j) == 0;
    if (zero) zero_rows.push_back(i);
  }
  IntMat k(zero_rows.size(), a.rows());
  for (std::size_t t = 0; t < zero_rows.size(); ++t)
    for (std::size_t j = 0; j < a.rows(); ++j) k(t, j) = r.U(zero_rows[t], j);
  return k;
}

RatMat ScaledBasis::to_rat() const {
  RatMat r = smlat::to_rat(rows);
  for (std::size_t i = 0; i < r.rows(); ++i)
    for (std::size_t j = 0; j < r.cols(); ++j) {
      r(i, j) /= denom;
      r(i, j).canonicalize();
    }
  return r;
}

ScaledBasis ScaledBasis::from_rat(const RatMat& m) {
  ScaledBasis b;
  b.denom = common_denominator(m);
  b.rows = IntMat(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      Rat x = m(i, j) * b.denom;
      b.rows(i, j) = x.get_num();
    }
  return b;
}

namespace {

ScaledBasis normalized(ScaledBasis b) {
  Int g = b.denom;
  for (std::size_t i = 0; i < b.rows.rows(); ++i)
    for (std::size_t j = 0; j < b.rows.cols(); ++j) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), b.rows(i, j).get_mpz_t());
  if (g > 1) {
    b.denom /= g;
    for (std::size_t i = 0; i < b.rows.rows(); ++i)
      for (std::size_t j = 0; j < b.rows.cols(); ++j) b.rows(i, j) /= g;
  }
  return b;
}

void require_full_rank(const ScaledBasis& b, const char* what) {
  if (b.rows.rows() != b.rows.cols())
    throw MathError(std::string(what) + ": generators of rank " + std::to_string(b.rows.rows()) +
                    " do not span a full-rank lattice in dimension " + std::to_string(b.rows.cols()));
}

}  // namespace

ScaledBasis basis_of(const ScaledBasis& generators) {
  HnfResult r = hnf(generators.rows);
  std::size_t first = 0;
  while (first < r.H.rows()) {
    bool zero = true;
    for (std::size_t j = 0; j < r.H.cols() && zero; ++j) zero = r.H(first, j) == 0;
    if (!zero) break;
    ++first;
  }
  ScaledBasis out;
  out.denom = generators.denom;
  out.rows = IntMat(r.H.rows() - first, r.H.cols());
  for (std::size_t i = first; i < r.H.rows(); ++i)
    for (std::size_t j = 0; j < r.H.cols(); ++j) out.rows(i - first, j) = r.H(i, j);
  return normalized(out);
}

ScaledBasis lattice_sum(const ScaledBasis& a, const ScaledBasis& b) {
  if (a.rows.cols() != b.rows.cols()) throw std::invalid_argument("lattice_sum: dimension mismatch");
  require_full_rank(basis_of(a), "lattice_sum");
  require_full_rank(basis_of(b), "lattice_sum");
  Int d;
  mpz_lcm(d.get_mpz_t(), a.denom.get_mpz_t(), b.denom.get_mpz_t());
  Int fa = d / a.denom, fb = d / b.denom;
  ScaledBasis stacked;
  stacked.denom = d;
  stacked.rows = IntMat(a.rows.rows() + b.rows.rows(), a.rows.cols());
  for (std::size_t i = 0; i < a.rows.rows(); ++i)
    for (std::size_t j = 0; j < a.rows.cols(); ++j) stacked.rows(i, j) = a.rows(i, j) * fa;
  for (std::size_t i = 0; i < b.rows.rows(); ++i)
    for (std::size_t j = 0; j < b.rows.cols(); ++j) stacked.rows(a.rows.rows() + i, j) = b.rows(i, j) * fb;
  return basis_of(stacked);
}

ScaledBasis coordinate_dual(const ScaledBasis& a) {
  ScaledBasis basis = basis_of(a);
  require_full_rank(basis, "coordinate_dual");
  RatMat inv = inverse(basis.to_rat()).transpose();
  return basis_of(ScaledBasis::from_rat(inv));
}

ScaledBasis lattice_intersect(const ScaledBasis& a, const ScaledBasis& b) {
  return coordinate_dual(lattice_sum(coordinate_dual(a), coordinate_dual(b)));
}

bool contains(const ScaledBasis& lattice, const RatVec& v) {
  ScaledBasis basis = basis_of(lattice);
  require_full_rank(basis, "contains");
  RatMat inv = inverse(basis.to_rat());
  // v = x * B  =>  x = v * B^{-1}
  for (std::size_t j = 0; j < inv.cols(); ++j) {
    Rat acc = 0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += v[i] * inv(i, j);
    if (acc.get_den() != 1) return false;
  }
  return true;
}

bool contains_all(const ScaledBasis& lattice, const ScaledBasis& other) {
  RatMat r = other.to_rat();
  for (std::size_t i = 0; i < r.rows(); ++i)
    if (!contains(lattice, r.row(i))) return false;
  return true;
}

}  // namespace smlat
