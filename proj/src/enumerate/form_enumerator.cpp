#include "form_enumerator.hpp"

#include <algorithm>
#include <cmath>
#include <type_traits>

namespace smlat::detail {

namespace {

using i128 = __int128;

i128 to_i128(const Int& x) {
  Int a = abs(x);
  Int hi, lo;
  mpz_tdiv_q_2exp(hi.get_mpz_t(), a.get_mpz_t(), 64);
  mpz_tdiv_r_2exp(lo.get_mpz_t(), a.get_mpz_t(), 64);
  unsigned __int128 v = (static_cast<unsigned __int128>(mpz_get_ui(hi.get_mpz_t())) << 64) | mpz_get_ui(lo.get_mpz_t());
  i128 r = static_cast<i128>(v);
  return x < 0 ? -r : r;
}

// Arithmetic shims so one template body serves __int128 and mpz_class.
inline i128 convert(const Int& x, i128*) { return to_i128(x); }
inline Int convert(const Int& x, Int*) { return x; }

inline i128 isqrt_t(i128 r) {
  i128 s = static_cast<i128>(std::sqrt(static_cast<long double>(r)));
  while (s > 0 && s * s > r) --s;
  while ((s + 1) * (s + 1) <= r) ++s;
  return s;
}
inline Int isqrt_t(const Int& r) { return isqrt(r); }

inline i128 floor_div_t(i128 a, i128 b) {  // b > 0
  i128 q = a / b;
  if (a % b != 0 && a < 0) --q;
  return q;
}
inline Int floor_div_t(const Int& a, const Int& b) { return floor_div(a, b); }
inline i128 ceil_div_t(i128 a, i128 b) { return -floor_div_t(-a, b); }
inline Int ceil_div_t(const Int& a, const Int& b) { return ceil_div(a, b); }
inline i128 mod_t(i128 a, i128 m) {
  i128 r = a % m;
  return r < 0 ? r + m : r;
}
inline Int mod_t(const Int& a, const Int& m) { return mod_pos(a, m); }
inline std::int64_t to_i64(i128 x) { return static_cast<std::int64_t>(x); }
inline std::int64_t to_i64(const Int& x) { return x.get_si(); }
inline double log2_abs(const Int& x) { return x == 0 ? 0.0 : static_cast<double>(mpz_sizeinbase(x.get_mpz_t(), 2)); }

}  // namespace

FormEnumerator::FormEnumerator(const IntMat& form, const Int& modulus, const IntVec& residues)
    : n_(form.rows()), modulus_(modulus) {
  if (modulus <= 0) throw std::invalid_argument("FormEnumerator: modulus must be positive");
  if (residues.size() != n_) throw std::invalid_argument("FormEnumerator: residue vector has wrong length");
  LllResult red = lll_reduce(form);
  reduced_ = red.gram;
  transform_ = red.U;
  // residues in the reduced frame: w' = U^{-1} w
  if (std::all_of(residues.begin(), residues.end(), [&](const Int& r) { return mod_pos(r, modulus_) == 0; })) {
    residues_.assign(n_, Int(0));
  } else {
    IntMat uinv = to_int(inverse(transform_));
    residues_ = uinv.apply(residues);
    for (auto& r : residues_) r = mod_pos(r, modulus_);
  }

  // Bareiss rows
  delta_.assign(n_ + 1, Int(1));
  rows_.assign(n_, IntVec(n_));
  IntMat a = reduced_;
  Int prev = 1;
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t j = 0; j < n_; ++j) rows_[k][j] = a(k, j);
    delta_[k + 1] = a(k, k);
    for (std::size_t i = k + 1; i < n_; ++i)
      for (std::size_t j = k + 1; j < n_; ++j) {
        a(i, j) = a(i, j) * a(k, k) - a(i, k) * a(k, j);
        mpz_divexact(a(i, j).get_mpz_t(), a(i, j).get_mpz_t(), prev.get_mpz_t());
      }
    prev = a(k, k);
  }
  // diagonal of the inverse in floating point; it only sizes the arithmetic, with slack
  std::vector<std::vector<double>> m(n_, std::vector<double>(2 * n_, 0.0));
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) m[i][j] = reduced_(i, j).get_d();
    m[i][n_ + i] = 1;
  }
  for (std::size_t k = 0; k < n_; ++k) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == k) continue;
      const double f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < 2 * n_; ++j) m[i][j] -= f * m[k][j];
    }
  }
  coord_scale_.resize(n_);
  for (std::size_t j = 0; j < n_; ++j) coord_scale_[j] = 1.01 * std::sqrt(std::abs(m[j][n_ + j] / m[j][j]));
}

bool FormEnumerator::fits_int128(const Int& bound) const {
  const double logK = log2_abs(bound + 1);
  const double logD = log2_abs(modulus_);
  double worst = 0;
  std::vector<double> logx(n_);
  for (std::size_t j = 0; j < n_; ++j) logx[j] = std::log2(coord_scale_[j] + 1e-300) + 0.5 * logK + logD + 2;
  for (std::size_t i = 0; i < n_; ++i) {
    worst = std::max(worst, log2_abs(delta_[i]) + log2_abs(delta_[i + 1]) + logK + 2);
    double lb = log2_abs(delta_[i + 1]) + std::max(0.0, logx[i]);
    for (std::size_t j = i + 1; j < n_; ++j) lb = std::max(lb, log2_abs(rows_[i][j]) + std::max(0.0, logx[j]));
    lb += std::log2(static_cast<double>(n_) + 1);
    worst = std::max(worst, 2 * lb + 2);
  }
  return worst < 120;
}

FormEnumerator::Output FormEnumerator::run(const Int& bound, bool include_zero, bool keep_vectors,
                                           std::uint64_t cap) const {
  if (bound < 0) return Output{};
  if (!bound.fits_slong_p()) throw InfrastructureError("enumeration bound too large");
  if (fits_int128(bound)) return run_impl<i128>(bound, include_zero, keep_vectors, cap);
  return run_impl<Int>(bound, include_zero, keep_vectors, cap);
}

template <class T>
FormEnumerator::Output FormEnumerator::run_impl(const Int& bound_in, bool include_zero, bool keep_vectors,
                                                std::uint64_t cap) const {
  const std::size_t n = n_;
  Output out;
  // dense counts while the bound is small, flushed into the map at the end
  const std::int64_t kmax = bound_in.get_si();
  std::vector<std::uint64_t> dense(kmax < (1 << 22) ? static_cast<std::size_t>(kmax) + 1 : 0, 0);
  if (n == 0) {
    if (include_zero) {
      out.histogram[0] = 1;
      out.total = 1;
      if (keep_vectors) {
        out.vectors.emplace_back();
        out.values.push_back(0);
      }
    }
    return out;
  }
  T* tag = nullptr;
  const T K = convert(bound_in, tag);
  const T D = convert(modulus_, tag);
  std::vector<T> delta(n + 1), res(n);
  std::vector<std::vector<T>> a(n, std::vector<T>(n));
  for (std::size_t i = 0; i <= n; ++i) delta[i] = convert(delta_[i], tag);
  for (std::size_t i = 0; i < n; ++i) {
    res[i] = convert(residues_[i], tag);
    for (std::size_t j = 0; j < n; ++j) a[i][j] = convert(rows_[i][j], tag);
  }
  std::vector<T> x(n), hi(n), b(n), P(n + 1);
  P[n] = 0;
  std::vector<std::vector<std::int64_t>> raw;

  auto setup = [&](std::size_t i) -> bool {
    T bi = 0;
    for (std::size_t j = i + 1; j < n; ++j) bi += a[i][j] * x[j];
    b[i] = bi;
    T R = delta[i] * (delta[i + 1] * K - P[i + 1]);
    if (R < 0) return false;
    T s = isqrt_t(R);
    T lo = ceil_div_t(-s - bi, delta[i + 1]);
    hi[i] = floor_div_t(s - bi, delta[i + 1]);
    lo += mod_t(res[i] - lo, D);
    x[i] = lo;
    return lo <= hi[i];
  };

  auto leaf = [&]() {
    const T a00 = delta[1];
    const T& b0 = b[0];
    const T c0 = (b0 * b0 + P[1]) / a00;
    for (T t = x[0]; t <= hi[0]; t += D) {
      T val = a00 * t * t + 2 * b0 * t + c0;
      const std::int64_t v = to_i64(val);
      if (v == 0 && !include_zero) continue;
      if (!dense.empty())
        ++dense[static_cast<std::size_t>(v)];
      else
        ++out.histogram[v];
      if (++out.total > cap) throw EnumerationCapExceeded();
      if (keep_vectors) {
        std::vector<std::int64_t> w(n);
        w[0] = to_i64(t);
        for (std::size_t j = 1; j < n; ++j) w[j] = to_i64(x[j]);
        raw.push_back(std::move(w));
        out.values.push_back(v);
      }
    }
  };

  std::size_t i = n - 1;
  if (setup(i)) {
    for (;;) {
      if (x[i] > hi[i]) {
        if (++i == n) break;
        x[i] += D;
        continue;
      }
      if (i == 0) {
        leaf();
        x[0] = hi[0] + 1;
        continue;
      }
      T lin = delta[i + 1] * x[i] + b[i];
      P[i] = (lin * lin + delta[i] * P[i + 1]) / delta[i + 1];
      if (setup(i - 1)) {
        --i;
      } else {
        x[i] += D;
      }
    }
  }

  for (std::size_t v = 0; v < dense.size(); ++v)
    if (dense[v]) out.histogram[static_cast<std::int64_t>(v)] = dense[v];

  if (keep_vectors) {
    std::vector<std::vector<std::int64_t>> U(n, std::vector<std::int64_t>(n));
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) {
        if (!transform_(r, c).fits_slong_p()) throw InfrastructureError("basis transform exceeds 64-bit range");
        U[r][c] = transform_(r, c).get_si();
      }
    std::vector<std::pair<std::vector<std::int64_t>, std::int64_t>> items;
    items.reserve(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
      std::vector<std::int64_t> w(n, 0);
      for (std::size_t r = 0; r < n; ++r) {
        std::int64_t acc = 0;
        for (std::size_t c = 0; c < n; ++c) acc += U[r][c] * raw[k][c];
        w[r] = acc;
      }
      items.emplace_back(std::move(w), out.values[k]);
    }
    std::sort(items.begin(), items.end());
    out.vectors.clear();
    out.values.clear();
    for (auto& [w, v] : items) {
      out.vectors.push_back(std::move(w));
      out.values.push_back(v);
    }
  }
  return out;
}

template FormEnumerator::Output FormEnumerator::run_impl<i128>(const Int&, bool, bool, std::uint64_t) const;
template FormEnumerator::Output FormEnumerator::run_impl<Int>(const Int&, bool, bool, std::uint64_t) const;

}  // namespace smlat::detail
