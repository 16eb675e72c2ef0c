#include <algorithm>
#include <set>

#include "smlat/lattice.hpp"

namespace smlat {

RatVec diagonalize(const RatMat& gram) {
  if (!is_symmetric(gram)) throw MathError("diagonalize: form is not symmetric");
  RatMat a = gram;
  const std::size_t n = a.rows();
  RatVec diag;
  for (std::size_t k = 0; k < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t j = k + 1;
      while (j < n && a(j, j) == 0) ++j;
      if (j < n) {
        a.swap_rows(k, j);
        a.swap_cols(k, j);
      } else {
        j = k + 1;
        while (j < n && a(k, j) == 0) ++j;
        if (j == n) throw MathError("diagonalize: degenerate form");
        // e_k <- e_k + e_j makes the pivot 2 a_kj
        for (std::size_t c = 0; c < n; ++c) a(k, c) += a(j, c);
        for (std::size_t r = 0; r < n; ++r) a(r, k) += a(r, j);
      }
    }
    const Rat piv = a(k, k);
    diag.push_back(piv);
    for (std::size_t i = k + 1; i < n; ++i) {
      if (a(i, k) == 0) continue;
      Rat f = a(i, k) / piv;
      for (std::size_t j = k; j < n; ++j) a(i, j) -= f * a(k, j);
      for (std::size_t j = k; j < n; ++j) a(j, i) = a(i, j);
    }
  }
  return diag;
}

std::vector<long> prime_divisors(Int n) {
  n = abs(n);
  std::vector<long> ps;
  for (long p = 2; n > 1; ++p) {
    if (Int(p) * p > n) {
      if (!n.fits_slong_p()) throw InfrastructureError("prime_divisors: cofactor too large to factor");
      ps.push_back(n.get_si());
      break;
    }
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
      ps.push_back(p);
      while (mpz_divisible_ui_p(n.get_mpz_t(), p)) n /= p;
    }
  }
  return ps;
}

namespace {

Int square_class(const Rat& x) {
  Int v = x.get_num() * x.get_den();
  Int sign = v < 0 ? -1 : 1;
  v = abs(v);
  Int out = 1;
  for (long p : prime_divisors(v)) {
    int e = 0;
    while (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
      v /= p;
      ++e;
    }
    if (e % 2) out *= p;
  }
  return sign * out;
}

int odd_eps(const Int& u) {  // (u-1)/2 mod 2
  Int r = mod_pos(u, 4);
  return r == 3 ? 1 : 0;
}

int odd_omega(const Int& u) {  // (u^2-1)/8 mod 2
  Int r = mod_pos(u, 8);
  return (r == 3 || r == 5) ? 1 : 0;
}

}  // namespace

int hilbert_symbol(const Rat& a, const Rat& b, long p) {
  if (a == 0 || b == 0) throw MathError("hilbert_symbol: arguments must be nonzero");
  if (p == 0) return (a < 0 && b < 0) ? -1 : 1;
  if (p < 2) throw MathError("hilbert_symbol: invalid place");
  // a ~ num*den modulo squares
  Int u = a.get_num() * a.get_den();
  Int v = b.get_num() * b.get_den();
  int alpha = 0, beta = 0;
  while (mpz_divisible_ui_p(u.get_mpz_t(), p)) {
    u /= p;
    ++alpha;
  }
  while (mpz_divisible_ui_p(v.get_mpz_t(), p)) {
    v /= p;
    ++beta;
  }
  if (p == 2) {
    int e = odd_eps(u) * odd_eps(v) + alpha * odd_omega(v) + beta * odd_omega(u);
    return e % 2 ? -1 : 1;
  }
  Int P(p);
  int s = 1;
  if ((static_cast<long>(alpha) * beta * ((p - 1) / 2)) % 2) s = -s;
  if (beta % 2) s *= mpz_legendre(u.get_mpz_t(), P.get_mpz_t());
  if (alpha % 2) s *= mpz_legendre(v.get_mpz_t(), P.get_mpz_t());
  return s;
}

RationalClass rational_class(const RatMat& gram, const std::vector<long>& extra_primes) {
  RatVec d = diagonalize(gram);
  Rat det = 1;
  for (const auto& x : d) det *= x;
  RationalClass rc;
  rc.dim = d.size();
  rc.det_class = square_class(det);
  std::set<long> primes(extra_primes.begin(), extra_primes.end());
  primes.insert(2);
  for (long p : prime_divisors(det.get_num())) primes.insert(p);
  for (long p : prime_divisors(det.get_den())) primes.insert(p);
  for (long p : prime_divisors(common_denominator(gram))) primes.insert(p);
  int product = 1;
  for (long p : primes) {
    int c = 1;
    for (std::size_t i = 0; i < d.size(); ++i)
      for (std::size_t j = i + 1; j < d.size(); ++j) c *= hilbert_symbol(d[i], d[j], p);
    rc.hasse[p] = c;
    product *= c;
  }
  int real = 1;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (std::size_t j = i + 1; j < d.size(); ++j) real *= hilbert_symbol(d[i], d[j], 0);
  if (product * real != 1) throw std::logic_error("rational_class: Hasse invariants violate the product formula");
  return rc;
}

RationalClass rational_class(const Lattice& L) { return rational_class(to_rat(L.gram())); }

bool is_rationally_equivalent(const Lattice& a, const Lattice& b) {
  if (a.dim() != b.dim()) return false;
  std::vector<long> primes = prime_divisors(a.det());
  for (long p : prime_divisors(b.det())) primes.push_back(p);
  return rational_class(to_rat(a.gram()), primes) == rational_class(to_rat(b.gram()), primes);
}

}  // namespace smlat
