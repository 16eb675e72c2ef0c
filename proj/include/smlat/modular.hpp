#pragma once

// Eta quotients and the bases g1, g2 (theta side) and s1, s2 (shadow side) for the
// levels N in {1,2,3,5,6,7,11,14,15,23}, the decomposition of a theta series in
// the g-basis, and the closed-form quantities attached to a level.

#include <optional>
#include <string>
#include <vector>

#include "smlat/enumerate.hpp"
#include "smlat/lattice.hpp"
#include "smlat/qseries.hpp"

namespace smlat {

/// eta(mult * z) with mult in (1/2)Z, exactly, known below grid `prec`.
QSeries eta_expansion(const Rat& mult, long prec);

struct EtaFactor {
  Rat mult;  // argument multiplier, denominator 1 or 2
  long exponent = 0;
};

/// prefactor * prod eta(mult_i z)^exponent_i
struct EtaQuotient {
  std::vector<EtaFactor> factors;
  Rat prefactor = 1;

  /// q-valuation on the grid: 2 * sum mult_i * exponent_i.
  long valuation_grid() const;
  /// Expansion known below `prec`; checks that its leading exponent is valuation_grid().
  QSeries expand(long prec) const;

  EtaQuotient& times(const EtaQuotient& other);
  /// Substitute z -> factor * z.
  EtaQuotient dilated(const Rat& factor) const;
  EtaQuotient pow(long e) const;
};

/// eta^(N)(mult * z) = prod_{d | N} eta(d * mult * z)
EtaQuotient eta_level(int N, const Rat& mult, long exponent = 1);

EtaQuotient g2_quotient(int N);
EtaQuotient s1_quotient(int N);
/// For N = 6 and 14 the root of (s2^(2)(z) s2^(2)(N/2 z)) is taken with the given sign of its leading coefficient.
EtaQuotient s2_quotient(int N);

/// Theta series of C_N, by enumeration.
QSeries g1(int N, long prec);
QSeries g2(int N, long prec);
QSeries s1(int N, long prec);
QSeries s2(int N, long prec);

/// Sign of the leading coefficient of s2 at N = 6, 14 (see s2_quotient).
int s2_root_sign(int N);

/// Closed-form quantities.
Rat M(int N, long m, long k);
/// The m >= 0 with M(N, m, k) = min0; throws MathError if there is none.
long shadow_level(int N, long k, const Rat& min0);
long extremal_bound(int N, long n);
long root_count_formula(int N, long k);
int kmax(int N);
int nmax(int N);
/// floor(k * l_N): the largest index in the decomposition.
long top_index(int N, long k);

struct DecompResult {
  int N = 1;
  long k = 0;
  std::vector<Rat> c;
  long m_structural = 0;                // largest i with c_i != 0
  std::optional<Rat> m_shadow;          // from the predicted shadow's leading exponent
  std::optional<long> shadow_leading;   // grid exponent of that leading term
  long prec = 0;
};

/// Solve theta = g1^k * sum_i c_i g2^i for i <= top_index(N, k); throws MathError when
/// the residual below `prec` does not vanish.
DecompResult decompose_series(const QSeries& theta, int N, long k, long prec);
/// decompose_series applied to the theta series of L (k = dim / sigma0(N)).
DecompResult decompose_theta(const Lattice& L, int N, long prec, std::uint64_t cap = kDefaultVectorCap);

/// g1^k * sum c_i g2^i below prec.
QSeries theta_prediction(const std::vector<Rat>& c, int N, long k, long prec);
/// s1^k * sum c_i s2^i below prec (exponents of the rescaled shadow sqrt(N) S(L)).
QSeries shadow_prediction(const std::vector<Rat>& c, int N, long k, long prec);
/// Fills m_shadow / shadow_leading of dr from shadow_prediction.
QSeries shadow_prediction(DecompResult& dr, long prec);

/// m recovered from the grid exponent of the shadow's leading term (may be non-integral).
Rat m_from_shadow_exponent(int N, long k, long grid);

/// Coefficient-level sanity of a predicted theta / shadow series.
struct SeriesDefect {
  long grid = 0;
  Rat coeff;
  std::string kind;  // "non-integral", "negative", "odd"
};
/// First defect of a theta series (constant term 1, other coefficients even nonnegative integers).
std::optional<SeriesDefect> theta_defect(const QSeries& s);
/// First defect of a shadow series (nonnegative integers, even away from exponent 0).
std::optional<SeriesDefect> shadow_defect(const QSeries& s);

}  // namespace smlat
