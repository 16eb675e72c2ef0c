#include "smlat/modular.hpp"

#include <algorithm>
#include <map>

namespace smlat {

namespace {

// prod_{j>=1} (1 - x^j) up to degree deg, by the pentagonal number theorem
std::vector<Int> euler_product(long deg) {
  std::vector<Int> p(static_cast<std::size_t>(deg) + 1, 0);
  p[0] = 1;
  for (long k = 1;; ++k) {
    const long a = k * (3 * k - 1) / 2, b = k * (3 * k + 1) / 2;
    if (a > deg) break;
    const int sign = k % 2 ? -1 : 1;
    p[static_cast<std::size_t>(a)] += sign;
    if (b <= deg) p[static_cast<std::size_t>(b)] += sign;
  }
  return p;
}

// f^e for f with f[0] = 1 and integer e, up to the length of f (J.C.P. Miller recurrence)
std::vector<Int> series_power(const std::vector<Int>& f, long e) {
  const std::size_t n = f.size();
  std::vector<Int> g(n, 0);
  if (n == 0) return g;
  g[0] = 1;
  std::vector<std::size_t> support;
  for (std::size_t k = 1; k < n; ++k)
    if (f[k] != 0) support.push_back(k);
  Int acc, term;
  for (std::size_t m = 1; m < n; ++m) {
    acc = 0;
    for (std::size_t k : support) {
      if (k > m) break;
      term = (e + 1) * static_cast<long>(k) - static_cast<long>(m);
      acc += term * f[k] * g[m - k];
    }
    mpz_divexact_ui(g[m].get_mpz_t(), acc.get_mpz_t(), m);
  }
  return g;
}

long grid_of(const Rat& x) {
  if (x.get_den() != 1) throw std::logic_error("exponent off the q^(1/24) grid");
  return x.get_num().get_si();
}

int sigma1_of(int n) {
  int s = 0;
  for (int d : divisors(n)) s += d;
  return s;
}

Rat frac(long a, long b) {
  Rat r(a, b);
  r.canonicalize();
  return r;
}

// k sigma1(N)/4 for odd N, k sigma1(N/2)/2 for even N: the leading exponent of s1^k
Rat s1_power_exponent(const ModParams& p, long k) {
  return p.ev ? frac(k * sigma1_of(p.N / 2), 2) : frac(k * p.sigma1, 4);
}

Rat pow2(long e) {
  Rat r = 1;
  for (long i = 0; i < std::labs(e); ++i) r *= 2;
  return e < 0 ? Rat(1) / r : r;
}

}  // namespace

long EtaQuotient::valuation_grid() const {
  Rat v = 0;
  for (const auto& f : factors) v += 2 * f.mult * f.exponent;
  return grid_of(v);
}

EtaQuotient& EtaQuotient::times(const EtaQuotient& other) {
  for (const auto& f : other.factors) {
    auto it = std::find_if(factors.begin(), factors.end(), [&](const EtaFactor& g) { return g.mult == f.mult; });
    if (it == factors.end())
      factors.push_back(f);
    else
      it->exponent += f.exponent;
  }
  factors.erase(std::remove_if(factors.begin(), factors.end(), [](const EtaFactor& f) { return f.exponent == 0; }),
                factors.end());
  prefactor *= other.prefactor;
  return *this;
}

EtaQuotient EtaQuotient::dilated(const Rat& factor) const {
  EtaQuotient q = *this;
  for (auto& f : q.factors) {
    f.mult *= factor;
    if (f.mult.get_den() > 2) throw std::invalid_argument("eta quotient: argument multiplier leaves (1/2)Z");
  }
  return q;
}

EtaQuotient EtaQuotient::pow(long e) const {
  EtaQuotient q;
  q.prefactor = 1;
  for (long i = 0; i < std::labs(e); ++i) q.prefactor *= prefactor;
  if (e < 0) q.prefactor = 1 / q.prefactor;
  for (const auto& f : factors) q.factors.push_back({f.mult, f.exponent * e});
  q.factors.erase(std::remove_if(q.factors.begin(), q.factors.end(), [](const EtaFactor& f) { return f.exponent == 0; }),
                  q.factors.end());
  return q;
}

QSeries EtaQuotient::expand(long prec) const {
  const long v = valuation_grid();
  const long R = prec - v;  // relative precision
  if (R <= 0) return QSeries(prec);
  std::vector<Int> acc(static_cast<std::size_t>(R), 0);
  acc[0] = 1;
  for (const auto& f : factors) {
    if (f.mult <= 0 || f.mult.get_den() > 2) throw std::invalid_argument("eta quotient: bad argument multiplier");
    // eta(m z) = q^(m/12) prod (1 - q^(2 m j)); on the grid q^(2mj) is 48 m j
    const long step = grid_of(48 * f.mult);
    const long deg = (R - 1) / step;
    std::vector<Int> g = series_power(euler_product(deg), f.exponent);
    std::vector<Int> next(acc.size(), 0);
    for (long j = 0; j <= deg; ++j) {
      const Int& gj = g[static_cast<std::size_t>(j)];
      if (gj == 0) continue;
      for (long t = j * step; t < R; ++t) next[static_cast<std::size_t>(t)] += gj * acc[static_cast<std::size_t>(t - j * step)];
    }
    acc.swap(next);
  }
  QSeries s(prec);
  for (long t = 0; t < R; ++t)
    if (acc[static_cast<std::size_t>(t)] != 0) s.add_term(v + t, prefactor * Rat(acc[static_cast<std::size_t>(t)]));
  if (prefactor != 0 && (s.is_zero() || s.leading().first != v))
    throw std::logic_error("eta quotient: expansion does not start at the predicted valuation");
  return s;
}

QSeries eta_expansion(const Rat& mult, long prec) {
  EtaQuotient q;
  q.factors.push_back({mult, 1});
  return q.expand(prec);
}

EtaQuotient eta_level(int N, const Rat& mult, long exponent) {
  EtaQuotient q;
  for (int d : divisors(N)) q.times(EtaQuotient{{{mult * d, exponent}}, 1});
  return q;
}

namespace {

EtaQuotient s1_level2() {
  EtaQuotient q{{{Rat(1), 5}, {Rat(4), 2}, {frac(1, 2), -2}, {Rat(2), -3}}, 2};
  return q;
}

// eta(z/2) eta(2z)^2 / (eta(z)^2 eta(4z)), whose 8th power is -16 s2^(2)
EtaQuotient q_level2() { return EtaQuotient{{{frac(1, 2), 1}, {Rat(2), 2}, {Rat(1), -2}, {Rat(4), -1}}, 1}; }

void require_level(int N) { ModParams::for_level(N); }

}  // namespace

EtaQuotient g2_quotient(int N) {
  const auto p = ModParams::for_level(N);
  EtaQuotient q;
  if (!p.ev) {
    q.times(eta_level(N, frac(1, 2), p.s)).times(eta_level(N, 2, p.s)).times(eta_level(N, 1, -2 * p.s));
  } else {
    const int h = N / 2;
    q.times(eta_level(h, frac(1, 2), p.s)).times(eta_level(h, 4, p.s)).times(eta_level(h, 1, -p.s)).times(
        eta_level(h, 2, -p.s));
  }
  return q;
}

EtaQuotient s1_quotient(int N) {
  const auto p = ModParams::for_level(N);
  if (!p.ev) {
    EtaQuotient q = eta_level(N, 2, 2);
    q.times(eta_level(N, 1, -1));
    q.prefactor = pow2(p.sigma0);
    return q;
  }
  EtaQuotient q = s1_level2();
  if (N != 2) q.times(s1_level2().dilated(Rat(N / 2)));
  return q;
}

int s2_root_sign(int N) {
  require_level(N);
  return -1;
}

EtaQuotient s2_quotient(int N) {
  const auto p = ModParams::for_level(N);
  if (!p.ev) {
    EtaQuotient q = eta_level(N, 1, p.s);
    q.times(eta_level(N, 2, -p.s));
    q.prefactor = -pow2(-static_cast<long>(p.s) * p.sigma0 / 2);
    return q;
  }
  if (N == 2) {
    EtaQuotient q = q_level2().pow(8);
    q.prefactor = frac(-1, 16);
    return q;
  }
  // (s2^(2)(z) s2^(2)(N/2 z))^(s(N)/8) = +-(1/256)^(s/8) (Q(z) Q(N/2 z))^s
  EtaQuotient base = q_level2();
  base.times(q_level2().dilated(Rat(N / 2)));
  EtaQuotient q = base.pow(p.s);
  q.prefactor = s2_root_sign(N) * (p.s == 2 ? frac(1, 4) : frac(1, 2));
  return q;
}

QSeries g1(int N, long prec) {
  const auto p = ModParams::for_level(N);
  QSeries s = theta_series(c_n(N), prec);
  if (prec > 2 * kGrid && (s.coeff(0) != 1 || s.coeff(kGrid) != 2 || s.coeff(2 * kGrid) != 2 * p.ev))
    throw std::logic_error("g1: expansion does not start 1 + 2q + 2 ev(N) q^2");
  return s;
}

QSeries g2(int N, long prec) {
  const auto p = ModParams::for_level(N);
  QSeries s = g2_quotient(N).expand(prec);
  if (s.leading() != std::pair<long, Rat>{kGrid, 1} || (prec > 2 * kGrid && s.coeff(2 * kGrid) != -p.s))
    throw std::logic_error("g2: expansion does not start q - s q^2");
  return s;
}

QSeries s1(int N, long prec) {
  const auto p = ModParams::for_level(N);
  const EtaQuotient q = s1_quotient(N);
  // odd N: q^(sigma1(N)/4); even N: q^(sigma1(N/2)/2)
  const long lead = p.ev ? kGrid * sigma1_of(N / 2) / 2 : kGrid * p.sigma1 / 4;
  QSeries s = q.expand(prec);
  if (q.valuation_grid() != lead) throw std::logic_error("s1: unexpected leading exponent");
  return s;
}

QSeries s2(int N, long prec) {
  const auto p = ModParams::for_level(N);
  const EtaQuotient q = s2_quotient(N);
  const long lead = p.ev ? -kGrid : -2 * kGrid;
  QSeries s = q.expand(prec);
  if (q.valuation_grid() != lead) throw std::logic_error("s2: unexpected leading exponent");
  return s;
}

Rat M(int N, long m, long k) {
  const auto p = ModParams::for_level(N);
  Rat r = s1_power_exponent(p, k) - (p.ev ? m : 2 * m);
  return r / N;
}

long shadow_level(int N, long k, const Rat& min0) {
  const auto p = ModParams::for_level(N);
  Rat m = s1_power_exponent(p, k) - N * min0;
  if (!p.ev) m /= 2;
  if (m.get_den() != 1 || m < 0)
    throw MathError("shadow minimum " + to_string(min0) + " is not M(" + std::to_string(N) + ", m, " +
                    std::to_string(k) + ") for any integer m >= 0 (m would be " + to_string(m) + ")");
  return m.get_num().get_si();
}

long extremal_bound(int N, long n) {
  const auto p = ModParams::for_level(N);
  return 2 + 2 * ((n * p.sigma1) / (24L * p.sigma0));
}

long root_count_formula(int N, long k) {
  const auto p = ModParams::for_level(N);
  return 2 * k * (p.s + p.ev - (k + 1));
}

int kmax(int N) { return ModParams::for_level(N).kmax; }
int nmax(int N) { return ModParams::for_level(N).nmax; }

long top_index(int N, long k) {
  Rat x = ModParams::for_level(N).lN * k;
  return floor_div(x.get_num(), x.get_den()).get_si();
}

Rat m_from_shadow_exponent(int N, long k, long grid) {
  const auto p = ModParams::for_level(N);
  Rat m = s1_power_exponent(p, k) - frac(grid, kGrid);
  if (!p.ev) m /= 2;
  return m;
}

DecompResult decompose_series(const QSeries& theta, int N, long k, long prec) {
  const long top = top_index(N, k);
  const long P = std::max(prec, kGrid * (top + 2));
  if (theta.prec() < P)
    throw InfrastructureError("decomposition needs the theta series below grid " + std::to_string(P));
  DecompResult dr;
  dr.N = N;
  dr.k = k;
  dr.prec = P;
  QSeries h = theta.truncated(P) * g1(N, P).pow(k).inverse();
  const QSeries base = g2(N, P);
  QSeries power = QSeries::one(P);
  for (long i = 0; i <= top; ++i) {
    Rat ci = h.coeff(kGrid * i);
    dr.c.push_back(ci);
    if (ci != 0) {
      h = h - power.scaled(ci);
      dr.m_structural = i;
    }
    power = power * base;
  }
  if (!h.is_zero()) {
    auto [g, x] = h.leading();
    throw MathError("theta series is not in the span of g1^k g2^i (i <= " + std::to_string(top) +
                    "): residual starts " + to_string(x) + " q^(" + exponent_string(g) + ")");
  }
  return dr;
}

DecompResult decompose_theta(const Lattice& L, int N, long prec, std::uint64_t cap) {
  const auto p = ModParams::for_level(N);
  if (L.dim() % static_cast<std::size_t>(p.sigma0) != 0)
    throw MathError("dimension " + std::to_string(L.dim()) + " is not a multiple of sigma0(" + std::to_string(N) + ")");
  const long k = static_cast<long>(L.dim()) / p.sigma0;
  const long P = std::max(prec, kGrid * (top_index(N, k) + 2));
  return decompose_series(theta_series(L, P, cap), N, k, P);
}

QSeries theta_prediction(const std::vector<Rat>& c, int N, long k, long prec) {
  const long W = prec + kGrid;
  const QSeries b = g2(N, W);
  QSeries sum(W), power = QSeries::one(W);
  for (const auto& ci : c) {
    if (ci != 0) sum = sum + power.scaled(ci);
    power = power * b;
  }
  QSeries out = g1(N, W).pow(k) * sum;
  if (out.prec() < prec) throw std::logic_error("theta_prediction: precision lost");
  return out.truncated(prec);
}

QSeries shadow_prediction(const std::vector<Rat>& c, int N, long k, long prec) {
  // work in relative precision: every factor is expanded just far enough past its valuation
  const long top = static_cast<long>(c.size()) - 1;
  const EtaQuotient q1 = s1_quotient(N), q2 = s2_quotient(N);
  const long v1 = q1.valuation_grid(), v2 = q2.valuation_grid();
  const long vs = std::min(0L, top * v2);
  const long R = prec - k * v1 - vs;
  if (R <= 0) return QSeries(prec);
  const QSeries b = q2.expand(v2 + R);
  QSeries sum(vs + R), power = QSeries::one(R);
  for (const auto& ci : c) {
    if (ci != 0) sum = sum + power.scaled(ci);
    power = power * b;
  }
  QSeries out = q1.expand(v1 + R).pow(k) * sum;
  if (out.prec() < prec) throw std::logic_error("shadow_prediction: precision lost");
  return out.truncated(prec);
}

QSeries shadow_prediction(DecompResult& dr, long prec) {
  QSeries s = shadow_prediction(dr.c, dr.N, dr.k, prec);
  if (!s.is_zero()) {
    dr.shadow_leading = s.leading().first;
    dr.m_shadow = m_from_shadow_exponent(dr.N, dr.k, *dr.shadow_leading);
  }
  return s;
}

namespace {

std::optional<SeriesDefect> defect(const QSeries& s, bool zero_term_exempt) {
  for (const auto& [g, c] : s.terms()) {
    if (c.get_den() != 1) return SeriesDefect{g, c, "non-integral"};
    if (c < 0) return SeriesDefect{g, c, "negative"};
    if (!(zero_term_exempt && g == 0) && mpz_odd_p(c.get_num().get_mpz_t())) return SeriesDefect{g, c, "odd"};
  }
  return std::nullopt;
}

}  // namespace

std::optional<SeriesDefect> theta_defect(const QSeries& s) {
  if (s.is_zero() || s.leading() != std::pair<long, Rat>{0, 1}) {
    Rat c0 = s.is_zero() ? Rat(0) : s.coeff(0);
    return SeriesDefect{0, c0, "constant term is not 1"};
  }
  return defect(s, true);
}

std::optional<SeriesDefect> shadow_defect(const QSeries& s) { return defect(s, true); }

}  // namespace smlat
