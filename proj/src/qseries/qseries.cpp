#include "smlat/qseries.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>
#include <vector>

namespace smlat {

QSeries QSeries::monomial(long grid, const Rat& c, long prec) {
  QSeries s(prec);
  if (grid < prec && c != 0) s.terms_[grid] = c;
  return s;
}

void QSeries::require_known(long grid) const {
  if (grid >= prec_)
    throw InfrastructureError("q-series coefficient at grid " + std::to_string(grid) + " requested beyond precision " +
                              std::to_string(prec_));
}

Rat QSeries::coeff(long grid) const {
  require_known(grid);
  auto it = terms_.find(grid);
  return it == terms_.end() ? Rat(0) : it->second;
}

void QSeries::add_term(long grid, const Rat& c) {
  if (grid >= prec_) return;
  Rat& slot = terms_[grid];
  slot += c;
  if (slot == 0) terms_.erase(grid);
}

std::optional<long> QSeries::valuation() const {
  if (terms_.empty()) return std::nullopt;
  return terms_.begin()->first;
}

std::pair<long, Rat> QSeries::leading() const {
  if (terms_.empty()) throw MathError("leading term of a zero series (below precision " + std::to_string(prec_) + ")");
  return *terms_.begin();
}

QSeries QSeries::truncated(long prec) const {
  QSeries s(std::min(prec, prec_));
  for (const auto& [g, c] : terms_)
    if (g < s.prec_) s.terms_.emplace(g, c);
  return s;
}

QSeries QSeries::operator-() const { return scaled(-1); }

QSeries operator+(const QSeries& a, const QSeries& b) {
  QSeries s(std::min(a.prec_, b.prec_));
  for (const auto& [g, c] : a.terms_) s.add_term(g, c);
  for (const auto& [g, c] : b.terms_) s.add_term(g, c);
  return s;
}

QSeries operator-(const QSeries& a, const QSeries& b) { return a + (-b); }

QSeries operator*(const QSeries& a, const QSeries& b) {
  // a zero series is only known to vanish below its precision
  const long va = a.terms_.empty() ? a.prec_ : a.terms_.begin()->first;
  const long vb = b.terms_.empty() ? b.prec_ : b.terms_.begin()->first;
  QSeries s(std::min(a.prec_ + vb, b.prec_ + va));
  std::map<long, Rat> acc;
  for (const auto& [ga, ca] : a.terms_) {
    if (ga + vb >= s.prec_) break;
    for (const auto& [gb, cb] : b.terms_) {
      const long g = ga + gb;
      if (g >= s.prec_) break;
      acc[g] += ca * cb;
    }
  }
  for (auto& [g, c] : acc)
    if (c != 0) s.terms_.emplace(g, std::move(c));
  return s;
}

QSeries QSeries::scaled(const Rat& c) const {
  QSeries s(prec_);
  if (c == 0) return s;
  for (const auto& [g, x] : terms_) s.terms_.emplace(g, x * c);
  return s;
}

QSeries QSeries::dilated(long factor) const {
  if (factor <= 0) throw std::invalid_argument("dilated: factor must be positive");
  QSeries s(prec_ == std::numeric_limits<long>::max() ? prec_ : prec_ * factor);
  // below prec_*factor every coefficient at a non-multiple of factor is zero
  for (const auto& [g, x] : terms_) s.terms_.emplace(g * factor, x);
  return s;
}

QSeries QSeries::inverse() const {
  auto [v, c] = leading();
  const long rel = prec_ - v;  // relative precision
  // b * (a q^{-v}) = 1 with a q^{-v} = c + ..., solved offset by offset
  std::vector<Rat> b(static_cast<std::size_t>(rel));
  std::vector<std::pair<long, Rat>> tail;
  for (const auto& [g, x] : terms_)
    if (g > v) tail.emplace_back(g - v, x);
  const Rat inv_c = 1 / c;
  for (long t = 0; t < rel; ++t) {
    Rat acc = t == 0 ? Rat(1) : Rat(0);
    for (const auto& [off, x] : tail) {
      if (off > t) break;
      acc -= x * b[static_cast<std::size_t>(t - off)];
    }
    b[static_cast<std::size_t>(t)] = acc * inv_c;
  }
  QSeries s(rel - v);
  for (long t = 0; t < rel; ++t)
    if (b[static_cast<std::size_t>(t)] != 0) s.terms_.emplace(t - v, b[static_cast<std::size_t>(t)]);
  return s;
}

QSeries QSeries::pow(long k) const {
  if (k < 0) return inverse().pow(-k);
  if (k == 0) return QSeries::one(std::numeric_limits<long>::max() / 4);
  QSeries base = *this;
  std::optional<QSeries> result;
  while (k > 0) {
    if (k & 1) result = result ? *result * base : base;
    k >>= 1;
    if (k) base = base * base;
  }
  return *result;
}

bool agree(const QSeries& a, const QSeries& b) {
  const long p = std::min(a.prec_, b.prec_);
  auto ta = a.truncated(p), tb = b.truncated(p);
  return ta.terms_ == tb.terms_;
}

std::string exponent_string(long grid) {
  long g = std::gcd(std::labs(grid), kGrid);
  if (g == 0) g = kGrid;
  long num = grid / g, den = kGrid / g;
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

std::string power_of_q(long grid) {
  if (grid == 0) return "";
  if (grid == kGrid) return "q";
  std::string e = exponent_string(grid);
  if (grid % kGrid == 0 && grid > 0) return "q^" + e;
  return "q^(" + e + ")";
}

}  // namespace

std::string QSeries::to_string(std::optional<long> up_to) const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [g, c] : terms_) {
    if (up_to && g > *up_to) break;
    Rat mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    std::string q = power_of_q(g);
    if (q.empty()) {
      os << mag.get_str();
    } else if (mag == 1) {
      os << q;
    } else if (mag.get_den() == 1) {
      os << mag.get_str() << q;
    } else {
      os << "(" << mag.get_str() << ")" << q;
    }
  }
  long cutoff = up_to ? std::min(prec_, *up_to + 1) : prec_;
  if (first) os << "0";
  if (cutoff < std::numeric_limits<long>::max() / 8) os << " + O(" << (cutoff == 0 ? std::string("1") : power_of_q(cutoff)) << ")";
  return os.str();
}

QSeries qs_add(const QSeries& a, const QSeries& b) { return a + b; }
QSeries qs_mul(const QSeries& a, const QSeries& b) { return a * b; }
QSeries qs_pow(const QSeries& a, long k) { return a.pow(k); }
QSeries qs_scale(const QSeries& a, const Rat& c) { return a.scaled(c); }
std::pair<long, Rat> leading(const QSeries& a) { return a.leading(); }

}  // namespace smlat
