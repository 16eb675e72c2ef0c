#pragma once

// Truncated Laurent series in q on the q^(1/24) grid, with exact rational coefficients.
// A series is known for every grid exponent below prec(); `grid` always means 24 * exponent.

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "smlat/exact.hpp"

namespace smlat {

inline constexpr long kGrid = 24;

class QSeries {
 public:
  QSeries() = default;
  /// The zero series, known below `prec`.
  explicit QSeries(long prec) : prec_(prec) {}
  static QSeries monomial(long grid, const Rat& c, long prec);
  static QSeries one(long prec) { return monomial(0, 1, prec); }

  long prec() const { return prec_; }
  /// Throws InfrastructureError for grid >= prec().
  Rat coeff(long grid) const;
  void add_term(long grid, const Rat& c);
  const std::map<long, Rat>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  /// First exponent with a nonzero coefficient; nullopt for the zero series.
  std::optional<long> valuation() const;
  /// Least-exponent nonzero term; throws MathError for the zero series.
  std::pair<long, Rat> leading() const;
  QSeries truncated(long prec) const;

  QSeries operator-() const;
  friend QSeries operator+(const QSeries& a, const QSeries& b);
  friend QSeries operator-(const QSeries& a, const QSeries& b);
  friend QSeries operator*(const QSeries& a, const QSeries& b);
  QSeries scaled(const Rat& c) const;
  /// Substitute q -> q^factor.
  QSeries dilated(long factor) const;
  QSeries inverse() const;
  QSeries pow(long k) const;

  /// Coefficient-wise equality below min(prec).
  friend bool agree(const QSeries& a, const QSeries& b);

  /// "1 + 24q^2 + ... + O(q^(25/3))": exponents as reduced fractions.
  std::string to_string(std::optional<long> up_to = std::nullopt) const;

 private:
  void require_known(long grid) const;

  long prec_ = 0;
  std::map<long, Rat> terms_;
};

QSeries qs_add(const QSeries& a, const QSeries& b);
QSeries qs_mul(const QSeries& a, const QSeries& b);
QSeries qs_pow(const QSeries& a, long k);
QSeries qs_scale(const QSeries& a, const Rat& c);
std::pair<long, Rat> leading(const QSeries& a);

/// grid exponent g printed as a reduced fraction g/24
std::string exponent_string(long grid);

}  // namespace smlat
