#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smlat/lattice.hpp"
#include "smlat/qseries.hpp"

namespace smlat {

inline constexpr std::uint64_t kDefaultVectorCap = 100'000'000;

/// Too many vectors below the requested bound.
class EnumerationOverflow : public InfrastructureError {
 public:
  EnumerationOverflow(const Rat& bound, std::uint64_t cap);
  const Rat& bound() const { return bound_; }

 private:
  Rat bound_;
};

struct EnumOptions {
  bool keep_vectors = false;
  bool include_zero = false;
  std::uint64_t max_vectors = kDefaultVectorCap;
};

/// Norm-bucketed vector counts; with keep_vectors, the vectors themselves in
/// canonical (lexicographic) order. Coordinates are in the basis of the
/// enumerated lattice, multiplied by `coord_denominator` for cosets.
struct VectorList {
  std::map<Rat, std::uint64_t> counts;
  std::int64_t coord_denominator = 1;
  std::vector<std::vector<std::int64_t>> vectors;
  std::vector<Rat> norms;  // parallel to `vectors`

  std::uint64_t total() const;
  std::uint64_t count(const Rat& norm) const;
};

VectorList short_vectors(const Lattice& L, const Rat& bound, const EnumOptions& opts = {});
VectorList coset_short_vectors(const Coset& C, const Rat& bound, const EnumOptions& opts = {});

/// Least nonzero norm.
Int minimum(const Lattice& L);
/// Least norm over the shadow (0 when L is even). `start` seeds the doubling search.
Rat min0_shadow(const Lattice& L, std::optional<Rat> start = std::nullopt, std::uint64_t cap = kDefaultVectorCap);

/// Theta series of L below grid exponent prec.
QSeries theta_series(const Lattice& L, long prec, std::uint64_t cap = kDefaultVectorCap);
/// Theta series of sqrt(scale) * C: exponent of v is scale * (v,v).
QSeries coset_theta(const Coset& C, long prec, long scale = 1, std::uint64_t cap = kDefaultVectorCap);

struct RootComponent {
  char family = 'A';  // 'A', 'D' or 'E'
  int rank = 0;
  std::uint64_t roots = 0;

  std::string name() const;
  friend bool operator==(const RootComponent&, const RootComponent&) = default;
};

struct RootSystem {
  std::vector<RootComponent> components;  // sorted: rank descending, then E, D, A
  int total_rank = 0;
  std::uint64_t total_roots = 0;

  /// e.g. "D4 ⊥ A1⁴"; "0" for the empty system.
  std::string to_string() const;
  /// e.g. "D4+A1^4"
  std::string to_ascii() const;
};

std::uint64_t root_count(const Lattice& L);
/// Throws MathError for a component whose (rank, count) matches no ADE type.
RootSystem root_system(const Lattice& L);
/// ADE type from (rank, number of roots) of an irreducible root system.
std::optional<RootComponent> classify_component(int rank, std::uint64_t roots);

}  // namespace smlat
