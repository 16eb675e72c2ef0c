#pragma once

// Kneser p-neighbors and genus exploration.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "smlat/isometry.hpp"
#include "smlat/lattice.hpp"

namespace smlat {

/// A search that would exceed the configured limits; carries a cost estimate instead of running.
class SearchRefused : public InfrastructureError {
 public:
  using InfrastructureError::InfrastructureError;
};

/// Isotropic lines of L/pL, one normalized representative each (first nonzero entry 1).
/// Throws InfrastructureError beyond `cap` lines.
std::vector<IntVec> isotropic_lines(const Lattice& L, long p, std::uint64_t cap = 50'000'000);

/// Smallest odd prime p > after, coprime to det(L), with an isotropic line mod p.
/// Empty when none exists below 100 (only possible in dimension <= 2).
std::optional<long> choose_prime(const Lattice& L, long after = 2);

/// Adjusts v (isotropic mod p) by a multiple of p so that (v, v) = 0 mod p^2.
IntVec lift_isotropic(const Lattice& L, long p, const IntVec& v);

/// The p-neighbor L_v + Z v/p, LLL-reduced. Requires (v, v) = 0 mod p^2 and v not in pL;
/// throws MathError otherwise.
Lattice neighbor(const Lattice& L, long p, const IntVec& v);

struct GenusLimits {
  std::size_t class_cap = 2000;
  std::uint64_t line_cap = 50'000'000;
  /// Reduce the isotropic lines of each class modulo its automorphism group.
  bool use_aut = true;
  IsoOptions iso;
  /// Primes to explore; empty means choose_prime plus the next admissible prime.
  std::vector<long> primes;
  /// classify_long_shadow refuses dimensions above this unless `force` is set.
  std::size_t max_dim = 12;
  bool force = false;
};

struct GenusResult {
  std::vector<Lattice> classes;  // pairwise non-isometric, sorted canonically
  std::vector<long> primes;
  bool complete = true;
  std::uint64_t neighbors = 0;
  std::vector<std::string> notes;
};

/// Breadth-first closure of the seeds under p-neighbors for every prime in `limits.primes`
/// (or the automatic choice), deduplicated up to isometry.
GenusResult enumerate_genus(const std::vector<Lattice>& seeds, const GenusLimits& limits = {});
GenusResult enumerate_genus(const Lattice& seed, long p, GenusLimits limits = {});

/// Integral index-2 overlattices of the even sublattice of L that have det(L) and the
/// rational class of L, up to isometry. L itself is among them.
std::vector<Lattice> parity_seeds(const Lattice& L);

struct ClassifyResult {
  int N = 1;
  long k = 1;
  std::vector<Lattice> seeds;
  GenusResult genus;
  std::vector<Lattice> survivors;
  std::size_t rejected_min = 0, rejected_min0 = 0, rejected_strong = 0;
};

/// Lattices rationally equivalent to C_N^k with det(C_N^k) that are strongly N-modular,
/// have minimum >= 2 and min0 of the shadow equal to M(N, 1, k). Throws SearchRefused
/// when the dimension exceeds limits.max_dim and limits.force is unset.
ClassifyResult classify_long_shadow(int N, long k, const GenusLimits& limits = {});

/// Rough count of isotropic lines per class at the automatically chosen prime.
double isotropic_line_estimate(std::size_t dim, long p);

}  // namespace smlat
