#pragma once

// Isometry testing and automorphism groups by backtracking over short vectors.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "smlat/enumerate.hpp"
#include "smlat/lattice.hpp"

namespace smlat {

inline constexpr std::uint64_t kDefaultNodeCap = 1'000'000'000;

/// The backtrack exceeded its node cap; the question is left open, never answered wrongly.
class IsometryUndecided : public InfrastructureError {
 public:
  explicit IsometryUndecided(std::uint64_t cap);
};

struct IsoOptions {
  std::uint64_t node_cap = kDefaultNodeCap;
  std::uint64_t max_vectors = kDefaultVectorCap;
  /// Compare cheap invariants before the backtrack.
  bool screen = true;
  /// Theta prefix compared by the invariant screen (norms <= this bound).
  long screen_norm = 4;
};

struct IsoCertificate {
  bool isometric = false;
  /// U with U^T gram(B) U = gram(A); columns are images of A's basis in B-coordinates.
  std::optional<IntMat> map;
  /// For non-isometric pairs: the first distinguishing invariant.
  std::string witness;
  std::uint64_t nodes = 0;
};

IsoCertificate isometric(const Lattice& A, const Lattice& B, const IsoOptions& opts = {});

/// Isometry tests against a fixed lattice A, with A's short vectors, base and screening
/// invariants computed once. test(B) answers exactly as isometric(A, B, opts).
class IsometryTester {
 public:
  explicit IsometryTester(const Lattice& A, const IsoOptions& opts = {});
  ~IsometryTester();
  IsometryTester(IsometryTester&&) noexcept;
  IsometryTester& operator=(IsometryTester&&) noexcept;

  const Lattice& lattice() const;
  IsoCertificate test(const Lattice& B) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct AutGroup {
  std::vector<IntMat> generators;  // each g satisfies g^T G g = G
  Int order;
  /// Order of the group generated by `generators`, recomputed by random Schreier-Sims.
  Int order_check;
  std::uint64_t nodes = 0;
};

/// Throws std::logic_error when the two order computations disagree.
AutGroup aut_order(const Lattice& L, const IsoOptions& opts = {});

bool is_automorphism(const Lattice& L, const IntMat& g);

}  // namespace smlat
