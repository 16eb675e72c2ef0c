#include <algorithm>

#include "smlat/isometry.hpp"
#include "smlat/lattice.hpp"

namespace smlat {

bool StrongModularityReport::strongly_modular() const {
  return !entries.empty() && std::all_of(entries.begin(), entries.end(), [](const Entry& e) { return e.isometric; });
}

StrongModularityReport is_strongly_modular(const Lattice& L, int N) {
  if (!is_admissible_level(N)) throw MathError("level " + std::to_string(N) + " is not admissible");
  StrongModularityReport rep;
  for (int m : divisors(N)) {
    StrongModularityReport::Entry e;
    e.m = m;
    try {
      const Lattice dual_m = rescaled_partial_dual(L, m);
      const IsoCertificate cert = isometric(L, dual_m);
      e.isometric = cert.isometric;
      e.note = cert.isometric ? "isometric" : cert.witness;
    } catch (const MathError& err) {
      e.note = err.what();
    }
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

}  // namespace smlat
