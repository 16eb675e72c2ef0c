#pragma once

// The per-lattice verifier behind `smlat verify`: every quantitative claim about a
// long-shadow lattice, computed exactly and compared with the file's expected block.

#include <optional>
#include <string>
#include <vector>

#include "smlat/isometry.hpp"
#include "smlat/lattice_file.hpp"

namespace smlat {

enum class Verdict { pass, fail, known_flag, skipped, error };

std::string to_string(Verdict v);

struct CheckRecord {
  std::string name;      // stable identifier, also used by known_flags
  std::string computed;
  std::string expected;  // empty when nothing is expected
  Verdict verdict = Verdict::pass;
  std::string claim;     // the statement being checked, in words
};

struct VerifyOptions {
  /// Theta and shadow comparisons cover grid exponents below this (481 = through q^20).
  long prec = 20 * kGrid + 1;
  std::uint64_t max_vectors = kDefaultVectorCap;
  bool skip_aut = false;
  IsoOptions iso;
};

struct VerifyReport {
  std::string file;
  std::string name;
  int N = 1;
  std::size_t dim = 0;
  long k = 0;
  std::vector<CheckRecord> checks;
  /// For files carrying a candidate Gram: the same checks run on the candidate.
  std::vector<CheckRecord> candidate_checks;

  bool any(Verdict v) const;
  /// error > fail > known-flag > pass
  Verdict overall() const;
  std::string to_text() const;
  std::string to_json(int indent = 2) const;
};

VerifyReport verify_lattice(const LatticeFile& f, const VerifyOptions& opts = {});

/// Text and JSON of a set of reports plus a summary line.
std::string corpus_text(const std::vector<VerifyReport>& reports);
std::string corpus_json(const std::vector<VerifyReport>& reports);

}  // namespace smlat
