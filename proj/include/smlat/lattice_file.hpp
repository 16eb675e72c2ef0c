#pragma once

// JSON lattice files: one lattice per file, integer Gram matrix, optional expected values
// each tagged with where it comes from ("stated" or "computed").

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smlat/exact.hpp"

namespace smlat {

struct ExpectedValue {
  std::string value;       // canonical text: "2", "2/3", "D4 ⊥ A1⁴", "[1, -4]"
  std::string provenance;  // "stated" or "computed"
};

struct LatticeFile {
  std::string path;
  std::string name;
  int N = 1;
  long k = 0;
  IntMat gram;
  std::map<std::string, ExpectedValue> expected;
  std::vector<std::string> known_flags;
  std::optional<IntMat> candidate_gram;

  bool has_flag(const std::string& f) const;
  const ExpectedValue* find(const std::string& key) const;
};

/// Throws InputError on malformed input: non-integer entries, unknown expected keys,
/// expected values without provenance.
LatticeFile parse_lattice_file(const std::string& text, const std::string& path = "<string>");
LatticeFile load_lattice_file(const std::string& path);
/// Every *.json file of a directory, sorted by file name.
std::vector<LatticeFile> load_corpus(const std::string& dir);

}  // namespace smlat
