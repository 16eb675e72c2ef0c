#include "smlat/lattice_file.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace smlat {

namespace {

using nlohmann::json;

const std::set<std::string> kExpectedKeys{"min", "min0", "root_count", "aut_order", "root_system", "c_vector"};
const std::set<std::string> kProvenance{"stated", "computed"};

[[noreturn]] void bad(const std::string& path, const std::string& what) { throw InputError(path + ": " + what); }

IntMat parse_matrix(const json& j, const std::string& path, const std::string& field) {
  if (!j.is_array() || j.empty()) bad(path, field + " must be a non-empty array of rows");
  const std::size_t n = j.size();
  IntMat m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!j[r].is_array() || j[r].size() != n) bad(path, field + " must be square");
    for (std::size_t c = 0; c < n; ++c) {
      const json& x = j[r][c];
      if (!x.is_number_integer()) bad(path, field + " entries must be JSON integers");
      m(r, c) = Int(x.get<long>());
    }
  }
  return m;
}

std::string canonical_value(const json& v, const std::string& path, const std::string& key) {
  if (v.is_number_integer()) return std::to_string(v.get<long>());
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (key == "min0") {
      Rat r;
      if (r.set_str(s, 10) != 0) bad(path, "min0 must be a rational string like \"2/3\"");
      r.canonicalize();
      return r.get_str();
    }
    return s;
  }
  if (v.is_array()) {
    std::string out = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (i) out += ", ";
      if (v[i].is_number_integer()) {
        out += std::to_string(v[i].get<long>());
      } else if (v[i].is_string()) {
        Rat r;
        if (r.set_str(v[i].get<std::string>(), 10) != 0) bad(path, key + " entries must be integers or rational strings");
        r.canonicalize();
        out += r.get_str();
      } else {
        bad(path, key + " entries must be integers or rational strings");
      }
    }
    return out + "]";
  }
  bad(path, key + " has an unsupported value type (floats are not accepted)");
}

}  // namespace

bool LatticeFile::has_flag(const std::string& f) const {
  return std::find(known_flags.begin(), known_flags.end(), f) != known_flags.end();
}

const ExpectedValue* LatticeFile::find(const std::string& key) const {
  auto it = expected.find(key);
  return it == expected.end() ? nullptr : &it->second;
}

LatticeFile parse_lattice_file(const std::string& text, const std::string& path) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(path, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) bad(path, "top level must be an object");
  LatticeFile f;
  f.path = path;
  if (!j.contains("name") || !j["name"].is_string()) bad(path, "missing string field 'name'");
  f.name = j["name"].get<std::string>();
  if (!j.contains("N") || !j["N"].is_number_integer()) bad(path, "missing integer field 'N'");
  f.N = j["N"].get<int>();
  if (!j.contains("gram")) bad(path, "missing field 'gram'");
  f.gram = parse_matrix(j["gram"], path, "gram");
  if (j.contains("k")) {
    if (!j["k"].is_number_integer()) bad(path, "'k' must be an integer");
    f.k = j["k"].get<long>();
  }
  if (j.contains("expected")) {
    if (!j["expected"].is_object()) bad(path, "'expected' must be an object");
    for (const auto& [key, entry] : j["expected"].items()) {
      if (!kExpectedKeys.count(key)) bad(path, "unknown expected key '" + key + "'");
      if (!entry.is_object() || !entry.contains("value")) bad(path, "expected '" + key + "' needs a value");
      if (!entry.contains("provenance") || !entry["provenance"].is_string() ||
          !kProvenance.count(entry["provenance"].get<std::string>()))
        bad(path, "expected '" + key + "' has no provenance (\"stated\" or \"computed\")");
      f.expected[key] = {canonical_value(entry["value"], path, key), entry["provenance"].get<std::string>()};
    }
  }
  if (j.contains("known_flags")) {
    if (!j["known_flags"].is_array()) bad(path, "'known_flags' must be an array of strings");
    for (const auto& x : j["known_flags"]) {
      if (!x.is_string()) bad(path, "'known_flags' must be an array of strings");
      f.known_flags.push_back(x.get<std::string>());
    }
  }
  if (j.contains("candidate_gram")) f.candidate_gram = parse_matrix(j["candidate_gram"], path, "candidate_gram");
  return f;
}

LatticeFile load_lattice_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(path + ": cannot open");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_lattice_file(ss.str(), path);
}

std::vector<LatticeFile> load_corpus(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw InputError(dir + ": not a directory");
  std::vector<std::string> paths;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") paths.push_back(e.path().string());
  std::sort(paths.begin(), paths.end());
  std::vector<LatticeFile> out;
  for (const auto& p : paths) out.push_back(load_lattice_file(p));
  return out;
}

}  // namespace smlat
