// smlat: command-line front end. Exit codes: 0 pass, 1 mathematical failure,
// 2 infrastructure error, 3 bad input.

#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "smlat/genus.hpp"
#include "smlat/modular.hpp"
#include "smlat/verify.hpp"

using namespace smlat;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitFail = 1, kExitInfra = 2, kExitInput = 3;

struct Flags {
  long prec = 0;  // 0: command default
  std::uint64_t max_vectors = kDefaultVectorCap;
  bool skip_aut = false;
  std::vector<long> primes;
  bool json = false;
  bool force = false;
  std::string corpus = SMLAT_DEFAULT_CORPUS;
};

std::string gram_text(const IntMat& g) {
  std::string s = "[";
  for (std::size_t i = 0; i < g.rows(); ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < g.cols(); ++j) s += (j ? ", " : "") + g(i, j).get_str();
    s += "]";
  }
  return s + "]";
}

Json gram_json(const IntMat& g) {
  Json a = Json::array();
  for (std::size_t i = 0; i < g.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < g.cols(); ++j) row.push_back(g(i, j).get_si());
    a.push_back(row);
  }
  return a;
}

Json series_json(const QSeries& s) {
  Json terms = Json::array();
  for (const auto& [g, c] : s.terms()) terms.push_back({{"exponent", exponent_string(g)}, {"coeff", c.get_str()}});
  return {{"text", s.to_string()}, {"known_below", exponent_string(s.prec())}, {"terms", terms}};
}

void emit(const Flags& f, const std::string& text, const Json& j) {
  if (f.json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

Lattice load(const std::string& path, LatticeFile* out = nullptr) {
  LatticeFile f = load_lattice_file(path);
  Lattice L(f.gram);
  if (out) *out = f;
  return L;
}

long prec_or(const Flags& f, long dflt) {
  if (f.prec < 0) throw InputError("--prec must be nonnegative");
  return f.prec ? f.prec : dflt;
}

VerifyOptions verify_options(const Flags& f) {
  VerifyOptions o;
  if (f.prec) o.prec = f.prec;
  o.max_vectors = f.max_vectors;
  o.skip_aut = f.skip_aut;
  return o;
}

int verdict_exit(Verdict v) {
  if (v == Verdict::error) return kExitInfra;
  if (v == Verdict::fail) return kExitFail;
  return 0;
}

int cmd_verify(const Flags& f, const std::string& path) {
  VerifyReport r = verify_lattice(load_lattice_file(path), verify_options(f));
  if (f.json)
    std::cout << r.to_json() << "\n";
  else
    std::cout << r.to_text();
  return verdict_exit(r.overall());
}

int cmd_verify_corpus(const Flags& f) {
  std::vector<VerifyReport> reps;
  for (const auto& file : load_corpus(f.corpus)) reps.push_back(verify_lattice(file, verify_options(f)));
  std::cout << (f.json ? corpus_json(reps) + "\n" : corpus_text(reps));
  Verdict worst = Verdict::pass;
  for (const auto& r : reps) {
    const int e = verdict_exit(r.overall());
    if (e == kExitInfra) worst = Verdict::error;
    if (e == kExitFail && worst != Verdict::error) worst = Verdict::fail;
  }
  return verdict_exit(worst);
}

void require_level(int N) {
  if (!is_admissible_level(N)) throw InputError("level " + std::to_string(N) + " is not one of the ten admissible levels");
}

int cmd_series(const Flags& f, int N, const std::string& which) {
  require_level(N);
  const long prec = prec_or(f, 3 * kGrid);
  QSeries s;
  if (which == "g1")
    s = g1(N, prec);
  else if (which == "g2")
    s = g2(N, prec);
  else if (which == "s1")
    s = s1(N, prec);
  else if (which == "s2")
    s = s2(N, prec);
  else
    throw InputError("series must be one of g1, g2, s1, s2");
  Json j = {{"N", N}, {"series", which}};
  j.update(series_json(s));
  emit(f, which + "(" + std::to_string(N) + ") = " + s.to_string() + "\n", j);
  return 0;
}

int cmd_theta(const Flags& f, const std::string& path) {
  QSeries s = theta_series(load(path), prec_or(f, 6 * kGrid), f.max_vectors);
  emit(f, "theta = " + s.to_string() + "\n", series_json(s));
  return 0;
}

int cmd_shadow(const Flags& f, const std::string& path) {
  LatticeFile file;
  Lattice L = load(path, &file);
  QSeries s = coset_theta(shadow(L), prec_or(f, 6 * kGrid), file.N, f.max_vectors);
  Json j = {{"N", file.N}};
  j.update(series_json(s));
  emit(f, "theta of sqrt(" + std::to_string(file.N) + ") S(L) = " + s.to_string() + "\n", j);
  return 0;
}

int cmd_decompose(const Flags& f, const std::string& path) {
  LatticeFile file;
  Lattice L = load(path, &file);
  const ModParams mp = ModParams::for_level(file.N);
  if (L.dim() % static_cast<std::size_t>(mp.sigma0))
    throw MathError("dimension is not a multiple of sigma0(N) = " + std::to_string(mp.sigma0));
  const long k = static_cast<long>(L.dim()) / mp.sigma0;
  DecompResult dr = decompose_theta(L, file.N, prec_or(f, (top_index(file.N, k) + 2) * kGrid), f.max_vectors);
  shadow_prediction(dr, (top_index(file.N, k) + 4) * kGrid);
  std::ostringstream os;
  Json c = Json::array();
  os << "c = [";
  for (std::size_t i = 0; i < dr.c.size(); ++i) {
    os << (i ? ", " : "") << dr.c[i].get_str();
    c.push_back(dr.c[i].get_str());
  }
  os << "]\nm_structural = " << dr.m_structural << "\n";
  Json j = {{"N", file.N}, {"k", k}, {"c", c}, {"m_structural", dr.m_structural}};
  if (dr.m_shadow) {
    os << "m_shadow = " << dr.m_shadow->get_str() << "\n";
    j["m_shadow"] = dr.m_shadow->get_str();
  }
  if (dr.shadow_leading) {
    os << "shadow leading exponent = " << exponent_string(*dr.shadow_leading) << "\n";
    j["shadow_leading"] = exponent_string(*dr.shadow_leading);
  }
  emit(f, os.str(), j);
  return 0;
}

int cmd_table(const Flags& f) {
  std::ostringstream os;
  Json rows = Json::array();
  for (int N : admissible_levels()) {
    const ModParams p = ModParams::for_level(N);
    os << "N=" << N << ": σ1=" << p.sigma1 << ", k_max=" << p.kmax << ", n_max=" << p.nmax << "\n";
    rows.push_back({{"N", N}, {"sigma1", p.sigma1}, {"k_max", p.kmax}, {"n_max", p.nmax}});
  }
  emit(f, os.str(), rows);
  return 0;
}

int cmd_classify(const Flags& f, int N, long k) {
  require_level(N);
  GenusLimits lim;
  lim.primes = f.primes;
  lim.force = f.force;
  ClassifyResult r = classify_long_shadow(N, k, lim);
  std::vector<LatticeFile> corpus;
  try {
    corpus = load_corpus(f.corpus);
  } catch (const InputError&) {
  }

  std::ostringstream os;
  os << "classify N=" << N << " k=" << k << ": " << r.seeds.size() << " seeds, " << r.genus.classes.size()
     << " classes at primes";
  Json primes = Json::array();
  for (long p : r.genus.primes) os << " " << p, primes.push_back(p);
  os << (r.genus.complete ? "" : " (incomplete)") << "\n";
  os << "rejected: " << r.rejected_min << " by minimum, " << r.rejected_min0 << " by shadow minimum, "
     << r.rejected_strong << " not strongly modular\n";
  os << "survivors: " << r.survivors.size() << "\n";
  Json surv = Json::array();
  for (const Lattice& L : r.survivors) {
    std::string match;
    for (const auto& file : corpus) {
      if (file.N != N || file.gram.rows() != L.dim()) continue;
      if (isometric(L, Lattice(file.gram)).isometric) match = file.name;
      if (file.candidate_gram && isometric(L, Lattice(*file.candidate_gram)).isometric)
        match = file.name + " candidate";
      if (!match.empty()) break;
    }
    const RootSystem rs = root_system(L);
    os << "  min " << minimum(L).get_str() << ", roots " << rs.to_string() << ", gram " << gram_text(L.gram());
    if (!match.empty()) os << "  isometric to corpus " << match;
    os << "\n";
    surv.push_back({{"gram", gram_json(L.gram())},
                    {"min", minimum(L).get_si()},
                    {"root_system", rs.to_string()},
                    {"corpus_match", match}});
  }
  Json notes = Json::array();
  for (const auto& n : r.genus.notes) os << "note: " << n << "\n", notes.push_back(n);
  emit(f, os.str(),
       {{"N", N},
        {"k", k},
        {"seeds", r.seeds.size()},
        {"classes", r.genus.classes.size()},
        {"primes", primes},
        {"complete", r.genus.complete},
        {"rejected_min", r.rejected_min},
        {"rejected_min0", r.rejected_min0},
        {"rejected_strong", r.rejected_strong},
        {"survivors", surv},
        {"notes", notes}});
  return 0;
}

int cmd_isometric(const Flags& f, const std::string& a, const std::string& b) {
  Lattice A = load(a), B = load(b);
  if (A.dim() != B.dim()) {
    emit(f, "not isometric: dimension " + std::to_string(A.dim()) + " vs " + std::to_string(B.dim()) + "\n",
         {{"isometric", false}, {"witness", "dimension"}});
    return 0;
  }
  IsoCertificate c = isometric(A, B);
  if (c.isometric)
    emit(f, "isometric; U with U^T G_B U = G_A: " + gram_text(*c.map) + "\n",
         {{"isometric", true}, {"map", gram_json(*c.map)}});
  else
    emit(f, "not isometric: " + c.witness + "\n", {{"isometric", false}, {"witness", c.witness}});
  return 0;
}

int cmd_aut(const Flags& f, const std::string& path) {
  AutGroup a = aut_order(load(path));
  emit(f, "order " + a.order.get_str() + " (" + std::to_string(a.generators.size()) + " generators)\n",
       {{"order", a.order.get_str()}, {"generators", a.generators.size()}});
  return 0;
}

int cmd_roots(const Flags& f, const std::string& path) {
  RootSystem rs = root_system(load(path));
  emit(f, rs.to_string() + " (" + std::to_string(rs.total_roots) + " roots)\n",
       {{"root_system", rs.to_string()}, {"roots", rs.total_roots}, {"rank", rs.total_rank}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"smlat: strongly modular lattices with long shadow"};
  app.require_subcommand(1);
  Flags f;
  auto common = [&](CLI::App* c, bool prec = true) {
    if (prec) c->add_option("--prec", f.prec, "precision on the q^(1/24) grid (exclusive)");
    c->add_option("--max-vectors", f.max_vectors, "enumeration cap");
    c->add_flag("--json", f.json, "machine-readable output");
  };
  std::string file, file2, which;
  int N = 0;
  long k = 0;

  auto* verify = app.add_subcommand("verify", "run every check on one lattice file");
  verify->add_option("file", file)->required();
  verify->add_flag("--skip-aut", f.skip_aut);
  common(verify);
  auto* vcorpus = app.add_subcommand("verify-corpus", "verify every lattice file of the corpus");
  vcorpus->add_option("dir", f.corpus, "corpus directory");
  vcorpus->add_flag("--skip-aut", f.skip_aut);
  common(vcorpus);
  auto* series = app.add_subcommand("series", "expansion of g1, g2, s1 or s2 at level N");
  series->add_option("N", N)->required();
  series->add_option("which", which)->required();
  common(series);
  auto* theta = app.add_subcommand("theta", "theta series of a lattice");
  theta->add_option("file", file)->required();
  common(theta);
  auto* shad = app.add_subcommand("shadow", "theta series of the rescaled shadow sqrt(N) S(L)");
  shad->add_option("file", file)->required();
  common(shad);
  auto* decomp = app.add_subcommand("decompose", "coefficients c_i of theta in the g1, g2 basis");
  decomp->add_option("file", file)->required();
  common(decomp);
  auto* table = app.add_subcommand("table", "sigma1, k_max and n_max for the ten levels");
  common(table, false);
  auto* classify = app.add_subcommand("classify", "long-shadow lattices of level N and dimension k sigma0(N)");
  classify->add_option("N", N)->required();
  classify->add_option("k", k)->required();
  classify->add_option("--prime", f.primes, "neighbor prime (repeatable)");
  classify->add_flag("--force", f.force, "run above the default dimension limit");
  classify->add_option("--corpus", f.corpus, "corpus directory for matching");
  common(classify, false);
  auto* iso = app.add_subcommand("isometric", "decide isometry of two lattice files");
  iso->add_option("file1", file)->required();
  iso->add_option("file2", file2)->required();
  common(iso, false);
  auto* aut = app.add_subcommand("aut", "order of the automorphism group");
  aut->add_option("file", file)->required();
  common(aut, false);
  auto* roots = app.add_subcommand("roots", "ADE type of the root sublattice");
  roots->add_option("file", file)->required();
  common(roots, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*verify) return cmd_verify(f, file);
    if (*vcorpus) return cmd_verify_corpus(f);
    if (*series) return cmd_series(f, N, which);
    if (*theta) return cmd_theta(f, file);
    if (*shad) return cmd_shadow(f, file);
    if (*decomp) return cmd_decompose(f, file);
    if (*table) return cmd_table(f);
    if (*classify) return cmd_classify(f, N, k);
    if (*iso) return cmd_isometric(f, file, file2);
    if (*aut) return cmd_aut(f, file);
    if (*roots) return cmd_roots(f, file);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const InfrastructureError& e) {
    std::cerr << "infrastructure error: " << e.what() << "\n";
    return kExitInfra;
  } catch (const MathError& e) {
    std::cerr << "mathematical failure: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitInput;
}
