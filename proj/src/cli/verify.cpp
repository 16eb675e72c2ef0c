#include "smlat/verify.hpp"

#include <functional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "smlat/enumerate.hpp"
#include "smlat/modular.hpp"

namespace smlat {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::pass: return "pass";
    case Verdict::fail: return "fail";
    case Verdict::known_flag: return "known-flag";
    case Verdict::skipped: return "skipped";
    case Verdict::error: return "error";
  }
  return "?";
}

bool VerifyReport::any(Verdict v) const {
  for (const auto& c : checks)
    if (c.verdict == v) return true;
  return false;
}

Verdict VerifyReport::overall() const {
  for (Verdict v : {Verdict::error, Verdict::fail, Verdict::known_flag})
    if (any(v)) return v;
  return Verdict::pass;
}

namespace {

std::string str(const Int& x) { return x.get_str(); }
std::string str(const Rat& x) { return x.get_str(); }

std::string rat_list(const std::vector<Rat>& c) {
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) out += (i ? ", " : "") + c[i].get_str();
  return out + "]";
}

// The checks for one Gram matrix; `expect` may be empty (candidate Grams).
class Checker {
 public:
  Checker(const IntMat& gram, int N, const std::map<std::string, ExpectedValue>& expect, const VerifyOptions& opts)
      : gram_(gram), N_(N), expect_(expect), opts_(opts) {}

  std::vector<CheckRecord> run(long& k_out) {
    check("integrality", "the Gram matrix is symmetric, integral and positive definite", [&](CheckRecord& r) {
      L_ = Lattice(gram_);
      r.computed = "integral, positive definite";
      return true;
    });
    if (!L_) return std::move(out_);
    const Lattice& L = *L_;
    const long n = static_cast<long>(L.dim());
    const ModParams mp = ModParams::for_level(N_);
    if (n % mp.sigma0 == 0) k_ = n / mp.sigma0;
    k_out = k_;

    check("det", "det L = N^(n/2)", [&](CheckRecord& r) {
      r.computed = str(L.det());
      Int want;
      const bool exact = n % 2 == 0 || mpz_perfect_square_p(Int(N_).get_mpz_t());
      if (n % 2 == 0) {
        mpz_pow_ui(want.get_mpz_t(), Int(N_).get_mpz_t(), static_cast<unsigned long>(n / 2));
        r.expected = str(want);
      } else {
        r.expected = std::to_string(N_) + "^(" + std::to_string(n) + "/2)";
        if (exact) {
          Int root;
          mpz_sqrt(root.get_mpz_t(), Int(N_).get_mpz_t());
          mpz_pow_ui(want.get_mpz_t(), root.get_mpz_t(), static_cast<unsigned long>(n));
        }
      }
      return exact && L.det() == want;
    });

    check("rational_class", "L is rationally equivalent to C_N^k", [&](CheckRecord& r) {
      const RationalClass rc = rational_class(L);
      r.computed = describe(rc);
      if (!k_) {
        r.expected = "dimension divisible by " + std::to_string(mp.sigma0);
        return false;
      }
      const RationalClass want = rational_class(orthogonal_power(c_n(N_), static_cast<int>(k_)));
      r.expected = describe(want);
      return rc == want;
    });

    for (int m : divisors(N_)) {
      check("strong_modularity[m=" + std::to_string(m) + "]", "L is isometric to sqrt(m) L^(*,m)",
            [&](CheckRecord& r) {
              const Lattice D = rescaled_partial_dual(L, m);
              r.expected = "isometric";
              IsoCertificate c = isometric(L, D, opts_.iso);
              r.computed = c.isometric ? "isometric" : "not isometric: " + c.witness;
              return c.isometric;
            });
    }

    check("minimum", "min L >= 2, and min L = 3 in the maximal dimension", [&](CheckRecord& r) {
      const Int m = minimum(L);
      r.computed = str(m);
      if (const ExpectedValue* e = find("min")) {
        r.expected = e->value;
        return r.computed == e->value;
      }
      if (k_ && k_ == mp.kmax) {
        r.expected = "3";
        return m == 3;
      }
      r.expected = ">= 2";
      return m >= 2;
    });

    check("min0_shadow", "min0(S(L)) = M(N,1,k)", [&](CheckRecord& r) {
      min0_ = min0_shadow(L, std::nullopt, opts_.max_vectors);
      r.computed = str(*min0_);
      if (!k_) return false;
      const Rat want = M(N_, 1, k_);
      r.expected = str(want);
      bool ok = *min0_ == want;
      if (const ExpectedValue* e = find("min0"); e && e->value != r.expected) {
        r.expected += " (listed " + e->value + ")";
        ok = false;
      }
      return ok;
    });

    check("shadow_level", "min0(S(L)) = M(N,m,k) for an integer m >= 0, here m = 1", [&](CheckRecord& r) {
      r.expected = "1";
      if (!min0_ || !k_) {
        r.computed = "unavailable";
        return false;
      }
      const long m = shadow_level(N_, k_, *min0_);
      r.computed = std::to_string(m);
      return m == 1;
    });

    check("shadow_roundtrip", "the enumerated shadow theta equals the prediction from the theta decomposition",
          [&](CheckRecord& r) {
            if (!k_) {
              r.computed = "unavailable";
              return false;
            }
            const long theta_prec = (top_index(N_, k_) + 2) * kGrid;
            DecompResult dr = decompose_theta(L, N_, theta_prec, opts_.max_vectors);
            const QSeries predicted = shadow_prediction(dr, opts_.prec);
            const QSeries enumerated = coset_theta(shadow(L), opts_.prec, N_, opts_.max_vectors);
            r.expected = "agreement through q^" + exponent_string(opts_.prec - 1);
            std::string head = "c = " + rat_list(dr.c);
            if (dr.m_shadow) head += ", m = " + str(*dr.m_shadow);
            for (long g = 0; g < opts_.prec; ++g) {
              const Rat a = predicted.coeff(g), b = enumerated.coeff(g);
              if (a != b) {
                r.computed = head + "; differs at q^" + exponent_string(g) + ": predicted " + str(a) +
                             ", enumerated " + str(b);
                return false;
              }
            }
            r.computed = head + "; agree through q^" + exponent_string(opts_.prec - 1);
            return true;
          });

    check("root_count", "number of roots = 2k(s(N) + ev(N) - (k+1))", [&](CheckRecord& r) {
      const std::uint64_t c = root_count(L);
      r.computed = std::to_string(c);
      if (!k_) return false;
      r.expected = std::to_string(root_count_formula(N_, k_));
      bool ok = r.computed == r.expected;
      if (const ExpectedValue* e = find("root_count"); e && e->value != r.expected) {
        r.expected += " (listed " + e->value + ")";
        ok = false;
      }
      return ok;
    });

    check("root_system", "the root sublattice has the listed ADE type", [&](CheckRecord& r) {
      r.computed = root_system(L).to_string();
      const ExpectedValue* e = find("root_system");
      if (!e) return true;
      r.expected = e->value;
      return r.computed == e->value;
    });

    if (opts_.skip_aut) {
      CheckRecord r{"aut_order", "", "", Verdict::skipped, "order of the automorphism group"};
      if (const ExpectedValue* e = find("aut_order")) r.expected = e->value;
      out_.push_back(r);
    } else {
      check("aut_order", "order of the automorphism group", [&](CheckRecord& r) {
        const AutGroup a = aut_order(L, opts_.iso);
        r.computed = str(a.order);
        const ExpectedValue* e = find("aut_order");
        if (!e) return true;
        r.expected = e->value;
        return r.computed == e->value;
      });
    }
    return std::move(out_);
  }

 private:
  const ExpectedValue* find(const std::string& key) const {
    auto it = expect_.find(key);
    return it == expect_.end() ? nullptr : &it->second;
  }

  static std::string describe(const RationalClass& rc) {
    std::string s = "dim " + std::to_string(rc.dim) + ", det class " + str(rc.det_class) + ", hasse";
    for (const auto& [p, h] : rc.hasse) s += " " + (p ? std::to_string(p) : std::string("inf")) + ":" + (h > 0 ? "+" : "-");
    return s;
  }

  void check(const std::string& name, const std::string& claim, const std::function<bool(CheckRecord&)>& body) {
    CheckRecord r;
    r.name = name;
    r.claim = claim;
    try {
      r.verdict = body(r) ? Verdict::pass : Verdict::fail;
    } catch (const InfrastructureError& e) {
      r.verdict = Verdict::error;
      r.computed = std::string("infrastructure error: ") + e.what();
    } catch (const MathError& e) {
      r.verdict = Verdict::fail;
      r.computed = e.what();
    }
    out_.push_back(std::move(r));
  }

  IntMat gram_;
  int N_;
  const std::map<std::string, ExpectedValue>& expect_;
  const VerifyOptions& opts_;
  std::optional<Lattice> L_;
  long k_ = 0;
  std::optional<Rat> min0_;
  std::vector<CheckRecord> out_;
};

}  // namespace

VerifyReport verify_lattice(const LatticeFile& f, const VerifyOptions& opts) {
  if (!is_admissible_level(f.N)) throw InputError(f.path + ": level " + std::to_string(f.N) + " is not admissible");
  VerifyReport rep;
  rep.file = f.path;
  rep.name = f.name;
  rep.N = f.N;
  rep.dim = f.gram.rows();
  rep.checks = Checker(f.gram, f.N, f.expected, opts).run(rep.k);
  if (f.k && rep.k && f.k != rep.k)
    rep.checks.push_back({"k", std::to_string(rep.k), std::to_string(f.k), Verdict::fail, "k = n / sigma0(N)"});

  std::set<std::string> used;
  for (auto& c : rep.checks) {
    if (c.verdict == Verdict::fail && f.has_flag(c.name)) {
      c.verdict = Verdict::known_flag;
      used.insert(c.name);
    }
  }
  // a flag that no longer fires is stale and must be removed from the file
  for (const auto& flag : f.known_flags)
    if (!used.count(flag))
      rep.checks.push_back({"known_flags", "'" + flag + "' did not fail", "every listed flag fails", Verdict::fail,
                            "the listed known flags are exactly the failing checks"});

  if (f.candidate_gram) {
    long k = 0;
    static const std::map<std::string, ExpectedValue> none;
    VerifyOptions o = opts;
    rep.candidate_checks = Checker(*f.candidate_gram, f.N, none, o).run(k);
  }
  return rep;
}

namespace {

void text_records(std::ostringstream& os, const std::vector<CheckRecord>& recs) {
  std::size_t w = 0;
  for (const auto& c : recs) w = std::max(w, c.name.size());
  for (const auto& c : recs) {
    os << "  " << c.name << std::string(w - c.name.size() + 2, ' ') << to_string(c.verdict);
    os << std::string(12 - to_string(c.verdict).size(), ' ') << c.computed;
    if (!c.expected.empty()) os << "  (expected " << c.expected << ")";
    os << "\n";
  }
}

nlohmann::ordered_json json_records(const std::vector<CheckRecord>& recs) {
  nlohmann::ordered_json a = nlohmann::ordered_json::array();
  for (const auto& c : recs) {
    nlohmann::ordered_json r;
    r["name"] = c.name;
    r["computed"] = c.computed;
    r["expected"] = c.expected;
    r["verdict"] = to_string(c.verdict);
    r["claim"] = c.claim;
    a.push_back(r);
  }
  return a;
}

nlohmann::ordered_json report_json(const VerifyReport& r) {
  nlohmann::ordered_json j;
  j["name"] = r.name;
  j["file"] = r.file;
  j["N"] = r.N;
  j["dim"] = r.dim;
  j["k"] = r.k;
  j["verdict"] = to_string(r.overall());
  j["checks"] = json_records(r.checks);
  if (!r.candidate_checks.empty()) j["candidate_checks"] = json_records(r.candidate_checks);
  return j;
}

}  // namespace

std::string VerifyReport::to_text() const {
  std::ostringstream os;
  os << name << " (" << file << "): N=" << N << " n=" << dim << " k=" << k << "\n";
  text_records(os, checks);
  if (!candidate_checks.empty()) {
    os << "  candidate Gram (not substituted):\n";
    std::ostringstream inner;
    text_records(inner, candidate_checks);
    std::istringstream lines(inner.str());
    for (std::string line; std::getline(lines, line);) os << "  " << line << "\n";
  }
  os << "verdict: " << to_string(overall()) << "\n";
  return os.str();
}

std::string VerifyReport::to_json(int indent) const { return report_json(*this).dump(indent); }

std::string corpus_text(const std::vector<VerifyReport>& reports) {
  std::ostringstream os;
  std::map<Verdict, int> tally;
  for (const auto& r : reports) {
    os << r.to_text() << "\n";
    ++tally[r.overall()];
  }
  os << "corpus: " << reports.size() << " lattices, " << tally[Verdict::pass] << " pass, "
     << tally[Verdict::known_flag] << " known-flag, " << tally[Verdict::fail] << " fail, " << tally[Verdict::error]
     << " error\n";
  return os.str();
}

std::string corpus_json(const std::vector<VerifyReport>& reports) {
  nlohmann::ordered_json j;
  j["reports"] = nlohmann::ordered_json::array();
  Verdict worst = Verdict::pass;
  for (const auto& r : reports) {
    j["reports"].push_back(report_json(r));
    const Verdict v = r.overall();
    if (v == Verdict::error || (v == Verdict::fail && worst != Verdict::error) ||
        (v == Verdict::known_flag && worst == Verdict::pass))
      worst = v;
  }
  j["verdict"] = to_string(worst);
  return j.dump(2);
}

}  // namespace smlat
