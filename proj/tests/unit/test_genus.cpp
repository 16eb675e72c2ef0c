#include <random>
#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "smlat/enumerate.hpp"
#include "smlat/genus.hpp"
#include "smlat/lattice_file.hpp"
#include "smlat/modular.hpp"

using namespace smlat;

namespace {

const IntMat kA2{{2, 1}, {1, 2}};

IntVec iv(std::initializer_list<long> xs) {
  IntVec v;
  for (long x : xs) v.emplace_back(x);
  return v;
}

oracle::Vec to_vec(const IntVec& v) {
  oracle::Vec out;
  for (const Int& x : v) out.push_back(x.get_si());
  return out;
}

bool contains_class(const std::vector<Lattice>& list, const Lattice& L) {
  for (const auto& M : list)
    if (M.dim() == L.dim() && isometric(M, L).isometric) return true;
  return false;
}

const LatticeFile& corpus_entry(const std::string& name) {
  static const std::vector<LatticeFile> corpus = load_corpus(SMLAT_CORPUS_DIR);
  for (const auto& f : corpus)
    if (f.name == name) return f;
  throw std::runtime_error("no corpus entry " + name);
}

}  // namespace

TEST_CASE("neighbor of Z^4 is Z^4") {
  Lattice z4(IntMat::identity(4));
  const IntVec v = iv({2, 2, 1, 0});  // norm 9
  Lattice M = neighbor(z4, 3, v);
  CHECK(M.det() == 1);
  CHECK(isometric(M, z4).isometric);
}

TEST_CASE("neighbor matches its definition") {
  // counts of the neighbor's short vectors, recomputed from {w/p : w in Zv + pL, (w,v) = 0 mod p^2}
  const std::vector<IntMat> grams = {IntMat::identity(3), IntMat{{1, 0, 0}, {0, 2, 1}, {0, 1, 3}},
                                     IntMat{{2, 1, 0}, {1, 2, 1}, {0, 1, 4}}, IntMat{{3, 1}, {1, 4}}};
  int checked = 0;
  for (const IntMat& g : grams) {
    Lattice L(g);
    const long p = choose_prime(L).value();
    for (const IntVec& line : isotropic_lines(L, p)) {
      const IntVec v = lift_isotropic(L, p, line);
      Lattice M = neighbor(L, p, v);
      CHECK(M.det() == L.det());
      const auto mine = short_vectors(M, 3, {false, true, kDefaultVectorCap}).counts;
      const auto ref = oracle::neighbor_box_counts(oracle::to_gram(g), p, to_vec(v), 3 * p * 3, 3);
      REQUIRE_FALSE(ref.empty());
      // the larger box finds nothing new
      CHECK(ref == oracle::neighbor_box_counts(oracle::to_gram(g), p, to_vec(v), 3 * p * 3 + 2, 3));
      std::map<long, std::uint64_t> as_long;
      for (const auto& [n, c] : mine) as_long[n.get_num().get_si()] = c;
      CHECK(as_long == ref);
      ++checked;
    }
  }
  CHECK(checked > 10);
}

TEST_CASE("neighbor outputs are integral and keep the determinant") {
  std::mt19937_64 rng(17);
  Lattice L = orthogonal_power(c_n(7), 2);
  for (int step = 0; step < 30; ++step) {
    const auto lines = isotropic_lines(L, 3);
    REQUIRE_FALSE(lines.empty());
    const IntVec v = lift_isotropic(L, 3, lines[rng() % lines.size()]);
    Lattice M = neighbor(L, 3, v);  // the constructor rejects non-integral or indefinite Grams
    CHECK(M.det() == 49);
    CHECK(is_rationally_equivalent(M, L));
    L = M;
  }
}

TEST_CASE("neighbor rejects invalid input") {
  Lattice z4(IntMat::identity(4));
  CHECK_THROWS_AS(neighbor(z4, 3, iv({1, 1, 1, 0})), MathError);  // norm 3, not 0 mod 9
  CHECK_THROWS_AS(neighbor(z4, 3, iv({3, 0, 0, 0})), MathError);  // in 3L
  CHECK_THROWS_AS(neighbor(z4, 4, iv({2, 0, 0, 0})), MathError);  // not prime
  CHECK_THROWS_AS(neighbor(z4, 2, iv({2, 0, 0, 0})), MathError);  // p = 2
  CHECK_THROWS_AS(neighbor(c_n(3), 3, iv({3, 0})), MathError);  // p divides det
  CHECK_THROWS_AS(lift_isotropic(z4, 3, iv({1, 1, 0, 0})), MathError);
}

TEST_CASE("no isotropic line gives no neighbors") {
  // x^2 + 7y^2 = x^2 + y^2 mod 3 and -1 is not a square mod 3
  CHECK(isotropic_lines(c_n(7), 3).empty());
  CHECK(choose_prime(c_n(7)) == 11);
  CHECK(choose_prime(Lattice(IntMat::identity(4))) == 3);
  CHECK(choose_prime(c_n(3)) == 7);
}

TEST_CASE("two steps lead back to the seed class") {
  Lattice L(IntMat{{3, 1}, {1, 4}});
  for (long p : {3L, 5L}) {
    for (const IntVec& line : isotropic_lines(L, p)) {
      Lattice M = neighbor(L, p, lift_isotropic(L, p, line));
      bool back = false;
      for (const IntVec& l2 : isotropic_lines(M, p))
        back = back || isometric(neighbor(M, p, lift_isotropic(M, p, l2)), L).isometric;
      CHECK(back);
    }
  }
}

TEST_CASE("genus of Z^9") {
  GenusResult r = enumerate_genus(Lattice(IntMat::identity(9)), 3);
  REQUIRE(r.classes.size() == 2);
  CHECK(r.complete);
  std::set<std::string> roots;
  std::set<std::uint64_t> ones;
  for (const auto& L : r.classes) {
    roots.insert(root_system(L).to_string());
    ones.insert(short_vectors(L, 1).count(1));
  }
  CHECK(roots == std::set<std::string>{"D9", "E8"});
  CHECK(ones == std::set<std::uint64_t>{2, 18});
}

TEST_CASE("odd unimodular genera of dimension 8 and 12") {
  // E8 is even, so Z^8 is alone in its genus
  CHECK(enumerate_genus(Lattice(IntMat::identity(8)), 3).classes.size() == 1);
  GenusResult r = enumerate_genus(Lattice(IntMat::identity(12)), 3);
  CHECK(r.classes.size() == 3);
}

TEST_CASE("genus of C_7^2") {
  GenusResult r = enumerate_genus(orthogonal_power(c_n(7), 2), 3);
  int min2 = 0;
  for (const auto& L : r.classes) min2 += minimum(L) >= 2;
  CHECK(min2 == 1);
}

TEST_CASE("A2 + A2 lies in the even genus next to C_3^2") {
  // odd-prime neighbors keep parity, so the odd genus of C_3^2 cannot contain A2 + A2
  Lattice a2a2 = direct_sum(Lattice(kA2), Lattice(kA2));
  Lattice c = orthogonal_power(c_n(3), 2);
  CHECK_FALSE(contains_class(enumerate_genus(c, 5).classes, a2a2));
  const auto seeds = parity_seeds(c);
  CHECK(seeds.size() == 2);
  CHECK(contains_class(seeds, a2a2));
  GenusLimits lim;
  lim.primes = {5};
  CHECK(contains_class(enumerate_genus(seeds, lim).classes, a2a2));
}

TEST_CASE("genus enumeration properties") {
  for (const Lattice& seed : {orthogonal_power(c_n(5), 2), orthogonal_power(c_n(3), 3)}) {
    GenusResult with = enumerate_genus({seed});
    // one prime without the automorphism reduction reaches the same classes
    GenusLimits plain;
    plain.use_aut = false;
    plain.primes = {choose_prime(seed).value()};
    GenusResult without = enumerate_genus({seed}, plain);
    CHECK(with.classes.size() == without.classes.size());
    for (const auto& L : with.classes) {
      CHECK(L.det() == seed.det());
      CHECK(L.is_even() == seed.is_even());
      CHECK(contains_class(without.classes, L));
    }
    for (std::size_t a = 0; a < with.classes.size(); ++a)
      for (std::size_t b = a + 1; b < with.classes.size(); ++b)
        CHECK_FALSE(isometric(with.classes[a], with.classes[b]).isometric);
    // deterministic output
    GenusResult again = enumerate_genus({seed});
    REQUIRE(again.classes.size() == with.classes.size());
    for (std::size_t i = 0; i < with.classes.size(); ++i) CHECK(again.classes[i] == with.classes[i]);
  }
}

TEST_CASE("class cap gives a partial result") {
  GenusLimits lim;
  lim.class_cap = 1;
  GenusResult r = enumerate_genus({Lattice(IntMat::identity(9))}, lim);
  CHECK_FALSE(r.complete);
  CHECK(r.classes.size() == 1);
}

TEST_CASE("classification of long-shadow lattices") {
  struct Cell {
    int N;
    long k;
    const char* name;
  };
  const Cell cells[] = {{3, 2, "L_2(3)"}, {3, 3, "L_3(3)"}, {5, 2, "L_2(5)"},  {7, 1, "L_1(7)"}, {7, 2, "L_2(7)"},
                        {2, 2, "L_2(2)"}, {6, 1, "L_1(6)"}, {14, 1, "L_1(14)"}, {11, 1, "L_1(11)"}};
  for (const Cell& c : cells) {
    CAPTURE(c.name);
    ClassifyResult r = classify_long_shadow(c.N, c.k);
    REQUIRE(r.survivors.size() == 1);
    const LatticeFile& f = corpus_entry(c.name);
    // the listed L_1(11) Gram is even and fails the checks; its corrected candidate is found
    const IntMat& want = f.candidate_gram ? *f.candidate_gram : f.gram;
    CHECK(isometric(r.survivors[0], Lattice(want)).isometric);
    const Lattice& L = r.survivors[0];
    CHECK(is_strongly_modular(L, c.N).strongly_modular());
    CHECK(minimum(L) >= 2);
    CHECK(min0_shadow(L) == M(c.N, 1, c.k));
  }
}

TEST_CASE("the maximal cells have minimum 3") {
  for (int N : {5, 7, 11, 14}) {
    CAPTURE(N);
    ClassifyResult r = classify_long_shadow(N, kmax(N));
    REQUIRE(r.survivors.size() == 1);
    CHECK(minimum(r.survivors[0]) == 3);
  }
}

TEST_CASE("cells without a long-shadow lattice") {
  CHECK(classify_long_shadow(2, 3).survivors.empty());
  CHECK(classify_long_shadow(3, 1).survivors.empty());
}

TEST_CASE("large classifications are refused with an estimate") {
  try {
    classify_long_shadow(1, 14);
    FAIL("expected a refusal");
  } catch (const SearchRefused& e) {
    CHECK(std::string(e.what()).find("isotropic lines") != std::string::npos);
  }
  CHECK_THROWS_AS(classify_long_shadow(5, 4), MathError);
}
