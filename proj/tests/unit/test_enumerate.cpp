#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "smlat/enumerate.hpp"

using namespace smlat;

namespace {

const IntMat kA2{{2, 1}, {1, 2}};
const IntMat kD4{{2, -1, 0, 0}, {-1, 2, -1, -1}, {0, -1, 2, 0}, {0, -1, 0, 2}};
const IntMat kE8{{2, -1, 0, 0, 0, 0, 0, 0},  {-1, 2, -1, 0, 0, 0, 0, 0}, {0, -1, 2, -1, 0, 0, 0, -1},
                 {0, 0, -1, 2, -1, 0, 0, 0}, {0, 0, 0, -1, 2, -1, 0, 0}, {0, 0, 0, 0, -1, 2, -1, 0},
                 {0, 0, 0, 0, 0, -1, 2, 0},  {0, 0, -1, 0, 0, 0, 0, 2}};

IntMat diag(std::initializer_list<long> d) {
  IntMat m(d.size(), d.size());
  std::size_t i = 0;
  for (long x : d) m(i, i) = x, ++i;
  return m;
}

std::map<long, std::uint64_t> as_long_counts(const VectorList& vl) {
  std::map<long, std::uint64_t> m;
  for (const auto& [n, c] : vl.counts) m[n.get_num().get_si()] = c;
  return m;
}

QSeries series(std::initializer_list<std::pair<long, long>> terms, long prec) {
  QSeries s(prec);
  for (auto [g, c] : terms) s.add_term(g, c);
  return s;
}

}  // namespace

TEST_CASE("short vectors") {
  auto z2 = short_vectors(Lattice(diag({1, 1})), 1);
  CHECK(z2.count(1) == 4);
  CHECK(z2.total() == 4);

  auto d4 = short_vectors(Lattice(kD4), 2);
  auto box = oracle::box_counts(oracle::to_gram(kD4), 2, 2);
  CHECK(box[2] == 24);
  CHECK(d4.count(2) == box[2]);

  EnumOptions keep;
  keep.keep_vectors = true;
  keep.include_zero = true;
  auto a2 = short_vectors(Lattice(kA2), 2, keep);
  CHECK(a2.vectors.size() == 7);
  CHECK(std::is_sorted(a2.vectors.begin(), a2.vectors.end()));
  for (std::size_t i = 0; i < a2.vectors.size(); ++i) {
    oracle::Vec v(a2.vectors[i].begin(), a2.vectors[i].end());
    CHECK(Rat(oracle::form(oracle::to_gram(kA2), v)) == a2.norms[i]);
  }
}

TEST_CASE("coset short vectors of the shadow of Z") {
  auto vl = coset_short_vectors(shadow(Lattice(diag({1}))), Rat(9, 4));
  CHECK(vl.counts.size() == 2);
  CHECK(vl.count(Rat(1, 4)) == 2);
  CHECK(vl.count(Rat(9, 4)) == 2);
}

TEST_CASE("enumeration overflow is an error") {
  EnumOptions o;
  o.max_vectors = 10;
  CHECK_THROWS_AS(short_vectors(Lattice(diag({1, 1, 1})), 4, o), EnumerationOverflow);
}

TEST_CASE("minima") {
  for (int k = 1; k <= 6; ++k) {
    IntMat g = IntMat::identity(static_cast<std::size_t>(k));
    CHECK(min0_shadow(Lattice(g)) == Rat(k) / 4);
  }
  CHECK(min0_shadow(Lattice(kD4)) == 0);
  CHECK(minimum(Lattice(kD4)) == 2);
  CHECK(minimum(Lattice(kE8)) == 2);
  CHECK(minimum(Lattice(IntMat{{3, 1}, {1, 4}})) == 3);
}

TEST_CASE("theta series") {
  // norms 2(a^2 + ab + b^2): 0, 2, 6, 8 up to q^8
  auto box = oracle::box_counts(oracle::to_gram(kA2), 4, 8);
  CHECK(box == std::map<long, std::uint64_t>{{0, 1}, {2, 6}, {6, 6}, {8, 6}});
  QSeries t = theta_series(Lattice(kA2), 8 * kGrid + 1);
  CHECK(t.terms() == series({{0, 1}, {48, 6}, {144, 6}, {192, 6}}, 8 * kGrid + 1).terms());

  QSeries c2 = theta_series(c_n(2), 2 * kGrid + 1);
  CHECK(c2.terms() == series({{0, 1}, {24, 2}, {48, 2}}, 1000).terms());

  QSeries sz = coset_theta(shadow(Lattice(diag({1}))), 3 * kGrid, 1);
  CHECK(sz.terms() == series({{6, 2}, {54, 2}}, 1000).terms());
  CHECK(sz.leading().first == kGrid * ModParams::for_level(1).sigma1 / 4);
}

TEST_CASE("large entries take the arbitrary-precision path") {
  const long a = 1000003, b = 1000033, c = 1000037, d = 1000039;
  IntMat g = diag({a, b, c, d});
  g(0, 1) = g(1, 0) = 17;
  auto vl = short_vectors(Lattice(g), Rat(3 * a));
  auto box = oracle::box_counts(oracle::to_gram(g), 2, 3 * a);
  box.erase(0);
  CHECK(as_long_counts(vl) == box);
}

TEST_CASE("roots") {
  CHECK(root_count(Lattice(kD4)) == 24);
  // 2k(s + ev - (k+1)) at N=2, k=2
  CHECK(root_count(Lattice(kD4)) == 2 * 2 * (8 + 1 - 3));
  Lattice a2a2 = direct_sum(Lattice(kA2), Lattice(kA2));
  CHECK(root_count(a2a2) == 12);
  auto e8 = root_system(Lattice(kE8));
  REQUIRE(e8.components.size() == 1);
  CHECK(e8.components[0] == RootComponent{'E', 8, 240});
  CHECK(root_system(a2a2).to_string() == "A2²");
  CHECK(root_system(direct_sum(Lattice(kD4), Lattice(diag({2, 2, 2, 2})))).to_string() == "D4 ⊥ A1⁴");
  CHECK(root_system(direct_sum(Lattice(kD4), Lattice(diag({2, 2, 2, 2})))).to_ascii() == "D4+A1^4");
  CHECK(root_system(Lattice(diag({1, 3}))).to_string() == "0");
  CHECK(classify_component(3, 12)->family == 'A');
  CHECK(classify_component(5, 40)->family == 'D');
  CHECK_FALSE(classify_component(4, 10));
}

TEST_CASE("fuzz: counts are invariant under unimodular conjugation") {
  std::mt19937_64 rng(1234);
  std::uniform_int_distribution<int> off(-1, 1), dg(2, 4);
  int cases = 0;
  while (cases < 100) {
    std::size_t n = 1 + static_cast<std::size_t>(cases % 6);
    IntMat g(n, n);
    for (std::size_t i = 0; i < n; ++i) g(i, i) = dg(rng);
    for (std::size_t i = 0; i + 1 < n; ++i) g(i, i + 1) = g(i + 1, i) = off(rng);
    if (!is_positive_definite(g)) continue;
    IntMat u = oracle::random_unimodular(n, rng);
    IntMat h = u.transpose() * g * u;
    const long bound = 6;
    auto box = oracle::box_counts(oracle::to_gram(g), 3, bound);
    box.erase(0);
    CHECK(as_long_counts(short_vectors(Lattice(g), bound)) == box);
    CHECK(as_long_counts(short_vectors(Lattice(h), bound)) == box);
    ++cases;
  }
}

TEST_CASE("theta is multiplicative under direct sums") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> off(-1, 1), dg(1, 3);
  for (int t = 0; t < 20; ++t) {
    auto random_lattice = [&](std::size_t n) {
      for (;;) {
        IntMat g(n, n);
        for (std::size_t i = 0; i < n; ++i) g(i, i) = dg(rng);
        for (std::size_t i = 0; i + 1 < n; ++i) g(i, i + 1) = g(i + 1, i) = off(rng);
        if (is_positive_definite(g)) return Lattice(g);
      }
    };
    Lattice a = random_lattice(1 + t % 3), b = random_lattice(1 + t % 4);
    const long prec = 8 * kGrid;
    CHECK(agree(theta_series(direct_sum(a, b), prec), theta_series(a, prec) * theta_series(b, prec)));
  }
}

TEST_CASE("shadow theta of odd lattices has even coefficients") {
  // the scale puts the shadow norms on the q^(1/24) grid
  const std::pair<IntMat, long> cases[] = {
      {diag({1, 1, 1}), 1}, {diag({1, 3}), 1}, {IntMat{{3, 1}, {1, 4}}, 11}, {diag({1, 2, 3, 6}), 1}};
  for (const auto& [g, scale] : cases) {
    QSeries s = coset_theta(shadow(Lattice(g)), 6 * kGrid, scale);
    CHECK_FALSE(s.is_zero());
    for (const auto& [e, c] : s.terms()) CHECK(mpz_even_p(c.get_num().get_mpz_t()));
  }
}
