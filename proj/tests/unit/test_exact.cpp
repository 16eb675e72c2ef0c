#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "smlat/exact.hpp"

using namespace smlat;

namespace {

bool is_row_hnf(const IntMat& H) {
  // lower staircase: pivot of each nonzero row is its last nonzero entry, pivots move right
  long prev = -1;
  for (std::size_t i = 0; i < H.rows(); ++i) {
    long piv = -1;
    for (std::size_t j = 0; j < H.cols(); ++j)
      if (H(i, j) != 0) piv = static_cast<long>(j);
    if (piv < 0) continue;
    if (piv <= prev) return false;
    if (H(i, piv) <= 0) return false;
    for (std::size_t r = i + 1; r < H.rows(); ++r)
      if (H(r, piv) < 0 || H(r, piv) >= H(i, piv)) return false;
    prev = piv;
  }
  return true;
}

IntMat random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> d(-6, 6);
  IntMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

}  // namespace

TEST_CASE("hnf examples") {
  IntMat a{{2, 0}, {0, 2}};
  auto r = hnf(a);
  CHECK(r.H == a);
  CHECK(r.U == IntMat::identity(2));

  IntMat b{{1, 2}, {3, 4}};
  auto rb = hnf(b);
  CHECK(abs(det(rb.H)) == std::labs(oracle::det_cofactor({{1, 2}, {3, 4}})));
  CHECK(rb.U * b == rb.H);
  CHECK(abs(det(rb.U)) == 1);

  IntMat z{{0, 0}};
  CHECK(hnf(z).H == z);
}

TEST_CASE("hnf of random matrices spans the same rows") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    std::size_t r = 1 + t % 5, c = 1 + (t / 5) % 4;
    IntMat a = random_matrix(r, c, rng);
    auto res = hnf(a);
    CHECK(res.U * a == res.H);
    CHECK(abs(det(res.U)) == 1);
    CHECK(is_row_hnf(res.H));
    if (rank(to_rat(a)) == c) {
      // mutual membership of the row lattices
      ScaledBasis A = basis_of(ScaledBasis::from_int(a)), H = basis_of(ScaledBasis::from_int(res.H));
      CHECK(contains_all(A, H));
      CHECK(contains_all(H, A));
    }
  }
}

TEST_CASE("integer kernel") {
  IntMat a{{1, 2}, {2, 4}, {3, 6}};
  IntMat k = integer_kernel(a);
  CHECK(k.rows() == 2);
  IntMat prod = k * a;
  for (std::size_t i = 0; i < prod.rows(); ++i)
    for (std::size_t j = 0; j < prod.cols(); ++j) CHECK(prod(i, j) == 0);
}

TEST_CASE("lattice sum and intersection") {
  ScaledBasis two{1, IntMat{{2, 0}, {0, 2}}}, three{1, IntMat{{3, 0}, {0, 3}}};
  CHECK(lattice_sum(two, three).to_rat() == to_rat(IntMat::identity(2)));
  CHECK(lattice_intersect(two, three).to_rat() == to_rat(IntMat{{6, 0}, {0, 6}}));

  // Z^2 meets the lattice spanned by (1/2,1/2), (0,1); brute-force membership over a box
  ScaledBasis z2{1, IntMat::identity(2)};
  ScaledBasis half{2, IntMat{{1, 1}, {0, 2}}};
  ScaledBasis meet = lattice_intersect(z2, half);
  int members = 0;
  for (int x = -4; x <= 4; ++x)
    for (int y = -4; y <= 4; ++y) {
      RatVec v{Rat(x, 2), Rat(y, 2)};
      for (auto& q : v) q.canonicalize();
      bool in_both = contains(z2, v) && contains(half, v);
      CHECK(contains(meet, v) == in_both);
      members += in_both;
    }
  CHECK(members == 25);  // (x/2, y/2) with x, y even

  CHECK_THROWS_AS(lattice_sum(ScaledBasis{1, IntMat{{1, 0}}}, z2), MathError);
}

TEST_CASE("random sums and intersections contain / are contained") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    IntMat a = random_matrix(3, 3, rng), b = random_matrix(3, 3, rng);
    if (det(a) == 0 || det(b) == 0) continue;
    ScaledBasis A{1 + t % 3, a}, B{1, b};
    ScaledBasis S = lattice_sum(A, B), I = lattice_intersect(A, B);
    CHECK(contains_all(S, A));
    CHECK(contains_all(S, B));
    CHECK(contains_all(A, I));
    CHECK(contains_all(B, I));
  }
}

TEST_CASE("lll examples") {
  auto r = lll_reduce(IntMat::identity(3));
  CHECK(r.gram == IntMat::identity(3));
  CHECK(r.U == IntMat::identity(3));

  IntMat g{{5, 4}, {4, 5}};
  auto rg = lll_reduce(g);
  CHECK(det(rg.gram) == 9);
  CHECK(rg.U.transpose() * g * rg.U == rg.gram);
  // exhaustive search: the least nonzero norm of the form is 2
  long best = 1000;
  oracle::box(2, 5, [&](const oracle::Vec& x) {
    long v = oracle::form(oracle::to_gram(g), x);
    if (v > 0) best = std::min(best, v);
  });
  CHECK(rg.gram(0, 0) == best);
  CHECK(rg.gram(1, 1) <= 5);

  CHECK_THROWS_AS(lll_reduce(IntMat{{1, 2}, {2, 1}}), MathError);
}

TEST_CASE("lll preserves det and norm counts") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 30; ++t) {
    std::size_t n = 2 + t % 4;
    IntMat base = IntMat::identity(n);
    for (std::size_t i = 0; i + 1 < n; ++i) base(i + 1, i) = base(i, i + 1) = (t + i) % 2;
    for (std::size_t i = 0; i < n; ++i) base(i, i) = 2 + (t + i) % 3;
    if (!is_positive_definite(base)) continue;
    IntMat u = oracle::random_unimodular(n, rng);
    IntMat g = u.transpose() * base * u;
    auto red = lll_reduce(g);
    CHECK(det(red.gram) == det(g));
    CHECK(red.U.transpose() * g * red.U == red.gram);
    auto h1 = oracle::box_counts(oracle::to_gram(base), 3, 4);
    auto h2 = oracle::box_counts(oracle::to_gram(red.gram), 3, 4);
    CHECK(h1 == h2);
  }
}

TEST_CASE("integer helpers") {
  CHECK(floor_div(-7, 2) == -4);
  CHECK(ceil_div(-7, 2) == -3);
  CHECK(isqrt(Int(99)) == 9);
  CHECK(mod_pos(-3, 5) == 2);
  CHECK(det(IntMat{{2, 1}, {1, 2}}) == 3);
  CHECK(inverse(IntMat{{2, 1}, {1, 2}}) == RatMat{{Rat(2, 3), Rat(-1, 3)}, {Rat(-1, 3), Rat(2, 3)}});
}
