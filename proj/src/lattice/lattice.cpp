#include "smlat/lattice.hpp"

#include <limits>

namespace smlat {

Lattice::Lattice(IntMat gram) : gram_(std::move(gram)) {
  if (!gram_.square()) throw MathError("Gram matrix is not square");
  if (!is_symmetric(gram_)) throw MathError("Gram matrix is not symmetric");
  if (!is_positive_definite(gram_)) throw MathError("Gram matrix is not positive definite");
}

Int Lattice::det() const { return smlat::det(gram_); }

bool Lattice::is_even() const {
  for (std::size_t i = 0; i < dim(); ++i)
    if (mpz_odd_p(gram_(i, i).get_mpz_t())) return false;
  return true;
}

std::vector<std::vector<std::int64_t>> Lattice::gram_i64() const {
  std::vector<std::vector<std::int64_t>> g(dim(), std::vector<std::int64_t>(dim()));
  for (std::size_t i = 0; i < dim(); ++i)
    for (std::size_t j = 0; j < dim(); ++j) {
      if (!gram_(i, j).fits_slong_p()) throw InfrastructureError("Gram entry exceeds 64-bit range");
      g[i][j] = gram_(i, j).get_si();
    }
  return g;
}

namespace {

RatVec reduce_shift(const RatMat& transition, const RatVec& shift) {
  RatVec in_base = inverse(transition).apply(shift);
  for (auto& x : in_base) {
    Int fl = floor_div(x.get_num(), x.get_den());
    x -= fl;
  }
  return transition.apply(in_base);
}

}  // namespace

RatVec Coset::shift_in_base() const { return inverse(base.transition).apply(shift); }

bool Coset::is_lattice() const {
  for (const auto& x : shift_in_base())
    if (x.get_den() != 1) return false;
  return true;
}

const std::vector<int>& admissible_levels() {
  static const std::vector<int> levels{1, 2, 3, 5, 6, 7, 11, 14, 15, 23};
  return levels;
}

bool is_admissible_level(int N) {
  for (int l : admissible_levels())
    if (l == N) return true;
  return false;
}

std::vector<int> divisors(int n) {
  std::vector<int> d;
  for (int i = 1; i <= n; ++i)
    if (n % i == 0) d.push_back(i);
  return d;
}

ModParams ModParams::for_level(int N) {
  if (!is_admissible_level(N)) throw MathError("level N=" + std::to_string(N) + " is not one of 1,2,3,5,6,7,11,14,15,23");
  ModParams p;
  p.N = N;
  auto ds = divisors(N);
  p.sigma0 = static_cast<int>(ds.size());
  p.sigma1 = 0;
  for (int d : ds) p.sigma1 += d;
  p.s = 24 / p.sigma1;
  p.ev = N % 2 == 0 ? 1 : 0;
  p.lN = Rat(p.sigma1, p.ev ? 6 : 8);
  p.lN.canonicalize();
  p.kmax = p.s - 1 + p.ev;
  p.nmax = p.sigma0 * p.kmax;
  return p;
}

Lattice make_lattice(const IntMat& gram) { return Lattice(gram); }

Lattice c_n(int N) {
  ModParams::for_level(N);
  auto ds = divisors(N);
  IntMat g(ds.size(), ds.size());
  for (std::size_t i = 0; i < ds.size(); ++i) g(i, i) = ds[i];
  return Lattice(g);
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
  const std::size_t n = a.dim() + b.dim();
  IntMat g(n, n);
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) g(i, j) = a.gram()(i, j);
  for (std::size_t i = 0; i < b.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) g(a.dim() + i, a.dim() + j) = b.gram()(i, j);
  return Lattice(g);
}

Lattice orthogonal_power(const Lattice& a, int k) {
  if (k < 1) throw std::invalid_argument("orthogonal_power: k must be positive");
  Lattice out = a;
  for (int i = 1; i < k; ++i) out = direct_sum(out, a);
  return out;
}

Lattice rescale(const Lattice& L, const Int& d) {
  if (d <= 0) throw MathError("rescale: factor must be positive");
  IntMat g = L.gram();
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= d;
  return Lattice(g);
}

Lattice sublattice(const Lattice& L, const IntMat& basis) { return Lattice(basis.transpose() * L.gram() * basis); }

RatLattice dual(const Lattice& L) {
  RatMat inv = inverse(L.gram());
  return {inv, inv};
}

RatLattice dual(const RatLattice& L) {
  RatMat inv = inverse(L.gram);
  return {inv, L.transition * inv};
}

RatLattice partial_dual(const Lattice& L, int m) {
  if (m < 1) throw MathError("partial_dual: m must be positive");
  const std::size_t n = L.dim();
  RatMat ginv = inverse(L.gram());
  // rows are coordinate vectors; G^{-1} is symmetric so its rows are the dual basis
  ScaledBasis dual_rows = ScaledBasis::from_rat(ginv);
  ScaledBasis scaled{Int(m), IntMat::identity(n)};
  ScaledBasis meet = lattice_intersect(dual_rows, scaled);
  RatMat transition = meet.to_rat().transpose();
  RatMat gram = transition.transpose() * to_rat(L.gram()) * transition;
  return {gram, transition};
}

Lattice rescaled_partial_dual(const Lattice& L, int m) {
  RatLattice pd = partial_dual(L, m);
  RatMat g = pd.gram;
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) g(i, j) *= m;
  if (!is_integral(g)) throw MathError("lattice is not " + std::to_string(m) + "-admissible: rescaled partial dual is not integral");
  return Lattice(to_int(g));
}

EvenSublattice even_sublattice(const Lattice& L) {
  const std::size_t n = L.dim();
  std::size_t odd = n;
  for (std::size_t i = 0; i < n && odd == n; ++i)
    if (mpz_odd_p(L.gram()(i, i).get_mpz_t())) odd = i;
  if (odd == n) return {L, IntMat::identity(n), 1};
  // kernel of x -> sum G_ii x_i (mod 2)
  IntMat basis(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == odd) {
      basis(i, i) = 2;
    } else {
      basis(i, i) = 1;
      if (mpz_odd_p(L.gram()(i, i).get_mpz_t())) basis(odd, i) = 1;
    }
  }
  return {sublattice(L, basis), basis, 2};
}

bool is_even(const Lattice& L) { return L.is_even(); }

IntVec characteristic_vector(const Lattice& L) {
  const std::size_t n = L.dim();
  // augmented system over GF(2): G c = diag(G)
  std::vector<std::vector<int>> a(n, std::vector<int>(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = mpz_odd_p(L.gram()(i, j).get_mpz_t()) ? 1 : 0;
    a[i][n] = mpz_odd_p(L.gram()(i, i).get_mpz_t()) ? 1 : 0;
  }
  std::vector<std::size_t> pivot_col;
  std::size_t r = 0;
  for (std::size_t c = 0; c < n && r < n; ++c) {
    std::size_t p = r;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = 0; i < n; ++i)
      if (i != r && a[i][c])
        for (std::size_t j = c; j <= n; ++j) a[i][j] ^= a[r][j];
    pivot_col.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < n; ++i)
    if (a[i][n]) throw std::logic_error("characteristic_vector: mod-2 system unsolvable (integral lattice expected)");
  IntVec c(n, 0);
  for (std::size_t i = 0; i < r; ++i) c[pivot_col[i]] = a[i][n];
  return c;
}

Coset characteristic_coset(const Lattice& L) {
  RatLattice d = dual(L);
  for (std::size_t i = 0; i < d.gram.rows(); ++i)
    for (std::size_t j = 0; j < d.gram.cols(); ++j) {
      d.gram(i, j) *= 4;
      d.transition(i, j) *= 2;
    }
  IntVec c = characteristic_vector(L);
  RatVec shift(c.begin(), c.end());
  return {d, reduce_shift(d.transition, shift)};
}

Coset shadow(const Lattice& L) {
  RatLattice d = dual(L);
  IntVec c = characteristic_vector(L);
  RatVec shift(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) shift[i] = Rat(c[i]) / 2;
  return {d, reduce_shift(d.transition, shift)};
}

}  // namespace smlat
