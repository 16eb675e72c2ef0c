#include "smlat/exact.hpp"

#include <algorithm>

namespace smlat {

// Integral LLL on a Gram matrix (Cohen, Alg. 2.6.7): Gram-Schmidt data is kept
// as the integers d_i and lambda_ij, so every step is exact.
LllResult lll_reduce(const IntMat& gram) {
  if (!is_symmetric(gram)) throw MathError("lll_reduce: Gram matrix is not symmetric");
  const std::size_t n = gram.rows();
  LllResult res{gram, IntMat::identity(n)};
  if (n == 0) return res;
  IntMat& G = res.gram;
  IntMat& H = res.U;

  // 1-based bookkeeping to mirror the textbook indices.
  std::vector<Int> d(n + 1);
  std::vector<std::vector<Int>> lam(n + 1, std::vector<Int>(n + 1));
  auto g = [&](std::size_t i, std::size_t j) -> Int& { return G(i - 1, j - 1); };

  auto not_pd = [] { return MathError("lll_reduce: Gram matrix is not positive definite"); };

  d[0] = 1;
  d[1] = g(1, 1);
  if (d[1] <= 0) throw not_pd();
  if (n == 1) return res;

  auto redi = [&](std::size_t k, std::size_t l) {
    Int twice = 2 * lam[k][l];
    if (abs(twice) <= d[l]) return;
    Int q = floor_div(twice + d[l], 2 * d[l]);
    for (std::size_t r = 0; r < n; ++r) H(r, k - 1) -= q * H(r, l - 1);
    for (std::size_t j = 1; j <= n; ++j) g(k, j) -= q * g(l, j);
    for (std::size_t i = 1; i <= n; ++i) g(i, k) -= q * g(i, l);
    lam[k][l] -= q * d[l];
    for (std::size_t i = 1; i < l; ++i) lam[k][i] -= q * lam[l][i];
  };

  std::size_t kmax = 1;
  auto swapi = [&](std::size_t k) {
    H.swap_cols(k - 1, k - 2);
    G.swap_rows(k - 1, k - 2);
    G.swap_cols(k - 1, k - 2);
    for (std::size_t j = 1; j + 2 <= k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
    Int l = lam[k][k - 1];
    Int B = (d[k - 2] * d[k] + l * l) / d[k - 1];
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      Int t = lam[i][k];
      lam[i][k] = (d[k] * lam[i][k - 1] - l * t) / d[k - 1];
      lam[i][k - 1] = (B * t + l * lam[i][k]) / d[k];
    }
    d[k - 1] = B;
  };

  std::size_t k = 2;
  while (k <= n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 1; j <= k; ++j) {
        Int u = g(k, j);
        for (std::size_t i = 1; i < j; ++i) u = (d[i] * u - lam[k][i] * lam[j][i]) / d[i - 1];
        if (j < k) {
          lam[k][j] = u;
        } else {
          if (u <= 0) throw not_pd();
          d[k] = u;
        }
      }
    }
    redi(k, k - 1);
    if (4 * d[k] * d[k - 2] < 3 * d[k - 1] * d[k - 1] - 4 * lam[k][k - 1] * lam[k][k - 1]) {
      swapi(k);
      k = std::max<std::size_t>(2, k - 1);
      continue;
    }
    for (std::size_t l = k - 1; l-- > 1;) redi(k, l);
    ++k;
  }
  if (H.transpose() * gram * H != G) throw std::logic_error("lll_reduce: transform does not reproduce the Gram matrix");
  return res;
}

}  // namespace smlat
