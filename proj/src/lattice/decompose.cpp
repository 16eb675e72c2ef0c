#include <algorithm>
#include <map>
#include <numeric>

#include "smlat/enumerate.hpp"
#include "smlat/lattice.hpp"

namespace smlat {

namespace {

using I64 = std::int64_t;

// Basis (columns, L-coordinates) of the span of the given vectors.
IntMat span_basis(const std::vector<std::vector<I64>>& vs, std::size_t n) {
  IntMat basis(0, n);
  std::size_t next = 0;
  while (next < vs.size()) {
    const std::size_t take = std::min<std::size_t>(64, vs.size() - next);
    IntMat rows(basis.rows() + take, n);
    for (std::size_t r = 0; r < basis.rows(); ++r)
      for (std::size_t c = 0; c < n; ++c) rows(r, c) = basis(r, c);
    for (std::size_t t = 0; t < take; ++t)
      for (std::size_t c = 0; c < n; ++c) rows(basis.rows() + t, c) = Int(static_cast<long>(vs[next + t][c]));
    next += take;
    const IntMat h = hnf(rows).H;
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < h.rows(); ++r) {
      const auto row = h.row(r);
      if (std::any_of(row.begin(), row.end(), [](const Int& x) { return x != 0; })) keep.push_back(r);
    }
    basis = IntMat(keep.size(), n);
    for (std::size_t r = 0; r < keep.size(); ++r)
      for (std::size_t c = 0; c < n; ++c) basis(r, c) = h(keep[r], c);
  }
  return basis.transpose();
}

}  // namespace

std::vector<Lattice> decompose_orthogonal(const Lattice& L) {
  const std::size_t n = L.dim();
  if (n == 0) return {};
  const IntMat red = lll_reduce(L.gram()).gram;
  Int bound = 0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, red(i, i));
  EnumOptions o;
  o.keep_vectors = true;
  const VectorList vl = short_vectors(L, Rat(bound), o);
  const auto g = L.gram_i64();
  const std::size_t V = vl.vectors.size();
  std::vector<std::vector<I64>> gv(V, std::vector<I64>(n, 0));
  std::vector<I64> norm(V);
  for (std::size_t k = 0; k < V; ++k) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) gv[k][i] += g[i][j] * vl.vectors[k][j];
    norm[k] = vl.norms[k].get_num().get_si();
  }
  auto ip = [&](std::size_t a, std::size_t b) {
    I64 s = 0;
    for (std::size_t i = 0; i < n; ++i) s += vl.vectors[a][i] * gv[b][i];
    return s;
  };
  // v = x + (v - x) with (x, v - x) = 0 makes v decomposable; indecomposable vectors
  // each lie in one summand and generate L
  std::vector<std::size_t> indec;
  for (std::size_t v = 0; v < V; ++v) {
    bool decomposable = false;
    for (std::size_t x = 0; x < V && !decomposable; ++x)
      decomposable = norm[x] < norm[v] && ip(x, v) == norm[x];
    if (!decomposable) indec.push_back(v);
  }
  std::vector<std::size_t> parent(indec.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < indec.size(); ++a)
    for (std::size_t b = a + 1; b < indec.size(); ++b)
      if (ip(indec[a], indec[b]) != 0) parent[find(a)] = find(b);
  std::map<std::size_t, std::vector<std::vector<I64>>> comps;
  for (std::size_t a = 0; a < indec.size(); ++a) comps[find(a)].push_back(vl.vectors[indec[a]]);

  std::vector<Lattice> out;
  std::size_t total_rank = 0;
  Int total_det = 1;
  for (const auto& [root, vs] : comps) {
    Lattice part = sublattice(L, span_basis(vs, n));
    part = Lattice(lll_reduce(part.gram()).gram);
    total_rank += part.dim();
    total_det *= part.det();
    out.push_back(std::move(part));
  }
  if (total_rank != n || total_det != L.det()) return {L};  // summands do not fill L: treat as indecomposable
  std::stable_sort(out.begin(), out.end(), [](const Lattice& a, const Lattice& b) {
    if (a.dim() != b.dim()) return a.dim() > b.dim();
    return a.det() < b.det();
  });
  return out;
}

CnSplit split_cn_summands(const Lattice& L, int N) {
  const auto divs = divisors(N);
  std::map<Int, int> unit_like;
  std::vector<Lattice> rest;
  for (auto& part : decompose_orthogonal(L)) {
    if (part.dim() == 1 && N % part.gram()(0, 0) == 0) {
      ++unit_like[part.gram()(0, 0)];
    } else {
      rest.push_back(std::move(part));
    }
  }
  CnSplit out;
  out.copies = unit_like.empty() ? 0 : unit_like.begin()->second;
  for (int d : divs) {
    const int c = unit_like.count(Int(d)) ? unit_like[Int(d)] : 0;
    if (c != out.copies) {
      std::string diag;
      for (int e : divs) diag += " sqrt(" + std::to_string(e) + ")Z:" + std::to_string(unit_like.count(Int(e)) ? unit_like[Int(e)] : 0);
      throw MathError("rank-one summands do not assemble into copies of C_" + std::to_string(N) + " (" + diag.substr(1) +
                      "); the lattice is not strongly modular");
    }
  }
  for (auto& part : rest) out.rest = out.rest ? direct_sum(*out.rest, part) : part;
  return out;
}

}  // namespace smlat
