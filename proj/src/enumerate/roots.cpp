#include <algorithm>
#include <numeric>

#include "smlat/enumerate.hpp"

namespace smlat {

std::string RootComponent::name() const { return std::string(1, family) + std::to_string(rank); }

namespace {

std::string superscript(int n) {
  static const char* digits[] = {"⁰", "¹", "²", "³", "⁴", "⁵", "⁶", "⁷", "⁸", "⁹"};
  std::string s;
  for (char ch : std::to_string(n)) s += digits[ch - '0'];
  return s;
}

int family_rank(char f) { return f == 'E' ? 0 : f == 'D' ? 1 : 2; }

// runs of equal components as (component, multiplicity)
std::vector<std::pair<RootComponent, int>> grouped(const std::vector<RootComponent>& comps) {
  std::vector<std::pair<RootComponent, int>> g;
  for (const auto& c : comps) {
    if (!g.empty() && g.back().first == c)
      ++g.back().second;
    else
      g.emplace_back(c, 1);
  }
  return g;
}

}  // namespace

std::string RootSystem::to_string() const {
  if (components.empty()) return "0";
  std::string s;
  for (const auto& [c, m] : grouped(components)) {
    if (!s.empty()) s += " ⊥ ";
    s += c.name();
    if (m > 1) s += superscript(m);
  }
  return s;
}

std::string RootSystem::to_ascii() const {
  if (components.empty()) return "0";
  std::string s;
  for (const auto& [c, m] : grouped(components)) {
    if (!s.empty()) s += "+";
    s += c.name();
    if (m > 1) s += "^" + std::to_string(m);
  }
  return s;
}

std::optional<RootComponent> classify_component(int rank, std::uint64_t roots) {
  if (rank <= 0) return std::nullopt;
  const auto r = static_cast<std::uint64_t>(rank);
  // D3 = A3, so A is tried first
  if (roots == r * (r + 1)) return RootComponent{'A', rank, roots};
  if (rank >= 4 && roots == 2 * r * (r - 1)) return RootComponent{'D', rank, roots};
  if ((rank == 6 && roots == 72) || (rank == 7 && roots == 126) || (rank == 8 && roots == 240))
    return RootComponent{'E', rank, roots};
  return std::nullopt;
}

std::uint64_t root_count(const Lattice& L) { return short_vectors(L, Rat(2)).count(Rat(2)); }

RootSystem root_system(const Lattice& L) {
  EnumOptions opts;
  opts.keep_vectors = true;
  VectorList vl = short_vectors(L, Rat(2), opts);
  std::vector<const std::vector<std::int64_t>*> roots;
  for (std::size_t i = 0; i < vl.vectors.size(); ++i)
    if (vl.norms[i] == 2) roots.push_back(&vl.vectors[i]);

  const auto G = L.gram_i64();
  const std::size_t n = L.dim(), r = roots.size();
  std::vector<std::vector<std::int64_t>> Gv(r, std::vector<std::int64_t>(n, 0));
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) Gv[a][i] += G[i][j] * (*roots[a])[j];

  std::vector<std::size_t> parent(r);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t a = 0; a < r; ++a)
    for (std::size_t b = a + 1; b < r; ++b) {
      std::int64_t ip = 0;
      for (std::size_t i = 0; i < n; ++i) ip += Gv[a][i] * (*roots[b])[i];
      if (ip != 0) parent[find(a)] = find(b);
    }

  std::map<std::size_t, std::vector<std::size_t>> comps;
  for (std::size_t a = 0; a < r; ++a) comps[find(a)].push_back(a);

  RootSystem rs;
  for (const auto& [rep, members] : comps) {
    RatMat M(members.size(), n);
    for (std::size_t k = 0; k < members.size(); ++k)
      for (std::size_t i = 0; i < n; ++i) M(k, i) = Rat(static_cast<long>((*roots[members[k]])[i]));
    const int rk = static_cast<int>(rank(M));
    auto c = classify_component(rk, members.size());
    if (!c)
      throw MathError("root component of rank " + std::to_string(rk) + " with " + std::to_string(members.size()) +
                      " roots matches no ADE type");
    rs.components.push_back(*c);
    rs.total_rank += rk;
    rs.total_roots += members.size();
  }
  std::sort(rs.components.begin(), rs.components.end(), [](const RootComponent& a, const RootComponent& b) {
    if (a.rank != b.rank) return a.rank > b.rank;
    return family_rank(a.family) < family_rank(b.family);
  });
  return rs;
}

}  // namespace smlat
