#include "smlat/genus.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "smlat/enumerate.hpp"
#include "smlat/modular.hpp"

namespace smlat {

namespace {

using I64 = std::int64_t;

bool is_prime(long p) {
  if (p < 2) return false;
  for (long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

I64 mod(I64 a, I64 p) { return ((a % p) + p) % p; }

I64 inv_mod(I64 a, I64 p) {
  I64 r = 1, b = mod(a, p), e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

std::vector<std::vector<I64>> gram_mod(const Lattice& L, long p) {
  const std::size_t n = L.dim();
  std::vector<std::vector<I64>> g(n, std::vector<I64>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = mod_pos(L.gram()(i, j), Int(p)).get_si();
  return g;
}

void check_prime(const Lattice& L, long p) {
  if (p < 3 || !is_prime(p)) throw MathError("neighbor prime must be an odd prime, got " + std::to_string(p));
  if (L.det() % p == 0) throw MathError(std::to_string(p) + " divides det(L)");
}

constexpr double kSecondPrimeLines = 1e5;

double line_count(std::size_t n, long p) { return (std::pow(double(p), double(n)) - 1) / double(p - 1); }

// Pack a vector mod p into an integer key.
std::uint64_t pack(const std::vector<I64>& v, long p) {
  std::uint64_t code = 0;
  for (auto it = v.rbegin(); it != v.rend(); ++it) code = code * std::uint64_t(p) + std::uint64_t(*it);
  return code;
}

void normalize(std::vector<I64>& v, long p) {
  for (I64 x : v)
    if (x) {
      const I64 s = inv_mod(x, p);
      for (I64& y : v) y = y * s % p;
      return;
    }
}

std::string gram_text(const Lattice& L) { return to_string(L.gram()); }

Lattice reduced(const Lattice& L) { return Lattice(lll_reduce(L.gram()).gram); }

// Rank-one summands Zx with (x, x) <= kSplitNorm are split off before any isometry test:
// such x satisfy (x, L) in (x, x)Z, are pairwise orthogonal, and the set of all of them is
// an isometry invariant, so L is isometric to M iff the keys agree and the complements are.
constexpr long kSplitNorm = 3;

struct SplitForm {
  std::string key;
  std::optional<Lattice> rest;
};

SplitForm split_form(const Lattice& L) {
  EnumOptions o;
  o.keep_vectors = true;
  const VectorList vl = short_vectors(L, Rat(kSplitNorm), o);
  SplitForm f;
  std::ostringstream os;
  os << L.dim() << '|' << L.det() << '|' << (L.is_even() ? 'e' : 'o');
  for (const auto& [norm, count] : vl.counts) os << '|' << norm << ':' << count;
  const std::size_t n = L.dim();
  const auto g = L.gram_i64();
  std::vector<std::size_t> ones;
  for (std::size_t k = 0; k < vl.vectors.size(); ++k) {
    const auto& x = vl.vectors[k];
    if (*std::find_if(x.begin(), x.end(), [](I64 c) { return c != 0; }) < 0) continue;  // one sign
    const I64 d = vl.norms[k].get_num().get_si();
    bool summand = true;
    for (std::size_t i = 0; i < n && summand; ++i) {
      I64 s = 0;
      for (std::size_t j = 0; j < n; ++j) s += g[i][j] * x[j];
      summand = s % d == 0;
    }
    if (summand) ones.push_back(k);
  }
  std::vector<Rat> one_norms;
  for (std::size_t k : ones) one_norms.push_back(vl.norms[k]);
  std::sort(one_norms.begin(), one_norms.end());
  os << "|r";
  for (const Rat& d : one_norms) os << ':' << d;
  f.key = os.str();
  if (ones.empty()) {
    f.rest = L;
  } else if (ones.size() < n) {
    IntMat gx(n, ones.size());
    for (std::size_t c = 0; c < ones.size(); ++c) {
      const auto& x = vl.vectors[ones[c]];
      for (std::size_t i = 0; i < n; ++i) {
        Int s = 0;
        for (std::size_t j = 0; j < n; ++j) s += L.gram()(i, j) * Int(static_cast<long>(x[j]));
        gx(i, c) = s;
      }
    }
    f.rest = reduced(sublattice(L, integer_kernel(gx).transpose()));
  }
  return f;
}


// Index of one representative per orbit of Aut(L) on the lines, in enumeration order.
std::vector<std::size_t> orbit_representatives(const std::vector<IntVec>& lines, const std::vector<IntMat>& gens,
                                               long p) {
  const std::size_t m = lines.size();
  std::unordered_map<std::uint64_t, std::size_t> index;
  index.reserve(m * 2);
  std::vector<std::vector<I64>> small(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (const Int& x : lines[i]) small[i].push_back(x.get_si());
    index.emplace(pack(small[i], p), i);
  }
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const IntMat& g : gens) {
    const std::size_t n = g.rows();
    std::vector<std::vector<I64>> gm(n, std::vector<I64>(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) gm[i][j] = mod_pos(g(i, j), Int(p)).get_si();
    std::vector<I64> img(n);
    for (std::size_t a = 0; a < m; ++a) {
      for (std::size_t i = 0; i < n; ++i) {
        I64 s = 0;
        for (std::size_t j = 0; j < n; ++j) s += gm[i][j] * small[a][j];
        img[i] = s % p;
      }
      normalize(img, p);
      auto it = index.find(pack(img, p));
      if (it == index.end()) throw std::logic_error("automorphism does not preserve isotropic lines");
      const std::size_t ra = find(a), rb = find(it->second);
      if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    }
  }
  std::vector<std::size_t> reps;
  for (std::size_t a = 0; a < m; ++a)
    if (find(a) == a) reps.push_back(a);
  return reps;
}

struct ClassStore {
  std::vector<Lattice> classes;
  std::vector<std::string> keys;
  std::vector<std::optional<IsometryTester>> rests;
  std::map<std::string, std::vector<std::size_t>> buckets;
  IsoOptions iso;

  // Index of the class of L, inserting it when new; second is true for a new class.
  std::pair<std::size_t, bool> insert(const Lattice& L) {
    SplitForm f = split_form(L);
    auto& bucket = buckets[f.key];
    for (std::size_t idx : bucket)
      if (!f.rest || rests[idx]->test(*f.rest).isometric) return {idx, false};
    bucket.push_back(classes.size());
    classes.push_back(L);
    keys.push_back(f.key);
    if (f.rest) {
      rests.emplace_back(std::in_place, *f.rest, iso);
    } else {
      rests.emplace_back();
    }
    return {classes.size() - 1, true};
  }

  void pop() {
    std::erase(buckets[keys.back()], classes.size() - 1);
    classes.pop_back();
    keys.pop_back();
    rests.pop_back();
  }
};

}  // namespace

std::vector<IntVec> isotropic_lines(const Lattice& L, long p, std::uint64_t cap) {
  const std::size_t n = L.dim();
  if (line_count(n, p) > double(cap))
    throw InfrastructureError("too many lines mod " + std::to_string(p) + " in dimension " + std::to_string(n));
  const auto g = gram_mod(L, p);
  std::vector<IntVec> out;
  std::vector<I64> v(n);
  for (std::size_t lead = 0; lead < n; ++lead) {
    std::fill(v.begin(), v.end(), 0);
    v[lead] = 1;
    while (true) {
      I64 q = 0;
      for (std::size_t i = lead; i < n; ++i) {
        if (!v[i]) continue;
        I64 row = 0;
        for (std::size_t j = lead; j < n; ++j) row += g[i][j] * v[j];
        q += v[i] * (row % p);
      }
      if (q % p == 0) {
        IntVec w(n);
        for (std::size_t i = 0; i < n; ++i) w[i] = Int(static_cast<long>(v[i]));
        out.push_back(std::move(w));
      }
      bool wrapped = true;  // odometer over the entries after `lead`
      for (std::size_t pos = n; pos > lead + 1;) {
        --pos;
        if (++v[pos] < p) {
          wrapped = false;
          break;
        }
        v[pos] = 0;
      }
      if (wrapped) break;
    }
  }
  return out;
}

std::optional<long> choose_prime(const Lattice& L, long after) {
  for (long p = std::max(3L, after + 1); p < 100; ++p) {
    if (!is_prime(p) || L.det() % p == 0) continue;
    if (L.dim() >= 3 || !isotropic_lines(L, p).empty()) return p;
  }
  return std::nullopt;
}

IntVec lift_isotropic(const Lattice& L, long p, const IntVec& v) {
  check_prime(L, p);
  const IntMat& G = L.gram();
  const IntVec gv = G.apply(v);
  const Int q = std::inner_product(v.begin(), v.end(), gv.begin(), Int(0));
  if (mod_pos(q, Int(p)) != 0) throw MathError("vector is not isotropic mod " + std::to_string(p));
  std::size_t j = 0;
  while (j < v.size() && mod_pos(gv[j], Int(p)) == 0) ++j;
  if (j == v.size()) throw MathError("vector lies in pL");
  // (v + p t e_j)^2 = q + 2 p t (Gv)_j mod p^2
  const I64 qp = mod_pos(Int(q / p), Int(p)).get_si();
  const I64 gj = mod_pos(gv[j], Int(p)).get_si();
  const I64 t = mod(-qp * inv_mod(2 * gj % p, p), p);
  IntVec w = v;
  w[j] += Int(p) * t;
  return w;
}

Lattice neighbor(const Lattice& L, long p, const IntVec& v) {
  check_prime(L, p);
  const std::size_t n = L.dim();
  if (v.size() != n) throw std::invalid_argument("neighbor: vector has the wrong length");
  const IntMat& G = L.gram();
  const IntVec gv = G.apply(v);
  const Int q = std::inner_product(v.begin(), v.end(), gv.begin(), Int(0));
  const Int pp = Int(p) * p;
  if (mod_pos(q, pp) != 0) throw MathError("(v, v) is not divisible by p^2; lift the isotropic vector first");
  std::size_t j = 0;
  while (j < n && mod_pos(gv[j], Int(p)) == 0) ++j;
  if (j == n) throw MathError("vector lies in pL and defines no neighbor");

  // rows: p * basis of L_v = {x : (x, v) = 0 mod p}, then v; everything over p
  const I64 ginv = inv_mod(mod_pos(gv[j], Int(p)).get_si(), p);
  IntMat gens(n + 1, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (i == j) {
      gens(i, j) = pp;
      continue;
    }
    gens(i, i) = p;
    gens(i, j) = -Int(p) * mod(mod_pos(gv[i], Int(p)).get_si() * ginv, p);
  }
  for (std::size_t c = 0; c < n; ++c) gens(n, c) = v[c];
  const IntMat h = hnf(gens).H;
  IntMat B(n, n);  // columns
  std::size_t r = 0;
  for (std::size_t i = 0; i < h.rows() && r < n; ++i) {
    const auto row = h.row(i);
    if (std::all_of(row.begin(), row.end(), [](const Int& x) { return x == 0; })) continue;
    for (std::size_t c = 0; c < n; ++c) B(c, r) = row[c];
    ++r;
  }
  if (r != n) throw std::logic_error("neighbor: generators do not have full rank");
  IntMat g = B.transpose() * G * B;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      if (g(a, b) % pp != 0) throw std::logic_error("neighbor: Gram matrix is not integral");
      g(a, b) /= pp;
    }
  Lattice out = reduced(Lattice(g));
  if (out.det() != L.det()) throw std::logic_error("neighbor: determinant changed");
  return out;
}

GenusResult enumerate_genus(const std::vector<Lattice>& seeds, const GenusLimits& limits) {
  if (seeds.empty()) throw std::invalid_argument("enumerate_genus: no seed");
  GenusResult res;
  res.primes = limits.primes;
  if (res.primes.empty()) {
    const auto p = choose_prime(seeds.front());
    if (!p) {
      res.notes.push_back("no isotropic line mod any small prime: no neighbors");
    } else {
      res.primes.push_back(*p);
      // a second prime cross-checks connectivity when its line count stays moderate
      if (auto q = choose_prime(seeds.front(), *p); q && line_count(seeds.front().dim(), *q) <= kSecondPrimeLines)
        res.primes.push_back(*q);
    }
  }
  if (limits.primes.empty() && res.primes.size() == 1)
    res.notes.push_back("second prime skipped: too many lines for a cross-check");
  for (long p : res.primes) check_prime(seeds.front(), p);

  ClassStore store;
  store.iso = limits.iso;
  for (const Lattice& s : seeds) {
    if (s.det() != seeds.front().det() || s.dim() != seeds.front().dim())
      throw std::invalid_argument("enumerate_genus: seeds differ in dimension or determinant");
    store.insert(reduced(s));
  }
  bool aut_skipped = false;
  for (std::size_t next = 0; next < store.classes.size(); ++next) {
    const Lattice L = store.classes[next];
    std::vector<IntMat> gens;
    if (limits.use_aut) {
      try {
        IsoOptions o = limits.iso;
        o.node_cap = std::min<std::uint64_t>(o.node_cap, 5'000'000);
        gens = aut_order(L, o).generators;
      } catch (const InfrastructureError&) {
        aut_skipped = true;
      }
    }
    for (long p : res.primes) {
      const auto lines = isotropic_lines(L, p, limits.line_cap);
      std::vector<std::size_t> reps(lines.size());
      std::iota(reps.begin(), reps.end(), 0);
      if (!gens.empty()) reps = orbit_representatives(lines, gens, p);
      for (std::size_t idx : reps) {
        const Lattice M = neighbor(L, p, lift_isotropic(L, p, lines[idx]));
        ++res.neighbors;
        if (store.insert(M).second && store.classes.size() > limits.class_cap) {
          res.complete = false;
          res.notes.push_back("class cap of " + std::to_string(limits.class_cap) + " reached; the list is partial");
          store.pop();
          goto done;
        }
      }
    }
  }
done:
  if (aut_skipped) res.notes.push_back("automorphism reduction skipped for some classes (node cap)");
  res.notes.push_back("completeness assumes the neighbor graph at the primes used is connected");

  {
    std::vector<std::pair<std::string, std::string>> keys;
    std::vector<std::size_t> order(store.classes.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = 0; i < store.classes.size(); ++i) keys.emplace_back(store.keys[i], gram_text(store.classes[i]));
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    for (std::size_t i : order) res.classes.push_back(store.classes[i]);
  }
  // pairwise non-isometric, re-checked independently of the buckets for small lists
  if (res.classes.size() <= 40)
    for (std::size_t a = 0; a < res.classes.size(); ++a)
      for (std::size_t b = a + 1; b < res.classes.size(); ++b)
        if (isometric(res.classes[a], res.classes[b], limits.iso).isometric)
          throw std::logic_error("enumerate_genus: duplicate class");
  return res;
}

GenusResult enumerate_genus(const Lattice& seed, long p, GenusLimits limits) {
  limits.primes = {p};
  return enumerate_genus(std::vector<Lattice>{seed}, limits);
}

std::vector<Lattice> parity_seeds(const Lattice& L) {
  if (L.is_even()) return {reduced(L)};
  const EvenSublattice ev = even_sublattice(L);
  const IntMat& G0 = ev.lattice.gram();
  const std::size_t n = L.dim();
  if (n > 20) throw InfrastructureError("parity_seeds: dimension too large");
  ClassStore store;
  store.insert(reduced(L));
  for (std::uint64_t mask = 1; mask < (std::uint64_t(1) << n); ++mask) {
    IntVec x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1;
    const IntVec gx = G0.apply(x);
    if (std::any_of(gx.begin(), gx.end(), [](const Int& y) { return mod_pos(y, Int(2)) != 0; })) continue;
    if (mod_pos(std::inner_product(x.begin(), x.end(), gx.begin(), Int(0)), Int(4)) != 0) continue;
    IntMat gens(n + 1, n);
    for (std::size_t i = 0; i < n; ++i) gens(i, i) = 2;
    for (std::size_t i = 0; i < n; ++i) gens(n, i) = x[i];
    const IntMat h = hnf(gens).H;
    IntMat B(n, n);
    std::size_t r = 0;
    for (std::size_t i = 0; i < h.rows() && r < n; ++i) {
      const auto row = h.row(i);
      if (std::all_of(row.begin(), row.end(), [](const Int& y) { return y == 0; })) continue;
      for (std::size_t c = 0; c < n; ++c) B(c, r) = row[c];
      ++r;
    }
    IntMat g = B.transpose() * G0 * B;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) g(a, b) /= 4;
    store.insert(reduced(Lattice(g)));
  }
  return store.classes;
}

double isotropic_line_estimate(std::size_t dim, long p) { return line_count(dim, p) / double(p); }

ClassifyResult classify_long_shadow(int N, long k, const GenusLimits& limits) {
  const ModParams mp = ModParams::for_level(N);
  if (k < 1 || k > mp.kmax)
    throw MathError("k must lie in [1, " + std::to_string(mp.kmax) + "] for N = " + std::to_string(N));
  const Lattice C = orthogonal_power(c_n(N), static_cast<int>(k));
  const std::size_t dim = C.dim();
  if (dim > limits.max_dim && !limits.force) {
    const long p = choose_prime(C).value_or(3);
    std::ostringstream os;
    os << "refusing classify for N=" << N << ", k=" << k << ": dimension " << dim << " exceeds " << limits.max_dim
       << "; about " << std::llround(isotropic_line_estimate(dim, p)) << " isotropic lines mod " << p
       << " per class before symmetry reduction (use --force to run anyway)";
    throw SearchRefused(os.str());
  }
  ClassifyResult res;
  res.N = N;
  res.k = k;
  res.seeds = parity_seeds(C);
  res.genus = enumerate_genus(res.seeds, limits);
  const Rat target = M(N, 1, k);
  for (const Lattice& L : res.genus.classes) {
    if (minimum(L) < 2) {
      ++res.rejected_min;
      continue;
    }
    if (min0_shadow(L) != target) {
      ++res.rejected_min0;
      continue;
    }
    if (!is_strongly_modular(L, N).strongly_modular()) {
      ++res.rejected_strong;
      continue;
    }
    res.survivors.push_back(L);
  }
  return res;
}

}  // namespace smlat
