#include "smlat/isometry.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>
#include <unordered_map>

namespace smlat {

IsometryUndecided::IsometryUndecided(std::uint64_t cap)
    : InfrastructureError("isometry backtrack exceeded its node cap of " + std::to_string(cap) + "; undecided") {}

namespace {

using I64 = std::int64_t;
using Coords = std::vector<I64>;

struct CoordsHash {
  std::size_t operator()(const Coords& c) const {
    std::size_t h = 0xcbf29ce484222325ull;
    for (I64 x : c) h = (h ^ static_cast<std::size_t>(x)) * 0x100000001b3ull;
    return h;
  }
};

I64 dot(const Coords& a, const Coords& b) {
  __int128 s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<__int128>(a[i]) * b[i];
  return static_cast<I64>(s);
}

// All nonzero vectors of norm <= bound, both signs, with G*v cached for inner products.
struct VectorSet {
  std::size_t n = 0;
  std::vector<Coords> vec, gvec;
  std::vector<I64> norm;
  std::unordered_map<Coords, int, CoordsHash> index;
  std::map<I64, std::vector<int>> by_norm;
  // per-vector histogram of inner products with the minimal vectors (isometry invariant)
  std::vector<std::vector<std::pair<I64, int>>> sig;

  I64 ip(int a, int b) const { return dot(vec[static_cast<std::size_t>(a)], gvec[static_cast<std::size_t>(b)]); }
  int find(const Coords& c) const {
    auto it = index.find(c);
    return it == index.end() ? -1 : it->second;
  }
  std::size_t size() const { return vec.size(); }
};

VectorSet collect(const Lattice& L, I64 bound, std::uint64_t cap) {
  EnumOptions o;
  o.keep_vectors = true;
  o.max_vectors = cap;
  VectorList vl = short_vectors(L, Rat(bound), o);
  const auto g = L.gram_i64();
  VectorSet vs;
  vs.n = L.dim();
  for (std::size_t k = 0; k < vl.vectors.size(); ++k) {
    const Coords& v = vl.vectors[k];
    Coords gv(vs.n, 0);
    for (std::size_t i = 0; i < vs.n; ++i) {
      __int128 s = 0;
      for (std::size_t j = 0; j < vs.n; ++j) s += static_cast<__int128>(g[i][j]) * v[j];
      gv[i] = static_cast<I64>(s);
    }
    const int id = static_cast<int>(vs.vec.size());
    vs.index.emplace(v, id);
    vs.vec.push_back(v);
    vs.gvec.push_back(std::move(gv));
    vs.norm.push_back(vl.norms[k].get_num().get_si());
    vs.by_norm[vs.norm.back()].push_back(id);
  }
  return vs;
}

// Fills sig for every vector of norm <= up_to.
void compute_signatures(VectorSet& vs, I64 up_to) {
  vs.sig.assign(vs.size(), {});
  if (vs.by_norm.empty()) return;
  const auto& shell = vs.by_norm.begin()->second;
  std::map<I64, int> h;
  for (const auto& [nv, ids] : vs.by_norm) {
    if (nv > up_to) break;
    for (int v : ids) {
      h.clear();
      for (int w : shell) ++h[vs.ip(v, w)];
      vs.sig[static_cast<std::size_t>(v)].assign(h.begin(), h.end());
    }
  }
}

// Linearly independent short vectors of A, each time one whose fingerprint class
// (norm and inner products with the vectors already chosen) is smallest.
struct Base {
  std::vector<int> idx;
  std::vector<I64> gram;  // n x n
  std::vector<I64> adj;   // adjugate of the column matrix of base vectors
  std::vector<std::vector<std::pair<I64, int>>> sig;  // signatures of the base vectors
  I64 det = 1;
  I64 max_norm = 0;
  // Coset representatives of L modulo the span of the base, as numerators over |det| in base
  // coordinates, grouped by their last nonzero coordinate: the level at which they can be checked.
  std::vector<std::vector<Coords>> glue;
  I64 at(std::size_t i, std::size_t j) const { return gram[i * idx.size() + j]; }
};

constexpr I64 kMaxGlue = 1 << 16;

std::vector<std::vector<Coords>> glue_by_level(const Base& b, std::size_t n) {
  std::vector<std::vector<Coords>> out(n);
  const I64 D = b.det < 0 ? -b.det : b.det;
  if (D == 1 || D > kMaxGlue) return out;  // beyond the cap the leaf test alone decides
  std::vector<Coords> gens(n, Coords(n));
  for (std::size_t c = 0; c < n; ++c)
    for (std::size_t r = 0; r < n; ++r) {
      const I64 q = (b.det < 0 ? -b.adj[r * n + c] : b.adj[r * n + c]) % D;
      gens[c][r] = q < 0 ? q + D : q;
    }
  std::unordered_map<Coords, char, CoordsHash> seen;
  std::vector<Coords> queue{Coords(n, 0)};
  seen.emplace(queue[0], 1);
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (const auto& g : gens) {
      Coords next(n);
      for (std::size_t r = 0; r < n; ++r) next[r] = (queue[h][r] + g[r]) % D;
      if (seen.emplace(next, 1).second) queue.push_back(std::move(next));
    }
  for (const auto& q : queue) {
    std::size_t last = n;
    for (std::size_t r = 0; r < n; ++r)
      if (q[r] != 0) last = r;
    if (last < n) out[last].push_back(q);
  }
  return out;
}

Base choose_base(const VectorSet& va) {
  const std::size_t n = va.n;
  Base b;
  std::vector<RatVec> echelon;  // reduced rows with pivot columns
  std::vector<std::size_t> pivots;
  auto reduce = [&](const Coords& v) {
    RatVec r(v.begin(), v.end());
    for (std::size_t e = 0; e < echelon.size(); ++e) {
      if (r[pivots[e]] == 0) continue;
      const Rat f = r[pivots[e]] / echelon[e][pivots[e]];
      for (std::size_t j = 0; j < n; ++j) r[j] -= f * echelon[e][j];
    }
    return r;
  };
  std::vector<Coords> keys(va.size());
  for (std::size_t k = 0; k < va.size(); ++k) {
    keys[k] = {va.norm[k]};
    for (const auto& [x, c] : va.sig[k]) keys[k].push_back(x * 1000003 + c);
  }
  while (b.idx.size() < n) {
    std::unordered_map<Coords, int, CoordsHash> class_size;
    for (const auto& key : keys) ++class_size[key];
    bool placed = false;
    std::vector<int> order(va.size());
    for (std::size_t k = 0; k < va.size(); ++k) order[k] = static_cast<int>(k);
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
      const auto cx = class_size[keys[static_cast<std::size_t>(x)]], cy = class_size[keys[static_cast<std::size_t>(y)]];
      return cx != cy ? cx < cy : va.norm[static_cast<std::size_t>(x)] < va.norm[static_cast<std::size_t>(y)];
    });
    for (int id : order) {
      RatVec r = reduce(va.vec[static_cast<std::size_t>(id)]);
      auto nz = std::find_if(r.begin(), r.end(), [](const Rat& x) { return x != 0; });
      if (nz == r.end()) continue;
      pivots.push_back(static_cast<std::size_t>(nz - r.begin()));
      echelon.push_back(std::move(r));
      b.idx.push_back(id);
      b.max_norm = std::max(b.max_norm, va.norm[static_cast<std::size_t>(id)]);
      placed = true;
      break;
    }
    if (!placed) throw std::logic_error("isometry: short vectors do not span the lattice");
    for (std::size_t k = 0; k < va.size(); ++k) keys[k].push_back(va.ip(static_cast<int>(k), b.idx.back()));
  }
  b.gram.resize(n * n);
  IntMat cols(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) b.gram[i * n + j] = va.ip(b.idx[i], b.idx[j]);
    for (std::size_t r = 0; r < n; ++r) cols(r, i) = va.vec[static_cast<std::size_t>(b.idx[i])][r];
  }
  const Int d = smlat::det(cols);
  const RatMat inv = inverse(cols);
  b.det = d.get_si();
  b.adj.resize(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) b.adj[i * n + j] = Rat(inv(i, j) * d).get_num().get_si();
  b.glue = glue_by_level(b, n);
  for (int id : b.idx) b.sig.push_back(va.sig[static_cast<std::size_t>(id)]);
  return b;
}

using Lists = std::vector<std::vector<int>>;

// Backtrack assigning images in `vb` to the base vectors of A, level by level.
class Search {
 public:
  Search(const VectorSet& vb, const Base& base, std::uint64_t cap, std::uint64_t& nodes)
      : vb_(vb), base_(base), n_(base.idx.size()), cap_(cap), nodes_(nodes), img_(n_, -1) {}

  Lists initial() const {
    Lists l(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      auto it = vb_.by_norm.find(base_.at(i, i));
      if (it == vb_.by_norm.end()) continue;
      for (int y : it->second)
        if (vb_.sig[static_cast<std::size_t>(y)] == base_.sig[i]) l[i].push_back(y);
    }
    return l;
  }

  /// Restrict the lists of levels > lvl to vectors compatible with img[lvl] = x; false if one empties.
  bool assign(std::size_t lvl, int x, const Lists& in, Lists& out) {
    if (++nodes_ > cap_) throw IsometryUndecided(cap_);
    img_[lvl] = x;
    if (!glue_integral(lvl)) return false;
    out.assign(n_, {});
    for (std::size_t m = lvl + 1; m < n_; ++m) {
      const I64 want = base_.at(m, lvl);
      auto& dst = out[m];
      for (int y : in[m])
        if (vb_.ip(y, x) == want) dst.push_back(y);
      if (dst.empty()) return false;
    }
    return true;
  }

  /// Depth-first search from level lvl; on success `result` holds the map in column-major n x n.
  bool run(std::size_t lvl, const Lists& lists, std::vector<I64>& result) {
    if (lvl == n_) return leaf(result);
    Lists next;
    for (int x : lists[lvl]) {
      if (!assign(lvl, x, lists, next)) continue;
      if (run(lvl + 1, next, result)) return true;
    }
    return false;
  }

  std::vector<int>& images() { return img_; }

 private:
  // images of the glue vectors completed at this level must be integral
  bool glue_integral(std::size_t lvl) const {
    const I64 D = base_.det < 0 ? -base_.det : base_.det;
    for (const auto& q : base_.glue[lvl])
      for (std::size_t r = 0; r < n_; ++r) {
        __int128 s = 0;
        for (std::size_t j = 0; j <= lvl; ++j)
          if (q[j]) s += static_cast<__int128>(q[j]) * vb_.vec[static_cast<std::size_t>(img_[j])][r];
        if (s % D != 0) return false;
      }
    return true;
  }

  bool leaf(std::vector<I64>& result) {
    // sigma = X * adj / det, X the columns of the chosen images
    result.assign(n_ * n_, 0);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) {
        __int128 s = 0;
        for (std::size_t l = 0; l < n_; ++l)
          s += static_cast<__int128>(vb_.vec[static_cast<std::size_t>(img_[l])][r]) * base_.adj[l * n_ + c];
        if (s % base_.det != 0) return false;
        result[r * n_ + c] = static_cast<I64>(s / base_.det);
      }
    return true;
  }

  const VectorSet& vb_;
  const Base& base_;
  std::size_t n_;
  std::uint64_t cap_;
  std::uint64_t& nodes_;
  std::vector<int> img_;
};

IntMat to_intmat(const std::vector<I64>& m, std::size_t n) {
  IntMat out(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) out(r, c) = Int(static_cast<long>(m[r * n + c]));
  return out;
}

// Isometry invariants of the minimal vectors: sizes of the connected components of the
// graph "nonzero inner product", and the multiset of per-vector inner-product histograms.
struct MinShellProfile {
  std::vector<std::size_t> components;
  std::vector<std::vector<std::pair<I64, int>>> histograms;
  bool operator==(const MinShellProfile&) const = default;
};

MinShellProfile min_shell_profile(const VectorSet& vs) {
  MinShellProfile p;
  if (vs.by_norm.empty()) return p;
  const auto& ids = vs.by_norm.begin()->second;
  std::vector<std::size_t> parent(ids.size());
  for (std::size_t a = 0; a < ids.size(); ++a) parent[a] = a;
  auto find = [&](std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (std::size_t a = 0; a < ids.size(); ++a) {
    std::map<I64, int> h;
    for (std::size_t b = 0; b < ids.size(); ++b) {
      const I64 x = vs.ip(ids[a], ids[b]);
      ++h[x];
      if (x != 0 && b > a) parent[find(a)] = find(b);
    }
    p.histograms.emplace_back(h.begin(), h.end());
  }
  std::map<std::size_t, std::size_t> sizes;
  for (std::size_t a = 0; a < ids.size(); ++a) ++sizes[find(a)];
  for (const auto& [root, sz] : sizes) p.components.push_back(sz);
  std::sort(p.components.begin(), p.components.end());
  std::sort(p.histograms.begin(), p.histograms.end());
  return p;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t x : v) s += (s.empty() ? "" : ", ") + std::to_string(x);
  return s;
}

// Permutation of a vector set induced by an automorphism (row-major n x n matrix).
std::vector<int> induced_perm(const VectorSet& vs, const std::vector<I64>& g) {
  const std::size_t n = vs.n;
  std::vector<int> p(vs.size());
  Coords w(n);
  for (std::size_t k = 0; k < vs.size(); ++k) {
    for (std::size_t r = 0; r < n; ++r) {
      __int128 s = 0;
      for (std::size_t c = 0; c < n; ++c) s += static_cast<__int128>(g[r * n + c]) * vs.vec[k][c];
      w[r] = static_cast<I64>(s);
    }
    const int j = vs.find(w);
    if (j < 0) throw std::logic_error("automorphism does not preserve the short vectors");
    p[k] = j;
  }
  return p;
}

using Perm = std::vector<int>;

Perm compose(const Perm& a, const Perm& b) {  // a after b
  Perm c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[static_cast<std::size_t>(b[i])];
  return c;
}

Perm invert(const Perm& a) {
  Perm c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[static_cast<std::size_t>(a[i])] = static_cast<int>(i);
  return c;
}

std::vector<char> orbit_of(int start, const std::vector<Perm>& gens, std::size_t size) {
  std::vector<char> in(size, 0);
  std::vector<int> queue{start};
  in[static_cast<std::size_t>(start)] = 1;
  for (std::size_t h = 0; h < queue.size(); ++h)
    for (const auto& g : gens) {
      const int y = g[static_cast<std::size_t>(queue[h])];
      if (!in[static_cast<std::size_t>(y)]) in[static_cast<std::size_t>(y)] = 1, queue.push_back(y);
    }
  return in;
}

// Random Schreier-Sims on the permutation action, with base the chosen base vectors.
class StabChain {
 public:
  StabChain(std::vector<int> base, std::size_t degree) : base_(std::move(base)), degree_(degree), levels_(base_.size()) {}

  void add_strong(const Perm& g) {
    strong_.push_back(g);
    strong_inv_.push_back(invert(g));
    rebuild();
  }

  /// Index of the level where g sifts out, or base size if g sifts to the identity.
  std::size_t sift(Perm& g) const {
    for (std::size_t j = 0; j < base_.size(); ++j) {
      const auto& lv = levels_[j];
      int x = g[static_cast<std::size_t>(base_[j])];
      if (lv.parent[static_cast<std::size_t>(x)] == -2) return j;
      while (x != base_[j]) {
        const int s = lv.via[static_cast<std::size_t>(x)];
        g = compose(strong_inv_[static_cast<std::size_t>(s)], g);
        x = lv.parent[static_cast<std::size_t>(x)];
      }
    }
    return base_.size();
  }

  Int order() const {
    Int o = 1;
    for (const auto& lv : levels_) o *= static_cast<unsigned long>(lv.size);
    return o;
  }

 private:
  struct Level {
    std::vector<int> parent, via;  // Schreier tree; parent -2 marks points outside the orbit
    std::size_t size = 0;
  };

  void rebuild() {
    for (std::size_t j = 0; j < base_.size(); ++j) {
      Level& lv = levels_[j];
      lv.parent.assign(degree_, -2);
      lv.via.assign(degree_, -1);
      std::vector<std::size_t> gens;
      for (std::size_t s = 0; s < strong_.size(); ++s) {
        bool fixes = true;
        for (std::size_t i = 0; i < j && fixes; ++i) fixes = strong_[s][static_cast<std::size_t>(base_[i])] == base_[i];
        if (fixes) gens.push_back(s);
      }
      std::vector<int> queue{base_[j]};
      lv.parent[static_cast<std::size_t>(base_[j])] = -1;
      for (std::size_t h = 0; h < queue.size(); ++h)
        for (std::size_t s : gens) {
          const int y = strong_[s][static_cast<std::size_t>(queue[h])];
          if (lv.parent[static_cast<std::size_t>(y)] != -2) continue;
          lv.parent[static_cast<std::size_t>(y)] = queue[h];
          lv.via[static_cast<std::size_t>(y)] = static_cast<int>(s);
          queue.push_back(y);
        }
      lv.size = queue.size();
    }
  }

  std::vector<int> base_;
  std::size_t degree_;
  std::vector<Level> levels_;
  std::vector<Perm> strong_, strong_inv_;
};

Int schreier_sims_order(const std::vector<Perm>& gens, const std::vector<int>& base, std::size_t degree) {
  StabChain chain(base, degree);
  if (gens.empty()) return 1;
  for (const auto& g : gens) chain.add_strong(g);
  std::mt19937_64 rng(0x5eed);
  std::vector<Perm> slots;
  for (std::size_t i = 0; slots.size() < 10; ++i) slots.push_back(gens[i % gens.size()]);
  auto next = [&]() {
    std::uniform_int_distribution<std::size_t> pick(0, slots.size() - 1);
    std::size_t i = pick(rng), j = pick(rng);
    while (j == i) j = pick(rng);
    slots[i] = (rng() & 1) ? compose(slots[i], slots[j]) : compose(slots[i], invert(slots[j]));
    return slots[i];
  };
  for (int w = 0; w < 60; ++w) next();
  int quiet = 0;
  while (quiet < 40) {
    Perm g = next();
    if (chain.sift(g) == base.size()) {
      ++quiet;
    } else {
      chain.add_strong(g);
      quiet = 0;
    }
  }
  return chain.order();
}

}  // namespace

bool is_automorphism(const Lattice& L, const IntMat& g) {
  return g.rows() == L.dim() && g.cols() == L.dim() && g.transpose() * L.gram() * g == L.gram();
}

struct IsometryTester::Impl {
  Lattice A;
  IsoOptions opts;
  Int min;
  std::map<Rat, std::uint64_t> counts;
  long screen_bound = 0;
  VectorSet va;
  Base base;
  MinShellProfile profile;
};

IsometryTester::IsometryTester(const Lattice& A, const IsoOptions& opts) : impl_(std::make_unique<Impl>()) {
  Impl& m = *impl_;
  m.A = A;
  m.opts = opts;
  if (A.dim() == 0) return;
  if (opts.screen) {
    m.min = minimum(A);
    m.screen_bound = std::max(opts.screen_norm, m.min.get_si());
    m.counts = short_vectors(A, m.screen_bound, {false, false, opts.max_vectors}).counts;
  }
  // the base needs vectors up to the largest diagonal of an LLL-reduced Gram
  const IntMat red = lll_reduce(A.gram()).gram;
  Int bound = 0;
  for (std::size_t i = 0; i < red.rows(); ++i) bound = std::max(bound, red(i, i));
  m.va = collect(A, bound.get_si(), opts.max_vectors);
  compute_signatures(m.va, bound.get_si());
  m.base = choose_base(m.va);
  if (opts.screen) m.profile = min_shell_profile(m.va);
}

IsometryTester::~IsometryTester() = default;
IsometryTester::IsometryTester(IsometryTester&&) noexcept = default;
IsometryTester& IsometryTester::operator=(IsometryTester&&) noexcept = default;

const Lattice& IsometryTester::lattice() const { return impl_->A; }

IsoCertificate IsometryTester::test(const Lattice& B) const {
  const Impl& m = *impl_;
  const Lattice& A = m.A;
  if (A.dim() != B.dim())
    throw std::invalid_argument("isometric: dimensions " + std::to_string(A.dim()) + " and " + std::to_string(B.dim()));
  IsoCertificate cert;
  if (A.dim() == 0) {
    cert.isometric = true;
    cert.map = IntMat(0, 0);
    return cert;
  }
  if (A.det() != B.det()) {
    cert.witness = "determinant " + A.det().get_str() + " vs " + B.det().get_str();
    return cert;
  }
  // one enumeration of B serves the screen and the backtrack
  VectorSet vb = collect(B, std::max<I64>(m.base.max_norm, m.screen_bound), m.opts.max_vectors);
  if (m.opts.screen) {
    const Int mb = vb.by_norm.empty() ? minimum(B) : Int(static_cast<long>(vb.by_norm.begin()->first));
    if (m.min != mb) {
      cert.witness = "minimum " + m.min.get_str() + " vs " + mb.get_str();
      return cert;
    }
    if (A.is_even() != B.is_even()) {
      cert.witness = std::string("parity: ") + (A.is_even() ? "even vs odd" : "odd vs even");
      return cert;
    }
    for (long v = 1; v <= m.screen_bound; ++v) {
      auto it = m.counts.find(Rat(v));
      const std::uint64_t ca = it == m.counts.end() ? 0 : it->second;
      auto jt = vb.by_norm.find(v);
      const std::uint64_t cb = jt == vb.by_norm.end() ? 0 : jt->second.size();
      if (ca != cb) {
        cert.witness = "theta coefficient at norm " + std::to_string(v) + ": " + std::to_string(ca) + " vs " +
                       std::to_string(cb);
        return cert;
      }
    }
    const MinShellProfile pb = min_shell_profile(vb);
    if (m.profile.components != pb.components) {
      cert.witness = "minimal vectors form components of sizes " + join_sizes(m.profile.components) + " vs " +
                     join_sizes(pb.components);
      return cert;
    }
    if (m.profile.histograms != pb.histograms) {
      cert.witness = "inner-product profiles of the minimal vectors differ";
      return cert;
    }
  }
  compute_signatures(vb, m.base.max_norm);
  Search search(vb, m.base, m.opts.node_cap, cert.nodes);
  std::vector<I64> sigma;
  if (!search.run(0, search.initial(), sigma)) {
    cert.witness = "exhausted backtrack";
    return cert;
  }
  IntMat U = to_intmat(sigma, A.dim());
  if (U.transpose() * B.gram() * U != A.gram()) throw std::logic_error("isometric: certificate does not verify");
  cert.isometric = true;
  cert.map = std::move(U);
  return cert;
}

IsoCertificate isometric(const Lattice& A, const Lattice& B, const IsoOptions& opts) {
  if (A.dim() != B.dim())
    throw std::invalid_argument("isometric: dimensions " + std::to_string(A.dim()) + " and " + std::to_string(B.dim()));
  if (A.det() != B.det()) {
    IsoCertificate cert;
    cert.witness = "determinant " + A.det().get_str() + " vs " + B.det().get_str();
    return cert;
  }
  return IsometryTester(A, opts).test(B);
}

AutGroup aut_order(const Lattice& L, const IsoOptions& opts) {
  AutGroup out;
  const std::size_t n = L.dim();
  out.order = 1;
  out.order_check = 1;
  if (n == 0) return out;
  const IntMat red = lll_reduce(L.gram()).gram;
  Int bound = 0;
  for (std::size_t i = 0; i < n; ++i) bound = std::max(bound, red(i, i));
  VectorSet va = collect(L, bound.get_si(), opts.max_vectors);
  compute_signatures(va, bound.get_si());
  const Base base = choose_base(va);
  std::vector<Perm> perms;

  for (std::size_t lvl = n; lvl-- > 0;) {
    // lists with the base vectors below lvl fixed
    Search search(va, base, opts.node_cap, out.nodes);
    Lists lists = search.initial(), next;
    for (std::size_t j = 0; j < lvl; ++j) {
      if (!search.assign(j, base.idx[j], lists, next)) throw std::logic_error("aut_order: identity prefix rejected");
      lists.swap(next);
    }
    std::vector<char> in_orbit = orbit_of(base.idx[lvl], perms, va.size());
    std::vector<char> failed(va.size(), 0);
    for (int c : lists[lvl]) {
      if (in_orbit[static_cast<std::size_t>(c)] || failed[static_cast<std::size_t>(c)]) continue;
      std::vector<I64> g;
      bool found = false;
      if (search.assign(lvl, c, lists, next)) found = search.run(lvl + 1, next, g);
      if (found) {
        out.generators.push_back(to_intmat(g, n));
        if (!is_automorphism(L, out.generators.back())) throw std::logic_error("aut_order: generator does not fix the Gram");
        perms.push_back(induced_perm(va, g));
        in_orbit = orbit_of(base.idx[lvl], perms, va.size());
      } else {
        const auto lost = orbit_of(c, perms, va.size());
        for (std::size_t k = 0; k < lost.size(); ++k) failed[k] |= lost[k];
      }
    }
    out.order *= static_cast<unsigned long>(std::count(in_orbit.begin(), in_orbit.end(), 1));
  }
  out.order_check = schreier_sims_order(perms, base.idx, va.size());
  if (out.order_check != out.order)
    throw std::logic_error("aut_order: backtrack order " + out.order.get_str() + " but generated group has order " +
                           out.order_check.get_str());
  return out;
}

}  // namespace smlat
