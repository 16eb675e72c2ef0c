#include "smlat/enumerate.hpp"

#include "form_enumerator.hpp"

namespace smlat {

EnumerationOverflow::EnumerationOverflow(const Rat& bound, std::uint64_t cap)
    : InfrastructureError("enumeration overflow: more than " + std::to_string(cap) + " vectors of norm <= " +
                          to_string(bound)),
      bound_(bound) {}

std::uint64_t VectorList::total() const {
  std::uint64_t t = 0;
  for (const auto& [n, c] : counts) t += c;
  return t;
}

std::uint64_t VectorList::count(const Rat& norm) const {
  auto it = counts.find(norm);
  return it == counts.end() ? 0 : it->second;
}

namespace {

// Integral form A, modulus D and residues such that the coset vectors are w / D
// (base coordinates) with norm w^T A w / scale.
struct ScaledProblem {
  IntMat form;
  Int modulus = 1;
  IntVec residues;
  Int scale = 1;
};

ScaledProblem scaled_problem(const Coset& C) {
  ScaledProblem sp;
  const Int e = common_denominator(C.base.gram);
  sp.form = to_int(C.base.gram.scaled(Rat(e)));
  RatVec s = C.shift_in_base();
  sp.modulus = common_denominator(s);
  sp.residues.resize(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) sp.residues[i] = mod_pos(Rat(s[i] * sp.modulus).get_num(), sp.modulus);
  sp.scale = e * sp.modulus * sp.modulus;
  return sp;
}

VectorList run_problem(const ScaledProblem& sp, const Rat& bound, bool include_zero, const EnumOptions& opts) {
  VectorList out;
  out.coord_denominator = sp.modulus.get_si();
  if (bound < 0) return out;
  Rat scaled = bound * sp.scale;
  Int K = floor_div(scaled.get_num(), scaled.get_den());
  detail::FormEnumerator fe(sp.form, sp.modulus, sp.residues);
  detail::FormEnumerator::Output raw;
  try {
    raw = fe.run(K, include_zero, opts.keep_vectors, opts.max_vectors);
  } catch (const detail::EnumerationCapExceeded&) {
    throw EnumerationOverflow(bound, opts.max_vectors);
  }
  for (const auto& [v, c] : raw.histogram) {
    Rat n(Int(static_cast<long>(v)), sp.scale);
    n.canonicalize();
    out.counts[n] = c;
  }
  if (opts.keep_vectors) {
    out.vectors = std::move(raw.vectors);
    out.norms.reserve(raw.values.size());
    for (auto v : raw.values) out.norms.emplace_back(Int(static_cast<long>(v)), sp.scale);
  }
  for (auto& n : out.norms) n.canonicalize();
  return out;
}

}  // namespace

VectorList short_vectors(const Lattice& L, const Rat& bound, const EnumOptions& opts) {
  ScaledProblem sp;
  sp.form = L.gram();
  sp.residues.assign(L.dim(), Int(0));
  return run_problem(sp, bound, opts.include_zero, opts);
}

VectorList coset_short_vectors(const Coset& C, const Rat& bound, const EnumOptions& opts) {
  // a coset contains 0 only when it is a lattice; it is then counted like any other member
  return run_problem(scaled_problem(C), bound, true, opts);
}

Int minimum(const Lattice& L) {
  if (L.dim() == 0) throw MathError("minimum of the zero lattice");
  Int best = L.gram()(0, 0);
  for (std::size_t i = 1; i < L.dim(); ++i) best = std::min(best, Int(L.gram()(i, i)));
  VectorList vl = short_vectors(L, Rat(best));
  return vl.counts.begin()->first.get_num();
}

Rat min0_shadow(const Lattice& L, std::optional<Rat> start, std::uint64_t cap) {
  if (L.is_even()) return 0;
  Coset S = shadow(L);
  Rat bound = start && *start > 0 ? *start : Rat(1);
  EnumOptions opts;
  opts.max_vectors = cap;
  for (;;) {
    VectorList vl = coset_short_vectors(S, bound, opts);
    if (!vl.counts.empty()) return vl.counts.begin()->first;
    bound *= 2;
  }
}

QSeries theta_series(const Lattice& L, long prec, std::uint64_t cap) {
  QSeries s(prec);
  if (prec <= 0) return s;
  EnumOptions opts;
  opts.include_zero = true;
  opts.max_vectors = cap;
  VectorList vl = short_vectors(L, Rat((prec - 1) / kGrid), opts);
  for (const auto& [n, c] : vl.counts) s.add_term(kGrid * n.get_num().get_si(), Rat(Int(static_cast<unsigned long>(c))));
  return s;
}

QSeries coset_theta(const Coset& C, long prec, long scale, std::uint64_t cap) {
  if (scale <= 0) throw std::invalid_argument("coset_theta: scale must be positive");
  QSeries s(prec);
  if (prec <= 0) return s;
  EnumOptions opts;
  opts.max_vectors = cap;
  // grid exponent 24 * scale * norm < prec
  Rat bound(prec - 1, kGrid * scale);
  VectorList vl = coset_short_vectors(C, bound, opts);
  for (const auto& [n, c] : vl.counts) {
    Rat g = n * (kGrid * scale);
    if (g.get_den() != 1)
      throw InfrastructureError("coset norm " + to_string(n) + " does not lie on the q^(1/24) grid");
    s.add_term(g.get_num().get_si(), Rat(Int(static_cast<unsigned long>(c))));
  }
  return s;
}

}  // namespace smlat
