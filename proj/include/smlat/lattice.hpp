#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "smlat/exact.hpp"

namespace smlat {

/// Integral positive definite lattice, given by its Gram matrix.
class Lattice {
 public:
  Lattice() = default;
  /// Throws MathError unless gram is symmetric, integral and positive definite.
  explicit Lattice(IntMat gram);

  std::size_t dim() const { return gram_.rows(); }
  const IntMat& gram() const { return gram_; }
  Int det() const;
  bool is_even() const;
  /// Gram entries as 64-bit integers; throws InfrastructureError if they do not fit.
  std::vector<std::vector<std::int64_t>> gram_i64() const;

  friend bool operator==(const Lattice& a, const Lattice& b) { return a.gram_ == b.gram_; }

 private:
  IntMat gram_;
};

/// Rational lattice with its basis expressed in the coordinates of a parent lattice
/// (columns of `transition`), so that gram = transition^T * parent.gram * transition.
struct RatLattice {
  RatMat gram;
  RatMat transition;
};

/// base + shift; shift is in parent coordinates and reduced into [0,1) in base coordinates.
struct Coset {
  RatLattice base;
  RatVec shift;

  /// shift written in the basis of `base`
  RatVec shift_in_base() const;
  bool is_lattice() const;
};

/// Per-level constants for N in {1,2,3,5,6,7,11,14,15,23}.
struct ModParams {
  int N = 1;
  int sigma0 = 1;
  int sigma1 = 1;
  int s = 24;
  int ev = 0;
  Rat lN;
  int kmax = 23;
  int nmax = 23;

  /// Throws MathError when N is not one of the ten admissible levels.
  static ModParams for_level(int N);
};

const std::vector<int>& admissible_levels();
bool is_admissible_level(int N);
std::vector<int> divisors(int n);

Lattice make_lattice(const IntMat& gram);
Lattice c_n(int N);
Lattice direct_sum(const Lattice& a, const Lattice& b);
Lattice orthogonal_power(const Lattice& a, int k);
Lattice rescale(const Lattice& L, const Int& d);
/// Gram of the lattice spanned by the columns of `basis` (L-coordinates).
Lattice sublattice(const Lattice& L, const IntMat& basis);

RatLattice dual(const Lattice& L);
/// Dual of a rational lattice, expressed in the same parent frame.
RatLattice dual(const RatLattice& L);
/// L^* intersected with (1/m) L.
RatLattice partial_dual(const Lattice& L, int m);
/// m times the Gram of partial_dual(L, m); throws MathError if it is not integral.
Lattice rescaled_partial_dual(const Lattice& L, int m);

struct EvenSublattice {
  Lattice lattice;
  IntMat basis;  // columns in L-coordinates
  int index = 1;
};
EvenSublattice even_sublattice(const Lattice& L);
bool is_even(const Lattice& L);

/// A characteristic vector lying in L itself, in L-coordinates (mod-2 solve, fixed pivot order).
IntVec characteristic_vector(const Lattice& L);
/// Characteristic vectors as the coset c + 2L^*.
Coset characteristic_coset(const Lattice& L);
/// S(L) = (c/2) + L^*; equals L^* (shift 0) for even L.
Coset shadow(const Lattice& L);

/// Hilbert symbol (a,b)_p; p == 0 denotes the real place.
int hilbert_symbol(const Rat& a, const Rat& b, long p);

struct RationalClass {
  std::size_t dim = 0;
  Int det_class;             // squarefree representative of det modulo squares
  std::map<long, int> hasse;  // primes dividing 2*det -> +-1

  friend bool operator==(const RationalClass& a, const RationalClass& b) {
    return a.dim == b.dim && a.det_class == b.det_class && a.hasse == b.hasse;
  }
};
/// Diagonal entries of a rational diagonalization (symmetric Gaussian elimination).
RatVec diagonalize(const RatMat& gram);
RationalClass rational_class(const RatMat& gram, const std::vector<long>& extra_primes = {});
RationalClass rational_class(const Lattice& L);
bool is_rationally_equivalent(const Lattice& a, const Lattice& b);
std::vector<long> prime_divisors(Int n);

/// Indecomposable orthogonal summands.
std::vector<Lattice> decompose_orthogonal(const Lattice& L);

struct CnSplit {
  int copies = 0;           // number of C_N summands
  std::optional<Lattice> rest;  // empty when L is C_N^copies
};
CnSplit split_cn_summands(const Lattice& L, int N);

struct StrongModularityReport {
  struct Entry {
    int m = 1;
    bool isometric = false;
    std::string note;
  };
  std::vector<Entry> entries;
  bool strongly_modular() const;
};
StrongModularityReport is_strongly_modular(const Lattice& L, int N);

}  // namespace smlat
