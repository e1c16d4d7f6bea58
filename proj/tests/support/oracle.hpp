#pragma once

// Brute-force reference computations used by the unit and acceptance tests.
// None of this shares code with the library's reduction algorithms.

#include "artifact/filtcx.hpp"

#include <random>

namespace oracle {

using artifact::Chain;
using artifact::FilteredComplex;
using artifact::NMat;
using artifact::Q;
using artifact::XQ;

/// Whether c = d b for some b with A(b) <= alpha, decided by echelon
/// reduction of the rescaled matrix over the valuation ring.
bool bounds_within(const NMat& d, const std::vector<Q>& w, const Chain& c, const Q& alpha);

/// inf{alpha : bounds_within}, by bisection on the exponent grid.
XQ boundary_level(const NMat& d, const std::vector<Q>& w, const Chain& c);

/// Hom complex differential, built entry by entry from the definition f -> d f + f d.
NMat hom_differential(const FilteredComplex& c, const FilteredComplex& d);
std::vector<Q> hom_weights(const FilteredComplex& c, const FilteredComplex& d);

/// Matrix rank by plain Gaussian elimination over exact fractions in T^{1/N}.
std::size_t rank(const NMat& m);

struct Rng {
  std::mt19937_64 gen;
  explicit Rng(unsigned long seed) : gen(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen); }
  Q quarter(int lo, int hi) {
    Q q(uniform(lo, hi), 4);
    q.canonicalize();
    return q;
  }
};

struct NormalForm {
  std::vector<Q> action;
  /// pairs (b, x, a): d b = T^a x
  struct Pair {
    std::size_t b, x;
    Q a;
  };
  std::vector<Pair> pairs;
  NMat matrix() const;
};

/// Random barcode-shaped differential on n generators.
NormalForm random_normal_form(Rng& rng, std::size_t n);

/// Random filtration-preserving unitriangular change of basis and its inverse.
std::pair<NMat, NMat> random_gauge(Rng& rng, const std::vector<Q>& action);

NMat conjugate(const NMat& g, const NMat& d, const NMat& ginv);

/// Random complex with at most `n` generators (exactly n when fixed).
FilteredComplex random_complex(Rng& rng, std::size_t n);

/// Random chain with monomial or binomial coefficients.
Chain random_chain(Rng& rng, std::size_t n);

}  // namespace oracle
