#pragma once

// Random instances and entry-by-entry references for the A-infinity layer,
// shared by the unit and acceptance tests.

#include "artifact/twisted.hpp"
#include "support/oracle.hpp"

namespace oracle {

using artifact::CategoryPtr;
using artifact::DgTwisted;
using artifact::Discrepancy;
using artifact::DiscKind;
using artifact::FilteredMap;
using artifact::ModulePtr;
using artifact::PreModHom;
using artifact::WFModule;

/// Discrepancy from a list, canonicalizing the entries.
Discrepancy seq(std::vector<Q> v, DiscKind k = DiscKind::Hom);
Discrepancy random_disc(Rng& rng, std::size_t cap, DiscKind k);

/// Random dg category on `objects` objects with two-generator morphism spaces.
CategoryPtr random_dg(Rng& rng, int objects, int cap = 4);

/// Random components of arity 1 and 2, raising action by at most rho.
PreModHom random_prehom(Rng& rng, const ModulePtr& a, const ModulePtr& b, const Q& rho, int arity = 2);

std::size_t total_homology(const WFModule& m);

/// Differential of hom(X, L_0 + ... + L_r) twisted by D, written out entry by
/// entry: b -> d_X b + b D for b : V_{L_j} -> V_X.
NMat dg_twisted_oracle(const DgTwisted& t, int x);

/// Reorders a matrix given in blocks L_0..L_r into blocks L_r..L_0.
NMat reverse_blocks(const NMat& m, const std::vector<std::size_t>& sizes);

FilteredComplex zero_diff(const std::vector<Q>& act, const std::string& p);
std::vector<Q> random_actions(Rng& rng, std::size_t n);
FilteredMap random_map(Rng& rng, const FilteredComplex& a, const FilteredComplex& b, double p = 0.5);

/// Retract energy of f between zero-differential complexes: min over left
/// inverses g of A(g), row by row as a boundary level problem.
XQ zero_diff_rho_oracle(const FilteredMap& f);

}  // namespace oracle
