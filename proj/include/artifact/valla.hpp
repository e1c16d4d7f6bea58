#pragma once

// Linear algebra for the max-type action A(x) = max_j (w_j - nu(x_j))
// on Lambda^n with weights w.

#include "artifact/field.hpp"

#include <vector>

namespace artifact {

using Weights = std::vector<Q>;

/// A(x); -inf for the zero vector.
XQ level(const FVec& x, const Weights& w);

/// Indices attaining the maximum in A(x), packed as a GF(2) vector.
std::vector<std::uint64_t> lead_bits(const FVec& x, const Weights& w);

/// True iff A(sum c_i v_i) = max_i A(c_i v_i) for all scalars c.
bool is_orthogonal(const std::vector<FVec>& vs, const Weights& w);

/// Makes `vs` orthogonal without changing its span. The first `frozen`
/// vectors must already be orthogonal and are kept untouched; each other
/// vector is only ever replaced by itself plus a combination of earlier
/// ones, and the same operations are applied to `paired` when given.
/// Input vectors must be linearly independent.
void orthogonalize(std::vector<FVec>& vs, std::size_t frozen, const Weights& w,
                   std::vector<FVec>* paired = nullptr);

/// Orthogonal basis of span(vs).
std::vector<FVec> orthogonal_basis(const std::vector<FVec>& vs, const Weights& w);

/// Extends the orthogonal family `base` by vectors from `candidates`
/// (independent modulo span(base)) to an orthogonal basis of the joint span.
/// Returns only the new vectors; `paired` (aligned with candidates) is
/// transformed alongside and trimmed to the selected ones.
std::vector<FVec> extend_orthogonal(const std::vector<FVec>& base,
                                    const std::vector<FVec>& candidates, const Weights& w,
                                    std::vector<FVec>* paired = nullptr);

/// Unit vectors completing an orthogonal family to an orthogonal basis of Lambda^n.
std::vector<std::size_t> unit_completion(const std::vector<FVec>& orth, const Weights& w);

struct Distance {
  XQ value;      ///< inf over s in span(basis) of A(x + s); -inf when x is in the span
  FVec nearest;  ///< x + s attaining it
};

/// Distance from x to span(basis); basis need not be orthogonal.
Distance dist_to_subspace(const FVec& x, const std::vector<FVec>& basis, const Weights& w);

}  // namespace artifact
