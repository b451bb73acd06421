#pragma once

#include <optional>
#include <vector>

#include "conic/vector_field.hpp"

namespace conic {

/// Finite-dimensional search space for symmetry components: polynomials of
/// total degree <= degree times an optional trig factor of frequency <= trig_max
/// times an optional exponential factor of frequency in [-exp_range, exp_range].
struct Ansatz {
  int degree = 2;
  int trig_max = 2;
  int exp_range = 2;

  Ansatz escalated() const { return {degree + 1, trig_max + 1, exp_range + 1}; }
  bool operator==(const Ansatz&) const = default;
};

/// Basis of a solved space of infinitesimal symmetries. The generating vectors
/// come from distinct free columns of an exact kernel computation, so they are
/// linearly independent by construction.
struct SymmetryBasis {
  std::vector<VectorField> fields;
  int dim() const { return static_cast<int>(fields.size()); }
};

/// All ansatz monomials, in deterministic order.
std::vector<Monomial> ansatz_monomials(const Ansatz& a);

/// Exact test of the two defining conditions: [v, g] and [v, f] both lie in
/// span{g}, checked as vanishing wedges.
bool is_symmetry(const VectorField& v, const ControlSystem& s);

/// Solves the symmetry conditions restricted to the ansatz space by exact
/// rational elimination. Every returned field satisfies is_symmetry; the span
/// is independent of internal basis choices. Throws AnsatzTooLarge when the
/// ansatz produces more than 10^5 unknowns.
SymmetryBasis solve_symmetries(const ControlSystem& s, const Ansatz& a);

/// Exact rational coordinates of v in span(basis); nullopt when v is outside.
std::optional<std::vector<Rational>> coordinates_in_span(const VectorField& v,
                                                         const std::vector<VectorField>& basis);

/// Mutual membership of two generating sets.
bool spans_equal(const std::vector<VectorField>& a, const std::vector<VectorField>& b);

/// True iff every pairwise bracket decomposes exactly in the basis.
bool closed_under_bracket(const SymmetryBasis& b);

}  // namespace conic
