#pragma once

#include <array>
#include <optional>
#include <string>

#include "conic/rational.hpp"
#include "conic/symmetry.hpp"

namespace conic {

/// Structure constants of a 3-dimensional real Lie algebra:
/// [v_i, v_j] = sum_k c[i][j][k] v_k, antisymmetric in (i, j).
struct StructureConstants {
  std::array<std::array<std::array<Rational, 3>, 3>, 3> c{};

  /// Sets c[i][j][k] and c[j][i][k] = -value.
  void set(int i, int j, int k, Rational value);

  /// Exact Jacobi identity check.
  bool jacobi_holds() const;

  /// Constants in the new basis new_i = sum_j p[i][j] old_j; p must be
  /// invertible.
  StructureConstants change_basis(const std::array<std::array<Rational, 3>, 3>& p) const;
};

enum class AlgebraTag { EllipticE2, HyperbolicP11, ParabolicL322, Other };

/// Classification data of the adjoint action of a complement element on the
/// 2-dimensional abelian ideal: exact trace, determinant and discriminant of
/// the induced 2x2 matrix. All zero when tag == Other without such an ideal.
struct AlgebraClass {
  AlgebraTag tag = AlgebraTag::Other;
  Rational trace{0};
  Rational det{0};
  Rational discriminant{0};

  /// Display label: "L(3,4,0)" elliptic, "L(3,2,-1)" hyperbolic, "L(3,2,2)" parabolic.
  std::string display() const;
};

/// Exact decomposition of all pairwise brackets in the given basis.
/// Throws NotClosed when some bracket leaves the span.
StructureConstants structure_constants(const SymmetryBasis& b);

/// The derived subalgebra as a 2x3 coefficient matrix over the abstract basis,
/// provided it is 2-dimensional, abelian and an ideal; nullopt otherwise.
std::optional<std::array<std::array<Rational, 3>, 2>> abelian_ideal_2d(
    const StructureConstants& sc);

/// Eigenvalue-data classification of the algebra:
///   trace == 0 and det > 0            -> EllipticE2
///   trace == 0 and det < 0            -> HyperbolicP11
///   trace != 0, det > 0, 2 tr^2 == 9 det -> ParabolicL322
/// anything else (including no 2D abelian ideal) -> Other.
/// The outcome does not depend on the complement element or the ideal basis.
AlgebraClass classify_algebra(const StructureConstants& sc);

/// Ideal basis (u1, u2) adapted to the multiplication table of the class:
/// with l the complement element,
///   elliptic:   [u1, l] = -s u2, [u2, l] = s u1
///   hyperbolic: [u1, l] =  s u2, [u2, l] = s u1
///   parabolic:  [u1, l] = 2s u1, [u2, l] = s u2
/// for some s != 0. The scale s is exact when sqrt(|det|) is rational (always
/// the case for systems reachable from the null forms by rational feedback)
/// and a near-machine-precision rational approximation otherwise. In these
/// coordinates the conserved drift quantities take their standard form.
/// Returns the plain derived-ideal basis when the algebra is not in one of
/// the three classes, and nullopt when there is no 2D abelian ideal.
std::optional<std::array<std::array<Rational, 3>, 2>> normalized_ideal_frame(
    const StructureConstants& sc);

}  // namespace conic
