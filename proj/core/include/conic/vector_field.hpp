#pragma once

#include <array>
#include <optional>

#include "conic/expr.hpp"
#include "conic/linalg.hpp"

namespace conic {

/// Vector field on R^3 with symbolic components in the frame (dx, dy, dw).
struct VectorField {
  Expr x, y, w;

  const Expr& component(int i) const { return i == 0 ? x : (i == 1 ? y : w); }
  Expr& component(int i) { return i == 0 ? x : (i == 1 ? y : w); }

  bool is_zero() const { return x.is_zero() && y.is_zero() && w.is_zero(); }
  bool operator==(const VectorField& o) const { return x == o.x && y == o.y && w == o.w; }

  VectorField operator+(const VectorField& o) const { return {x + o.x, y + o.y, w + o.w}; }
  VectorField operator-(const VectorField& o) const { return {x - o.x, y - o.y, w - o.w}; }
  VectorField operator-() const { return {-x, -y, -w}; }
};

/// Scalar multiplication h * v with a symbolic function h.
VectorField operator*(const Expr& h, const VectorField& v);
VectorField operator*(const Rational& c, const VectorField& v);

Vec3 evaluate(const VectorField& v, const Point& p);

/// Directional derivative v(h) = v^x dh/dx + v^y dh/dy + v^w dh/dw.
Expr directional_derivative(const VectorField& v, const Expr& h);

/// Lie bracket [u, v], computed symbolically component by component.
VectorField lie_bracket(const VectorField& u, const VectorField& v);

/// ad_g^k f: ad^0 = f, ad^k = [g, ad^{k-1} f]. Requires k >= 0.
VectorField ad_power(const VectorField& g, const VectorField& f, int k);

/// Component-wise cross product u x v as symbolic expressions; the three
/// 2x2 minors of the matrix (u | v). All zero iff u and v are everywhere
/// linearly dependent.
std::array<Expr, 3> wedge(const VectorField& u, const VectorField& v);

/// True iff the largest 2x2 minor of the 3x2 matrix (u(p) | v(p)) exceeds
/// tol * (1 + |u(p)| |v(p)|).
bool independent_at(const VectorField& u, const VectorField& v, const Point& p, double tol);

/// True iff v(p) lies in span{g(p)}: |v(p) x g(p)| <= tol * (1 + |v(p)||g(p)|).
/// Throws DegenerateG when |g(p)| <= tol.
bool in_span_at(const VectorField& v, const VectorField& g, const Point& p, double tol);

/// Control-affine system (f, g) with an optional distinguished base point.
struct ControlSystem {
  VectorField f;  // drift
  VectorField g;  // control field, not identically zero
  std::optional<Point> base;
};

/// Invertible affine map phi(p) = linear * p + offset with exact entries.
struct AffineMap {
  std::array<std::array<Rational, 3>, 3> linear{};
  std::array<Rational, 3> offset{};

  static AffineMap identity();
  Rational det() const;
  /// Exact inverse; throws NonInvertiblePhi when det == 0.
  AffineMap inverse() const;
  Point apply(const Point& p) const;
  /// this o inner
  AffineMap compose(const AffineMap& inner) const;
  /// Coordinate images (x, y, w) -> affine expressions, used for substitution.
  std::array<Expr, 3> coordinate_images() const;
};

/// Pushforward phi_* v of a symbolic field under an affine map.
VectorField pushforward(const VectorField& v, const AffineMap& phi);

/// Feedback transformation (phi, alpha, beta): new drift phi_*(f + g alpha),
/// new control field phi_*(g beta).
struct FeedbackTransform {
  AffineMap phi;
  Expr alpha;  // additive control reparametrization
  Expr beta;   // multiplicative control reparametrization, nonzero at the base
};

/// Applies the transformation; the base point (when present) maps through phi
/// and beta is checked to be nonzero there.
ControlSystem apply_feedback(const ControlSystem& s, const FeedbackTransform& t);

/// The single transformation equivalent to applying `first`, then `second`.
FeedbackTransform compose(const FeedbackTransform& second, const FeedbackTransform& first);

}  // namespace conic
