#include "conic/vector_field.hpp"

#include <cmath>

#include "conic/errors.hpp"

namespace conic {

VectorField operator*(const Expr& h, const VectorField& v) {
  return {h * v.x, h * v.y, h * v.w};
}

VectorField operator*(const Rational& c, const VectorField& v) {
  return {v.x * c, v.y * c, v.w * c};
}

Vec3 evaluate(const VectorField& v, const Point& p) {
  return {v.x.eval(p), v.y.eval(p), v.w.eval(p)};
}

Expr directional_derivative(const VectorField& v, const Expr& h) {
  return v.x * h.derivative(Var::X) + v.y * h.derivative(Var::Y) + v.w * h.derivative(Var::W);
}

VectorField lie_bracket(const VectorField& u, const VectorField& v) {
  // [u, v]^i = u(v^i) - v(u^i)
  return {directional_derivative(u, v.x) - directional_derivative(v, u.x),
          directional_derivative(u, v.y) - directional_derivative(v, u.y),
          directional_derivative(u, v.w) - directional_derivative(v, u.w)};
}

VectorField ad_power(const VectorField& g, const VectorField& f, int k) {
  if (k < 0) throw Error("ad_power requires k >= 0");
  VectorField r = f;
  for (int i = 0; i < k; ++i) r = lie_bracket(g, r);
  return r;
}

std::array<Expr, 3> wedge(const VectorField& u, const VectorField& v) {
  return {u.y * v.w - u.w * v.y, u.w * v.x - u.x * v.w, u.x * v.y - u.y * v.x};
}

bool independent_at(const VectorField& u, const VectorField& v, const Point& p, double tol) {
  const Vec3 a = evaluate(u, p);
  const Vec3 b = evaluate(v, p);
  const Vec3 minors = cross(a, b);
  const double largest =
      std::max({std::fabs(minors[0]), std::fabs(minors[1]), std::fabs(minors[2])});
  return largest > tol * (1.0 + norm(a) * norm(b));
}

bool in_span_at(const VectorField& v, const VectorField& g, const Point& p, double tol) {
  const Vec3 a = evaluate(v, p);
  const Vec3 b = evaluate(g, p);
  if (norm(b) <= tol) throw DegenerateG("control field vanishes at the test point");
  return norm(cross(a, b)) <= tol * (1.0 + norm(a) * norm(b));
}

AffineMap AffineMap::identity() {
  AffineMap m;
  for (int i = 0; i < 3; ++i) m.linear[i][i] = Rational(1);
  return m;
}

Rational AffineMap::det() const {
  const auto& a = linear;
  return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
         a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
         a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

AffineMap AffineMap::inverse() const {
  const Rational d = det();
  if (d == 0) throw NonInvertiblePhi("affine map has zero determinant");
  const auto& a = linear;
  AffineMap inv;
  inv.linear[0][0] = (a[1][1] * a[2][2] - a[1][2] * a[2][1]) / d;
  inv.linear[0][1] = (a[0][2] * a[2][1] - a[0][1] * a[2][2]) / d;
  inv.linear[0][2] = (a[0][1] * a[1][2] - a[0][2] * a[1][1]) / d;
  inv.linear[1][0] = (a[1][2] * a[2][0] - a[1][0] * a[2][2]) / d;
  inv.linear[1][1] = (a[0][0] * a[2][2] - a[0][2] * a[2][0]) / d;
  inv.linear[1][2] = (a[0][2] * a[1][0] - a[0][0] * a[1][2]) / d;
  inv.linear[2][0] = (a[1][0] * a[2][1] - a[1][1] * a[2][0]) / d;
  inv.linear[2][1] = (a[0][1] * a[2][0] - a[0][0] * a[2][1]) / d;
  inv.linear[2][2] = (a[0][0] * a[1][1] - a[0][1] * a[1][0]) / d;
  // offset of the inverse is -A^{-1} c
  for (int i = 0; i < 3; ++i) {
    Rational acc(0);
    for (int j = 0; j < 3; ++j) acc += inv.linear[i][j] * offset[j];
    inv.offset[i] = -acc;
  }
  return inv;
}

Point AffineMap::apply(const Point& p) const {
  const double in[3] = {p.x, p.y, p.w};
  double out[3];
  for (int i = 0; i < 3; ++i) {
    out[i] = to_double(offset[i]);
    for (int j = 0; j < 3; ++j) out[i] += to_double(linear[i][j]) * in[j];
  }
  return {out[0], out[1], out[2]};
}

AffineMap AffineMap::compose(const AffineMap& inner) const {
  AffineMap r;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      Rational acc(0);
      for (int k = 0; k < 3; ++k) acc += linear[i][k] * inner.linear[k][j];
      r.linear[i][j] = acc;
    }
    Rational acc = offset[i];
    for (int k = 0; k < 3; ++k) acc += linear[i][k] * inner.offset[k];
    r.offset[i] = acc;
  }
  return r;
}

std::array<Expr, 3> AffineMap::coordinate_images() const {
  std::array<Expr, 3> images;
  const Expr vars[3] = {Expr::variable(Var::X), Expr::variable(Var::Y), Expr::variable(Var::W)};
  for (int i = 0; i < 3; ++i) {
    Expr e = Expr::constant(offset[i]);
    for (int j = 0; j < 3; ++j) {
      if (linear[i][j] != 0) e += vars[j] * linear[i][j];
    }
    images[i] = e;
  }
  return images;
}

VectorField pushforward(const VectorField& v, const AffineMap& phi) {
  // (phi_* v)(q) = A . v(phi^{-1}(q)) for phi(p) = A p + c
  const AffineMap inv = phi.inverse();
  const auto images = inv.coordinate_images();
  Expr pulled[3];
  for (int i = 0; i < 3; ++i)
    pulled[i] = v.component(i).substitute(images[0], images[1], images[2]);
  VectorField out;
  for (int i = 0; i < 3; ++i) {
    Expr acc;
    for (int j = 0; j < 3; ++j) {
      if (phi.linear[i][j] != 0) acc += pulled[j] * phi.linear[i][j];
    }
    out.component(i) = acc;
  }
  return out;
}

ControlSystem apply_feedback(const ControlSystem& s, const FeedbackTransform& t) {
  ControlSystem out;
  out.f = pushforward(s.f + t.alpha * s.g, t.phi);
  out.g = pushforward(t.beta * s.g, t.phi);
  if (s.base) {
    const double beta_at_base = t.beta.eval(*s.base);
    if (std::fabs(beta_at_base) < 1e-12)
      throw BetaVanishesAtBase("beta vanishes at the base point");
    out.base = t.phi.apply(*s.base);
  }
  return out;
}

FeedbackTransform compose(const FeedbackTransform& second, const FeedbackTransform& first) {
  // Applying `first` then `second` equals one transformation with
  //   phi = phi2 o phi1
  //   alpha = alpha1 + beta1 * (alpha2 o phi1)
  //   beta = beta1 * (beta2 o phi1)
  const auto images = first.phi.coordinate_images();
  const Expr alpha2_pulled = second.alpha.substitute(images[0], images[1], images[2]);
  const Expr beta2_pulled = second.beta.substitute(images[0], images[1], images[2]);
  FeedbackTransform r;
  r.phi = second.phi.compose(first.phi);
  r.alpha = first.alpha + first.beta * alpha2_pulled;
  r.beta = first.beta * beta2_pulled;
  return r;
}

}  // namespace conic
