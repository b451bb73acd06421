#include "conic/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "conic/errors.hpp"
#include "conic/lie_algebra.hpp"

namespace conic {

double ControlSchedule::at(double t) const {
  double acc = 0.0;
  for (const auto& [dur, u] : segments) {
    acc += dur;
    if (t < acc) return u;
  }
  return segments.empty() ? 0.0 : segments.back().second;
}

std::vector<double> ControlSchedule::switch_times(double horizon) const {
  std::vector<double> out;
  double acc = 0.0;
  for (const auto& [dur, u] : segments) {
    acc += dur;
    if (acc >= horizon) break;
    out.push_back(acc);
  }
  return out;
}

namespace {

// Precomputed component and Jacobian expressions of a field, so the RK4 inner
// loop only evaluates.
struct FieldJet {
  std::array<Expr, 3> v;
  std::array<std::array<Expr, 3>, 3> jac;  // jac[i][j] = d v_i / d x_j

  explicit FieldJet(const VectorField& f) {
    for (int i = 0; i < 3; ++i) {
      v[i] = f.component(i);
      jac[i][0] = f.component(i).derivative(Var::X);
      jac[i][1] = f.component(i).derivative(Var::Y);
      jac[i][2] = f.component(i).derivative(Var::W);
    }
  }
};

struct FlowState {
  Vec3 p;
  Mat3 jac;
};

FlowState rhs(const FieldJet& jet, const FlowState& s) {
  const Point pt{s.p[0], s.p[1], s.p[2]};
  FlowState d;
  for (int i = 0; i < 3; ++i) d.p[i] = jet.v[i].eval(pt);
  Mat3 a{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a[i][j] = jet.jac[i][j].eval(pt);
  d.jac = mat_mul(a, s.jac);
  return d;
}

FlowState axpy(const FlowState& s, double h, const FlowState& d) {
  FlowState r;
  for (int i = 0; i < 3; ++i) r.p[i] = s.p[i] + h * d.p[i];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r.jac[i][j] = s.jac[i][j] + h * d.jac[i][j];
  return r;
}

void rk4_step(const FieldJet& jet, FlowState& s, double h) {
  const FlowState k1 = rhs(jet, s);
  const FlowState k2 = rhs(jet, axpy(s, h / 2, k1));
  const FlowState k3 = rhs(jet, axpy(s, h / 2, k2));
  const FlowState k4 = rhs(jet, axpy(s, h, k3));
  for (int i = 0; i < 3; ++i)
    s.p[i] += h / 6 * (k1.p[i] + 2 * k2.p[i] + 2 * k3.p[i] + k4.p[i]);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      s.jac[i][j] += h / 6 * (k1.jac[i][j] + 2 * k2.jac[i][j] + 2 * k3.jac[i][j] + k4.jac[i][j]);
}

void check_blowup(const Vec3& p) {
  if (!(std::fabs(p[0]) < 1e9 && std::fabs(p[1]) < 1e9 && std::fabs(p[2]) < 1e9))
    throw BlowUp("state norm exceeded 1e9 during integration");
}

FlowState integrate_jet(const FieldJet& jet, const Point& p0, double t, double step) {
  FlowState s{{p0.x, p0.y, p0.w}, mat_identity()};
  if (t == 0.0) return s;
  const int n = std::max(1, static_cast<int>(std::ceil(std::fabs(t) / step)));
  const double h = t / n;
  for (int i = 0; i < n; ++i) {
    rk4_step(jet, s, h);
    check_blowup(s.p);
  }
  return s;
}

}  // namespace

FlowResult integrate_flow(const VectorField& v, const Point& p0, double t, double step) {
  if (step <= 0) throw Error("integration step must be positive");
  const FieldJet jet(v);
  const FlowState s = integrate_jet(jet, p0, t, step);
  return {Point{s.p[0], s.p[1], s.p[2]}, s.jac};
}

Trajectory simulate(const ControlSystem& s, const ControlSchedule& u, const Point& p0,
                    double horizon, double step) {
  if (step <= 0) throw Error("integration step must be positive");
  if (horizon <= 0) throw Error("horizon must be positive");

  // Integration breakpoints: control switches plus the horizon, so each RK4
  // span sees a genuinely constant control.
  std::vector<double> stops = u.switch_times(horizon);
  stops.push_back(horizon);

  const FieldJet fj(s.f);
  const FieldJet gj(s.g);

  Trajectory tr;
  Vec3 p{p0.x, p0.y, p0.w};
  double t = 0.0;
  tr.times.push_back(t);
  tr.states.push_back(p0);
  tr.controls.push_back(u.at(0.0));

  auto eval_rhs = [&](const Vec3& state, double control) {
    const Point pt{state[0], state[1], state[2]};
    Vec3 d;
    for (int i = 0; i < 3; ++i) d[i] = fj.v[i].eval(pt) + control * gj.v[i].eval(pt);
    return d;
  };

  for (double stop : stops) {
    if (stop <= t) continue;
    const double span = stop - t;
    const int n = std::max(1, static_cast<int>(std::ceil(span / step)));
    const double h = span / n;
    const double control = u.at(t + h / 2);
    for (int i = 0; i < n; ++i) {
      const Vec3 k1 = eval_rhs(p, control);
      const Vec3 k2 = eval_rhs(p + (h / 2) * k1, control);
      const Vec3 k3 = eval_rhs(p + (h / 2) * k2, control);
      const Vec3 k4 = eval_rhs(p + h * k3, control);
      p = p + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      check_blowup(p);
      t += h;
      tr.times.push_back(t);
      tr.states.push_back(Point{p[0], p[1], p[2]});
      tr.controls.push_back(u.at(std::min(t, horizon - 1e-12)));
    }
  }
  return tr;
}

double constraint_residual(const Trajectory& tr, ConicKind kind) {
  const std::size_t n = tr.times.size();
  if (n < 3) throw TooShort("constraint residual needs at least 3 samples");
  double worst = 0.0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hm = tr.times[i] - tr.times[i - 1];
    const double hp = tr.times[i + 1] - tr.times[i];
    // Second-order derivative estimate on an uneven stencil.
    auto deriv = [&](double fm, double f0, double fp) {
      return -hp / (hm * (hm + hp)) * fm + (hp - hm) / (hm * hp) * f0 +
             hm / (hp * (hm + hp)) * fp;
    };
    const double dx = deriv(tr.states[i - 1].x, tr.states[i].x, tr.states[i + 1].x);
    const double dy = deriv(tr.states[i - 1].y, tr.states[i].y, tr.states[i + 1].y);
    double s = 0.0;
    switch (kind) {
      case ConicKind::E: s = dx * dx + dy * dy - 1.0; break;
      case ConicKind::H: s = dx * dx - dy * dy - 1.0; break;
      case ConicKind::P: s = dy * dy - dx; break;
    }
    worst = std::max(worst, std::fabs(s));
  }
  return worst;
}

double flow_pushforward_residual(const VectorField& v, const ControlSystem& s, const Point& p,
                                 double t, double step) {
  const FlowResult flow = integrate_flow(v, p, t, step);
  const Point& q = flow.state;
  const Vec3 gp = mat_vec(flow.jacobian, evaluate(s.g, p));
  const Vec3 gq = evaluate(s.g, q);
  const Vec3 fd = mat_vec(flow.jacobian, evaluate(s.f, p)) - evaluate(s.f, q);
  const double term_g = norm(cross(gp, gq)) / ((1.0 + norm(gp)) * (1.0 + norm(gq)));
  const double term_f = norm(cross(fd, gq)) / ((1.0 + norm(fd)) * (1.0 + norm(gq)));
  return term_g + term_f;
}

Point Chart::forward(double a, double b, double c) const {
  Point p = integrate_flow(g, center, c, step).state;
  p = integrate_flow(v2, p, b, step).state;
  return integrate_flow(v1, p, a, step).state;
}

Mat3 Chart::forward_jacobian(double a, double b, double c) const {
  // Columns: images of d/da, d/db, d/dc under the composed flow map.
  const FlowResult fc = integrate_flow(g, center, c, step);
  const FlowResult fb = integrate_flow(v2, fc.state, b, step);
  const FlowResult fa = integrate_flow(v1, fb.state, a, step);

  const Vec3 col_a = evaluate(v1, fa.state);
  const Vec3 col_b = mat_vec(fa.jacobian, evaluate(v2, fb.state));
  const Vec3 col_c = mat_vec(fa.jacobian, mat_vec(fb.jacobian, evaluate(g, fc.state)));
  return Mat3{{{col_a[0], col_b[0], col_c[0]},
               {col_a[1], col_b[1], col_c[1]},
               {col_a[2], col_b[2], col_c[2]}}};
}

Chart build_chart(const ControlSystem& s, const SymmetryBasis& b, const Point& p, double box,
                  double step) {
  // Ideal generators from the algebra of the basis, normalized so the
  // complement acts by the standard multiplication table of the class; the
  // conserved drift quantities take their textbook form only in such a frame.
  const StructureConstants sc = structure_constants(b);
  const auto ideal = normalized_ideal_frame(sc);
  if (!ideal) throw NotCommuting("symmetry algebra has no 2-dimensional abelian ideal");

  Chart ch;
  ch.center = p;
  ch.box = box;
  ch.step = step;
  for (int k = 0; k < 3; ++k) {
    ch.v1 = ch.v1 + (*ideal)[0][k] * b.fields[k];
    ch.v2 = ch.v2 + (*ideal)[1][k] * b.fields[k];
  }
  ch.g = s.g;

  if (!lie_bracket(ch.v1, ch.v2).is_zero())
    throw NotCommuting("ideal generators do not commute symbolically");
  const double tol = 1e-9;
  if (!independent_at(ch.v1, ch.v2, p, tol)) throw NotIndependent("v1, v2 dependent at center");
  const Vec3 e1 = evaluate(ch.v1, p), e2 = evaluate(ch.v2, p), e3 = evaluate(ch.g, p);
  if (std::fabs(det3(e1, e2, e3)) <= tol * (1.0 + norm(e1) * norm(e2) * norm(e3)))
    throw NotIndependent("(v1, v2, g) dependent at center");

  // Sample grid with cached Jacobians plus the rectification diagnostics.
  const int n = ch.points_per_axis;
  auto coord = [&](int i) { return -box + 2.0 * box * i / (n - 1); };
  double min_det = 1e300;
  double r1 = 0.0, r2 = 0.0;

  struct Ratio {
    double ra, rb;
  };
  std::vector<std::vector<Ratio>> slice_ratios(n);

  for (int ic = 0; ic < n; ++ic) {
    for (int ib = 0; ib < n; ++ib) {
      for (int ia = 0; ia < n; ++ia) {
        const double a = coord(ia), bb = coord(ib), c = coord(ic);
        Chart::GridSample sample;
        sample.a = a;
        sample.b = bb;
        sample.c = c;
        sample.jacobian = ch.forward_jacobian(a, bb, c);
        sample.state = ch.forward(a, bb, c);
        const double d = det3(sample.jacobian);
        min_det = std::min(min_det, std::fabs(d));
        if (std::fabs(d) > 1e-12) {
          const Mat3 inv = mat_inverse(sample.jacobian);
          const Point st = sample.state;
          const Vec3 v1_chart = mat_vec(inv, evaluate(ch.v1, st));
          const Vec3 v2_chart = mat_vec(inv, evaluate(ch.v2, st));
          r1 = std::max(r1, norm(v1_chart - Vec3{1, 0, 0}));
          r2 = std::max(r2, norm(v2_chart - Vec3{0, 1, 0}));
          const Vec3 g_chart = mat_vec(inv, evaluate(ch.g, st));
          if (std::fabs(g_chart[2]) > 1e-12)
            slice_ratios[ic].push_back({g_chart[0] / g_chart[2], g_chart[1] / g_chart[2]});
        }
        ch.grid.push_back(std::move(sample));
      }
    }
  }

  ch.min_abs_jacobian_det = min_det;
  if (min_det < 1e-6) throw ChartSingular("chart Jacobian determinant below 1e-6 on the box");
  ch.v1_residual = r1;
  ch.v2_residual = r2;

  double spread = 0.0;
  for (const auto& slice : slice_ratios) {
    if (slice.empty()) continue;
    double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
    for (const Ratio& r : slice) {
      amin = std::min(amin, r.ra);
      amax = std::max(amax, r.ra);
      bmin = std::min(bmin, r.rb);
      bmax = std::max(bmax, r.rb);
    }
    spread = std::max({spread, amax - amin, bmax - bmin});
  }
  ch.g_ratio_spread = spread;
  return ch;
}

InvariantResult chart_invariant(const ControlSystem& s, const Chart& ch, ConicKind kind) {
  const int n = 9;
  std::vector<double> values;
  values.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double c = -ch.box + 2.0 * ch.box * i / (n - 1);
    const Mat3 jac = ch.forward_jacobian(0.0, 0.0, c);
    const Mat3 inv = mat_inverse(jac);
    const Point st = ch.forward(0.0, 0.0, c);
    const Vec3 f_chart = mat_vec(inv, evaluate(s.f, st));
    const Vec3 g_chart = mat_vec(inv, evaluate(s.g, st));
    // Remove the control direction from the drift (feedback normalization).
    const double lambda = f_chart[2] / g_chart[2];
    const double f1 = f_chart[0] - lambda * g_chart[0];
    const double f2 = f_chart[1] - lambda * g_chart[1];
    double value = 0.0;
    switch (kind) {
      case ConicKind::E: value = f1 * f1 + f2 * f2; break;
      case ConicKind::H: value = f1 * f1 - f2 * f2; break;
      case ConicKind::P:
        if (std::fabs(f2) < 1e-8)
          throw DivisionNearZero("normalized drift component f2 below 1e-8 on the chart axis");
        value = f1 / (f2 * f2);
        break;
    }
    values.push_back(value);
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double spread = 0.0;
  for (double v : values) spread = std::max(spread, std::fabs(v - mean));
  return {mean, spread};
}

double exp_inv_sq_derivative(int k, double a, double w) {
  if (w == 0.0) return 0.0;
  // d^k/dw^k exp(-a/w^2) = R_k(1/w) exp(-a/w^2) with
  // R_0 = 1, R_{k+1}(t) = 2 a t^3 R_k(t) - t^2 R_k'(t).
  std::vector<double> r = {1.0};
  for (int step = 0; step < k; ++step) {
    std::vector<double> next(r.size() + 3, 0.0);
    for (std::size_t i = 0; i < r.size(); ++i) {
      next[i + 3] += 2.0 * a * r[i];
      if (i >= 1) next[i + 1] -= static_cast<double>(i) * r[i];
    }
    r = std::move(next);
  }
  const double t = 1.0 / w;
  double poly = 0.0;
  for (std::size_t i = r.size(); i-- > 0;) poly = poly * t + r[i];
  return poly * std::exp(-a / (w * w));
}

CallbackDrift flat_parabolic_drift() {
  CallbackDrift d;
  d.value = [](const Point& p) -> Vec3 {
    if (p.w == 0.0) return {0.0, 0.0, 0.0};
    const double e = std::exp(-1.0 / (p.w * p.w));
    return {e * e, e, 0.0};
  };
  d.w_derivative = [](int k, const Point& p) -> Vec3 {
    // e(w)^2 = exp(-2/w^2)
    return {exp_inv_sq_derivative(k, 2.0, p.w), exp_inv_sq_derivative(k, 1.0, p.w), 0.0};
  };
  return d;
}

}  // namespace conic
