#pragma once

#include <functional>
#include <vector>

#include "conic/symmetry.hpp"
#include "conic/vector_field.hpp"

namespace conic {

/// Sampled solution of xi' = f(xi) + g(xi) u(t). Times are strictly
/// increasing; controls[i] is the control active on [times[i], times[i+1]).
struct Trajectory {
  std::vector<double> times;
  std::vector<Point> states;
  std::vector<double> controls;
};

/// Piecewise-constant control: (duration, value) segments; the last value
/// extends beyond the scheduled horizon.
struct ControlSchedule {
  std::vector<std::pair<double, double>> segments;

  static ControlSchedule constant(double u) { return {{{1e300, u}}}; }
  double at(double t) const;
  /// Segment switch times inside (0, horizon).
  std::vector<double> switch_times(double horizon) const;
};

/// Endpoint and Jacobian of the time-t flow map of v from p0, integrated by
/// classical RK4 jointly with the variational equation. Throws BlowUp when the
/// state norm exceeds 1e9.
struct FlowResult {
  Point state;
  Mat3 jacobian;
};
FlowResult integrate_flow(const VectorField& v, const Point& p0, double t, double step);

Trajectory simulate(const ControlSystem& s, const ControlSchedule& u, const Point& p0, double horizon,
                    double step);

enum class ConicKind { E, H, P };

/// Max over interior samples of |S(x', y')| with derivatives from (possibly
/// unevenly spaced) central differences. S_E = x'^2 + y'^2 - 1,
/// S_H = x'^2 - y'^2 - 1, S_P = y'^2 - x'. Throws TooShort below 3 samples.
double constraint_residual(const Trajectory& tr, ConicKind kind);

/// Pushforward defect of the admissible-velocity line field under the time-t
/// flow of v: with q the endpoint and M the flow Jacobian at p,
///   |M g(p) x g(q)| and |(M f(p) - f(q)) x g(q)|,
/// both scale-normalized. Near zero iff the flow maps A(p) onto A(q).
double flow_pushforward_residual(const VectorField& v, const ControlSystem& s, const Point& p,
                                 double t, double step = 1e-3);

/// Numeric normalizing chart around `center`: coordinates (a, b, c) map to
/// flow_a(v1) o flow_b(v2) o flow_c(g) (center). Carries a cached sample grid
/// with Jacobians plus rectification diagnostics measured on it.
struct Chart {
  Point center;
  VectorField v1, v2, g;
  double box = 0.5;
  double step = 1e-3;

  struct GridSample {
    double a, b, c;
    Point state;
    Mat3 jacobian;
  };
  std::vector<GridSample> grid;  // (2n+1)^3 points over [-box, box]^3
  int points_per_axis = 5;

  double min_abs_jacobian_det = 0.0;
  double v1_residual = 0.0;      // max |J^{-1} v1 - e_a| over the grid
  double v2_residual = 0.0;      // max |J^{-1} v2 - e_b| over the grid
  double g_ratio_spread = 0.0;   // max in-slice spread of (g_a/g_c, g_b/g_c)

  Point forward(double a, double b, double c) const;
  Mat3 forward_jacobian(double a, double b, double c) const;
};

/// Builds the chart from the abelian ideal of the solved symmetry algebra.
/// Preconditions checked: the two ideal generators commute symbolically
/// (NotCommuting), (v1, v2, g) independent at p (NotIndependent), Jacobian
/// determinant bounded away from zero on the box (ChartSingular).
Chart build_chart(const ControlSystem& s, const SymmetryBasis& b, const Point& p, double box,
                  double step);

/// Mean and max deviation over the chart's c-axis of the class invariant of
/// the feedback-normalized drift: E -> f1^2 + f2^2, H -> f1^2 - f2^2,
/// P -> f1 / f2^2 (DivisionNearZero when |f2| < 1e-8 at a grid point).
struct InvariantResult {
  double value = 0.0;
  double spread = 0.0;
};
InvariantResult chart_invariant(const ControlSystem& s, const Chart& ch, ConicKind kind);

/// Drift supplied through point evaluation callbacks together with exact
/// w-derivatives of any order; covers smooth non-analytic drifts that the
/// symbolic class cannot represent. The control field of such a system is
/// fixed to the unit w-direction.
struct CallbackDrift {
  std::function<Vec3(const Point&)> value;
  std::function<Vec3(int, const Point&)> w_derivative;  // d^k/dw^k, k >= 1
};

/// The flat parabolic drift (e(w)^2, e(w), 0) with e(w) = exp(-1/w^2),
/// e(0) = 0: all w-derivatives vanish at w = 0 although the drift is nonzero
/// for w != 0. Derivatives are evaluated from the closed-form recursion
/// d/dw [R(1/w) e(w)] = (2 t^3 R(t) - t^2 R'(t))|_{t=1/w} e(w).
CallbackDrift flat_parabolic_drift();

/// d^k/dw^k exp(-a/w^2) at w (exact zero at w = 0).
double exp_inv_sq_derivative(int k, double a, double w);

}  // namespace conic
