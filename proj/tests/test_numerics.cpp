#include <cmath>

#include <doctest.h>

#include "conic/errors.hpp"
#include "conic/numerics.hpp"
#include "conic/symmetry.hpp"
#include "conic/system_io.hpp"
#include "test_util.hpp"

using namespace conic;
using testutil::Gen;

namespace {

VectorField parse_field(const char* x, const char* y, const char* w) {
  return {parse_expr(x), parse_expr(y), parse_expr(w)};
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

TEST_CASE("flows with closed-form solutions") {
  // constant field
  const FlowResult c = integrate_flow(parse_field("1", "0", "0"), {0, 0, 0}, 2.0, 1e-3);
  CHECK(c.state.x == doctest::Approx(2.0));
  CHECK(c.state.y == doctest::Approx(0.0));
  CHECK(c.jacobian == mat_identity());

  // rotation generator: (x, y) rotates by -t, w drops linearly
  const VectorField rot = parse_field("y", "-x", "-1");
  const FlowResult r = integrate_flow(rot, {1, 0, 0}, kPi / 2, 1e-3);
  CHECK(std::fabs(r.state.x - 0.0) < 1e-8);
  CHECK(std::fabs(r.state.y - (-1.0)) < 1e-8);
  CHECK(std::fabs(r.state.w - (-kPi / 2)) < 1e-8);
  const double ct = std::cos(-kPi / 2), st = std::sin(-kPi / 2);
  CHECK(std::fabs(r.jacobian[0][0] - ct) < 1e-8);
  CHECK(std::fabs(r.jacobian[0][1] + st) < 1e-8);
  CHECK(std::fabs(r.jacobian[1][0] - st) < 1e-8);
  CHECK(std::fabs(r.jacobian[1][1] - ct) < 1e-8);
  CHECK(std::fabs(r.jacobian[2][2] - 1.0) < 1e-10);

  // scalar linear field: w' = w
  const FlowResult s = integrate_flow(parse_field("0", "0", "w"), {0, 0, 1}, 1.0, 1e-3);
  CHECK(std::fabs(s.state.w - std::exp(1.0)) < 1e-8);
  CHECK(std::fabs(s.jacobian[2][2] - std::exp(1.0)) < 1e-8);
  CHECK(std::fabs(s.jacobian[0][0] - 1.0) < 1e-12);
}

TEST_CASE("flow errors") {
  CHECK_THROWS_AS(integrate_flow(parse_field("0", "0", "w^2"), {0, 0, 1}, 2.0, 1e-3), BlowUp);
  CHECK_THROWS_AS(integrate_flow(parse_field("1", "0", "0"), {0, 0, 0}, 1.0, 0.0), Error);
}

TEST_CASE("simulation of the null forms") {
  const ControlSystem se = sigma_e();
  const Trajectory straight = simulate(se, ControlSchedule::constant(0.0), {0, 0, 0}, 1.0, 1e-3);
  CHECK(straight.states.back().x == doctest::Approx(1.0));
  CHECK(straight.states.back().y == doctest::Approx(0.0).epsilon(1e-9));

  // unit turn closes a circle in (x, y) after 2 pi
  const Trajectory circle =
      simulate(se, ControlSchedule::constant(1.0), {0, 0, 0}, 2 * kPi, 1e-3);
  CHECK(std::fabs(circle.states.back().x) < 1e-6);
  CHECK(std::fabs(circle.states.back().y) < 1e-6);
  CHECK(circle.states.back().w == doctest::Approx(2 * kPi));

  const Trajectory drift = simulate(sigma_p(), ControlSchedule::constant(0.0), {0, 0, 2}, 1.0, 1e-3);
  CHECK(drift.states.back().x == doctest::Approx(4.0));
  CHECK(drift.states.back().y == doctest::Approx(2.0));
  CHECK(drift.states.back().w == doctest::Approx(2.0));

  // piecewise schedule: strictly increasing times across the switch
  const Trajectory pieces = simulate(se, ControlSchedule{{{0.25, 1.0}, {0.25, -1.0}}},
                                     {0, 0, 0}, 0.5, 1e-3);
  for (std::size_t i = 1; i < pieces.times.size(); ++i)
    CHECK(pieces.times[i] > pieces.times[i - 1]);
  CHECK(pieces.states.back().w == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("constraint residuals") {
  Gen gen(31);
  auto random_schedule = [&]() {
    ControlSchedule sched;
    const int pieces = gen.uniform(1, 4);
    for (int i = 0; i < pieces; ++i)
      sched.segments.emplace_back(gen.real(0.1, 0.4), gen.real(-1.0, 1.0));
    return sched;
  };
  for (int trial = 0; trial < 10; ++trial) {
    const ControlSchedule sched = random_schedule();
    const Trajectory te = simulate(sigma_e(), sched, {0, 0, 0}, 1.0, 1e-3);
    CHECK(constraint_residual(te, ConicKind::E) < 1e-6);
    const Trajectory th = simulate(sigma_h(), sched, {0, 0, 0}, 1.0, 1e-3);
    CHECK(constraint_residual(th, ConicKind::H) < 1e-6);
    const Trajectory tp = simulate(sigma_p(), sched, {0, 0, 0}, 1.0, 1e-3);
    CHECK(constraint_residual(tp, ConicKind::P) < 1e-6);
  }

  // mismatch detector: an elliptic trajectory violates the hyperbolic
  // constraint by 1 - cos(2w) once w has moved away from 0
  const Trajectory te = simulate(sigma_e(), ControlSchedule::constant(1.0), {0, 0, 0}, 1.0, 1e-3);
  CHECK(constraint_residual(te, ConicKind::H) > 0.5);

  Trajectory tiny;
  tiny.times = {0.0, 0.1};
  tiny.states = {{0, 0, 0}, {0.1, 0, 0}};
  tiny.controls = {0, 0};
  CHECK_THROWS_AS(constraint_residual(tiny, ConicKind::E), TooShort);
}

TEST_CASE("flow pushforward residuals detect symmetries") {
  const ControlSystem se = sigma_e();
  CHECK(flow_pushforward_residual(parse_field("1", "0", "0"), se, {0.4, -1, 0.2}, 0.5) < 1e-8);
  CHECK(flow_pushforward_residual(parse_field("y", "-x", "-1"), se, {1, 1, 0}, 1.0) < 1e-6);
  // designated non-symmetry control
  CHECK(flow_pushforward_residual(parse_field("x", "0", "0"), se, {1, 0, 0}, 0.5) > 1e-2);

  const ControlSystem sh = sigma_h();
  CHECK(flow_pushforward_residual(parse_field("y", "x", "1"), sh, {0.3, 0.1, -0.2}, 0.7) < 1e-6);

  const ControlSystem sp = sigma_p();
  CHECK(flow_pushforward_residual(parse_field("2*x", "y", "w"), sp, {0.5, -0.3, 0.8}, 0.6) < 1e-6);
}

TEST_CASE("rk4 order and jacobian consistency") {
  // order check against the closed form of w' = sin(w)
  const VectorField v = parse_field("0", "0", "sin(w)");
  const double w0 = 1.0, t = 1.0;
  const double exact = 2.0 * std::atan(std::tan(w0 / 2) * std::exp(t));
  const double e1 = std::fabs(integrate_flow(v, {0, 0, w0}, t, 0.05).state.w - exact);
  const double e2 = std::fabs(integrate_flow(v, {0, 0, w0}, t, 0.025).state.w - exact);
  const double ratio = e1 / e2;
  CHECK(ratio > 8.0);
  CHECK(ratio < 32.0);

  // variational Jacobian against central differences of the flow map
  Gen gen(77);
  for (int trial = 0; trial < 5; ++trial) {
    const VectorField f = gen.field(1);
    const Point p = gen.point(0.4);
    const double horizon = 0.4, step = 1e-3, h = 1e-5;
    const Mat3 jac = integrate_flow(f, p, horizon, step).jacobian;
    for (int j = 0; j < 3; ++j) {
      Point hi = p, lo = p;
      (j == 0 ? hi.x : j == 1 ? hi.y : hi.w) += h;
      (j == 0 ? lo.x : j == 1 ? lo.y : lo.w) -= h;
      const Point qh = integrate_flow(f, hi, horizon, step).state;
      const Point ql = integrate_flow(f, lo, horizon, step).state;
      const Vec3 fd{(qh.x - ql.x) / (2 * h), (qh.y - ql.y) / (2 * h), (qh.w - ql.w) / (2 * h)};
      for (int i = 0; i < 3; ++i) CHECK(std::fabs(jac[i][j] - fd[i]) < 1e-6);
    }
  }
}

TEST_CASE("flow group law") {
  Gen gen(123);
  for (int trial = 0; trial < 5; ++trial) {
    const VectorField f = gen.field(1);
    const Point p = gen.point(0.3);
    const double s = 0.3, t = 0.4, step = 5e-3;
    const Point once = integrate_flow(f, p, s + t, step).state;
    const Point mid = integrate_flow(f, p, s, step).state;
    const Point twice = integrate_flow(f, mid, t, step).state;
    const double err = norm(Vec3{once.x - twice.x, once.y - twice.y, once.w - twice.w});
    CHECK(err < 10 * step * step * step * step);
  }
}

TEST_CASE("chart on the elliptic form is the identity up to integration error") {
  const ControlSystem se = sigma_e();
  const SymmetryBasis basis = solve_symmetries(se, Ansatz{1, 1, 0});
  REQUIRE(basis.dim() == 3);
  const Chart chart = build_chart(se, basis, {0, 0, 0}, 0.5, 1e-3);
  CHECK(chart.v1_residual < 1e-6);
  CHECK(chart.v2_residual < 1e-6);
  CHECK(chart.g_ratio_spread < 1e-6);
  CHECK(chart.min_abs_jacobian_det > 0.9);

  const InvariantResult inv = chart_invariant(se, chart, ConicKind::E);
  CHECK(inv.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inv.spread < 1e-12);
}

TEST_CASE("chart invariants for the hyperbolic and parabolic forms") {
  const ControlSystem sh = sigma_h();
  const SymmetryBasis bh = solve_symmetries(sh, Ansatz{1, 0, 1});
  const Chart ch = build_chart(sh, bh, {0, 0, 0}, 0.5, 1e-3);
  const InvariantResult ih = chart_invariant(sh, ch, ConicKind::H);
  CHECK(ih.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ih.spread < 1e-10);

  const ControlSystem sp = sigma_p({0, 0, 1});
  const SymmetryBasis bp = solve_symmetries(sp, Ansatz{1, 0, 0});
  const Chart cp = build_chart(sp, bp, {0, 0, 1}, 0.25, 1e-3);
  const InvariantResult ip = chart_invariant(sp, cp, ConicKind::P);
  CHECK(ip.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(ip.spread < 1e-10);

  // the parabolic invariant divides by f2, which vanishes at an equilibrium center
  const ControlSystem sp0 = sigma_p({0, 0, 0});
  const SymmetryBasis bp0 = solve_symmetries(sp0, Ansatz{1, 0, 0});
  const Chart cp0 = build_chart(sp0, bp0, {0, 0, 0}, 0.25, 1e-3);
  CHECK_THROWS_AS(chart_invariant(sp0, cp0, ConicKind::P), DivisionNearZero);
}

TEST_CASE("chart on a scrambled system recovers the rectified frame") {
  const FeedbackTransform t = random_scramble(5);
  const ControlSystem scrambled = apply_feedback(sigma_e(), t);
  const SymmetryBasis basis = solve_symmetries(scrambled, Ansatz{});
  REQUIRE(basis.dim() == 3);
  const Chart chart = build_chart(scrambled, basis, *scrambled.base, 0.4, 1e-3);
  CHECK(chart.v1_residual < 1e-6);
  CHECK(chart.v2_residual < 1e-6);
  CHECK(chart.g_ratio_spread < 1e-6);
  const InvariantResult inv = chart_invariant(scrambled, chart, ConicKind::E);
  CHECK(inv.spread < 1e-5);
  CHECK(inv.value > 0.0);
}

TEST_CASE("chart construction rejects bad inputs") {
  // independence failure at the center: the ideal contains g's direction
  SymmetryBasis fake{{parse_field("1", "0", "0"), parse_field("0", "1", "0"),
                      parse_field("y", "-x", "-1")}};
  ControlSystem bad;
  bad.f = sigma_e().f;
  bad.g = parse_field("1", "0", "0");
  bad.base = Point{0, 0, 0};
  CHECK_THROWS_AS(build_chart(bad, fake, {0, 0, 0}, 0.3, 1e-3), NotIndependent);

  // singular Jacobian away from the center: the ideal generator w dx
  // degenerates where the c-axis crosses w = 0
  SymmetryBasis degenerate{{parse_field("w", "0", "0"), parse_field("0", "1", "0"),
                            parse_field("2*x", "y", "0")}};
  ControlSystem sp = sigma_p({0, 0, 1});
  CHECK_THROWS_AS(build_chart(sp, degenerate, {0, 0, 1}, 1.0, 1e-2), ChartSingular);
}

TEST_CASE("flat drift derivative callbacks") {
  const CallbackDrift flat = flat_parabolic_drift();
  // all w-derivatives vanish at w = 0
  for (int k = 1; k <= 10; ++k) {
    const Vec3 d = flat.w_derivative(k, {0, 0, 0});
    CHECK(d[0] == 0.0);
    CHECK(d[1] == 0.0);
  }
  // away from zero they match finite differences of exp(-1/w^2)
  for (double w : {0.8, 1.3, -0.9}) {
    const double h = 1e-5;
    auto e = [](double x) { return std::exp(-1.0 / (x * x)); };
    const double fd1 = (e(w + h) - e(w - h)) / (2 * h);
    CHECK(exp_inv_sq_derivative(1, 1.0, w) == doctest::Approx(fd1).epsilon(1e-7));
    const double fd2 = (e(w + h) - 2 * e(w) + e(w - h)) / (h * h);
    CHECK(exp_inv_sq_derivative(2, 1.0, w) == doctest::Approx(fd2).epsilon(1e-5));
  }
  const Vec3 value = flat.value({0, 0, 0.5});
  CHECK(value[1] == doctest::Approx(std::exp(-4.0)));
  CHECK(value[0] == doctest::Approx(std::exp(-8.0)));
}
