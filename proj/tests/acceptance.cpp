// Acceptance suite: runs every target property of the toolkit end to end and
// prints one PASS/FAIL line per criterion. Exits nonzero when anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "conic/classifier.hpp"
#include "conic/lie_algebra.hpp"
#include "conic/numerics.hpp"
#include "conic/symmetry.hpp"
#include "conic/system_io.hpp"

using namespace conic;

namespace {

int failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail = "") {
  std::printf("%s %2d. %s%s%s\n", pass ? "PASS" : "FAIL", number, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

VectorField parse_field(const char* x, const char* y, const char* w) {
  return {parse_expr(x), parse_expr(y), parse_expr(w)};
}

std::vector<VectorField> generators_e() {
  return {parse_field("1", "0", "0"), parse_field("0", "1", "0"), parse_field("y", "-x", "-1")};
}
std::vector<VectorField> generators_h() {
  return {parse_field("1", "0", "0"), parse_field("0", "1", "0"), parse_field("y", "x", "1")};
}
std::vector<VectorField> generators_p() {
  return {parse_field("1", "0", "0"), parse_field("0", "1", "0"), parse_field("2*x", "y", "w")};
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// 1. The solved symmetry spaces of the three null forms are 3-dimensional and
//    span exactly the known generator lists, within 5 s each.
void criterion_1() {
  bool pass = true;
  std::string detail;
  const struct {
    const char* name;
    ControlSystem system;
    std::vector<VectorField> expected;
  } cases[] = {{"E", sigma_e(), generators_e()},
               {"H", sigma_h(), generators_h()},
               {"P", sigma_p(), generators_p()}};
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const SymmetryBasis basis = solve_symmetries(c.system, Ansatz{});
    const double dt = seconds_since(t0);
    const bool ok = basis.dim() == 3 && spans_equal(basis.fields, c.expected) && dt < 5.0;
    pass = pass && ok;
    detail += std::string(c.name) + ": dim " + std::to_string(basis.dim()) + " in " + fmt(dt) +
              "s  ";
  }
  report(1, "symmetry algebras of the null forms (exact span match)", pass, detail);
}

// 2. Structure constants reproduce the multiplication tables exactly.
void criterion_2() {
  const StructureConstants e = structure_constants(SymmetryBasis{generators_e()});
  const StructureConstants h = structure_constants(SymmetryBasis{generators_h()});
  const StructureConstants p = structure_constants(SymmetryBasis{generators_p()});
  bool pass = true;
  // [v1,v3] = -v2, [v2,v3] = v1
  pass = pass && e.c[0][2][0] == 0 && e.c[0][2][1] == Rational(-1) && e.c[0][2][2] == 0;
  pass = pass && e.c[1][2][0] == Rational(1) && e.c[1][2][1] == 0 && e.c[1][2][2] == 0;
  pass = pass && e.c[0][1][0] == 0 && e.c[0][1][1] == 0 && e.c[0][1][2] == 0;
  // [v1,v3] = v2, [v2,v3] = v1
  pass = pass && h.c[0][2][1] == Rational(1) && h.c[1][2][0] == Rational(1) &&
         h.c[0][1][2] == 0 && h.c[0][2][0] == 0 && h.c[1][2][1] == 0;
  // [v1,v3] = 2v1, [v2,v3] = v2
  pass = pass && p.c[0][2][0] == Rational(2) && p.c[0][2][1] == 0 &&
         p.c[1][2][1] == Rational(1) && p.c[1][2][0] == 0 && p.c[0][1][2] == 0;
  // solved bases generate the same algebras
  for (const auto& [sys, expected] :
       {std::pair{sigma_e(), generators_e()}, {sigma_h(), generators_h()},
        {sigma_p(), generators_p()}}) {
    const SymmetryBasis solved = solve_symmetries(sys, Ansatz{});
    pass = pass && solved.dim() == 3 && spans_equal(solved.fields, expected);
  }
  report(2, "structure constants match the multiplication tables exactly", pass);
}

// 3. Eigenvalue classification with exact data, invariant under 100 random
//    complement/ideal-basis changes per algebra.
void criterion_3() {
  StructureConstants te, th, tp;
  te.set(0, 2, 1, Rational(-1));
  te.set(1, 2, 0, Rational(1));
  th.set(0, 2, 1, Rational(1));
  th.set(1, 2, 0, Rational(1));
  tp.set(0, 2, 0, Rational(2));
  tp.set(1, 2, 1, Rational(1));

  const AlgebraClass e = classify_algebra(te), h = classify_algebra(th), p = classify_algebra(tp);
  bool pass = e.tag == AlgebraTag::EllipticE2 && e.trace == 0 && e.det > 0;
  pass = pass && h.tag == AlgebraTag::HyperbolicP11 && h.trace == 0 && h.det < 0;
  pass = pass && p.tag == AlgebraTag::ParabolicL322 &&
         2 * p.trace * p.trace == 9 * p.det;

  std::mt19937_64 rng(321);
  auto draw = [&rng](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };
  const StructureConstants tables[3] = {te, th, tp};
  const AlgebraTag tags[3] = {AlgebraTag::EllipticE2, AlgebraTag::HyperbolicP11,
                              AlgebraTag::ParabolicL322};
  for (int which = 0; which < 3 && pass; ++which) {
    for (int trial = 0; trial < 100; ++trial) {
      Rational al(draw(-3, 3), draw(1, 3)), be(draw(-3, 3), draw(1, 3));
      Rational ga(draw(-3, 3), draw(1, 3)), de(draw(-3, 3), draw(1, 3));
      if (al * de - be * ga == 0) al += 1;
      if (al * de - be * ga == 0) continue;
      const std::array<std::array<Rational, 3>, 3> basis_change = {
          std::array<Rational, 3>{al, be, Rational(0)},
          std::array<Rational, 3>{ga, de, Rational(0)},
          std::array<Rational, 3>{Rational(draw(-3, 3), draw(1, 3)),
                                  Rational(draw(-3, 3), draw(1, 3)), Rational(1)}};
      if (classify_algebra(tables[which].change_basis(basis_change)).tag != tags[which]) {
        pass = false;
        break;
      }
    }
  }
  report(3, "eigenvalue classification, invariant under 100 basis changes", pass);
}

// 4. Verdicts of the decision procedure on the null forms, each under 10 s.
void criterion_4() {
  bool pass = true;
  std::string detail;
  double worst = 0;
  const struct {
    const char* name;
    ControlSystem system;
    Point at;
    VerdictTag tag;
    int k;
  } cases[] = {
      {"E@origin", sigma_e(), {0, 0, 0}, VerdictTag::Elliptic, 0},
      {"E@(2,-1,0.6)", sigma_e({2, -1, 0.6}), {2, -1, 0.6}, VerdictTag::Elliptic, 0},
      {"H@origin", sigma_h(), {0, 0, 0}, VerdictTag::Hyperbolic, 0},
      {"H@(1,2,0.3)", sigma_h({1, 2, 0.3}), {1, 2, 0.3}, VerdictTag::Hyperbolic, 0},
      {"P@w=1", sigma_p({0, 0, 1}), {0, 0, 1}, VerdictTag::ParabolicNonEq, 0},
      {"P@w=0", sigma_p(), {0, 0, 0}, VerdictTag::ParabolicEq, 1},
      {"P02", sigma_p0k(2), {0, 0, 0}, VerdictTag::ParabolicEq, 2},
      {"P03", sigma_p0k(3), {0, 0, 0}, VerdictTag::ParabolicEq, 3},
  };
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const Verdict v = classify(c.system, c.at);
    const double dt = seconds_since(t0);
    worst = std::max(worst, dt);
    const bool ok = v.tag == c.tag && (c.tag != VerdictTag::ParabolicEq || v.k == c.k) && dt < 10.0;
    if (!ok) detail += std::string(c.name) + ": " + v.summary() + "  ";
    pass = pass && ok;
  }
  // distinctness of k across P^{0,k}
  pass = pass && classify(sigma_p0k(1), {0, 0, 0}).k == 1 &&
         classify(sigma_p0k(2), {0, 0, 0}).k == 2 && classify(sigma_p0k(3), {0, 0, 0}).k == 3;
  report(4, "theorem verdicts on the null forms", pass,
         detail + "slowest case " + fmt(worst) + "s");
}

// 5. 20 seeded scrambles per form preserve the verdict tag and k, in under
//    2 minutes total.
void criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  bool pass = true;
  std::string detail;
  const struct {
    const char* name;
    ControlSystem system;
    VerdictTag tag;
    int k;
  } cases[] = {
      {"E", sigma_e(), VerdictTag::Elliptic, 0},
      {"H", sigma_h(), VerdictTag::Hyperbolic, 0},
      {"P@w=1", sigma_p({0, 0, 1}), VerdictTag::ParabolicNonEq, 0},
      {"P@w=0", sigma_p(), VerdictTag::ParabolicEq, 1},
      {"P02", sigma_p0k(2), VerdictTag::ParabolicEq, 2},
  };
  for (const auto& c : cases) {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const FeedbackTransform t = random_scramble(seed * 7919 + 13);
      const ControlSystem scrambled = apply_feedback(c.system, t);
      const Verdict v = classify(scrambled, *scrambled.base);
      const bool ok = v.tag == c.tag && (c.tag != VerdictTag::ParabolicEq || v.k == c.k);
      if (!ok && detail.size() < 200)
        detail += std::string(c.name) + "/seed" + std::to_string(seed) + ": " + v.summary() + "  ";
      pass = pass && ok;
    }
  }
  const double dt = seconds_since(t0);
  pass = pass && dt < 120.0;
  report(5, "verdict and k invariance under 100 feedback scrambles", pass,
         detail + "total " + fmt(dt) + "s");
}

// 6. Negative controls: zero drift and the double-integrator fragment are
//    NotConic; the flat drift is Inconclusive with the k search exhausted.
void criterion_6() {
  bool pass = true;
  ControlSystem no_drift;
  no_drift.g = parse_field("0", "0", "1");
  const Verdict v0 = classify(no_drift, {0, 0, 0});
  pass = pass && v0.tag == VerdictTag::NotConic;

  ControlSystem linear;
  linear.f = parse_field("w", "0", "0");
  linear.g = parse_field("0", "0", "1");
  const Verdict v1 = classify(linear, {0, 0, 0});
  pass = pass && v1.tag == VerdictTag::NotConic;

  SymmetryBasis claimed{{parse_field("1", "0", "0"), parse_field("0", "1", "0"),
                         parse_field("2*x", "y", "1/2*w^3")}};
  const Verdict flat = classify_numeric(flat_parabolic_drift(), claimed, {0, 0, 0});
  pass = pass && flat.tag == VerdictTag::Inconclusive && flat.k_trace.size() == 8;
  for (const auto& probe : flat.k_trace) pass = pass && !probe.independent;
  report(6, "negative controls (zero drift, linear drift, flat drift)", pass,
         "flat: " + flat.summary());
}

// 7. Flow residual of every generator below 1e-6 at 5 random points and
//    t in {0.1, 0.5, 1}; the non-symmetry control exceeds 1e-2.
void criterion_7() {
  bool pass = true;
  double worst = 0;
  std::mt19937_64 rng(654);
  auto coord = [&rng] { return (static_cast<double>(rng() % 2000) - 1000.0) / 1000.0; };
  const struct {
    ControlSystem system;
    std::vector<VectorField> generators;
  } cases[] = {{sigma_e(), generators_e()}, {sigma_h(), generators_h()},
               {sigma_p(), generators_p()}};
  for (const auto& c : cases) {
    for (const VectorField& v : c.generators) {
      for (int i = 0; i < 5; ++i) {
        const Point p{coord(), coord(), coord()};
        for (double t : {0.1, 0.5, 1.0}) {
          const double r = flow_pushforward_residual(v, c.system, p, t);
          worst = std::max(worst, r);
          pass = pass && r < 1e-6;
        }
      }
    }
  }
  const double control =
      flow_pushforward_residual(parse_field("x", "0", "0"), sigma_e(), {1, 0, 0}, 0.5);
  pass = pass && control > 1e-2;
  report(7, "numeric symmetry verification through flows", pass,
         "worst generator residual " + fmt(worst) + ", control " + fmt(control));
}

// 8. Conserved quantities on identity and scrambled charts.
void criterion_8() {
  bool pass = true;
  std::string detail;

  const SymmetryBasis be = solve_symmetries(sigma_e(), Ansatz{});
  const Chart ce = build_chart(sigma_e(), be, {0, 0, 0}, 0.5, 1e-3);
  const InvariantResult ie = chart_invariant(sigma_e(), ce, ConicKind::E);
  pass = pass && std::fabs(ie.value - 1.0) < 1e-12 && ie.spread < 1e-12;
  detail += "E identity: spread " + fmt(ie.spread) + "  ";

  const SymmetryBasis bh = solve_symmetries(sigma_h(), Ansatz{});
  const Chart chh = build_chart(sigma_h(), bh, {0, 0, 0}, 0.5, 1e-3);
  const InvariantResult ih = chart_invariant(sigma_h(), chh, ConicKind::H);
  pass = pass && std::fabs(ih.value - 1.0) < 1e-10 && ih.spread < 1e-5;

  const ControlSystem sp = sigma_p({0, 0, 1});
  const SymmetryBasis bp = solve_symmetries(sp, Ansatz{});
  const Chart chp = build_chart(sp, bp, {0, 0, 1}, 0.25, 1e-3);
  const InvariantResult ip = chart_invariant(sp, chp, ConicKind::P);
  pass = pass && std::fabs(ip.value - 1.0) < 1e-9 && ip.spread < 1e-5;

  // scrambled charts, one per class
  const struct {
    const char* name;
    ControlSystem system;
    ConicKind kind;
    double box;
    std::uint64_t seed;
  } scrambled_cases[] = {{"E", sigma_e(), ConicKind::E, 0.4, 3},
                         {"H", sigma_h(), ConicKind::H, 0.4, 5},
                         {"P", sigma_p({0, 0, 1}), ConicKind::P, 0.2, 11}};
  for (const auto& c : scrambled_cases) {
    const ControlSystem scrambled = apply_feedback(c.system, random_scramble(c.seed));
    const SymmetryBasis basis = solve_symmetries(scrambled, Ansatz{});
    const Chart chart = build_chart(scrambled, basis, *scrambled.base, c.box, 1e-3);
    const InvariantResult inv = chart_invariant(scrambled, chart, c.kind);
    pass = pass && inv.spread < 1e-5;
    detail += std::string(c.name) + " scrambled: spread " + fmt(inv.spread) + "  ";
  }
  report(8, "conserved class invariants on identity and scrambled charts", pass, detail);
}

// 9. Constraint residuals below 1e-6 on 50 random control schedules per form.
void criterion_9() {
  bool pass = true;
  double worst = 0;
  std::mt19937_64 rng(987);
  auto real = [&rng](double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng() % 1000000) / 999999.0;
  };
  for (int trial = 0; trial < 50; ++trial) {
    ControlSchedule sched;
    const int pieces = 1 + static_cast<int>(rng() % 4);
    for (int i = 0; i < pieces; ++i) sched.segments.emplace_back(real(0.1, 0.4), real(-1, 1));
    const Trajectory te = simulate(sigma_e(), sched, {0, 0, 0}, 1.0, 1e-3);
    const Trajectory th = simulate(sigma_h(), sched, {0, 0, 0}, 1.0, 1e-3);
    const Trajectory tp = simulate(sigma_p(), sched, {0, 0, 0}, 1.0, 1e-3);
    const double re = constraint_residual(te, ConicKind::E);
    const double rh = constraint_residual(th, ConicKind::H);
    const double rp = constraint_residual(tp, ConicKind::P);
    worst = std::max({worst, re, rh, rp});
    pass = pass && re < 1e-6 && rh < 1e-6 && rp < 1e-6;
  }
  report(9, "conic constraint residuals on 50 random schedules per form", pass,
         "worst " + fmt(worst));
}

// 10. RK4 order ratio in [8, 32] under step halving; variational Jacobian
//     matches finite differences below 1e-6.
void criterion_10() {
  const VectorField v = parse_field("0", "0", "sin(w)");
  const double exact = 2.0 * std::atan(std::tan(0.5) * std::exp(1.0));
  const double e1 = std::fabs(integrate_flow(v, {0, 0, 1}, 1.0, 0.05).state.w - exact);
  const double e2 = std::fabs(integrate_flow(v, {0, 0, 1}, 1.0, 0.025).state.w - exact);
  const double ratio = e1 / e2;
  bool pass = ratio >= 8.0 && ratio <= 32.0;

  double worst = 0;
  const VectorField fields[] = {sigma_e().f, parse_field("y", "-x", "-1"),
                                parse_field("sin(w)", "x", "cos(w)")};
  for (const VectorField& f : fields) {
    const Point p{0.3, -0.2, 0.4};
    const double h = 1e-5;
    const Mat3 jac = integrate_flow(f, p, 0.5, 1e-3).jacobian;
    for (int j = 0; j < 3; ++j) {
      Point hi = p, lo = p;
      (j == 0 ? hi.x : j == 1 ? hi.y : hi.w) += h;
      (j == 0 ? lo.x : j == 1 ? lo.y : lo.w) -= h;
      const Point qh = integrate_flow(f, hi, 0.5, 1e-3).state;
      const Point ql = integrate_flow(f, lo, 0.5, 1e-3).state;
      const double fd[3] = {(qh.x - ql.x) / (2 * h), (qh.y - ql.y) / (2 * h),
                            (qh.w - ql.w) / (2 * h)};
      for (int i = 0; i < 3; ++i) worst = std::max(worst, std::fabs(jac[i][j] - fd[i]));
    }
  }
  pass = pass && worst < 1e-6;
  report(10, "integrator quality (order ratio, variational Jacobian)", pass,
         "ratio " + fmt(ratio) + ", worst Jacobian deviation " + fmt(worst));
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  if (failures == 0) {
    std::printf("all criteria passed\n");
  } else {
    std::printf("%d criteria FAILED\n", failures);
  }
  return failures == 0 ? 0 : 1;
}
