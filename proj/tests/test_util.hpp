#pragma once

#include <random>

#include "conic/expr.hpp"
#include "conic/vector_field.hpp"

namespace conic::testutil {

/// Deterministic generator of small expressions, points and vector fields for
/// property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  int uniform(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double real(double lo, double hi) {
    return lo + (hi - lo) * static_cast<double>(rng_() % 1000000) / 999999.0;
  }

  Expr expr(int max_terms = 3, bool with_phases = false) {
    Expr e;
    const int terms = uniform(1, max_terms);
    for (int t = 0; t < terms; ++t) {
      Monomial m;
      m.px = uniform(0, 2);
      m.py = uniform(0, 2);
      m.pw = uniform(0, 2);
      const int trig = uniform(0, 2);
      if (trig > 0) {
        m.trig = trig == 1 ? TrigKind::Cos : TrigKind::Sin;
        m.trig_freq = uniform(1, 2);
        if (with_phases && uniform(0, 1) == 0) m.trig_phase = Rational(uniform(-2, 2), 2);
      }
      const int ef = uniform(-1, 1);
      if (ef != 0) {
        m.exp_present = true;
        m.exp_freq = ef;
      }
      const Rational coeff(uniform(-2, 2), uniform(1, 2));
      if (coeff != 0) e += Expr::monomial(m, coeff);
    }
    return e;
  }

  /// Field with gentle components, suitable for short-time flows.
  VectorField field(int max_terms = 2) { return {expr(max_terms), expr(max_terms), expr(max_terms)}; }

  Point point(double scale = 1.0) {
    return {scale * real(-1, 1), scale * real(-1, 1), scale * real(-1, 1)};
  }

 private:
  std::mt19937_64 rng_;
};

}  // namespace conic::testutil
