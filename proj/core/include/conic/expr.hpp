#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "conic/rational.hpp"

namespace conic {

enum class Var { X, Y, W };

enum class TrigKind { None, Cos, Sin };

/// A point of the state space R^3 in the (x, y, w) coordinates.
struct Point {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
};

/// One multiplicative term: x^px * y^py * w^pw * [cos|sin](trig_freq*w + trig_phase)
/// * exp(exp_freq*w + exp_shift).
///
/// Canonical form: trig_freq > 0, or trig_freq == 0 with trig_phase > 0 (constant
/// factors like cos(1/2)); (exp_freq, exp_shift) != (0, 0) whenever the factor is
/// present, encoded by exp_present. Distinct canonical monomials are linearly
/// independent over Q, which is what makes the zero test of Expr exact.
struct Monomial {
  int px = 0;
  int py = 0;
  int pw = 0;
  TrigKind trig = TrigKind::None;
  int trig_freq = 0;
  Rational trig_phase = Rational(0);
  bool exp_present = false;
  int exp_freq = 0;
  Rational exp_shift = Rational(0);

  bool operator==(const Monomial& o) const;
  bool operator<(const Monomial& o) const;

  int poly_degree() const { return px + py + pw; }
  bool is_constant() const {
    return px == 0 && py == 0 && pw == 0 && trig == TrigKind::None && !exp_present;
  }
};

/// Exact scalar expression over (x, y, w): a finite Q-linear combination of
/// canonical monomials. Immutable value type; all operations return canonical
/// results, so equality of term maps decides equality of functions.
class Expr {
 public:
  Expr() = default;

  static Expr constant(Rational c);
  static Expr variable(Var v);
  static Expr monomial(Monomial m, Rational c);
  /// cos(freq*w + phase) or sin(freq*w + phase); freq may be any integer,
  /// the canonical sign normalization is applied.
  static Expr trig(TrigKind kind, int freq, Rational phase = Rational(0));
  /// exp(freq*w + shift)
  static Expr exp_w(int freq, Rational shift = Rational(0));

  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, Rational>& terms() const { return terms_; }
  std::optional<Rational> as_constant() const;

  Expr operator-() const;
  Expr operator+(const Expr& o) const;
  Expr operator-(const Expr& o) const;
  Expr operator*(const Expr& o) const;
  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr operator*(const Rational& c) const;
  Expr pow(int k) const;  // k >= 0

  bool operator==(const Expr& o) const { return terms_ == o.terms_; }

  /// Exact partial derivative.
  Expr derivative(Var v) const;

  /// Term-wise double evaluation; throws OverflowError when a term leaves
  /// the double range.
  double eval(const Point& p) const;

  /// Substitutes x -> x_image, y -> y_image, w -> w_image. The images of x and y
  /// may be arbitrary expressions. When this expression carries trig or exp
  /// factors, w_image must be affine in w alone (q*w + d) with all resulting
  /// frequencies integral; otherwise UnsupportedSubstitution is thrown.
  Expr substitute(const Expr& x_image, const Expr& y_image, const Expr& w_image) const;

  /// Deterministic canonical rendering, parseable by parse_expr.
  std::string str() const;

  /// Max total polynomial degree over all terms (0 for the zero expression).
  int poly_degree() const;

 private:
  void add_term(const Monomial& m, const Rational& c);
  static void multiply_term(Expr& out, const Monomial& a, const Monomial& b, const Rational& coeff);

  std::map<Monomial, Rational> terms_;
};

inline Expr operator*(const Rational& c, const Expr& e) { return e * c; }

/// Parses the expression grammar: integer/rational literals ("3", "5/2"),
/// variables x y w, operators + - * ^ (non-negative integer exponents),
/// parentheses and the functions cos, sin, cosh, sinh, exp applied to a
/// linear form in w with rational coefficients ("cos(2*w)", "exp(-w+1/2)").
/// cosh and sinh are rewritten into the exp basis on the spot.
Expr parse_expr(std::string_view text);

}  // namespace conic
