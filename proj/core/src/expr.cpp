#include "conic/expr.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "conic/errors.hpp"

namespace conic {

namespace {

double powi(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Normalizes a trig factor in place so that freq > 0, or freq == 0 with
// phase > 0. Returns the coefficient multiplier: -1 when a sin flips sign,
// 0 when the factor collapses to sin(0) = 0. A collapsed cos(0) = 1 is
// reported by kind == None.
int normalize_trig(TrigKind& kind, int& freq, Rational& phase) {
  if (freq == 0 && phase == 0) {
    if (kind == TrigKind::Sin) return 0;
    kind = TrigKind::None;
    return 1;
  }
  if (freq < 0 || (freq == 0 && phase < 0)) {
    freq = -freq;
    phase = -phase;
    if (kind == TrigKind::Sin) return -1;
  }
  return 1;
}

int rational_to_int(const Rational& r, const char* what) {
  if (!is_integer(r)) throw UnsupportedSubstitution(std::string(what) + " is not an integer");
  const Integer n = numerator(r);
  if (n > 1000000 || n < -1000000) throw UnsupportedSubstitution(std::string(what) + " out of range");
  return static_cast<int>(n.convert_to<long long>());
}

}  // namespace

bool Monomial::operator==(const Monomial& o) const {
  return px == o.px && py == o.py && pw == o.pw && trig == o.trig && trig_freq == o.trig_freq &&
         trig_phase == o.trig_phase && exp_present == o.exp_present && exp_freq == o.exp_freq &&
         exp_shift == o.exp_shift;
}

bool Monomial::operator<(const Monomial& o) const {
  if (px != o.px) return px < o.px;
  if (py != o.py) return py < o.py;
  if (pw != o.pw) return pw < o.pw;
  if (trig != o.trig) return static_cast<int>(trig) < static_cast<int>(o.trig);
  if (trig_freq != o.trig_freq) return trig_freq < o.trig_freq;
  if (trig_phase != o.trig_phase) return trig_phase < o.trig_phase;
  if (exp_present != o.exp_present) return !exp_present;
  if (exp_freq != o.exp_freq) return exp_freq < o.exp_freq;
  return exp_shift < o.exp_shift;
}

Expr Expr::constant(Rational c) {
  Expr e;
  e.add_term(Monomial{}, c);
  return e;
}

Expr Expr::variable(Var v) {
  Monomial m;
  switch (v) {
    case Var::X: m.px = 1; break;
    case Var::Y: m.py = 1; break;
    case Var::W: m.pw = 1; break;
  }
  return monomial(m, Rational(1));
}

Expr Expr::monomial(Monomial m, Rational c) {
  Expr e;
  e.add_term(m, c);
  return e;
}

Expr Expr::trig(TrigKind kind, int freq, Rational phase) {
  int mult = normalize_trig(kind, freq, phase);
  if (mult == 0) return Expr{};
  Monomial m;
  if (kind != TrigKind::None) {
    m.trig = kind;
    m.trig_freq = freq;
    m.trig_phase = std::move(phase);
  }
  return monomial(m, Rational(mult));
}

Expr Expr::exp_w(int freq, Rational shift) {
  Monomial m;
  if (freq != 0 || shift != 0) {
    m.exp_present = true;
    m.exp_freq = freq;
    m.exp_shift = std::move(shift);
  }
  return monomial(m, Rational(1));
}

std::optional<Rational> Expr::as_constant() const {
  if (terms_.empty()) return Rational(0);
  if (terms_.size() == 1 && terms_.begin()->first.is_constant()) return terms_.begin()->second;
  return std::nullopt;
}

void Expr::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    terms_.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Expr Expr::operator-() const {
  Expr r;
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Expr Expr::operator+(const Expr& o) const {
  Expr r = *this;
  r += o;
  return r;
}

Expr& Expr::operator+=(const Expr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Expr Expr::operator-(const Expr& o) const {
  Expr r = *this;
  r -= o;
  return r;
}

Expr& Expr::operator-=(const Expr& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Expr Expr::operator*(const Rational& c) const {
  if (c == 0) return Expr{};
  Expr r;
  for (const auto& [m, k] : terms_) r.terms_.emplace(m, k * c);
  return r;
}

// Product of two canonical monomials; trig factors reduce via product-to-sum,
// exponential frequencies and shifts add.
void Expr::multiply_term(Expr& out, const Monomial& a, const Monomial& b, const Rational& coeff) {
  Monomial r;
  r.px = a.px + b.px;
  r.py = a.py + b.py;
  r.pw = a.pw + b.pw;
  const int ef = a.exp_freq + b.exp_freq;
  const Rational es = a.exp_shift + b.exp_shift;
  if (ef != 0 || es != 0) {
    r.exp_present = true;
    r.exp_freq = ef;
    r.exp_shift = es;
  }

  if (a.trig == TrigKind::None && b.trig == TrigKind::None) {
    out.add_term(r, coeff);
    return;
  }
  if (a.trig == TrigKind::None || b.trig == TrigKind::None) {
    const Monomial& t = a.trig != TrigKind::None ? a : b;
    r.trig = t.trig;
    r.trig_freq = t.trig_freq;
    r.trig_phase = t.trig_phase;
    out.add_term(r, coeff);
    return;
  }

  // cos A cos B = 1/2 cos(A-B) + 1/2 cos(A+B)
  // sin A sin B = 1/2 cos(A-B) - 1/2 cos(A+B)
  // sin A cos B = 1/2 sin(A-B) + 1/2 sin(A+B)
  // cos A sin B = -1/2 sin(A-B) + 1/2 sin(A+B)
  const int fd = a.trig_freq - b.trig_freq;
  const int fs = a.trig_freq + b.trig_freq;
  const Rational pd = a.trig_phase - b.trig_phase;
  const Rational ps = a.trig_phase + b.trig_phase;
  const bool both_sin = a.trig == TrigKind::Sin && b.trig == TrigKind::Sin;
  const bool both_cos = a.trig == TrigKind::Cos && b.trig == TrigKind::Cos;
  const Rational half = Rational(1, 2);

  auto emit = [&](TrigKind kind, int freq, Rational phase, Rational c) {
    const int mult = normalize_trig(kind, freq, phase);
    if (mult == 0) return;
    Monomial t = r;
    if (kind != TrigKind::None) {
      t.trig = kind;
      t.trig_freq = freq;
      t.trig_phase = std::move(phase);
    }
    out.add_term(t, c * mult);
  };

  if (both_cos) {
    emit(TrigKind::Cos, fd, pd, coeff * half);
    emit(TrigKind::Cos, fs, ps, coeff * half);
  } else if (both_sin) {
    emit(TrigKind::Cos, fd, pd, coeff * half);
    emit(TrigKind::Cos, fs, ps, -coeff * half);
  } else if (a.trig == TrigKind::Sin) {
    emit(TrigKind::Sin, fd, pd, coeff * half);
    emit(TrigKind::Sin, fs, ps, coeff * half);
  } else {
    emit(TrigKind::Sin, fd, pd, -coeff * half);
    emit(TrigKind::Sin, fs, ps, coeff * half);
  }
}

Expr Expr::operator*(const Expr& o) const {
  Expr r;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) multiply_term(r, ma, mb, ca * cb);
  return r;
}

Expr Expr::pow(int k) const {
  if (k < 0) throw Error("negative exponent");
  Expr r = constant(Rational(1));
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

Expr Expr::derivative(Var v) const {
  Expr r;
  for (const auto& [m, c] : terms_) {
    switch (v) {
      case Var::X:
        if (m.px > 0) {
          Monomial d = m;
          --d.px;
          r.add_term(d, c * m.px);
        }
        break;
      case Var::Y:
        if (m.py > 0) {
          Monomial d = m;
          --d.py;
          r.add_term(d, c * m.py);
        }
        break;
      case Var::W: {
        if (m.pw > 0) {
          Monomial d = m;
          --d.pw;
          r.add_term(d, c * m.pw);
        }
        if (m.trig != TrigKind::None && m.trig_freq != 0) {
          Monomial d = m;
          d.trig = m.trig == TrigKind::Cos ? TrigKind::Sin : TrigKind::Cos;
          r.add_term(d, m.trig == TrigKind::Cos ? c * (-m.trig_freq) : c * m.trig_freq);
        }
        if (m.exp_present && m.exp_freq != 0) r.add_term(m, c * m.exp_freq);
        break;
      }
    }
  }
  return r;
}

double Expr::eval(const Point& p) const {
  double acc = 0.0;
  for (const auto& [m, c] : terms_) {
    double t = to_double(c);
    t *= powi(p.x, m.px);
    t *= powi(p.y, m.py);
    t *= powi(p.w, m.pw);
    if (m.trig == TrigKind::Cos) {
      t *= std::cos(m.trig_freq * p.w + to_double(m.trig_phase));
    } else if (m.trig == TrigKind::Sin) {
      t *= std::sin(m.trig_freq * p.w + to_double(m.trig_phase));
    }
    if (m.exp_present) t *= std::exp(m.exp_freq * p.w + to_double(m.exp_shift));
    if (!std::isfinite(t)) throw OverflowError("term exceeds double range");
    acc += t;
  }
  if (!std::isfinite(acc)) throw OverflowError("value exceeds double range");
  return acc;
}

int Expr::poly_degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.poly_degree());
  return d;
}

Expr Expr::substitute(const Expr& x_image, const Expr& y_image, const Expr& w_image) const {
  // Affine decomposition q*w + d of the w image, required by trig/exp factors.
  bool affine_known = false, affine_ok = false;
  Rational q(0), d(0);
  auto require_affine = [&]() {
    if (!affine_known) {
      affine_known = true;
      affine_ok = true;
      for (const auto& [m, c] : w_image.terms()) {
        if (m.is_constant()) {
          d = c;
        } else if (m.px == 0 && m.py == 0 && m.pw == 1 && m.trig == TrigKind::None &&
                   !m.exp_present) {
          q = c;
        } else {
          affine_ok = false;
        }
      }
    }
    if (!affine_ok)
      throw UnsupportedSubstitution("w image must be affine in w to substitute into trig/exp factors");
  };

  Expr out;
  for (const auto& [m, c] : terms_) {
    Expr term = Expr::constant(c);
    if (m.px > 0) term = term * x_image.pow(m.px);
    if (m.py > 0) term = term * y_image.pow(m.py);
    if (m.pw > 0) term = term * w_image.pow(m.pw);
    if (m.trig != TrigKind::None) {
      require_affine();
      const int nf = rational_to_int(q * m.trig_freq, "trig frequency");
      term = term * Expr::trig(m.trig, nf, d * m.trig_freq + m.trig_phase);
    }
    if (m.exp_present) {
      require_affine();
      const int nf = rational_to_int(q * m.exp_freq, "exp frequency");
      term = term * Expr::exp_w(nf, d * m.exp_freq + m.exp_shift);
    }
    out += term;
  }
  return out;
}

namespace {

std::string linear_form(int freq, const Rational& offset) {
  std::string s;
  if (freq == 1) {
    s = "w";
  } else if (freq == -1) {
    s = "-w";
  } else if (freq != 0) {
    s = std::to_string(freq) + "*w";
  }
  if (offset != 0) {
    if (s.empty()) {
      s = format_rational(offset);
    } else if (offset > 0) {
      s += "+" + format_rational(offset);
    } else {
      s += "-" + format_rational(Rational(-offset));
    }
  }
  return s;
}

std::string power_str(const char* var, int p) {
  std::string s = var;
  if (p > 1) s += "^" + std::to_string(p);
  return s;
}

}  // namespace

std::string Expr::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    const bool neg = c < 0;
    const Rational mag = neg ? Rational(-c) : c;

    std::string body;
    auto append_factor = [&](const std::string& f) {
      if (!body.empty()) body += "*";
      body += f;
    };
    if (m.px > 0) append_factor(power_str("x", m.px));
    if (m.py > 0) append_factor(power_str("y", m.py));
    if (m.pw > 0) append_factor(power_str("w", m.pw));
    if (m.trig == TrigKind::Cos) append_factor("cos(" + linear_form(m.trig_freq, m.trig_phase) + ")");
    if (m.trig == TrigKind::Sin) append_factor("sin(" + linear_form(m.trig_freq, m.trig_phase) + ")");
    if (m.exp_present) append_factor("exp(" + linear_form(m.exp_freq, m.exp_shift) + ")");

    if (body.empty()) {
      body = format_rational(mag);
    } else if (mag != 1) {
      body = format_rational(mag) + "*" + body;
    }

    if (first) {
      out = (neg ? "-" : "") + body;
      first = false;
    } else {
      out += (neg ? " - " : " + ") + body;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parser: recursive descent over
//   sum     := product { ('+'|'-') product }
//   product := unary { '*' unary }
//   unary   := '-' unary | power
//   power   := primary [ '^' digits ]
//   primary := number | 'x'|'y'|'w' | func '(' linear ')' | '(' sum ')'
// where number := digits [ '/' digits ] and linear is a signed sum of
// rational multiples of w and rational constants.
// ---------------------------------------------------------------------------

namespace {

class ExprParser {
 public:
  explicit ExprParser(std::string_view text) : text_(text) {}

  Expr parse() {
    Expr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) throw SyntaxError("unexpected trailing input", pos_);
    return e;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c)) throw SyntaxError(std::string("expected '") + c + "'", pos_);
  }

  Integer parse_digits() {
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
      throw SyntaxError("expected a number", pos_);
    Integer v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '.')
      throw SyntaxError("decimal literals are not supported, use p/q rationals", pos_);
    return v;
  }

  Rational parse_number() {
    Integer num = parse_digits();
    if (pos_ < text_.size() && text_[pos_] == '/') {
      ++pos_;
      Integer den = parse_digits();
      if (den == 0) throw SyntaxError("zero denominator", pos_);
      return Rational(num, den);
    }
    return Rational(num);
  }

  std::string parse_identifier() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  Expr parse_sum() {
    Expr e = parse_unary();
    while (true) {
      if (consume('+')) {
        e += parse_unary();
      } else if (consume('-')) {
        e -= parse_unary();
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (consume('-')) return -parse_unary();
    return parse_product();
  }

  Expr parse_product() {
    Expr e = parse_power();
    while (consume('*')) {
      // allow a unary minus after '*', e.g. "2*-3"
      if (consume('-')) {
        e = -(e * parse_power());
      } else {
        e = e * parse_power();
      }
    }
    return e;
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (consume('^')) {
      skip_ws();
      Integer k = parse_digits();
      if (k > 64) throw SyntaxError("exponent too large", pos_);
      return base.pow(static_cast<int>(k.convert_to<long long>()));
    }
    return base;
  }

  Expr parse_primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Expr e = parse_sum();
      expect(')');
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Expr::constant(parse_number());
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t name_pos = pos_;
      std::string name = parse_identifier();
      if (name == "x") return Expr::variable(Var::X);
      if (name == "y") return Expr::variable(Var::Y);
      if (name == "w") return Expr::variable(Var::W);
      if (name == "cos" || name == "sin" || name == "cosh" || name == "sinh" || name == "exp")
        return parse_function(name, name_pos);
      throw UnsupportedFunction("unsupported function or variable '" + name + "' at position " +
                                std::to_string(name_pos));
    }
    throw SyntaxError("unexpected character", pos_);
  }

  // Parses "(q*w + r)" style arguments into (w coefficient, constant offset).
  std::pair<Rational, Rational> parse_linear_argument() {
    expect('(');
    Rational qw(0), qc(0);
    int sign = 1;
    if (consume('-')) sign = -1;
    while (true) {
      const char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        Rational n = parse_number();
        if (consume('*')) {
          skip_ws();
          if (parse_identifier() != "w")
            throw SyntaxError("function arguments may only involve w", pos_);
          qw += sign * n;
        } else {
          qc += sign * n;
        }
      } else if (std::isalpha(static_cast<unsigned char>(c))) {
        if (parse_identifier() != "w")
          throw SyntaxError("function arguments may only involve w", pos_);
        qw += sign;
      } else {
        throw SyntaxError("expected a linear form in w", pos_);
      }
      if (consume('+')) {
        sign = 1;
      } else if (consume('-')) {
        sign = -1;
      } else {
        break;
      }
    }
    expect(')');
    return {qw, qc};
  }

  int integral_frequency(const Rational& q, const std::string& name, std::size_t name_pos) {
    if (!is_integer(q))
      throw NonIntegerFrequency(name + " frequency " + format_rational(q) +
                                " is not an integer (at position " + std::to_string(name_pos) + ")");
    const Integer n = numerator(q);
    if (n > 1000000 || n < -1000000) throw NonIntegerFrequency(name + " frequency out of range");
    return static_cast<int>(n.convert_to<long long>());
  }

  Expr parse_function(const std::string& name, std::size_t name_pos) {
    auto [qw, qc] = parse_linear_argument();
    const int freq = integral_frequency(qw, name, name_pos);
    const Rational half(1, 2);
    if (name == "cos") return Expr::trig(TrigKind::Cos, freq, qc);
    if (name == "sin") return Expr::trig(TrigKind::Sin, freq, qc);
    if (name == "exp") return Expr::exp_w(freq, qc);
    // cosh/sinh are rewritten into the exp basis immediately
    if (name == "cosh")
      return Expr::exp_w(freq, qc) * half + Expr::exp_w(-freq, -qc) * half;
    return Expr::exp_w(freq, qc) * half - Expr::exp_w(-freq, -qc) * half;
  }
};

}  // namespace

Expr parse_expr(std::string_view text) { return ExprParser(text).parse(); }

}  // namespace conic
