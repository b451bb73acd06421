#include "conic/system_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "conic/errors.hpp"

namespace conic {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::optional<ConicKind> kind_from_string(const std::string& s) {
  if (s == "E") return ConicKind::E;
  if (s == "H") return ConicKind::H;
  if (s == "P") return ConicKind::P;
  return std::nullopt;
}

std::string kind_to_string(ConicKind k) {
  switch (k) {
    case ConicKind::E: return "E";
    case ConicKind::H: return "H";
    case ConicKind::P: return "P";
  }
  return "E";
}

VectorField field_from_json(const nlohmann::json& triple, const char* which) {
  if (!triple.is_array() || triple.size() != 3)
    throw Error(std::string("field '") + which + "' must be an array of 3 expression strings");
  VectorField v;
  for (int i = 0; i < 3; ++i) {
    if (!triple[i].is_string())
      throw Error(std::string("field '") + which + "' component is not a string");
    v.component(i) = parse_expr(triple[i].get<std::string>());
  }
  return v;
}

}  // namespace

SystemDocument parse_system_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  SystemDocument doc;
  doc.name = j.value("name", std::string("system"));
  if (!j.contains("f") || !j.contains("g")) throw Error("document requires 'f' and 'g'");
  doc.system.f = field_from_json(j.at("f"), "f");
  doc.system.g = field_from_json(j.at("g"), "g");
  if (doc.system.g.is_zero()) throw Error("control field g is identically zero");
  if (j.contains("base")) {
    const auto& b = j.at("base");
    if (!b.is_array() || b.size() != 3) throw Error("'base' must be [x, y, w]");
    doc.system.base = Point{b[0].get<double>(), b[1].get<double>(), b[2].get<double>()};
  }
  if (j.contains("kind")) {
    doc.kind = kind_from_string(j.at("kind").get<std::string>());
    if (!doc.kind) throw Error("'kind' must be one of \"E\", \"H\", \"P\"");
  }
  return doc;
}

SystemDocument load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_system_json(buf.str());
}

std::string system_to_json(const SystemDocument& doc) {
  nlohmann::ordered_json j;
  j["name"] = doc.name;
  j["f"] = {doc.system.f.x.str(), doc.system.f.y.str(), doc.system.f.w.str()};
  j["g"] = {doc.system.g.x.str(), doc.system.g.y.str(), doc.system.g.w.str()};
  if (doc.system.base) {
    j["base"] = {doc.system.base->x, doc.system.base->y, doc.system.base->w};
  }
  if (doc.kind) j["kind"] = kind_to_string(*doc.kind);
  return j.dump(2) + "\n";
}

void save_system(const SystemDocument& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path + "'");
  out << system_to_json(doc);
}

namespace {

VectorField unit_w_field() {
  return VectorField{Expr{}, Expr{}, Expr::constant(Rational(1))};
}

}  // namespace

ControlSystem sigma_e(Point base) {
  return {VectorField{Expr::trig(TrigKind::Cos, 1), Expr::trig(TrigKind::Sin, 1), Expr{}},
          unit_w_field(), base};
}

ControlSystem sigma_h(Point base) {
  const Rational half(1, 2);
  return {VectorField{Expr::exp_w(1) * half + Expr::exp_w(-1) * half,
                      Expr::exp_w(1) * half - Expr::exp_w(-1) * half, Expr{}},
          unit_w_field(), base};
}

ControlSystem sigma_p(Point base) { return sigma_p0k(1, base); }

ControlSystem sigma_p0k(int k, Point base) {
  if (k < 1) throw Error("sigma_p0k requires k >= 1");
  return {VectorField{Expr::variable(Var::W).pow(2 * k), Expr::variable(Var::W).pow(k), Expr{}},
          unit_w_field(), base};
}

namespace {

SystemDocument make_document(std::string name, ControlSystem sys, ConicKind kind) {
  SystemDocument doc;
  doc.name = std::move(name);
  doc.system = std::move(sys);
  doc.kind = kind;
  return doc;
}

}  // namespace

SystemDocument sigma_e_document(Point base) {
  return make_document("sigma_e", sigma_e(base), ConicKind::E);
}
SystemDocument sigma_h_document(Point base) {
  return make_document("sigma_h", sigma_h(base), ConicKind::H);
}
SystemDocument sigma_p_document(Point base) {
  return make_document("sigma_p", sigma_p(base), ConicKind::P);
}
SystemDocument sigma_p0k_document(int k, Point base) {
  return make_document("sigma_p0" + std::to_string(k), sigma_p0k(k, base), ConicKind::P);
}

FeedbackTransform random_scramble(std::uint64_t seed) {
  // All randomness flows through explicit modular draws on the raw engine so
  // the transform is identical across standard libraries for a fixed seed.
  std::mt19937_64 rng(seed);
  auto draw = [&rng](int lo, int hi) {  // inclusive bounds
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  // Unimodular (x, y) block from a few random shears, optionally swapped.
  Rational a(1), b(0), c(0), d(1);
  const int shears = draw(2, 4);
  for (int i = 0; i < shears; ++i) {
    const int k = draw(-2, 2);
    if (draw(0, 1) == 0) {
      // row shear: (a, b) += k (c, d)
      a += k * c;
      b += k * d;
    } else {
      c += k * a;
      d += k * b;
    }
  }
  if (draw(0, 1) == 1) {
    std::swap(a, c);
    std::swap(b, d);
  }
  if (draw(0, 1) == 1) {
    a = -a;
    b = -b;
  }

  FeedbackTransform t;
  t.phi.linear[0][0] = a;
  t.phi.linear[0][1] = b;
  t.phi.linear[1][0] = c;
  t.phi.linear[1][1] = d;
  // x, y rows may pick up w; the w row stays (0, 0, +-1) so that trig/exp
  // components remain inside the expression class.
  t.phi.linear[0][2] = Rational(draw(-2, 2));
  t.phi.linear[1][2] = Rational(draw(-2, 2));
  t.phi.linear[2][0] = Rational(0);
  t.phi.linear[2][1] = Rational(0);
  t.phi.linear[2][2] = Rational(draw(0, 1) == 0 ? 1 : -1);
  for (int i = 0; i < 3; ++i) t.phi.offset[i] = Rational(draw(-16, 16), 8);

  // alpha: random polynomial of degree <= 2.
  const Expr vars[3] = {Expr::variable(Var::X), Expr::variable(Var::Y), Expr::variable(Var::W)};
  Expr alpha = Expr::constant(Rational(draw(-2, 2)));
  const int terms = draw(1, 3);
  for (int i = 0; i < terms; ++i) {
    const Rational coeff(draw(-2, 2), draw(1, 2));
    Expr mono = Expr::constant(coeff);
    const int degree = draw(1, 2);
    for (int j = 0; j < degree; ++j) mono = mono * vars[draw(0, 2)];
    alpha += mono;
  }
  t.alpha = alpha;

  const Rational betas[4] = {Rational(1, 2), Rational(1), Rational(2), Rational(3)};
  t.beta = Expr::constant(betas[draw(0, 3)]);
  return t;
}

std::string trajectory_to_csv(const Trajectory& tr) {
  std::string out = "t,x,y,w,u\n";
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    out += format_double(tr.times[i]) + "," + format_double(tr.states[i].x) + "," +
           format_double(tr.states[i].y) + "," + format_double(tr.states[i].w) + "," +
           format_double(tr.controls[i]) + "\n";
  }
  return out;
}

std::string trajectory_to_json(const Trajectory& tr) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    rows.push_back({tr.times[i], tr.states[i].x, tr.states[i].y, tr.states[i].w, tr.controls[i]});
  }
  nlohmann::ordered_json j;
  j["columns"] = {"t", "x", "y", "w", "u"};
  j["rows"] = rows;
  return j.dump();
}

std::string chart_to_json(const Chart& ch) {
  nlohmann::ordered_json j;
  j["center"] = {ch.center.x, ch.center.y, ch.center.w};
  j["box"] = ch.box;
  j["step"] = ch.step;
  j["points_per_axis"] = ch.points_per_axis;
  j["min_abs_jacobian_det"] = ch.min_abs_jacobian_det;
  j["v1_residual"] = ch.v1_residual;
  j["v2_residual"] = ch.v2_residual;
  j["g_ratio_spread"] = ch.g_ratio_spread;
  j["v1"] = {ch.v1.x.str(), ch.v1.y.str(), ch.v1.w.str()};
  j["v2"] = {ch.v2.x.str(), ch.v2.y.str(), ch.v2.w.str()};
  nlohmann::ordered_json grid = nlohmann::ordered_json::array();
  for (const auto& s : ch.grid) {
    grid.push_back({{"coords", {s.a, s.b, s.c}}, {"state", {s.state.x, s.state.y, s.state.w}}});
  }
  j["grid"] = grid;
  return j.dump();
}

}  // namespace conic
