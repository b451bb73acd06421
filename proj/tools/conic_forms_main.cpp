// conic-forms: batch front end for the conic null-form toolkit.
//
// Subcommands: bracket, symmetries, classify, simulate, chart, scramble.
// Exit codes: 0 success / definite verdict, 2 input error, 3 inconclusive.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "conic/classifier.hpp"
#include "conic/errors.hpp"
#include "conic/lie_algebra.hpp"
#include "conic/numerics.hpp"
#include "conic/symmetry.hpp"
#include "conic/system_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitInconclusive = 3;

double default_tolerance() {
  if (const char* env = std::getenv("CONIC_FORMS_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
    throw conic::Error("CONIC_FORMS_TOL must be a positive number");
  }
  return 1e-9;
}

conic::Ansatz parse_ansatz(const std::string& text) {
  conic::Ansatz a;
  if (std::sscanf(text.c_str(), "%d,%d,%d", &a.degree, &a.trig_max, &a.exp_range) != 3 ||
      a.degree < 0 || a.trig_max < 0 || a.exp_range < 0)
    throw conic::Error("--ansatz expects D,T,E with non-negative integers");
  return a;
}

// "1" (constant) or "u1:t1,u2:t2,..." value:duration pairs.
conic::ControlSchedule parse_schedule(const std::string& text) {
  conic::ControlSchedule sched;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t colon = item.find(':');
    char* end = nullptr;
    if (colon == std::string::npos) {
      const double u = std::strtod(item.c_str(), &end);
      if (end == item.c_str() || *end != '\0') throw conic::Error("bad control schedule '" + text + "'");
      sched.segments.emplace_back(1e300, u);
    } else {
      const std::string us = item.substr(0, colon), ds = item.substr(colon + 1);
      const double u = std::strtod(us.c_str(), &end);
      if (end == us.c_str() || *end != '\0') throw conic::Error("bad control value '" + us + "'");
      const double d = std::strtod(ds.c_str(), &end);
      if (end == ds.c_str() || *end != '\0' || d <= 0)
        throw conic::Error("bad segment duration '" + ds + "'");
      sched.segments.emplace_back(d, u);
    }
    pos = comma + 1;
  }
  if (sched.segments.empty()) throw conic::Error("empty control schedule");
  return sched;
}

conic::Point require_base(const conic::SystemDocument& doc) {
  if (!doc.system.base) throw conic::Error("document has no base point");
  return *doc.system.base;
}

void write_output(const std::optional<std::string>& path, const std::string& content) {
  if (!path || *path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(*path);
  if (!out) throw conic::Error("cannot write '" + *path + "'");
  out << content;
}

std::string kind_name(conic::ConicKind k) {
  switch (k) {
    case conic::ConicKind::E: return "S_E";
    case conic::ConicKind::H: return "S_H";
    case conic::ConicKind::P: return "S_P";
  }
  return "S_E";
}

int cmd_bracket(const std::string& file, const std::string& u_name, const std::string& v_name) {
  const conic::SystemDocument doc = conic::load_system(file);
  auto field = [&](const std::string& name) -> const conic::VectorField& {
    if (name == "f") return doc.system.f;
    if (name == "g") return doc.system.g;
    throw conic::Error("unknown field '" + name + "' (expected f or g)");
  };
  const conic::VectorField b = conic::lie_bracket(field(u_name), field(v_name));
  std::cout << b.x.str() << ", " << b.y.str() << ", " << b.w.str() << "\n";
  return kExitOk;
}

int cmd_symmetries(const std::string& file, const conic::Ansatz& ansatz) {
  const conic::SystemDocument doc = conic::load_system(file);
  const conic::SymmetryBasis basis = conic::solve_symmetries(doc.system, ansatz);
  std::cout << "dim = " << basis.dim() << " (ansatz degree=" << ansatz.degree
            << ", trig_max=" << ansatz.trig_max << ", exp_range=" << ansatz.exp_range << ")\n";
  for (int i = 0; i < basis.dim(); ++i) {
    const conic::VectorField& v = basis.fields[i];
    std::cout << "v" << i + 1 << ": " << v.x.str() << ", " << v.y.str() << ", " << v.w.str()
              << "\n";
  }
  if (basis.dim() == 3 && conic::closed_under_bracket(basis)) {
    const conic::StructureConstants sc = conic::structure_constants(basis);
    for (int i = 0; i < 3; ++i) {
      for (int j = i + 1; j < 3; ++j) {
        std::string rhs;
        for (int k = 0; k < 3; ++k) {
          if (sc.c[i][j][k] == 0) continue;
          if (!rhs.empty()) rhs += " + ";
          rhs += conic::format_rational(sc.c[i][j][k]) + "*v" + std::to_string(k + 1);
        }
        if (rhs.empty()) rhs = "0";
        std::cout << "[v" << i + 1 << ",v" << j + 1 << "] = " << rhs << "\n";
      }
    }
  }
  return kExitOk;
}

int cmd_classify(const std::string& file, const conic::ClassifyOptions& opt, bool json) {
  const conic::SystemDocument doc = conic::load_system(file);
  const conic::Point base = require_base(doc);
  const conic::Verdict verdict = conic::classify(doc.system, base, opt);
  std::cout << verdict.summary() << "\n";
  if (json) std::cout << verdict.to_json() << "\n";
  return verdict.exit_code();
}

int cmd_simulate(const std::string& file, const std::string& schedule_text, double horizon,
                 double step, const std::optional<std::string>& out, bool as_json) {
  const conic::SystemDocument doc = conic::load_system(file);
  const conic::Point base = require_base(doc);
  const conic::ControlSchedule schedule = parse_schedule(schedule_text);
  const conic::Trajectory tr = conic::simulate(doc.system, schedule, base, horizon, step);
  write_output(out, as_json ? conic::trajectory_to_json(tr) + "\n" : conic::trajectory_to_csv(tr));
  if (doc.kind) {
    const double residual = conic::constraint_residual(tr, *doc.kind);
    std::ostream& report = (!out || *out == "-") ? std::cerr : std::cout;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6e", residual);
    report << "constraint residual |" << kind_name(*doc.kind) << "| = " << buf << "\n";
  }
  return kExitOk;
}

int cmd_chart(const std::string& file, const conic::Ansatz& ansatz, double box, double step,
              const std::optional<std::string>& out) {
  const conic::SystemDocument doc = conic::load_system(file);
  const conic::Point base = require_base(doc);
  const conic::SymmetryBasis basis = conic::solve_symmetries(doc.system, ansatz);
  if (basis.dim() != 3)
    throw conic::Error("chart requires a 3-dimensional symmetry algebra, got dim " +
                       std::to_string(basis.dim()));
  const conic::Chart chart = conic::build_chart(doc.system, basis, base, box, step);
  nlohmann::ordered_json j = nlohmann::ordered_json::parse(conic::chart_to_json(chart));
  if (doc.kind) {
    const conic::InvariantResult inv = conic::chart_invariant(doc.system, chart, *doc.kind);
    j["invariant"] = {{"kind", kind_name(*doc.kind)}, {"value", inv.value}, {"spread", inv.spread}};
  }
  write_output(out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_scramble(const std::string& file, std::uint64_t seed,
                 const std::optional<std::string>& out) {
  conic::SystemDocument doc = conic::load_system(file);
  const conic::FeedbackTransform t = conic::random_scramble(seed);
  conic::SystemDocument scrambled;
  scrambled.name = doc.name + "_scrambled_" + std::to_string(seed);
  scrambled.system = conic::apply_feedback(doc.system, t);
  scrambled.kind = doc.kind;
  write_output(out, conic::system_to_json(scrambled));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conic-forms: symmetry analysis, classification and simulation of "
               "3D control-affine systems"};
  app.require_subcommand(1);

  std::string file, u_name = "f", v_name = "g", schedule = "0", ansatz_text;
  std::optional<std::string> out;
  double horizon = 1.0, step = 1e-3, box = 0.5;
  std::uint64_t seed = 0;
  int kmax = 8;
  bool json = false;

  auto* bracket = app.add_subcommand("bracket", "Lie bracket of two named fields");
  bracket->add_option("file", file, "system JSON document")->required();
  bracket->add_option("--u", u_name, "first field name (f or g)");
  bracket->add_option("--v", v_name, "second field name (f or g)");

  auto* symmetries = app.add_subcommand("symmetries", "solve the infinitesimal symmetry conditions");
  symmetries->add_option("file", file)->required();
  symmetries->add_option("--ansatz", ansatz_text, "search space as D,T,E");

  auto* classify = app.add_subcommand("classify", "decide conic null-form equivalence");
  classify->add_option("file", file)->required();
  classify->add_option("--ansatz", ansatz_text, "search space as D,T,E");
  classify->add_option("--kmax", kmax, "bound for the k search");
  classify->add_flag("--json", json, "also print the JSON evidence record");

  auto* simulate = app.add_subcommand("simulate", "integrate a trajectory, CSV output");
  simulate->add_option("file", file)->required();
  simulate->add_option("--u", schedule, "control: constant or u1:t1,u2:t2,...");
  simulate->add_option("--T", horizon, "time horizon");
  simulate->add_option("--step", step, "integration step");
  simulate->add_option("--out", out, "output file (default stdout)");
  simulate->add_flag("--json", json, "JSON rows instead of CSV");

  auto* chart = app.add_subcommand("chart", "numeric normalizing chart report");
  chart->add_option("file", file)->required();
  chart->add_option("--ansatz", ansatz_text, "search space as D,T,E");
  chart->add_option("--box", box, "chart half-extent");
  chart->add_option("--step", step, "integration step");
  chart->add_option("--out", out, "output file (default stdout)");

  auto* scramble = app.add_subcommand("scramble", "apply a seeded random feedback transformation");
  scramble->add_option("file", file)->required();
  scramble->add_option("--seed", seed, "random seed")->required();
  scramble->add_option("--out", out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitInputError;
  }

  try {
    conic::ClassifyOptions opt;
    opt.tol = default_tolerance();
    opt.kmax = kmax;
    if (!ansatz_text.empty()) opt.ansatz = parse_ansatz(ansatz_text);

    if (bracket->parsed()) return cmd_bracket(file, u_name, v_name);
    if (symmetries->parsed()) return cmd_symmetries(file, opt.ansatz);
    if (classify->parsed()) return cmd_classify(file, opt, json);
    if (simulate->parsed()) return cmd_simulate(file, schedule, horizon, step, out, json);
    if (chart->parsed()) return cmd_chart(file, opt.ansatz, box, step, out);
    if (scramble->parsed()) return cmd_scramble(file, seed, out);
  } catch (const conic::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
