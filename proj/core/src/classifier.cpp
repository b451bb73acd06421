#include "conic/classifier.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "conic/errors.hpp"

namespace conic {

std::string to_string(VerdictTag tag) {
  switch (tag) {
    case VerdictTag::Elliptic: return "Elliptic";
    case VerdictTag::Hyperbolic: return "Hyperbolic";
    case VerdictTag::ParabolicNonEq: return "ParabolicNonEq";
    case VerdictTag::ParabolicEq: return "ParabolicEq";
    case VerdictTag::NotConic: return "NotConic";
    case VerdictTag::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

namespace {

std::string algebra_tag_name(AlgebraTag tag) {
  switch (tag) {
    case AlgebraTag::EllipticE2: return "EllipticE2";
    case AlgebraTag::HyperbolicP11: return "HyperbolicP11";
    case AlgebraTag::ParabolicL322: return "ParabolicL322";
    case AlgebraTag::Other: return "Other";
  }
  return "Other";
}

}  // namespace

std::string Verdict::summary() const {
  switch (tag) {
    case VerdictTag::Elliptic: return "Elliptic (feedback equivalent to Sigma_E)";
    case VerdictTag::Hyperbolic: return "Hyperbolic (feedback equivalent to Sigma_H)";
    case VerdictTag::ParabolicNonEq:
      return "ParabolicNonEq (feedback equivalent to Sigma_P around w0 != 0)";
    case VerdictTag::ParabolicEq:
      return "ParabolicEq k=" + std::to_string(k) + " (feedback equivalent to Sigma_P^{0," +
             std::to_string(k) + "})";
    case VerdictTag::NotConic: return "NotConic: " + reason;
    case VerdictTag::Inconclusive: return "Inconclusive: " + reason;
  }
  return "Inconclusive: " + reason;
}

std::string Verdict::to_json() const {
  nlohmann::ordered_json j;
  j["tag"] = to_string(tag);
  if (tag == VerdictTag::ParabolicEq) {
    j["k"] = k;
  } else {
    j["k"] = nullptr;
  }
  j["reason"] = reason;
  j["symmetry_dim"] = symmetry_dim;
  j["escalated_dim"] = escalated_dim;
  if (algebra) {
    nlohmann::ordered_json a;
    a["tag"] = algebra_tag_name(algebra->tag);
    a["label"] = algebra->display();
    a["trace"] = format_rational(algebra->trace);
    a["det"] = format_rational(algebra->det);
    a["discriminant"] = format_rational(algebra->discriminant);
    j["algebra"] = a;
  } else {
    j["algebra"] = nullptr;
  }
  if (transversal) {
    j["transversal"] = *transversal;
  } else {
    j["transversal"] = nullptr;
  }
  if (equilibrium) {
    j["equilibrium"] = *equilibrium;
  } else {
    j["equilibrium"] = nullptr;
  }
  nlohmann::ordered_json trace_json = nlohmann::ordered_json::array();
  for (const auto& t : k_trace) {
    trace_json.push_back(nlohmann::ordered_json{{"k", t.k}, {"independent", t.independent}});
  }
  j["k_trace"] = trace_json;
  j["ansatz"] = nlohmann::ordered_json{
      {"degree", ansatz_used.degree}, {"trig_max", ansatz_used.trig_max},
      {"exp_range", ansatz_used.exp_range}};
  return j.dump();
}

namespace {

std::optional<int> smallest_k_impl(const ControlSystem& s, const Point& p, int kmax, double tol,
                                   std::vector<KTraceEntry>* trace) {
  const Vec3 gp = evaluate(s.g, p);
  if (norm(gp) <= tol) throw DegenerateG("control field vanishes at the test point");
  VectorField ad = s.f;
  for (int k = 1; k <= kmax; ++k) {
    ad = lie_bracket(s.g, ad);
    const bool indep = independent_at(s.g, ad, p, tol);
    if (trace) trace->push_back({k, indep});
    if (indep) return k;
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> smallest_k(const ControlSystem& s, const Point& p, int kmax, double tol) {
  return smallest_k_impl(s, p, kmax, tol, nullptr);
}

Verdict classify_from_basis(
    const SymmetryBasis& basis, const std::function<Vec3(const Point&)>& eval_f,
    const std::function<Vec3(const Point&)>& eval_g,
    const std::function<std::optional<int>(std::vector<KTraceEntry>&)>& ksearch, const Point& p,
    const ClassifyOptions& opt, Verdict verdict) {
  if (!closed_under_bracket(basis)) {
    verdict.tag = VerdictTag::NotConic;
    verdict.reason = reason::kBadAlgebra;
    return verdict;
  }
  const StructureConstants sc = structure_constants(basis);
  const AlgebraClass algebra = classify_algebra(sc);
  verdict.algebra = algebra;
  if (algebra.tag == AlgebraTag::Other) {
    verdict.tag = VerdictTag::NotConic;
    verdict.reason = reason::kBadAlgebra;
    return verdict;
  }

  // Transversality I(p) + G(p) = R^3, tested on the solved ideal basis.
  const auto ideal = abelian_ideal_2d(sc);
  VectorField i1, i2;
  for (int k = 0; k < 3; ++k) {
    i1 = i1 + (*ideal)[0][k] * basis.fields[k];
    i2 = i2 + (*ideal)[1][k] * basis.fields[k];
  }
  const Vec3 a = evaluate(i1, p);
  const Vec3 b = evaluate(i2, p);
  const Vec3 g = eval_g(p);
  const bool transversal =
      std::fabs(det3(a, b, g)) > opt.tol * (1.0 + norm(a) * norm(b) * norm(g));
  verdict.transversal = transversal;
  if (!transversal) {
    verdict.tag = VerdictTag::NotConic;
    verdict.reason = reason::kNotTransversal;
    return verdict;
  }

  switch (algebra.tag) {
    case AlgebraTag::EllipticE2:
      verdict.tag = VerdictTag::Elliptic;
      return verdict;
    case AlgebraTag::HyperbolicP11:
      verdict.tag = VerdictTag::Hyperbolic;
      return verdict;
    default: break;
  }

  // Parabolic: split on the equilibrium condition f(p) in G(p).
  const Vec3 f = eval_f(p);
  if (norm(g) <= opt.tol) throw DegenerateG("control field vanishes at the test point");
  const bool equilibrium = norm(cross(f, g)) <= opt.tol * (1.0 + norm(f) * norm(g));
  verdict.equilibrium = equilibrium;
  if (!equilibrium) {
    verdict.tag = VerdictTag::ParabolicNonEq;
    return verdict;
  }
  const std::optional<int> k = ksearch(verdict.k_trace);
  if (!k) {
    verdict.tag = VerdictTag::Inconclusive;
    verdict.reason = reason::kNoK;
    return verdict;
  }
  verdict.tag = VerdictTag::ParabolicEq;
  verdict.k = *k;
  return verdict;
}

Verdict classify(const ControlSystem& s, const Point& p, const ClassifyOptions& opt) {
  if (norm(evaluate(s.g, p)) <= opt.tol)
    throw DegenerateG("control field vanishes at the classification point");

  Verdict verdict;
  verdict.ansatz_used = opt.ansatz;

  const SymmetryBasis basis = solve_symmetries(s, opt.ansatz);
  verdict.symmetry_dim = basis.dim();

  // A dimension above 3 can only grow with a larger ansatz, so the verdict is
  // already definite and the escalation is skipped.
  if (basis.dim() > 3) {
    verdict.tag = VerdictTag::NotConic;
    verdict.reason = reason::kBadDimension;
    return verdict;
  }

  const SymmetryBasis escalated = solve_symmetries(s, opt.ansatz.escalated());
  verdict.escalated_dim = escalated.dim();
  if (escalated.dim() != basis.dim()) {
    verdict.tag = VerdictTag::Inconclusive;
    verdict.reason = reason::kAnsatzUnstable;
    return verdict;
  }
  if (basis.dim() != 3) {
    verdict.tag = VerdictTag::NotConic;
    verdict.reason = reason::kBadDimension;
    return verdict;
  }

  auto eval_f = [&s](const Point& q) { return evaluate(s.f, q); };
  auto eval_g = [&s](const Point& q) { return evaluate(s.g, q); };
  auto ksearch = [&s, &p, &opt](std::vector<KTraceEntry>& trace) {
    return smallest_k_impl(s, p, opt.kmax, opt.tol, &trace);
  };
  return classify_from_basis(basis, eval_f, eval_g, ksearch, p, opt, std::move(verdict));
}

Verdict classify_numeric(const CallbackDrift& drift, const SymmetryBasis& claimed, const Point& p,
                         const ClassifyOptions& opt) {
  Verdict verdict;
  verdict.ansatz_used = opt.ansatz;
  verdict.symmetry_dim = claimed.dim();
  verdict.escalated_dim = -1;  // externally supplied basis, no ansatz solve

  if (claimed.dim() != 3) {
    verdict.tag = VerdictTag::NotConic;
    verdict.reason = reason::kBadDimension;
    return verdict;
  }

  auto eval_g = [](const Point&) { return Vec3{0.0, 0.0, 1.0}; };
  auto ksearch = [&drift, &p, &opt](std::vector<KTraceEntry>& trace) -> std::optional<int> {
    // With g the unit w-direction, ad_g^k f is the k-th w-derivative of f.
    for (int k = 1; k <= opt.kmax; ++k) {
      const Vec3 d = drift.w_derivative(k, p);
      const bool indep = std::max(std::fabs(d[0]), std::fabs(d[1])) >
                         opt.tol * (1.0 + norm(d));
      trace.push_back({k, indep});
      if (indep) return k;
    }
    return std::nullopt;
  };
  return classify_from_basis(claimed, drift.value, eval_g, ksearch, p, opt, std::move(verdict));
}

}  // namespace conic
