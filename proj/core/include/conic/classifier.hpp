#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "conic/lie_algebra.hpp"
#include "conic/numerics.hpp"
#include "conic/symmetry.hpp"
#include "conic/vector_field.hpp"

namespace conic {

struct ClassifyOptions {
  Ansatz ansatz{};
  int kmax = 8;
  double tol = 1e-9;
};

enum class VerdictTag { Elliptic, Hyperbolic, ParabolicNonEq, ParabolicEq, NotConic, Inconclusive };

/// One probe of the k search: was g independent of ad_g^k f at the point?
struct KTraceEntry {
  int k;
  bool independent;
};

/// Names of the fixed reason enumeration.
namespace reason {
inline constexpr const char* kAnsatzUnstable = "ansatz unstable";
inline constexpr const char* kBadDimension = "symmetry dimension != 3";
inline constexpr const char* kBadAlgebra = "algebra not in L_Q";
inline constexpr const char* kNotTransversal = "I(xi0) + G(xi0) does not span";
inline constexpr const char* kNoK = "k not found <= kmax";
}  // namespace reason

/// Classification outcome with the full evidence record.
struct Verdict {
  VerdictTag tag = VerdictTag::Inconclusive;
  int k = 0;                // valid for ParabolicEq, k >= 1
  std::string reason;       // non-empty for NotConic / Inconclusive

  // evidence
  int symmetry_dim = -1;
  int escalated_dim = -1;
  std::optional<AlgebraClass> algebra;
  std::optional<bool> transversal;
  std::optional<bool> equilibrium;
  std::vector<KTraceEntry> k_trace;
  Ansatz ansatz_used{};

  /// One-line human-readable summary.
  std::string summary() const;
  /// Deterministic JSON record (ordered keys, exact rationals as strings).
  std::string to_json() const;
  /// 0 for any definite verdict, 3 for Inconclusive.
  int exit_code() const { return tag == VerdictTag::Inconclusive ? 3 : 0; }
};

std::string to_string(VerdictTag tag);

/// Least k in [1, kmax] with g and ad_g^k f independent at p; nullopt when
/// none exists up to kmax. Throws DegenerateG when g(p) vanishes.
std::optional<int> smallest_k(const ControlSystem& s, const Point& p, int kmax, double tol);

/// The full decision procedure: symmetry solve with one ansatz escalation,
/// algebra classification, transversality, equilibrium split and k search.
Verdict classify(const ControlSystem& s, const Point& p, const ClassifyOptions& opt = {});

/// Back half of the pipeline, starting from an already-known symmetry basis.
/// Point data of f and g flows through evaluators so non-symbolic drifts can
/// reuse the procedure; `ksearch` appends its probes to the trace and returns
/// the smallest admissible k.
Verdict classify_from_basis(
    const SymmetryBasis& basis, const std::function<Vec3(const Point&)>& eval_f,
    const std::function<Vec3(const Point&)>& eval_g,
    const std::function<std::optional<int>(std::vector<KTraceEntry>&)>& ksearch, const Point& p,
    const ClassifyOptions& opt, Verdict verdict);

/// Classification of a callback drift with g fixed to the unit w-direction;
/// `claimed` is the externally supplied symmetry basis (verified numerically
/// by the caller through flow_pushforward_residual).
Verdict classify_numeric(const CallbackDrift& drift, const SymmetryBasis& claimed, const Point& p,
                         const ClassifyOptions& opt = {});

}  // namespace conic
