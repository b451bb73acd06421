#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "conic/numerics.hpp"
#include "conic/vector_field.hpp"

namespace conic {

/// On-disk system description:
///   { "name": ..., "f": ["expr","expr","expr"], "g": [...],
///     "base": [x, y, w], "kind": "E"|"H"|"P" (optional) }
/// Expression strings use the parse_expr grammar.
struct SystemDocument {
  std::string name;
  ControlSystem system;
  std::optional<ConicKind> kind;
};

SystemDocument parse_system_json(const std::string& json_text);
SystemDocument load_system(const std::string& path);
std::string system_to_json(const SystemDocument& doc);
void save_system(const SystemDocument& doc, const std::string& path);

// Null forms, each with the given base point.
ControlSystem sigma_e(Point base = {0, 0, 0});
ControlSystem sigma_h(Point base = {0, 0, 0});
ControlSystem sigma_p(Point base = {0, 0, 0});
/// Drift (w^{2k}, w^k, 0); k >= 1.
ControlSystem sigma_p0k(int k, Point base = {0, 0, 0});

SystemDocument sigma_e_document(Point base = {0, 0, 0});
SystemDocument sigma_h_document(Point base = {0, 0, 0});
SystemDocument sigma_p_document(Point base = {0, 0, 0});
SystemDocument sigma_p0k_document(int k, Point base = {0, 0, 0});

/// Seeded random feedback transformation:
///   phi: integer matrix with unimodular (x, y) block, w row (0, 0, +-1) so
///        trig and exp components stay representable, translation in
///        eighths within [-2, 2];
///   alpha: random polynomial of degree <= 2 with small rational coefficients;
///   beta: one of 1/2, 1, 2, 3.
FeedbackTransform random_scramble(std::uint64_t seed);

/// Trajectory serialization.
std::string trajectory_to_csv(const Trajectory& tr);
std::string trajectory_to_json(const Trajectory& tr);

/// Chart grid report (center, box, diagnostics, grid states).
std::string chart_to_json(const Chart& ch);

}  // namespace conic
