#pragma once

#include <optional>
#include <string>
#include <vector>

#include <wsym/form_field.hpp>
#include <wsym/generators.hpp>
#include <wsym/tower.hpp>

#include "wsym_cli/located_json.hpp"

namespace wsym::cli {

enum class SpecKind { Explicit, Product, Loop, Counterexample, Marsden, PerturbedDarboux };

std::string to_string(SpecKind k);

/// A tower or field document, either written out explicitly
///   {"levels": [{"label", "dim", "gram"?, "matrix"}], "bondings": [{"matrix"}]}
/// or produced by a generator
///   {"generator": "product" | "loop" | "counterexample" | "marsden" | "perturbed-darboux", "params": {...}}.
struct SpecDocument {
  SpecKind kind = SpecKind::Explicit;
  std::string path;
  json params;
  /// Explicit, product and loop documents.
  std::optional<FormSequence> sequence;
  std::optional<CounterexampleTower> counterexample;
  /// Marsden and perturbed-Darboux documents.
  std::optional<FormField> field;

  bool is_tower() const { return sequence.has_value() || counterexample.has_value(); }
  /// Per-level fields: constant forms on a ball of the given radius for
  /// sequences, the generated fields for the counterexample, the single
  /// field otherwise.
  std::vector<FormField> level_fields(double constant_radius) const;
};

/// Schema check without building anything; numeric content is limited to
/// skewness, gram definiteness and shapes.
std::vector<Diagnostic> check_spec(const LocatedJson& src);

/// Parses, checks and builds. Throws InputError.
SpecDocument load_spec(const std::string& path);

}  // namespace wsym::cli
