#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wsym/generators.hpp"
#include "wsym/moser.hpp"

namespace wsym {

struct ShrinkRow {
  int n = 0;
  int dim = 0;
  double r_validity = 0.0;
  double bound = 0.0;
  double cond_at_base = 0.0;
  /// Chart radius of level n seen at level 1.
  double r_projected = 0.0;
};

struct ShrinkOptions {
  int d = 4;
  int n_max = 10;
  /// Defaults to e₁.
  Vec a;
  /// Defaults to compact_spectrum(d).
  std::vector<double> s_eigs;
  double region_radius = 2.0;
  MoserSettings settings;
  ValidityOptions validity;
  /// Also integrate the Moser flow on the validity ball of each level.
  bool run_flow = false;
  FlowOptions flow;
  /// Constant K of the uniform bound check.
  double bound_k = 4.0;
  /// Radius below which assembled charts count as degenerate.
  double min_radius = 0.05;
  double fit_tol = 1e-9;
};

struct ShrinkResult {
  std::vector<ShrinkRow> rows;
  double exponent = 0.0;
  bool strictly_decreasing = false;
  bool within_bound = false;
  /// "(PLDC) fails" when the exponent ≤ −0.5 and the radii strictly decrease.
  bool pldc_fails = false;
  ProjectiveAssembly assembly;
  UniformBoundReport uniform;
  std::vector<MoserReport> reports;
  std::string diagnosis;
};

ShrinkResult shrink_experiment(const ShrinkOptions& opts);

struct ProductControlOptions {
  /// Radius of the ball each level's constant field lives on.
  double radius = 1.0;
  MoserSettings settings;
  ValidityOptions validity;
  FlowOptions flow;
  double min_radius = 0.05;
};

/// The same pipeline on a tower of constant forms (typically a product
/// tower), where every level has a full-ball chart.
ShrinkResult product_control_experiment(const FormSequence& forms, const ProductControlOptions& opts = {});

}  // namespace wsym
