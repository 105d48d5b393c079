#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "wsym/symplectic.hpp"

namespace wsym {

struct TowerLimits {
  int max_depth = 32;
  int max_dim = 512;
};

/// Finite-depth projective sequence E_0 ← E_1 ← … ← E_N.
///
/// bonding(i) maps level i+1 onto level i. Composites δ_i^j = bonding(i) ∘ … ∘
/// bonding(j−1) are materialized at construction, with δ_i^i = Id, so the
/// cocycle identity δ_i^j ∘ δ_j^k = δ_i^k holds by construction.
class Tower {
 public:
  /// Throws ShapeError naming the offending index when shapes do not chain.
  Tower(std::vector<ModelSpace> levels, std::vector<Mat> bondings, TowerLimits limits = {});

  int depth() const { return static_cast<int>(data_->levels.size()) - 1; }
  int size() const { return static_cast<int>(data_->levels.size()); }

  const ModelSpace& level(int i) const;
  const LinearMap& bonding(int i) const;
  /// δ_i^j : E_j → E_i for i ≤ j.
  const LinearMap& composite(int i, int j) const;

 private:
  struct Data {
    std::vector<ModelSpace> levels;
    std::vector<LinearMap> bondings;
    // composites[j][i] = δ_i^j
    std::vector<std::vector<LinearMap>> composites;
  };
  std::shared_ptr<const Data> data_;
};

Tower build_tower(std::vector<ModelSpace> levels, std::vector<Mat> consecutive_bondings,
                  TowerLimits limits = {});

/// An element of the truncated projective limit: x_i = bonding(i)·x_{i+1}.
class Thread {
 public:
  /// Throws PreconditionError if the components are not consistent to 1e-10 relative.
  Thread(Tower tower, std::vector<Vec> components);
  /// The thread determined by its top component.
  static Thread from_top(const Tower& tower, const Vec& top);

  const Tower& tower() const { return tower_; }
  const Vec& component(int i) const { return components_.at(static_cast<std::size_t>(i)); }
  const std::vector<Vec>& components() const { return components_; }

  /// p_n(x) = max_{0≤i≤n} ‖x_i‖_i.
  double seminorm(int n) const;

 private:
  Tower tower_;
  std::vector<Vec> components_;
};

class FormSequence {
 public:
  /// Throws ShapeError if the list length or any form dimension disagrees with the tower.
  FormSequence(Tower tower, std::vector<SkewForm> forms);

  const Tower& tower() const { return tower_; }
  const SkewForm& form(int i) const { return forms_.at(static_cast<std::size_t>(i)); }
  const std::vector<SkewForm>& forms() const { return forms_; }
  int size() const { return static_cast<int>(forms_.size()); }

 private:
  Tower tower_;
  std::vector<SkewForm> forms_;
};

struct TowerClassification {
  bool reduced = false;
  bool surjective = false;
  bool split_kernels = true;
};

TowerClassification classify_tower(const Tower& t, double rank_tol = kRankTol);

struct CompatibilityReport {
  bool ok = false;
  /// levels[i] checks bonding(i) against (ω_{i+1}, ω_i).
  std::vector<WeakIsometryReport> levels;
  /// Composites (i, j) that fail even though every consecutive bonding passed.
  std::vector<std::pair<int, int>> failing_composites;
  int first_failing_level = -1;
};

CompatibilityReport check_compatible_sequence(const FormSequence& fs, double tol,
                                              bool check_composites = true,
                                              double rank_tol = kRankTol);

struct LimitFormValue {
  std::vector<double> values;
  bool stabilized = false;
  double final = 0.0;
};

struct StabilizationOptions {
  int stab_index = 0;
  double stab_tol = 1e-8;
  double compat_tol = 1e-10;
};

/// Per-level values ω_i(u_i, v_i). Throws PreconditionError if fs is not compatible.
LimitFormValue limit_form_eval(const FormSequence& fs, const Thread& u, const Thread& v,
                               const StabilizationOptions& opts = {});

struct BlockDecomposition {
  int level = 0;
  int base = 0;
  /// [E_i^j, E_{i+1}^j, …, E_{j−1}^j, ker ℓ_{j−1}^j]; a single block when j = i.
  std::vector<Subspace> blocks;
  /// Condition number of the matrix stacking all block bases.
  double reconstruction_condition = 0.0;
  double direct_sum_defect = 0.0;
};

/// Splits E_j along the symplectic complements F_l = (ker ℓ_{l−1}^l)^⊥.
/// Throws PreconditionError naming the level when the sequence is not compatible
/// or when ker ∩ ker^⊥ ≠ {0}.
BlockDecomposition block_decompose(const FormSequence& fs, int base_i, int level_j,
                                   double tol = 1e-10, double rank_tol = kRankTol);

/// Largest defects found when checking the kernel, injectivity and image
/// properties of a decomposition against direct kernel computations.
struct DecompositionAudit {
  double kernel_defect = 0.0;
  bool restriction_injective = true;
  bool restriction_onto = true;
  double image_defect = 0.0;
  bool ok(double tol) const {
    return kernel_defect <= tol && restriction_injective && restriction_onto && image_defect <= tol;
  }
};

DecompositionAudit audit_block_decomposition(const FormSequence& fs, const BlockDecomposition& bd,
                                             double tol = 1e-10, double rank_tol = kRankTol);

struct SubmersionReport {
  bool ok = false;
  bool vertical_nondegenerate = false;
  bool split_ok = false;
};

/// Throws NotSubmersionError if the map is not surjective.
SubmersionReport check_symplectic_submersion(const SkewForm& form_top, const LinearMap& map,
                                             double rank_tol = kRankTol);

/// ω_i(u, v) = ω(ℓ′⁻¹u, ℓ′⁻¹v) with ℓ′ the restriction of ℓ to (ker ℓ)^⊥.
SkewForm induce_level_form(const SkewForm& form_top, const LinearMap& map, double rank_tol = kRankTol);

}  // namespace wsym
