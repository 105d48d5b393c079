#pragma once

#include <cstdint>
#include <vector>

#include "wsym/form_field.hpp"
#include "wsym/tower.hpp"

namespace wsym {

/// Truncated Marsden-type metric field on ℝ^d × ℝ^d.
struct MarsdenSpec {
  int d = 2;
  Vec a;
  int shift_k = 1;
  /// Spectrum of the truncated compact operator S, non-increasing.
  std::vector<double> s_eigs;
};

/// (1, 1/2, …, 1/d).
std::vector<double> harmonic_spectrum(int d);
/// d log-spaced values from 1 down to floor; {1} when d = 1.
std::vector<double> compact_spectrum(int d, double floor = 1e-9);

/// Spec with a = e₁, shift 1 and the harmonic spectrum.
MarsdenSpec default_marsden_spec(int d);

/// Throws PreconditionError naming the violated condition.
void validate_marsden_spec(const MarsdenSpec& spec);

/// ω on coordinates (x, e) from the metric g_x(e, f) = ⟨A_x e, f⟩ with
/// A_x = ‖x − a/k‖²·I + S:
///   Ω(x, e) = [[e cᵀ − c eᵀ, A_x/2], [−A_x/2, 0]],  c = x − a/k.
/// The field lives on the ball of the given radius around 0 and carries the
/// analytic derivative plus a probe direction toward (a/k, 0).
FormField make_marsden_field(const MarsdenSpec& spec, double radius = 2.0);

/// Ω with factor k at x = (x_1..x_n) and e = (e_1..e_n); layout (x-block, e-block).
Mat counterexample_matrix(const Vec& a, const std::vector<double>& s_eigs, int factors, const Vec& point);

/// Partial products of the factor forms with block-diagonal sum forms and
/// bondings that drop the last factor. Throws DegenerateFormError naming a
/// degenerate factor.
FormSequence make_product_tower(const std::vector<SkewForm>& factor_forms);

/// [[0, −S], [S, 0]] on ℝ^{2l}.
SkewForm scaled_darboux_form(const std::vector<double>& s_eigs);

struct CounterexampleTower {
  Tower tower;
  /// fields[i] is the level-i form field (i+1 factors).
  std::vector<FormField> fields;
  Vec a;
  std::vector<double> s_eigs;
  int d = 0;
};

/// Levels n = 1..levels of the Marsden counterexample; level index i holds
/// n = i+1 factors, dimension 2nd.
CounterexampleTower make_counterexample_tower(int d, int levels, const Vec& a, const std::vector<double>& s_eigs,
                                              double radius = 2.0);

/// The constant forms of the counterexample tower at the thread through a top-level point.
FormSequence counterexample_forms_at(const CounterexampleTower& ct, const Vec& top_point);

/// Fourier truncation of L²_k(S¹, ℝ^{2m}) for each order k; level i has
/// order orders[i], bondings are identity on coefficients.
FormSequence make_loop_tower(int m, int modes, const std::vector<int>& orders);

/// Darboux form on ℝ^{2l} plus eps·dβ for a random quadratic 1-form β
/// vanishing to second order at 0, so the base point 0 sees exactly Darboux.
FormField make_perturbed_darboux_field(int l_dim, double eps, std::uint64_t seed, double radius = 1.0);

}  // namespace wsym
