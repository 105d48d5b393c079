#include <gtest/gtest.h>

#include <wsym/errors.hpp>
#include <wsym/generators.hpp>
#include <wsym/tower.hpp>

#include "test_helpers.hpp"

using namespace wsym;

namespace {

Mat drop_last(int keep, int n) {
  Mat b = Mat::Zero(keep, n);
  b.leftCols(keep) = Mat::Identity(keep, keep);
  return b;
}

FormSequence darboux_product(int factors) {
  return make_product_tower(std::vector<SkewForm>(static_cast<std::size_t>(factors), darboux_constant_form(1)));
}

Thread factor_thread(const Tower& t, int factor, const Vec& v2) {
  Vec top = Vec::Zero(t.level(t.depth()).dim());
  top.segment(2 * factor, 2) = v2;
  return Thread::from_top(t, top);
}

}  // namespace

TEST(Tower, BuildExamples) {
  const Tower single = build_tower({ModelSpace(2)}, {});
  EXPECT_EQ(single.depth(), 0);
  EXPECT_EQ(single.composite(0, 0).matrix(), Mat::Identity(2, 2));

  const Tower two = build_tower({ModelSpace(2), ModelSpace(4)}, {drop_last(2, 4)});
  EXPECT_EQ(two.depth(), 1);

  const Mat b0 = drop_last(2, 4);
  const Mat b1 = drop_last(4, 6);
  const Tower three = build_tower({ModelSpace(2), ModelSpace(4), ModelSpace(6)}, {b0, b1});
  EXPECT_EQ(three.composite(0, 2).matrix(), b0 * b1);
  for (int i = 0; i <= 2; ++i)
    for (int j = i; j <= 2; ++j)
      for (int k = j; k <= 2; ++k)
        EXPECT_EQ(compose(three.composite(i, j), three.composite(j, k)).matrix(), three.composite(i, k).matrix());
}

TEST(Tower, ShapeErrorsNameTheIndex) {
  try {
    build_tower({ModelSpace(2), ModelSpace(4), ModelSpace(6)}, {drop_last(2, 4), drop_last(3, 6)});
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos) << e.what();
  }
  EXPECT_THROW(build_tower({ModelSpace(2), ModelSpace(4)}, {}), ShapeError);
}

TEST(Tower, Limits) {
  TowerLimits lim;
  lim.max_dim = 3;
  EXPECT_THROW(build_tower({ModelSpace(4)}, {}, lim), ShapeError);
}

TEST(Thread, ConsistencyAndSeminorm) {
  const FormSequence fs = darboux_product(3);
  Vec top(6);
  top << 1, 2, 3, 4, 5, 6;
  const Thread th = Thread::from_top(fs.tower(), top);
  EXPECT_EQ(th.component(0), top.head(2));
  EXPECT_EQ(fs.tower().composite(1, 2)(top), th.component(1));
  EXPECT_DOUBLE_EQ(th.seminorm(0), std::sqrt(5.0));
  EXPECT_DOUBLE_EQ(th.seminorm(2), top.norm());
  std::vector<Vec> bad = th.components();
  bad[0](0) += 1e-6;
  EXPECT_THROW(Thread(fs.tower(), bad), PreconditionError);
}

TEST(Classify, Examples) {
  auto c = classify_tower(darboux_product(3).tower());
  EXPECT_TRUE(c.reduced && c.surjective && c.split_kernels);
  Mat b = drop_last(2, 4);
  b.row(1).setZero();
  c = classify_tower(build_tower({ModelSpace(2), ModelSpace(4)}, {b}));
  EXPECT_FALSE(c.reduced);
  c = classify_tower(build_tower({ModelSpace(2)}, {}));
  EXPECT_TRUE(c.reduced && c.surjective && c.split_kernels);
}

TEST(Compatibility, ProductPassesAndScaledFactorFails) {
  const FormSequence fs = darboux_product(4);
  const auto r = check_compatible_sequence(fs, 1e-10);
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(r.failing_composites.empty());

  std::vector<SkewForm> forms = fs.forms();
  Mat m = forms[1].matrix();
  m.topLeftCorner(2, 2) *= 2.0;
  forms[1] = SkewForm(forms[1].space(), m);
  const auto bad = check_compatible_sequence(FormSequence(fs.tower(), forms), 1e-10);
  EXPECT_FALSE(bad.ok);
  EXPECT_EQ(bad.first_failing_level, 0);
  EXPECT_NEAR(bad.levels[0].pullback_residual, 1.0, 1e-12);

  const FormSequence single(build_tower({ModelSpace(2)}, {}), {darboux_constant_form(1)});
  EXPECT_TRUE(check_compatible_sequence(single, 1e-10).ok);
}

TEST(Compatibility, EveryCompositePassesOnProducts) {
  for (int depth = 1; depth <= 5; ++depth) {
    const FormSequence fs = darboux_product(depth + 1);
    for (int i = 0; i <= depth; ++i)
      for (int j = i; j <= depth; ++j)
        EXPECT_TRUE(check_weak_isometry(fs.tower().composite(i, j), fs.form(j), fs.form(i), 1e-10).ok);
  }
}

TEST(Compatibility, FormSequenceLengthMismatchThrows) {
  EXPECT_THROW(FormSequence(darboux_product(2).tower(), {darboux_constant_form(1)}), ShapeError);
}

TEST(LimitForm, Examples) {
  const FormSequence fs = darboux_product(3);
  const Tower& t = fs.tower();
  Vec a(2), b(2);
  a << 1, 2;
  b << -0.5, 3;
  // Threads in factor 0 only: constant sequence.
  auto v = limit_form_eval(fs, factor_thread(t, 0, a), factor_thread(t, 0, b));
  for (double x : v.values) EXPECT_DOUBLE_EQ(x, darboux_constant_form(1)(a, b));
  EXPECT_TRUE(v.stabilized);
  // u = 0.
  v = limit_form_eval(fs, Thread::from_top(t, Vec::Zero(6)), factor_thread(t, 1, b));
  for (double x : v.values) EXPECT_EQ(x, 0.0);
  // Cross-factor terms vanish.
  v = limit_form_eval(fs, factor_thread(t, 2, a), factor_thread(t, 1, b));
  for (double x : v.values) EXPECT_EQ(x, 0.0);
  EXPECT_EQ(v.final, 0.0);
}

TEST(LimitForm, StabilizationFlag) {
  const FormSequence fs = darboux_product(3);
  Vec u(6), w(6);
  u << 1, 0, 0, 0, 1, 0;
  w << 0, 1, 0, 0, 0, 1;
  const auto v = limit_form_eval(fs, Thread::from_top(fs.tower(), u), Thread::from_top(fs.tower(), w));
  ASSERT_EQ(v.values.size(), 3u);
  EXPECT_DOUBLE_EQ(v.values[0], -1.0);
  EXPECT_DOUBLE_EQ(v.values[2], -2.0);
  EXPECT_FALSE(v.stabilized);
  StabilizationOptions o;
  o.stab_index = 2;
  EXPECT_TRUE(limit_form_eval(fs, Thread::from_top(fs.tower(), u), Thread::from_top(fs.tower(), w), o).stabilized);
}

TEST(LimitForm, IncompatibleThrowsPrecondition) {
  const FormSequence fs = darboux_product(2);
  std::vector<SkewForm> forms = fs.forms();
  forms[0] = SkewForm(forms[0].space(), 3.0 * forms[0].matrix());
  const FormSequence bad(fs.tower(), forms);
  const Thread z = Thread::from_top(fs.tower(), Vec::Zero(4));
  EXPECT_THROW(limit_form_eval(bad, z, z), PreconditionError);
}

TEST(BlockDecompose, ProductReproducesFactors) {
  const FormSequence fs = darboux_product(3);
  const BlockDecomposition bd = block_decompose(fs, 0, 2);
  ASSERT_EQ(bd.blocks.size(), 3u);
  const ModelSpace& top = fs.tower().level(2);
  for (int k = 0; k < 3; ++k) {
    Mat f = Mat::Zero(6, 2);
    f.block(2 * k, 0, 2, 2) = Mat::Identity(2, 2);
    EXPECT_TRUE(bd.blocks[static_cast<std::size_t>(k)] == Subspace(top, f)) << "block " << k;
  }
  EXPECT_LE(bd.direct_sum_defect, 1e-10);
  EXPECT_TRUE(audit_block_decomposition(fs, bd).ok(1e-10));
}

TEST(BlockDecompose, DegenerateCases) {
  const FormSequence fs = darboux_product(3);
  const BlockDecomposition same = block_decompose(fs, 1, 1);
  ASSERT_EQ(same.blocks.size(), 1u);
  EXPECT_EQ(same.blocks[0].dim(), 4);

  const BlockDecomposition next = block_decompose(fs, 1, 2);
  ASSERT_EQ(next.blocks.size(), 2u);
  const Subspace ker = kernel(fs.tower().bonding(1));
  EXPECT_TRUE(next.blocks[1] == ker);
  EXPECT_TRUE(next.blocks[0] == symplectic_orthogonal(fs.form(2), ker));
}

TEST(BlockDecompose, NonProductCompatibleTower) {
  // Level 1 on ℝ⁴ couples the new factor through a symplectic shear; the
  // bonding is adapted so the sequence is still compatible.
  Rng rng(9);
  const SkewForm w1 = darboux_constant_form(2);
  Mat shear = Mat::Identity(4, 4);
  shear.block(2, 0, 2, 2) = 0.3 * random_gaussian(rng, 2, 2);
  const Mat w1m = shear.transpose() * w1.matrix() * shear;
  const SkewForm top(ModelSpace(4), w1m);
  // ker ℓ must be transverse to its orthogonal: take ker = shear⁻¹·span(e2, e4).
  Mat kerb(4, 2);
  kerb << 0, 0, 1, 0, 0, 0, 0, 1;
  kerb = shear.inverse() * kerb;
  const Mat f = symplectic_orthogonal(top, Subspace(top.space(), kerb)).basis();
  // ℓ maps F isomorphically to ℝ² and kills ker.
  Mat both(4, 4);
  both << f, kerb;
  Mat target(2, 4);
  target << Mat::Identity(2, 2), Mat::Zero(2, 2);
  const Mat l = target * both.inverse();
  const SkewForm w0(ModelSpace(2), induce_level_form(top, LinearMap(top.space(), ModelSpace(2), l)).matrix());
  const FormSequence fs(build_tower({ModelSpace(2), ModelSpace(4)}, {l}), {w0, top});
  ASSERT_TRUE(check_compatible_sequence(fs, 1e-10).ok);
  const BlockDecomposition bd = block_decompose(fs, 0, 1);
  EXPECT_TRUE(audit_block_decomposition(fs, bd).ok(1e-9));
  EXPECT_TRUE(bd.blocks[1] == Subspace(top.space(), kerb));
}

TEST(BlockDecompose, IncompatibleThrowsNamingLevel) {
  const FormSequence fs = darboux_product(3);
  std::vector<SkewForm> forms = fs.forms();
  forms[2] = SkewForm(forms[2].space(), 2.0 * forms[2].matrix());
  try {
    block_decompose(FormSequence(fs.tower(), forms), 0, 2);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("1"), std::string::npos) << e.what();
  }
}

TEST(Submersion, Examples) {
  const FormSequence fs = darboux_product(2);
  auto r = check_symplectic_submersion(fs.form(1), fs.tower().bonding(0));
  EXPECT_TRUE(r.ok && r.split_ok && r.vertical_nondegenerate);

  const SkewForm d4 = darboux_constant_form(2);
  Mat l = Mat::Zero(3, 4);
  l(0, 0) = 1;
  l(1, 2) = 1;
  l(2, 3) = 1;
  r = check_symplectic_submersion(d4, LinearMap(d4.space(), ModelSpace(3), l));
  EXPECT_FALSE(r.ok);
  EXPECT_FALSE(r.vertical_nondegenerate);

  r = check_symplectic_submersion(d4, LinearMap::identity(d4.space()));
  EXPECT_TRUE(r.ok);

  EXPECT_THROW(check_symplectic_submersion(d4, LinearMap(d4.space(), ModelSpace(5), Mat::Zero(5, 4))),
               NotSubmersionError);
}

TEST(InduceLevelForm, Examples) {
  const SkewForm d4 = darboux_constant_form(2);
  EXPECT_TRUE(induce_level_form(d4, LinearMap::identity(d4.space())).matrix().isApprox(d4.matrix()));
  const FormSequence fs = darboux_product(2);
  const SkewForm w0 = induce_level_form(fs.form(1), fs.tower().bonding(0));
  EXPECT_TRUE(w0.matrix().isApprox(darboux_constant_form(1).matrix(), 1e-14));
}

TEST(InduceLevelForm, RoundTripOnOrthogonal) {
  Rng rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    // Block-diagonal form with scaled blocks, pushed down a random surjection
    // whose kernel is one of the blocks.
    Mat w = Mat::Zero(6, 6);
    for (int k = 0; k < 3; ++k) {
      const double s = 0.5 + random_uniform(rng);
      w(2 * k, 2 * k + 1) = -s;
      w(2 * k + 1, 2 * k) = s;
    }
    const Mat q = random_gaussian(rng, 6, 6);
    const Mat wq = q.transpose() * w * q;
    const SkewForm top(ModelSpace(6), wq);
    const Mat ker = q.inverse().rightCols(2);
    const Mat f = symplectic_orthogonal(top, Subspace(top.space(), ker)).basis();
    Mat both(6, 6);
    both << f, ker;
    Mat target(4, 6);
    target << random_gaussian(rng, 4, 4), Mat::Zero(4, 2);
    const LinearMap l(top.space(), ModelSpace(4), target * both.inverse());
    const SkewForm low = induce_level_form(top, l);
    const WeakIsometryReport r = check_weak_isometry(l, top, low, 1e-10);
    EXPECT_TRUE(r.ok);
    EXPECT_LE(r.pullback_residual, 1e-10 * std::max(1.0, wq.norm()));
  }
}
