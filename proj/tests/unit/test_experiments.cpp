#include <gtest/gtest.h>

#include <wsym/experiments.hpp>

#include "test_helpers.hpp"

using namespace wsym;

class Shrink : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { result_ = std::make_unique<ShrinkResult>(shrink_experiment(ShrinkOptions{})); }
  static void TearDownTestSuite() { result_.reset(); }
  static std::unique_ptr<ShrinkResult> result_;
};
std::unique_ptr<ShrinkResult> Shrink::result_;

TEST_F(Shrink, RadiiMatchIndependentRootFind) {
  ASSERT_EQ(result_->rows.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_EQ(result_->rows[i].n, static_cast<int>(i) + 1);
    EXPECT_EQ(result_->rows[i].dim, 8 * (static_cast<int>(i) + 1));
    EXPECT_NEAR(result_->rows[i].r_validity, oracle::kShrinkRadius[i], 1e-9) << "n=" << i + 1;
  }
}

TEST_F(Shrink, BelowAnalyticBound) {
  for (const ShrinkRow& row : result_->rows) {
    EXPECT_DOUBLE_EQ(row.bound, 1.0 / row.n);
    EXPECT_LE(row.r_validity, row.bound + 1e-9) << row.n;
  }
  EXPECT_TRUE(result_->within_bound);
}

TEST_F(Shrink, MonotoneAndDecaying) {
  for (std::size_t i = 1; i < result_->rows.size(); ++i)
    EXPECT_LT(result_->rows[i].r_validity, result_->rows[i - 1].r_validity);
  EXPECT_TRUE(result_->strictly_decreasing);
  EXPECT_NEAR(result_->exponent, -1.0, 0.1);
  EXPECT_TRUE(result_->pldc_fails);
  EXPECT_FALSE(result_->assembly.ok);
  EXPECT_NE(result_->diagnosis.find("(PLDC) fails"), std::string::npos) << result_->diagnosis;
}

TEST_F(Shrink, ConditioningAtBase) {
  for (std::size_t i = 0; i < result_->rows.size(); ++i)
    EXPECT_NEAR(result_->rows[i].cond_at_base / oracle::kShrinkCondAtBase[i], 1.0, 1e-9);
}

TEST_F(Shrink, ForwardBoundedInverseGrows) {
  const UniformBoundReport& u = result_->uniform;
  ASSERT_EQ(u.per_level.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) {
    EXPECT_NEAR(u.per_level[i].forward_norm, oracle::kShrinkForwardNorm[i], 1e-9);
    EXPECT_NEAR(u.per_level[i].inverse_norm / oracle::kShrinkInverseNorm[i], 1.0, 1e-9);
  }
  EXPECT_TRUE(u.forward_ok);
  EXPECT_FALSE(u.inverse_ok);
}

TEST(ShrinkSmall, NOneSeesTheWholeDistance) {
  ShrinkOptions o;
  o.n_max = 1;
  const ShrinkResult r = shrink_experiment(o);
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_NEAR(r.rows[0].r_validity, 1.0, 2e-3);
  EXPECT_LE(r.rows[0].r_validity, 1.0);
  EXPECT_FALSE(r.pldc_fails);
}

TEST(ShrinkSmall, EightLevelsRespectBound) {
  ShrinkOptions o;
  o.n_max = 8;
  const ShrinkResult r = shrink_experiment(o);
  EXPECT_LE(r.rows.back().r_validity, 1.0 / 8.0);
}

TEST(ProductControl, FullBallsAndFlatExponent) {
  const FormSequence fs = make_product_tower(std::vector<SkewForm>(10, darboux_constant_form(1)));
  const ShrinkResult r = product_control_experiment(fs);
  ASSERT_EQ(r.rows.size(), 10u);
  for (const ShrinkRow& row : r.rows) {
    EXPECT_EQ(row.r_validity, 1.0);
    EXPECT_EQ(row.r_projected, 1.0);
  }
  for (const MoserReport& rep : r.reports) EXPECT_TRUE(rep.identity_shortcut);
  EXPECT_NEAR(r.exponent, 0.0, 1e-12);
  EXPECT_FALSE(r.pldc_fails);
  EXPECT_TRUE(r.assembly.ok);
  EXPECT_NE(r.diagnosis.find("(PLDC) holds"), std::string::npos) << r.diagnosis;
}
