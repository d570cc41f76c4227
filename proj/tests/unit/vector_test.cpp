#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "patsim/errors.hpp"
#include "patsim/vector.hpp"
#include "support.hpp"

namespace patsim {
namespace {

TEST(DenseVector, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(DenseVector({}), ContractError);
  EXPECT_THROW(DenseVector({1.0, NAN}), ContractError);
  EXPECT_THROW(DenseVector({INFINITY}), ContractError);
  EXPECT_EQ(DenseVector({1.0, 2.0}).dim(), 2u);
}

TEST(Cosine, SelfSimilarity) { EXPECT_DOUBLE_EQ(cosine(DenseVector({3, -4, 12}), DenseVector({3, -4, 12})), 1.0); }

TEST(Cosine, Orthogonal) { EXPECT_EQ(cosine(DenseVector({1, 0}), DenseVector({0, 1})), 0.0); }

TEST(Cosine, HandComputedValue) {
  // 32 / (sqrt(14) * sqrt(77))
  EXPECT_NEAR(cosine(DenseVector({1, 2, 3}), DenseVector({4, 5, 6})), 0.974632, 1e-6);
  EXPECT_NEAR(cosine(DenseVector({1, 2, 3}), DenseVector({4, 5, 6})), 32.0 / (std::sqrt(14.0) * std::sqrt(77.0)), 1e-15);
}

TEST(Cosine, Opposite) { EXPECT_DOUBLE_EQ(cosine(DenseVector({1, 2}), DenseVector({-2, -4})), -1.0); }

TEST(Cosine, Errors) {
  EXPECT_THROW(cosine(DenseVector({1, 2}), DenseVector({1, 2, 3})), ContractError);
  EXPECT_THROW(cosine(DenseVector({0, 0}), DenseVector({1, 2})), UndefinedSimilarity);
  EXPECT_THROW(cosine(DenseVector({1, 2}), DenseVector({0, 0})), UndefinedSimilarity);
}

TEST(Cosine, PropertiesOnRandomVectors) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.001, 1000.0);
  for (int i = 0; i < 10000; ++i) {
    const std::size_t dim = 1 + rng() % 40;
    std::vector<double> a(dim), b(dim);
    for (auto& x : a) x = normal(rng);
    for (auto& x : b) x = normal(rng);
    const DenseVector va(a), vb(b);
    const double ab = cosine(va, vb);
    ASSERT_EQ(ab, cosine(vb, va));
    ASSERT_LE(std::abs(ab), 1.0);
    ASSERT_NEAR(cosine(va, va), 1.0, 1e-12);
    const double l = scale(rng);
    auto scaled = a;
    for (auto& x : scaled) x *= l;
    ASSERT_NEAR(cosine(DenseVector(scaled), vb), ab, 1e-12);
    ASSERT_NEAR(ab, testing::naive_cosine(a, b), 1e-12);
  }
}

}  // namespace
}  // namespace patsim
