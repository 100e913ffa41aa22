#include <gtest/gtest.h>

#include "divk/divk.hpp"
#include "test_support.hpp"

namespace divk {
namespace {

TEST(ExactSolve, Fig2) {
  const auto s = exact_solve(fig2_counterexample(10.0));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->centers, (std::vector<Index>{2, 3}));
  EXPECT_DOUBLE_EQ(s->cost, 2.0);
}

TEST(ExactSolve, InfeasibleIsAbsent) { EXPECT_FALSE(exact_solve(from_vertexcover(Graph::cycle(4), 1))); }

TEST(ExactSolve, UnconstrainedLine) {
  const auto s = exact_solve(testing::line_instance());
  ASSERT_TRUE(s);
  EXPECT_DOUBLE_EQ(s->cost, 2.0);
  EXPECT_EQ(s->centers, (std::vector<Index>{1, 3}));
}

TEST(ExactSolve, LexicographicTieBreak) {
  const auto inst = Instance<double>::from_matrix(Matrix<double>::Ones(2, 5), {}, {}, 2);
  EXPECT_EQ(exact_solve(inst)->centers, (std::vector<Index>{0, 1}));
}

TEST(ExactSolve, RefusesOverCap) {
  const auto inst = Instance<double>::from_matrix(Matrix<double>::Ones(2, 30), {}, {}, 10);
  try {
    exact_solve(inst);
    FAIL() << "expected refusal";
  } catch (const OracleRefusal& e) {
    EXPECT_DOUBLE_EQ(e.count(), binomial(30, 10));
  }
  OracleLimits limits;
  limits.max_subsets = 5;  // C(4, 2) = 6
  EXPECT_THROW(exact_solve(fig2_counterexample(10.0), limits), OracleRefusal);
}

TEST(ExactSolve, MatchesBitmaskReference) {
  std::mt19937_64 rng(60);
  for (int trial = 0; trial < 100; ++trial) {
    const Index m = 4 + static_cast<Index>(rng() % 8);
    auto groups = testing::random_overlapping(m, 3, 0.2, rng);
    std::vector<int> bounds{static_cast<int>(rng() % 2), static_cast<int>(rng() % 2), static_cast<int>(rng() % 3)};
    const Index k = 1 + static_cast<Index>(rng() % std::min<Index>(4, m));
    const auto inst = testing::random_matrix_instance(8, m, groups, bounds, k, rng);
    const auto s = exact_solve(inst);
    const double ref = testing::brute_force_optimum(inst);
    if (ref == std::numeric_limits<double>::infinity()) {
      EXPECT_FALSE(s);
    } else {
      ASSERT_TRUE(s);
      EXPECT_NEAR(s->cost, ref, 1e-9);
    }
  }
}

TEST(Binomial, Values) {
  EXPECT_EQ(binomial(4, 2), 6.0);
  EXPECT_EQ(binomial(10, 0), 1.0);
  EXPECT_EQ(binomial(3, 5), 0.0);
}

TEST(ExactDomset, SixCycle) {
  EXPECT_FALSE(exact_domset(Graph::cycle(6), 1));
  const auto s = exact_domset(Graph::cycle(6), 2);
  ASSERT_TRUE(s);
  EXPECT_EQ(*s, (std::vector<Index>{0, 3}));
}

TEST(ExactDomset, StarIsCenter) { EXPECT_EQ(*exact_domset(Graph::star(4), 3), (std::vector<Index>{0})); }

TEST(ExactVertexCover, Triangle) {
  EXPECT_FALSE(exact_vertexcover(Graph::complete(3), 1));
  EXPECT_EQ(*exact_vertexcover(Graph::complete(3), 2), (std::vector<Index>{0, 1}));
}

TEST(ExactGraph, VertexCap) {
  EXPECT_THROW(exact_domset(Graph::path(17), 3), OracleRefusal);
  EXPECT_THROW(exact_vertexcover(Graph::path(17), 3), OracleRefusal);
}

TEST(ExactGraph, SizesMatchBitmaskReference) {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 200; ++trial) {
    const Index n = 1 + static_cast<Index>(rng() % 9);
    const Graph g = testing::random_graph(n, 0.3, rng);
    const auto dom = exact_domset(g, n);
    ASSERT_TRUE(dom);
    EXPECT_EQ(static_cast<int>(dom->size()), testing::domination_number(g));
    const auto vc = exact_vertexcover(g, n);
    ASSERT_TRUE(vc);
    EXPECT_EQ(static_cast<int>(vc->size()), testing::vertex_cover_number(g));
  }
}

}  // namespace
}  // namespace divk
