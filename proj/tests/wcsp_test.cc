// Copyright 2026 The qrelearn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "qrelearn/wcsp.h"

#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "qrelearn/errors.h"
#include "test_support.h"

namespace qrelearn {
namespace {

std::shared_ptr<TableCost> unary(std::vector<double> domain,
                                 std::vector<double> costs) {
  return std::make_shared<TableCost>(std::vector<std::vector<double>>{domain},
                                     std::move(costs));
}

// Cost given as a closed-form evaluator, with only the default bound.
class PolynomialCost final : public CostFunction {
 public:
  std::string name() const override { return "poly"; }
  double cost(std::span<const double> v) const override {
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) total += (i + 1) * v[i] * v[i];
    return std::abs(total - 3.0);
  }
  nlohmann::json parameters() const override { return nlohmann::json::object(); }
};

TEST(EvaluateCostTest, EmptyInstanceCostsNothing) {
  WcspBuilder builder;
  builder.add_variable("x", {0, 1});
  const Wcsp wcsp = std::move(builder).build();
  EXPECT_EQ(evaluate_cost(wcsp, Assignment{{"x", 1}}), 0.0);
}

TEST(EvaluateCostTest, UnaryTableLookup) {
  WcspBuilder builder;
  const auto x = builder.add_variable("x", {0, 1});
  builder.add_soft({x}, unary({0, 1}, {1.5, 0.25}));
  const Wcsp wcsp = std::move(builder).build();
  EXPECT_EQ(evaluate_cost(wcsp, Assignment{{"x", 1}}), 0.25);
}

TEST(EvaluateCostTest, SoftCostsAdd) {
  WcspBuilder builder;
  const auto x = builder.add_variable("x", {0});
  builder.add_soft({x}, unary({0}, {0.3}));
  builder.add_soft({x}, unary({0}, {0.7}));
  const Wcsp wcsp = std::move(builder).build();
  EXPECT_DOUBLE_EQ(*evaluate_cost(wcsp, Assignment{{"x", 0}}), 1.0);
}

TEST(EvaluateCostTest, HardViolationIsInfeasible) {
  WcspBuilder builder;
  const auto x = builder.add_variable("x", {0, 0.5, 1});
  const auto y = builder.add_variable("y", {0, 0.5, 1});
  builder.add_hard({x, y}, std::make_shared<SumEquals>(1.0));
  const Wcsp wcsp = std::move(builder).build();
  EXPECT_EQ(evaluate_cost(wcsp, Assignment{{"x", 0.5}, {"y", 0.5}}), 0.0);
  EXPECT_EQ(evaluate_cost(wcsp, Assignment{{"x", 1}, {"y", 0.5}}), std::nullopt);
}

TEST(EvaluateCostTest, MissingOrForeignVariables) {
  WcspBuilder builder;
  builder.add_variable("x", {0, 1});
  builder.add_variable("y", {0, 1});
  const Wcsp wcsp = std::move(builder).build();
  EXPECT_THROW(evaluate_cost(wcsp, Assignment{{"x", 0}}), ArgumentError);
  EXPECT_THROW(evaluate_cost(wcsp, Assignment{{"x", 0}, {"y", 0}, {"z", 0}}),
               ArgumentError);
  EXPECT_THROW(evaluate_cost(wcsp, Assignment{{"x", 0}, {"y", 0.5}}),
               ArgumentError);
}

TEST(EvaluateCostTest, FunctionalOutputsAreComputedOrChecked) {
  WcspBuilder builder;
  const auto x = builder.add_variable("x", {1, 2});
  const auto y = builder.add_variable("y", {3, 4});
  const auto s = builder.add_functional("s", Functional(FunctionalOp::kSum), {x, y});
  builder.add_soft({s}, unary({4, 5, 6}, {4, 5, 6}));
  const Wcsp wcsp = std::move(builder).build();
  EXPECT_EQ(evaluate_cost(wcsp, Assignment{{"x", 2}, {"y", 3}}), 5.0);
  EXPECT_EQ(evaluate_cost(wcsp, Assignment{{"x", 2}, {"y", 3}, {"s", 5}}), 5.0);
  EXPECT_EQ(evaluate_cost(wcsp, Assignment{{"x", 2}, {"y", 3}, {"s", 6}}),
            std::nullopt);
}

TEST(BruteForceTest, UnaryArgmin) {
  WcspBuilder builder;
  const auto x = builder.add_variable("x", {0, 0.5, 1});
  builder.add_soft({x}, unary({0, 0.5, 1}, {2, 0, 1}));
  const Wcsp wcsp = std::move(builder).build();
  const auto sol = brute_force_solve(wcsp);
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->value(wcsp, "x"), 0.5);
  EXPECT_EQ(sol->total_cost, 0.0);
}

TEST(BruteForceTest, EmptyRelationIsUnsatisfiable) {
  WcspBuilder builder;
  const auto x = builder.add_variable("x", {0, 1});
  const auto y = builder.add_variable("y", {0, 1});
  builder.add_hard({x, y}, std::make_shared<AllowedTuples>(
                               std::vector<std::vector<double>>{}));
  const Wcsp wcsp = std::move(builder).build();
  EXPECT_EQ(brute_force_solve(wcsp), std::nullopt);
  EXPECT_EQ(solve(wcsp), std::nullopt);
}

TEST(BruteForceTest, MatchesIndependentEnumeration) {
  testing::RandomWcspSpec spec;
  spec.variables = 6;
  spec.max_domain = 4;
  spec.soft = 8;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Wcsp wcsp = testing::random_wcsp(spec, seed);
    const auto sol = brute_force_solve(wcsp);
    const auto expected = testing::enumerated_minimum(wcsp);
    ASSERT_EQ(sol.has_value(), expected.has_value());
    if (sol) {
      EXPECT_EQ(sol->total_cost, *expected);
    }
  }
}

TEST(BruteForceTest, TieBreakIsLexicographic) {
  WcspBuilder builder;
  const auto x = builder.add_variable("x", {0, 1, 2});
  const auto y = builder.add_variable("y", {0, 1});
  // Minimum 1 at (1, 0), (1, 1) and (2, 0).
  builder.add_soft({x, y}, std::make_shared<TableCost>(
                               std::vector<std::vector<double>>{{0, 1, 2}, {0, 1}},
                               std::vector<double>{3, 3, 1, 1, 1, 2}));
  const Wcsp wcsp = std::move(builder).build();
  const auto sol = brute_force_solve(wcsp);
  EXPECT_EQ(sol->value(wcsp, "x"), 1.0);
  EXPECT_EQ(sol->value(wcsp, "y"), 0.0);
}

TEST(BruteForceTest, CapRaisesSizeError) {
  WcspBuilder builder;
  for (int v = 0; v < 10; ++v) {
    builder.add_variable("x" + std::to_string(v), {0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  }
  const Wcsp wcsp = std::move(builder).build();
  EXPECT_THROW(brute_force_solve(wcsp), SizeError);
  BruteForceConfig small;
  small.max_assignments = 10;
  WcspBuilder tiny;
  tiny.add_variable("a", {0, 1, 2});
  tiny.add_variable("b", {0, 1, 2, 3});
  EXPECT_THROW(brute_force_solve(std::move(tiny).build(), small), SizeError);
}

TEST(SolveTest, ZeroCostInstance) {
  WcspBuilder builder;
  const auto x = builder.add_variable("x", {0, 1, 2});
  const auto y = builder.add_variable("y", {0, 1, 2});
  builder.add_soft({x, y}, std::make_shared<TableCost>(
                               std::vector<std::vector<double>>{{0, 1, 2}, {0, 1, 2}},
                               std::vector<double>{5, 4, 3, 2, 1, 0, 1, 2, 3}));
  const Wcsp wcsp = std::move(builder).build();
  const auto sol = solve(wcsp);
  ASSERT_TRUE(sol);
  EXPECT_EQ(sol->total_cost, 0.0);
  EXPECT_TRUE(sol->optimal);
}

TEST(SolveTest, SingleVariableMatchesBruteForceExactly) {
  WcspBuilder builder;
  const auto x = builder.add_variable("x", {0, 1, 2, 3});
  builder.add_soft({x}, unary({0, 1, 2, 3}, {2, 1, 1, 5}));
  const Wcsp wcsp = std::move(builder).build();
  const auto a = solve(wcsp);
  const auto b = brute_force_solve(wcsp);
  EXPECT_EQ(a->values, b->values);
  EXPECT_EQ(a->total_cost, b->total_cost);
}

struct OracleCase {
  int variables;
  int max_domain;
  int soft;
  int hard;
  int max_arity;
};

class SolveOracleTest : public ::testing::TestWithParam<OracleCase> {};

TEST_P(SolveOracleTest, EqualsBruteForce) {
  const OracleCase& c = GetParam();
  testing::RandomWcspSpec spec;
  spec.variables = c.variables;
  spec.max_domain = c.max_domain;
  spec.soft = c.soft;
  spec.hard = c.hard;
  spec.max_arity = c.max_arity;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Wcsp wcsp = testing::random_wcsp(spec, 1000 * c.variables + seed);
    const auto expected = brute_force_solve(wcsp);
    for (bool split : {true, false}) {
      for (std::size_t cap : {std::size_t{0}, std::size_t{64}}) {
        SolverConfig config;
        config.split_components = split;
        config.enumeration_cap = cap;
        const auto sol = solve(wcsp, config);
        ASSERT_EQ(sol.has_value(), expected.has_value()) << "seed " << seed;
        if (!sol) continue;
        EXPECT_EQ(sol->total_cost, expected->total_cost) << "seed " << seed;
        EXPECT_TRUE(sol->optimal);
        EXPECT_NEAR(*evaluate_cost(wcsp, sol->assignment(wcsp)), sol->total_cost,
                    1e-9);
      }
    }
  }
}

INSTANTIATE_TEST_SUITE_P(
    Shapes, SolveOracleTest,
    ::testing::Values(OracleCase{4, 3, 4, 1, 2}, OracleCase{6, 4, 8, 2, 3},
                      OracleCase{8, 4, 10, 2, 3}, OracleCase{10, 3, 14, 3, 3},
                      OracleCase{12, 2, 16, 3, 4}));

TEST(SolveTest, Deterministic) {
  testing::RandomWcspSpec spec;
  spec.variables = 9;
  spec.soft = 12;
  const Wcsp wcsp = testing::random_wcsp(spec, 4);
  const auto a = solve(wcsp);
  const auto b = solve(wcsp);
  EXPECT_EQ(a->values, b->values);
  EXPECT_EQ(a->nodes, b->nodes);
}

TEST(SolveTest, ClosedFormCostsUseDefaultBounds) {
  WcspBuilder builder;
  std::vector<VarIndex> scope;
  for (int v = 0; v < 4; ++v) {
    scope.push_back(builder.add_variable("x" + std::to_string(v), {0, 0.5, 1, 1.5}));
  }
  builder.add_soft(scope, std::make_shared<PolynomialCost>());
  builder.add_soft({scope[0]}, unary({0, 0.5, 1, 1.5}, {0, 0.1, 0.2, 0.3}));
  builder.add_hard({scope[1], scope[2]}, std::make_shared<SumEquals>(1.5));
  const Wcsp wcsp = std::move(builder).build();
  for (std::size_t cap : {std::size_t{0}, std::size_t{16}, std::size_t{1000}}) {
    SolverConfig config;
    config.enumeration_cap = cap;
    EXPECT_EQ(solve(wcsp, config)->total_cost, brute_force_solve(wcsp)->total_cost);
  }
}

TEST(SolveTest, NodeLimitMarksTheResultInexact) {
  testing::RandomWcspSpec spec;
  spec.variables = 12;
  spec.max_domain = 5;
  spec.soft = 20;
  spec.hard = 0;
  const Wcsp wcsp = testing::random_wcsp(spec, 9);
  SolverConfig config;
  config.node_limit = 20;
  config.split_components = false;
  const auto sol = solve(wcsp, config);
  ASSERT_TRUE(sol);
  EXPECT_FALSE(sol->optimal);
  EXPECT_GE(sol->total_cost, solve(wcsp)->total_cost);
}

// x, y, z decision; s = x + y, p = s * z, e = exp(0.5 p). Soft costs on the
// derived values only.
Wcsp functional_chain(std::uint64_t seed, bool with_surrogate) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> cost(0, 12);
  WcspBuilder builder;
  const std::vector<double> dom = {0, 0.5, 1, 1.5};
  const auto x = builder.add_variable("x", dom);
  const auto y = builder.add_variable("y", dom);
  const auto z = builder.add_variable("z", {0.25, 0.5, 1});
  const auto s = builder.add_functional("s", Functional(FunctionalOp::kSum), {x, y});
  const auto p = builder.add_functional("p", Functional(FunctionalOp::kProduct), {s, z});
  const auto e =
      builder.add_functional("e", Functional(FunctionalOp::kScaledExp, 0.5), {p});
  // A cost of e through a table over its materialised image.
  const auto& image = builder.variable(e).domain;
  std::vector<double> costs;
  for (std::size_t i = 0; i < image.size(); ++i) costs.push_back(0.5 * cost(gen));
  auto on_e = unary(image, costs);
  if (with_surrogate) {
    // The same cost restated over (x, y, z).
    std::vector<double> restated;
    for (double a : dom) {
      for (double b : dom) {
        for (double c : {0.25, 0.5, 1.0}) {
          const double v = std::exp(0.5 * ((a + b) * c));
          restated.push_back(on_e->cost(std::vector<double>{v}));
        }
      }
    }
    builder.add_soft({e}, on_e,
                     Surrogate{{x, y, z},
                               std::make_shared<TableCost>(
                                   std::vector<std::vector<double>>{
                                       dom, dom, {0.25, 0.5, 1}},
                                   restated)});
  } else {
    builder.add_soft({e}, on_e);
  }
  std::vector<double> sc;
  for (std::size_t i = 0; i < builder.variable(s).domain.size(); ++i) {
    sc.push_back(0.5 * cost(gen));
  }
  builder.add_soft({s}, unary(builder.variable(s).domain, sc));
  builder.add_soft({x}, unary(dom, {1, 0, 2, 1}));
  return std::move(builder).build();
}

TEST(SolveTest, FunctionalChainsMatchBruteForce) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    for (bool surrogate : {false, true}) {
      const Wcsp wcsp = functional_chain(seed, surrogate);
      const auto expected = brute_force_solve(wcsp);
      EXPECT_EQ(expected->total_cost, *testing::enumerated_minimum(wcsp));
      for (std::size_t cap : {std::size_t{0}, std::size_t{64}}) {
        SolverConfig config;
        config.enumeration_cap = cap;
        EXPECT_EQ(solve(wcsp, config)->total_cost, expected->total_cost)
            << "seed " << seed;
      }
    }
  }
}

TEST(WcspBuilderTest, FunctionalImagesAreExactOrImplicit) {
  WcspBuilder builder(/*image_cap=*/4);
  const auto x = builder.add_variable("x", {1, 2, 3});
  const auto y = builder.add_variable("y", {1, 2});
  const auto s = builder.add_functional("s", Functional(FunctionalOp::kSum), {x, y});
  const auto p = builder.add_functional("p", Functional(FunctionalOp::kProduct), {x, y});
  EXPECT_EQ(builder.variable(s).domain, (std::vector<double>{2, 3, 4, 5}));
  // {1, 2, 3, 4, 6} exceeds the cap and is kept as a range.
  EXPECT_TRUE(builder.variable(p).domain.empty());
  EXPECT_EQ(builder.variable(p).range, (Interval{1, 6}));
  builder.add_soft({p}, std::make_shared<PolynomialCost>());
  const Wcsp wcsp = std::move(builder).build();
  EXPECT_EQ(wcsp.decision_variables(), (std::vector<VarIndex>{x, y}));
  EXPECT_EQ(solve(wcsp)->total_cost, brute_force_solve(wcsp)->total_cost);
}

// Two table constraints bounded jointly by a group whose surrogate is their
// sum; a third constraint outside the group.
Wcsp grouped(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> cost(0, 16);
  const std::vector<double> dom = {0, 1, 2};
  WcspBuilder builder;
  const auto a = builder.add_variable("a", dom);
  const auto b = builder.add_variable("b", dom);
  const auto c = builder.add_variable("c", dom);
  const auto d = builder.add_variable("d", dom);
  std::vector<double> ab(9), bc(9), cd(9), sum(27);
  for (auto* t : {&ab, &bc, &cd}) {
    for (double& v : *t) v = 0.25 * cost(gen);
  }
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      for (int k = 0; k < 3; ++k) sum[9 * i + 3 * j + k] = ab[3 * i + j] + bc[3 * j + k];
    }
  }
  const auto m1 = builder.add_soft(
      {a, b}, std::make_shared<TableCost>(std::vector<std::vector<double>>{dom, dom}, ab));
  const auto m2 = builder.add_soft(
      {b, c}, std::make_shared<TableCost>(std::vector<std::vector<double>>{dom, dom}, bc));
  builder.add_soft(
      {c, d}, std::make_shared<TableCost>(std::vector<std::vector<double>>{dom, dom}, cd));
  builder.add_soft({a}, unary(dom, {0.5, 0, 1}));
  builder.add_bound_group(
      {m1, m2},
      Surrogate{{a, b, c},
                std::make_shared<TableCost>(
                    std::vector<std::vector<double>>{dom, dom, dom}, sum)});
  return std::move(builder).build();
}

TEST(SolveTest, BoundGroupsKeepTheOptimum) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Wcsp wcsp = grouped(seed);
    ASSERT_EQ(wcsp.bound_groups().size(), 1u);
    for (std::size_t cap : {std::size_t{0}, std::size_t{3}, std::size_t{64}}) {
      SolverConfig config;
      config.enumeration_cap = cap;
      EXPECT_EQ(solve(wcsp, config)->total_cost, brute_force_solve(wcsp)->total_cost);
    }
  }
}

// Admissibility: at random partial assignments the node bound never exceeds
// the cost of any feasible completion, in particular the cheapest one.
void check_admissible(const Wcsp& wcsp, std::uint64_t seed, int nodes) {
  std::mt19937_64 gen(seed);
  const auto& decision = wcsp.decision_variables();
  for (int node = 0; node < nodes; ++node) {
    std::vector<std::optional<double>> partial(wcsp.num_variables());
    std::vector<VarIndex> free;
    for (VarIndex v : decision) {
      const auto& dom = wcsp.variable(v).domain;
      if (gen() % 2 == 0) {
        partial[v] = dom[gen() % dom.size()];
      } else {
        free.push_back(v);
      }
    }
    for (std::size_t cap : {std::size_t{0}, std::size_t{64}}) {
      SolverConfig config;
      config.enumeration_cap = cap;
      const auto bound = node_lower_bound(wcsp, partial, config);

      std::optional<double> best;
      std::vector<int> sizes;
      for (VarIndex v : free) sizes.push_back(static_cast<int>(wcsp.variable(v).domain.size()));
      std::vector<double> values(wcsp.num_variables(), 0.0);
      for (VarIndex v : decision) {
        if (partial[v]) values[v] = *partial[v];
      }
      testing::for_each_joint(sizes, [&](const std::vector<int>& idx) {
        for (std::size_t f = 0; f < free.size(); ++f) {
          values[free[f]] = wcsp.variable(free[f]).domain[idx[f]];
        }
        std::vector<double> full = values;
        wcsp.complete(full);
        const auto cost = evaluate_cost(wcsp, std::span<const double>(full));
        if (cost && (!best || *cost < *best)) best = cost;
      });
      if (!bound) {
        EXPECT_FALSE(best) << "pruned a node with a feasible completion";
      } else if (best) {
        EXPECT_LE(*bound, *best + 1e-12 * std::max(1.0, *best));
      }
    }
  }
}

TEST(NodeLowerBoundTest, AdmissibleOnRandomInstances) {
  testing::RandomWcspSpec spec;
  spec.variables = 7;
  spec.max_domain = 4;
  spec.soft = 10;
  spec.hard = 2;
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    check_admissible(testing::random_wcsp(spec, seed), seed, 20);
  }
}

TEST(NodeLowerBoundTest, AdmissibleWithFunctionalsGroupsAndSurrogates) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    check_admissible(functional_chain(seed, true), seed, 20);
    check_admissible(functional_chain(seed, false), seed, 20);
    check_admissible(grouped(seed), seed, 20);
  }
}

TEST(NodeLowerBoundTest, EmptyPartialBoundsTheOptimumAndFullIsExact) {
  const Wcsp wcsp = grouped(3);
  std::vector<std::optional<double>> partial(wcsp.num_variables());
  const auto best = brute_force_solve(wcsp);
  EXPECT_LE(*node_lower_bound(wcsp, partial), best->total_cost);
  for (VarIndex v : wcsp.decision_variables()) partial[v] = best->values[v];
  EXPECT_DOUBLE_EQ(*node_lower_bound(wcsp, partial), best->total_cost);
  EXPECT_THROW(node_lower_bound(wcsp, std::vector<std::optional<double>>(1)),
               ArgumentError);
}

TEST(WcspBuilderTest, Validation) {
  WcspBuilder builder;
  const auto x = builder.add_variable("x", {0, 1});
  const auto y = builder.add_variable("y", {0, 1});
  const auto s = builder.add_functional("s", Functional(FunctionalOp::kSum), {x, y});
  EXPECT_THROW(builder.add_variable("x", {0}), ArgumentError);
  EXPECT_THROW(builder.add_variable("e", {}), ArgumentError);
  EXPECT_THROW(builder.add_variable("d", {1, 0}), ArgumentError);
  EXPECT_THROW(builder.add_variable("n", {0, NAN}), ArgumentError);
  EXPECT_THROW(builder.add_functional("f", Functional(FunctionalOp::kSum), {x}),
               ArgumentError);
  EXPECT_THROW(Functional(FunctionalOp::kScaledExp, -1.0), ArgumentError);
  EXPECT_THROW(builder.add_soft({}, unary({0}, {0})), ArgumentError);
  EXPECT_THROW(builder.add_soft({VarIndex{99}}, unary({0}, {0})), ArgumentError);
  EXPECT_THROW(builder.add_soft({x}, nullptr), ArgumentError);
  EXPECT_THROW(unary({0, 1}, {0}), ArgumentError);
  EXPECT_THROW(unary({0, 1}, {0, -1}), ArgumentError);

  const auto soft = builder.add_soft({s}, unary({0, 1, 2}, {0, 1, 2}));
  const auto hard = builder.add_hard({x, y}, std::make_shared<SumEquals>(1.0));
  const auto fn = unary({0, 1, 2}, {0, 1, 2});
  EXPECT_THROW(builder.add_soft({s}, fn, Surrogate{{s}, fn}), ArgumentError);
  EXPECT_THROW(builder.add_bound_group({soft, hard}, Surrogate{{x}, fn}),
               ArgumentError);
  EXPECT_THROW(builder.add_bound_group({soft, soft}, Surrogate{{x}, fn}),
               ArgumentError);
  EXPECT_THROW(builder.add_bound_group({}, Surrogate{{x}, fn}), ArgumentError);
  const auto other = builder.add_soft({x}, unary({0, 1}, {0, 0}));
  builder.add_bound_group({soft, other}, Surrogate{{x, y}, std::make_shared<TableCost>(
      std::vector<std::vector<double>>{{0, 1}, {0, 1}}, std::vector<double>{0, 1, 1, 2})});
  EXPECT_THROW(builder.add_bound_group({soft}, Surrogate{{x}, fn}), ArgumentError);
}

TEST(WcspTest, LookupAndCounts) {
  WcspBuilder builder;
  const auto x = builder.add_variable("x", {0, 1});
  const auto y = builder.add_variable("y", {0, 1});
  builder.add_functional("s", Functional(FunctionalOp::kSum), {x, y});
  builder.add_soft({x}, unary({0, 1}, {0, 1}));
  builder.add_hard({x, y}, std::make_shared<SumEquals>(1.0));
  const Wcsp wcsp = std::move(builder).build();
  EXPECT_EQ(wcsp.num_soft(), 1u);
  EXPECT_EQ(wcsp.num_hard(), 1u);
  EXPECT_EQ(wcsp.num_functional(), 1u);
  EXPECT_EQ(wcsp.index_of("s"), 2u);
  EXPECT_EQ(wcsp.find("q"), std::nullopt);
  EXPECT_THROW(wcsp.index_of("q"), ArgumentError);
}

TEST(WcspJsonTest, DumpListsVariablesConstraintsAndGroups) {
  const Wcsp wcsp = grouped(1);
  const nlohmann::json j = wcsp_to_json(wcsp);
  ASSERT_EQ(j.at("variables").size(), 4u);
  EXPECT_EQ(j["variables"][0]["id"], "a");
  EXPECT_EQ(j["variables"][0]["domain"], (std::vector<double>{0, 1, 2}));
  ASSERT_EQ(j.at("constraints").size(), 4u);
  EXPECT_EQ(j["constraints"][0]["kind"], "soft");
  EXPECT_EQ(j["constraints"][0]["function"], "table");
  EXPECT_EQ(j["constraints"][0]["scope"], (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(j["constraints"][0]["parameters"]["costs"].size(), 9u);
  EXPECT_EQ(j.at("bound_groups")[0]["members"], (std::vector<int>{0, 1}));

  const nlohmann::json chain = wcsp_to_json(functional_chain(0, true));
  bool saw_functional = false, saw_surrogate = false;
  for (const auto& c : chain["constraints"]) {
    if (c["kind"] == "functional") {
      saw_functional = true;
      EXPECT_TRUE(c.contains("output"));
    }
    if (c.contains("surrogate")) {
      saw_surrogate = true;
      EXPECT_EQ(c["surrogate"]["scope"], (std::vector<std::string>{"x", "y", "z"}));
    }
  }
  EXPECT_TRUE(saw_functional);
  EXPECT_TRUE(saw_surrogate);
}

}  // namespace
}  // namespace qrelearn
