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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. An optional argument overrides the number of games
// used by the experiment criteria (default 200).

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "qrelearn/compiler.h"
#include "qrelearn/data.h"
#include "qrelearn/equilibrium.h"
#include "qrelearn/experiment.h"
#include "qrelearn/game.h"
#include "qrelearn/learners.h"
#include "qrelearn/rng.h"
#include "qrelearn/wcsp.h"
#include "test_support.h"

namespace qrelearn {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

Outcome lqre_correctness() {
  Outcome out;
  const auto start = Clock::now();
  double worst = 0.0;
  for (int g = 0; g < 100; ++g) {
    const Game game = random_game(2, 2, 1.0, 2.0, derive_seed(101, g));
    for (double lambda : {0.5, 1.0, 3.0, 10.0}) {
      LqreConfig config;
      config.lambda_target = lambda;
      worst = std::max(worst, lqre_residual(game, solve_lqre(game, config), lambda));
    }
    LqreConfig zero;
    zero.lambda_target = 0.0;
    out.require(solve_lqre(game, zero) == MixedProfile::uniform({2, 2}),
                fmt("game %d: lambda=0 profile not uniform", g));
  }
  const double elapsed = seconds_since(start);
  out.require(worst < 1e-6, fmt("max residual %.3g", worst));
  out.require(elapsed < 5.0, fmt("took %.2f s", elapsed));
  if (out.pass) out.detail = fmt("max residual %.3g, %.2f s", worst, elapsed);
  return out;
}

// Iterated strict dominance with a margin of at least `gap` at each step.
// Returns the surviving pure profile.
std::optional<std::pair<int, int>> dominance_solution(const Game& game, double gap) {
  auto u = [&](int player, int a0, int a1) {
    const int joint[2] = {a0, a1};
    return game.payoff(player, game.indexer().index(joint));
  };
  for (int first = 0; first < 2; ++first) {
    // `first` has an action dominant against both opponent actions.
    for (int a = 0; a < 2; ++a) {
      bool dominant = true;
      for (int b = 0; b < 2; ++b) {
        const double mine = first == 0 ? u(0, a, b) : u(1, b, a);
        const double other = first == 0 ? u(0, 1 - a, b) : u(1, b, 1 - a);
        dominant = dominant && mine - other >= gap;
      }
      if (!dominant) continue;
      const int second = 1 - first;
      for (int r = 0; r < 2; ++r) {
        const double mine = second == 0 ? u(0, r, a) : u(1, a, r);
        const double other = second == 0 ? u(0, 1 - r, a) : u(1, a, 1 - r);
        if (mine - other >= gap) {
          return first == 0 ? std::pair{a, r} : std::pair{r, a};
        }
      }
    }
  }
  return std::nullopt;
}

Outcome nash_limit() {
  Outcome out;
  int found = 0;
  double worst = 0.0;
  for (std::uint64_t seed = 0; found < 20; ++seed) {
    const Game game = random_game(2, 2, 1.0, 2.0, derive_seed(202, seed));
    const auto pure = dominance_solution(game, 0.05);
    if (!pure) continue;
    ++found;
    const auto nash = solve_nash_2x2(game);
    out.require(nash.size() == 1, fmt("game %llu: %zu equilibria",
                                      static_cast<unsigned long long>(seed),
                                      nash.size()));
    LqreConfig config;
    config.lambda_target = 100.0;
    const MixedProfile lqre = solve_lqre(game, config);
    const int target[2] = {pure->first, pure->second};
    for (int i = 0; i < 2; ++i) {
      for (int a = 0; a < 2; ++a) {
        const double nash_p = a == target[i] ? 1.0 : 0.0;
        worst = std::max(worst, std::abs(lqre.probability(i, a) - nash_p));
        if (!nash.empty()) {
          out.require(nash[0].probability(i, a) == nash_p,
                      "support enumeration disagrees with dominance");
        }
      }
    }
  }
  out.require(worst <= 0.01, fmt("max L-inf distance %.4g", worst));
  if (out.pass) out.detail = fmt("20 games, max L-inf distance %.4g", worst);
  return out;
}

Outcome solver_exactness() {
  Outcome out;
  const auto start = Clock::now();
  const std::pair<int, int> shapes[] = {{6, 6}, {8, 5}, {10, 4}, {12, 3}, {12, 6}};
  int solved = 0, max_vars = 0, max_values = 0;
  for (std::uint64_t seed = 0; solved < 50; ++seed) {
    const auto [vars, values] = shapes[seed % 5];
    testing::RandomWcspSpec spec;
    spec.variables = vars;
    spec.max_domain = values;
    spec.soft = vars + 4;
    spec.hard = vars / 4;
    spec.max_arity = 3;
    const Wcsp wcsp = testing::random_wcsp(spec, derive_seed(303, seed));
    double space = 1.0;
    int widest = 0;
    for (VarIndex v : wcsp.decision_variables()) {
      const auto size = static_cast<int>(wcsp.variable(v).domain.size());
      space *= size;
      widest = std::max(widest, size);
    }
    // Keep enumeration affordable.
    if (space > 3e6) continue;
    ++solved;
    max_vars = std::max(max_vars, vars);
    max_values = std::max(max_values, widest);
    const auto bb = solve(wcsp);
    const auto brute = brute_force_solve(wcsp);
    out.require(bb.has_value() == brute.has_value(),
                fmt("instance %llu: feasibility differs",
                    static_cast<unsigned long long>(seed)));
    if (bb && brute) {
      out.require(bb->total_cost == brute->total_cost,
                  fmt("instance %llu: %.17g vs %.17g",
                      static_cast<unsigned long long>(seed), bb->total_cost,
                      brute->total_cost));
    }
  }
  const double elapsed = seconds_since(start);
  out.require(elapsed < 30.0, fmt("took %.2f s", elapsed));
  if (out.pass) {
    out.detail = fmt("50 instances up to %d variables and %d values, %.2f s",
                     max_vars, max_values, elapsed);
  }
  return out;
}

Dataset seeded_dataset(std::uint64_t base, std::uint64_t i, int players = 2,
                       int actions = 2, int m = 10, double lambda = 3.0) {
  const Game game = random_game(players, actions, 1.0, 2.0, derive_seed(base, i, 0));
  LqreConfig config;
  config.lambda_target = lambda;
  const GroundTruth truth{game, solve_lqre(game, config), lambda};
  return sample_plays(truth, m, 0.7, derive_seed(base, i, 1));
}

// Decomposed constraint count with every profile observed.
std::size_t construction_count(std::size_t n, std::size_t k) {
  std::size_t kn = 1;
  for (std::size_t i = 0; i < n; ++i) kn *= k;
  const std::size_t simplex = k <= 2 ? 1 : k - 1;
  const std::size_t rationality =
      (kn / k) * (n - 2) + kn + (kn - k) + k + (k - 1) + k;
  return n * (k + simplex + kn + rationality);
}

Outcome decomposition_equivalence() {
  Outcome out;
  double worst = 0.0;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const Dataset data = seeded_dataset(404, i);
    LearnerConfig config;
    config.decomposed = false;
    const CompiledProblem mono = build_wcsp(data, config);
    config.decomposed = true;
    const CompiledProblem dec = build_wcsp(data, config);
    const auto a = solve(mono.wcsp);
    const auto b = solve(dec.wcsp);
    if (!a || !b) {
      out.require(false, fmt("dataset %llu unsatisfiable",
                             static_cast<unsigned long long>(i)));
      continue;
    }
    Assignment projected;
    for (VarIndex v : mono.wcsp.decision_variables()) {
      const std::string& id = mono.wcsp.variable(v).id;
      projected[id] = b->value(dec.wcsp, id);
    }
    const auto projected_cost = evaluate_cost(mono.wcsp, projected);
    out.require(projected_cost.has_value(), "projection infeasible");
    if (projected_cost) {
      worst = std::max(worst, std::abs(*projected_cost - a->total_cost));
    }
    worst = std::max(worst, std::abs(a->total_cost - b->total_cost));
  }
  out.require(worst <= 1e-9, fmt("max optimum gap %.3g", worst));

  std::string counts;
  for (auto [n, k] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    const Dataset data = seeded_dataset(405, 0, n, k, 400, 0.0);
    const EmpiricalCounts observed = empirical_counts(data);
    for (std::size_t p = 0; p < data.indexer().num_profiles(); ++p) {
      out.require(observed.observed(p), "profile unobserved in count check");
    }
    const std::size_t count = build_wcsp(data, LearnerConfig{}).wcsp.constraints().size();
    std::size_t kn = 1;
    for (int j = 0; j < n; ++j) kn *= k;
    out.require(count == construction_count(n, k),
                fmt("(%d,%d): %zu constraints, expected %zu", n, k, count,
                    construction_count(n, k)));
    out.require(count <= 5 * n * kn, fmt("(%d,%d): %zu exceeds 5*N*K^N", n, k, count));
    counts += fmt(" (%d,%d):%zu", n, k, count);
  }
  if (out.pass) out.detail = fmt("max gap %.3g; counts", worst) + counts;
  return out;
}

Outcome alpha_zero() {
  Outcome out;
  for (std::uint64_t i = 0; i < 20; ++i) {
    const Dataset data = seeded_dataset(505, i);
    LearnerConfig config;
    config.alpha = 0.0;
    Estimate lqre = learn_lqre(data, config);
    lqre.method = Method::kNaive;
    out.require(lqre == learn_naive(data, config),
                fmt("dataset %llu differs", static_cast<unsigned long long>(i)));
  }
  if (out.pass) out.detail = "20 datasets identical";
  return out;
}

double mean(const ResultTable& table, Method method, std::size_t column) {
  const ResultRow* row = table.find(method, column);
  return row && row->failures == 0 ? row->mean_error
                                   : std::numeric_limits<double>::quiet_NaN();
}

Outcome property_suites() {
  Outcome out;
  std::mt19937_64 gen(909);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Logit shift invariance and simplex invariants of computed profiles.
  for (int t = 0; t < 100; ++t) {
    std::vector<std::vector<double>> payoffs(2, std::vector<double>(6));
    for (auto& row : payoffs) {
      for (double& v : row) v = 4.0 * unit(gen) - 2.0;
    }
    const Game game({2, 3}, payoffs);
    for (auto& row : payoffs) {
      for (double& v : row) v += 5.0;
    }
    const Game shifted({2, 3}, payoffs);
    const double p = unit(gen), q = unit(gen);
    const MixedProfile profile({{p, 1 - p}, {q, (1 - q) / 2, (1 - q) / 2}});
    const double lambda = 4.0 * unit(gen);
    for (int i = 0; i < 2; ++i) {
      const auto a = logit_response(game, profile, i, lambda);
      const auto b = logit_response(shifted, profile, i, lambda);
      double total = 0.0;
      for (std::size_t k = 0; k < a.size(); ++k) {
        out.require(std::abs(a[k] - b[k]) <= 1e-9, "logit not shift invariant");
        out.require(a[k] >= 0.0, "negative probability");
        total += a[k];
      }
      out.require(std::abs(total - 1.0) <= 1e-12, "logit off the simplex");
    }
    const MixedProfile rounded = round_to_grid(profile, 20);
    for (const auto& s : rounded.strategies()) {
      double total = 0.0;
      for (double v : s) total += v;
      out.require(std::abs(total - 1.0) <= 1e-12, "rounded profile off the simplex");
    }
  }

  // Error metric axioms on random triples.
  auto random_estimate = [&] {
    Estimate e;
    e.game = random_game(2, 2, 1.0, 2.0, gen());
    const double p = unit(gen), q = unit(gen);
    e.profile = MixedProfile({{p, 1 - p}, {q, 1 - q}});
    e.unconstrained.assign(2, std::vector<bool>(4, false));
    return e;
  };
  for (int t = 0; t < 100; ++t) {
    const Estimate a = random_estimate(), b = random_estimate(), c = random_estimate();
    const GroundTruth ta{a.game, a.profile, 0}, tb{b.game, b.profile, 0};
    out.require(error(ta, a) == 0.0, "error not zero on equal arguments");
    out.require(std::abs(error(ta, b) - error(tb, a)) <= 1e-12, "error not symmetric");
    out.require(error(ta, c) <= error(ta, b) + error(tb, c) + 1e-12,
                "triangle inequality fails");
  }

  // Cost spot values.
  out.require(std::abs(strategy_ml_cost(7, 0.7, 1e6) - 2.496724607571127) < 1e-12,
              "strategy_ml_cost(7, 0.7)");
  const std::vector<double> one = {1.5};
  out.require(std::abs(payoff_ml_cost(one, 1.5, 0.7) - 0.5622635892659402) < 1e-12,
              "payoff_ml_cost at the mean");
  out.require(std::abs(payoff_ml_cost(one, 2.2, 0.7) - 1.0622635892659402) < 1e-12,
              "payoff_ml_cost off the mean");

  // Determinism of the seeded pipelines.
  out.require(random_game(2, 2, 1, 2, 42) == random_game(2, 2, 1, 2, 42),
              "random_game not deterministic");
  const Dataset d1 = seeded_dataset(606, 1), d2 = seeded_dataset(606, 1);
  out.require(d1 == d2, "sample_plays not deterministic");
  out.require(learn_lqre(d1, LearnerConfig{}) == learn_lqre(d2, LearnerConfig{}),
              "learn_lqre not deterministic");
  ExperimentSpec spec = table_spec(1, 3, 9);
  spec.axis_values = {10};
  const ResultTable r1 = run_experiment(spec);
  spec.threads = 2;
  const ResultTable r2 = run_experiment(spec);
  out.require(to_csv(r1) == to_csv(r2), "run_experiment not deterministic");
  if (out.pass) out.detail = "logit, simplex, metric, spot values, determinism";
  return out;
}

void report(int number, const std::string& name, const Outcome& outcome,
            bool& all) {
  std::printf("criterion %d %-30s %s  %s\n", number, name.c_str(),
              outcome.pass ? "PASS" : "FAIL", outcome.detail.c_str());
  std::fflush(stdout);
  all = all && outcome.pass;
}

}  // namespace
}  // namespace qrelearn

int main(int argc, char** argv) {
  using namespace qrelearn;
  const int games = argc > 1 ? std::atoi(argv[1]) : 200;
  if (games < 10) {
    std::fprintf(stderr, "need at least 10 games\n");
    return 2;
  }
  bool all = true;
  auto guarded = [](const std::function<Outcome()>& fn) {
    try {
      return fn();
    } catch (const std::exception& e) {
      return Outcome{false, std::string("exception: ") + e.what()};
    }
  };

  report(1, "lqre-correctness", guarded(lqre_correctness), all);
  report(2, "lqre-nash-limit", guarded(nash_limit), all);
  report(3, "solver-exactness", guarded(solver_exactness), all);
  report(4, "decomposition-equivalence", guarded(decomposition_equivalence), all);
  report(5, "alpha-zero-decoupling", guarded(alpha_zero), all);

  Outcome c6, c8;
  {
    ExperimentSpec spec = table_spec(1, games, 1);
    spec.axis_values = {10, 100};
    const auto start = Clock::now();
    try {
      const ResultTable t = run_experiment(spec);
      const double elapsed = seconds_since(start);
      const double lqre10 = mean(t, Method::kLqre, 0), naive10 = mean(t, Method::kNaive, 0);
      const double lqre100 = mean(t, Method::kLqre, 1), naive100 = mean(t, Method::kNaive, 1);
      const double nash10 = mean(t, Method::kNaiveNash, 0);
      c6.require(lqre10 < naive10, "M=10: LQRE not below Naive");
      c6.require(naive100 <= lqre100, "M=100: Naive above LQRE");
      c6.require(elapsed < 1800.0, fmt("took %.0f s", elapsed));
      c6.detail = (c6.pass ? std::string() : c6.detail + "; ") +
                  fmt("%d games: M=10 LQRE %.4f Naive %.4f; M=100 Naive %.4f LQRE %.4f; %.0f s",
                      games, lqre10, naive10, naive100, lqre100, elapsed);
      c8.require(nash10 > lqre10, "NaiveNash not above LQRE");
      c8.detail = (c8.pass ? std::string() : c8.detail + "; ") +
                  fmt("M=10 NaiveNash %.4f LQRE %.4f", nash10, lqre10);
    } catch (const std::exception& e) {
      c6 = c8 = Outcome{false, std::string("exception: ") + e.what()};
    }
  }
  report(6, "table1-direction", c6, all);

  Outcome c7;
  try {
    const ResultTable t = run_experiment(table_spec(3, games, 1));
    std::string detail = fmt("%d games, improvement %%:", games);
    for (std::size_t col = 0; col < t.axis_values.size(); ++col) {
      const double lqre = mean(t, Method::kLqre, col), naive = mean(t, Method::kNaive, col);
      c7.require(lqre < naive, fmt("true lambda %g: LQRE %.4f vs Naive %.4f",
                                   t.axis_values[col], lqre, naive));
      detail += fmt(" %g:%.1f", t.axis_values[col], t.improvement_pct[col]);
    }
    c7.detail = (c7.pass ? std::string() : c7.detail + "; ") + detail;
  } catch (const std::exception& e) {
    c7 = Outcome{false, std::string("exception: ") + e.what()};
  }
  report(7, "table3-direction", c7, all);
  report(8, "naive-nash-ordering", c8, all);
  report(9, "property-suites", guarded(property_suites), all);
  return all ? 0 : 1;
}
