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

#include "qrelearn/compiler.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <utility>

#include "qrelearn/errors.h"

namespace qrelearn {
namespace {

// Interval bounds lose a few ulps of the (large) quantities they difference;
// this absolute margin, relative to those quantities, keeps them admissible.
constexpr double kBoundMargin = 1e-12;

Interval add(Interval a, Interval b) { return {a.lo + b.lo, a.hi + b.hi}; }

Interval mul(Interval a, Interval b) {
  const double p[] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  return {*std::min_element(std::begin(p), std::end(p)),
          *std::max_element(std::begin(p), std::end(p))};
}

Interval scaled_exp(Interval a, double scale) {
  return {std::exp(scale * a.lo), std::exp(scale * a.hi)};
}

// α · distance from 0 to [lo, hi], less a margin proportional to `magnitude`.
double gap_bound(double lo, double hi, double alpha, double magnitude) {
  double distance = 0.0;
  if (lo > 0.0) distance = lo;
  if (hi < 0.0) distance = -hi;
  return std::max(0.0, alpha * (distance - kBoundMargin * magnitude));
}

std::string profile_label(const ProfileIndexer& indexer, std::size_t profile) {
  std::string label;
  const auto joint = indexer.joint_action(profile);
  for (std::size_t j = 0; j < joint.size(); ++j) {
    if (j > 0) label += ',';
    label += std::to_string(joint[j]);
  }
  return label;
}

std::string indexed(std::string_view stem, std::initializer_list<int> indices) {
  std::string id(stem);
  for (int index : indices) id += "[" + std::to_string(index) + "]";
  return id;
}

}  // namespace

void LearnerConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw ArgumentError("lambda must be finite and non-negative");
  }
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ArgumentError("alpha must be finite and non-negative");
  }
  if (!(payoff_step > 0.0) || !std::isfinite(payoff_step)) {
    throw ArgumentError("payoff step must be positive");
  }
  if (!(noise_stddev > 0.0) || !std::isfinite(noise_stddev)) {
    throw ArgumentError("noise standard deviation must be positive");
  }
  if (!(log_zero_cap > 0.0) || !std::isfinite(log_zero_cap)) {
    throw ArgumentError("log-zero cap must be positive");
  }
  strategy_divisions();
}

int LearnerConfig::strategy_divisions() const {
  if (!(strategy_step > 0.0) || strategy_step > 1.0) {
    throw ArgumentError("strategy step must lie in (0, 1]");
  }
  const double n = std::round(1.0 / strategy_step);
  if (std::abs(n * strategy_step - 1.0) > 1e-9) {
    throw ArgumentError("strategy step must divide 1");
  }
  return static_cast<int>(n);
}

double strategy_ml_cost(int count, double value, double cap) {
  if (count < 0) throw ArgumentError("negative action count");
  if (count == 0) return 0.0;
  if (value <= 0.0) return cap;
  return std::max(0.0, -count * std::log(value));
}

double payoff_ml_cost(std::span<const double> observations, double value,
                      double noise_stddev) {
  if (!(noise_stddev > 0.0)) {
    throw ArgumentError("noise standard deviation must be positive");
  }
  const double normaliser =
      std::log(noise_stddev * std::sqrt(2.0 * std::numbers::pi));
  const double scale = 2.0 * noise_stddev * noise_stddev;
  double cost = 0.0;
  for (double v : observations) {
    const double d = v - value;
    cost += d * d / scale + normaliser;
  }
  return cost;
}

RationalityTerm::RationalityTerm(ProfileIndexer indexer, int player,
                                 int action, std::vector<char> included,
                                 double lambda, double alpha)
    : indexer_(std::move(indexer)),
      player_(player),
      action_(action),
      included_(std::move(included)),
      lambda_(lambda),
      alpha_(alpha) {
  if (player < 0 || player >= indexer_.num_players()) {
    throw ArgumentError("rationality term: player out of range");
  }
  if (action < 0 || action >= indexer_.num_actions(player)) {
    throw ArgumentError("rationality term: action out of range");
  }
  if (included_.size() != indexer_.num_profiles()) {
    throw SizeError("rationality term: mask size mismatch");
  }
}

double RationalityTerm::cost(double sigma,
                             const std::vector<std::vector<double>>& strategies,
                             std::span<const double> payoffs) const {
  const int n = indexer_.num_players();
  const int k = indexer_.num_actions(player_);
  std::vector<double> e(k);
  for (int j = 0; j < k; ++j) {
    bool any = false;
    double ep = 0.0;
    for (std::size_t p = 0; p < indexer_.num_profiles(); ++p) {
      if (!included_[p] || indexer_.action_of(p, player_) != j) continue;
      double x = payoffs[p];
      if (n > 1) {
        bool first = true;
        double t = 0.0;
        for (int o = 0; o < n; ++o) {
          if (o == player_) continue;
          const double s = strategies[o][indexer_.action_of(p, o)];
          t = first ? s : t * s;
          first = false;
        }
        x = t * payoffs[p];
      }
      ep = any ? ep + x : x;
      any = true;
    }
    e[j] = std::exp(lambda_ * ep);
  }
  double z = e[0];
  for (int j = 1; j < k; ++j) z = z + e[j];
  return alpha_ * std::abs(e[action_] - sigma * z);
}

double RationalityTerm::lower_bound(
    Interval sigma, const std::vector<std::vector<Interval>>& strategies,
    std::span<const Interval> payoffs) const {
  const int n = indexer_.num_players();
  const int k = indexer_.num_actions(player_);
  std::vector<Interval> e(k);
  for (int j = 0; j < k; ++j) {
    Interval ep = Interval::point(0.0);
    for (std::size_t p = 0; p < indexer_.num_profiles(); ++p) {
      if (!included_[p] || indexer_.action_of(p, player_) != j) continue;
      Interval t = Interval::point(1.0);
      for (int o = 0; o < n; ++o) {
        if (o == player_) continue;
        t = mul(t, strategies[o][indexer_.action_of(p, o)]);
      }
      ep = add(ep, mul(t, payoffs[p]));
    }
    e[j] = scaled_exp(ep, lambda_);
  }
  Interval others = Interval::point(0.0);
  for (int j = 0; j < k; ++j) {
    if (j != action_) others = add(others, e[j]);
  }
  // g = (1 − σ)·E_k − σ·O is increasing in E_k, decreasing in O and σ.
  const Interval ek = e[action_];
  const double hi = (1.0 - sigma.lo) * ek.hi - sigma.lo * others.lo;
  const double lo = (1.0 - sigma.hi) * ek.lo - sigma.hi * others.hi;
  return gap_bound(lo, hi, alpha_, ek.hi + others.hi);
}

double rationality_cost(double sigma,
                        const std::vector<std::vector<double>>& strategies,
                        std::span<const double> payoffs,
                        const RationalityTerm& term) {
  return term.cost(sigma, strategies, payoffs);
}

RationalityCost::RationalityCost(RationalityTerm term)
    : RationalityCost(std::vector<RationalityTerm>{std::move(term)}) {}

RationalityCost::RationalityCost(std::vector<RationalityTerm> terms)
    : terms_(std::move(terms)) {
  if (terms_.empty()) throw ArgumentError("rationality cost without terms");
  const RationalityTerm& first = terms_.front();
  for (const RationalityTerm& t : terms_) {
    if (t.player() != first.player() || !(t.indexer() == first.indexer()) ||
        t.included() != first.included() || t.lambda() != first.lambda() ||
        t.alpha() != first.alpha()) {
      throw ArgumentError("rationality terms must share player and settings");
    }
  }
  for (std::size_t p = 0; p < first.included().size(); ++p) {
    if (first.included()[p]) profile_slots_.push_back(static_cast<int>(p));
  }
}

template <typename T>
std::size_t RationalityCost::unpack_strategies(
    std::span<const T> values, const T& zero,
    std::vector<std::vector<T>>& strategies) const {
  const auto& indexer = terms_.front().indexer();
  strategies.assign(indexer.num_players(), {});
  std::size_t next = terms_.size();
  for (int o = 0; o < indexer.num_players(); ++o) {
    strategies[o].assign(indexer.num_actions(o), zero);
    if (o == terms_.front().player()) continue;
    for (auto& s : strategies[o]) s = values[next++];
  }
  return next;
}

double RationalityCost::cost(std::span<const double> values) const {
  std::vector<std::vector<double>> strategies;
  std::size_t next = unpack_strategies(values, 0.0, strategies);
  std::vector<double> payoffs(terms_.front().indexer().num_profiles(), 0.0);
  for (int p : profile_slots_) payoffs[p] = values[next++];
  double total = 0.0;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    const double c = terms_[t].cost(values[t], strategies, payoffs);
    total = t == 0 ? c : total + c;
  }
  return total;
}

double RationalityCost::lower_bound(std::span<const Interval> box) const {
  std::vector<std::vector<Interval>> strategies;
  std::size_t next = unpack_strategies(box, Interval::point(0.0), strategies);
  std::vector<Interval> payoffs(terms_.front().indexer().num_profiles(),
                                Interval::point(0.0));
  for (int p : profile_slots_) payoffs[p] = box[next++];
  double total = 0.0;
  for (std::size_t t = 0; t < terms_.size(); ++t) {
    total += terms_[t].lower_bound(box[t], strategies, payoffs);
  }
  return total;
}

double RationalityCost::lower_bound(std::span<const Interval> box,
                                    std::span<const UnaryView> unaries) const {
  if (auto exact = two_action_minimum(box, unaries)) return *exact;
  return CostFunction::lower_bound(box, unaries);
}

std::optional<double> RationalityCost::two_action_minimum(
    std::span<const Interval> box, std::span<const UnaryView> unaries) const {
  // Rows are enumerated only up to this many joint payoff values.
  constexpr double kRowCap = 4096;
  const RationalityTerm& first = terms_.front();
  const auto& indexer = first.indexer();
  const int player = first.player();
  if (indexer.num_actions(player) != 2 || unaries.size() != box.size()) {
    return std::nullopt;
  }
  const std::size_t payoff_start = box.size() - profile_slots_.size();
  for (std::size_t s = 0; s < payoff_start; ++s) {
    if (box[s].lo != box[s].hi) return std::nullopt;
  }
  std::vector<std::vector<double>> strategies;
  {
    std::vector<double> fixed(payoff_start);
    for (std::size_t s = 0; s < payoff_start; ++s) fixed[s] = box[s].lo;
    unpack_strategies(std::span<const double>(fixed), 0.0, strategies);
  }

  // Every (exp(λ·EP_j), unary cost) reachable in row j, EP_j summed exactly
  // as RationalityTerm::cost does.
  struct Entry {
    double e;
    double cost;
  };
  auto row_entries = [&](int j) -> std::optional<std::vector<Entry>> {
    struct Slot {
      double weight;  // opponent probability product; NaN for one player
      std::size_t position;
      bool free;
    };
    std::vector<Slot> slots;
    double combos = 1.0;
    for (std::size_t r = 0; r < profile_slots_.size(); ++r) {
      const std::size_t p = profile_slots_[r];
      if (indexer.action_of(p, player) != j) continue;
      double t = std::numeric_limits<double>::quiet_NaN();
      bool first_factor = true;
      for (int o = 0; o < indexer.num_players(); ++o) {
        if (o == player) continue;
        const double s = strategies[o][indexer.action_of(p, o)];
        t = first_factor ? s : t * s;
        first_factor = false;
      }
      const std::size_t position = payoff_start + r;
      const bool free = box[position].lo != box[position].hi;
      if (free) {
        if (unaries[position].values.empty()) return std::nullopt;
        combos *= static_cast<double>(unaries[position].values.size());
      }
      slots.push_back({t, position, free});
    }
    if (combos > kRowCap) return std::nullopt;

    std::vector<std::size_t> idx(slots.size(), 0);
    std::vector<Entry> entries;
    while (true) {
      bool any = false;
      double ep = 0.0, cost = 0.0;
      for (std::size_t q = 0; q < slots.size(); ++q) {
        double u = box[slots[q].position].lo;
        if (slots[q].free) {
          const UnaryView& view = unaries[slots[q].position];
          u = view.values[idx[q]];
          if (!view.costs.empty()) cost += view.costs[idx[q]];
        }
        const double x = std::isnan(slots[q].weight) ? u : slots[q].weight * u;
        ep = any ? ep + x : x;
        any = true;
      }
      entries.push_back({std::exp(first.lambda() * ep), cost});
      std::size_t q = slots.size();
      while (q > 0) {
        if (slots[q - 1].free &&
            ++idx[q - 1] < unaries[slots[q - 1].position].values.size()) {
          break;
        }
        idx[q - 1] = 0;
        --q;
      }
      if (q == 0) break;
    }
    return entries;
  };

  auto rows_a = row_entries(0);
  if (!rows_a) return std::nullopt;
  auto rows_b = row_entries(1);
  if (!rows_b) return std::nullopt;
  auto& b = *rows_b;
  std::sort(b.begin(), b.end(),
            [](const Entry& x, const Entry& y) { return x.e < y.e; });
  const std::size_t n = b.size();

  // With A = E_0 fixed, term t is α·|p_t + q_t·B|: for action 0,
  // p = (1 − σ)A, q = −σ; for action 1, p = −σA, q = 1 − σ. Between the
  // points where the terms change sign the total is α(P + Q·B); below every
  // sign change Q = −Σ|q_t|, above every one Q = +Σ|q_t|.
  const double alpha = first.alpha();
  const std::size_t num_terms = terms_.size();
  std::vector<double> q(num_terms);
  double slope = 0.0;
  for (std::size_t t = 0; t < num_terms; ++t) {
    const double sigma = box[t].lo;
    q[t] = terms_[t].action() == 0 ? -sigma : 1.0 - sigma;
    slope += std::abs(q[t]);
  }
  std::vector<double> below(n + 1, std::numeric_limits<double>::infinity());
  std::vector<double> above(n + 1, std::numeric_limits<double>::infinity());
  for (std::size_t r = 0; r < n; ++r) {
    below[r + 1] = std::min(below[r], b[r].cost - alpha * slope * b[r].e);
  }
  for (std::size_t r = n; r-- > 0;) {
    above[r] = std::min(above[r + 1], b[r].cost + alpha * slope * b[r].e);
  }
  // Range minima of the row-1 costs, for the regions between sign changes.
  std::vector<std::vector<double>> sparse{{}};
  if (num_terms > 1) {
    for (const Entry& e : b) sparse[0].push_back(e.cost);
    for (std::size_t w = 1; 2 * w <= n; w *= 2) {
      const auto& prev = sparse.back();
      std::vector<double> next(n - 2 * w + 1);
      for (std::size_t r = 0; r < next.size(); ++r) {
        next[r] = std::min(prev[r], prev[r + w]);
      }
      sparse.push_back(std::move(next));
    }
  }
  auto range_min = [&](std::size_t lo, std::size_t hi) {  // [lo, hi), non-empty
    std::size_t level = 0;
    while ((std::size_t{2} << level) <= hi - lo) ++level;
    return std::min(sparse[level][lo], sparse[level][hi - (std::size_t{1} << level)]);
  };
  auto sign = [](double x) { return (x > 0.0) - (x < 0.0); };

  double best = std::numeric_limits<double>::infinity();
  double largest = b.back().e;
  std::vector<double> p(num_terms);
  std::vector<std::pair<double, std::size_t>> flips;
  std::vector<std::size_t> cut;
  for (const Entry& a : *rows_a) {
    largest = std::max(largest, a.e);
    flips.clear();
    for (std::size_t t = 0; t < num_terms; ++t) {
      const double sigma = box[t].lo;
      p[t] = terms_[t].action() == 0 ? (1.0 - sigma) * a.e : -sigma * a.e;
      if (q[t] != 0.0) flips.emplace_back(-p[t] / q[t], t);
    }
    std::sort(flips.begin(), flips.end());
    cut.assign(1, 0);
    for (const auto& [f, t] : flips) {
      cut.push_back(static_cast<std::size_t>(
          std::partition_point(b.begin(), b.end(),
                               [&](const Entry& x) { return x.e < f; }) -
          b.begin()));
    }
    cut.push_back(n);
    for (std::size_t region = 0; region + 1 < cut.size(); ++region) {
      const std::size_t lo = cut[region], hi = cut[region + 1];
      if (lo >= hi) continue;
      double big_p = 0.0, big_q = 0.0;
      for (std::size_t t = 0; t < num_terms; ++t) {
        int s = sign(p[t]);
        if (q[t] != 0.0) {
          const bool past = std::find_if(flips.begin(), flips.begin() + region,
                                         [&](const auto& f) {
                                           return f.second == t;
                                         }) != flips.begin() + region;
          s = past ? sign(q[t]) : -sign(q[t]);
        }
        big_p += s * p[t];
        big_q += s * q[t];
      }
      double rest;
      if (region == 0) {
        rest = below[hi];
      } else if (region + 2 == cut.size()) {
        rest = above[lo];
      } else {
        rest = range_min(lo, hi) +
               alpha * std::min(big_q * b[lo].e, big_q * b[hi - 1].e);
      }
      best = std::min(best, a.cost + alpha * big_p + rest);
    }
  }
  const double margin =
      alpha * kBoundMargin * 2.0 * static_cast<double>(num_terms) * largest;
  return std::max(0.0, best - margin);
}

nlohmann::json RationalityCost::parameters() const {
  const RationalityTerm& first = terms_.front();
  std::vector<int> actions;
  for (const auto& t : terms_) actions.push_back(t.action());
  return {{"player", first.player()},
          {"actions", actions},
          {"lambda", first.lambda()},
          {"alpha", first.alpha()},
          {"profiles", profile_slots_}};
}

double QuantalGapCost::cost(std::span<const double> values) const {
  return alpha_ * std::abs(values[1] - values[0] * values[2]);
}

double QuantalGapCost::lower_bound(std::span<const Interval> box) const {
  // E − σ·Z with σ, Z ≥ 0.
  const Interval sigma = box[0], e = box[1], z = box[2];
  const double hi = e.hi - sigma.lo * z.lo;
  const double lo = e.lo - sigma.hi * z.hi;
  return gap_bound(lo, hi, alpha_, e.hi + sigma.hi * z.hi);
}

std::vector<double> strategy_grid(const LearnerConfig& config) {
  const int n = config.strategy_divisions();
  std::vector<double> grid(n + 1);
  for (int j = 0; j <= n; ++j) grid[j] = static_cast<double>(j) / n;
  return grid;
}

std::vector<double> payoff_grid(double lo, double hi, double step) {
  if (!(step > 0.0)) throw ArgumentError("payoff step must be positive");
  if (!std::isfinite(lo) || !std::isfinite(hi) || hi < lo) {
    throw ArgumentError("invalid payoff range");
  }
  std::vector<double> grid;
  for (long j = 0;; ++j) {
    const double v = lo + static_cast<double>(j) * step;
    // A point within a rounding error of hi is hi itself.
    if (!(v < hi - 1e-9 * step)) break;
    grid.push_back(v);
  }
  grid.push_back(hi);
  return grid;
}

CompiledProblem build_wcsp(const Dataset& dataset, const LearnerConfig& config) {
  config.validate();
  const EmpiricalCounts counts = empirical_counts(dataset);
  const ProfileIndexer& indexer = dataset.indexer();
  const int n = indexer.num_players();
  const std::size_t num_profiles = indexer.num_profiles();

  VariableLayout layout;
  layout.indexer = indexer;
  layout.strategy_grid = strategy_grid(config);
  layout.payoff_min = std::numeric_limits<double>::infinity();
  layout.payoff_max = -std::numeric_limits<double>::infinity();
  for (const auto& sample : dataset.samples()) {
    for (double v : sample.observed_payoffs) {
      layout.payoff_min = std::min(layout.payoff_min, v);
      layout.payoff_max = std::max(layout.payoff_max, v);
    }
  }
  layout.payoff_grid =
      payoff_grid(layout.payoff_min, layout.payoff_max, config.payoff_step);

  WcspBuilder builder;
  auto aux = [&](VarIndex v) {
    layout.auxiliary.push_back(v);
    return v;
  };

  // Decision variables: strategies, then payoffs of observed profiles.
  layout.strategy.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < indexer.num_actions(i); ++k) {
      layout.strategy[i].push_back(
          builder.add_variable(indexed("sigma", {i, k}), layout.strategy_grid));
    }
  }
  layout.payoff.assign(n, std::vector<std::optional<VarIndex>>(num_profiles));
  for (int i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < num_profiles; ++p) {
      if (!counts.observed(p)) continue;
      layout.payoff[i][p] = builder.add_variable(
          indexed("u", {i}) + "[" + profile_label(indexer, p) + "]",
          layout.payoff_grid);
    }
  }

  // Strategy likelihood.
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < indexer.num_actions(i); ++k) {
      const int count = counts.action_counts()[i][k];
      std::vector<double> costs;
      for (double s : layout.strategy_grid) {
        costs.push_back(strategy_ml_cost(count, s, config.log_zero_cap));
      }
      builder.add_soft({layout.strategy[i][k]},
                       std::make_shared<TableCost>(
                           std::vector<std::vector<double>>{layout.strategy_grid}, std::move(costs)));
    }
  }

  // Simplex: one relation, or a chain of partial sums ending in a binary one.
  const auto sum_to_one = std::make_shared<SumEquals>(1.0);
  for (int i = 0; i < n; ++i) {
    const auto& sigma = layout.strategy[i];
    if (!config.decomposed || sigma.size() <= 2) {
      builder.add_hard(sigma, sum_to_one);
      continue;
    }
    VarIndex partial = sigma[0];
    for (std::size_t k = 1; k + 1 < sigma.size(); ++k) {
      partial = aux(builder.add_functional(
          "s[" + std::to_string(i) + "]#" + std::to_string(k),
          Functional(FunctionalOp::kSum), {partial, sigma[k]}));
    }
    builder.add_hard({partial, sigma.back()}, sum_to_one);
  }

  // Payoff likelihood.
  for (int i = 0; i < n; ++i) {
    for (std::size_t p = 0; p < num_profiles; ++p) {
      if (!layout.payoff[i][p]) continue;
      const auto& obs = counts.observations(p, i);
      std::vector<double> costs;
      for (double u : layout.payoff_grid) {
        costs.push_back(payoff_ml_cost(obs, u, config.noise_stddev));
      }
      builder.add_soft({*layout.payoff[i][p]},
                       std::make_shared<TableCost>(
                           std::vector<std::vector<double>>{layout.payoff_grid}, std::move(costs)));
    }
  }

  if (!config.include_rationality) {
    return {std::move(builder).build(), std::move(layout)};
  }

  std::vector<char> included(num_profiles);
  for (std::size_t p = 0; p < num_profiles; ++p) included[p] = counts.observed(p);

  for (int i = 0; i < n; ++i) {
    const int k_i = indexer.num_actions(i);
    std::vector<int> terms;
    for (int k = 0; k < k_i; ++k) {
      if (!config.rationality_for_played_actions_only ||
          counts.action_counts()[i][k] > 0) {
        terms.push_back(k);
      }
    }
    if (terms.empty()) continue;

    // The monolithic form of the given terms: their σ_i(k), opponents'
    // strategies, then player i's included payoffs.
    auto monolithic = [&](const std::vector<int>& actions) {
      Surrogate form;
      std::vector<RationalityTerm> parts;
      for (int k : actions) {
        form.scope.push_back(layout.strategy[i][k]);
        parts.emplace_back(indexer, i, k, included, config.lambda, config.alpha);
      }
      for (int o = 0; o < n; ++o) {
        if (o == i) continue;
        form.scope.insert(form.scope.end(), layout.strategy[o].begin(),
                          layout.strategy[o].end());
      }
      for (std::size_t p = 0; p < num_profiles; ++p) {
        if (included[p]) form.scope.push_back(*layout.payoff[i][p]);
      }
      form.function = std::make_shared<RationalityCost>(std::move(parts));
      return form;
    };
    // The player's terms are bounded jointly while all are open.
    std::vector<std::size_t> members;
    auto group = [&] {
      if (members.size() > 1) {
        builder.add_bound_group(std::move(members), monolithic(terms));
      }
    };

    if (!config.decomposed) {
      for (int k : terms) {
        Surrogate form = monolithic({k});
        members.push_back(
            builder.add_soft(std::move(form.scope), std::move(form.function)));
      }
      group();
      continue;
    }

    // Decomposed chain, evaluated in the same order as RationalityTerm::cost.
    // Opponent-probability products are shared across player i's actions,
    // keyed by the profile with player i's action set to 0.
    std::map<std::size_t, VarIndex> opponent_product;
    std::vector<VarIndex> e(k_i);
    for (int j = 0; j < k_i; ++j) {
      std::optional<VarIndex> ep;
      int links = 0;
      for (std::size_t p = 0; p < num_profiles; ++p) {
        if (!included[p] || indexer.action_of(p, i) != j) continue;
        const std::string label = profile_label(indexer, p);
        VarIndex x = *layout.payoff[i][p];
        if (n > 1) {
          auto joint = indexer.joint_action(p);
          joint[i] = 0;
          const std::size_t key = indexer.index(joint);
          auto it = opponent_product.find(key);
          if (it == opponent_product.end()) {
            std::optional<VarIndex> t;
            int factors = 0;
            for (int o = 0; o < n; ++o) {
              if (o == i) continue;
              const VarIndex s = layout.strategy[o][indexer.action_of(p, o)];
              if (!t) {
                t = s;
              } else {
                t = aux(builder.add_functional(
                    indexed("q", {i}) + "[" + profile_label(indexer, key) +
                        "]#" + std::to_string(++factors),
                    Functional(FunctionalOp::kProduct), {*t, s}));
              }
            }
            it = opponent_product.emplace(key, *t).first;
          }
          x = aux(builder.add_functional(indexed("x", {i}) + "[" + label + "]",
                                         Functional(FunctionalOp::kProduct),
                                         {it->second, x}));
        }
        if (!ep) {
          ep = x;
        } else {
          ep = aux(builder.add_functional(
              indexed("ep", {i, j}) + "#" + std::to_string(++links),
              Functional(FunctionalOp::kSum), {*ep, x}));
        }
      }
      if (!ep) {
        e[j] = aux(builder.add_variable(indexed("e", {i, j}), {1.0}));
      } else {
        e[j] = aux(builder.add_functional(
            indexed("e", {i, j}), Functional(FunctionalOp::kScaledExp, config.lambda),
            {*ep}));
      }
    }
    VarIndex z = e[0];
    for (int j = 1; j < k_i; ++j) {
      z = aux(builder.add_functional(
          "z[" + std::to_string(i) + "]#" + std::to_string(j),
          Functional(FunctionalOp::kSum), {z, e[j]}));
    }
    const auto gap = std::make_shared<QuantalGapCost>(config.alpha);
    // The monolithic evaluator rides along as the bounding surrogate.
    for (int k : terms) {
      members.push_back(
          builder.add_soft({layout.strategy[i][k], e[k], z}, gap, monolithic({k})));
    }
    group();
  }
  return {std::move(builder).build(), std::move(layout)};
}

Estimate extract_estimate(const VariableLayout& layout, const Solution& solution,
                          const Dataset& dataset) {
  const ProfileIndexer& indexer = layout.indexer;
  if (indexer.actions() != dataset.actions()) {
    throw ArgumentError("layout does not match dataset");
  }
  const int n = indexer.num_players();
  const double midpoint = 0.5 * (layout.payoff_min + layout.payoff_max);
  std::vector<std::vector<double>> strategies(n), payoffs(n);
  std::vector<std::vector<bool>> unconstrained(n);
  for (int i = 0; i < n; ++i) {
    for (VarIndex v : layout.strategy[i]) {
      strategies[i].push_back(solution.values.at(v));
    }
    for (std::size_t p = 0; p < indexer.num_profiles(); ++p) {
      const auto& var = layout.payoff[i][p];
      payoffs[i].push_back(var ? solution.values.at(*var) : midpoint);
      unconstrained[i].push_back(!var.has_value());
    }
  }
  Estimate estimate;
  estimate.game = Game(indexer.actions(), std::move(payoffs));
  estimate.unconstrained = std::move(unconstrained);
  estimate.profile = MixedProfile(std::move(strategies));
  estimate.payoff_min = layout.payoff_min;
  estimate.payoff_max = layout.payoff_max;
  return estimate;
}

}  // namespace qrelearn
