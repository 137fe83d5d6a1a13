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

#include "qrelearn/equilibrium.h"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <string>

#include "qrelearn/errors.h"

namespace qrelearn {
namespace {

using Wide = long double;
using WideProfile = std::vector<std::vector<Wide>>;

constexpr double kMinDamping = 1.0 / 64.0;
constexpr double kNashTolerance = 1e-9;

// Logit response of every player to `sigma`, in extended precision.
WideProfile logit_map(const Game& game, const WideProfile& sigma, Wide lambda) {
  const int n = game.num_players();
  WideProfile values(n);
  for (int i = 0; i < n; ++i) values[i].assign(game.num_actions(i), Wide{0});
  std::vector<int> joint(n, 0);
  for (std::size_t p = 0; p < game.num_profiles(); ++p) {
    for (int i = 0; i < n; ++i) {
      Wide weight{1};
      for (int j = 0; j < n; ++j) {
        if (j != i) weight *= sigma[j][joint[j]];
      }
      values[i][joint[i]] += weight * static_cast<Wide>(game.payoff(i, p));
    }
    for (int j = n - 1; j >= 0; --j) {
      if (++joint[j] < game.num_actions(j)) break;
      joint[j] = 0;
    }
  }
  for (auto& row : values) {
    const Wide top = *std::max_element(row.begin(), row.end());
    Wide total{0};
    for (Wide& v : row) {
      v = std::exp(lambda * (v - top));
      total += v;
    }
    for (Wide& v : row) v /= total;
  }
  return values;
}

Wide sup_distance(const WideProfile& a, const WideProfile& b) {
  Wide worst{0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t k = 0; k < a[i].size(); ++k) {
      worst = std::max(worst, std::abs(a[i][k] - b[i][k]));
    }
  }
  return worst;
}

void damped_update(WideProfile& sigma, const WideProfile& response, Wide d) {
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    for (std::size_t k = 0; k < sigma[i].size(); ++k) {
      sigma[i][k] = (1 - d) * sigma[i][k] + d * response[i][k];
    }
  }
}

// Iterates to a step size of at most `tolerance`. Returns the last step size;
// `sigma` is only updated on success.
bool settle(const Game& game, WideProfile& sigma, Wide lambda, Wide damping,
            int max_iters, Wide tolerance, Wide& last_step) {
  WideProfile current = sigma;
  for (int iter = 0; iter < max_iters; ++iter) {
    const WideProfile response = logit_map(game, current, lambda);
    last_step = sup_distance(response, current);
    if (!std::isfinite(static_cast<double>(last_step))) return false;
    if (last_step <= tolerance) {
      sigma = response;
      return true;
    }
    damped_update(current, response, damping);
  }
  return false;
}

std::vector<Wide> flatten(const WideProfile& sigma) {
  std::vector<Wide> x;
  for (const auto& row : sigma) x.insert(x.end(), row.begin(), row.end());
  return x;
}

WideProfile unflatten(const std::vector<Wide>& x, const WideProfile& shape) {
  WideProfile sigma = shape;
  std::size_t c = 0;
  for (auto& row : sigma) {
    for (Wide& v : row) v = x[c++];
  }
  return sigma;
}

// Solves a·d = b in place by Gaussian elimination with partial pivoting.
// Returns false on a (numerically) singular matrix.
bool solve_linear(std::vector<std::vector<Wide>>& a, std::vector<Wide>& b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < Wide{1e-12}) return false;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Wide f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t r = n; r-- > 0;) {
    for (std::size_t c = r + 1; c < n; ++c) b[r] -= a[r][c] * b[c];
    b[r] /= a[r][r];
  }
  return true;
}

// Newton's method on logit(σ) − σ = 0 with a central-difference Jacobian.
// Keeps a step only while it shrinks the fixed-point gap.
WideProfile newton_polish(const Game& game, const WideProfile& start, Wide lambda) {
  constexpr Wide kStep = 1e-7L;
  auto gap = [&](const std::vector<Wide>& x) {
    std::vector<Wide> f = flatten(logit_map(game, unflatten(x, start), lambda));
    for (std::size_t c = 0; c < f.size(); ++c) f[c] -= x[c];
    return f;
  };
  auto norm = [](const std::vector<Wide>& v) {
    Wide m{0};
    for (Wide e : v) m = std::max(m, std::abs(e));
    return m;
  };
  std::vector<Wide> x = flatten(start);
  std::vector<Wide> f = gap(x);
  const std::size_t n = x.size();
  for (int iter = 0; iter < 20 && norm(f) > 0; ++iter) {
    std::vector<std::vector<Wide>> jacobian(n, std::vector<Wide>(n));
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<Wide> up = x, down = x;
      up[c] += kStep;
      down[c] -= kStep;
      const std::vector<Wide> fu = gap(up), fd = gap(down);
      for (std::size_t r = 0; r < n; ++r) jacobian[r][c] = (fu[r] - fd[r]) / (2 * kStep);
    }
    std::vector<Wide> delta = f;
    for (Wide& d : delta) d = -d;
    if (!solve_linear(jacobian, delta)) break;
    std::vector<Wide> next = x;
    for (std::size_t c = 0; c < n; ++c) next[c] += delta[c];
    bool inside = true;
    for (Wide v : next) inside = inside && v >= 0 && v <= 1;
    if (!inside) break;
    const std::vector<Wide> next_f = gap(next);
    if (!(norm(next_f) < norm(f))) break;
    x = std::move(next);
    f = next_f;
  }
  return logit_map(game, unflatten(x, start), lambda);
}

MixedProfile to_profile(const WideProfile& sigma) {
  std::vector<std::vector<double>> out(sigma.size());
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    Wide total{0};
    for (Wide p : sigma[i]) total += p;
    for (Wide p : sigma[i]) {
      out[i].push_back(std::clamp(static_cast<double>(p / total), 0.0, 1.0));
    }
  }
  return MixedProfile(std::move(out));
}

}  // namespace

void LqreConfig::validate() const {
  if (!(lambda_target >= 0.0) || !std::isfinite(lambda_target)) {
    throw ArgumentError("lambda_target must be finite and nonnegative");
  }
  if (path_steps <= 0) throw ArgumentError("path_steps must be positive");
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw ArgumentError("damping must lie in (0, 1]");
  }
  if (max_iters_per_step <= 0) {
    throw ArgumentError("max_iters_per_step must be positive");
  }
  if (!(tolerance > 0.0)) throw ArgumentError("tolerance must be positive");
}

MixedProfile solve_lqre(const Game& game, const LqreConfig& config) {
  config.validate();
  if (config.lambda_target == 0.0) return MixedProfile::uniform(game.actions());

  WideProfile sigma(game.num_players());
  for (int i = 0; i < game.num_players(); ++i) {
    sigma[i].assign(game.num_actions(i), Wide{1} / game.num_actions(i));
  }

  const Wide target = config.lambda_target;
  for (int step = 1; step <= config.path_steps; ++step) {
    const Wide lambda = target * step / config.path_steps;
    Wide damping = config.damping;
    Wide last_step{0};
    while (!settle(game, sigma, lambda, damping, config.max_iters_per_step,
                   config.tolerance, last_step)) {
      damping /= 2;
      if (damping < kMinDamping) {
        throw ConvergenceError(
            "logit fixed-point iteration did not converge at lambda " +
                std::to_string(static_cast<double>(lambda)),
            static_cast<double>(lambda), static_cast<double>(last_step));
      }
    }
  }

  // Polish at the target until the step reaches extended-precision noise or
  // stops shrinking.
  Wide best_step = 1;
  int stalled = 0;
  WideProfile polished = sigma;
  for (int iter = 0; iter < config.max_iters_per_step && stalled < 50; ++iter) {
    const WideProfile response = logit_map(game, polished, target);
    const Wide step = sup_distance(response, polished);
    if (step < best_step) {
      best_step = step;
      sigma = response;
      stalled = 0;
    } else {
      ++stalled;
    }
    if (step <= 8 * LDBL_EPSILON) break;
    damped_update(polished, response, static_cast<Wide>(config.damping));
  }
  // Where the damped map stalls, Newton finishes the job.
  const WideProfile refined = newton_polish(game, sigma, target);
  if (sup_distance(logit_map(game, refined, target), refined) <=
      sup_distance(logit_map(game, sigma, target), sigma)) {
    sigma = refined;
  }
  return to_profile(sigma);
}

double max_deviation_gain(const Game& game, const MixedProfile& profile) {
  profile.check_compatible(game);
  double worst = 0.0;
  for (int i = 0; i < game.num_players(); ++i) {
    const std::vector<double> values = expected_payoffs(game, profile, i);
    double current = 0.0;
    for (int k = 0; k < game.num_actions(i); ++k) {
      current += profile.probability(i, k) * values[k];
    }
    for (double v : values) worst = std::max(worst, v - current);
  }
  return worst;
}

std::vector<MixedProfile> solve_nash_2x2(const Game& game) {
  if (game.num_players() != 2 || game.num_actions(0) != 2 ||
      game.num_actions(1) != 2) {
    throw ArgumentError("solve_nash_2x2 needs a 2x2 game");
  }
  // Row player payoffs a(r, c), column player payoffs b(r, c).
  auto a = [&](int r, int c) { return game.payoff(0, r * 2 + c); };
  auto b = [&](int r, int c) { return game.payoff(1, r * 2 + c); };

  std::vector<MixedProfile> equilibria;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const bool row_best = a(r, c) + kNashTolerance >= a(1 - r, c);
      const bool col_best = b(r, c) + kNashTolerance >= b(r, 1 - c);
      if (row_best && col_best) {
        std::vector<double> row(2, 0.0), col(2, 0.0);
        row[r] = 1.0;
        col[c] = 1.0;
        equilibria.emplace_back(std::vector<std::vector<double>>{row, col});
      }
    }
  }

  // p = P(row 0) makes the column player indifferent; q = P(col 0) makes the
  // row player indifferent.
  const double p_denom = b(0, 0) - b(1, 0) - b(0, 1) + b(1, 1);
  const double q_denom = a(0, 0) - a(0, 1) - a(1, 0) + a(1, 1);
  if (p_denom != 0.0 && q_denom != 0.0) {
    const double p = (b(1, 1) - b(1, 0)) / p_denom;
    const double q = (a(1, 1) - a(0, 1)) / q_denom;
    if (p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0) {
      MixedProfile mixed(std::vector<std::vector<double>>{{p, 1.0 - p},
                                                          {q, 1.0 - q}});
      if (max_deviation_gain(game, mixed) <= kNashTolerance) {
        equilibria.push_back(std::move(mixed));
      }
    }
  }
  if (equilibria.empty()) {
    throw InternalError("no Nash equilibrium found in a 2x2 game");
  }
  return equilibria;
}

}  // namespace qrelearn
