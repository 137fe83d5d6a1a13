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

// Depth-first branch and bound for Wcsp.
//
// Only decision variables are branched on. A functional variable is filled
// in as soon as every decision variable it transitively depends on (its
// decision ancestors) is assigned. A soft or hard constraint is "complete"
// once all of its decision ancestors are assigned; until then it contributes
// a per-constraint bound: the exact minimum over its completions when those
// are few enough to enumerate, else the cost function's bound over the hull
// of every unassigned value (stated on the constraint's surrogate when it
// has one).
//
// Unary costs of a decision variable are folded into the bound of one
// non-unary soft constraint depending on it (its owner), so that bound sees
// the trade-off between them; the unary constraints themselves bound at 0
// until their variable is assigned. While every member of a bound group is
// open, the group's surrogate bounds the members' sum (with the unaries any
// member owns) on the first member and the others bound at 0. Both schemes
// partition the objective, so the summed bound stays admissible.
//
// When the constraints still open at a node split the unassigned variables
// into independent groups, each group is searched on its own and the optima
// are added.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>

#include "qrelearn/errors.h"
#include "qrelearn/wcsp.h"

namespace qrelearn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Relative slack taken off bounds that are computed along a different
// floating-point path than the costs they bound.
constexpr double kBoundSlack = 1e-12;

using Picks = std::vector<std::pair<VarIndex, double>>;

std::vector<VarIndex> merge_sorted(const std::vector<VarIndex>& a,
                                   const std::vector<VarIndex>& b) {
  std::vector<VarIndex> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

const SoftTerm* soft_term(const Constraint& con) {
  return std::get_if<SoftTerm>(&con.term);
}

bool is_plain_unary(const Wcsp& wcsp, const Constraint& con) {
  const SoftTerm* soft = soft_term(con);
  return soft && !soft->surrogate && con.scope.size() == 1 &&
         wcsp.variable(con.scope[0]).is_decision();
}

// Variables a soft constraint's bound is stated over.
const std::vector<VarIndex>& bounding_scope(const Constraint& con) {
  const SoftTerm* soft = soft_term(con);
  return soft && soft->surrogate ? soft->surrogate->scope : con.scope;
}

bool first_occurrence(const std::vector<VarIndex>& scope, std::size_t i) {
  return std::find(scope.begin(), scope.begin() + i, scope[i]) ==
         scope.begin() + i;
}

// Structure derived once per instance.
struct Plan {
  explicit Plan(const Wcsp& wcsp);

  // Soft and hard constraints, in declaration order.
  std::vector<std::size_t> open_constraints;
  // Per variable: decision ancestors (a decision variable is its own).
  std::vector<std::vector<VarIndex>> var_ancestors;
  // Per constraint: decision ancestors of its scope, and the functional
  // variables needed to evaluate its scope, in topological order.
  std::vector<std::vector<VarIndex>> ancestors;
  std::vector<std::vector<VarIndex>> closure;
  // Per decision variable: open constraints and functional variables that
  // depend on it.
  std::vector<std::vector<std::size_t>> touching;
  std::vector<std::vector<VarIndex>> dependents;
  // Per decision variable: domain indices by ascending unary cost, the summed
  // unary costs, and the constraint whose bound absorbs them.
  std::vector<std::vector<std::size_t>> value_order;
  std::vector<std::vector<double>> unary_costs;
  std::vector<std::optional<std::size_t>> owner;
  // Per constraint: a unary soft constraint whose variable has an owner.
  std::vector<char> absorbed;
  // Per constraint: its bound group; per group: the members' ancestors.
  std::vector<std::optional<std::size_t>> group_of;
  std::vector<std::vector<VarIndex>> group_ancestors;
  // Per decision variable: group members whose bound depends on it although
  // it is not their ancestor.
  std::vector<std::vector<std::size_t>> extra_touching;
  // Per constraint: the variables that tie it together when splitting.
  std::vector<const std::vector<VarIndex>*> linked;
};

Plan::Plan(const Wcsp& wcsp)
    : var_ancestors(wcsp.num_variables()),
      ancestors(wcsp.constraints().size()),
      closure(wcsp.constraints().size()),
      touching(wcsp.num_variables()),
      dependents(wcsp.num_variables()),
      value_order(wcsp.num_variables()),
      unary_costs(wcsp.num_variables()),
      owner(wcsp.num_variables()),
      absorbed(wcsp.constraints().size(), 0),
      group_of(wcsp.constraints().size()),
      group_ancestors(wcsp.bound_groups().size()),
      extra_touching(wcsp.num_variables()),
      linked(wcsp.constraints().size(), nullptr) {
  const auto& vars = wcsp.variables();
  const auto& cons = wcsp.constraints();
  for (VarIndex v = 0; v < vars.size(); ++v) {
    if (vars[v].is_decision()) {
      var_ancestors[v] = {v};
      continue;
    }
    for (VarIndex in : cons[*vars[v].defined_by].scope) {
      var_ancestors[v] = merge_sorted(var_ancestors[v], var_ancestors[in]);
    }
    for (VarIndex a : var_ancestors[v]) dependents[a].push_back(v);
  }

  std::vector<char> seen(vars.size(), 0);
  for (std::size_t c = 0; c < cons.size(); ++c) {
    if (cons[c].is_functional()) continue;
    open_constraints.push_back(c);
    std::vector<VarIndex> stack(cons[c].scope.begin(), cons[c].scope.end());
    std::vector<VarIndex> visited;
    while (!stack.empty()) {
      const VarIndex v = stack.back();
      stack.pop_back();
      if (seen[v]) continue;
      seen[v] = 1;
      visited.push_back(v);
      if (vars[v].is_decision()) continue;
      for (VarIndex in : cons[*vars[v].defined_by].scope) stack.push_back(in);
    }
    for (VarIndex v : visited) {
      seen[v] = 0;
      if (vars[v].is_decision()) {
        ancestors[c].push_back(v);
      } else {
        closure[c].push_back(v);
      }
    }
    std::sort(ancestors[c].begin(), ancestors[c].end());
    std::sort(closure[c].begin(), closure[c].end());
    for (VarIndex a : ancestors[c]) touching[a].push_back(c);
    linked[c] = &ancestors[c];
  }

  std::vector<char> has_unary(vars.size(), 0);
  for (VarIndex v : wcsp.decision_variables()) {
    const auto& domain = vars[v].domain;
    auto& unary = unary_costs[v];
    unary.assign(domain.size(), 0.0);
    for (std::size_t c : touching[v]) {
      if (!is_plain_unary(wcsp, cons[c])) continue;
      has_unary[v] = 1;
      for (std::size_t k = 0; k < domain.size(); ++k) {
        unary[k] += soft_term(cons[c])->function->cost(
            std::span<const double>(&domain[k], 1));
      }
    }
    auto& order = value_order[v];
    order.resize(domain.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return unary[a] < unary[b];
    });
  }

  for (std::size_t c : open_constraints) {
    if (!soft_term(cons[c]) || is_plain_unary(wcsp, cons[c])) continue;
    for (VarIndex v : bounding_scope(cons[c])) {
      if (vars[v].is_decision() && has_unary[v] && !owner[v] &&
          std::binary_search(ancestors[c].begin(), ancestors[c].end(), v)) {
        owner[v] = c;
      }
    }
  }
  for (std::size_t c : open_constraints) {
    absorbed[c] = is_plain_unary(wcsp, cons[c]) && owner[cons[c].scope[0]];
  }

  const auto& groups = wcsp.bound_groups();
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (std::size_t c : groups[g].members) {
      group_of[c] = g;
      group_ancestors[g] = merge_sorted(group_ancestors[g], ancestors[c]);
    }
    for (std::size_t c : groups[g].members) {
      linked[c] = &group_ancestors[g];
      for (VarIndex v : group_ancestors[g]) {
        if (!std::binary_search(ancestors[c].begin(), ancestors[c].end(), v)) {
          extra_touching[v].push_back(c);
        }
      }
    }
  }
}

class Search {
 public:
  Search(const Wcsp& wcsp, const Plan& plan, const SolverConfig& config)
      : wcsp_(wcsp),
        plan_(plan),
        config_(config),
        values_(wcsp.num_variables(), 0.0),
        assigned_(wcsp.num_variables(), 0),
        missing_var_(wcsp.num_variables(), 0),
        missing_con_(wcsp.constraints().size(), 0),
        bound_(wcsp.constraints().size(), 0.0),
        touch_stamp_(wcsp.constraints().size(), 0),
        position_(wcsp.num_variables(), 0),
        intervals_(wcsp.num_variables()) {
    for (VarIndex v = 0; v < wcsp.num_variables(); ++v) {
      missing_var_[v] = static_cast<int>(plan_.var_ancestors[v].size());
    }
    for (std::size_t c : plan_.open_constraints) {
      missing_con_[c] = static_cast<int>(plan_.ancestors[c].size());
    }
  }

  void assign(VarIndex x, double value) {
    values_[x] = value;
    assigned_[x] = 1;
    for (VarIndex f : plan_.dependents[x]) {
      if (--missing_var_[f] == 0) {
        values_[f] = evaluate_functional(f);
        assigned_[f] = 1;
      }
    }
    for (std::size_t c : plan_.touching[x]) --missing_con_[c];
  }

  void unassign(VarIndex x) {
    for (std::size_t c : plan_.touching[x]) ++missing_con_[c];
    for (VarIndex f : plan_.dependents[x]) {
      if (missing_var_[f]++ == 0) assigned_[f] = 0;
    }
    assigned_[x] = 0;
  }

  bool complete(std::size_t c) const { return missing_con_[c] == 0; }

  // Cost of a complete constraint; kInf for a violated hard constraint.
  double exact(std::size_t c) {
    const Constraint& con = wcsp_.constraints()[c];
    gather(con);
    return evaluate(con);
  }

  // Bound of an open constraint; kInf when a hard constraint has no support.
  double bound(std::size_t c) {
    const Constraint& con = wcsp_.constraints()[c];
    unassigned_.clear();
    double combos = 1.0;
    for (VarIndex a : plan_.ancestors[c]) {
      if (assigned_[a]) continue;
      unassigned_.push_back(a);
      combos *= static_cast<double>(wcsp_.variable(a).domain.size());
    }
    if (unassigned_.empty()) return exact(c);
    if (plan_.absorbed[c]) return 0.0;
    if (const auto g = plan_.group_of[c]; g && group_open(*g)) {
      const BoundGroup& group = wcsp_.bound_groups()[*g];
      if (group.members.front() != c) return 0.0;
      return function_bound(*group.surrogate.function, group.surrogate.scope,
                            [&](VarIndex v) {
                              return plan_.owner[v] &&
                                     plan_.group_of[*plan_.owner[v]] == g;
                            });
    }
    if (combos <= static_cast<double>(config_.enumeration_cap)) {
      return enumerate(c, con);
    }
    if (const SoftTerm* soft = soft_term(con); soft && soft->surrogate) {
      return function_bound(*soft->surrogate->function, soft->surrogate->scope,
                            [&](VarIndex v) { return plan_.owner[v] == c; });
    }
    return interval_bound(c, con);
  }

  void set_bound(std::size_t c, double b) { bound_[c] = b; }

  // Minimum of Σ cost over `cons` across assignments of `vars`, if below
  // `limit`; else kInf. `picks` receives the argmin. Bounds of `cons` must be
  // current.
  double solve_split(std::span<const VarIndex> vars,
                     std::span<const std::size_t> cons, double limit,
                     Picks& picks);

  std::uint64_t nodes() const { return nodes_; }
  bool aborted() const { return aborted_; }

 private:
  struct Component {
    std::vector<VarIndex> vars;
    std::vector<std::size_t> cons;
    double bound = 0.0;
  };

  double branch(std::span<const VarIndex> vars,
                std::span<const std::size_t> cons, double limit, Picks& picks);
  std::vector<Component> split(std::span<const VarIndex> vars,
                               std::span<const std::size_t> cons);

  bool group_open(std::size_t g) const {
    for (std::size_t m : wcsp_.bound_groups()[g].members) {
      if (complete(m)) return false;
    }
    return true;
  }

  void pick_free(std::span<const VarIndex> vars, Picks& picks) const {
    for (VarIndex v : vars) {
      picks.emplace_back(v, wcsp_.variable(v).domain[plan_.value_order[v][0]]);
    }
  }

  double evaluate_functional(VarIndex f) const {
    const Constraint& def = wcsp_.constraints()[*wcsp_.variable(f).defined_by];
    double args[2];
    for (std::size_t i = 0; i < def.scope.size(); ++i) {
      args[i] = values_[def.scope[i]];
    }
    return std::get<FunctionalTerm>(def.term)
        .function.evaluate(std::span<const double>(args, def.scope.size()));
  }

  void gather(const Constraint& con) {
    scoped_.clear();
    for (VarIndex v : con.scope) scoped_.push_back(values_[v]);
  }

  double evaluate(const Constraint& con) const {
    if (const SoftTerm* soft = soft_term(con)) {
      return soft->function->cost(scoped_);
    }
    return std::get<HardTerm>(con.term).relation->allows(scoped_) ? 0.0 : kInf;
  }

  // Exact minimum over the completions of `unassigned_`, owned unary costs
  // included.
  double enumerate(std::size_t c, const Constraint& con) {
    // Trial values go into the unassigned slots; they are overwritten before
    // being read again.
    std::vector<std::size_t> idx(unassigned_.size(), 0);
    const std::vector<VarIndex> open = unassigned_;
    std::vector<std::size_t> owned;
    for (std::size_t i = 0; i < open.size(); ++i) {
      if (plan_.owner[open[i]] == c) owned.push_back(i);
    }
    for (VarIndex a : open) values_[a] = wcsp_.variable(a).domain.front();
    double best = kInf;
    while (true) {
      for (VarIndex f : plan_.closure[c]) {
        if (!assigned_[f]) values_[f] = evaluate_functional(f);
      }
      gather(con);
      double value = evaluate(con);
      if (con.is_hard() && value == 0.0) return 0.0;
      for (std::size_t i : owned) value += plan_.unary_costs[open[i]][idx[i]];
      best = std::min(best, value);
      std::size_t i = open.size();
      while (i > 0) {
        const auto& domain = wcsp_.variable(open[i - 1]).domain;
        if (++idx[i - 1] < domain.size()) {
          values_[open[i - 1]] = domain[idx[i - 1]];
          break;
        }
        idx[i - 1] = 0;
        values_[open[i - 1]] = domain.front();
        --i;
      }
      if (i == 0) break;
    }
    return best;
  }

  // Bound of a cost function stated over decision variables, plus the unary
  // costs of the free ones `owns` accepts: exact by enumeration when the free
  // variables have few joint values, else the function's own bound.
  template <typename Owns>
  double function_bound(const CostFunction& function,
                        const std::vector<VarIndex>& scope, Owns owns) {
    std::vector<std::size_t> free;  // first positions of free variables
    double combos = 1.0;
    for (std::size_t i = 0; i < scope.size(); ++i) {
      if (assigned_[scope[i]] || !first_occurrence(scope, i)) continue;
      free.push_back(i);
      combos *= static_cast<double>(wcsp_.variable(scope[i]).domain.size());
    }
    double b = kInf;
    if (combos <= static_cast<double>(config_.enumeration_cap)) {
      std::vector<double> args(scope.size());
      for (std::size_t i = 0; i < scope.size(); ++i) args[i] = values_[scope[i]];
      std::vector<std::size_t> idx(free.size(), 0);
      auto place = [&](std::size_t q) {
        const VarIndex v = scope[free[q]];
        const double value = wcsp_.variable(v).domain[idx[q]];
        for (std::size_t i = free[q]; i < scope.size(); ++i) {
          if (scope[i] == v) args[i] = value;
        }
      };
      for (std::size_t q = 0; q < free.size(); ++q) place(q);
      while (true) {
        double value = function.cost(args);
        for (std::size_t q = 0; q < free.size(); ++q) {
          const VarIndex v = scope[free[q]];
          if (owns(v)) value += plan_.unary_costs[v][idx[q]];
        }
        b = std::min(b, value);
        std::size_t q = free.size();
        while (q > 0) {
          const std::size_t size = wcsp_.variable(scope[free[q - 1]]).domain.size();
          const bool carry = ++idx[q - 1] == size;
          if (carry) idx[q - 1] = 0;
          place(q - 1);
          if (!carry) break;
          --q;
        }
        if (q == 0) break;
      }
    } else {
      box_.clear();
      views_.assign(scope.size(), UnaryView{});
      for (VarIndex v : scope) box_.push_back(interval_of(v));
      for (std::size_t i : free) {
        const VarIndex v = scope[i];
        views_[i].values = wcsp_.variable(v).domain;
        if (owns(v)) views_[i].costs = plan_.unary_costs[v];
      }
      b = function.lower_bound(box_, views_);
    }
    return std::max(0.0, b - kBoundSlack * std::abs(b));
  }

  Interval interval_of(VarIndex v) const {
    if (assigned_[v]) return Interval::point(values_[v]);
    if (wcsp_.variable(v).is_decision()) return wcsp_.variable(v).range;
    return intervals_[v];
  }

  double interval_bound(std::size_t c, const Constraint& con) {
    Interval args[2];
    for (VarIndex f : plan_.closure[c]) {
      if (assigned_[f]) continue;
      const Constraint& def = wcsp_.constraints()[*wcsp_.variable(f).defined_by];
      for (std::size_t i = 0; i < def.scope.size(); ++i) {
        args[i] = interval_of(def.scope[i]);
      }
      Interval image = std::get<FunctionalTerm>(def.term).function.evaluate(
          std::span<const Interval>(args, def.scope.size()));
      // The builder's range already covers every reachable value.
      const Interval& range = wcsp_.variable(f).range;
      intervals_[f] = {std::max(image.lo, range.lo), std::min(image.hi, range.hi)};
    }
    box_.clear();
    for (VarIndex v : con.scope) box_.push_back(interval_of(v));
    if (const SoftTerm* soft = soft_term(con)) {
      views_.assign(con.scope.size(), UnaryView{});
      for (std::size_t i = 0; i < con.scope.size(); ++i) {
        const VarIndex v = con.scope[i];
        if (assigned_[v] || !wcsp_.variable(v).is_decision() ||
            !first_occurrence(con.scope, i)) {
          continue;
        }
        views_[i].values = wcsp_.variable(v).domain;
        if (plan_.owner[v] == c) views_[i].costs = plan_.unary_costs[v];
      }
      const double b = soft->function->lower_bound(box_, views_);
      return std::max(0.0, b - kBoundSlack * std::abs(b));
    }
    return std::get<HardTerm>(con.term).relation->may_allow(box_) ? 0.0 : kInf;
  }

  const Wcsp& wcsp_;
  const Plan& plan_;
  SolverConfig config_;

  std::vector<double> values_;
  std::vector<char> assigned_;
  std::vector<int> missing_var_;
  std::vector<int> missing_con_;
  std::vector<double> bound_;
  std::vector<std::uint64_t> touch_stamp_;
  std::vector<std::size_t> position_;
  std::vector<Interval> intervals_;
  std::uint64_t stamp_ = 0;

  std::vector<VarIndex> unassigned_;
  std::vector<double> scoped_;
  std::vector<Interval> box_;
  std::vector<UnaryView> views_;

  std::uint64_t nodes_ = 0;
  bool aborted_ = false;
};
std::vector<Search::Component> Search::split(std::span<const VarIndex> vars,
                                             std::span<const std::size_t> cons) {
  std::vector<std::size_t> parent(vars.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (std::size_t i = 0; i < vars.size(); ++i) position_[vars[i]] = i;

  std::vector<std::size_t> anchor(cons.size());
  for (std::size_t j = 0; j < cons.size(); ++j) {
    bool first = true;
    for (VarIndex a : *plan_.linked[cons[j]]) {
      if (assigned_[a]) continue;
      const std::size_t p = position_[a];
      if (first) {
        anchor[j] = p;
        first = false;
      } else {
        const std::size_t ra = root(anchor[j]), rb = root(p);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
      }
    }
  }

  std::vector<Component> components;
  std::vector<std::size_t> slot(vars.size(), vars.size());
  for (std::size_t i = 0; i < vars.size(); ++i) {
    const std::size_t r = root(i);
    if (slot[r] == vars.size()) {
      slot[r] = components.size();
      components.emplace_back();
    }
    components[slot[r]].vars.push_back(vars[i]);
  }
  for (std::size_t j = 0; j < cons.size(); ++j) {
    Component& comp = components[slot[root(anchor[j])]];
    comp.cons.push_back(cons[j]);
    comp.bound += bound_[cons[j]];
  }
  return components;
}

double Search::solve_split(std::span<const VarIndex> vars,
                           std::span<const std::size_t> cons, double limit,
                           Picks& picks) {
  if (cons.empty()) {
    if (!(0.0 < limit)) return kInf;
    pick_free(vars, picks);
    return 0.0;
  }
  if (!config_.split_components) return branch(vars, cons, limit, picks);

  std::vector<Component> components = split(vars, cons);
  if (components.size() == 1) return branch(vars, cons, limit, picks);

  double remaining = 0.0;
  for (const Component& comp : components) remaining += comp.bound;
  if (!(remaining < limit)) return kInf;

  double total = 0.0;
  Picks found;
  for (const Component& comp : components) {
    remaining -= comp.bound;
    if (comp.cons.empty()) {
      pick_free(comp.vars, found);
      continue;
    }
    const double result =
        branch(comp.vars, comp.cons, limit - total - remaining, found);
    if (result == kInf) return kInf;
    total += result;
  }
  if (!(total < limit)) return kInf;
  picks.insert(picks.end(), found.begin(), found.end());
  return total;
}

double Search::branch(std::span<const VarIndex> vars,
                      std::span<const std::size_t> cons, double limit,
                      Picks& picks) {
  const VarIndex x = vars.front();
  const auto rest = vars.subspan(1);
  const auto& domain = wcsp_.variable(x).domain;

  double best = limit;
  bool found = false;
  Picks best_picks, trial;
  std::vector<std::size_t> open;
  std::vector<std::pair<std::size_t, double>> saved;
  open.reserve(cons.size());

  for (std::size_t k : plan_.value_order[x]) {
    if (aborted_) break;
    if (config_.node_limit != 0 && nodes_ >= config_.node_limit) {
      aborted_ = true;
      break;
    }
    ++nodes_;
    assign(x, domain[k]);
    ++stamp_;
    for (std::size_t c : plan_.touching[x]) touch_stamp_[c] = stamp_;
    for (std::size_t c : plan_.extra_touching[x]) touch_stamp_[c] = stamp_;

    double cost = 0.0;
    bool feasible = true;
    open.clear();
    saved.clear();
    for (std::size_t c : cons) {
      if (touch_stamp_[c] != stamp_) {
        open.push_back(c);
        continue;
      }
      if (complete(c)) {
        cost += exact(c);
      } else {
        saved.emplace_back(c, bound_[c]);
        bound_[c] = bound(c);
        open.push_back(c);
        if (bound_[c] == kInf) cost = kInf;
      }
      if (cost == kInf) {
        feasible = false;
        break;
      }
    }

    if (feasible) {
      double estimate = cost;
      for (std::size_t c : open) estimate += bound_[c];
      if (estimate < best) {
        trial.clear();
        const double sub = solve_split(rest, open, best - cost, trial);
        if (sub != kInf && cost + sub < best) {
          best = cost + sub;
          found = true;
          best_picks.clear();
          best_picks.emplace_back(x, domain[k]);
          best_picks.insert(best_picks.end(), trial.begin(), trial.end());
        }
      }
    }

    for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
      bound_[it->first] = it->second;
    }
    unassign(x);
  }

  if (!found) return kInf;
  picks.insert(picks.end(), best_picks.begin(), best_picks.end());
  return best;
}

}  // namespace

std::optional<Solution> solve(const Wcsp& wcsp, const SolverConfig& config) {
  const Plan plan(wcsp);
  Search search(wcsp, plan, config);

  for (std::size_t c : plan.open_constraints) {
    const double b = search.bound(c);
    if (b == kInf) return std::nullopt;
    search.set_bound(c, b);
  }

  Picks picks;
  const auto& decision = wcsp.decision_variables();
  const double best =
      search.solve_split(decision, plan.open_constraints, kInf, picks);
  if (best == kInf) {
    if (search.aborted()) {
      throw SizeError("node limit reached before any solution was found");
    }
    return std::nullopt;
  }

  Solution solution;
  solution.values.assign(wcsp.num_variables(), 0.0);
  for (const auto& [v, value] : picks) solution.values[v] = value;
  wcsp.complete(solution.values);
  const auto total = evaluate_cost(wcsp, std::span<const double>(solution.values));
  if (!total) throw InternalError("search returned an infeasible assignment");
  solution.total_cost = *total;
  solution.optimal = !search.aborted();
  solution.nodes = search.nodes();
  return solution;
}

std::optional<double> node_lower_bound(
    const Wcsp& wcsp, std::span<const std::optional<double>> partial,
    const SolverConfig& config) {
  if (partial.size() != wcsp.num_variables()) {
    throw ArgumentError("partial assignment has the wrong number of variables");
  }
  const Plan plan(wcsp);
  Search search(wcsp, plan, config);
  for (VarIndex v : wcsp.decision_variables()) {
    if (partial[v]) search.assign(v, *partial[v]);
  }
  double total = 0.0;
  for (std::size_t c : plan.open_constraints) {
    const double b = search.complete(c) ? search.exact(c) : search.bound(c);
    if (b == kInf) return std::nullopt;
    total += b;
  }
  return total;
}

}  // namespace qrelearn
