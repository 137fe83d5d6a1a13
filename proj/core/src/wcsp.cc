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

#include <algorithm>
#include <cmath>
#include <limits>

#include "qrelearn/errors.h"

namespace qrelearn {
namespace {

bool strictly_increasing(const std::vector<double>& values) {
  return std::adjacent_find(values.begin(), values.end(),
                            [](double a, double b) { return !(a < b); }) ==
         values.end();
}

std::size_t domain_index(const std::vector<double>& domain, double value) {
  auto it = std::lower_bound(domain.begin(), domain.end(), value);
  if (it == domain.end() || *it != value) {
    throw ArgumentError("value " + std::to_string(value) +
                        " is not in the domain");
  }
  return static_cast<std::size_t>(it - domain.begin());
}

bool functional_matches(double actual, double expected) {
  return std::abs(actual - expected) <=
         1e-12 * std::max(1.0, std::abs(expected));
}

// Sum of soft costs in constraint order; nullopt on a violated hard or
// functional constraint. Does not check domains.
std::optional<double> total_cost(const Wcsp& wcsp,
                                 std::span<const double> values,
                                 bool check_functional) {
  double total = 0.0;
  std::vector<double> scoped;
  for (const Constraint& c : wcsp.constraints()) {
    scoped.clear();
    for (VarIndex v : c.scope) scoped.push_back(values[v]);
    if (const auto* soft = std::get_if<SoftTerm>(&c.term)) {
      total += soft->function->cost(scoped);
    } else if (const auto* hard = std::get_if<HardTerm>(&c.term)) {
      if (!hard->relation->allows(scoped)) return std::nullopt;
    } else if (check_functional) {
      const auto& link = std::get<FunctionalTerm>(c.term);
      if (!functional_matches(values[link.output],
                              link.function.evaluate(scoped))) {
        return std::nullopt;
      }
    }
  }
  return total;
}

}  // namespace

Functional::Functional(FunctionalOp op, double scale) : op_(op), scale_(scale) {
  if (op_ == FunctionalOp::kScaledExp && !(scale_ >= 0.0)) {
    throw ArgumentError("exponential scale must be nonnegative");
  }
}

std::string Functional::name() const {
  switch (op_) {
    case FunctionalOp::kSum:
      return "sum";
    case FunctionalOp::kProduct:
      return "product";
    case FunctionalOp::kScaledExp:
      return "scaled_exp";
  }
  return "unknown";
}

double Functional::evaluate(std::span<const double> inputs) const {
  switch (op_) {
    case FunctionalOp::kSum:
      return inputs[0] + inputs[1];
    case FunctionalOp::kProduct:
      return inputs[0] * inputs[1];
    case FunctionalOp::kScaledExp:
      return std::exp(scale_ * inputs[0]);
  }
  return 0.0;
}

Interval Functional::evaluate(std::span<const Interval> inputs) const {
  switch (op_) {
    case FunctionalOp::kSum:
      return {inputs[0].lo + inputs[1].lo, inputs[0].hi + inputs[1].hi};
    case FunctionalOp::kProduct: {
      const double c[4] = {inputs[0].lo * inputs[1].lo, inputs[0].lo * inputs[1].hi,
                           inputs[0].hi * inputs[1].lo, inputs[0].hi * inputs[1].hi};
      return {*std::min_element(c, c + 4), *std::max_element(c, c + 4)};
    }
    case FunctionalOp::kScaledExp:
      return {std::exp(scale_ * inputs[0].lo), std::exp(scale_ * inputs[0].hi)};
  }
  return {};
}

double CostFunction::lower_bound(std::span<const Interval>) const { return 0.0; }

double CostFunction::lower_bound(std::span<const Interval> box,
                                 std::span<const UnaryView> unaries) const {
  double b = lower_bound(box);
  for (const UnaryView& view : unaries) {
    if (!view.costs.empty()) {
      b += *std::min_element(view.costs.begin(), view.costs.end());
    }
  }
  return b;
}

bool Relation::may_allow(std::span<const Interval>) const { return true; }

TableCost::TableCost(std::vector<std::vector<double>> domains,
                     std::vector<double> costs)
    : domains_(std::move(domains)), costs_(std::move(costs)) {
  std::size_t size = 1;
  for (const auto& d : domains_) {
    if (d.empty() || !strictly_increasing(d)) {
      throw ArgumentError("table domains must be non-empty and increasing");
    }
    size *= d.size();
  }
  if (costs_.size() != size) {
    throw ArgumentError("table has " + std::to_string(costs_.size()) +
                        " costs, expected " + std::to_string(size));
  }
  for (double c : costs_) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw ArgumentError("table costs must be finite and nonnegative");
    }
  }
}

double TableCost::lower_bound(std::span<const Interval> box) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t flat = 0; flat < costs_.size(); ++flat) {
    std::size_t rest = flat;
    bool inside = true;
    for (std::size_t i = domains_.size(); i-- > 0 && inside;) {
      inside = box[i].contains(domains_[i][rest % domains_[i].size()]);
      rest /= domains_[i].size();
    }
    if (inside) best = std::min(best, costs_[flat]);
  }
  return std::isinf(best) ? 0.0 : best;
}

double TableCost::cost(std::span<const double> values) const {
  std::size_t flat = 0;
  for (std::size_t i = 0; i < domains_.size(); ++i) {
    flat = flat * domains_[i].size() + domain_index(domains_[i], values[i]);
  }
  return costs_[flat];
}

nlohmann::json TableCost::parameters() const {
  return {{"domains", domains_}, {"costs", costs_}};
}

bool SumEquals::allows(std::span<const double> values) const {
  double total = 0.0;
  for (double v : values) total += v;
  return std::abs(total - target_) <= tolerance_;
}

bool SumEquals::may_allow(std::span<const Interval> box) const {
  double lo = 0.0, hi = 0.0;
  for (const Interval& b : box) {
    lo += b.lo;
    hi += b.hi;
  }
  return lo - tolerance_ <= target_ && target_ <= hi + tolerance_;
}

nlohmann::json SumEquals::parameters() const {
  return {{"target", target_}, {"tolerance", tolerance_}};
}

AllowedTuples::AllowedTuples(std::vector<std::vector<double>> tuples)
    : tuples_(std::move(tuples)) {
  std::sort(tuples_.begin(), tuples_.end());
  tuples_.erase(std::unique(tuples_.begin(), tuples_.end()), tuples_.end());
}

bool AllowedTuples::allows(std::span<const double> values) const {
  const std::vector<double> key(values.begin(), values.end());
  return std::binary_search(tuples_.begin(), tuples_.end(), key);
}

nlohmann::json AllowedTuples::parameters() const {
  return {{"tuples", tuples_}};
}

void WcspBuilder::check_scope(const std::vector<VarIndex>& scope) const {
  if (scope.empty()) throw ArgumentError("constraint scope is empty");
  for (VarIndex v : scope) {
    if (v >= variables_.size()) {
      throw ArgumentError("constraint scope refers to an undeclared variable");
    }
  }
}

VarIndex WcspBuilder::add_variable(std::string id, std::vector<double> domain) {
  if (ids_.contains(id)) throw ArgumentError("duplicate variable id " + id);
  if (domain.empty()) throw ArgumentError("variable " + id + " has an empty domain");
  if (!strictly_increasing(domain)) {
    throw ArgumentError("domain of " + id + " is not strictly increasing");
  }
  for (double v : domain) {
    if (!std::isfinite(v)) throw ArgumentError("domain of " + id + " is not finite");
  }
  const VarIndex index = variables_.size();
  Variable var;
  var.id = std::move(id);
  var.range = {domain.front(), domain.back()};
  var.domain = std::move(domain);
  ids_.emplace(var.id, index);
  variables_.push_back(std::move(var));
  return index;
}

VarIndex WcspBuilder::add_functional(std::string id, Functional function,
                                     std::vector<VarIndex> inputs) {
  if (ids_.contains(id)) throw ArgumentError("duplicate variable id " + id);
  check_scope(inputs);
  if (inputs.size() != function.arity()) {
    throw ArgumentError("functional " + id + " has the wrong number of inputs");
  }

  Variable var;
  var.id = std::move(id);
  std::vector<Interval> ranges;
  double combos = 1.0;
  bool enumerable = true;
  for (VarIndex v : inputs) {
    ranges.push_back(variables_[v].range);
    enumerable = enumerable && !variables_[v].domain.empty();
    combos *= static_cast<double>(variables_[v].domain.size());
  }
  var.range = function.evaluate(ranges);

  if (enumerable && combos <= 4.0 * static_cast<double>(image_cap_)) {
    std::vector<double> image;
    image.reserve(static_cast<std::size_t>(combos));
    std::vector<std::size_t> idx(inputs.size(), 0);
    std::vector<double> args(inputs.size());
    while (true) {
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        args[i] = variables_[inputs[i]].domain[idx[i]];
      }
      image.push_back(function.evaluate(args));
      std::size_t i = inputs.size();
      while (i > 0 && ++idx[i - 1] == variables_[inputs[i - 1]].domain.size()) {
        idx[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
    }
    std::sort(image.begin(), image.end());
    image.erase(std::unique(image.begin(), image.end()), image.end());
    if (image.size() <= image_cap_) {
      var.range = {image.front(), image.back()};
      var.domain = std::move(image);
    }
  }

  const VarIndex index = variables_.size();
  var.defined_by = constraints_.size();
  constraints_.push_back({std::move(inputs), FunctionalTerm{function, index}});
  ids_.emplace(var.id, index);
  variables_.push_back(std::move(var));
  return index;
}

std::size_t WcspBuilder::add_soft(std::vector<VarIndex> scope,
                                  std::shared_ptr<const CostFunction> function) {
  check_scope(scope);
  if (!function) throw ArgumentError("soft constraint without a cost function");
  constraints_.push_back(
      {std::move(scope), SoftTerm{std::move(function), std::nullopt}});
  return constraints_.size() - 1;
}

std::size_t WcspBuilder::add_soft(std::vector<VarIndex> scope,
                                  std::shared_ptr<const CostFunction> function,
                                  Surrogate surrogate) {
  check_scope(scope);
  check_scope(surrogate.scope);
  if (!function || !surrogate.function) {
    throw ArgumentError("soft constraint without a cost function");
  }
  for (VarIndex v : surrogate.scope) {
    if (!variables_[v].is_decision()) {
      throw ArgumentError("surrogate scope must consist of decision variables");
    }
  }
  constraints_.push_back(
      {std::move(scope), SoftTerm{std::move(function), std::move(surrogate)}});
  return constraints_.size() - 1;
}

std::size_t WcspBuilder::add_hard(std::vector<VarIndex> scope,
                                  std::shared_ptr<const Relation> relation) {
  check_scope(scope);
  if (!relation) throw ArgumentError("hard constraint without a relation");
  constraints_.push_back({std::move(scope), HardTerm{std::move(relation)}});
  return constraints_.size() - 1;
}

std::size_t WcspBuilder::add_bound_group(std::vector<std::size_t> members,
                                         Surrogate surrogate) {
  check_scope(surrogate.scope);
  if (!surrogate.function) throw ArgumentError("bound group without a function");
  if (members.empty()) throw ArgumentError("empty bound group");
  for (VarIndex v : surrogate.scope) {
    if (!variables_[v].is_decision()) {
      throw ArgumentError("surrogate scope must consist of decision variables");
    }
  }
  for (std::size_t c : members) {
    if (c >= constraints_.size() || !constraints_[c].is_soft()) {
      throw ArgumentError("bound group members must be soft constraints");
    }
    for (const BoundGroup& group : bound_groups_) {
      if (std::find(group.members.begin(), group.members.end(), c) !=
          group.members.end()) {
        throw ArgumentError("constraint already belongs to a bound group");
      }
    }
    if (std::count(members.begin(), members.end(), c) != 1) {
      throw ArgumentError("duplicate bound group member");
    }
  }
  bound_groups_.push_back({std::move(members), std::move(surrogate)});
  return bound_groups_.size() - 1;
}

Wcsp WcspBuilder::build() && {
  Wcsp wcsp;
  wcsp.variables_ = std::move(variables_);
  wcsp.constraints_ = std::move(constraints_);
  wcsp.bound_groups_ = std::move(bound_groups_);
  wcsp.ids_ = std::move(ids_);
  for (VarIndex v = 0; v < wcsp.variables_.size(); ++v) {
    if (wcsp.variables_[v].is_decision()) wcsp.decision_variables_.push_back(v);
  }
  return wcsp;
}

std::optional<VarIndex> Wcsp::find(std::string_view id) const {
  auto it = ids_.find(std::string(id));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

VarIndex Wcsp::index_of(std::string_view id) const {
  auto found = find(id);
  if (!found) throw ArgumentError("unknown variable " + std::string(id));
  return *found;
}

std::size_t Wcsp::num_soft() const {
  return std::count_if(constraints_.begin(), constraints_.end(),
                       [](const Constraint& c) { return c.is_soft(); });
}

std::size_t Wcsp::num_hard() const {
  return std::count_if(constraints_.begin(), constraints_.end(),
                       [](const Constraint& c) { return c.is_hard(); });
}

std::size_t Wcsp::num_functional() const {
  return std::count_if(constraints_.begin(), constraints_.end(),
                       [](const Constraint& c) { return c.is_functional(); });
}

void Wcsp::complete(std::vector<double>& values) const {
  if (values.size() != variables_.size()) {
    throw ArgumentError("assignment has the wrong number of variables");
  }
  double args[2];
  for (VarIndex v = 0; v < variables_.size(); ++v) {
    const auto& def = variables_[v].defined_by;
    if (!def) continue;
    const Constraint& c = constraints_[*def];
    const auto& link = std::get<FunctionalTerm>(c.term);
    for (std::size_t i = 0; i < c.scope.size(); ++i) args[i] = values[c.scope[i]];
    values[v] = link.function.evaluate(std::span<const double>(args, c.scope.size()));
  }
}

Assignment Solution::assignment(const Wcsp& wcsp) const {
  Assignment out;
  for (VarIndex v = 0; v < wcsp.num_variables(); ++v) {
    out.emplace(wcsp.variable(v).id, values[v]);
  }
  return out;
}

std::optional<double> evaluate_cost(const Wcsp& wcsp,
                                    std::span<const double> values) {
  if (values.size() != wcsp.num_variables()) {
    throw ArgumentError("assignment must give a value for every variable");
  }
  for (VarIndex v : wcsp.decision_variables()) {
    domain_index(wcsp.variable(v).domain, values[v]);
  }
  return total_cost(wcsp, values, /*check_functional=*/true);
}

std::optional<double> evaluate_cost(const Wcsp& wcsp,
                                    const Assignment& assignment) {
  std::vector<double> values(wcsp.num_variables(), 0.0);
  std::vector<char> given(wcsp.num_variables(), 0);
  for (const auto& [id, value] : assignment) {
    const VarIndex v = wcsp.index_of(id);
    values[v] = value;
    given[v] = 1;
  }
  for (VarIndex v : wcsp.decision_variables()) {
    if (!given[v]) {
      throw ArgumentError("assignment is missing variable " +
                          wcsp.variable(v).id);
    }
  }
  std::vector<double> computed = values;
  wcsp.complete(computed);
  for (VarIndex v = 0; v < wcsp.num_variables(); ++v) {
    if (!given[v]) values[v] = computed[v];
  }
  return evaluate_cost(wcsp, std::span<const double>(values));
}

std::optional<Solution> brute_force_solve(const Wcsp& wcsp,
                                          const BruteForceConfig& config) {
  const auto& decision = wcsp.decision_variables();
  double space = 1.0;
  for (VarIndex v : decision) {
    space *= static_cast<double>(wcsp.variable(v).domain.size());
  }
  if (space > config.max_assignments) {
    throw SizeError("brute force would enumerate " + std::to_string(space) +
                    " assignments");
  }

  std::vector<double> values(wcsp.num_variables(), 0.0);
  std::vector<std::size_t> idx(decision.size(), 0);
  for (VarIndex v : decision) values[v] = wcsp.variable(v).domain.front();

  std::optional<Solution> best;
  std::uint64_t visited = 0;
  while (true) {
    wcsp.complete(values);
    ++visited;
    if (auto cost = total_cost(wcsp, values, /*check_functional=*/false)) {
      if (!best || *cost < best->total_cost) {
        best = Solution{values, *cost, true, 0};
      }
    }
    // Odometer with the last declared variable fastest.
    std::size_t i = decision.size();
    bool done = true;
    while (i > 0) {
      --i;
      const auto& domain = wcsp.variable(decision[i]).domain;
      if (++idx[i] < domain.size()) {
        values[decision[i]] = domain[idx[i]];
        done = false;
        break;
      }
      idx[i] = 0;
      values[decision[i]] = domain.front();
    }
    if (done) break;
  }
  if (best) best->nodes = visited;
  return best;
}

nlohmann::json wcsp_to_json(const Wcsp& wcsp) {
  nlohmann::json vars = nlohmann::json::array();
  for (const Variable& v : wcsp.variables()) {
    nlohmann::json entry = {{"id", v.id}};
    if (!v.domain.empty()) {
      entry["domain"] = v.domain;
    } else {
      entry["range"] = {v.range.lo, v.range.hi};
    }
    if (v.defined_by) entry["functional"] = true;
    vars.push_back(std::move(entry));
  }
  nlohmann::json cons = nlohmann::json::array();
  for (const Constraint& c : wcsp.constraints()) {
    nlohmann::json scope = nlohmann::json::array();
    for (VarIndex v : c.scope) scope.push_back(wcsp.variable(v).id);
    nlohmann::json entry = {{"scope", scope}};
    if (const auto* soft = std::get_if<SoftTerm>(&c.term)) {
      entry["kind"] = "soft";
      entry["function"] = soft->function->name();
      entry["parameters"] = soft->function->parameters();
      if (soft->surrogate) {
        nlohmann::json sscope = nlohmann::json::array();
        for (VarIndex v : soft->surrogate->scope) {
          sscope.push_back(wcsp.variable(v).id);
        }
        entry["surrogate"] = {{"scope", sscope},
                              {"function", soft->surrogate->function->name()}};
      }
    } else if (const auto* hard = std::get_if<HardTerm>(&c.term)) {
      entry["kind"] = "hard";
      entry["function"] = hard->relation->name();
      entry["parameters"] = hard->relation->parameters();
    } else {
      const auto& link = std::get<FunctionalTerm>(c.term);
      entry["kind"] = "functional";
      entry["function"] = link.function.name();
      entry["parameters"] = {{"scale", link.function.scale()}};
      entry["output"] = wcsp.variable(link.output).id;
    }
    cons.push_back(std::move(entry));
  }
  nlohmann::json groups = nlohmann::json::array();
  for (const BoundGroup& group : wcsp.bound_groups()) {
    nlohmann::json sscope = nlohmann::json::array();
    for (VarIndex v : group.surrogate.scope) sscope.push_back(wcsp.variable(v).id);
    groups.push_back({{"members", group.members},
                      {"surrogate",
                       {{"scope", sscope},
                        {"function", group.surrogate.function->name()}}}});
  }
  return {{"variables", vars}, {"constraints", cons}, {"bound_groups", groups}};
}

}  // namespace qrelearn
