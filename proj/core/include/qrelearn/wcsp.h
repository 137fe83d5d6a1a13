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

#ifndef QRELEARN_WCSP_H_
#define QRELEARN_WCSP_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace qrelearn {

using VarIndex = std::size_t;

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  bool operator==(const Interval&) const = default;
};

// Closed set of output = f(inputs) maps usable as functional hard constraints.
enum class FunctionalOp {
  kSum,        // a + b
  kProduct,    // a * b
  kScaledExp,  // exp(scale * a), scale >= 0
};

class Functional {
 public:
  explicit Functional(FunctionalOp op, double scale = 1.0);

  FunctionalOp op() const { return op_; }
  double scale() const { return scale_; }
  std::size_t arity() const { return op_ == FunctionalOp::kScaledExp ? 1 : 2; }
  std::string name() const;

  double evaluate(std::span<const double> inputs) const;
  // Hull of the image of the input box.
  Interval evaluate(std::span<const Interval> inputs) const;

 private:
  FunctionalOp op_;
  double scale_;
};

// Soft constraint: nonnegative finite cost over scope tuples.
// A free decision variable in a bounding query: its candidate values and,
// when its unary costs are folded into the query, one cost per value.
struct UnaryView {
  std::span<const double> values;  // empty for fixed or derived positions
  std::span<const double> costs;   // empty, or parallel to `values`
};

class CostFunction {
 public:
  virtual ~CostFunction() = default;

  virtual std::string name() const = 0;
  virtual double cost(std::span<const double> values) const = 0;
  // A value no larger than the cost at any point of the box. The default is
  // the trivial bound.
  virtual double lower_bound(std::span<const Interval> box) const;
  // A value no larger than cost(x) + Σ_p unaries[p].costs(x_p) for any x in
  // the box whose free positions take one of their listed values. The
  // default adds the smallest unary cost of each position to the box bound.
  virtual double lower_bound(std::span<const Interval> box,
                             std::span<const UnaryView> unaries) const;
  virtual nlohmann::json parameters() const = 0;
};

// Hard constraint: membership of scope tuples.
class Relation {
 public:
  virtual ~Relation() = default;

  virtual std::string name() const = 0;
  virtual bool allows(std::span<const double> values) const = 0;
  // False only when no point of the box is allowed.
  virtual bool may_allow(std::span<const Interval> box) const;
  virtual nlohmann::json parameters() const = 0;
};

// Explicit cost table, row-major over the scope's domains (last scope variable
// fastest). Lookups match values exactly against the stored domains.
class TableCost final : public CostFunction {
 public:
  TableCost(std::vector<std::vector<double>> domains, std::vector<double> costs);

  using CostFunction::lower_bound;
  std::string name() const override { return "table"; }
  double cost(std::span<const double> values) const override;
  // Smallest cost among the tuples inside the box.
  double lower_bound(std::span<const Interval> box) const override;
  nlohmann::json parameters() const override;

  const std::vector<std::vector<double>>& domains() const { return domains_; }
  const std::vector<double>& costs() const { return costs_; }

 private:
  std::vector<std::vector<double>> domains_;
  std::vector<double> costs_;
};

// Σ scope == target within an absolute tolerance.
class SumEquals final : public Relation {
 public:
  explicit SumEquals(double target, double tolerance = 1e-9)
      : target_(target), tolerance_(tolerance) {}

  std::string name() const override { return "sum_equals"; }
  bool allows(std::span<const double> values) const override;
  bool may_allow(std::span<const Interval> box) const override;
  nlohmann::json parameters() const override;

 private:
  double target_;
  double tolerance_;
};

// Explicit list of allowed tuples.
class AllowedTuples final : public Relation {
 public:
  explicit AllowedTuples(std::vector<std::vector<double>> tuples);

  std::string name() const override { return "tuples"; }
  bool allows(std::span<const double> values) const override;
  nlohmann::json parameters() const override;

 private:
  std::vector<std::vector<double>> tuples_;  // sorted
};

struct Variable {
  std::string id;
  // Strictly increasing. For a functional variable this is the image of its
  // definition over the parents' domains, or empty when that image exceeds
  // the builder's materialisation cap (then only `range` is kept).
  std::vector<double> domain;
  Interval range;
  // Index of the functional constraint that defines this variable.
  std::optional<std::size_t> defined_by;

  bool is_decision() const { return !defined_by.has_value(); }
};

// The cost of a soft constraint restated over decision variables only. The
// search uses it for bounds; costs are always taken from the constraint.
struct Surrogate {
  std::vector<VarIndex> scope;
  std::shared_ptr<const CostFunction> function;
};

struct SoftTerm {
  std::shared_ptr<const CostFunction> function;
  std::optional<Surrogate> surrogate;
};
struct HardTerm {
  std::shared_ptr<const Relation> relation;
};
// scope holds the inputs; `output` is assigned f(inputs) during search.
struct FunctionalTerm {
  Functional function;
  VarIndex output;
};

// Soft constraints whose summed cost `surrogate` restates. While every member
// is still open the search bounds them jointly through it.
struct BoundGroup {
  std::vector<std::size_t> members;
  Surrogate surrogate;
};

struct Constraint {
  std::vector<VarIndex> scope;
  std::variant<SoftTerm, HardTerm, FunctionalTerm> term;

  bool is_soft() const { return std::holds_alternative<SoftTerm>(term); }
  bool is_hard() const { return std::holds_alternative<HardTerm>(term); }
  bool is_functional() const {
    return std::holds_alternative<FunctionalTerm>(term);
  }
};

class Wcsp;

class WcspBuilder {
 public:
  // Functional images larger than `image_cap` values are kept implicit.
  explicit WcspBuilder(std::size_t image_cap = std::size_t{1} << 16)
      : image_cap_(image_cap) {}

  VarIndex add_variable(std::string id, std::vector<double> domain);
  // Declares `id` = f(inputs). Inputs must already exist.
  VarIndex add_functional(std::string id, Functional function,
                          std::vector<VarIndex> inputs);
  std::size_t add_soft(std::vector<VarIndex> scope,
                       std::shared_ptr<const CostFunction> function);
  // `surrogate` must equal `function` as a function of the decision
  // variables; those in its scope that `scope` does not depend on must not
  // affect it.
  std::size_t add_soft(std::vector<VarIndex> scope,
                       std::shared_ptr<const CostFunction> function,
                       Surrogate surrogate);
  std::size_t add_hard(std::vector<VarIndex> scope,
                       std::shared_ptr<const Relation> relation);
  // `members` are existing soft constraints, each in at most one group;
  // `surrogate` must equal the sum of their costs.
  std::size_t add_bound_group(std::vector<std::size_t> members,
                              Surrogate surrogate);

  std::size_t num_variables() const { return variables_.size(); }
  const Variable& variable(VarIndex v) const { return variables_.at(v); }

  Wcsp build() &&;

 private:
  void check_scope(const std::vector<VarIndex>& scope) const;

  std::size_t image_cap_;
  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<BoundGroup> bound_groups_;
  std::unordered_map<std::string, VarIndex> ids_;
};

// Variables and constraints of a weighted CSP. Immutable once built;
// functional variables are declared after all of their inputs, so
// declaration order is a topological order.
class Wcsp {
 public:
  const std::vector<Variable>& variables() const { return variables_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  const std::vector<BoundGroup>& bound_groups() const { return bound_groups_; }
  const Variable& variable(VarIndex v) const { return variables_[v]; }
  std::size_t num_variables() const { return variables_.size(); }

  // Decision (non-functional) variables in declaration order.
  const std::vector<VarIndex>& decision_variables() const {
    return decision_variables_;
  }
  std::optional<VarIndex> find(std::string_view id) const;
  VarIndex index_of(std::string_view id) const;

  // Counts by kind.
  std::size_t num_soft() const;
  std::size_t num_hard() const;
  std::size_t num_functional() const;

  // Fills every functional variable from the decision entries of `values`.
  void complete(std::vector<double>& values) const;

 private:
  friend class WcspBuilder;
  Wcsp() = default;

  std::vector<Variable> variables_;
  std::vector<Constraint> constraints_;
  std::vector<BoundGroup> bound_groups_;
  std::vector<VarIndex> decision_variables_;
  std::unordered_map<std::string, VarIndex> ids_;
};

using Assignment = std::map<std::string, double>;

struct Solution {
  // One value per variable, functional ones included.
  std::vector<double> values;
  double total_cost = 0.0;
  bool optimal = true;
  std::uint64_t nodes = 0;

  double value(const Wcsp& wcsp, std::string_view id) const {
    return values[wcsp.index_of(id)];
  }
  Assignment assignment(const Wcsp& wcsp) const;
};

// Sum of soft costs, or nullopt when a hard or functional constraint is
// violated. `values` needs one in-domain entry per variable.
std::optional<double> evaluate_cost(const Wcsp& wcsp,
                                    std::span<const double> values);
// Same over an id-keyed assignment; functional variables may be omitted and
// are then computed from their inputs.
std::optional<double> evaluate_cost(const Wcsp& wcsp,
                                    const Assignment& assignment);

struct BruteForceConfig {
  double max_assignments = 1e8;
};

// Exhaustive enumeration of the decision variables in lexicographic order
// (declaration order, ascending domain index); the first minimum wins.
// nullopt when no assignment satisfies the hard constraints.
std::optional<Solution> brute_force_solve(const Wcsp& wcsp,
                                          const BruteForceConfig& config = {});

struct SolverConfig {
  // A constraint's bound is its exact minimum over completions when its
  // unassigned decision ancestors have at most this many joint values;
  // otherwise the cost function's interval bound is used.
  std::size_t enumeration_cap = 64;
  // Solve independent parts of the residual problem separately.
  bool split_components = true;
  // 0 = unlimited. When hit, the incumbent is returned with optimal = false.
  std::uint64_t node_limit = 0;
};

// Depth-first branch and bound over the decision variables in declaration
// order, values by ascending unary cost then domain order.
std::optional<Solution> solve(const Wcsp& wcsp, const SolverConfig& config = {});

// The bound the search uses at a node: exact costs of constraints whose
// decision ancestors are all assigned plus a per-constraint bound for the
// rest. `partial` has one entry per variable; decision entries that are set
// form the partial assignment, functional entries are ignored. nullopt when a
// hard constraint is already unsupported.
std::optional<double> node_lower_bound(
    const Wcsp& wcsp, std::span<const std::optional<double>> partial,
    const SolverConfig& config = {});

nlohmann::json wcsp_to_json(const Wcsp& wcsp);

}  // namespace qrelearn

#endif  // QRELEARN_WCSP_H_
