#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gradua/errors.hpp"

namespace gradua {

// A coordinate of a chart. Jet coordinates remember the coordinate they were
// prolonged from (`root`) and one order per prolongation level, innermost first.
struct Variable {
  std::string name;
  unsigned weight = 0;
  std::string root;
  std::vector<unsigned> jet;

  bool operator==(const Variable&) const = default;
};

// Printed name of a jet coordinate: `x` at order zero, `x'2` for a single
// prolongation level, `x'1'0` for iterated ones.
inline std::string jet_name(const std::string& root, const std::vector<unsigned>& orders) {
  const bool all_zero = std::all_of(orders.begin(), orders.end(), [](unsigned k) { return k == 0; });
  if (all_zero) return root;
  std::string name = root;
  for (unsigned k : orders) name += "'" + std::to_string(k);
  return name;
}

class Chart;
using ChartPtr = std::shared_ptr<const Chart>;

// Named coordinate system with one weight per coordinate. Weight-0 coordinates
// are base coordinates; the degree is the largest weight.
class Chart {
 public:
  Chart(std::string name, std::vector<Variable> variables)
      : name_(std::move(name)), variables_(std::move(variables)) {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      auto& v = variables_[i];
      if (v.name.empty()) throw DomainError("chart '" + name_ + "' has an unnamed coordinate");
      if (v.root.empty()) v.root = v.name;
      for (std::size_t j = 0; j < i; ++j) {
        if (variables_[j].name == v.name) {
          throw DomainError("duplicate coordinate '" + v.name + "' in chart '" + name_ + "'");
        }
      }
    }
  }

  static ChartPtr make(std::string name, const std::vector<std::pair<std::string, unsigned>>& vars) {
    std::vector<Variable> variables;
    variables.reserve(vars.size());
    for (const auto& [n, w] : vars) variables.push_back(Variable{n, w, n, {}});
    return std::make_shared<const Chart>(std::move(name), std::move(variables));
  }

  static ChartPtr make(std::string name, std::initializer_list<std::pair<std::string, unsigned>> vars) {
    return make(std::move(name), std::vector<std::pair<std::string, unsigned>>(vars));
  }

  static ChartPtr make(std::string name, std::vector<Variable> variables) {
    return std::make_shared<const Chart>(std::move(name), std::move(variables));
  }

  const std::string& name() const { return name_; }
  std::size_t size() const { return variables_.size(); }
  const Variable& var(std::size_t i) const { return variables_.at(i); }
  const std::vector<Variable>& variables() const { return variables_; }
  unsigned weight(std::size_t i) const { return variables_.at(i).weight; }

  std::vector<unsigned> weights() const {
    std::vector<unsigned> w;
    w.reserve(variables_.size());
    for (const auto& v : variables_) w.push_back(v.weight);
    return w;
  }

  std::optional<std::size_t> index_of(std::string_view name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i) {
      if (variables_[i].name == name) return i;
    }
    return std::nullopt;
  }

  std::size_t require_index(std::string_view name) const {
    if (auto i = index_of(name)) return *i;
    throw DomainError("unknown coordinate '" + std::string(name) + "' in chart '" + name_ + "'");
  }

  unsigned degree() const {
    unsigned n = 0;
    for (const auto& v : variables_) n = std::max(n, v.weight);
    return n;
  }

  // rank d = (d_1, ..., d_n): d_i is the number of weight-i coordinates.
  std::vector<std::size_t> rank() const {
    std::vector<std::size_t> d(degree(), 0);
    for (const auto& v : variables_) {
      if (v.weight > 0) ++d[v.weight - 1];
    }
    return d;
  }

  std::size_t base_dimension() const {
    return static_cast<std::size_t>(
        std::count_if(variables_.begin(), variables_.end(), [](const Variable& v) { return v.weight == 0; }));
  }

  // Same coordinate names and weights, in the same order.
  bool same_layout(const Chart& other) const {
    if (size() != other.size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
      if (variables_[i].name != other.variables_[i].name || variables_[i].weight != other.variables_[i].weight) {
        return false;
      }
    }
    return true;
  }

  // Copy of this chart with extra weight-0 coordinates appended (formal parameters).
  ChartPtr with_parameters(const std::vector<std::string>& parameters) const {
    std::vector<Variable> vars = variables_;
    for (const auto& p : parameters) {
      if (index_of(p)) {
        throw DomainError("parameter '" + p + "' clashes with a coordinate of chart '" + name_ + "'");
      }
      vars.push_back(Variable{p, 0, p, {}});
    }
    return make(name_, std::move(vars));
  }

  ChartPtr renamed(std::string name) const { return make(std::move(name), variables_); }

 private:
  std::string name_;
  std::vector<Variable> variables_;
};

inline bool compatible(const ChartPtr& a, const ChartPtr& b) {
  return a == b || (a && b && a->same_layout(*b));
}

inline void require_compatible(const ChartPtr& a, const ChartPtr& b, std::string_view what) {
  if (!compatible(a, b)) {
    throw DomainError(std::string(what) + ": charts '" + (a ? a->name() : "?") + "' and '" +
                      (b ? b->name() : "?") + "' do not match");
  }
}

}  // namespace gradua
