#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "gradua/chart.hpp"
#include "gradua/map.hpp"
#include "gradua/polynomial.hpp"

namespace gradua {

// One-parameter family of polynomial maps h_t on a chart. entry(i) is the
// pullback x_i o h_t, a polynomial in the chart coordinates and the formal
// parameter (the last coordinate of context()). Chart weights play no role.
class ActionFamily {
 public:
  ActionFamily() = default;
  ActionFamily(ChartPtr space, std::string parameter, std::vector<Polynomial> entries)
      : space_(std::move(space)), parameter_(std::move(parameter)), entries_(std::move(entries)) {
    if (!space_) throw DomainError("action needs a chart");
    context_ = space_->with_parameters({parameter_});
    if (entries_.size() != space_->size()) {
      throw DomainError("action on '" + space_->name() + "' needs one entry per coordinate");
    }
    for (auto& e : entries_) {
      if (!e.context()) {
        e = Polynomial(context_);
      } else if (!compatible(e.context(), context_)) {
        e = embed(e, context_);
      } else {
        Polynomial rebased(context_);
        for (const auto& [m, c] : e.terms()) rebased.add_term(m, c);
        e = std::move(rebased);
      }
    }
  }

  const ChartPtr& space() const { return space_; }
  const ChartPtr& context() const { return context_; }
  const std::string& parameter() const { return parameter_; }
  std::size_t parameter_index() const { return space_->size(); }
  std::size_t dimension() const { return space_->size(); }
  const std::vector<Polynomial>& entries() const { return entries_; }
  const Polynomial& entry(std::size_t i) const { return entries_.at(i); }

  unsigned parameter_degree() const {
    unsigned d = 0;
    for (const auto& e : entries_) d = std::max(d, e.degree_in(parameter_index()));
    return d;
  }

  // h_t at a fixed parameter value, as a map of the chart to itself.
  PolyMap at(const Rational& t) const {
    std::vector<Polynomial> pullbacks;
    pullbacks.reserve(entries_.size());
    for (const auto& e : entries_) pullbacks.push_back(embed(evaluate_at(e, parameter_index(), t), space_));
    return PolyMap(space_, space_, std::move(pullbacks));
  }

  // coefficients()[i][k] is the coefficient of t^k in entry i, over the chart.
  std::vector<std::vector<Polynomial>> coefficients() const {
    const unsigned n = parameter_degree();
    std::vector<std::vector<Polynomial>> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) {
      auto parts = coefficients_in(e, parameter_index());
      std::vector<Polynomial> row;
      row.reserve(n + 1);
      for (unsigned k = 0; k <= n; ++k) {
        row.push_back(k < parts.size() ? embed(parts[k], space_) : Polynomial(space_));
      }
      out.push_back(std::move(row));
    }
    return out;
  }

  ActionFamily with_parameter(const std::string& name) const {
    if (name == parameter_) return *this;
    ActionFamily renamed;
    renamed.space_ = space_;
    renamed.parameter_ = name;
    renamed.context_ = space_->with_parameters({name});
    for (const auto& e : entries_) {
      Polynomial p(renamed.context_);
      for (const auto& [m, c] : e.terms()) p.add_term(m, c);
      renamed.entries_.push_back(std::move(p));
    }
    return renamed;
  }

  // h_t^*(f) for f on the chart, as a polynomial over context().
  Polynomial pull(const Polynomial& f) const {
    require_compatible(f.context(), space_, "action pullback");
    return substitute(f, entries_, context_);
  }

  friend bool operator==(const ActionFamily& a, const ActionFamily& b) {
    return compatible(a.space_, b.space_) && a.parameter_ == b.parameter_ && a.entries_ == b.entries_;
  }

  std::string str() const {
    std::string s = "{ ";
    for (std::size_t i = 0; i < entries_.size(); ++i) s += space_->var(i).name + " -> " + entries_[i].str() + "; ";
    return s + "}";
  }

 private:
  ChartPtr space_;
  ChartPtr context_;
  std::string parameter_;
  std::vector<Polynomial> entries_;
};

}  // namespace gradua
