#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gradua/chart.hpp"
#include "gradua/matrix.hpp"
#include "gradua/polynomial.hpp"

namespace gradua {

// Polynomial map between charts, stored contravariantly: pullback(j) is the
// target coordinate j expressed as a polynomial on the source chart.
class PolyMap {
 public:
  PolyMap() = default;
  PolyMap(ChartPtr source, ChartPtr target, std::vector<Polynomial> pullbacks)
      : source_(std::move(source)), target_(std::move(target)), pullbacks_(std::move(pullbacks)) {
    if (!source_ || !target_) throw DomainError("polynomial map needs source and target charts");
    if (pullbacks_.size() != target_->size()) {
      throw DomainError("map into '" + target_->name() + "' needs one pullback per target coordinate");
    }
    for (auto& p : pullbacks_) {
      if (!p.context()) {
        p = Polynomial(source_);
      } else if (!compatible(p.context(), source_)) {
        p = embed(p, source_);
      }
    }
  }

  static PolyMap identity(const ChartPtr& chart) {
    std::vector<Polynomial> pullbacks;
    pullbacks.reserve(chart->size());
    for (std::size_t i = 0; i < chart->size(); ++i) pullbacks.push_back(Polynomial::variable(chart, i));
    return PolyMap(chart, chart, std::move(pullbacks));
  }

  const ChartPtr& source() const { return source_; }
  const ChartPtr& target() const { return target_; }
  const std::vector<Polynomial>& pullbacks() const { return pullbacks_; }
  const Polynomial& pullback(std::size_t j) const { return pullbacks_.at(j); }
  const Polynomial& pullback(std::string_view name) const { return pullbacks_.at(target_->require_index(name)); }

  // psi^*(f) for f on the target chart.
  Polynomial pull(const Polynomial& f) const {
    require_compatible(f.context(), target_, "pullback");
    return substitute(f, pullbacks_, source_);
  }

  bool is_identity() const {
    if (!compatible(source_, target_)) return false;
    for (std::size_t i = 0; i < pullbacks_.size(); ++i) {
      if (pullbacks_[i] != Polynomial::variable(source_, i)) return false;
    }
    return true;
  }

  friend bool operator==(const PolyMap& a, const PolyMap& b) {
    return compatible(a.source_, b.source_) && compatible(a.target_, b.target_) && a.pullbacks_ == b.pullbacks_;
  }

  std::string str() const {
    std::string s = "{ ";
    for (std::size_t j = 0; j < pullbacks_.size(); ++j) {
      s += target_->var(j).name + " = " + pullbacks_[j].str() + "; ";
    }
    return s + "}";
  }

 private:
  ChartPtr source_;
  ChartPtr target_;
  std::vector<Polynomial> pullbacks_;
};

// The map "apply `first`, then `then`". Its pullbacks are then's pullbacks with
// first's pullbacks substituted in, so the pullback operators compose as
// first^* o then^*.
inline PolyMap compose(const PolyMap& first, const PolyMap& then) {
  require_compatible(first.target(), then.source(), "compose");
  std::vector<Polynomial> pullbacks;
  pullbacks.reserve(then.target()->size());
  for (const auto& p : then.pullbacks()) pullbacks.push_back(substitute(p, first.pullbacks(), first.source()));
  return PolyMap(first.source(), then.target(), std::move(pullbacks));
}

// Linear map with matrix a: target coordinate j pulls back to sum_i a(j, i) x_i.
inline PolyMap linear_map(const ChartPtr& source, const ChartPtr& target, const Matrix& a) {
  if (a.rows() != target->size() || a.cols() != source->size()) throw DomainError("linear_map: matrix shape");
  std::vector<Polynomial> pullbacks;
  for (std::size_t j = 0; j < target->size(); ++j) {
    Polynomial p(source);
    for (std::size_t i = 0; i < source->size(); ++i) {
      if (a(j, i) == 0) continue;
      Monomial m(source->size(), 0);
      m[i] = 1;
      p.add_term(m, a(j, i));
    }
    pullbacks.push_back(std::move(p));
  }
  return PolyMap(source, target, std::move(pullbacks));
}

}  // namespace gradua
