#include "opfrob/taylor.hpp"

#include <map>

#include "opfrob/error.hpp"

namespace opfrob {

namespace {

void enumerate(std::size_t vars, int degree, std::vector<int>& current, std::size_t pos, int remaining,
               std::vector<std::vector<int>>& out) {
  if (pos + 1 == vars) {
    current[pos] = remaining;
    out.push_back(current);
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    current[pos] = e;
    enumerate(vars, degree, current, pos + 1, remaining - e, out);
  }
}

}  // namespace

TaylorLayout::TaylorLayout(std::size_t variables, int degree) : variables_(variables), degree_(degree) {
  if (variables == 0 || degree < 0) throw InputError("invalid Taylor layout");
  std::vector<std::vector<int>> monomials;
  std::vector<int> current(variables, 0);
  for (int d = 0; d <= degree; ++d) enumerate(variables, degree, current, 0, d, monomials);

  std::map<std::vector<int>, std::size_t> index;
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    index.emplace(monomials[i], i);
    exponents_.insert(exponents_.end(), monomials[i].begin(), monomials[i].end());
    int t = 0;
    for (int e : monomials[i]) t += e;
    total_.push_back(t);
  }

  raise_.assign(monomials.size() * variables, npos);
  lower_.assign(monomials.size() * variables, npos);
  for (std::size_t i = 0; i < monomials.size(); ++i) {
    for (std::size_t v = 0; v < variables; ++v) {
      auto up = monomials[i];
      ++up[v];
      if (auto it = index.find(up); it != index.end()) raise_[i * variables + v] = it->second;
      if (monomials[i][v] > 0) {
        auto down = monomials[i];
        --down[v];
        lower_[i * variables + v] = index.at(down);
      }
    }
  }

  factor_start_.push_back(0);
  for (std::size_t a = 0; a < monomials.size(); ++a) {
    for (std::size_t b = 0; b < monomials.size() && total_[b] <= total_[a]; ++b) {
      std::vector<int> rest(variables);
      bool ok = true;
      for (std::size_t v = 0; v < variables; ++v) {
        rest[v] = monomials[a][v] - monomials[b][v];
        if (rest[v] < 0) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
      factors_.emplace_back(static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(index.at(rest)));
    }
    factor_start_.push_back(factors_.size());
  }
}

std::size_t TaylorLayout::index_of(std::span<const int> exps) const {
  if (exps.size() != variables_) return npos;
  int total = 0;
  for (int e : exps) {
    if (e < 0) return npos;
    total += e;
  }
  if (total > degree_) return npos;
  // Graded order: linear scan over the block of this degree is fine at desk scale.
  for (std::size_t i = 0; i < total_.size(); ++i) {
    if (total_[i] != total) continue;
    bool same = true;
    for (std::size_t v = 0; v < variables_ && same; ++v) same = exponents_[i * variables_ + v] == exps[v];
    if (same) return i;
  }
  return npos;
}

Series::Series(std::shared_ptr<const TaylorLayout> layout) : layout_(std::move(layout)) {
  c_.assign(layout_->size(), 0.0);
}

Series Series::variable(std::shared_ptr<const TaylorLayout> layout, std::size_t var, double value) {
  Series s(layout);
  s.c_[0] = value;
  if (layout->degree() >= 1) s.c_[layout->raised(0, var)] = 1.0;
  return s;
}

void Series::promote(const std::shared_ptr<const TaylorLayout>& layout) {
  if (layout_ || !layout) return;
  const double c0 = c_[0];
  layout_ = layout;
  c_.assign(layout_->size(), 0.0);
  c_[0] = c0;
}

Series Series::derivative(std::size_t var) const {
  if (!layout_) return Series(0.0);
  Series out(layout_);
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const std::size_t up = layout_->raised(i, var);
    if (up == TaylorLayout::npos) continue;
    out.c_[i] = static_cast<double>(layout_->exponents(up)[var]) * c_[up];
  }
  return out;
}

Series Series::operator-() const {
  Series r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

Series& Series::operator+=(const Series& o) {
  promote(o.layout_);
  if (o.layout_ && layout_ != o.layout_) throw InputError("mixing series of different layouts");
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Series& Series::operator-=(const Series& o) {
  promote(o.layout_);
  if (o.layout_ && layout_ != o.layout_) throw InputError("mixing series of different layouts");
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Series& Series::operator*=(const Series& o) {
  if (!o.layout_) {
    for (auto& x : c_) x *= o.c_[0];
    return *this;
  }
  if (!layout_) {
    const double k = c_[0];
    *this = o;
    for (auto& x : c_) x *= k;
    return *this;
  }
  if (layout_ != o.layout_) throw InputError("mixing series of different layouts");
  std::vector<double> r(c_.size(), 0.0);
  for (std::size_t a = 0; a < r.size(); ++a)
    for (auto [b, c] : layout_->factorizations(a)) r[a] += c_[b] * o.c_[c];
  c_ = std::move(r);
  return *this;
}

Series& Series::operator/=(const Series& o) {
  const double d0 = o.c_[0];
  if (d0 == 0.0) throw EvalError("series division by a series with zero constant term");
  if (!o.layout_) {
    for (auto& x : c_) x /= d0;
    return *this;
  }
  promote(o.layout_);
  if (layout_ != o.layout_) throw InputError("mixing series of different layouts");
  // q * o = *this solved in graded order.
  std::vector<double> q(c_.size(), 0.0);
  for (std::size_t a = 0; a < q.size(); ++a) {
    double acc = c_[a];
    for (auto [b, c] : layout_->factorizations(a)) {
      if (b == a) continue;
      acc -= q[b] * o.c_[c];
    }
    q[a] = acc / d0;
  }
  c_ = std::move(q);
  return *this;
}

}  // namespace opfrob
