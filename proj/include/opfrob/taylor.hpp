#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace opfrob {

// Monomial table for truncated multivariate Taylor series: all exponent
// vectors of total degree <= degree, stored in graded order.
class TaylorLayout {
 public:
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  TaylorLayout(std::size_t variables, int degree);

  std::size_t variables() const noexcept { return variables_; }
  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return total_.size(); }

  std::span<const int> exponents(std::size_t index) const {
    return {exponents_.data() + index * variables_, variables_};
  }
  int total_degree(std::size_t index) const { return total_[index]; }

  // Index of an exponent vector, or npos if it exceeds the truncation degree.
  std::size_t index_of(std::span<const int> exps) const;

  // Index of exps(index) + e_var, or npos.
  std::size_t raised(std::size_t index, std::size_t var) const { return raise_[index * variables_ + var]; }
  // Index of exps(index) - e_var, or npos when that exponent is zero.
  std::size_t lowered(std::size_t index, std::size_t var) const { return lower_[index * variables_ + var]; }

  // Pairs (b, c) with exps(b) + exps(c) == exps(index).
  std::span<const std::pair<std::uint32_t, std::uint32_t>> factorizations(std::size_t index) const {
    return {factors_.data() + factor_start_[index], factor_start_[index + 1] - factor_start_[index]};
  }

 private:
  std::size_t variables_;
  int degree_;
  std::vector<int> exponents_;
  std::vector<int> total_;
  std::vector<std::size_t> raise_;
  std::vector<std::size_t> lower_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> factors_;
  std::vector<std::size_t> factor_start_;
};

// Truncated multivariate power series. A Series without a layout is a
// constant; binary operations adopt the layout of the non-constant operand.
class Series {
 public:
  Series() : c_{0.0} {}
  Series(double constant) : c_{constant} {}  // NOLINT(google-explicit-constructor)
  explicit Series(std::shared_ptr<const TaylorLayout> layout);

  // The series of a single variable about `value`.
  static Series variable(std::shared_ptr<const TaylorLayout> layout, std::size_t var, double value);

  const std::shared_ptr<const TaylorLayout>& layout() const noexcept { return layout_; }
  bool is_constant_only() const noexcept { return layout_ == nullptr; }
  double constant_term() const noexcept { return c_[0]; }

  std::span<const double> coefficients() const noexcept { return c_; }
  std::span<double> coefficients() noexcept { return c_; }
  double coefficient(std::size_t index) const { return index < c_.size() ? c_[index] : 0.0; }

  Series derivative(std::size_t var) const;

  Series operator-() const;
  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  Series& operator*=(const Series& o);
  Series& operator/=(const Series& o);

  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(Series a, const Series& b) { return a *= b; }
  friend Series operator/(Series a, const Series& b) { return a /= b; }

 private:
  void promote(const std::shared_ptr<const TaylorLayout>& layout);

  std::shared_ptr<const TaylorLayout> layout_;
  std::vector<double> c_;
};

inline double value_of(const Series& s) noexcept { return s.constant_term(); }

}  // namespace opfrob
