#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "opfrob/error.hpp"

namespace opfrob {

// First-order forward-mode jet: a value and its partials with respect to up to
// `capacity` coordinates. Constructing from a double gives a constant.
class Jet {
 public:
  static constexpr std::size_t capacity = 16;

  Jet() = default;
  Jet(double value) : value_(value) {}  // NOLINT(google-explicit-constructor)

  static Jet variable(double value, std::size_t index) {
    if (index >= capacity) throw InputError("jet dimension exceeds capacity");
    Jet j(value);
    j.d_[index] = 1.0;
    return j;
  }

  double value() const noexcept { return value_; }
  double partial(std::size_t k) const noexcept { return d_[k]; }
  double& partial(std::size_t k) noexcept { return d_[k]; }
  std::span<const double, capacity> partials() const noexcept { return d_; }

  Jet operator-() const {
    Jet r;
    r.value_ = -value_;
    for (std::size_t k = 0; k < capacity; ++k) r.d_[k] = -d_[k];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    value_ += o.value_;
    for (std::size_t k = 0; k < capacity; ++k) d_[k] += o.d_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    value_ -= o.value_;
    for (std::size_t k = 0; k < capacity; ++k) d_[k] -= o.d_[k];
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    for (std::size_t k = 0; k < capacity; ++k) d_[k] = d_[k] * o.value_ + value_ * o.d_[k];
    value_ *= o.value_;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    const double q = value_ / o.value_;
    for (std::size_t k = 0; k < capacity; ++k) d_[k] = (d_[k] - q * o.d_[k]) / o.value_;
    value_ = q;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, const Jet& b) { return a *= b; }
  friend Jet operator/(Jet a, const Jet& b) { return a /= b; }

 private:
  double value_ = 0.0;
  std::array<double, capacity> d_{};
};

inline double value_of(double x) noexcept { return x; }
inline double value_of(const Jet& j) noexcept { return j.value(); }

// Jets seeded so that partial k is d/du^k.
inline std::vector<Jet> seed_jets(std::span<const double> point) {
  if (point.size() > Jet::capacity) throw InputError("dimension exceeds jet capacity");
  std::vector<Jet> out;
  out.reserve(point.size());
  for (std::size_t k = 0; k < point.size(); ++k) out.push_back(Jet::variable(point[k], k));
  return out;
}

}  // namespace opfrob
