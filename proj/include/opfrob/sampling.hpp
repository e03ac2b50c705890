#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "opfrob/expr.hpp"

namespace opfrob {

// Seeded generator with a platform-independent uniform mapping (the standard
// distributions are not specified bit-for-bit across libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    const double unit = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * unit;
  }

  std::vector<double> uniform_vector(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Independent stream for sample index `index`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

struct SamplingSpec {
  std::uint64_t seed = 42;
  std::size_t count = 50;
  double lo = -1.0;
  double hi = 1.0;
  double guard = 1e-3;  // floor on |denominator| at accepted points
};

// A point is admissible when every guard evaluates to at least its minimum
// magnitude.
struct Guard {
  std::string label;
  std::function<double(std::span<const double>)> value;
  double min = 0.0;
};

class Domain {
 public:
  // |e(u)| >= min.
  void require(const Expression& e, double min);
  void require(std::string label, std::function<double(std::span<const double>)> value, double min);
  // Every expression gets the sampling guard as its floor.
  void add_denominators(const std::vector<Expression>& es);

  bool admits(std::span<const double> u, double default_guard) const;
  const std::vector<Guard>& guards() const noexcept { return guards_; }

 private:
  std::vector<Guard> guards_;
  std::vector<Expression> denominators_;
};

using PointSet = std::vector<std::vector<double>>;

// Rejection sampling in the box [lo, hi]^n. Throws InputError when fewer than
// `count` admissible points turn up in 1000 * count draws.
PointSet sample_points(std::size_t dimension, const SamplingSpec& spec, const Domain& domain = {});

}  // namespace opfrob
