#include "opfrob/sampling.hpp"

#include <cmath>

#include "opfrob/error.hpp"

namespace opfrob {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the pair.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void Domain::require(const Expression& e, double min) {
  require(
      "|" + e.to_string() + "|", [e](std::span<const double> u) { return e.eval(u); }, min);
}

void Domain::require(std::string label, std::function<double(std::span<const double>)> value, double min) {
  guards_.push_back(Guard{std::move(label), std::move(value), min});
}

void Domain::add_denominators(const std::vector<Expression>& es) {
  denominators_.insert(denominators_.end(), es.begin(), es.end());
}

bool Domain::admits(std::span<const double> u, double default_guard) const {
  try {
    for (const auto& d : denominators_) {
      if (d.arity() != u.size()) continue;
      const double v = d.eval(u);
      if (!std::isfinite(v) || std::abs(v) < default_guard) return false;
    }
    for (const auto& g : guards_) {
      const double v = g.value(u);
      if (!std::isfinite(v) || std::abs(v) < g.min) return false;
    }
  } catch (const EvalError&) {
    return false;
  }
  return true;
}

PointSet sample_points(std::size_t dimension, const SamplingSpec& spec, const Domain& domain) {
  if (spec.hi <= spec.lo) throw InputError("sampling box is empty");
  Rng rng(spec.seed);
  PointSet out;
  out.reserve(spec.count);
  const std::size_t budget = 1000 * std::max<std::size_t>(spec.count, 1);
  for (std::size_t draw = 0; draw < budget && out.size() < spec.count; ++draw) {
    auto u = rng.uniform_vector(dimension, spec.lo, spec.hi);
    if (domain.admits(u, spec.guard)) out.push_back(std::move(u));
  }
  if (out.size() < spec.count) throw InputError("could not find enough admissible sample points");
  return out;
}

}  // namespace opfrob
