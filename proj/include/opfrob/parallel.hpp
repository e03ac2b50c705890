#pragma once

#include <cstddef>
#include <exception>
#include <string>
#include <vector>

#include "opfrob/error.hpp"

namespace opfrob {

enum class Execution { serial, parallel };

struct PointOutcome {
  double residual = 0.0;
  std::string error;  // non-empty when the point could not be evaluated
};

// Runs fn(i) -> double for i in [0, count). Outcomes are stored by index, so
// the reduction afterwards is independent of scheduling.
template <class F>
std::vector<PointOutcome> evaluate_points(std::size_t count, Execution exec, F&& fn) {
  std::vector<PointOutcome> out(count);
  auto one = [&](std::size_t i) {
    try {
      out[i].residual = fn(i);
    } catch (const Error& e) {
      out[i].error = e.what();
    } catch (const std::exception& e) {
      out[i].error = std::string("internal error: ") + e.what();
    }
  };
  if (exec == Execution::parallel) {
    const long long n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
    for (long long i = 0; i < n; ++i) one(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < count; ++i) one(i);
  }
  return out;
}

}  // namespace opfrob
