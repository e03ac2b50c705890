#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opfrob/parallel.hpp"
#include "opfrob/sampling.hpp"

namespace opfrob {

enum class Status { pass, fail, error };

const char* to_string(Status s);

struct CheckResult {
  std::string name;
  Status status = Status::pass;
  double max_residual = 0.0;
  double tolerance = 0.0;
  std::size_t samples = 0;
  std::optional<std::size_t> worst_index;
  std::vector<double> worst_point;
  std::string detail;

  bool passed() const noexcept { return status == Status::pass; }
};

// Max-reduction over per-point outcomes. Ties go to the lowest index; a point
// that raised an error makes the whole check an error and its message is kept.
CheckResult summarize(std::string name, const std::vector<PointOutcome>& outcomes, double tolerance,
                      const PointSet* points = nullptr);

// A check that holds or fails outright (no residual): residual is the number
// of failing items and the tolerance is zero.
CheckResult boolean_check(std::string name, std::size_t failures, std::size_t samples, std::string detail = {});

class Report {
 public:
  explicit Report(std::string command = {}) : command_(std::move(command)) {}

  void add(CheckResult c) { checks_.push_back(std::move(c)); }
  void merge(const Report& other);
  void note(std::string line) { notes_.push_back(std::move(line)); }

  const std::string& command() const noexcept { return command_; }
  const std::vector<CheckResult>& checks() const noexcept { return checks_; }
  const std::vector<std::string>& notes() const noexcept { return notes_; }
  const CheckResult* find(const std::string& name) const;
  bool passed() const;

  // Free-form results (Hamiltonians, dual values, ...) carried into the output.
  nlohmann::ordered_json& data() noexcept { return data_; }
  const nlohmann::ordered_json& data() const noexcept { return data_; }

  nlohmann::ordered_json to_json(const SamplingSpec& sampling) const;
  std::string to_text(const SamplingSpec& sampling) const;

 private:
  std::string command_;
  std::vector<CheckResult> checks_;
  std::vector<std::string> notes_;
  nlohmann::ordered_json data_ = nlohmann::ordered_json::object();
};

std::string format_real(double v);

}  // namespace opfrob
