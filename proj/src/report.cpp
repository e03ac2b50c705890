#include "opfrob/report.hpp"

#include <cmath>
#include <cstdio>

namespace opfrob {

const char* to_string(Status s) {
  switch (s) {
    case Status::pass:
      return "pass";
    case Status::fail:
      return "FAIL";
    case Status::error:
      return "ERROR";
  }
  return "?";
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

CheckResult summarize(std::string name, const std::vector<PointOutcome>& outcomes, double tolerance,
                      const PointSet* points) {
  CheckResult c;
  c.name = std::move(name);
  c.tolerance = tolerance;
  c.samples = outcomes.size();
  std::optional<std::size_t> first_error;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    const auto& o = outcomes[i];
    if (!o.error.empty()) {
      if (!first_error) first_error = i;
      continue;
    }
    const double r = std::isnan(o.residual) ? INFINITY : o.residual;
    if (!c.worst_index || r > c.max_residual) {
      c.max_residual = r;
      c.worst_index = i;
    }
  }
  if (first_error) {
    c.status = Status::error;
    c.worst_index = first_error;
    c.detail = outcomes[*first_error].error;
  } else {
    c.status = c.max_residual <= tolerance ? Status::pass : Status::fail;
  }
  if (points && c.worst_index && *c.worst_index < points->size()) c.worst_point = (*points)[*c.worst_index];
  return c;
}

CheckResult boolean_check(std::string name, std::size_t failures, std::size_t samples, std::string detail) {
  CheckResult c;
  c.name = std::move(name);
  c.status = failures == 0 ? Status::pass : Status::fail;
  c.max_residual = static_cast<double>(failures);
  c.tolerance = 0.0;
  c.samples = samples;
  c.detail = std::move(detail);
  return c;
}

void Report::merge(const Report& other) {
  checks_.insert(checks_.end(), other.checks_.begin(), other.checks_.end());
  notes_.insert(notes_.end(), other.notes_.begin(), other.notes_.end());
  for (auto it = other.data_.begin(); it != other.data_.end(); ++it) data_[it.key()] = it.value();
}

const CheckResult* Report::find(const std::string& name) const {
  for (const auto& c : checks_)
    if (c.name == name) return &c;
  return nullptr;
}

bool Report::passed() const {
  for (const auto& c : checks_)
    if (!c.passed()) return false;
  return true;
}

nlohmann::ordered_json Report::to_json(const SamplingSpec& sampling) const {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["command"] = command_;
  j["result"] = passed() ? "pass" : "fail";
  j["sampling"] = {{"seed", sampling.seed},
                   {"count", sampling.count},
                   {"box", {sampling.lo, sampling.hi}},
                   {"guard", sampling.guard}};
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : checks_) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["status"] = c.status == Status::pass ? "pass" : c.status == Status::fail ? "fail" : "error";
    e["max_residual"] = std::isfinite(c.max_residual) ? nlohmann::ordered_json(c.max_residual) : nlohmann::ordered_json("inf");
    e["tolerance"] = c.tolerance;
    e["samples"] = c.samples;
    if (c.worst_index) e["worst_index"] = *c.worst_index;
    if (!c.worst_point.empty()) e["worst_point"] = c.worst_point;
    if (!c.detail.empty()) e["detail"] = c.detail;
    arr.push_back(std::move(e));
  }
  j["checks"] = std::move(arr);
  if (!notes_.empty()) j["notes"] = notes_;
  if (!data_.empty()) j["data"] = data_;
  j["certificate"] = "numerical, at sampled points";
  return j;
}

std::string Report::to_text(const SamplingSpec& sampling) const {
  std::string out;
  char buf[512];
  std::snprintf(buf, sizeof buf, "opfrob %s  seed=%llu samples=%zu box=[%g, %g] guard=%g\n", command_.c_str(),
                static_cast<unsigned long long>(sampling.seed), sampling.count, sampling.lo, sampling.hi,
                sampling.guard);
  out += buf;
  std::size_t width = 5;
  for (const auto& c : checks_) width = std::max(width, c.name.size());
  for (const auto& c : checks_) {
    std::snprintf(buf, sizeof buf, "  %-*s  %-5s  max=%s  tol=%s  n=%zu\n", static_cast<int>(width), c.name.c_str(),
                  to_string(c.status), format_real(c.max_residual).c_str(), format_real(c.tolerance).c_str(),
                  c.samples);
    out += buf;
    if (!c.worst_point.empty() && c.status != Status::pass) {
      out += "      worst point (";
      for (std::size_t k = 0; k < c.worst_point.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%s%.6g", k ? ", " : "", c.worst_point[k]);
        out += buf;
      }
      out += ")\n";
    }
    if (!c.detail.empty()) out += "      " + c.detail + "\n";
  }
  for (const auto& n : notes_) out += "  " + n + "\n";
  // Text results (Hamiltonians, charts); numeric data is in the JSON form only.
  for (auto it = data_.begin(); it != data_.end(); ++it) {
    const auto& v = it.value();
    if (!v.is_array() || v.empty() || !v.front().is_string()) continue;
    out += "  " + it.key() + ":\n";
    for (const auto& line : v) out += "    " + line.get<std::string>() + "\n";
  }
  out += passed() ? "result: PASS" : "result: FAIL";
  out += " (numerical certificate at sampled points)\n";
  return out;
}

}  // namespace opfrob
