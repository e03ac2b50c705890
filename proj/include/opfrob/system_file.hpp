#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opfrob/field.hpp"
#include "opfrob/hydroflow.hpp"
#include "opfrob/integ.hpp"
#include "opfrob/sampling.hpp"
#include "opfrob/symalg.hpp"

namespace opfrob {

struct NamedPolynomials {
  std::string name;
  std::vector<Polynomial> f;
};

struct SamplingGuard {
  Expression expr;
  double min = 0.0;
};

// Parsed system file (schema 1, see docs/system-file.md).
struct SystemFile {
  std::size_t dimension = 0;
  std::map<std::string, OperatorField> fields;
  std::vector<std::string> basis;
  std::vector<std::string> system_basis;
  std::vector<std::string> candidates;
  std::vector<std::string> flows;
  std::optional<std::vector<double>> covector;
  std::optional<std::vector<double>> flat_vector;
  std::optional<OneFormField> one_form;
  std::optional<FunctionTuple> chart;
  std::vector<QuadraticHamiltonian> hamiltonians;
  std::vector<NamedPolynomials> polynomials;
  std::optional<InitialCurve> initial_curve;
  int order = 4;
  double flow_tolerance = 1e-8;
  std::vector<std::vector<double>> levels;
  std::vector<std::string> commands;
  SamplingSpec sampling;
  std::vector<SamplingGuard> guards;

  static SystemFile from_json(const nlohmann::json& j);
  static SystemFile from_text(const std::string& text);
  static SystemFile load(const std::string& path);

  const OperatorField& field(const std::string& name) const;
  OperatorBasis operator_basis(const std::vector<std::string>& names) const;
  std::vector<OperatorField> field_list(const std::vector<std::string>& names) const;
  // Basis used to generate Hamiltonians: system_basis when given, else basis.
  const std::vector<std::string>& generating_names() const;

  // File guards plus every coordinate denominator appearing in the data.
  Domain domain() const;
};

}  // namespace opfrob
