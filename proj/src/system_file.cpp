#include "opfrob/system_file.hpp"

#include <fstream>
#include <sstream>

namespace opfrob {

namespace {

const nlohmann::json* member(const nlohmann::json& j, const char* key) {
  const auto it = j.find(key);
  return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::vector<std::string> string_list(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw InputError(std::string(key) + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (!e.is_string()) throw InputError(std::string(key) + " must be an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

// Numbers may be given as JSON numbers or as constant expressions.
double real(const nlohmann::json& j, const char* key) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto e = Expression::parse(j.get<std::string>(), 1);
    if (!e.is_constant()) throw InputError(std::string(key) + " must be constant");
    const std::vector<double> z{0.0};
    return e.eval(std::span<const double>(z));
  }
  throw InputError(std::string(key) + " must be a number");
}

std::vector<double> real_list(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw InputError(std::string(key) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : j) out.push_back(real(e, key));
  return out;
}

std::vector<std::vector<std::string>> grid(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + " must be an array of rows");
  std::vector<std::vector<std::string>> rows;
  for (const auto& r : j) {
    std::vector<std::string> row;
    if (!r.is_array()) throw InputError(what + " must be an array of rows");
    for (const auto& e : r) {
      if (e.is_string())
        row.push_back(e.get<std::string>());
      else if (e.is_number())
        row.push_back(e.dump());
      else
        throw InputError(what + " entries must be strings or numbers");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<std::string> entries(const nlohmann::json& j, const char* key) {
  if (!j.is_array()) throw InputError(std::string(key) + " must be an array");
  std::vector<std::string> out;
  for (const auto& e : j) {
    if (e.is_string())
      out.push_back(e.get<std::string>());
    else if (e.is_number())
      out.push_back(e.dump());
    else
      throw InputError(std::string(key) + " entries must be strings or numbers");
  }
  return out;
}

void check_known_keys(const nlohmann::json& j) {
  static const char* known[] = {"schema",       "dimension",     "fields",        "basis",          "system_basis",
                                "candidates",   "flows",         "covector",      "flat_vector",    "one_form",
                                "chart",        "hamiltonians",  "polynomials",   "initial_curve",  "order",
                                "flow_tolerance", "levels",      "commands",      "sampling",       "description"};
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) throw InputError("unknown key in system file: " + it.key());
  }
}

}  // namespace

SystemFile SystemFile::from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw InputError("system file must be a JSON object");
  check_known_keys(j);
  const auto* schema = member(j, "schema");
  if (!schema || !schema->is_number_integer() || schema->get<int>() != 1)
    throw InputError("system file needs \"schema\": 1");
  const auto* dim = member(j, "dimension");
  if (!dim || !dim->is_number_integer() || dim->get<long long>() < 1 || dim->get<long long>() > 8)
    throw InputError("dimension must be an integer between 1 and 8");
  SystemFile f;
  f.dimension = dim->get<std::size_t>();
  const std::size_t n = f.dimension;

  if (const auto* fs = member(j, "fields")) {
    if (!fs->is_object()) throw InputError("fields must be an object of named grids");
    for (auto it = fs->begin(); it != fs->end(); ++it) {
      const auto g = grid(it.value(), "field " + it.key());
      try {
        f.fields.emplace(it.key(), OperatorField::parse(g, n));
      } catch (const ParseError& e) {
        throw InputError("field " + it.key() + ": " + e.what());
      }
    }
  }
  auto names = [&](const char* key, std::vector<std::string>& out) {
    if (const auto* v = member(j, key)) {
      out = string_list(*v, key);
      for (const auto& s : out)
        if (!f.fields.count(s)) throw InputError(std::string(key) + " refers to unknown field " + s);
    }
  };
  names("basis", f.basis);
  names("system_basis", f.system_basis);
  names("candidates", f.candidates);
  names("flows", f.flows);
  if (const auto* v = member(j, "covector")) {
    f.covector = real_list(*v, "covector");
    if (f.covector->size() != n) throw InputError("covector must have n components");
  }
  if (const auto* v = member(j, "flat_vector")) {
    f.flat_vector = real_list(*v, "flat_vector");
    if (f.flat_vector->size() != n) throw InputError("flat_vector must have n components");
  }
  if (const auto* v = member(j, "one_form")) {
    const auto e = entries(*v, "one_form");
    if (e.size() != n) throw InputError("one_form must have n components");
    f.one_form = OneFormField::parse(e, n);
  }
  if (const auto* v = member(j, "chart")) {
    const auto e = entries(*v, "chart");
    if (e.size() != n) throw InputError("chart must have n functions");
    f.chart = FunctionTuple::parse(e, n);
  }
  if (const auto* v = member(j, "hamiltonians")) {
    if (!v->is_array()) throw InputError("hamiltonians must be an array");
    for (const auto& h : *v) {
      if (h.is_string())
        f.hamiltonians.push_back(QuadraticHamiltonian::parse(h.get<std::string>(), n));
      else
        f.hamiltonians.push_back(QuadraticHamiltonian::from_grid(grid(h, "hamiltonian"), n));
    }
  }
  if (const auto* v = member(j, "polynomials")) {
    if (!v->is_array()) throw InputError("polynomials must be an array");
    for (const auto& p : *v) {
      const auto* name = member(p, "name");
      const auto* coeffs = member(p, "f");
      if (!name || !name->is_string() || !coeffs || !coeffs->is_array())
        throw InputError("each polynomial entry needs \"name\" and \"f\"");
      NamedPolynomials np{name->get<std::string>(), {}};
      for (const auto& c : *coeffs) np.f.push_back(real_list(c, "polynomial coefficients"));
      if (np.f.size() != n) throw InputError("polynomial " + np.name + " needs n coefficient lists");
      f.polynomials.push_back(std::move(np));
    }
  }
  if (const auto* v = member(j, "initial_curve")) {
    InitialCurve c;
    if (const auto* x0 = member(*v, "x0")) c.x0 = real(*x0, "x0");
    const auto* cs = member(*v, "coefficients");
    if (!cs || !cs->is_array()) throw InputError("initial_curve needs coefficients");
    for (const auto& row : *cs) c.coefficients.push_back(real_list(row, "initial_curve coefficients"));
    if (c.coefficients.size() != n) throw InputError("initial_curve needs n components");
    f.initial_curve = std::move(c);
  }
  if (const auto* v = member(j, "order")) {
    if (!v->is_number_integer()) throw InputError("order must be an integer");
    f.order = v->get<int>();
  }
  if (const auto* v = member(j, "flow_tolerance")) f.flow_tolerance = real(*v, "flow_tolerance");
  if (const auto* v = member(j, "levels")) {
    if (!v->is_array()) throw InputError("levels must be an array");
    for (const auto& c : *v) {
      f.levels.push_back(real_list(c, "levels"));
      if (f.levels.back().size() != n) throw InputError("each level vector needs n components");
    }
  }
  if (const auto* v = member(j, "commands")) f.commands = string_list(*v, "commands");
  if (const auto* s = member(j, "sampling")) {
    if (!s->is_object()) throw InputError("sampling must be an object");
    if (const auto* v = member(*s, "seed")) {
      if (!v->is_number_unsigned()) throw InputError("sampling.seed must be a non-negative integer");
      f.sampling.seed = v->get<std::uint64_t>();
    }
    if (const auto* v = member(*s, "count")) {
      if (!v->is_number_unsigned() || v->get<std::size_t>() == 0) throw InputError("sampling.count must be positive");
      f.sampling.count = v->get<std::size_t>();
    }
    if (const auto* v = member(*s, "box")) {
      const auto box = real_list(*v, "sampling.box");
      if (box.size() != 2 || !(box[0] < box[1])) throw InputError("sampling.box must be [lo, hi] with lo < hi");
      f.sampling.lo = box[0];
      f.sampling.hi = box[1];
    }
    if (const auto* v = member(*s, "guard")) f.sampling.guard = real(*v, "sampling.guard");
    if (const auto* v = member(*s, "guards")) {
      if (!v->is_array()) throw InputError("sampling.guards must be an array");
      for (const auto& g : *v) {
        const auto* e = member(g, "expr");
        const auto* m = member(g, "min");
        if (!e || !e->is_string() || !m) throw InputError("each guard needs \"expr\" and \"min\"");
        f.guards.push_back({Expression::parse(e->get<std::string>(), n), real(*m, "guard min")});
      }
    }
  }
  return f;
}

SystemFile SystemFile::from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what(), e.byte);
  }
  return from_json(j);
}

SystemFile SystemFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

const OperatorField& SystemFile::field(const std::string& name) const {
  const auto it = fields.find(name);
  if (it == fields.end()) throw InputError("unknown field " + name);
  return it->second;
}

std::vector<OperatorField> SystemFile::field_list(const std::vector<std::string>& names) const {
  std::vector<OperatorField> out;
  for (const auto& s : names) out.push_back(field(s));
  return out;
}

OperatorBasis SystemFile::operator_basis(const std::vector<std::string>& names) const {
  if (names.size() != dimension) throw InputError("basis must list exactly n fields");
  return OperatorBasis(field_list(names));
}

const std::vector<std::string>& SystemFile::generating_names() const {
  return system_basis.empty() ? basis : system_basis;
}

Domain SystemFile::domain() const {
  Domain d;
  for (const auto& g : guards) d.require(g.expr, g.min);
  for (const auto& [name, f] : fields) d.add_denominators(f.denominators());
  if (one_form) d.add_denominators(one_form->denominators());
  if (chart) d.add_denominators(chart->denominators());
  for (const auto& h : hamiltonians) {
    if (!h.expression()) {
      d.add_denominators(h.coefficients().denominators());
      continue;
    }
    // Keep denominators free of momenta.
    std::vector<Expression> coordinate_only;
    for (const auto& e : h.expression()->denominators()) {
      try {
        coordinate_only.push_back(Expression::parse(e.to_string(), dimension));
      } catch (const ParseError&) {
      }
    }
    d.add_denominators(coordinate_only);
  }
  return d;
}

}  // namespace opfrob
