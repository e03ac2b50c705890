#include "opfrob/field.hpp"

#include "opfrob/error.hpp"

namespace opfrob {

namespace {

struct ExpressionMatrixField final : detail::MatrixFieldImpl {
  ExpressionMatrixField(std::vector<Expression> e, std::size_t n) : entries(std::move(e)), n(n) {}

  template <class T>
  Matrix<T> run(std::span<const T> u) const {
    Matrix<T> m(n);
    for (std::size_t i = 0; i < entries.size(); ++i) m.data()[i] = entries[i].eval(u);
    return m;
  }

  Matrix<double> eval(std::span<const double> u) const override { return run(u); }
  Matrix<Jet> eval(std::span<const Jet> u) const override { return run(u); }
  Matrix<Series> eval(std::span<const Series> u) const override { return run(u); }

  std::vector<Expression> entries;
  std::size_t n;
};

struct ExpressionVectorField final : detail::VectorFieldImpl {
  explicit ExpressionVectorField(std::vector<Expression> e) : entries(std::move(e)) {}

  template <class T>
  std::vector<T> run(std::span<const T> u) const {
    std::vector<T> v;
    v.reserve(entries.size());
    for (const auto& e : entries) v.push_back(e.eval(u));
    return v;
  }

  std::vector<double> eval(std::span<const double> u) const override { return run(u); }
  std::vector<Jet> eval(std::span<const Jet> u) const override { return run(u); }
  std::vector<Series> eval(std::span<const Series> u) const override { return run(u); }

  std::vector<Expression> entries;
};

bool all_constant(const std::vector<Expression>& es) {
  for (const auto& e : es)
    if (!e.is_constant()) return false;
  return true;
}

void append_denominators(const std::vector<Expression>& es, std::vector<Expression>& out) {
  for (const auto& e : es) {
    auto d = e.denominators();
    out.insert(out.end(), d.begin(), d.end());
  }
}

}  // namespace

OperatorField OperatorField::from_expressions(std::vector<Expression> entries, std::size_t dimension) {
  if (entries.size() != dimension * dimension) throw InputError("operator field needs n*n entries");
  for (const auto& e : entries)
    if (e.dimension() != dimension || e.variable_set() != VariableSet::coordinates)
      throw InputError("operator field entry has the wrong dimension");
  OperatorField out;
  out.dimension_ = dimension;
  out.constant_ = all_constant(entries);
  out.entries_ = entries;
  out.impl_ = std::make_shared<ExpressionMatrixField>(std::move(entries), dimension);
  return out;
}

OperatorField OperatorField::parse(const std::vector<std::vector<std::string>>& grid, std::size_t dimension) {
  if (grid.size() != dimension) throw InputError("operator field must have n rows");
  std::vector<Expression> entries;
  entries.reserve(dimension * dimension);
  for (const auto& row : grid) {
    if (row.size() != dimension) throw InputError("operator field must have n columns");
    for (const auto& text : row) entries.push_back(Expression::parse(text, dimension));
  }
  return from_expressions(std::move(entries), dimension);
}

OperatorField OperatorField::constant(const Matrix<double>& m) {
  std::vector<Expression> entries;
  entries.reserve(m.data().size());
  for (double v : m.data()) entries.push_back(Expression::constant(v, m.size()));
  return from_expressions(std::move(entries), m.size());
}

std::vector<Expression> OperatorField::denominators() const {
  std::vector<Expression> out;
  append_denominators(entries_, out);
  return out;
}

FunctionTuple FunctionTuple::from_expressions(std::vector<Expression> entries, std::size_t dimension) {
  for (const auto& e : entries)
    if (e.dimension() != dimension || e.variable_set() != VariableSet::coordinates)
      throw InputError("function entry has the wrong dimension");
  FunctionTuple out;
  out.dimension_ = dimension;
  out.size_ = entries.size();
  out.constant_ = all_constant(entries);
  out.entries_ = entries;
  out.impl_ = std::make_shared<ExpressionVectorField>(std::move(entries));
  return out;
}

FunctionTuple FunctionTuple::parse(const std::vector<std::string>& entries, std::size_t dimension) {
  std::vector<Expression> es;
  es.reserve(entries.size());
  for (const auto& text : entries) es.push_back(Expression::parse(text, dimension));
  return from_expressions(std::move(es), dimension);
}

FunctionTuple FunctionTuple::constant(std::vector<double> values, std::size_t dimension) {
  std::vector<Expression> es;
  es.reserve(values.size());
  for (double v : values) es.push_back(Expression::constant(v, dimension));
  return from_expressions(std::move(es), dimension);
}

std::vector<Expression> FunctionTuple::denominators() const {
  std::vector<Expression> out;
  append_denominators(entries_, out);
  return out;
}

OperatorBasis::OperatorBasis(std::vector<OperatorField> fields) : fields_(std::move(fields)) {
  if (fields_.empty()) throw InputError("basis must not be empty");
  for (const auto& f : fields_)
    if (f.dimension() != fields_.size()) throw InputError("basis must contain exactly n fields of dimension n");
}

bool OperatorBasis::is_constant() const {
  for (const auto& f : fields_)
    if (!f.is_constant()) return false;
  return true;
}

std::vector<Expression> OperatorBasis::denominators() const {
  std::vector<Expression> out;
  for (const auto& f : fields_) {
    auto d = f.denominators();
    out.insert(out.end(), d.begin(), d.end());
  }
  return out;
}

}  // namespace opfrob
