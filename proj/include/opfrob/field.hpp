#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "opfrob/expr.hpp"
#include "opfrob/jet.hpp"
#include "opfrob/matrix.hpp"
#include "opfrob/taylor.hpp"

namespace opfrob {

namespace detail {

struct MatrixFieldImpl {
  virtual ~MatrixFieldImpl() = default;
  virtual Matrix<double> eval(std::span<const double> u) const = 0;
  virtual Matrix<Jet> eval(std::span<const Jet> u) const = 0;
  virtual Matrix<Series> eval(std::span<const Series> u) const = 0;
};

template <class F>
struct FunctionMatrixField final : MatrixFieldImpl {
  explicit FunctionMatrixField(F f) : fn(std::move(f)) {}
  Matrix<double> eval(std::span<const double> u) const override { return fn(u); }
  Matrix<Jet> eval(std::span<const Jet> u) const override { return fn(u); }
  Matrix<Series> eval(std::span<const Series> u) const override { return fn(u); }
  F fn;
};

struct VectorFieldImpl {
  virtual ~VectorFieldImpl() = default;
  virtual std::vector<double> eval(std::span<const double> u) const = 0;
  virtual std::vector<Jet> eval(std::span<const Jet> u) const = 0;
  virtual std::vector<Series> eval(std::span<const Series> u) const = 0;
};

template <class F>
struct FunctionVectorField final : VectorFieldImpl {
  explicit FunctionVectorField(F f) : fn(std::move(f)) {}
  std::vector<double> eval(std::span<const double> u) const override { return fn(u); }
  std::vector<Jet> eval(std::span<const Jet> u) const override { return fn(u); }
  std::vector<Series> eval(std::span<const Series> u) const override { return fn(u); }
  F fn;
};

}  // namespace detail

// n x n matrix-valued function of u1..un. Either a grid of expressions or an
// arbitrary generic callable (used for derived fields such as dual bases).
class OperatorField {
 public:
  OperatorField() = default;

  static OperatorField from_expressions(std::vector<Expression> entries, std::size_t dimension);
  static OperatorField parse(const std::vector<std::vector<std::string>>& grid, std::size_t dimension);
  static OperatorField constant(const Matrix<double>& m);

  // f must accept std::span<const T> for T in {double, Jet, Series} and
  // return Matrix<T>.
  template <class F>
  static OperatorField from_function(std::size_t dimension, F f, bool constant = false) {
    OperatorField out;
    out.dimension_ = dimension;
    out.constant_ = constant;
    out.impl_ = std::make_shared<detail::FunctionMatrixField<F>>(std::move(f));
    return out;
  }

  std::size_t dimension() const noexcept { return dimension_; }
  bool is_constant() const noexcept { return constant_; }
  bool has_expressions() const noexcept { return !entries_.empty(); }
  const std::vector<Expression>& expressions() const noexcept { return entries_; }
  std::vector<Expression> denominators() const;

  template <class T>
  Matrix<T> eval(std::span<const T> u) const {
    return impl_->eval(u);
  }
  Matrix<double> operator()(std::span<const double> u) const { return impl_->eval(u); }

 private:
  std::shared_ptr<const detail::MatrixFieldImpl> impl_;
  std::vector<Expression> entries_;
  std::size_t dimension_ = 0;
  bool constant_ = false;
};

// n-vector of scalar functions: one-form components, charts, coefficient lists.
class FunctionTuple {
 public:
  FunctionTuple() = default;

  static FunctionTuple from_expressions(std::vector<Expression> entries, std::size_t dimension);
  static FunctionTuple parse(const std::vector<std::string>& entries, std::size_t dimension);
  static FunctionTuple constant(std::vector<double> values, std::size_t dimension);

  template <class F>
  static FunctionTuple from_function(std::size_t dimension, std::size_t size, F f, bool constant = false) {
    FunctionTuple out;
    out.dimension_ = dimension;
    out.size_ = size;
    out.constant_ = constant;
    out.impl_ = std::make_shared<detail::FunctionVectorField<F>>(std::move(f));
    return out;
  }

  std::size_t dimension() const noexcept { return dimension_; }
  std::size_t size() const noexcept { return size_; }
  bool is_constant() const noexcept { return constant_; }
  const std::vector<Expression>& expressions() const noexcept { return entries_; }
  std::vector<Expression> denominators() const;

  template <class T>
  std::vector<T> eval(std::span<const T> u) const {
    return impl_->eval(u);
  }

 private:
  std::shared_ptr<const detail::VectorFieldImpl> impl_;
  std::vector<Expression> entries_;
  std::size_t dimension_ = 0;
  std::size_t size_ = 0;
  bool constant_ = false;
};

using OneFormField = FunctionTuple;

// n operator fields on an n-dimensional manifold.
class OperatorBasis {
 public:
  OperatorBasis() = default;
  explicit OperatorBasis(std::vector<OperatorField> fields);

  std::size_t dimension() const noexcept { return fields_.size(); }
  std::size_t size() const noexcept { return fields_.size(); }
  const OperatorField& operator[](std::size_t i) const { return fields_[i]; }
  const std::vector<OperatorField>& fields() const noexcept { return fields_; }
  bool is_constant() const;
  std::vector<Expression> denominators() const;

  template <class T>
  std::vector<Matrix<T>> eval(std::span<const T> u) const {
    std::vector<Matrix<T>> out;
    out.reserve(fields_.size());
    for (const auto& f : fields_) out.push_back(f.eval(u));
    return out;
  }

 private:
  std::vector<OperatorField> fields_;
};

// Evaluates a field at a plain point with jets seeded on every coordinate.
inline Matrix<Jet> eval_jet(const OperatorField& f, std::span<const double> u) {
  auto j = seed_jets(u);
  return f.eval(std::span<const Jet>(j));
}

}  // namespace opfrob
