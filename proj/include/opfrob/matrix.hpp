#pragma once

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "opfrob/error.hpp"
#include "opfrob/jet.hpp"

namespace opfrob {

// Dense square matrix, row-major, over a generic scalar (double, Jet, Series).
template <class T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;
  explicit Matrix(std::size_t n, const T& fill = T(0.0)) : n_(n), a_(n * n, fill) {}
  Matrix(std::initializer_list<std::initializer_list<T>> rows) : n_(rows.size()) {
    a_.reserve(n_ * n_);
    for (const auto& r : rows) {
      if (r.size() != n_) throw InputError("matrix must be square");
      a_.insert(a_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  template <class U>
  static Matrix cast(const Matrix<U>& other) {
    Matrix m(other.size());
    for (std::size_t i = 0; i < other.data().size(); ++i) m.a_[i] = T(other.data()[i]);
    return m;
  }

  std::size_t size() const noexcept { return n_; }
  T& operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }
  std::span<T> data() noexcept { return a_; }
  std::span<const T> data() const noexcept { return a_; }

  Matrix transposed() const {
    Matrix t(n_);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  // M v
  std::vector<T> apply(std::span<const T> v) const {
    assert(v.size() == n_);
    std::vector<T> out(n_, T(0.0));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  // M^T w, i.e. the pullback M^* of a covector w.
  std::vector<T> pullback(std::span<const T> w) const {
    assert(w.size() == n_);
    std::vector<T> out(n_, T(0.0));
    for (std::size_t j = 0; j < n_; ++j)
      for (std::size_t i = 0; i < n_; ++i) out[j] += w[i] * (*this)(i, j);
    return out;
  }

  Matrix& operator+=(const Matrix& o) {
    assert(o.n_ == n_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  Matrix& operator-=(const Matrix& o) {
    assert(o.n_ == n_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  Matrix& operator*=(const T& s) {
    for (auto& x : a_) x *= s;
    return *this;
  }

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const T& s) { return a *= s; }
  friend Matrix operator*(const T& s, Matrix a) { return a *= s; }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    assert(a.n_ == b.n_);
    const std::size_t n = a.n_;
    Matrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) {
        const T& aik = a(i, k);
        for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }

 private:
  std::size_t n_ = 0;
  std::vector<T> a_;
};

inline double max_abs(const Matrix<double>& m) {
  double r = 0.0;
  for (double x : m.data()) r = std::max(r, std::abs(x));
  return r;
}

template <class T>
double max_abs_value(const Matrix<T>& m) {
  double r = 0.0;
  for (const auto& x : m.data()) r = std::max(r, std::abs(value_of(x)));
  return r;
}

template <class T>
Matrix<double> values(const Matrix<T>& m) {
  Matrix<double> v(m.size());
  for (std::size_t i = 0; i < m.data().size(); ++i) v.data()[i] = value_of(m.data()[i]);
  return v;
}

// d/du^k of every entry of a jet matrix.
inline Matrix<double> partial(const Matrix<Jet>& m, std::size_t k) {
  Matrix<double> d(m.size());
  for (std::size_t i = 0; i < m.data().size(); ++i) d.data()[i] = m.data()[i].partial(k);
  return d;
}

// Commutator norm scaled by the operand sizes.
inline double commutator_residual(const Matrix<double>& a, const Matrix<double>& b) {
  const double scale = 1.0 + max_abs(a) * max_abs(b);
  return max_abs(a * b - b * a) / scale;
}

}  // namespace opfrob
