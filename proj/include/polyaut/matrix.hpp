#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "polyaut/field.hpp"

namespace polyaut {

/// Dense matrix over a Scalar field, row-major.
class Matrix {
 public:
  Matrix() = default;
  Matrix(const FieldSpec& field, std::size_t rows, std::size_t cols);
  static Matrix identity(const FieldSpec& field, std::size_t n);
  /// Rows given as nested lists; every row must have the same length.
  static Matrix from_rows(const FieldSpec& field, const std::vector<std::vector<Scalar>>& rows);

  const FieldSpec& field() const { return field_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  Matrix operator*(const Matrix& o) const;
  Matrix operator+(const Matrix& o) const;
  Matrix operator-(const Matrix& o) const;
  Matrix operator*(const Scalar& c) const;
  std::vector<Scalar> apply(std::span<const Scalar> v) const;

  Scalar det() const;
  std::size_t rank() const;
  /// nullopt when singular.
  std::optional<Matrix> inverse() const;
  bool is_identity() const;

  bool operator==(const Matrix& o) const;
  std::size_t hash() const;
  std::string to_string() const;

 private:
  FieldSpec field_;
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<Scalar> a_;
};

struct MatrixHash {
  std::size_t operator()(const Matrix& m) const { return m.hash(); }
};

}  // namespace polyaut
