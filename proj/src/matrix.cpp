#include "polyaut/matrix.hpp"

#include "polyaut/error.hpp"

namespace polyaut {

Matrix::Matrix(const FieldSpec& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), a_(rows * cols, Scalar::zero(field)) {}

Matrix Matrix::identity(const FieldSpec& field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = Scalar::one(field);
  return m;
}

Matrix Matrix::from_rows(const FieldSpec& field, const std::vector<std::vector<Scalar>>& rows) {
  std::size_t c = rows.empty() ? 0 : rows.front().size();
  Matrix m(field, rows.size(), c);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i].size() == c, Reason::ArityMismatch, "ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) {
      check_same_field(field, rows[i][j].field());
      m(i, j) = rows[i][j];
    }
  }
  return m;
}

Matrix Matrix::operator*(const Matrix& o) const {
  check_same_field(field_, o.field_);
  require(cols_ == o.rows_, Reason::ArityMismatch, "matrix product shape mismatch");
  Matrix r(field_, rows_, o.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const Scalar& aik = (*this)(i, k);
      if (aik.is_zero()) continue;
      for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += aik * o(k, j);
    }
  return r;
}

Matrix Matrix::operator+(const Matrix& o) const {
  check_same_field(field_, o.field_);
  require(rows_ == o.rows_ && cols_ == o.cols_, Reason::ArityMismatch, "matrix sum shape mismatch");
  Matrix r = *this;
  for (std::size_t i = 0; i < a_.size(); ++i) r.a_[i] += o.a_[i];
  return r;
}

Matrix Matrix::operator-(const Matrix& o) const { return *this + o * (-Scalar::one(field_)); }

Matrix Matrix::operator*(const Scalar& c) const {
  Matrix r = *this;
  for (auto& x : r.a_) x *= c;
  return r;
}

std::vector<Scalar> Matrix::apply(std::span<const Scalar> v) const {
  require(v.size() == cols_, Reason::ArityMismatch, "vector length mismatch");
  std::vector<Scalar> out(rows_, Scalar::zero(field_));
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

namespace {

// Row-reduces m in place; returns (rank, determinant factor).
std::pair<std::size_t, Scalar> eliminate(Matrix& m, Matrix* companion) {
  const FieldSpec& f = m.field();
  Scalar det = Scalar::one(f);
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && m(piv, c).is_zero()) ++piv;
    if (piv == m.rows()) {
      det = Scalar::zero(f);
      continue;
    }
    if (piv != r) {
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(piv, j), m(r, j));
      if (companion)
        for (std::size_t j = 0; j < companion->cols(); ++j) std::swap((*companion)(piv, j), (*companion)(r, j));
      det = -det;
    }
    Scalar inv = m(r, c).inverse();
    det *= m(r, c);
    for (std::size_t j = 0; j < m.cols(); ++j) m(r, j) *= inv;
    if (companion)
      for (std::size_t j = 0; j < companion->cols(); ++j) (*companion)(r, j) *= inv;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Scalar factor = m(i, c);
      for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) -= factor * m(r, j);
      if (companion)
        for (std::size_t j = 0; j < companion->cols(); ++j) (*companion)(i, j) -= factor * (*companion)(r, j);
    }
    ++r;
  }
  return {r, det};
}

}  // namespace

Scalar Matrix::det() const {
  require(rows_ == cols_, Reason::ArityMismatch, "determinant of a non-square matrix");
  Matrix m = *this;
  auto [r, d] = eliminate(m, nullptr);
  return r == rows_ ? d : Scalar::zero(field_);
}

std::size_t Matrix::rank() const {
  Matrix m = *this;
  return eliminate(m, nullptr).first;
}

std::optional<Matrix> Matrix::inverse() const {
  require(rows_ == cols_, Reason::ArityMismatch, "inverse of a non-square matrix");
  Matrix m = *this;
  Matrix inv = identity(field_, rows_);
  if (eliminate(m, &inv).first != rows_) return std::nullopt;
  return inv;
}

bool Matrix::is_identity() const { return rows_ == cols_ && *this == identity(field_, rows_); }

bool Matrix::operator==(const Matrix& o) const {
  return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

std::size_t Matrix::hash() const {
  std::size_t h = rows_ * 31 + cols_;
  for (const auto& x : a_) h = h * 1000003u ^ x.hash();
  return h;
}

std::string Matrix::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rows_; ++i) {
    s += i ? ", [" : "[";
    for (std::size_t j = 0; j < cols_; ++j) s += (j ? ", " : "") + (*this)(i, j).to_string();
    s += "]";
  }
  return s + "]";
}

}  // namespace polyaut
