#pragma once
// Dense exact linear algebra over a Field.  Row-major, Gaussian elimination
// with first-nonzero pivoting (all fields here are exact).

#include <qp/field.hpp>
#include <qp/poly.hpp>

namespace qp {

class Mat {
public:
  Mat() = default;
  Mat(const Field* f, std::size_t rows, std::size_t cols);
  static Mat identity(const Field* f, std::size_t n);

  const Field* field() const { return f_; }
  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  Elem& at(std::size_t i, std::size_t j) { return a_[i * c_ + j]; }
  const Elem& at(std::size_t i, std::size_t j) const { return a_[i * c_ + j]; }

  bool operator==(const Mat& o) const;

private:
  const Field* f_ = nullptr;
  std::size_t r_ = 0, c_ = 0;
  std::vector<Elem> a_;
};

Mat mat_add(const Mat& a, const Mat& b);
Mat mat_sub(const Mat& a, const Mat& b);
Mat mat_mul(const Mat& a, const Mat& b);
Mat mat_scale(const Mat& a, const Elem& s);
Mat mat_transpose(const Mat& a);
std::vector<Elem> mat_apply(const Mat& a, const std::vector<Elem>& v);

std::size_t mat_rank(Mat a);
Elem mat_det(Mat a);
std::optional<Mat> mat_inverse(const Mat& a);
// Basis of the right kernel {x : a x = 0}, as columns.
std::vector<std::vector<Elem>> mat_kernel(const Mat& a);
// One solution of a x = b, or nullopt.
std::optional<std::vector<Elem>> mat_solve(const Mat& a, const std::vector<Elem>& b);
// Reduced row echelon form in place; returns pivot column indices.
std::vector<std::size_t> mat_rref(Mat& a);

// Characteristic polynomial via the Hessenberg recurrence (field divisions
// only, valid in any characteristic).
Poly mat_charpoly(const Mat& a);

// Span utilities for vectors over a field.
class SpanBasis {
public:
  explicit SpanBasis(const Field* f, std::size_t dim);
  // Returns true when v was independent (and got absorbed).
  bool absorb(std::vector<Elem> v);
  bool contains(const std::vector<Elem>& v) const;
  std::size_t size() const { return rows_.size(); }
  const std::vector<std::vector<Elem>>& rows() const { return rows_; }
  // Coordinates of v in terms of the absorbed (row-reduced) basis.
  std::optional<std::vector<Elem>> coordinates(const std::vector<Elem>& v) const;

private:
  const Field* f_;
  std::size_t dim_;
  std::vector<std::vector<Elem>> rows_;   // row-echelon, pivots normalized to 1
  std::vector<std::size_t> pivots_;
  std::vector<std::vector<Elem>> raw_;    // the vectors as absorbed
};

} // namespace qp
