#include <qp/linalg.hpp>

namespace qp {

Mat::Mat(const Field* f, std::size_t rows, std::size_t cols)
    : f_(f), r_(rows), c_(cols), a_(rows * cols, zero(f)) {}

Mat Mat::identity(const Field* f, std::size_t n) {
  Mat m(f, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = one(f);
  return m;
}

bool Mat::operator==(const Mat& o) const {
  if (r_ != o.r_ || c_ != o.c_ || f_ != o.f_) return false;
  for (std::size_t i = 0; i < a_.size(); ++i)
    if (!equal(a_[i], o.a_[i])) return false;
  return true;
}

Mat mat_add(const Mat& a, const Mat& b) {
  Mat out(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = add(a.at(i, j), b.at(i, j));
  return out;
}

Mat mat_sub(const Mat& a, const Mat& b) {
  Mat out(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = sub(a.at(i, j), b.at(i, j));
  return out;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) fail(Error::Code::Domain, "mat_mul: dimension mismatch");
  Mat out(a.field(), a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Elem& aik = a.at(i, k);
      if (is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        const Elem& bkj = b.at(k, j);
        if (is_zero(bkj)) continue;
        out.at(i, j) = add(out.at(i, j), mul(aik, bkj));
      }
    }
  return out;
}

Mat mat_scale(const Mat& a, const Elem& s) {
  Mat out(a.field(), a.rows(), a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(i, j) = mul(a.at(i, j), s);
  return out;
}

Mat mat_transpose(const Mat& a) {
  Mat out(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out.at(j, i) = a.at(i, j);
  return out;
}

std::vector<Elem> mat_apply(const Mat& a, const std::vector<Elem>& v) {
  if (v.size() != a.cols()) fail(Error::Code::Domain, "mat_apply: dimension mismatch");
  std::vector<Elem> out(a.rows(), zero(a.field()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (is_zero(a.at(i, j)) || is_zero(v[j])) continue;
      out[i] = add(out[i], mul(a.at(i, j), v[j]));
    }
  return out;
}

std::vector<std::size_t> mat_rref(Mat& a) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t pr = row;
    while (pr < a.rows() && is_zero(a.at(pr, col))) ++pr;
    if (pr == a.rows()) continue;
    if (pr != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a.at(row, j), a.at(pr, j));
    Elem piv_inv = inv(a.at(row, col));
    for (std::size_t j = col; j < a.cols(); ++j) a.at(row, j) = mul(a.at(row, j), piv_inv);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || is_zero(a.at(i, col))) continue;
      Elem factor = a.at(i, col);
      for (std::size_t j = col; j < a.cols(); ++j)
        a.at(i, j) = sub(a.at(i, j), mul(factor, a.at(row, j)));
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t mat_rank(Mat a) { return mat_rref(a).size(); }

Elem mat_det(Mat a) {
  if (a.rows() != a.cols()) fail(Error::Code::Domain, "mat_det: square matrices only");
  const Field* f = a.field();
  Elem det = one(f);
  std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pr = col;
    while (pr < n && is_zero(a.at(pr, col))) ++pr;
    if (pr == n) return zero(f);
    if (pr != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a.at(col, j), a.at(pr, j));
      det = neg(det);
    }
    det = mul(det, a.at(col, col));
    Elem piv_inv = inv(a.at(col, col));
    for (std::size_t i = col + 1; i < n; ++i) {
      if (is_zero(a.at(i, col))) continue;
      Elem factor = mul(a.at(i, col), piv_inv);
      for (std::size_t j = col; j < n; ++j) a.at(i, j) = sub(a.at(i, j), mul(factor, a.at(col, j)));
    }
  }
  return det;
}

std::optional<Mat> mat_inverse(const Mat& a) {
  if (a.rows() != a.cols()) fail(Error::Code::Domain, "mat_inverse: square matrices only");
  std::size_t n = a.rows();
  Mat aug(a.field(), n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, n + i) = one(a.field());
  }
  auto piv = mat_rref(aug);
  if (piv.size() != n || piv.back() != n - 1) {
    // pivots must be exactly the left block
    for (std::size_t i = 0; i < piv.size(); ++i)
      if (piv[i] >= n) return std::nullopt;
    if (piv.size() != n) return std::nullopt;
  }
  Mat out(a.field(), n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = aug.at(i, n + j);
  return out;
}

std::vector<std::vector<Elem>> mat_kernel(const Mat& a) {
  Mat r = a;
  auto pivots = mat_rref(r);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<std::vector<Elem>> basis;
  const Field* f = a.field();
  for (std::size_t free_col = 0; free_col < a.cols(); ++free_col) {
    if (is_pivot[free_col]) continue;
    std::vector<Elem> v(a.cols(), zero(f));
    v[free_col] = one(f);
    for (std::size_t pi = 0; pi < pivots.size(); ++pi)
      v[pivots[pi]] = neg(r.at(pi, free_col));
    basis.push_back(std::move(v));
  }
  return basis;
}

std::optional<std::vector<Elem>> mat_solve(const Mat& a, const std::vector<Elem>& b) {
  if (b.size() != a.rows()) fail(Error::Code::Domain, "mat_solve: dimension mismatch");
  Mat aug(a.field(), a.rows(), a.cols() + 1);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug.at(i, j) = a.at(i, j);
    aug.at(i, a.cols()) = b[i];
  }
  auto pivots = mat_rref(aug);
  for (auto p : pivots)
    if (p == a.cols()) return std::nullopt; // inconsistent
  std::vector<Elem> x(a.cols(), zero(a.field()));
  for (std::size_t pi = 0; pi < pivots.size(); ++pi) x[pivots[pi]] = aug.at(pi, a.cols());
  return x;
}

Poly mat_charpoly(const Mat& a) {
  // Hessenberg reduction then the determinant recurrence; only field
  // divisions, so it works in any characteristic.
  if (a.rows() != a.cols()) fail(Error::Code::Domain, "mat_charpoly: square matrices only");
  const Field* f = a.field();
  std::size_t n = a.rows();
  if (n == 0) return poly_const(one(f));
  Mat h = a;
  for (std::size_t col = 0; col + 2 < n; ++col) {
    std::size_t pr = col + 1;
    while (pr < n && is_zero(h.at(pr, col))) ++pr;
    if (pr == n) continue;
    if (pr != col + 1) {
      for (std::size_t j = 0; j < n; ++j) std::swap(h.at(col + 1, j), h.at(pr, j));
      for (std::size_t i = 0; i < n; ++i) std::swap(h.at(i, col + 1), h.at(i, pr));
    }
    Elem piv_inv = inv(h.at(col + 1, col));
    for (std::size_t i = col + 2; i < n; ++i) {
      if (is_zero(h.at(i, col))) continue;
      Elem factor = mul(h.at(i, col), piv_inv);
      for (std::size_t j = 0; j < n; ++j) h.at(i, j) = sub(h.at(i, j), mul(factor, h.at(col + 1, j)));
      for (std::size_t j = 0; j < n; ++j) h.at(j, col + 1) = add(h.at(j, col + 1), mul(factor, h.at(j, i)));
    }
  }
  // p_0 = 1, p_k = (x - h[k-1][k-1]) p_{k-1} - sum_{i<k-1} h[i][k-1] (prod of subdiagonals) p_i
  std::vector<Poly> p(n + 1, poly_zero(f));
  p[0] = poly_const(one(f));
  for (std::size_t k = 1; k <= n; ++k) {
    Poly xm = poly_make(f, {neg(h.at(k - 1, k - 1)), one(f)});
    p[k] = poly_mul(xm, p[k - 1]);
    Elem beta = one(f);
    for (std::size_t i = k - 1; i-- > 0;) {
      beta = mul(beta, h.at(i + 1, i));
      Poly t = poly_scale(p[i], mul(beta, h.at(i, k - 1)));
      p[k] = poly_sub(p[k], t);
    }
  }
  return p[n];
}

SpanBasis::SpanBasis(const Field* f, std::size_t dim) : f_(f), dim_(dim) {}

bool SpanBasis::absorb(std::vector<Elem> v) {
  std::vector<Elem> w = v;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (is_zero(w[pivots_[r]])) continue;
    Elem factor = w[pivots_[r]];
    for (std::size_t j = 0; j < dim_; ++j) w[j] = sub(w[j], mul(factor, rows_[r][j]));
  }
  std::size_t p = 0;
  while (p < dim_ && is_zero(w[p])) ++p;
  if (p == dim_) return false;
  Elem piv_inv = inv(w[p]);
  for (std::size_t j = 0; j < dim_; ++j) w[j] = mul(w[j], piv_inv);
  // keep earlier rows reduced against the new one
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (is_zero(rows_[r][p])) continue;
    Elem factor = rows_[r][p];
    for (std::size_t j = 0; j < dim_; ++j) rows_[r][j] = sub(rows_[r][j], mul(factor, w[j]));
  }
  rows_.push_back(std::move(w));
  pivots_.push_back(p);
  raw_.push_back(std::move(v));
  return true;
}

bool SpanBasis::contains(const std::vector<Elem>& v) const {
  std::vector<Elem> w = v;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (is_zero(w[pivots_[r]])) continue;
    Elem factor = w[pivots_[r]];
    for (std::size_t j = 0; j < dim_; ++j) w[j] = sub(w[j], mul(factor, rows_[r][j]));
  }
  for (auto& c : w)
    if (!is_zero(c)) return false;
  return true;
}

std::optional<std::vector<Elem>> SpanBasis::coordinates(const std::vector<Elem>& v) const {
  // coordinates with respect to raw_ by solving the small system
  Mat m(f_, dim_, raw_.size());
  for (std::size_t j = 0; j < raw_.size(); ++j)
    for (std::size_t i = 0; i < dim_; ++i) m.at(i, j) = raw_[j][i];
  return mat_solve(m, v);
}

} // namespace qp
