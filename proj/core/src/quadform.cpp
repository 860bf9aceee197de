#include <qp/quadform.hpp>

#include <sstream>

#include "localfield.hpp"
#include "springer.hpp"

namespace qp {

static Mat upper_normalize(const Field* F, const Mat& M) {
  std::size_t n = M.rows();
  Mat U(F, n, n);
  for (std::size_t i = 0; i < n; ++i) {
    U.at(i, i) = M.at(i, i);
    for (std::size_t j = i + 1; j < n; ++j) U.at(i, j) = add(M.at(i, j), M.at(j, i));
  }
  return U;
}

QuadraticForm make_form(const Field* F, const Mat& M) {
  if (M.rows() != M.cols()) fail(Error::Code::Domain, "make_form: square matrix required");
  std::size_t n = M.rows();
  QuadraticForm q{F, n, upper_normalize(F, M)};
  if (n == 0) return q;
  if (F->characteristic() == 2 && n % 2 != 0)
    fail(Error::Code::Domain, "make_form: odd dimension in characteristic 2");
  Mat P = polar_matrix(q);
  if (is_zero(mat_det(P))) fail(Error::Code::Domain, "make_form: singular polar form");
  return q;
}

QuadraticForm make_form(const Field* F, const std::vector<std::vector<Elem>>& rows) {
  Mat M(F, rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size()) fail(Error::Code::Domain, "make_form: ragged matrix");
    for (std::size_t j = 0; j < rows.size(); ++j) M.at(i, j) = rows[i][j];
  }
  return make_form(F, M);
}

QuadraticForm diagonal_form(const Field* F, const std::vector<Elem>& entries) {
  if (F->characteristic() == 2)
    fail(Error::Code::Domain, "diagonal_form: diagonal forms are singular in characteristic 2");
  Mat M(F, entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) M.at(i, i) = entries[i];
  return make_form(F, M);
}

QuadraticForm block_form(const Field* F, const std::vector<std::pair<Elem, Elem>>& blocks) {
  std::size_t n = 2 * blocks.size();
  Mat M(F, n, n);
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    M.at(2 * b, 2 * b) = blocks[b].first;
    M.at(2 * b, 2 * b + 1) = one(F);
    M.at(2 * b + 1, 2 * b + 1) = blocks[b].second;
  }
  return make_form(F, M);
}

QuadraticForm hyperbolic_form(const Field* F, unsigned planes) {
  std::vector<std::pair<Elem, Elem>> blocks(planes, {zero(F), zero(F)});
  return block_form(F, blocks);
}

BilinearForm make_bilinear(const Field* F, const Mat& G) {
  if (G.rows() != G.cols()) fail(Error::Code::Domain, "make_bilinear: square matrix required");
  for (std::size_t i = 0; i < G.rows(); ++i)
    for (std::size_t j = 0; j < G.cols(); ++j)
      if (!equal(G.at(i, j), G.at(j, i))) fail(Error::Code::Domain, "make_bilinear: not symmetric");
  if (is_zero(mat_det(G))) fail(Error::Code::Domain, "make_bilinear: degenerate");
  bool na = false;
  for (std::size_t i = 0; i < G.rows(); ++i)
    if (!is_zero(G.at(i, i))) na = true;
  return BilinearForm{F, G, na};
}

BilinearForm diagonal_bilinear(const Field* F, const std::vector<Elem>& entries) {
  Mat G(F, entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) G.at(i, i) = entries[i];
  return make_bilinear(F, G);
}

QuadraticForm direct_sum(const QuadraticForm& a, const QuadraticForm& b) {
  if (a.field != b.field) fail(Error::Code::Domain, "direct_sum: field mismatch");
  std::size_t n = a.dim + b.dim;
  Mat M(a.field, n, n);
  for (std::size_t i = 0; i < a.dim; ++i)
    for (std::size_t j = 0; j < a.dim; ++j) M.at(i, j) = a.coeffs.at(i, j);
  for (std::size_t i = 0; i < b.dim; ++i)
    for (std::size_t j = 0; j < b.dim; ++j) M.at(a.dim + i, a.dim + j) = b.coeffs.at(i, j);
  return QuadraticForm{a.field, n, std::move(M)};
}

QuadraticForm twist(const QuadraticForm& q, const Elem& c) {
  if (is_zero(c)) fail(Error::Code::Domain, "twist: zero scalar");
  return QuadraticForm{q.field, q.dim, mat_scale(q.coeffs, c)};
}

QuadraticForm tensor_bilinear(const BilinearForm& phi, const QuadraticForm& q) {
  if (phi.field != q.field) fail(Error::Code::Domain, "tensor_bilinear: field mismatch");
  std::size_t m = phi.gram.rows(), n = q.dim;
  Mat K(q.field, m * n, m * n);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l)
          K.at(i * n + k, j * n + l) = mul(phi.gram.at(i, j), q.coeffs.at(k, l));
  return make_form(q.field, K);
}

QuadraticForm transform(const QuadraticForm& q, const Mat& P) {
  Mat M = mat_mul(mat_transpose(P), mat_mul(q.coeffs, P));
  return make_form(q.field, M);
}

Elem form_value(const QuadraticForm& q, const std::vector<Elem>& v) {
  if (v.size() != q.dim) fail(Error::Code::Domain, "form_value: dimension mismatch");
  Elem acc = zero(q.field);
  for (std::size_t i = 0; i < q.dim; ++i) {
    if (is_zero(v[i])) continue;
    for (std::size_t j = i; j < q.dim; ++j) {
      if (is_zero(v[j]) || is_zero(q.coeffs.at(i, j))) continue;
      acc = add(acc, mul(q.coeffs.at(i, j), mul(v[i], v[j])));
    }
  }
  return acc;
}

Mat polar_matrix(const QuadraticForm& q) { return mat_add(q.coeffs, mat_transpose(q.coeffs)); }

Elem polar_value(const QuadraticForm& q, const std::vector<Elem>& u, const std::vector<Elem>& v) {
  Mat P = polar_matrix(q);
  std::vector<Elem> Pv = mat_apply(P, v);
  Elem acc = zero(q.field);
  for (std::size_t i = 0; i < q.dim; ++i) acc = add(acc, mul(u[i], Pv[i]));
  return acc;
}

// ---------------------------------------------------------------------------
// normal forms

std::vector<std::pair<Elem, Elem>> binary_blocks(const QuadraticForm& q, Mat* basis_out) {
  const Field* F = q.field;
  if (F->characteristic() != 2)
    fail(Error::Code::Domain, "binary_blocks: characteristic-2 normal form");
  Mat P = polar_matrix(q);
  std::size_t n = q.dim;
  std::vector<std::vector<Elem>> basis;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Elem> e(n, zero(F));
    e[i] = one(F);
    basis.push_back(std::move(e));
  }
  auto pairing = [&](const std::vector<Elem>& x, const std::vector<Elem>& y) {
    std::vector<Elem> Py = mat_apply(P, y);
    Elem acc = zero(F);
    for (std::size_t i = 0; i < n; ++i) acc = add(acc, mul(x[i], Py[i]));
    return acc;
  };
  std::vector<std::pair<Elem, Elem>> blocks;
  std::vector<std::vector<Elem>> chosen;
  while (!basis.empty()) {
    std::vector<Elem> u = basis.front();
    std::size_t w_idx = 0;
    bool found = false;
    for (std::size_t j = 1; j < basis.size(); ++j) {
      if (!is_zero(pairing(u, basis[j]))) {
        w_idx = j;
        found = true;
        break;
      }
    }
    if (!found) fail(Error::Code::Internal, "binary_blocks: degenerate polar form");
    std::vector<Elem> w = basis[w_idx];
    Elem c = pairing(u, w);
    Elem cinv = inv(c);
    for (auto& x : w) x = mul(x, cinv);
    std::vector<std::vector<Elem>> next;
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (j == 0 || j == w_idx) continue;
      std::vector<Elem> x = basis[j];
      Elem cu = pairing(u, x);
      Elem cw = pairing(w, x);
      // x' = x + cu * w + cw * u  (characteristic 2)
      for (std::size_t i = 0; i < n; ++i) x[i] = add(x[i], add(mul(cu, w[i]), mul(cw, u[i])));
      next.push_back(std::move(x));
    }
    blocks.push_back({form_value(q, u), form_value(q, w)});
    chosen.push_back(u);
    chosen.push_back(w);
    basis = std::move(next);
  }
  if (basis_out) {
    Mat B(F, n, n);
    for (std::size_t j = 0; j < chosen.size(); ++j)
      for (std::size_t i = 0; i < n; ++i) B.at(i, j) = chosen[j][i];
    *basis_out = B;
  }
  return blocks;
}

std::vector<std::pair<Elem, Elem>> binary_blocks(const QuadraticForm& q) {
  return binary_blocks(q, nullptr);
}

std::vector<Elem> diagonalize_form(const QuadraticForm& q) {
  const Field* F = q.field;
  if (F->characteristic() == 2) fail(Error::Code::Domain, "diagonalize_form: characteristic 2");
  std::size_t n = q.dim;
  Elem half = inv(from_int(F, 2));
  Mat B(F, n, n);
  Mat P = polar_matrix(q);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) B.at(i, j) = mul(P.at(i, j), half);
  std::vector<Elem> diag;
  std::vector<std::vector<Elem>> basis;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Elem> e(n, zero(F));
    e[i] = one(F);
    basis.push_back(std::move(e));
  }
  auto bval = [&](const std::vector<Elem>& x, const std::vector<Elem>& y) {
    std::vector<Elem> By = mat_apply(B, y);
    Elem acc = zero(F);
    for (std::size_t i = 0; i < n; ++i) acc = add(acc, mul(x[i], By[i]));
    return acc;
  };
  while (!basis.empty()) {
    std::size_t vi = basis.size();
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (!is_zero(bval(basis[i], basis[i]))) {
        vi = i;
        break;
      }
    }
    if (vi == basis.size()) {
      bool fixed = false;
      for (std::size_t i = 0; i < basis.size() && !fixed; ++i)
        for (std::size_t j = i + 1; j < basis.size() && !fixed; ++j) {
          if (!is_zero(bval(basis[i], basis[j]))) {
            for (std::size_t kk = 0; kk < n; ++kk) basis[i][kk] = add(basis[i][kk], basis[j][kk]);
            vi = i;
            fixed = true;
          }
        }
      if (!fixed) fail(Error::Code::Internal, "diagonalize_form: degenerate form");
    }
    std::vector<Elem> v = basis[vi];
    Elem len = bval(v, v);
    diag.push_back(len);
    Elem len_inv = inv(len);
    std::vector<std::vector<Elem>> next;
    for (std::size_t i = 0; i < basis.size(); ++i) {
      if (i == vi) continue;
      std::vector<Elem> x = basis[i];
      Elem c = mul(bval(v, x), len_inv);
      for (std::size_t kk = 0; kk < n; ++kk) x[kk] = sub(x[kk], mul(c, v[kk]));
      next.push_back(std::move(x));
    }
    basis = std::move(next);
  }
  return diag;
}

// ---------------------------------------------------------------------------
// discriminants

DiscClass disc_class(const Field* F, const Elem& rep) {
  DiscClass d;
  d.field = F;
  d.char2 = F->characteristic() == 2;
  d.rep = rep;
  if (d.char2)
    d.trivial = artin_schreier_trivial(rep);
  else
    d.trivial = is_square(rep);
  return d;
}

DiscClass arf_discriminant(const QuadraticForm& q) {
  const Field* F = q.field;
  if (F->characteristic() == 2) {
    Elem acc = zero(F);
    for (auto& [a, b] : binary_blocks(q)) acc = add(acc, mul(a, b));
    return disc_class(F, acc);
  }
  auto diag = diagonalize_form(q);
  Elem det = one(F);
  for (auto& d : diag) det = mul(det, d);
  std::size_t n = q.dim;
  if (((n * (n - 1)) / 2) % 2 == 1) det = neg(det);
  return disc_class(F, det);
}

DiscClass disc_of_etale(const EtaleQuadratic& K) {
  const Field* F = K.base();
  if (F->characteristic() == 2) return disc_class(F, K.param());
  return disc_class(F, add(one(F), mul(from_int(F, 4), K.param())));
}

DiscClass disc_add(const DiscClass& a, const DiscClass& b) {
  if (a.field != b.field) fail(Error::Code::Domain, "disc_add: field mismatch");
  return disc_class(a.field, a.char2 ? add(a.rep, b.rep) : mul(a.rep, b.rep));
}

bool disc_equal(const DiscClass& a, const DiscClass& b) {
  if (a.field != b.field) fail(Error::Code::Domain, "disc_equal: field mismatch");
  DiscClass diff = disc_class(a.field, a.char2 ? add(a.rep, b.rep) : mul(a.rep, b.rep));
  if (!diff.trivial) fail(Error::Code::Undecidable, "disc_equal: undecidable over this field");
  return *diff.trivial;
}

// ---------------------------------------------------------------------------
// Witt decomposition backends

static WittDecomposition witt_finite(const QuadraticForm& q) {
  const Field* F = q.field;
  std::size_t n = q.dim;
  if (F->characteristic() == 2) {
    DiscClass arf = arf_discriminant(q);
    if (*arf.trivial) return {static_cast<unsigned>(n / 2), QuadraticForm{F, 0, Mat(F, 0, 0)}};
    return {static_cast<unsigned>(n / 2 - 1), block_form(F, {{one(F), arf.rep}})};
  }
  DiscClass d = arf_discriminant(q);
  if (n % 2 == 0) {
    if (*d.trivial) return {static_cast<unsigned>(n / 2), QuadraticForm{F, 0, Mat(F, 0, 0)}};
    return {static_cast<unsigned>(n / 2 - 1), diagonal_form(F, {one(F), neg(d.rep)})};
  }
  Elem det = one(F);
  for (auto& e : diagonalize_form(q)) det = mul(det, e);
  Elem c = det;
  if (((n - 1) / 2) % 2 == 1) c = neg(c);
  return {static_cast<unsigned>((n - 1) / 2), diagonal_form(F, {c})};
}

WittDecomposition witt_decompose(const QuadraticForm& q) {
  const Field* F = q.field;
  if (q.dim == 0) return {0, q};
  switch (F->kind()) {
    case FieldKind::Prime:
    case FieldKind::Finite: return witt_finite(q);
    case FieldKind::Rationals: return local::witt_global(q);
    case FieldKind::LocalRationals: return local::witt_local(q);
    case FieldKind::Laurent: return springer::witt_laurent(q);
    case FieldKind::RationalFunctions:
      fail(Error::Code::Undecidable, "witt_decompose: rational function fields are symbol-only");
  }
  fail(Error::Code::Internal, "witt_decompose: bad kind");
}

bool is_isotropic(const QuadraticForm& q) {
  if (q.dim == 0) return false;
  if (q.field->kind() == FieldKind::Laurent && q.field->characteristic() == 2)
    return springer::isotropic_laurent(q);
  return witt_decompose(q).witt_index > 0;
}

bool is_hyperbolic(const QuadraticForm& q) {
  if (q.dim == 0) return true;
  return witt_decompose(q).witt_index * 2 == q.dim;
}

QuadraticForm norm_form_etale(const EtaleQuadratic& K) {
  const Field* F = K.base();
  Mat M(F, 2, 2);
  M.at(0, 0) = one(F);
  M.at(0, 1) = one(F);
  M.at(1, 1) = neg(K.param());
  return make_form(F, M);
}

// ---------------------------------------------------------------------------
// exhaustive oracles

std::optional<std::vector<Elem>> isotropic_vector_exhaustive(const QuadraticForm& q,
                                                             std::uint64_t budget) {
  const Field* F = q.field;
  auto card = F->cardinality();
  if (!card) fail(Error::Code::Domain, "isotropic_vector_exhaustive: finite fields only");
  double total = 1;
  for (std::size_t i = 0; i < q.dim; ++i) total *= static_cast<double>(*card);
  if (total > static_cast<double>(budget))
    fail(Error::Code::Budget, "isotropic_vector_exhaustive: too many points");
  auto elems = all_elements(F);
  std::vector<std::size_t> idx(q.dim, 0);
  std::vector<Elem> v(q.dim, zero(F));
  for (;;) {
    bool nonzero = false;
    for (std::size_t i = 0; i < q.dim; ++i) {
      v[i] = elems[idx[i]];
      if (idx[i] != 0) nonzero = true; // elems[0] is 0 for both finite kinds
    }
    if (nonzero && is_zero(form_value(q, v))) return v;
    std::size_t i = 0;
    while (i < q.dim) {
      if (++idx[i] < elems.size()) break;
      idx[i] = 0;
      ++i;
    }
    if (i == q.dim) break;
  }
  return std::nullopt;
}

WittDecomposition witt_exhaustive(const QuadraticForm& q, std::uint64_t budget) {
  const Field* F = q.field;
  QuadraticForm cur = q;
  unsigned m = 0;
  while (cur.dim > 0) {
    auto v = isotropic_vector_exhaustive(cur, budget);
    if (!v) break;
    std::size_t n = cur.dim;
    std::vector<Elem> w;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Elem> e(n, zero(F));
      e[i] = one(F);
      if (!is_zero(polar_value(cur, *v, e))) {
        w = e;
        break;
      }
    }
    if (w.empty()) fail(Error::Code::Internal, "witt_exhaustive: degenerate");
    Elem c = polar_value(cur, *v, w);
    Elem cinv = inv(c);
    for (auto& x : w) x = mul(x, cinv);
    Elem qw = form_value(cur, w);
    for (std::size_t i = 0; i < n; ++i) w[i] = sub(w[i], mul(qw, (*v)[i]));
    std::vector<std::vector<Elem>> comp;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Elem> x(n, zero(F));
      x[i] = one(F);
      Elem cw = polar_value(cur, w, x);
      Elem cv = polar_value(cur, *v, x);
      for (std::size_t kk = 0; kk < n; ++kk)
        x[kk] = sub(x[kk], add(mul(cw, (*v)[kk]), mul(cv, w[kk])));
      comp.push_back(std::move(x));
    }
    SpanBasis span(F, n);
    std::vector<std::vector<Elem>> basis;
    for (auto& x : comp)
      if (span.absorb(x)) basis.push_back(x);
    if (basis.size() != n - 2) fail(Error::Code::Internal, "witt_exhaustive: bad complement");
    Mat M(F, n - 2, n - 2);
    for (std::size_t i = 0; i < n - 2; ++i) {
      M.at(i, i) = form_value(cur, basis[i]);
      for (std::size_t j = i + 1; j < n - 2; ++j) M.at(i, j) = polar_value(cur, basis[i], basis[j]);
    }
    cur = QuadraticForm{F, n - 2, std::move(M)};
    ++m;
  }
  return {m, cur};
}

// ---------------------------------------------------------------------------
// formatting / parsing

std::string form_to_string(const QuadraticForm& q) {
  std::ostringstream o;
  o << "[";
  for (std::size_t i = 0; i < q.dim; ++i) {
    o << (i ? "," : "") << "[";
    for (std::size_t j = 0; j < q.dim; ++j) o << (j ? "," : "") << to_string(q.coeffs.at(i, j));
    o << "]";
  }
  o << "]";
  return o.str();
}

bool forms_equal(const QuadraticForm& a, const QuadraticForm& b) {
  return a.field == b.field && a.dim == b.dim && a.coeffs == b.coeffs;
}

QuadraticForm parse_form(const Field* F, std::string_view text) {
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto expect = [&](char c) {
    skip();
    if (i >= text.size() || text[i] != c)
      fail(Error::Code::Parse,
           std::string("form: expected '") + c + "' at position " + std::to_string(i));
    ++i;
  };
  std::vector<std::vector<Elem>> rows;
  expect('[');
  for (;;) {
    expect('[');
    std::vector<Elem> row;
    std::size_t depth = 0;
    skip();
    std::size_t start = i;
    for (;;) {
      if (i >= text.size()) fail(Error::Code::Parse, "form: unterminated row");
      char c = text[i];
      if (c == '(') ++depth;
      if (c == ')') --depth;
      if (depth == 0 && (c == ',' || c == ']')) {
        row.push_back(parse_elem(F, text.substr(start, i - start)));
        ++i;
        if (c == ']') break;
        start = i;
      } else {
        ++i;
      }
    }
    rows.push_back(std::move(row));
    skip();
    if (i < text.size() && text[i] == ',') {
      ++i;
      continue;
    }
    break;
  }
  expect(']');
  skip();
  if (i != text.size()) fail(Error::Code::Parse, "form: trailing input");
  return make_form(F, rows);
}

} // namespace qp
