#pragma once
// Nonsingular quadratic and symmetric bilinear forms in all characteristics:
// construction, invariants (Arf / signed discriminant), binary-block and
// diagonal normal forms, and Witt decomposition with per-field backends
// (finite classification, Hasse-Minkowski over Q, local symbols over Qp,
// Springer-type residue recursion over Laurent fields).

#include <qp/field.hpp>
#include <qp/linalg.hpp>

namespace qp {

// Upper-triangular coefficient matrix M; q(x) = x^T M x.
struct QuadraticForm {
  const Field* field = nullptr;
  std::size_t dim = 0;
  Mat coeffs;
};

// Symmetric invertible Gram matrix; `non_alternating` is meaningful in
// characteristic 2 (some diagonal entry nonzero).
struct BilinearForm {
  const Field* field = nullptr;
  Mat gram;
  bool non_alternating = false;
};

// Discriminant/Arf class: characteristic 2 in F/image(x^2-x), otherwise in
// F^x / squares.  `trivial` is nullopt when the base field cannot decide.
struct DiscClass {
  const Field* field = nullptr;
  bool char2 = false;
  Elem rep;
  std::optional<bool> trivial;
};

QuadraticForm make_form(const Field* F, const Mat& M);
QuadraticForm make_form(const Field* F, const std::vector<std::vector<Elem>>& rows);
// Diagonal form <a1,...,an> (characteristic != 2 when any ai is needed on
// the diagonal; in characteristic 2 diagonal forms are singular).
QuadraticForm diagonal_form(const Field* F, const std::vector<Elem>& entries);
// Orthogonal sum of binary blocks [a_i, b_i]: q = sum a_i x_i^2 + x_i y_i + b_i y_i^2.
QuadraticForm block_form(const Field* F, const std::vector<std::pair<Elem, Elem>>& blocks);
QuadraticForm hyperbolic_form(const Field* F, unsigned planes);

BilinearForm make_bilinear(const Field* F, const Mat& G);
BilinearForm diagonal_bilinear(const Field* F, const std::vector<Elem>& entries);

QuadraticForm direct_sum(const QuadraticForm& a, const QuadraticForm& b);
QuadraticForm twist(const QuadraticForm& q, const Elem& c);
QuadraticForm tensor_bilinear(const BilinearForm& phi, const QuadraticForm& q);
// Coefficient matrix of q composed with the invertible change of basis P.
QuadraticForm transform(const QuadraticForm& q, const Mat& P);

Elem form_value(const QuadraticForm& q, const std::vector<Elem>& v);
Mat polar_matrix(const QuadraticForm& q); // M + M^T
Elem polar_value(const QuadraticForm& q, const std::vector<Elem>& u, const std::vector<Elem>& v);

// Binary-block normalization via symplectic basis extraction on the polar
// form (characteristic 2).  Returns blocks [a_i, b_i] with pairing 1.
std::vector<std::pair<Elem, Elem>> binary_blocks(const QuadraticForm& q);
// Also exposes the change of basis realizing the blocks (columns).
std::vector<std::pair<Elem, Elem>> binary_blocks(const QuadraticForm& q, Mat* basis_out);
// Diagonalization (characteristic != 2).
std::vector<Elem> diagonalize_form(const QuadraticForm& q);

DiscClass arf_discriminant(const QuadraticForm& q);
DiscClass disc_class(const Field* F, const Elem& rep);       // char-2: AS class; else square class
DiscClass disc_of_etale(const EtaleQuadratic& K);
DiscClass disc_add(const DiscClass& a, const DiscClass& b);
bool disc_equal(const DiscClass& a, const DiscClass& b);     // errors when undecidable

struct WittDecomposition {
  unsigned witt_index = 0;
  QuadraticForm kernel; // anisotropic; dim 0 when hyperbolic
};

// Complete backends: finite fields, Q, Qp, Laurent towers over those (the
// Laurent backend rejects forms outside its decidable fragment).
WittDecomposition witt_decompose(const QuadraticForm& q);
bool is_isotropic(const QuadraticForm& q);
bool is_hyperbolic(const QuadraticForm& q);

QuadraticForm norm_form_etale(const EtaleQuadratic& K);

// Exhaustive oracles over finite fields (point count capped by `budget`).
std::optional<std::vector<Elem>> isotropic_vector_exhaustive(const QuadraticForm& q,
                                                             std::uint64_t budget = 7000);
WittDecomposition witt_exhaustive(const QuadraticForm& q, std::uint64_t budget = 7000);

std::string form_to_string(const QuadraticForm& q);
bool forms_equal(const QuadraticForm& a, const QuadraticForm& b);

// Parses "[[m11,m12,...],[...],...]" row-major with element expressions.
QuadraticForm parse_form(const Field* F, std::string_view text);

} // namespace qp
