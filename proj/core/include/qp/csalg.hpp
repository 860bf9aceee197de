#pragma once
// Finite-dimensional associative algebras by structure constants:
// construction (with exhaustive associativity/unit verification at desk
// scale), quaternion and matrix presentations, tensor products, centers and
// centralizers, reduced characteristic polynomials, and explicit Wedderburn
// decomposition over finite fields.

#include <qp/field.hpp>
#include <qp/linalg.hpp>
#include <qp/poly.hpp>

#include <memory>

namespace qp {

// Sparse structure-constant row, sorted by basis index.
using SparseVec = std::vector<std::pair<std::uint32_t, Elem>>;

class StructureAlgebra {
public:
  StructureAlgebra(const Field* f, std::vector<std::string> labels,
                   std::vector<SparseVec> rows, std::vector<Elem> unit,
                   std::optional<unsigned> csa_degree);

  const Field* field() const { return f_; }
  std::size_t dim() const { return dim_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Elem>& unit() const { return unit_; }
  const SparseVec& row(std::size_t i, std::size_t j) const { return rows_[i * dim_ + j]; }
  std::optional<unsigned> csa_degree() const { return degree_; }

  std::vector<Elem> mul_vec(const std::vector<Elem>& a, const std::vector<Elem>& b) const;
  std::vector<Elem> basis_vec(std::size_t i) const;
  std::vector<Elem> zero_vec() const;
  bool is_zero_vec(const std::vector<Elem>& a) const;

  // cached reduced-trace functional (set for matrix/quaternion/tensor
  // constructions; otherwise computed on demand through the reduced
  // characteristic polynomial)
  const std::optional<std::vector<Elem>>& trd_cache() const { return trd_; }
  void set_trd_cache(std::vector<Elem> t) { trd_ = std::move(t); }

private:
  const Field* f_;
  std::size_t dim_;
  std::vector<std::string> labels_;
  std::vector<SparseVec> rows_;
  std::vector<Elem> unit_;
  std::optional<unsigned> degree_;
  std::optional<std::vector<Elem>> trd_;
};

using AlgebraPtr = std::shared_ptr<StructureAlgebra>;

// Verifies associativity on all basis triples for dim <= 300 (packed
// GF(p) kernels keep the large cases fast) and unit laws on all basis
// elements; samples triples above that size.  Throws on failure.
AlgebraPtr make_algebra(const Field* f, std::vector<std::string> labels,
                        std::vector<SparseVec> rows, std::vector<Elem> unit,
                        std::optional<unsigned> csa_degree);

// [a, b): basis 1, i, j, ij with i^2 - i = a, j^2 = b, ji = (1-i)j.
AlgebraPtr quaternion_algebra(const Field* F, const Elem& a, const Elem& b);
AlgebraPtr matrix_algebra(const Field* F, unsigned n);
AlgebraPtr tensor_product(const AlgebraPtr& A, const AlgebraPtr& B);

// Basis of the center, as coordinate vectors.
std::vector<std::vector<Elem>> center(const AlgebraPtr& A);
// Basis of the centralizer of a set of elements.
std::vector<std::vector<Elem>> centralizer(const AlgebraPtr& A,
                                           const std::vector<std::vector<Elem>>& gens);

// The subalgebra spanned by `basis` (must be multiplicatively closed and
// contain `unit`); returns the abstract algebra; basis vectors give the
// embedding back into A.
AlgebraPtr subalgebra(const AlgebraPtr& A, const std::vector<std::vector<Elem>>& basis,
                      const std::vector<Elem>& unit,
                      std::optional<unsigned> csa_degree = std::nullopt);

// Left-multiplication matrix of x.
Mat left_mult_matrix(const AlgebraPtr& A, const std::vector<Elem>& x);

// Monic degree-n polynomial P with P^n = charpoly of left multiplication;
// errors when the n-th root does not exist (non-CSA input).
Poly reduced_char_poly(const AlgebraPtr& A, const std::vector<Elem>& x);
Elem trd(const AlgebraPtr& A, const std::vector<Elem>& x);
Elem nrd(const AlgebraPtr& A, const std::vector<Elem>& x);

struct DecompComponent {
  std::vector<Elem> idempotent;            // central idempotent in A
  std::vector<std::vector<Elem>> basis;    // component basis inside A
  AlgebraPtr component;                    // abstract component algebra
  const Field* center_field = nullptr;     // F' with component = M_k(F')
  unsigned matrix_degree = 0;              // k
  std::vector<Mat> images;                 // image of each component basis element in M_k(F')
};

// Explicit Wedderburn decomposition over finite fields; deterministic for a
// fixed seed; emitted isomorphisms are verified on random pairs.
std::vector<DecompComponent> decompose(const AlgebraPtr& A, std::uint64_t seed);

// Convenience for tests: does the 20-pair verification of a component's iso.
bool verify_component_iso(const AlgebraPtr& A, const DecompComponent& c, std::uint64_t seed);

} // namespace qp
