#pragma once
// Dense univariate polynomials over an exact field, plus the finite-field
// factorization routines the Wedderburn machinery needs.

#include <qp/field.hpp>

namespace qp {

// Coefficients little-endian; invariant: empty or nonzero leading coefficient.
struct Poly {
  const Field* field = nullptr;
  std::vector<Elem> c;

  bool is_zero() const { return c.empty(); }
  int degree() const { return static_cast<int>(c.size()) - 1; }
  const Elem& leading() const { return c.back(); }
};

Poly poly_zero(const Field* f);
Poly poly_const(const Elem& a);
Poly poly_gen(const Field* f); // the variable
Poly poly_make(const Field* f, std::vector<Elem> coeffs);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_sub(const Poly& a, const Poly& b);
Poly poly_neg(const Poly& a);
Poly poly_mul(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, const Elem& s);
std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b);
Poly poly_mod(const Poly& a, const Poly& b);
Poly poly_gcd(const Poly& a, const Poly& b); // monic
Poly poly_derivative(const Poly& a);
Poly poly_monic(const Poly& a);
Poly poly_pow_mod(const Poly& a, unsigned long long e, const Poly& m);
Elem poly_eval(const Poly& a, const Elem& x);
bool poly_equal(const Poly& a, const Poly& b);
std::string poly_to_string(const Poly& a, const std::string& var);

// Distinct factors with multiplicities, over finite fields only.
// Deterministic given the seed (Cantor-Zassenhaus equal-degree splitting
// with the characteristic-2 trace variant).
std::vector<std::pair<Poly, unsigned>> poly_factor(const Poly& a, std::uint64_t seed);

bool poly_irreducible(const Poly& a);

// Roots in the coefficient field (finite fields: via factorization).
std::vector<Elem> poly_roots(const Poly& a, std::uint64_t seed);

// Exact m-th root of a monic polynomial known to be an m-th power, in any
// characteristic.  Splits m = p^e * m' with p = char, takes the m'-th root
// by the power-series recurrence (m' invertible) and undoes the Frobenius
// twist with exact p-th roots of coefficients.  Errors when the input is
// not an m-th power.
Poly poly_nth_root(const Poly& a, unsigned m);

} // namespace qp
