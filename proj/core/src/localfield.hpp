#pragma once
// Rational and p-adic quadratic form decisions: Hilbert symbols, local
// isotropy by dimension/invariant criteria, Hasse-Minkowski globally, and
// Witt decomposition by invariant stripping.  Internal to the library.

#include <qp/quadform.hpp>

namespace qp::local {

// Hilbert symbol (a,b)_p for nonzero rationals; p = 0 denotes the real place.
int hilbert_symbol(const Elem& a, const Elem& b, std::uint64_t p);

// Relevant finite places for a diagonal form: 2 and every prime dividing a
// numerator or denominator of an entry.
std::vector<std::uint64_t> ramified_primes(const std::vector<Elem>& diag);

bool isotropic_diag_local(const std::vector<Elem>& diag, std::uint64_t p); // over Qp
bool isotropic_diag_real(const std::vector<Elem>& diag);
bool isotropic_diag_global(const std::vector<Elem>& diag); // Hasse-Minkowski

WittDecomposition witt_local(const QuadraticForm& q);  // field kind LocalRationals
WittDecomposition witt_global(const QuadraticForm& q); // field kind Rationals

} // namespace qp::local
