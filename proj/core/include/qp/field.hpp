#pragma once
//
// Exact arithmetic over a tower of supported fields:
//
//   - prime fields GF(p) and finite fields GF(p^k),
//   - the rationals Q, and Q flagged as local at a prime ("Qp"),
//   - iterated Laurent fields F((t)), elements stored as exact rational
//     functions in the uniformizer (no truncation, valuations exact),
//   - multivariate rational function fields, used only as symbol carriers.
//
// Fields are interned: Field::make returns a pointer that stays valid for
// the lifetime of the process, so elements hold a plain pointer and field
// identity is pointer identity.  All values are immutable after
// construction and safe to share across threads.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace qp {

class Field;

enum class FieldKind {
  Prime,             // GF(p)
  Finite,            // GF(p^k), residue polynomials mod a fixed min-poly
  Rationals,         // Q
  LocalRationals,    // Q with decisions made at a fixed prime p
  Laurent,           // base((t)), exact rational functions in t
  RationalFunctions, // base(X1,...,Xn), symbol-level only
};

// Error taxonomy shared across the library.  `code` feeds the CLI exit
// status: "parse" -> 2, "undecidable" -> 3, everything else -> 1.
class Error : public std::runtime_error {
public:
  enum class Code { Domain, Parse, Undecidable, Budget, Internal };
  Error(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}
  Code code;
};

[[noreturn]] inline void fail(Error::Code c, const std::string& msg) { throw Error(c, msg); }

struct RatRep;   // exact rational, defined in field.cpp
struct LaurRep;  // t^shift * num/den over the base field
struct MRatRep;  // multivariate num/den over the base field

using ExtRep = boost::container::small_vector<std::uint64_t, 4>;

using Rep = std::variant<std::uint64_t,
                         ExtRep,
                         std::shared_ptr<const RatRep>,
                         std::shared_ptr<const LaurRep>,
                         std::shared_ptr<const MRatRep>>;

struct Elem {
  const Field* field = nullptr;
  Rep rep;

  bool valid() const { return field != nullptr; }
};

class Field {
public:
  // Factories; all results are interned and live for the process lifetime.
  static const Field* make(std::string_view descriptor); // grammar below
  static const Field* prime(std::uint64_t p);
  static const Field* finite(std::uint64_t p, unsigned k);
  static const Field* finite_mod(std::uint64_t p, const std::vector<std::uint64_t>& monic_min_poly);
  static const Field* rationals();
  static const Field* local_rationals(std::uint64_t p);
  static const Field* laurent(const Field* base, const std::string& var);
  static const Field* rational_functions(const Field* base, const std::vector<std::string>& vars);

  FieldKind kind() const { return kind_; }
  std::uint64_t characteristic() const { return char_; }
  // Cardinality for finite kinds, nullopt otherwise.
  std::optional<std::uint64_t> cardinality() const;
  const Field* base() const { return base_; }   // Laurent / RationalFunctions
  const std::string& uniformizer_name() const { return var_; }
  const std::vector<std::string>& variables() const { return vars_; }
  std::uint64_t local_prime() const { return local_p_; }
  unsigned extension_degree() const { return ext_k_; }
  const std::vector<std::uint64_t>& min_poly() const { return min_poly_; }
  // Number of Laurent levels above the (non-Laurent) ground field.
  unsigned laurent_depth() const;
  // Canonical descriptor, also the interning key, e.g. "Laurent(GF(2),s)".
  const std::string& descriptor() const { return descr_; }

  bool is_finite() const { return kind_ == FieldKind::Prime || kind_ == FieldKind::Finite; }
  // True when witt_decompose has a complete backend for this field.
  bool supports_isotropy_decisions() const;

private:
  Field() = default;
  friend struct FieldRegistry;

  FieldKind kind_ = FieldKind::Prime;
  std::uint64_t char_ = 0;
  std::uint64_t p_ = 0;                    // Prime/Finite: p, LocalRationals: unused
  unsigned ext_k_ = 1;                     // Finite: k
  std::vector<std::uint64_t> min_poly_;    // Finite: monic, degree k, little-endian
  std::uint64_t local_p_ = 0;              // LocalRationals
  const Field* base_ = nullptr;            // Laurent / RationalFunctions
  std::string var_;                        // Laurent uniformizer / Finite generator name
  std::vector<std::string> vars_;          // RationalFunctions
  std::string descr_;
};

// ---- element construction ------------------------------------------------

Elem zero(const Field* f);
Elem one(const Field* f);
Elem from_int(const Field* f, long long n);
// Parses "+ - * / ^ ( )" expressions over integers and the field's named
// generators (finite-field generator "g", Laurent uniformizers, RatFun
// variables); names of inner tower levels stay visible at outer levels.
Elem parse_elem(const Field* f, std::string_view text);
Elem random_elem(const Field* f, std::mt19937_64& rng);
// All field elements; only for finite kinds (used by exhaustive oracles).
std::vector<Elem> all_elements(const Field* f);

// ---- arithmetic ----------------------------------------------------------

Elem add(const Elem& a, const Elem& b);
Elem sub(const Elem& a, const Elem& b);
Elem neg(const Elem& a);
Elem mul(const Elem& a, const Elem& b);
Elem div(const Elem& a, const Elem& b); // errors on zero divisor
Elem inv(const Elem& a);
Elem pow(const Elem& a, long long e);
bool is_zero(const Elem& a);
bool is_one(const Elem& a);
bool equal(const Elem& a, const Elem& b);
std::string to_string(const Elem& a);

inline Elem operator+(const Elem& a, const Elem& b) { return add(a, b); }
inline Elem operator-(const Elem& a, const Elem& b) { return sub(a, b); }
inline Elem operator-(const Elem& a) { return neg(a); }
inline Elem operator*(const Elem& a, const Elem& b) { return mul(a, b); }
inline Elem operator/(const Elem& a, const Elem& b) { return div(a, b); }
inline bool operator==(const Elem& a, const Elem& b) { return equal(a, b); }
inline bool operator!=(const Elem& a, const Elem& b) { return !equal(a, b); }

// ---- tower structure -----------------------------------------------------

// Embeds an element of an inner tower level into an enclosing Laurent field.
Elem embed(const Elem& a, const Field* target);
Elem laurent_uniformizer(const Field* laurent_field);

struct Valuation {
  long v;
  Elem leading; // element of the base field
};
// Exact valuation and leading residue of a nonzero Laurent element.
Valuation laurent_valuation(const Elem& x);
// Image in the residue field of a Laurent element with v(x) >= 0.
Elem laurent_residue(const Elem& x);

// For rationals/local rationals: p-adic valuation of a nonzero rational.
long rational_valuation(const Elem& x, std::uint64_t p);
// Residue of an m-integral rational mod m (denominator must be prime to m).
std::uint64_t rational_mod(const Elem& x, std::uint64_t m);
int rational_sign(const Elem& x); // -1, 0, +1
// Primes dividing the numerator or denominator of a nonzero rational.
std::vector<std::uint64_t> rational_prime_support(const Elem& x);

// Substitution homomorphism for RationalFunctions elements; `images` are
// elements of a common target field, one per declared variable.  Rejects
// assignments whose denominators vanish.
Elem substitute(const Elem& ratfun_elem, const std::vector<Elem>& images);

// ---- squares and Artin-Schreier classes -----------------------------------

// Decidable for finite fields, Q, Qp and Laurent towers over those;
// nullopt over rational function fields.
std::optional<bool> is_square(const Elem& a);
std::optional<Elem> sqrt_exact(const Elem& a);

// Whether a lies in the image of x -> x^2 - x (characteristic 2 only).
std::optional<bool> artin_schreier_trivial(const Elem& a);
// Explicit root of x^2 - x = a over finite fields of characteristic 2
// (nullopt when the class is nontrivial).
std::optional<Elem> artin_schreier_root(const Elem& a);

// Characteristic-2 square-coordinate decomposition over Laurent towers:
//   x = sum over subsets m of the tower uniformizers of mono(m) * c_m^2,
// keyed by bitmask (bit i = level-i uniformizer counted from the ground
// field).  Exact; used by the quasilinear isotropy machinery.
std::map<std::uint32_t, Elem> square_coordinates(const Elem& x);

// ---- etale quadratic algebras ---------------------------------------------

// K = F[u]/(u^2 - u - a), presented uniformly in all characteristics.
// In characteristic != 2 the usual square-root presentation K = F(sqrt(d))
// corresponds to d = 1 + 4a.
class EtaleQuadratic {
public:
  enum class Splitness { Split, NonSplit, Unknown };

  EtaleQuadratic(const Field* F, Elem a); // errors when 1 + 4a = 0

  const Field* base() const { return f_; }
  const Elem& param() const { return a_; }
  Splitness splitness() const { return split_; }

  // Elements x + y*u as coordinate pairs over F.
  using El = std::pair<Elem, Elem>;
  El from_base(const Elem& x) const;
  El gen() const;                 // u
  El add(const El& x, const El& y) const;
  El mul(const El& x, const El& y) const;
  El conj(const El& x) const;     // iota: u -> 1 - u
  Elem norm(const El& x) const;   // x * iota(x), lands in F
  Elem trace(const El& x) const;  // x + iota(x), lands in F
  bool is_zero_el(const El& x) const;
  El inv_el(const El& x) const;   // errors on zero divisors of split K

private:
  const Field* f_;
  Elem a_;
  Splitness split_;
};

} // namespace qp
