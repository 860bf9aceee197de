#include <qp/field.hpp>
#include <qp/poly.hpp>

#include <algorithm>
#include <cctype>
#include <mutex>
#include <sstream>
#include <unordered_map>

#include <boost/multiprecision/cpp_int.hpp>

namespace qp {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

struct RatRep {
  BigRat v;
};

// x = t^shift * num/den with num(0) != 0 and den(0) = 1, num/den coprime.
// This form is canonical, so Laurent equality is structural.
struct LaurRep {
  long shift = 0;
  Poly num;
  Poly den;
};

// Multivariate polynomials as sorted exponent-vector maps; rational
// functions are num/den pairs compared by cross-multiplication (no gcd).
using MPoly = std::map<std::vector<std::uint32_t>, Elem>;
struct MRatRep {
  MPoly num;
  MPoly den; // nonzero; normalized so the leading coefficient is 1
};

// ---------------------------------------------------------------------------
// field registry

struct FieldRegistry {
  std::mutex mu;
  std::unordered_map<std::string, std::unique_ptr<Field>> table;

  static FieldRegistry& get() {
    static FieldRegistry* r = new FieldRegistry;
    return *r;
  }

  const Field* intern(std::unique_ptr<Field> f) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = table.find(f->descr_);
    if (it != table.end()) return it->second.get();
    const Field* out = f.get();
    table.emplace(f->descr_, std::move(f));
    return out;
  }

  const Field* lookup(const std::string& d) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = table.find(d);
    return it == table.end() ? nullptr : it->second.get();
  }
};

static bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

static std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

static std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

static std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) fail(Error::Code::Domain, "division by zero in GF(p)");
  return powmod(a, p - 2, p);
}

const Field* Field::prime(std::uint64_t p) {
  if (!is_prime_u64(p)) fail(Error::Code::Domain, "GF(p): p is not prime");
  auto f = std::unique_ptr<Field>(new Field);
  f->kind_ = FieldKind::Prime;
  f->char_ = p;
  f->p_ = p;
  f->descr_ = "GF(" + std::to_string(p) + ")";
  return FieldRegistry::get().intern(std::move(f));
}

// Smallest monic irreducible of degree k over GF(p), by counting through
// the non-leading coefficient vectors.
static std::vector<std::uint64_t> default_min_poly(std::uint64_t p, unsigned k);

const Field* Field::finite(std::uint64_t p, unsigned k) {
  if (k == 0) fail(Error::Code::Domain, "GF(p^k): k must be positive");
  if (k == 1) return prime(p);
  return finite_mod(p, default_min_poly(p, k));
}

const Field* Field::finite_mod(std::uint64_t p, const std::vector<std::uint64_t>& monic) {
  if (!is_prime_u64(p)) fail(Error::Code::Domain, "GF(q): p is not prime");
  if (monic.size() < 2 || monic.back() != 1)
    fail(Error::Code::Domain, "GF(q): modulus must be monic of positive degree");
  unsigned k = static_cast<unsigned>(monic.size() - 1);
  auto f = std::unique_ptr<Field>(new Field);
  f->kind_ = FieldKind::Finite;
  f->char_ = p;
  f->p_ = p;
  f->ext_k_ = k;
  f->min_poly_ = monic;
  for (auto& c : f->min_poly_) c %= p;
  f->min_poly_.back() = 1;
  f->var_ = "g";
  std::ostringstream d;
  d << "GF(" << p << "^" << k << ";";
  for (unsigned i = 0; i < f->min_poly_.size(); ++i) d << (i ? "," : "") << f->min_poly_[i];
  d << ")";
  f->descr_ = d.str();
  const Field* out = FieldRegistry::get().intern(std::move(f));
  // Reject reducible moduli (checked after interning so the check can use
  // element arithmetic over the candidate field's prime subfield).
  {
    const Field* fp = Field::prime(p);
    std::vector<Elem> cs;
    for (auto c : out->min_poly()) cs.push_back(from_int(fp, static_cast<long long>(c)));
    Poly m = poly_make(fp, cs);
    if (!poly_irreducible(m)) fail(Error::Code::Domain, "GF(q): reducible modulus");
  }
  return out;
}

const Field* Field::rationals() {
  auto f = std::unique_ptr<Field>(new Field);
  f->kind_ = FieldKind::Rationals;
  f->char_ = 0;
  f->descr_ = "Q";
  return FieldRegistry::get().intern(std::move(f));
}

const Field* Field::local_rationals(std::uint64_t p) {
  if (!is_prime_u64(p)) fail(Error::Code::Domain, "Qp(p): p is not prime");
  auto f = std::unique_ptr<Field>(new Field);
  f->kind_ = FieldKind::LocalRationals;
  f->char_ = 0;
  f->local_p_ = p;
  f->descr_ = "Qp(" + std::to_string(p) + ")";
  return FieldRegistry::get().intern(std::move(f));
}

const Field* Field::laurent(const Field* base, const std::string& var) {
  if (!base) fail(Error::Code::Domain, "Laurent: null base");
  if (base->kind() == FieldKind::RationalFunctions)
    fail(Error::Code::Domain, "Laurent over a rational function field is unsupported");
  if (base->laurent_depth() >= 4) fail(Error::Code::Domain, "Laurent nesting deeper than 4");
  if (var.empty() || !std::isalpha(static_cast<unsigned char>(var[0])))
    fail(Error::Code::Domain, "Laurent: bad uniformizer name");
  auto f = std::unique_ptr<Field>(new Field);
  f->kind_ = FieldKind::Laurent;
  f->char_ = base->characteristic();
  f->base_ = base;
  f->var_ = var;
  f->descr_ = "Laurent(" + base->descriptor() + "," + var + ")";
  return FieldRegistry::get().intern(std::move(f));
}

const Field* Field::rational_functions(const Field* base, const std::vector<std::string>& vars) {
  if (!base) fail(Error::Code::Domain, "RatFun: null base");
  if (vars.empty()) fail(Error::Code::Domain, "RatFun: no variables");
  auto f = std::unique_ptr<Field>(new Field);
  f->kind_ = FieldKind::RationalFunctions;
  f->char_ = base->characteristic();
  f->base_ = base;
  f->vars_ = vars;
  std::string d = "RatFun(" + base->descriptor() + ",[";
  for (std::size_t i = 0; i < vars.size(); ++i) d += (i ? "," : "") + vars[i];
  d += "])";
  f->descr_ = d;
  return FieldRegistry::get().intern(std::move(f));
}

unsigned Field::laurent_depth() const {
  unsigned d = 0;
  const Field* f = this;
  while (f->kind_ == FieldKind::Laurent) {
    ++d;
    f = f->base_;
  }
  return d;
}

std::optional<std::uint64_t> Field::cardinality() const {
  if (kind_ == FieldKind::Prime) return p_;
  if (kind_ == FieldKind::Finite) {
    std::uint64_t q = 1;
    for (unsigned i = 0; i < ext_k_; ++i) q *= p_;
    return q;
  }
  return std::nullopt;
}

bool Field::supports_isotropy_decisions() const {
  switch (kind_) {
    case FieldKind::Prime:
    case FieldKind::Finite:
    case FieldKind::Rationals:
    case FieldKind::LocalRationals:
      return true;
    case FieldKind::Laurent:
      return base_->supports_isotropy_decisions();
    case FieldKind::RationalFunctions:
      return false;
  }
  return false;
}

// ---- descriptor parsing ----------------------------------------------------

namespace {

struct DescrParser {
  std::string_view s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!eat(c)) fail(Error::Code::Parse, "field descriptor: expected '" + std::string(1, c) + "' at position " + std::to_string(i));
  }
  std::string ident() {
    skip_ws();
    std::size_t j = i;
    while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
    if (j == i) fail(Error::Code::Parse, "field descriptor: expected name at position " + std::to_string(i));
    std::string out(s.substr(i, j - i));
    i = j;
    return out;
  }
  std::uint64_t number() {
    skip_ws();
    std::size_t j = i;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
    if (j == i) fail(Error::Code::Parse, "field descriptor: expected number at position " + std::to_string(i));
    std::uint64_t v = 0;
    for (std::size_t k = i; k < j; ++k) v = v * 10 + static_cast<std::uint64_t>(s[k] - '0');
    i = j;
    return v;
  }

  const Field* field() {
    skip_ws();
    std::string name = ident();
    if (name == "GF") {
      expect('(');
      std::uint64_t q = number();
      expect(')');
      std::uint64_t p = 0;
      unsigned k = 0;
      for (std::uint64_t d = 2; d <= q; ++d) {
        if (q % d == 0) {
          p = d;
          std::uint64_t m = q;
          while (m % d == 0) {
            m /= d;
            ++k;
          }
          if (m != 1) fail(Error::Code::Parse, "GF(q): q is not a prime power");
          break;
        }
      }
      if (p == 0) fail(Error::Code::Parse, "GF(q): bad q");
      return k == 1 ? Field::prime(p) : Field::finite(p, k);
    }
    if (name == "Q") return Field::rationals();
    if (name == "Qp") {
      expect('(');
      std::uint64_t p = number();
      expect(')');
      return Field::local_rationals(p);
    }
    if (name == "Laurent") {
      expect('(');
      const Field* base = field();
      expect(',');
      std::string var = ident();
      expect(')');
      return Field::laurent(base, var);
    }
    if (name == "RatFun") {
      expect('(');
      const Field* base = field();
      expect(',');
      expect('[');
      std::vector<std::string> vars;
      vars.push_back(ident());
      while (eat(',')) vars.push_back(ident());
      expect(']');
      expect(')');
      return Field::rational_functions(base, vars);
    }
    fail(Error::Code::Parse, "unknown field kind '" + name + "'");
  }
};

} // namespace

const Field* Field::make(std::string_view descriptor) {
  DescrParser p{descriptor};
  const Field* f = p.field();
  p.skip_ws();
  if (p.i != descriptor.size()) fail(Error::Code::Parse, "trailing input in field descriptor");
  return f;
}

// ---------------------------------------------------------------------------
// element helpers

static const ExtRep& ext(const Elem& a) { return std::get<ExtRep>(a.rep); }
static std::uint64_t pr(const Elem& a) { return std::get<std::uint64_t>(a.rep); }
static const BigRat& rat(const Elem& a) { return std::get<std::shared_ptr<const RatRep>>(a.rep)->v; }
static const LaurRep& lau(const Elem& a) { return *std::get<std::shared_ptr<const LaurRep>>(a.rep); }
static const MRatRep& mrr(const Elem& a) { return *std::get<std::shared_ptr<const MRatRep>>(a.rep); }

static Elem make_rat(const Field* f, BigRat v) {
  auto rep = std::make_shared<RatRep>();
  rep->v = std::move(v);
  return Elem{f, Rep{std::shared_ptr<const RatRep>(rep)}};
}

static Elem make_laurent(const Field* f, long shift, Poly num, Poly den);
static Elem make_mrat(const Field* f, MPoly num, MPoly den);

Elem zero(const Field* f) {
  switch (f->kind()) {
    case FieldKind::Prime: return Elem{f, Rep{std::uint64_t{0}}};
    case FieldKind::Finite: return Elem{f, Rep{ExtRep(f->extension_degree(), 0)}};
    case FieldKind::Rationals:
    case FieldKind::LocalRationals: return make_rat(f, BigRat(0));
    case FieldKind::Laurent: return make_laurent(f, 0, poly_zero(f->base()), poly_const(one(f->base())));
    case FieldKind::RationalFunctions: {
      MPoly den;
      den.emplace(std::vector<std::uint32_t>(f->variables().size(), 0), one(f->base()));
      return make_mrat(f, MPoly{}, std::move(den));
    }
  }
  fail(Error::Code::Internal, "zero: bad kind");
}

Elem one(const Field* f) { return from_int(f, 1); }

Elem from_int(const Field* f, long long n) {
  switch (f->kind()) {
    case FieldKind::Prime: {
      long long p = static_cast<long long>(f->characteristic());
      long long r = n % p;
      if (r < 0) r += p;
      return Elem{f, Rep{static_cast<std::uint64_t>(r)}};
    }
    case FieldKind::Finite: {
      ExtRep v(f->extension_degree(), 0);
      long long p = static_cast<long long>(f->characteristic());
      long long r = n % p;
      if (r < 0) r += p;
      v[0] = static_cast<std::uint64_t>(r);
      return Elem{f, Rep{std::move(v)}};
    }
    case FieldKind::Rationals:
    case FieldKind::LocalRationals: return make_rat(f, BigRat(n));
    case FieldKind::Laurent: {
      Elem c = from_int(f->base(), n);
      if (is_zero(c)) return zero(f);
      return make_laurent(f, 0, poly_const(c), poly_const(one(f->base())));
    }
    case FieldKind::RationalFunctions: {
      Elem c = from_int(f->base(), n);
      MPoly num, den;
      std::vector<std::uint32_t> z(f->variables().size(), 0);
      if (!is_zero(c)) num.emplace(z, c);
      den.emplace(z, one(f->base()));
      return make_mrat(f, std::move(num), std::move(den));
    }
  }
  fail(Error::Code::Internal, "from_int: bad kind");
}

bool is_zero(const Elem& a) {
  switch (a.field->kind()) {
    case FieldKind::Prime: return pr(a) == 0;
    case FieldKind::Finite: {
      for (auto c : ext(a))
        if (c) return false;
      return true;
    }
    case FieldKind::Rationals:
    case FieldKind::LocalRationals: return rat(a) == 0;
    case FieldKind::Laurent: return lau(a).num.is_zero();
    case FieldKind::RationalFunctions: return mrr(a).num.empty();
  }
  return false;
}

bool is_one(const Elem& a) { return equal(a, one(a.field)); }

// ---- Laurent normalization -------------------------------------------------

static Elem make_laurent(const Field* f, long shift, Poly num, Poly den) {
  const Field* b = f->base();
  if (den.is_zero()) fail(Error::Code::Domain, "Laurent: zero denominator");
  if (num.is_zero()) {
    auto rep = std::make_shared<LaurRep>();
    rep->shift = 0;
    rep->num = poly_zero(b);
    rep->den = poly_const(one(b));
    return Elem{f, Rep{std::shared_ptr<const LaurRep>(rep)}};
  }
  // strip powers of t from both ends of the fraction
  std::size_t nz = 0;
  while (nz < num.c.size() && qp::is_zero(num.c[nz])) ++nz;
  std::size_t dz = 0;
  while (dz < den.c.size() && qp::is_zero(den.c[dz])) ++dz;
  shift += static_cast<long>(nz) - static_cast<long>(dz);
  if (nz) num.c.erase(num.c.begin(), num.c.begin() + static_cast<long>(nz));
  if (dz) den.c.erase(den.c.begin(), den.c.begin() + static_cast<long>(dz));
  Poly g = poly_gcd(num, den);
  if (g.degree() > 0) {
    num = poly_divmod(num, g).first;
    den = poly_divmod(den, g).first;
  }
  Elem d0 = den.c[0];
  if (!is_one(d0)) {
    Elem s = inv(d0);
    num = poly_scale(num, s);
    den = poly_scale(den, s);
  }
  auto rep = std::make_shared<LaurRep>();
  rep->shift = shift;
  rep->num = std::move(num);
  rep->den = std::move(den);
  return Elem{f, Rep{std::shared_ptr<const LaurRep>(rep)}};
}

// ---- multivariate helpers ---------------------------------------------------

static MPoly mp_add(const MPoly& a, const MPoly& b) {
  MPoly out = a;
  for (auto& [e, c] : b) {
    auto it = out.find(e);
    if (it == out.end()) {
      out.emplace(e, c);
    } else {
      Elem s = add(it->second, c);
      if (qp::is_zero(s))
        out.erase(it);
      else
        it->second = s;
    }
  }
  return out;
}

static MPoly mp_neg(const MPoly& a) {
  MPoly out;
  for (auto& [e, c] : a) out.emplace(e, neg(c));
  return out;
}

static MPoly mp_mul(const MPoly& a, const MPoly& b) {
  MPoly out;
  for (auto& [ea, ca] : a)
    for (auto& [eb, cb] : b) {
      std::vector<std::uint32_t> e(ea.size());
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      Elem p = mul(ca, cb);
      auto it = out.find(e);
      if (it == out.end()) {
        if (!qp::is_zero(p)) out.emplace(std::move(e), p);
      } else {
        Elem s = add(it->second, p);
        if (qp::is_zero(s))
          out.erase(it);
        else
          it->second = s;
      }
    }
  return out;
}

static Elem make_mrat(const Field* f, MPoly num, MPoly den) {
  if (den.empty()) fail(Error::Code::Domain, "RatFun: zero denominator");
  // normalize: leading (largest) denominator coefficient becomes 1
  Elem lead = den.rbegin()->second;
  if (!is_one(lead)) {
    Elem s = inv(lead);
    MPoly n2, d2;
    for (auto& [e, c] : num) n2.emplace(e, mul(c, s));
    for (auto& [e, c] : den) d2.emplace(e, mul(c, s));
    num = std::move(n2);
    den = std::move(d2);
  }
  auto rep = std::make_shared<MRatRep>();
  rep->num = std::move(num);
  rep->den = std::move(den);
  return Elem{f, Rep{std::shared_ptr<const MRatRep>(rep)}};
}

// ---------------------------------------------------------------------------
// arithmetic dispatch

static void check_same(const Elem& a, const Elem& b) {
  if (a.field != b.field) fail(Error::Code::Domain, "field mismatch in element arithmetic");
}

Elem add(const Elem& a, const Elem& b) {
  check_same(a, b);
  const Field* f = a.field;
  switch (f->kind()) {
    case FieldKind::Prime: {
      std::uint64_t p = f->characteristic();
      std::uint64_t s = pr(a) + pr(b);
      if (s >= p) s -= p;
      return Elem{f, Rep{s}};
    }
    case FieldKind::Finite: {
      std::uint64_t p = f->characteristic();
      ExtRep v = ext(a);
      const ExtRep& w = ext(b);
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] += w[i];
        if (v[i] >= p) v[i] -= p;
      }
      return Elem{f, Rep{std::move(v)}};
    }
    case FieldKind::Rationals:
    case FieldKind::LocalRationals: return make_rat(f, rat(a) + rat(b));
    case FieldKind::Laurent: {
      const LaurRep& x = lau(a);
      const LaurRep& y = lau(b);
      if (x.num.is_zero()) return b;
      if (y.num.is_zero()) return a;
      long s = std::min(x.shift, y.shift);
      Poly tx = x.num;
      for (long i = 0; i < x.shift - s; ++i) tx.c.insert(tx.c.begin(), qp::zero(f->base()));
      Poly ty = y.num;
      for (long i = 0; i < y.shift - s; ++i) ty.c.insert(ty.c.begin(), qp::zero(f->base()));
      Poly num = poly_add(poly_mul(tx, y.den), poly_mul(ty, x.den));
      Poly den = poly_mul(x.den, y.den);
      return make_laurent(f, s, std::move(num), std::move(den));
    }
    case FieldKind::RationalFunctions: {
      const MRatRep& x = mrr(a);
      const MRatRep& y = mrr(b);
      MPoly num = mp_add(mp_mul(x.num, y.den), mp_mul(y.num, x.den));
      MPoly den = mp_mul(x.den, y.den);
      return make_mrat(f, std::move(num), std::move(den));
    }
  }
  fail(Error::Code::Internal, "add: bad kind");
}

Elem neg(const Elem& a) {
  const Field* f = a.field;
  switch (f->kind()) {
    case FieldKind::Prime: {
      std::uint64_t p = f->characteristic();
      std::uint64_t v = pr(a);
      return Elem{f, Rep{v == 0 ? std::uint64_t{0} : p - v}};
    }
    case FieldKind::Finite: {
      std::uint64_t p = f->characteristic();
      ExtRep v = ext(a);
      for (auto& c : v) c = c == 0 ? 0 : p - c;
      return Elem{f, Rep{std::move(v)}};
    }
    case FieldKind::Rationals:
    case FieldKind::LocalRationals: return make_rat(f, -rat(a));
    case FieldKind::Laurent: {
      const LaurRep& x = lau(a);
      return make_laurent(f, x.shift, poly_neg(x.num), x.den);
    }
    case FieldKind::RationalFunctions: {
      const MRatRep& x = mrr(a);
      return make_mrat(f, mp_neg(x.num), x.den);
    }
  }
  fail(Error::Code::Internal, "neg: bad kind");
}

Elem sub(const Elem& a, const Elem& b) { return add(a, neg(b)); }

Elem mul(const Elem& a, const Elem& b) {
  check_same(a, b);
  const Field* f = a.field;
  switch (f->kind()) {
    case FieldKind::Prime: return Elem{f, Rep{mulmod(pr(a), pr(b), f->characteristic())}};
    case FieldKind::Finite: {
      std::uint64_t p = f->characteristic();
      unsigned k = f->extension_degree();
      const ExtRep& x = ext(a);
      const ExtRep& y = ext(b);
      boost::container::small_vector<std::uint64_t, 8> prod(2 * k - 1, 0);
      for (unsigned i = 0; i < k; ++i) {
        if (!x[i]) continue;
        for (unsigned j = 0; j < k; ++j)
          if (y[j]) prod[i + j] = (prod[i + j] + mulmod(x[i], y[j], p)) % p;
      }
      const auto& m = f->min_poly();
      for (unsigned d = 2 * k - 2; d >= k && d < 2 * k; --d) {
        std::uint64_t c = prod[d];
        if (c) {
          prod[d] = 0;
          for (unsigned i = 0; i < k; ++i) {
            std::uint64_t t = mulmod(c, m[i], p);
            std::uint64_t idx = d - k + i;
            prod[idx] = (prod[idx] + p - t % p) % p;
          }
        }
        if (d == k) break;
      }
      ExtRep v(k, 0);
      for (unsigned i = 0; i < k; ++i) v[i] = prod[i];
      return Elem{f, Rep{std::move(v)}};
    }
    case FieldKind::Rationals:
    case FieldKind::LocalRationals: return make_rat(f, rat(a) * rat(b));
    case FieldKind::Laurent: {
      const LaurRep& x = lau(a);
      const LaurRep& y = lau(b);
      if (x.num.is_zero() || y.num.is_zero()) return zero(f);
      return make_laurent(f, x.shift + y.shift, poly_mul(x.num, y.num), poly_mul(x.den, y.den));
    }
    case FieldKind::RationalFunctions: {
      const MRatRep& x = mrr(a);
      const MRatRep& y = mrr(b);
      return make_mrat(f, mp_mul(x.num, y.num), mp_mul(x.den, y.den));
    }
  }
  fail(Error::Code::Internal, "mul: bad kind");
}

Elem inv(const Elem& a) {
  if (is_zero(a)) fail(Error::Code::Domain, "division by zero");
  const Field* f = a.field;
  switch (f->kind()) {
    case FieldKind::Prime: return Elem{f, Rep{invmod(pr(a), f->characteristic())}};
    case FieldKind::Finite: {
      // a^(q-2)
      std::uint64_t q = *f->cardinality();
      Elem r = one(f);
      Elem base = a;
      std::uint64_t e = q - 2;
      while (e) {
        if (e & 1) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
      }
      return r;
    }
    case FieldKind::Rationals:
    case FieldKind::LocalRationals: return make_rat(f, 1 / rat(a));
    case FieldKind::Laurent: {
      const LaurRep& x = lau(a);
      return make_laurent(f, -x.shift, x.den, x.num);
    }
    case FieldKind::RationalFunctions: {
      const MRatRep& x = mrr(a);
      if (x.num.empty()) fail(Error::Code::Domain, "division by zero");
      return make_mrat(f, x.den, x.num);
    }
  }
  fail(Error::Code::Internal, "inv: bad kind");
}

Elem div(const Elem& a, const Elem& b) { return mul(a, inv(b)); }

Elem pow(const Elem& a, long long e) {
  if (e < 0) return pow(inv(a), -e);
  Elem r = one(a.field);
  Elem base = a;
  unsigned long long u = static_cast<unsigned long long>(e);
  while (u) {
    if (u & 1) r = mul(r, base);
    base = mul(base, base);
    u >>= 1;
  }
  return r;
}

bool equal(const Elem& a, const Elem& b) {
  check_same(a, b);
  const Field* f = a.field;
  switch (f->kind()) {
    case FieldKind::Prime: return pr(a) == pr(b);
    case FieldKind::Finite: return ext(a) == ext(b);
    case FieldKind::Rationals:
    case FieldKind::LocalRationals: return rat(a) == rat(b);
    case FieldKind::Laurent: {
      const LaurRep& x = lau(a);
      const LaurRep& y = lau(b);
      if (x.num.is_zero() || y.num.is_zero()) return x.num.is_zero() && y.num.is_zero();
      return x.shift == y.shift && poly_equal(x.num, y.num) && poly_equal(x.den, y.den);
    }
    case FieldKind::RationalFunctions: {
      const MRatRep& x = mrr(a);
      const MRatRep& y = mrr(b);
      // cross multiplication; reps are not canonical
      MPoly l = mp_mul(x.num, y.den);
      MPoly r = mp_mul(y.num, x.den);
      if (l.size() != r.size()) return false;
      auto it = l.begin();
      auto jt = r.begin();
      for (; it != l.end(); ++it, ++jt) {
        if (it->first != jt->first) return false;
        if (!equal(it->second, jt->second)) return false;
      }
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// printing

static std::string poly_term_string(const Elem& c, const std::string& var, std::size_t deg) {
  std::string cs = to_string(c);
  bool needs_parens = cs.find_first_of("+-*/ ") != std::string::npos && cs[0] != '(';
  if (deg == 0) return needs_parens ? "(" + cs + ")" : cs;
  std::string v = deg == 1 ? var : var + "^" + std::to_string(deg);
  if (is_one(c)) return v;
  return (needs_parens ? "(" + cs + ")" : cs) + "*" + v;
}

std::string poly_to_string(const Poly& a, const std::string& var) {
  if (a.is_zero()) return "0";
  std::string out;
  for (std::size_t d = 0; d < a.c.size(); ++d) {
    if (qp::is_zero(a.c[d])) continue;
    if (!out.empty()) out += " + ";
    out += poly_term_string(a.c[d], var, d);
  }
  return out;
}

std::string to_string(const Elem& a) {
  const Field* f = a.field;
  switch (f->kind()) {
    case FieldKind::Prime: return std::to_string(pr(a));
    case FieldKind::Finite: {
      Poly p;
      p.field = Field::prime(f->characteristic());
      for (auto c : ext(a)) p.c.push_back(from_int(p.field, static_cast<long long>(c)));
      while (!p.c.empty() && qp::is_zero(p.c.back())) p.c.pop_back();
      return poly_to_string(p, "g");
    }
    case FieldKind::Rationals:
    case FieldKind::LocalRationals: {
      std::ostringstream o;
      o << rat(a);
      return o.str();
    }
    case FieldKind::Laurent: {
      const LaurRep& x = lau(a);
      if (x.num.is_zero()) return "0";
      const std::string& t = f->uniformizer_name();
      std::string out;
      if (x.shift != 0) out += t + "^" + std::to_string(x.shift) + "*";
      out += "(" + poly_to_string(x.num, t) + ")";
      if (x.den.degree() > 0 || !is_one(x.den.c[0])) out += "/(" + poly_to_string(x.den, t) + ")";
      return out;
    }
    case FieldKind::RationalFunctions: {
      const MRatRep& x = mrr(a);
      auto render = [&](const MPoly& p) {
        if (p.empty()) return std::string("0");
        std::string out;
        for (auto& [e, c] : p) {
          if (!out.empty()) out += " + ";
          std::string term;
          bool allz = true;
          for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            allz = false;
            if (!term.empty()) term += "*";
            term += f->variables()[i];
            if (e[i] > 1) term += "^" + std::to_string(e[i]);
          }
          std::string cs = to_string(c);
          if (allz)
            term = cs;
          else if (!is_one(c))
            term = "(" + cs + ")*" + term;
          out += term;
        }
        return out;
      };
      std::string out = "(" + render(x.num) + ")";
      std::vector<std::uint32_t> z(f->variables().size(), 0);
      bool den_is_one = x.den.size() == 1 && x.den.begin()->first == z && is_one(x.den.begin()->second);
      if (!den_is_one) out += "/(" + render(x.den) + ")";
      return out;
    }
  }
  return "?";
}

// ---------------------------------------------------------------------------
// element expression parsing

namespace {

// Resolves a generator name in the tower under `f`, returning the element of
// `f` it denotes.
std::optional<Elem> resolve_name(const Field* f, const std::string& name) {
  switch (f->kind()) {
    case FieldKind::Prime:
    case FieldKind::Rationals:
    case FieldKind::LocalRationals:
      return std::nullopt;
    case FieldKind::Finite: {
      if (name == "g") {
        ExtRep v(f->extension_degree(), 0);
        v[1] = 1;
        return Elem{f, Rep{std::move(v)}};
      }
      return std::nullopt;
    }
    case FieldKind::Laurent: {
      if (name == f->uniformizer_name()) return laurent_uniformizer(f);
      auto inner = resolve_name(f->base(), name);
      if (inner) return embed(*inner, f);
      return std::nullopt;
    }
    case FieldKind::RationalFunctions: {
      const auto& vars = f->variables();
      for (std::size_t i = 0; i < vars.size(); ++i) {
        if (vars[i] == name) {
          MPoly num, den;
          std::vector<std::uint32_t> e(vars.size(), 0);
          e[i] = 1;
          num.emplace(std::move(e), one(f->base()));
          den.emplace(std::vector<std::uint32_t>(vars.size(), 0), one(f->base()));
          return make_mrat(f, std::move(num), std::move(den));
        }
      }
      auto inner = resolve_name(f->base(), name);
      if (inner) return embed(*inner, f);
      return std::nullopt;
    }
  }
  return std::nullopt;
}

struct ExprParser {
  const Field* f;
  std::string_view s;
  std::size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool peek(char c) {
    skip_ws();
    return i < s.size() && s[i] == c;
  }
  bool eat(char c) {
    if (peek(c)) {
      ++i;
      return true;
    }
    return false;
  }

  Elem expr() {
    Elem v = eat('-') ? neg(term()) : term();
    for (;;) {
      if (eat('+'))
        v = add(v, term());
      else if (eat('-'))
        v = sub(v, term());
      else
        return v;
    }
  }
  Elem term() {
    Elem v = factor();
    for (;;) {
      if (eat('*'))
        v = mul(v, factor());
      else if (eat('/'))
        v = qp::div(v, factor());
      else
        return v;
    }
  }
  Elem factor() {
    if (eat('-')) return neg(factor());
    Elem v = atom();
    if (eat('^')) {
      bool negexp = eat('-');
      skip_ws();
      std::size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i) fail(Error::Code::Parse, "element: expected exponent at position " + std::to_string(i));
      long long e = 0;
      for (std::size_t k = i; k < j; ++k) e = e * 10 + (s[k] - '0');
      i = j;
      v = pow(v, negexp ? -e : e);
    }
    return v;
  }
  Elem atom() {
    skip_ws();
    if (i >= s.size()) fail(Error::Code::Parse, "element: unexpected end of input");
    if (eat('(')) {
      Elem v = expr();
      if (!eat(')')) fail(Error::Code::Parse, "element: expected ')' at position " + std::to_string(i));
      return v;
    }
    char c = s[i];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      long long v = 0;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) {
        v = v * 10 + (s[j] - '0');
        ++j;
      }
      i = j;
      return from_int(f, v);
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      std::string name(s.substr(i, j - i));
      i = j;
      auto v = resolve_name(f, name);
      if (!v) fail(Error::Code::Parse, "element: unknown generator '" + name + "'");
      return *v;
    }
    fail(Error::Code::Parse, std::string("element: unexpected character '") + c + "'");
  }
};

} // namespace

Elem parse_elem(const Field* f, std::string_view text) {
  ExprParser p{f, text};
  Elem v = p.expr();
  p.skip_ws();
  if (p.i != text.size()) fail(Error::Code::Parse, "element: trailing input");
  return v;
}

// ---------------------------------------------------------------------------
// randomness and enumeration

Elem random_elem(const Field* f, std::mt19937_64& rng) {
  switch (f->kind()) {
    case FieldKind::Prime: return Elem{f, Rep{rng() % f->characteristic()}};
    case FieldKind::Finite: {
      ExtRep v(f->extension_degree(), 0);
      for (auto& c : v) c = rng() % f->characteristic();
      return Elem{f, Rep{std::move(v)}};
    }
    case FieldKind::Rationals:
    case FieldKind::LocalRationals: {
      long long n = static_cast<long long>(rng() % 19) - 9;
      long long d = static_cast<long long>(rng() % 6) + 1;
      return make_rat(f, BigRat(n, d));
    }
    case FieldKind::Laurent: {
      const Field* b = f->base();
      std::vector<Elem> nc, dc;
      unsigned nd = rng() % 3;
      for (unsigned j = 0; j <= nd; ++j) nc.push_back(random_elem(b, rng));
      dc.push_back(one(b));
      if (rng() % 2) dc.push_back(random_elem(b, rng));
      Poly num = poly_make(b, std::move(nc));
      if (num.is_zero()) return zero(f);
      long shift = static_cast<long>(rng() % 5) - 2;
      return make_laurent(f, shift, std::move(num), poly_make(b, std::move(dc)));
    }
    case FieldKind::RationalFunctions: {
      const Field* b = f->base();
      std::size_t nv = f->variables().size();
      MPoly num, den;
      unsigned terms = 1 + rng() % 3;
      for (unsigned t = 0; t < terms; ++t) {
        std::vector<std::uint32_t> e(nv, 0);
        e[rng() % nv] = rng() % 3;
        Elem c = random_elem(b, rng);
        if (!qp::is_zero(c)) num[e] = c;
      }
      den.emplace(std::vector<std::uint32_t>(nv, 0), one(b));
      if (num.empty()) return zero(f);
      return make_mrat(f, std::move(num), std::move(den));
    }
  }
  fail(Error::Code::Internal, "random_elem: bad kind");
}

std::vector<Elem> all_elements(const Field* f) {
  auto card = f->cardinality();
  if (!card) fail(Error::Code::Domain, "all_elements: field is not finite");
  std::vector<Elem> out;
  out.reserve(static_cast<std::size_t>(*card));
  if (f->kind() == FieldKind::Prime) {
    for (std::uint64_t v = 0; v < *card; ++v) out.push_back(Elem{f, Rep{v}});
    return out;
  }
  unsigned k = f->extension_degree();
  std::uint64_t p = f->characteristic();
  ExtRep v(k, 0);
  for (;;) {
    out.push_back(Elem{f, Rep{v}});
    unsigned i = 0;
    while (i < k) {
      if (++v[i] < p) break;
      v[i] = 0;
      ++i;
    }
    if (i == k) break;
  }
  return out;
}

// ---------------------------------------------------------------------------
// tower structure

Elem laurent_uniformizer(const Field* f) {
  if (f->kind() != FieldKind::Laurent) fail(Error::Code::Domain, "not a Laurent field");
  return make_laurent(f, 1, poly_const(one(f->base())), poly_const(one(f->base())));
}

Elem embed(const Elem& a, const Field* target) {
  if (a.field == target) return a;
  switch (target->kind()) {
    case FieldKind::Laurent: {
      Elem b = embed(a, target->base());
      if (qp::is_zero(b)) return zero(target);
      return make_laurent(target, 0, poly_const(b), poly_const(one(target->base())));
    }
    case FieldKind::RationalFunctions: {
      Elem b = embed(a, target->base());
      MPoly num, den;
      std::vector<std::uint32_t> z(target->variables().size(), 0);
      if (!qp::is_zero(b)) num.emplace(z, b);
      den.emplace(z, one(target->base()));
      return make_mrat(target, std::move(num), std::move(den));
    }
    case FieldKind::Finite: {
      if (a.field->kind() == FieldKind::Prime && a.field->characteristic() == target->characteristic()) {
        ExtRep v(target->extension_degree(), 0);
        v[0] = pr(a);
        return Elem{target, Rep{std::move(v)}};
      }
      break;
    }
    case FieldKind::Rationals:
    case FieldKind::LocalRationals: {
      if (a.field->kind() == FieldKind::Rationals || a.field->kind() == FieldKind::LocalRationals)
        return make_rat(target, rat(a));
      break;
    }
    default: break;
  }
  fail(Error::Code::Domain, "embed: no embedding from " + a.field->descriptor() + " into " + target->descriptor());
}

Valuation laurent_valuation(const Elem& x) {
  if (x.field->kind() != FieldKind::Laurent) fail(Error::Code::Domain, "laurent_valuation: not a Laurent element");
  if (is_zero(x)) fail(Error::Code::Domain, "laurent_valuation: zero element");
  const LaurRep& r = lau(x);
  return Valuation{r.shift, qp::div(r.num.c[0], r.den.c[0])};
}

Elem laurent_residue(const Elem& x) {
  const Field* b = x.field->base();
  if (is_zero(x)) return zero(b);
  const LaurRep& r = lau(x);
  if (r.shift > 0) return zero(b);
  if (r.shift < 0) fail(Error::Code::Domain, "laurent_residue: negative valuation");
  return qp::div(r.num.c[0], r.den.c[0]);
}

long rational_valuation(const Elem& x, std::uint64_t p) {
  if (is_zero(x)) fail(Error::Code::Domain, "rational_valuation: zero");
  BigInt n = boost::multiprecision::numerator(rat(x));
  BigInt d = boost::multiprecision::denominator(rat(x));
  long v = 0;
  while (n % p == 0) {
    n /= p;
    ++v;
  }
  while (d % p == 0) {
    d /= p;
    --v;
  }
  return v;
}

std::uint64_t rational_mod(const Elem& x, std::uint64_t m) {
  BigInt n = boost::multiprecision::numerator(rat(x));
  BigInt d = boost::multiprecision::denominator(rat(x));
  BigInt mm(m);
  if (boost::multiprecision::gcd(d, mm) != 1) fail(Error::Code::Domain, "rational_mod: denominator not prime to m");
  BigInt nm = n % mm;
  if (nm < 0) nm += mm;
  BigInt dm = d % mm;
  std::uint64_t nu = nm.convert_to<std::uint64_t>();
  std::uint64_t du = dm.convert_to<std::uint64_t>();
  // modular inverse of du via extended euclid
  long long t0 = 0, t1 = 1;
  long long r0 = static_cast<long long>(m), r1 = static_cast<long long>(du % m);
  while (r1 != 0) {
    long long qq = r0 / r1;
    t0 -= qq * t1;
    std::swap(t0, t1);
    r0 -= qq * r1;
    std::swap(r0, r1);
  }
  long long di = t0 % static_cast<long long>(m);
  if (di < 0) di += static_cast<long long>(m);
  return mulmod(nu, static_cast<std::uint64_t>(di), m);
}

int rational_sign(const Elem& x) {
  const BigRat& r = rat(x);
  if (r == 0) return 0;
  return r < 0 ? -1 : 1;
}

std::vector<std::uint64_t> rational_prime_support(const Elem& x) {
  if (is_zero(x)) fail(Error::Code::Domain, "rational_prime_support: zero");
  BigInt n = boost::multiprecision::numerator(rat(x));
  BigInt d = boost::multiprecision::denominator(rat(x));
  BigInt m = boost::multiprecision::abs(n) * d;
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= 1000000 && m > 1; p = (p == 2 ? 3 : p + 2)) {
    if (m % p == 0) {
      out.push_back(p);
      while (m % p == 0) m /= p;
    }
  }
  if (m > 1) {
    // cofactor is prime (no divisor below 10^6, so primality holds up to 10^12)
    if (m > BigInt("1000000000000"))
      fail(Error::Code::Budget, "rational_prime_support: entry too large to factor");
    out.push_back(m.convert_to<std::uint64_t>());
  }
  return out;
}

Elem substitute(const Elem& a, const std::vector<Elem>& images) {
  const Field* f = a.field;
  if (f->kind() != FieldKind::RationalFunctions)
    fail(Error::Code::Domain, "substitute: not a rational-function element");
  if (images.size() != f->variables().size())
    fail(Error::Code::Domain, "substitute: wrong number of images");
  const Field* target = images.empty() ? nullptr : images[0].field;
  for (auto& im : images)
    if (im.field != target) fail(Error::Code::Domain, "substitute: images in different fields");
  auto eval = [&](const MPoly& p) {
    Elem acc = zero(target);
    for (auto& [e, c] : p) {
      Elem term = embed(c, target);
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i]) term = mul(term, pow(images[i], e[i]));
      acc = add(acc, term);
    }
    return acc;
  };
  const MRatRep& r = mrr(a);
  Elem dv = eval(r.den);
  if (qp::is_zero(dv)) fail(Error::Code::Domain, "substitute: denominator vanishes under assignment");
  return qp::div(eval(r.num), dv);
}

// ---------------------------------------------------------------------------
// squares

std::optional<bool> is_square(const Elem& a) {
  const Field* f = a.field;
  if (is_zero(a)) return true;
  switch (f->kind()) {
    case FieldKind::Prime:
    case FieldKind::Finite: {
      if (f->characteristic() == 2) return true;
      std::uint64_t q = *f->cardinality();
      return is_one(pow(a, static_cast<long long>((q - 1) / 2)));
    }
    case FieldKind::Rationals: {
      const BigRat& r = rat(a);
      if (r < 0) return false;
      BigInt n = boost::multiprecision::numerator(r);
      BigInt d = boost::multiprecision::denominator(r);
      BigInt sn = boost::multiprecision::sqrt(n);
      BigInt sd = boost::multiprecision::sqrt(d);
      return sn * sn == n && sd * sd == d;
    }
    case FieldKind::LocalRationals: {
      std::uint64_t p = f->local_prime();
      long v = rational_valuation(a, p);
      if (v % 2 != 0) return false;
      BigRat u = rat(a);
      for (long i = 0; i < v; ++i) u /= p;
      for (long i = 0; i < -v; ++i) u *= p;
      BigInt n = boost::multiprecision::numerator(u);
      BigInt d = boost::multiprecision::denominator(u);
      if (p == 2) {
        // units: square iff = 1 mod 8
        BigInt dm = d % 8;
        BigInt di = (dm * dm * dm) % 8; // d^-1 mod 8 for odd d: d^3 = d^-1 mod 8
        BigInt um = (n % 8 * di) % 8;
        if (um < 0) um += 8;
        return um == 1;
      }
      BigInt nm = n % p;
      if (nm < 0) nm += p;
      BigInt dm = d % p;
      if (dm < 0) dm += p;
      std::uint64_t un = static_cast<std::uint64_t>(nm);
      std::uint64_t ud = static_cast<std::uint64_t>(dm);
      std::uint64_t u0 = mulmod(un, powmod(ud, p - 2, p), p);
      return powmod(u0, (p - 1) / 2, p) == 1;
    }
    case FieldKind::Laurent: {
      if (f->characteristic() == 2) {
        auto coords = square_coordinates(a);
        for (auto& [m, c] : coords)
          if (m != 0 && !qp::is_zero(c)) return false;
        return true;
      }
      Valuation v = laurent_valuation(a);
      if (v.v % 2 != 0) return false;
      return is_square(v.leading);
    }
    case FieldKind::RationalFunctions: return std::nullopt;
  }
  return std::nullopt;
}

std::optional<Elem> sqrt_exact(const Elem& a) {
  const Field* f = a.field;
  if (is_zero(a)) return zero(f);
  switch (f->kind()) {
    case FieldKind::Prime:
    case FieldKind::Finite: {
      std::uint64_t q = *f->cardinality();
      if (f->characteristic() == 2) {
        // Frobenius inverse: x -> x^(q/2)
        return pow(a, static_cast<long long>(q / 2));
      }
      if (!*is_square(a)) return std::nullopt;
      // desk-scale: find by enumeration with memoized generator powers
      for (auto& x : all_elements(f))
        if (equal(mul(x, x), a)) return x;
      return std::nullopt;
    }
    case FieldKind::Rationals: {
      if (!*is_square(a)) return std::nullopt;
      BigInt n = boost::multiprecision::numerator(rat(a));
      BigInt d = boost::multiprecision::denominator(rat(a));
      return make_rat(f, BigRat(boost::multiprecision::sqrt(n), boost::multiprecision::sqrt(d)));
    }
    case FieldKind::LocalRationals: {
      // exact representative only when the rational itself is a square
      BigRat r = rat(a);
      if (r < 0) return std::nullopt;
      BigInt n = boost::multiprecision::numerator(r);
      BigInt d = boost::multiprecision::denominator(r);
      BigInt sn = boost::multiprecision::sqrt(n);
      BigInt sd = boost::multiprecision::sqrt(d);
      if (sn * sn == n && sd * sd == d) return make_rat(f, BigRat(sn, sd));
      return std::nullopt;
    }
    case FieldKind::Laurent: {
      if (f->characteristic() == 2) {
        auto coords = square_coordinates(a);
        for (auto& [m, c] : coords)
          if (m != 0 && !qp::is_zero(c)) return std::nullopt;
        auto it = coords.find(0);
        if (it == coords.end()) return zero(f);
        return it->second;
      }
      // char != 2: exact square root of an exact square of a rational function
      const LaurRep& r = lau(a);
      if (r.shift % 2 != 0) return std::nullopt;
      auto sq_poly = [&](const Poly& p) -> std::optional<Poly> {
        if (p.is_zero()) return poly_zero(p.field);
        if (p.degree() % 2 != 0) return std::nullopt;
        // triangular solve from the top coefficient
        int m = p.degree() / 2;
        auto lead = sqrt_exact(p.leading());
        if (!lead) return std::nullopt;
        std::vector<Elem> g(static_cast<std::size_t>(m) + 1, zero(p.field));
        g[static_cast<std::size_t>(m)] = *lead;
        Elem two_lead = add(*lead, *lead);
        for (int d = m - 1; d >= 0; --d) {
          // coefficient of x^(d+m) in g^2 equals p[d+m]
          Elem acc = zero(p.field);
          for (int i = d + 1; i < m; ++i) {
            int j = d + m - i;
            if (j > i) continue;
            Elem t = mul(g[static_cast<std::size_t>(i)], g[static_cast<std::size_t>(j)]);
            acc = add(acc, j == i ? t : add(t, t));
          }
          std::size_t idx = static_cast<std::size_t>(d + m);
          Elem rhs = idx < p.c.size() ? p.c[idx] : zero(p.field);
          g[static_cast<std::size_t>(d)] = qp::div(sub(rhs, acc), two_lead);
        }
        Poly gp = poly_make(p.field, g);
        if (poly_equal(poly_mul(gp, gp), p)) return gp;
        return std::nullopt;
      };
      auto sn = sq_poly(r.num);
      auto sd = sq_poly(r.den);
      if (!sn || !sd) return std::nullopt;
      return make_laurent(f, r.shift / 2, *sn, *sd);
    }
    case FieldKind::RationalFunctions: return std::nullopt;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Artin-Schreier classes (characteristic 2)

std::optional<bool> artin_schreier_trivial(const Elem& a0) {
  const Field* f = a0.field;
  if (f->characteristic() != 2) fail(Error::Code::Domain, "artin_schreier_trivial: characteristic is not 2");
  switch (f->kind()) {
    case FieldKind::Prime: return pr(a0) == 0;
    case FieldKind::Finite: {
      // Tr_{F/F2}(a) = 0
      Elem t = a0;
      Elem acc = a0;
      for (unsigned i = 1; i < f->extension_degree(); ++i) {
        t = mul(t, t);
        acc = add(acc, t);
      }
      return qp::is_zero(acc);
    }
    case FieldKind::Laurent: {
      Elem a = a0;
      for (;;) {
        if (qp::is_zero(a)) return true;
        Valuation v = laurent_valuation(a);
        if (v.v > 0) return true;
        if (v.v == 0) {
          // positive-valuation tail is always in the image; decide on the residue
          return artin_schreier_trivial(laurent_residue(a));
        }
        if (v.v % 2 != 0) return false;
        auto s = sqrt_exact(v.leading);
        if (!s) return false; // leading residue is not a square
        // kill the leading term with (s t^(v/2))^2 + s t^(v/2)
        Elem st = mul(embed(*s, f), pow(laurent_uniformizer(f), v.v / 2));
        a = add(a, add(mul(st, st), st));
      }
    }
    case FieldKind::RationalFunctions: return std::nullopt;
    default: fail(Error::Code::Domain, "artin_schreier_trivial: unsupported field");
  }
}

std::optional<Elem> artin_schreier_root(const Elem& a) {
  const Field* f = a.field;
  if (f->characteristic() != 2) fail(Error::Code::Domain, "artin_schreier_root: characteristic is not 2");
  if (f->kind() == FieldKind::Prime) {
    if (pr(a) == 0) return zero(f);
    return std::nullopt;
  }
  if (f->kind() != FieldKind::Finite) fail(Error::Code::Domain, "artin_schreier_root: finite fields only");
  // Solve (Frobenius + id) x = a as an F2-linear system in coordinates.
  unsigned k = f->extension_degree();
  // augmented matrix rows: [ M | a ], M[r][j] = coord r of e_j^2 + e_j
  std::vector<std::vector<std::uint8_t>> aug(k, std::vector<std::uint8_t>(k + 1, 0));
  for (unsigned j = 0; j < k; ++j) {
    ExtRep v(k, 0);
    v[j] = 1;
    Elem e{f, Rep{std::move(v)}};
    Elem im = add(mul(e, e), e);
    const ExtRep& w = ext(im);
    for (unsigned r = 0; r < k; ++r) aug[r][j] = static_cast<std::uint8_t>(w[r] & 1);
  }
  {
    const ExtRep& w = ext(a);
    for (unsigned r = 0; r < k; ++r) aug[r][k] = static_cast<std::uint8_t>(w[r] & 1);
  }
  std::vector<int> pivot_of_col(k, -1);
  unsigned row = 0;
  for (unsigned col = 0; col < k && row < k; ++col) {
    unsigned pr2 = row;
    while (pr2 < k && !aug[pr2][col]) ++pr2;
    if (pr2 == k) continue;
    std::swap(aug[row], aug[pr2]);
    for (unsigned r = 0; r < k; ++r) {
      if (r != row && aug[r][col])
        for (unsigned c = col; c <= k; ++c) aug[r][c] ^= aug[row][c];
    }
    pivot_of_col[col] = static_cast<int>(row);
    ++row;
  }
  for (unsigned r = row; r < k; ++r)
    if (aug[r][k]) return std::nullopt;
  ExtRep x(k, 0);
  for (unsigned col = 0; col < k; ++col)
    if (pivot_of_col[col] >= 0) x[col] = aug[static_cast<std::size_t>(pivot_of_col[col])][k];
  return Elem{f, Rep{std::move(x)}};
}

// ---------------------------------------------------------------------------
// square coordinates (characteristic 2)

// Bit index of a Laurent field's own uniformizer in square-coordinate masks.
static unsigned level_bit(const Field* f) { return f->base()->laurent_depth(); }

std::map<std::uint32_t, Elem> square_coordinates(const Elem& x) {
  const Field* f = x.field;
  if (f->characteristic() != 2) fail(Error::Code::Domain, "square_coordinates: characteristic is not 2");
  std::map<std::uint32_t, Elem> out;
  if (is_zero(x)) return out;
  if (f->kind() == FieldKind::Prime || f->kind() == FieldKind::Finite) {
    out.emplace(0u, *sqrt_exact(x)); // perfect
    return out;
  }
  if (f->kind() != FieldKind::Laurent) fail(Error::Code::Domain, "square_coordinates: unsupported field");

  const Field* b = f->base();
  const LaurRep& r = lau(x);
  // x = t^shift * (num*den) / den^2
  Poly P = poly_mul(r.num, r.den);
  Elem inv_den = inv(make_laurent(f, 0, r.den, poly_const(one(b))));
  unsigned bit = level_bit(f);
  Elem t = laurent_uniformizer(f);

  // Split P by exponent parity; each coefficient decomposes over the base.
  // Accumulators: per (parity, inner mask) a polynomial in t built from the
  // inner coordinates, entering the result as its square.
  std::map<std::pair<int, std::uint32_t>, std::map<long, Elem>> acc; // -> exponent -> base coeff
  for (std::size_t j = 0; j < P.c.size(); ++j) {
    if (qp::is_zero(P.c[j])) continue;
    int parity = static_cast<int>(j % 2);
    long half = static_cast<long>(j / 2);
    auto inner = square_coordinates(P.c[j]);
    for (auto& [m, c] : inner) {
      if (qp::is_zero(c)) continue;
      auto& slot = acc[{parity, m}];
      auto it = slot.find(half);
      if (it == slot.end())
        slot.emplace(half, c);
      else
        it->second = add(it->second, c);
    }
  }
  // shift = 2*s2 + sp with sp in {0,1} (floor division)
  long s2 = r.shift >= 0 ? r.shift / 2 : -((-r.shift + 1) / 2);
  int sp = static_cast<int>(r.shift - 2 * s2);
  for (auto& [key, coeffs] : acc) {
    auto [parity, m] = key;
    Elem q = zero(f);
    for (auto& [e, c] : coeffs) q = add(q, mul(embed(c, f), pow(t, e)));
    if (qp::is_zero(q)) continue;
    // contribution: t^(parity+sp) * (q * t^s2 * inv_den)^2
    int p2 = parity + sp;
    Elem cm = mul(mul(q, pow(t, s2)), inv_den);
    std::uint32_t mask = m;
    if (p2 % 2 == 1) mask |= (1u << bit);
    if (p2 == 2) cm = mul(cm, t);
    auto it = out.find(mask);
    if (it == out.end())
      out.emplace(mask, cm);
    else
      it->second = add(it->second, cm);
  }
  // prune zeros
  for (auto it = out.begin(); it != out.end();) {
    if (qp::is_zero(it->second))
      it = out.erase(it);
    else
      ++it;
  }
  return out;
}

// ---------------------------------------------------------------------------
// etale quadratic algebras

EtaleQuadratic::EtaleQuadratic(const Field* F, Elem a) : f_(F), a_(std::move(a)) {
  if (a_.field != F) fail(Error::Code::Domain, "EtaleQuadratic: parameter not in base field");
  Elem disc = qp::add(one(F), qp::mul(from_int(F, 4), a_));
  if (qp::is_zero(disc)) fail(Error::Code::Domain, "EtaleQuadratic: singular presentation (1 + 4a = 0)");
  if (F->characteristic() == 2) {
    auto t = artin_schreier_trivial(a_);
    split_ = t ? (*t ? Splitness::Split : Splitness::NonSplit) : Splitness::Unknown;
  } else {
    auto s = is_square(disc);
    split_ = s ? (*s ? Splitness::Split : Splitness::NonSplit) : Splitness::Unknown;
  }
}

EtaleQuadratic::El EtaleQuadratic::from_base(const Elem& x) const { return {x, zero(f_)}; }
EtaleQuadratic::El EtaleQuadratic::gen() const { return {zero(f_), one(f_)}; }
EtaleQuadratic::El EtaleQuadratic::add(const El& x, const El& y) const {
  return {qp::add(x.first, y.first), qp::add(x.second, y.second)};
}
EtaleQuadratic::El EtaleQuadratic::mul(const El& x, const El& y) const {
  // (x1 + y1 u)(x2 + y2 u), u^2 = u + a
  Elem x1x2 = qp::mul(x.first, y.first);
  Elem y1y2 = qp::mul(x.second, y.second);
  Elem cross = qp::add(qp::mul(x.first, y.second), qp::mul(x.second, y.first));
  return {qp::add(x1x2, qp::mul(y1y2, a_)), qp::add(cross, y1y2)};
}
EtaleQuadratic::El EtaleQuadratic::conj(const El& x) const {
  return {qp::add(x.first, x.second), neg(x.second)};
}
Elem EtaleQuadratic::norm(const El& x) const {
  // x^2 + xy - a y^2
  Elem t = qp::add(qp::mul(x.first, x.first), qp::mul(x.first, x.second));
  return sub(t, qp::mul(a_, qp::mul(x.second, x.second)));
}
Elem EtaleQuadratic::trace(const El& x) const { return qp::add(qp::add(x.first, x.first), x.second); }
bool EtaleQuadratic::is_zero_el(const El& x) const { return qp::is_zero(x.first) && qp::is_zero(x.second); }
EtaleQuadratic::El EtaleQuadratic::inv_el(const El& x) const {
  Elem n = norm(x);
  if (qp::is_zero(n)) fail(Error::Code::Domain, "EtaleQuadratic: zero divisor has no inverse");
  El c = conj(x);
  Elem ninv = qp::inv(n);
  return {qp::mul(c.first, ninv), qp::mul(c.second, ninv)};
}

// ---------------------------------------------------------------------------
// default minimal polynomials

static std::vector<std::uint64_t> default_min_poly(std::uint64_t p, unsigned k) {
  const Field* fp = Field::prime(p);
  std::vector<std::uint64_t> coeffs(k + 1, 0);
  coeffs[k] = 1;
  for (;;) {
    std::vector<Elem> cs;
    for (auto c : coeffs) cs.push_back(from_int(fp, static_cast<long long>(c)));
    Poly m = poly_make(fp, cs);
    if (poly_irreducible(m)) return coeffs;
    unsigned i = 0;
    while (i < k) {
      if (++coeffs[i] < p) break;
      coeffs[i] = 0;
      ++i;
    }
    if (i == k) fail(Error::Code::Internal, "no irreducible polynomial found");
  }
}

} // namespace qp
