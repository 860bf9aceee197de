#include <qp/poly.hpp>

#include <algorithm>

namespace qp {

static void poly_trim(Poly& a) {
  while (!a.c.empty() && is_zero(a.c.back())) a.c.pop_back();
}

Poly poly_zero(const Field* f) {
  Poly p;
  p.field = f;
  return p;
}

Poly poly_const(const Elem& a) {
  Poly p;
  p.field = a.field;
  if (!is_zero(a)) p.c.push_back(a);
  return p;
}

Poly poly_gen(const Field* f) {
  Poly p;
  p.field = f;
  p.c = {zero(f), one(f)};
  return p;
}

Poly poly_make(const Field* f, std::vector<Elem> coeffs) {
  Poly p;
  p.field = f;
  p.c = std::move(coeffs);
  poly_trim(p);
  return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out;
  out.field = a.field;
  out.c.resize(std::max(a.c.size(), b.c.size()), zero(a.field));
  for (std::size_t i = 0; i < out.c.size(); ++i) {
    if (i < a.c.size() && i < b.c.size())
      out.c[i] = add(a.c[i], b.c[i]);
    else if (i < a.c.size())
      out.c[i] = a.c[i];
    else
      out.c[i] = b.c[i];
  }
  poly_trim(out);
  return out;
}

Poly poly_neg(const Poly& a) {
  Poly out;
  out.field = a.field;
  out.c.reserve(a.c.size());
  for (auto& c : a.c) out.c.push_back(neg(c));
  return out;
}

Poly poly_sub(const Poly& a, const Poly& b) { return poly_add(a, poly_neg(b)); }

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  out.field = a.field;
  if (a.is_zero() || b.is_zero()) return out;
  out.c.assign(a.c.size() + b.c.size() - 1, zero(a.field));
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (is_zero(a.c[i])) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) {
      if (is_zero(b.c[j])) continue;
      out.c[i + j] = add(out.c[i + j], mul(a.c[i], b.c[j]));
    }
  }
  poly_trim(out);
  return out;
}

Poly poly_scale(const Poly& a, const Elem& s) {
  if (is_zero(s)) return poly_zero(a.field);
  Poly out;
  out.field = a.field;
  out.c.reserve(a.c.size());
  for (auto& c : a.c) out.c.push_back(mul(c, s));
  poly_trim(out);
  return out;
}

std::pair<Poly, Poly> poly_divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) fail(Error::Code::Domain, "polynomial division by zero");
  Poly r = a;
  Poly q = poly_zero(a.field);
  if (a.degree() < b.degree()) return {q, r};
  q.c.assign(static_cast<std::size_t>(a.degree() - b.degree()) + 1, zero(a.field));
  Elem lead_inv = inv(b.leading());
  while (!r.is_zero() && r.degree() >= b.degree()) {
    std::size_t shift = static_cast<std::size_t>(r.degree() - b.degree());
    Elem coef = mul(r.leading(), lead_inv);
    q.c[shift] = coef;
    for (std::size_t i = 0; i < b.c.size(); ++i)
      r.c[shift + i] = sub(r.c[shift + i], mul(coef, b.c[i]));
    poly_trim(r);
  }
  poly_trim(q);
  return {q, r};
}

Poly poly_mod(const Poly& a, const Poly& b) { return poly_divmod(a, b).second; }

Poly poly_monic(const Poly& a) {
  if (a.is_zero() || is_one(a.leading())) return a;
  return poly_scale(a, inv(a.leading()));
}

Poly poly_gcd(const Poly& a, const Poly& b) {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = poly_mod(x, y);
    x = y;
    y = r;
  }
  return poly_monic(x);
}

Poly poly_derivative(const Poly& a) {
  Poly out;
  out.field = a.field;
  for (std::size_t i = 1; i < a.c.size(); ++i) {
    Elem k = from_int(a.field, static_cast<long long>(i));
    out.c.push_back(mul(a.c[i], k));
  }
  poly_trim(out);
  return out;
}

Poly poly_pow_mod(const Poly& a, unsigned long long e, const Poly& m) {
  Poly r = poly_const(one(a.field));
  Poly base = poly_mod(a, m);
  while (e) {
    if (e & 1) r = poly_mod(poly_mul(r, base), m);
    base = poly_mod(poly_mul(base, base), m);
    e >>= 1;
  }
  return r;
}

Elem poly_eval(const Poly& a, const Elem& x) {
  Elem acc = zero(a.field);
  for (std::size_t i = a.c.size(); i-- > 0;) acc = add(mul(acc, x), a.c[i]);
  return acc;
}

bool poly_equal(const Poly& a, const Poly& b) {
  if (a.c.size() != b.c.size()) return false;
  for (std::size_t i = 0; i < a.c.size(); ++i)
    if (!equal(a.c[i], b.c[i])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// finite-field factorization

bool poly_irreducible(const Poly& a) {
  const Field* f = a.field;
  auto card = f->cardinality();
  if (!card) fail(Error::Code::Domain, "poly_irreducible: finite fields only");
  int n = a.degree();
  if (n <= 0) return false;
  if (n == 1) return true;
  std::uint64_t q = *card;
  Poly x = poly_gen(f);
  // x^(q^n) = x mod a
  Poly xp = x;
  for (int i = 0; i < n; ++i) xp = poly_pow_mod(xp, q, a);
  if (!poly_equal(poly_mod(poly_sub(xp, x), a), poly_zero(f))) return false;
  // gcd(x^(q^(n/l)) - x, a) = 1 for prime divisors l of n
  for (int l = 2; l <= n; ++l) {
    if (n % l != 0) continue;
    bool lp = true;
    for (int d = 2; d * d <= l; ++d)
      if (l % d == 0) lp = false;
    if (!lp) continue;
    Poly xe = x;
    for (int i = 0; i < n / l; ++i) xe = poly_pow_mod(xe, q, a);
    Poly g = poly_gcd(poly_sub(xe, x), a);
    if (g.degree() != 0) return false;
  }
  return true;
}

// p-th root of a coefficient known to be a p-th power.
static std::optional<Elem> pth_root(const Elem& c) {
  const Field* f = c.field;
  std::uint64_t p = f->characteristic();
  if (p == 0) return std::nullopt;
  if (f->is_finite()) return pow(c, static_cast<long long>(*f->cardinality() / p));
  if (p == 2) return sqrt_exact(c);
  return std::nullopt;
}

// f(x) = g(x^p) -> g, with p-th roots of coefficients.
static Poly pth_root_poly(const Poly& a) {
  const Field* f = a.field;
  std::uint64_t p = f->characteristic();
  std::vector<Elem> bc;
  for (std::size_t i = 0; i < a.c.size(); i += static_cast<std::size_t>(p)) {
    auto r = pth_root(a.c[i]);
    if (!r) fail(Error::Code::Domain, "pth_root_poly: coefficient has no p-th root");
    bc.push_back(*r);
  }
  return poly_make(f, bc);
}

// Squarefree decomposition, Yun's algorithm adapted to characteristic p.
static std::vector<std::pair<Poly, unsigned>> squarefree_parts(const Poly& a) {
  std::vector<std::pair<Poly, unsigned>> out;
  const Field* f = a.field;
  if (a.degree() <= 0) return out;
  Poly d = poly_derivative(a);
  std::uint64_t p = f->characteristic();
  if (d.is_zero()) {
    for (auto& [h, m] : squarefree_parts(pth_root_poly(a)))
      out.push_back({h, m * static_cast<unsigned>(p)});
    return out;
  }
  Poly c = poly_gcd(a, d);
  Poly w = poly_divmod(a, c).first;
  unsigned i = 1;
  while (w.degree() > 0) {
    Poly y = poly_gcd(w, c);
    Poly fac = poly_divmod(w, y).first;
    if (fac.degree() > 0) out.push_back({poly_monic(fac), i});
    w = y;
    c = poly_divmod(c, y).first;
    ++i;
  }
  // what is left in c carries multiplicities divisible by p
  if (c.degree() > 0)
    for (auto& [h, m] : squarefree_parts(poly_monic(c))) out.push_back({h, m});
  return out;
}

// Distinct-degree then equal-degree (Cantor-Zassenhaus) splitting of a
// squarefree monic polynomial.
static void equal_degree_split(const Poly& a, int d, std::mt19937_64& rng, std::vector<Poly>& out) {
  const Field* f = a.field;
  if (a.degree() == d) {
    out.push_back(poly_monic(a));
    return;
  }
  std::uint64_t q = *f->cardinality();
  for (;;) {
    // random polynomial of degree < deg a
    std::vector<Elem> rc;
    for (int i = 0; i < a.degree(); ++i) rc.push_back(random_elem(f, rng));
    Poly r = poly_make(f, rc);
    if (r.is_zero()) continue;
    Poly g = poly_gcd(r, a);
    if (g.degree() > 0 && g.degree() < a.degree()) {
      equal_degree_split(g, d, rng, out);
      equal_degree_split(poly_divmod(a, g).first, d, rng, out);
      return;
    }
    Poly h;
    if (f->characteristic() == 2) {
      // trace map T(r) = r + r^2 + r^4 + ... over F_{q^d}
      unsigned rounds = 0;
      std::uint64_t qq = q;
      while (qq > 1) {
        qq /= 2;
        ++rounds;
      }
      rounds *= static_cast<unsigned>(d);
      Poly t = poly_mod(r, a);
      Poly acc = t;
      for (unsigned i = 1; i < rounds; ++i) {
        t = poly_mod(poly_mul(t, t), a);
        acc = poly_add(acc, t);
      }
      h = poly_mod(acc, a);
    } else {
      // r^((q^d - 1)/2) - 1
      unsigned long long e = 1;
      for (int i = 0; i < d; ++i) e *= q;
      e = (e - 1) / 2;
      h = poly_sub(poly_pow_mod(r, e, a), poly_const(one(f)));
    }
    Poly g2 = poly_gcd(h, a);
    if (g2.degree() > 0 && g2.degree() < a.degree()) {
      equal_degree_split(g2, d, rng, out);
      equal_degree_split(poly_divmod(a, g2).first, d, rng, out);
      return;
    }
  }
}

std::vector<std::pair<Poly, unsigned>> poly_factor(const Poly& a0, std::uint64_t seed) {
  const Field* f = a0.field;
  if (!f->cardinality()) fail(Error::Code::Domain, "poly_factor: finite fields only");
  std::vector<std::pair<Poly, unsigned>> result;
  if (a0.degree() <= 0) return result;
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);

  for (auto& [sf, mult] : squarefree_parts(poly_monic(a0))) {
    // distinct-degree split
    std::uint64_t q = *f->cardinality();
    Poly rem2 = sf;
    Poly x = poly_gen(f);
    Poly xq = x;
    int d = 1;
    while (rem2.degree() >= 2 * d) {
      xq = poly_pow_mod(xq, q, rem2);
      Poly g = poly_gcd(poly_sub(xq, x), rem2);
      if (g.degree() > 0) {
        std::vector<Poly> pieces;
        equal_degree_split(g, d, rng, pieces);
        for (auto& p : pieces) result.push_back({p, mult});
        rem2 = poly_divmod(rem2, g).first;
        xq = poly_mod(xq, rem2);
      }
      ++d;
    }
    if (rem2.degree() > 0) result.push_back({poly_monic(rem2), mult});
  }
  // merge equal factors
  std::vector<std::pair<Poly, unsigned>> merged;
  for (auto& [p, m] : result) {
    bool found = false;
    for (auto& [p2, m2] : merged) {
      if (poly_equal(p, p2)) {
        m2 += m;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back({p, m});
  }
  return merged;
}

std::vector<Elem> poly_roots(const Poly& a, std::uint64_t seed) {
  std::vector<Elem> roots;
  if (a.degree() <= 0) return roots;
  const Field* f = a.field;
  if (f->is_finite()) {
    for (auto& [p, m] : poly_factor(a, seed)) {
      (void)m;
      if (p.degree() == 1) roots.push_back(neg(p.c[0])); // monic x + c
    }
    return roots;
  }
  fail(Error::Code::Domain, "poly_roots: finite fields only");
}

// ---------------------------------------------------------------------------
// exact m-th roots

Poly poly_nth_root(const Poly& a, unsigned m) {
  const Field* f = a.field;
  if (m == 0) fail(Error::Code::Domain, "poly_nth_root: m = 0");
  if (m == 1) return a;
  if (a.is_zero()) return a;
  if (!is_one(a.leading())) fail(Error::Code::Domain, "poly_nth_root: input not monic");
  if (a.degree() % static_cast<int>(m) != 0)
    fail(Error::Code::Domain, "poly_nth_root: degree not divisible by m");
  std::uint64_t p = f->characteristic();
  unsigned pe = 1;
  unsigned mprime = m;
  if (p > 0) {
    while (mprime % p == 0) {
      mprime /= static_cast<unsigned>(p);
      pe *= static_cast<unsigned>(p);
    }
  }
  Poly cur = a;
  if (mprime > 1) {
    // m'-th root with m' invertible: triangular recurrence from the top.
    int n = cur.degree() / static_cast<int>(mprime);
    std::vector<Elem> g(static_cast<std::size_t>(n) + 1, zero(f));
    g[static_cast<std::size_t>(n)] = one(f);
    Elem mp = from_int(f, static_cast<long long>(mprime));
    for (int d = n - 1; d >= 0; --d) {
      // coefficient of x^(d + (m'-1)n) in g^m' must match cur
      // use the recurrence: build g truncated and compare highest unknown term
      // brute polynomial expansion is fine at desk scale
      // solve linearly: g^m' with g_d unknown contributes m' * g_n^(m'-1) * g_d
      Poly trial = poly_make(f, g);
      Poly power = trial;
      for (unsigned i = 1; i < mprime; ++i) power = poly_mul(power, trial);
      std::size_t idx = static_cast<std::size_t>(d) + static_cast<std::size_t>(mprime - 1) * static_cast<std::size_t>(n);
      Elem have = idx < power.c.size() ? power.c[idx] : zero(f);
      Elem want = idx < cur.c.size() ? cur.c[idx] : zero(f);
      g[static_cast<std::size_t>(d)] = div(sub(want, have), mp);
    }
    Poly root = poly_make(f, g);
    Poly check = root;
    for (unsigned i = 1; i < mprime; ++i) check = poly_mul(check, root);
    if (!poly_equal(check, cur)) fail(Error::Code::Domain, "poly_nth_root: input is not an m-th power");
    cur = root;
  }
  if (pe > 1) {
    // cur = h^(pe) = Frobenius twist: coefficients at multiples of pe only
    std::vector<Elem> h;
    for (int i = 0; i <= cur.degree(); ++i) {
      if (i % static_cast<int>(pe) != 0) {
        if (!is_zero(cur.c[static_cast<std::size_t>(i)]))
          fail(Error::Code::Domain, "poly_nth_root: input is not a p^e-th power");
        continue;
      }
      Elem c = cur.c[static_cast<std::size_t>(i)];
      // take pe-th root of c
      Elem r = c;
      unsigned left = pe;
      while (left > 1) {
        auto s = pth_root(r);
        if (!s) fail(Error::Code::Domain, "poly_nth_root: coefficient has no p-th root");
        r = *s;
        left /= static_cast<unsigned>(p);
      }
      h.push_back(r);
    }
    Poly root = poly_make(f, h);
    Poly check = root;
    for (unsigned i = 1; i < pe; ++i) check = poly_mul(check, root);
    if (!poly_equal(check, cur)) fail(Error::Code::Domain, "poly_nth_root: p-power check failed");
    cur = root;
  }
  return cur;
}

} // namespace qp
