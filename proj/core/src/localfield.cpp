#include "localfield.hpp"

#include <algorithm>
#include <set>

namespace qp::local {

static int legendre(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) return 0;
  std::uint64_t r = 1, base = a, e = (p - 1) / 2;
  while (e) {
    if (e & 1) r = (static_cast<unsigned __int128>(r) * base) % p;
    base = (static_cast<unsigned __int128>(base) * base) % p;
    e >>= 1;
  }
  return r == 1 ? 1 : -1;
}

int hilbert_symbol(const Elem& a, const Elem& b, std::uint64_t p) {
  if (is_zero(a) || is_zero(b)) fail(Error::Code::Domain, "hilbert_symbol: zero argument");
  if (p == 0) return (rational_sign(a) < 0 && rational_sign(b) < 0) ? -1 : 1;
  const Field* Q = a.field;
  long alpha = rational_valuation(a, p);
  long beta = rational_valuation(b, p);
  Elem pe = from_int(Q, static_cast<long long>(p));
  Elem u = div(a, pow(pe, alpha));
  Elem v = div(b, pow(pe, beta));
  if (p != 2) {
    std::uint64_t um = rational_mod(u, p);
    std::uint64_t vm = rational_mod(v, p);
    int s = 1;
    if ((alpha % 2 != 0) && (beta % 2 != 0) && ((p - 1) / 2) % 2 == 1) s = -s;
    if (beta % 2 != 0 && legendre(um, p) == -1) s = -s;
    if (alpha % 2 != 0 && legendre(vm, p) == -1) s = -s;
    return s;
  }
  // p = 2: (-1)^(eps(u)eps(v) + alpha*omega(v) + beta*omega(u))
  auto eps = [&](const Elem& x) { return (rational_mod(x, 4) == 3) ? 1 : 0; };
  auto omega = [&](const Elem& x) {
    std::uint64_t m = rational_mod(x, 8);
    return (m == 3 || m == 5) ? 1 : 0;
  };
  int e = eps(u) * eps(v) + static_cast<int>(alpha & 1) * omega(v) + static_cast<int>(beta & 1) * omega(u);
  return (e % 2 == 0) ? 1 : -1;
}

std::vector<std::uint64_t> ramified_primes(const std::vector<Elem>& diag) {
  std::set<std::uint64_t> ps{2};
  for (auto& d : diag) {
    if (is_zero(d)) continue;
    for (auto p : rational_prime_support(d)) ps.insert(p);
  }
  return {ps.begin(), ps.end()};
}

// Hasse symbol eps_p = prod_{i<j} (a_i, a_j)_p
static int hasse_eps(const std::vector<Elem>& diag, std::uint64_t p) {
  int s = 1;
  for (std::size_t i = 0; i < diag.size(); ++i)
    for (std::size_t j = i + 1; j < diag.size(); ++j) s *= hilbert_symbol(diag[i], diag[j], p);
  return s;
}

static bool square_class_trivial_local(const Elem& x, std::uint64_t p) {
  // is x a square in Qp
  long v = rational_valuation(x, p);
  if (v % 2 != 0) return false;
  Elem u = div(x, pow(from_int(x.field, static_cast<long long>(p)), v));
  if (p == 2) return rational_mod(u, 8) == 1;
  return legendre(rational_mod(u, p), p) == 1;
}

bool isotropic_diag_real(const std::vector<Elem>& diag) {
  bool pos = false, negv = false;
  for (auto& d : diag) {
    int s = rational_sign(d);
    if (s > 0) pos = true;
    if (s < 0) negv = true;
  }
  return pos && negv;
}

bool isotropic_diag_local(const std::vector<Elem>& diag, std::uint64_t p) {
  std::size_t n = diag.size();
  const Field* Q = diag.empty() ? nullptr : diag[0].field;
  if (n <= 1) return false;
  Elem det = one(Q);
  for (auto& d : diag) det = mul(det, d);
  if (n == 2) return square_class_trivial_local(neg(det), p);
  int eps = hasse_eps(diag, p);
  if (n == 3) {
    // represents 0 iff (-1, -det)_p = eps
    return hilbert_symbol(from_int(Q, -1), neg(det), p) == eps;
  }
  if (n == 4) {
    if (!square_class_trivial_local(det, p)) return true;
    return eps == hilbert_symbol(from_int(Q, -1), from_int(Q, -1), p);
  }
  return true; // n >= 5 over Qp
}

bool isotropic_diag_global(const std::vector<Elem>& diag) {
  std::size_t n = diag.size();
  if (n <= 1) return false;
  if (!isotropic_diag_real(diag)) return false;
  if (n == 2) {
    Elem det = one(diag[0].field);
    for (auto& d : diag) det = mul(det, d);
    auto s = is_square(neg(det));
    return s && *s;
  }
  if (n >= 5) return true; // indefinite and locally isotropic everywhere
  for (auto p : ramified_primes(diag))
    if (!isotropic_diag_local(diag, p)) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Witt decomposition by invariant stripping

namespace {

struct InvariantState {
  std::size_t n;
  Elem det;                       // determinant class representative
  std::vector<std::uint64_t> ps;  // relevant primes
  std::vector<int> eps;           // Hasse symbol at ps
  int sig_pos = 0, sig_neg = 0;   // real signature (global only)
  bool local = false;
  std::uint64_t p = 0;            // the local prime
};

bool state_isotropic(const InvariantState& st, const Field* Q) {
  if (st.n <= 1) return false;
  if (st.local) {
    if (st.n >= 5) return true;
    if (st.n == 2) return square_class_trivial_local(neg(st.det), st.p);
    int eps = st.eps[0];
    if (st.n == 3) return hilbert_symbol(from_int(Q, -1), neg(st.det), st.p) == eps;
    if (!square_class_trivial_local(st.det, st.p)) return true;
    return eps == hilbert_symbol(from_int(Q, -1), from_int(Q, -1), st.p);
  }
  // global
  if (std::min(st.sig_pos, st.sig_neg) == 0) return false; // definite
  if (st.n >= 5) return true;
  if (st.n == 2) {
    auto s = is_square(neg(st.det));
    return s && *s;
  }
  for (std::size_t i = 0; i < st.ps.size(); ++i) {
    std::uint64_t p = st.ps[i];
    if (st.n == 3) {
      if (hilbert_symbol(from_int(Q, -1), neg(st.det), p) != st.eps[i]) return false;
    } else { // n == 4
      if (square_class_trivial_local(st.det, p) &&
          st.eps[i] != hilbert_symbol(from_int(Q, -1), from_int(Q, -1), p))
        return false;
    }
  }
  return true;
}

// strip one hyperbolic plane: n -= 2, det' = -det, eps'_p = eps_p * (-1, det')_p
void strip(InvariantState& st, const Field* Q) {
  st.n -= 2;
  st.det = neg(st.det);
  for (std::size_t i = 0; i < st.ps.size(); ++i)
    st.eps[i] *= hilbert_symbol(from_int(Q, -1), st.det, st.ps[i]);
  if (!st.local) {
    st.sig_pos -= 1;
    st.sig_neg -= 1;
  }
}

// enumerate diagonal representatives with prescribed invariants
std::optional<QuadraticForm> reconstruct_kernel(const InvariantState& st, const Field* Q) {
  if (st.n == 0) return QuadraticForm{Q, 0, Mat(Q, 0, 0)};
  // candidate entry pool: +-(squarefree products of the relevant primes)
  std::vector<Elem> pool;
  std::vector<std::uint64_t> ps = st.ps;
  if (ps.empty()) ps.push_back(2);
  std::size_t np = ps.size();
  for (std::uint64_t mask = 0; mask < (1ULL << np); ++mask) {
    long long v = 1;
    for (std::size_t i = 0; i < np; ++i)
      if (mask & (1ULL << i)) v *= static_cast<long long>(ps[i]);
    pool.push_back(from_int(Q, v));
    pool.push_back(from_int(Q, -v));
  }
  std::vector<std::size_t> idx(st.n, 0);
  for (;;) {
    std::vector<Elem> cand;
    for (std::size_t i = 0; i < st.n; ++i) cand.push_back(pool[idx[i]]);
    // check invariants
    Elem det = one(Q);
    for (auto& c : cand) det = mul(det, c);
    bool ok = true;
    if (st.local) {
      ok = square_class_trivial_local(mul(det, st.det), st.p);
      if (ok) ok = hasse_eps(cand, st.p) == st.eps[0];
      if (ok && isotropic_diag_local(cand, st.p)) ok = false;
    } else {
      auto sq = is_square(mul(det, st.det));
      ok = sq && *sq;
      if (ok) {
        int pos = 0, negc = 0;
        for (auto& c : cand) (rational_sign(c) > 0 ? pos : negc)++;
        ok = pos == st.sig_pos && negc == st.sig_neg;
      }
      if (ok)
        for (std::size_t i = 0; i < st.ps.size() && ok; ++i)
          ok = hasse_eps(cand, st.ps[i]) == st.eps[i];
      if (ok && isotropic_diag_global(cand)) ok = false;
    }
    if (ok) return diagonal_form(Q, cand);
    std::size_t i = 0;
    while (i < st.n) {
      if (++idx[i] < pool.size()) break;
      idx[i] = 0;
      ++i;
    }
    if (i == st.n) break;
  }
  return std::nullopt;
}

WittDecomposition witt_rational(const QuadraticForm& q, bool local, std::uint64_t p) {
  const Field* Q = q.field;
  auto diag = diagonalize_form(q);
  InvariantState st;
  st.n = diag.size();
  st.det = one(Q);
  for (auto& d : diag) st.det = mul(st.det, d);
  st.local = local;
  st.p = p;
  if (local) {
    st.ps = {p};
    st.eps = {hasse_eps(diag, p)};
  } else {
    st.ps = ramified_primes(diag);
    for (auto pp : st.ps) st.eps.push_back(hasse_eps(diag, pp));
    for (auto& d : diag) (rational_sign(d) > 0 ? st.sig_pos : st.sig_neg)++;
  }
  unsigned m = 0;
  while (st.n >= 2 && state_isotropic(st, Q)) {
    strip(st, Q);
    ++m;
  }
  if (st.n == q.dim) return {0, q}; // anisotropic: the form itself is its kernel
  auto k = reconstruct_kernel(st, Q);
  if (!k)
    fail(Error::Code::Budget,
         "witt_decompose: kernel reconstruction exhausted its candidate pool");
  return {m, *k};
}

} // namespace

WittDecomposition witt_local(const QuadraticForm& q) {
  return witt_rational(q, true, q.field->local_prime());
}

WittDecomposition witt_global(const QuadraticForm& q) { return witt_rational(q, false, 0); }

} // namespace qp::local
