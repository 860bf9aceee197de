#include "springer.hpp"

#include <algorithm>

namespace qp::springer {

static long floor_div2(long v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }

// ---------------------------------------------------------------------------
// characteristic-2 block analysis over K = k((t))

namespace {

struct ReducedD {
  bool outside = false;
  Elem d;                    // exactly reduced block parameter
  bool has_pole = false;     // v(d) == -1 after reduction
};

// Reduce the block parameter d = xy by exact Artin-Schreier shifts
// d -> d + p(mu) until v(d) >= 0 or the pole is irreducibly of depth 1.
ReducedD reduce_block_param(Elem d) {
  ReducedD out;
  const Field* K = d.field;
  for (;;) {
    if (is_zero(d)) break;
    Valuation v = laurent_valuation(d);
    if (v.v >= 0) break;
    if (v.v == -1) {
      out.has_pole = true;
      break;
    }
    if (v.v % 2 != 0) {
      out.outside = true; // odd pole deeper than 1
      break;
    }
    auto s = sqrt_exact(v.leading);
    if (!s) {
      out.outside = true; // even pole with non-square leading residue
      break;
    }
    Elem st = mul(embed(*s, K), pow(laurent_uniformizer(K), v.v / 2));
    d = add(d, add(mul(st, st), st));
  }
  out.d = d;
  return out;
}

struct BlockClass {
  enum Kind { Hyperbolic, Unit, TUnit, Ram, Outside } kind = Outside;
  Elem ra, rb;     // Unit/TUnit: residue block entries over the base field
  int eps = 0;     // Ram: uniformizer parity of the block scalar
  Elem ubar, ebar; // Ram: residues of the unit entry and the pole coefficient
  bool stuck = false;
};

BlockClass classify_block(const Field* K, const Elem& x, const Elem& y) {
  BlockClass out;
  if (is_zero(x) || is_zero(y)) {
    out.kind = BlockClass::Hyperbolic;
    return out;
  }
  Elem d_raw = mul(x, y);
  ReducedD red = reduce_block_param(d_raw);
  if (red.outside) return out;
  Elem t = laurent_uniformizer(K);
  long vx = laurent_valuation(x).v;
  long m = floor_div2(vx);
  int eps = static_cast<int>(vx - 2 * m);
  if (!red.has_pole) {
    auto triv = artin_schreier_trivial(red.d);
    if (!triv) return out;
    if (*triv) {
      out.kind = BlockClass::Hyperbolic;
      return out;
    }
    // block = t^eps * [u, d/u] with u = x * t^(-2m), both entries units
    Elem e1 = mul(x, pow(t, -2 * m));
    Elem e2 = div(red.d, e1);
    if (eps == 0) {
      out.kind = BlockClass::Unit;
      out.ra = laurent_residue(e1);
      out.rb = laurent_residue(e2);
    } else {
      out.kind = BlockClass::TUnit;
      out.ra = laurent_residue(div(e1, t));
      out.rb = laurent_residue(mul(e2, t));
    }
    return out;
  }
  // ramified, pole depth 1: block = t^eps * [u, d/u]
  out.kind = BlockClass::Ram;
  out.eps = eps;
  Elem u = mul(x, pow(t, -vx));
  out.ubar = laurent_residue(u);
  Elem du = div(red.d, u);
  Elem lead = laurent_valuation(du).leading; // at t^-1
  out.ebar = lead;
  Elem d0 = sub(du, mul(embed(lead, K), pow(t, -1)));
  Elem d0bar = is_zero(d0) ? zero(K->base()) : laurent_residue(d0);
  if (!is_zero(d0bar)) {
    auto removable = artin_schreier_trivial(mul(out.ubar, d0bar));
    out.stuck = !(removable && *removable);
  }
  return out;
}

// ---------------------------------------------------------------------------
// quasilinear dependence with guard bookkeeping

// K^2-linear dependence among the entries, via square coordinates.  Returns:
//   0 = no dependence, 1 = some dependence avoiding all guarded entries,
//   2 = dependences exist but all touch a guarded entry.
int quasi_dependence(const Field* K, const std::vector<QuasiEntry>& entries) {
  std::size_t r = entries.size();
  if (r < 2) return 0;
  // collect coordinate masks
  std::vector<std::map<std::uint32_t, Elem>> coords(r);
  std::vector<std::uint32_t> masks;
  for (std::size_t i = 0; i < r; ++i) {
    coords[i] = square_coordinates(entries[i].c);
    for (auto& [m, c] : coords[i]) {
      (void)c;
      if (std::find(masks.begin(), masks.end(), m) == masks.end()) masks.push_back(m);
    }
  }
  Mat A(K, masks.size(), r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t mi = 0; mi < masks.size(); ++mi) {
      auto it = coords[i].find(masks[mi]);
      if (it != coords[i].end()) A.at(mi, i) = it->second;
    }
  auto ker = mat_kernel(A);
  if (ker.empty()) return 0;
  // augment with unit rows pinning guarded entries to zero
  std::size_t guards = 0;
  for (auto& e : entries)
    if (e.guarded) ++guards;
  if (guards == 0) return 1;
  Mat B(K, masks.size() + guards, r);
  for (std::size_t mi = 0; mi < masks.size(); ++mi)
    for (std::size_t i = 0; i < r; ++i) B.at(mi, i) = A.at(mi, i);
  std::size_t row = masks.size();
  for (std::size_t i = 0; i < r; ++i)
    if (entries[i].guarded) B.at(row++, i) = one(K);
  return mat_kernel(B).empty() ? 2 : 1;
}

} // namespace

// ---------------------------------------------------------------------------
// mixed-form isotropy

Channel mixed_isotropic(const MixedForm& m) {
  const Field* F = m.field;
  std::size_t ndim = m.nonsingular ? m.nonsingular->dim : 0;

  if (F->is_finite()) {
    if (ndim > 0 && witt_decompose(*m.nonsingular).witt_index > 0) return Channel::Nonsingular;
    if (ndim >= 2 && !m.quasi.empty()) return Channel::Mixed; // nonsingular binary forms are universal
    int dep = quasi_dependence(F, m.quasi);
    if (dep == 1) return Channel::Quasi;
    if (dep == 2)
      fail(Error::Code::Undecidable,
           "springer: quasilinear dependence blocked by a stuck ramified block");
    return Channel::None;
  }

  if (F->kind() == FieldKind::Rationals || F->kind() == FieldKind::LocalRationals) {
    if (!m.quasi.empty()) fail(Error::Code::Internal, "springer: quasi part in characteristic 0");
    if (ndim > 0 && witt_decompose(*m.nonsingular).witt_index > 0) return Channel::Nonsingular;
    return Channel::None;
  }

  if (F->kind() != FieldKind::Laurent)
    fail(Error::Code::Undecidable, "springer: unsupported coefficient field");

  const Field* k = F->base();
  Elem t = laurent_uniformizer(F);
  MixedForm m0{k, std::nullopt, {}};
  MixedForm m1{k, std::nullopt, {}};
  std::vector<std::pair<Elem, Elem>> blocks0, blocks1; // char-2 residue blocks
  std::vector<Elem> diag0, diag1;                      // char != 2 residue diagonals
  bool hyper = false;

  if (ndim > 0) {
    if (F->characteristic() == 2) {
      for (auto& [x, y] : binary_blocks(*m.nonsingular)) {
        BlockClass bc = classify_block(F, x, y);
        switch (bc.kind) {
          case BlockClass::Hyperbolic: hyper = true; break;
          case BlockClass::Unit: blocks0.push_back({bc.ra, bc.rb}); break;
          case BlockClass::TUnit: blocks1.push_back({bc.ra, bc.rb}); break;
          case BlockClass::Ram: {
            // u-side joins the block's own sector, e-side the other one
            QuasiEntry us{bc.ubar, false};
            QuasiEntry es{bc.ebar, bc.stuck};
            if (bc.eps == 0) {
              m0.quasi.push_back(us);
              m1.quasi.push_back(es);
            } else {
              m1.quasi.push_back(us);
              m0.quasi.push_back(es);
            }
            break;
          }
          case BlockClass::Outside:
            fail(Error::Code::Undecidable,
                 "springer: block outside the decidable fragment (deep or non-square pole)");
        }
      }
    } else {
      for (auto& a : diagonalize_form(*m.nonsingular)) {
        Valuation v = laurent_valuation(a);
        long mm = floor_div2(v.v);
        int eps = static_cast<int>(v.v - 2 * mm);
        Elem unit = mul(a, pow(t, -2 * mm));
        if (eps == 0)
          diag0.push_back(laurent_residue(unit));
        else
          diag1.push_back(laurent_residue(div(unit, t)));
      }
    }
  }
  if (hyper) return Channel::Nonsingular;

  for (auto& qe : m.quasi) {
    if (is_zero(qe.c)) fail(Error::Code::Internal, "springer: zero quasilinear entry");
    Valuation v = laurent_valuation(qe.c);
    long mm = floor_div2(v.v);
    int eps = static_cast<int>(v.v - 2 * mm);
    Elem unit = mul(qe.c, pow(t, -2 * mm));
    QuasiEntry down{laurent_residue(eps == 0 ? unit : div(unit, t)), qe.guarded};
    (eps == 0 ? m0.quasi : m1.quasi).push_back(down);
  }

  if (F->characteristic() == 2) {
    if (!blocks0.empty()) m0.nonsingular = block_form(k, blocks0);
    if (!blocks1.empty()) m1.nonsingular = block_form(k, blocks1);
  } else {
    if (!diag0.empty()) m0.nonsingular = diagonal_form(k, diag0);
    if (!diag1.empty()) m1.nonsingular = diagonal_form(k, diag1);
  }

  std::optional<Channel> c0, c1;
  std::exception_ptr undecided;
  try {
    c0 = mixed_isotropic(m0);
  } catch (const Error& e) {
    if (e.code != Error::Code::Undecidable) throw;
    undecided = std::current_exception();
  }
  try {
    c1 = mixed_isotropic(m1);
  } catch (const Error& e) {
    if (e.code != Error::Code::Undecidable) throw;
    undecided = std::current_exception();
  }
  if (c0 && *c0 != Channel::None) return *c0;
  if (c1 && *c1 != Channel::None) return *c1;
  if (undecided) std::rethrow_exception(undecided);
  return Channel::None;
}

bool isotropic_laurent(const QuadraticForm& q) {
  MixedForm m{q.field, q, {}};
  return mixed_isotropic(m) != Channel::None;
}

// ---------------------------------------------------------------------------
// full Witt decomposition on the unit fragment

WittDecomposition witt_laurent(const QuadraticForm& q) {
  const Field* F = q.field;
  const Field* k = F->base();
  Elem t = laurent_uniformizer(F);
  unsigned witt = 0;

  if (F->characteristic() == 2) {
    std::vector<std::pair<Elem, Elem>> blocks0, blocks1;
    for (auto& [x, y] : binary_blocks(q)) {
      BlockClass bc = classify_block(F, x, y);
      switch (bc.kind) {
        case BlockClass::Hyperbolic: ++witt; break;
        case BlockClass::Unit: blocks0.push_back({bc.ra, bc.rb}); break;
        case BlockClass::TUnit: blocks1.push_back({bc.ra, bc.rb}); break;
        default:
          fail(Error::Code::Undecidable,
               "witt_decompose: ramified block outside the Witt fragment over this Laurent field");
      }
    }
    std::vector<QuadraticForm> kernel_parts;
    for (int side = 0; side < 2; ++side) {
      auto& blocks = side == 0 ? blocks0 : blocks1;
      if (blocks.empty()) continue;
      WittDecomposition wd = witt_decompose(block_form(k, blocks));
      witt += wd.witt_index;
      if (wd.kernel.dim > 0) {
        // lift the residue kernel blockwise and rescale the t-side
        std::vector<std::pair<Elem, Elem>> lifted;
        for (auto& [a, b] : binary_blocks(wd.kernel)) lifted.push_back({embed(a, F), embed(b, F)});
        QuadraticForm kf = block_form(F, lifted);
        if (side == 1) kf = twist(kf, t);
        kernel_parts.push_back(kf);
      }
    }
    QuadraticForm kernel{F, 0, Mat(F, 0, 0)};
    for (auto& part : kernel_parts) kernel = kernel.dim == 0 ? part : direct_sum(kernel, part);
    return {witt, kernel};
  }

  // characteristic != 2
  std::vector<Elem> diag0, diag1;
  for (auto& a : diagonalize_form(q)) {
    Valuation v = laurent_valuation(a);
    long mm = floor_div2(v.v);
    int eps = static_cast<int>(v.v - 2 * mm);
    Elem unit = mul(a, pow(t, -2 * mm));
    if (eps == 0)
      diag0.push_back(laurent_residue(unit));
    else
      diag1.push_back(laurent_residue(div(unit, t)));
  }
  std::vector<QuadraticForm> kernel_parts;
  for (int side = 0; side < 2; ++side) {
    auto& diag = side == 0 ? diag0 : diag1;
    if (diag.empty()) continue;
    WittDecomposition wd = witt_decompose(diagonal_form(k, diag));
    witt += wd.witt_index;
    if (wd.kernel.dim > 0) {
      std::vector<Elem> lifted;
      for (auto& a : diagonalize_form(wd.kernel)) lifted.push_back(embed(a, F));
      QuadraticForm kf = diagonal_form(F, lifted);
      if (side == 1) kf = twist(kf, t);
      kernel_parts.push_back(kf);
    }
  }
  QuadraticForm kernel{F, 0, Mat(F, 0, 0)};
  for (auto& part : kernel_parts) kernel = kernel.dim == 0 ? part : direct_sum(kernel, part);
  return {witt, kernel};
}

} // namespace qp::springer
