#pragma once
// Springer-type residue recursion over Laurent fields, in both residue
// characteristics.  Internal to the library.
//
// Characteristic != 2: classic.  After square rescaling every diagonal
// entry is a unit or uniformizer * unit, q = q0 | t*q1, and Witt data is
// the lift of the residue forms' Witt data.
//
// Characteristic 2: binary blocks [x,y] normalize, by exact isometries
// (pairing rescaling, Artin-Schreier shifts on the block parameters,
// square rescalings), into
//   - hyperbolic blocks,
//   - U: unit blocks (both entries units),
//   - T: uniformizer-scaled unit blocks,
//   - R: ramified blocks u p^2 + pq + (e/t + d0) q^2 with u, e units
//        (pole depth exactly 1), possibly uniformizer-scaled.
// U/T blocks recurse through their residue forms.  R blocks contribute
// totally singular ("quasilinear") residue entries: u-side to the sector
// of the block's parity, e-side to the other sector.  A quasilinear
// dependence (a k^2-linear relation among entries) witnesses isotropy by a
// Hensel lift along the polar direction of the participating block, except
// when every dependence involves the e-side of a block whose d0 part has
// nontrivial residue class (a "stuck" block); those cases fall outside the
// decidable fragment and raise Undecidable rather than guess.
//
// Full Witt decomposition is provided for forms whose blocks are all
// hyperbolic/U/T; the extended isotropy decision also accepts R blocks.

#include <qp/quadform.hpp>

namespace qp::springer {

// Complete Witt decomposition over a Laurent field (U/T fragment; errors
// with Undecidable when a ramified block appears).
WittDecomposition witt_laurent(const QuadraticForm& q);

// Isotropy decision over a Laurent field, extended fragment.
bool isotropic_laurent(const QuadraticForm& q);

// A nonsingular form plus a totally singular diagonal part, and per-entry
// guard flags used by the stuck-d0 rule.
struct QuasiEntry {
  Elem c;
  bool guarded = false;
};

enum class Channel { None, Nonsingular, Mixed, Quasi };

struct MixedForm {
  const Field* field = nullptr;
  std::optional<QuadraticForm> nonsingular;
  std::vector<QuasiEntry> quasi;
};

// Isotropy of a mixed form over finite fields, Q/Qp (no quasi part in
// characteristic != 2) or Laurent towers; reports the witnessing channel.
Channel mixed_isotropic(const MixedForm& m);

} // namespace qp::springer
