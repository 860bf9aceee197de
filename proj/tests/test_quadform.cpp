#include <doctest.h>

#include <qp/quadform.hpp>

using namespace qp;

static const Field* F2 = Field::make("GF(2)");
static const Field* F3 = Field::make("GF(3)");

TEST_CASE("make_form normalization and rejection") {
  // q(x,y) = xy over GF(2): the hyperbolic plane
  QuadraticForm h = parse_form(F2, "[[0,1],[0,0]]");
  CHECK(h.dim == 2);
  CHECK(is_hyperbolic(h));
  // the norm form of GF(4): valid, anisotropic
  QuadraticForm n4 = parse_form(F2, "[[1,1],[0,1]]");
  CHECK_FALSE(is_isotropic(n4));
  // alternating-polar degeneracy
  CHECK_THROWS_AS((void)parse_form(F2, "[[1,0],[0,1]]"), Error);
  // odd dimension in characteristic 2
  CHECK_THROWS_AS((void)parse_form(F2, "[[1]]"), Error);
  // lower-triangular data folds into the upper triangle
  QuadraticForm a = parse_form(F3, "[[1,1],[0,2]]");
  QuadraticForm b = parse_form(F3, "[[1,0],[1,2]]");
  CHECK(forms_equal(a, b));
}

TEST_CASE("form values and polar") {
  QuadraticForm n4 = parse_form(F2, "[[1,1],[0,1]]");
  // q(x,y) = x^2 + xy + y^2 has no nonzero root over GF(2)
  for (auto vx : {0, 1})
    for (auto vy : {0, 1}) {
      std::vector<Elem> v{from_int(F2, vx), from_int(F2, vy)};
      if (vx || vy) CHECK_FALSE(is_zero(form_value(n4, v)));
    }
  CHECK_FALSE(isotropic_vector_exhaustive(n4).has_value());
}

TEST_CASE("direct sums and arf additivity") {
  QuadraticForm h = hyperbolic_form(F2, 1);
  QuadraticForm hh = direct_sum(h, h);
  CHECK(hh.dim == 4);
  CHECK(witt_decompose(hh).witt_index == 2);

  // <1> + <-1> over GF(3) is isotropic
  QuadraticForm pm = diagonal_form(F3, {one(F3), neg(one(F3))});
  CHECK(is_isotropic(pm));
  CHECK(isotropic_vector_exhaustive(pm).has_value());

  // [1,1] + [1,1] over GF(2): Arf 1+1 = 0, so hyperbolic; cross-check by count
  QuadraticForm n4 = block_form(F2, {{one(F2), one(F2)}, {one(F2), one(F2)}});
  DiscClass arf = arf_discriminant(n4);
  CHECK(*arf.trivial);
  CHECK(witt_exhaustive(n4).witt_index == 2);
  CHECK(witt_decompose(n4).witt_index == 2);
}

TEST_CASE("twist preserves witt index") {
  std::mt19937_64 rng(31);
  for (const Field* F : {F2, F3, Field::make("GF(4)"), Field::make("GF(5)")}) {
    for (int trial = 0; trial < 12; ++trial) {
      std::size_t n = 2 + 2 * (rng() % 2);
      Mat M(F, n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) M.at(i, j) = random_elem(F, rng);
      QuadraticForm q;
      try {
        q = make_form(F, M);
      } catch (const Error&) {
        continue;
      }
      Elem c = random_elem(F, rng);
      if (is_zero(c)) continue;
      CHECK(witt_decompose(q).witt_index == witt_decompose(twist(q, c)).witt_index);
    }
  }
  // twist([1,1], t) over GF(2)((t)) stays anisotropic
  const Field* lt = Field::make("Laurent(GF(2),t)");
  QuadraticForm n4 = block_form(lt, {{one(lt), one(lt)}});
  QuadraticForm tw = twist(n4, laurent_uniformizer(lt));
  CHECK(witt_decompose(tw).witt_index == 0);
}

TEST_CASE("tensor with bilinear forms") {
  // <1> x q = q
  QuadraticForm n4 = parse_form(F2, "[[1,1],[0,1]]");
  BilinearForm one1 = diagonal_bilinear(F2, {one(F2)});
  CHECK(forms_equal(tensor_bilinear(one1, n4), n4));
  // <1,1> x hyperbolic = 4-dim hyperbolic
  BilinearForm two = diagonal_bilinear(F2, {one(F2), one(F2)});
  QuadraticForm th = tensor_bilinear(two, hyperbolic_form(F2, 1));
  CHECK(th.dim == 4);
  CHECK(is_hyperbolic(th));
  // <1,1,1> x [1,1] over GF(2): 6-dim, isotropic (exhaustive)
  BilinearForm three = diagonal_bilinear(F2, {one(F2), one(F2), one(F2)});
  QuadraticForm t6 = tensor_bilinear(three, n4);
  CHECK(t6.dim == 6);
  CHECK(isotropic_vector_exhaustive(t6).has_value());
  CHECK(is_isotropic(t6));
}

TEST_CASE("arf and discriminant examples") {
  CHECK(*arf_discriminant(hyperbolic_form(F2, 1)).trivial);
  DiscClass a = arf_discriminant(parse_form(F2, "[[1,1],[0,1]]"));
  CHECK_FALSE(*a.trivial);
  CHECK(is_one(a.rep));
  // <1,1,1,1> over GF(3): det 1, sign (+), trivial
  DiscClass d = arf_discriminant(diagonal_form(F3, {one(F3), one(F3), one(F3), one(F3)}));
  CHECK(*d.trivial);
}

TEST_CASE("witt decomposition over finite fields matches the exhaustive oracle") {
  std::mt19937_64 rng(37);
  for (const Field* F : {F2, F3, Field::make("GF(4)"), Field::make("GF(5)")}) {
    int done = 0;
    while (done < 25) {
      std::size_t n = 2 + rng() % 5;
      if (F->characteristic() == 2 && n % 2) n += 1;
      if (n > 6) n = 6;
      double points = 1;
      for (std::size_t i = 0; i < n; ++i) points *= static_cast<double>(*F->cardinality());
      if (points > 7000) continue;
      Mat M(F, n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) M.at(i, j) = random_elem(F, rng);
      QuadraticForm q;
      try {
        q = make_form(F, M);
      } catch (const Error&) {
        continue;
      }
      ++done;
      WittDecomposition cls = witt_decompose(q);
      WittDecomposition exh = witt_exhaustive(q);
      CHECK(cls.witt_index == exh.witt_index);
      CHECK(cls.kernel.dim == exh.kernel.dim);
      if (exh.kernel.dim > 0) {
        CHECK_FALSE(isotropic_vector_exhaustive(exh.kernel).has_value());
        CHECK(disc_equal(arf_discriminant(cls.kernel), arf_discriminant(exh.kernel)));
      }
    }
  }
}

TEST_CASE("isometry invariance under change of basis") {
  std::mt19937_64 rng(41);
  QuadraticForm q = block_form(F2, {{one(F2), one(F2)}, {zero(F2), zero(F2)}});
  for (int trial = 0; trial < 10; ++trial) {
    Mat P(F2, 4, 4);
    do {
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) P.at(i, j) = random_elem(F2, rng);
    } while (is_zero(mat_det(P)));
    QuadraticForm q2 = transform(q, P);
    CHECK(witt_decompose(q2).witt_index == witt_decompose(q).witt_index);
    CHECK(disc_equal(arf_discriminant(q2), arf_discriminant(q)));
  }
}

TEST_CASE("norm forms of etale quadratic algebras") {
  EtaleQuadratic split(F2, zero(F2));
  CHECK(is_hyperbolic(norm_form_etale(split)));
  EtaleQuadratic f4(F2, one(F2));
  QuadraticForm nf = norm_form_etale(f4);
  CHECK_FALSE(isotropic_vector_exhaustive(nf).has_value());
  CHECK_FALSE(is_isotropic(nf));
  EtaleQuadratic f9(F3, one(F3));
  QuadraticForm nf9 = norm_form_etale(f9);
  CHECK_FALSE(isotropic_vector_exhaustive(nf9).has_value());
  CHECK_FALSE(is_isotropic(nf9));
  // norm values agree with the form
  std::mt19937_64 rng(43);
  for (int i = 0; i < 20; ++i) {
    EtaleQuadratic::El x{random_elem(F3, rng), random_elem(F3, rng)};
    CHECK(f9.norm(x) == form_value(nf9, {x.first, x.second}));
  }
}

TEST_CASE("witt decomposition over the rationals") {
  const Field* Q = Field::make("Q");
  auto e = [&](long long v) { return from_int(Q, v); };
  CHECK(witt_decompose(diagonal_form(Q, {e(1), e(-1)})).witt_index == 1);
  CHECK(witt_decompose(diagonal_form(Q, {e(1), e(1), e(1), e(1)})).witt_index == 0);
  // 7 is not a sum of three rational squares (7 = 7 mod 8)
  CHECK(witt_decompose(diagonal_form(Q, {e(1), e(1), e(1), e(-7)})).witt_index == 0);
  // but every positive rational is a sum of four squares
  CHECK(witt_decompose(diagonal_form(Q, {e(1), e(1), e(1), e(1), e(-7)})).witt_index == 1);
  // <1,1,-3,-3>: anisotropic at 3
  CHECK(witt_decompose(diagonal_form(Q, {e(1), e(1), e(-3), e(-3)})).witt_index == 0);
  // <1,-2,-3,6> is the scaled 2-fold Pfister <<2,3>>: 2 is not a norm from
  // Q(sqrt(3)) (no solution mod 3), so anisotropic
  CHECK(witt_decompose(diagonal_form(Q, {e(1), e(-2), e(-3), e(6)})).witt_index == 0);
  CHECK(witt_decompose(diagonal_form(Q, {e(1), e(-2), e(-3), e(7)})).witt_index >= 1);
}

TEST_CASE("witt decomposition over Q2") {
  const Field* Q2 = Field::make("Qp(2)");
  auto e = [&](long long v) { return from_int(Q2, v); };
  // <1,1,1,1> over Q2 is anisotropic (the quaternion norm form)
  CHECK(witt_decompose(diagonal_form(Q2, {e(1), e(1), e(1), e(1)})).witt_index == 0);
  // dim >= 5 over Q2 is always isotropic
  CHECK(witt_decompose(diagonal_form(Q2, {e(1), e(1), e(1), e(1), e(1)})).witt_index == 1);
  // 3-fold Pfister <<-3,-5,-7>> diag: hyperbolic over Q2
  std::vector<Elem> pf;
  for (long long v : {1, 3, 5, 15, 7, 21, 35, 105}) pf.push_back(e(v));
  WittDecomposition wd = witt_decompose(diagonal_form(Q2, pf));
  CHECK(wd.witt_index == 4);
  CHECK(wd.kernel.dim == 0);
  // over Q the same form is positive definite, hence anisotropic
  const Field* Q = Field::make("Q");
  std::vector<Elem> pfq;
  for (long long v : {1, 3, 5, 15, 7, 21, 35, 105}) pfq.push_back(from_int(Q, v));
  CHECK(witt_decompose(diagonal_form(Q, pfq)).witt_index == 0);
}

TEST_CASE("rational witt data is internally consistent") {
  const Field* Q = Field::make("Q");
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Elem> diag;
    std::size_t n = 2 + rng() % 3;
    for (std::size_t i = 0; i < n; ++i) {
      long long v = static_cast<long long>(rng() % 20) - 10;
      if (v == 0) v = 1;
      diag.push_back(from_int(Q, v));
    }
    QuadraticForm q = diagonal_form(Q, diag);
    WittDecomposition wd = witt_decompose(q);
    CHECK(wd.witt_index * 2 + wd.kernel.dim == q.dim);
    if (wd.kernel.dim > 0) CHECK(witt_decompose(wd.kernel).witt_index == 0);
  }
}

TEST_CASE("springer recursion over laurent series, characteristic 3") {
  const Field* lt = Field::make("Laurent(GF(3),t)");
  Elem t = laurent_uniformizer(lt);
  QuadraticForm q = direct_sum(diagonal_form(lt, {one(lt), one(lt)}),
                               diagonal_form(lt, {t, t}));
  WittDecomposition wd = witt_decompose(q);
  CHECK(wd.witt_index == 0);
  CHECK(wd.kernel.dim == 4);
  QuadraticForm q2 = direct_sum(diagonal_form(lt, {one(lt), neg(one(lt))}),
                                diagonal_form(lt, {t, t}));
  CHECK(witt_decompose(q2).witt_index == 1);
}

TEST_CASE("springer recursion over laurent series, characteristic 2") {
  const Field* lt = Field::make("Laurent(GF(2),t)");
  Elem t = laurent_uniformizer(lt);
  Elem o = one(lt);
  // [1,1] + t[1,1]: the norm form of the quaternion [1,t): anisotropic
  QuadraticForm nq = direct_sum(block_form(lt, {{o, o}}), twist(block_form(lt, {{o, o}}), t));
  CHECK(witt_decompose(nq).witt_index == 0);
  CHECK_FALSE(is_isotropic(nq));
  // [1,t] is hyperbolic: x^2+x = t has a Hensel root
  CHECK(witt_decompose(block_form(lt, {{o, t}})).witt_index == 1);
  // [1, 1/t] is anisotropic (odd pole)
  CHECK_FALSE(is_isotropic(block_form(lt, {{o, div(o, t)}})));
  // [1,1] + [1,1] is hyperbolic over the tower too (Arf cancels)
  QuadraticForm s4 = direct_sum(block_form(lt, {{o, o}}), block_form(lt, {{o, o}}));
  CHECK(witt_decompose(s4).witt_index == 2);
}

TEST_CASE("springer two-level tower certificates") {
  const Field* k2 = Field::make("Laurent(Laurent(GF(2),s),t)");
  Elem t = laurent_uniformizer(k2);
  Elem s = parse_elem(k2, "s");
  Elem o = one(k2);
  QuadraticForm n1 = direct_sum(block_form(k2, {{o, o}}), twist(block_form(k2, {{o, o}}), t));
  CHECK(witt_decompose(n1).witt_index == 0);
  // norm form of [1/s, t): ramified blocks at the s-level, extended fragment
  Elem sinv = div(o, s);
  QuadraticForm n2 = direct_sum(block_form(k2, {{o, sinv}}), twist(block_form(k2, {{o, sinv}}), t));
  CHECK_FALSE(is_isotropic(n2));
  // the full Witt backend rejects ramified blocks honestly
  CHECK_THROWS_AS((void)witt_decompose(n2), Error);
  // [1, 1/s] + [1, 1/s + 1]: e-sides dependent, both pure: isotropic
  QuadraticForm dep = direct_sum(block_form(k2, {{o, sinv}}),
                                 block_form(k2, {{o, add(sinv, o)}}));
  CHECK(is_isotropic(dep));
}

TEST_CASE("springer brute-force consistency on randomized unit/t forms") {
  // One-sided check: if a truncated search finds a zero, the backend must
  // not report anisotropic.
  std::mt19937_64 rng(53);
  const Field* lt = Field::make("Laurent(GF(2),t)");
  const Field* l3 = Field::make("Laurent(GF(3),t)");
  int checked = 0;
  for (int trial = 0; trial < 400 && checked < 120; ++trial) {
    const Field* F = trial % 2 ? lt : l3;
    Elem t = laurent_uniformizer(F);
    QuadraticForm q;
    try {
      if (F->characteristic() == 2) {
        std::vector<std::pair<Elem, Elem>> blocks;
        unsigned nb = 1 + rng() % 2;
        for (unsigned b = 0; b < nb; ++b) {
          Elem a = embed(random_elem(F->base(), rng), F);
          Elem bb = embed(random_elem(F->base(), rng), F);
          if (rng() % 2) a = mul(a, t);
          if (rng() % 2) bb = mul(bb, t);
          blocks.push_back({a, bb});
        }
        q = block_form(F, blocks);
      } else {
        std::vector<Elem> diag;
        unsigned n = 2 + rng() % 3;
        for (unsigned i = 0; i < n; ++i) {
          Elem a = embed(random_elem(F->base(), rng), F);
          if (is_zero(a)) a = one(F);
          if (rng() % 2) a = mul(a, t);
          diag.push_back(a);
        }
        q = diagonal_form(F, diag);
      }
    } catch (const Error&) {
      continue;
    }
    // truncated brute search: vectors with polynomial entries of degree <= 1
    auto base_elems = all_elements(F->base());
    std::size_t n = q.dim;
    double total = 1;
    for (std::size_t i = 0; i < 2 * n; ++i) total *= static_cast<double>(base_elems.size());
    if (total > 300000) continue;
    ++checked;
    bool brute_zero = false;
    std::vector<std::size_t> idx(2 * n, 0);
    for (;;) {
      std::vector<Elem> v;
      bool nonzero = false;
      for (std::size_t i = 0; i < n; ++i) {
        Elem c0 = base_elems[idx[2 * i]];
        Elem c1 = base_elems[idx[2 * i + 1]];
        Elem c = add(embed(c0, F), mul(embed(c1, F), t));
        if (!is_zero(c)) nonzero = true;
        v.push_back(c);
      }
      if (nonzero && is_zero(form_value(q, v))) {
        brute_zero = true;
        break;
      }
      std::size_t i = 0;
      while (i < 2 * n) {
        if (++idx[i] < base_elems.size()) break;
        idx[i] = 0;
        ++i;
      }
      if (i == 2 * n) break;
    }
    bool backend_isotropic = is_isotropic(q);
    if (brute_zero) CHECK(backend_isotropic);
    CHECK((witt_decompose(q).witt_index > 0) == backend_isotropic);
  }
  CHECK(checked >= 100);
}
