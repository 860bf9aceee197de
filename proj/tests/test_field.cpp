#include <doctest.h>

#include <qp/field.hpp>
#include <qp/linalg.hpp>
#include <qp/poly.hpp>

using namespace qp;

TEST_CASE("field descriptors") {
  CHECK(Field::make("GF(2)")->characteristic() == 2);
  CHECK(*Field::make("GF(2)")->cardinality() == 2);
  CHECK(Field::make("GF(9)")->characteristic() == 3);
  CHECK(*Field::make("GF(9)")->cardinality() == 9);
  CHECK(Field::make("Q")->characteristic() == 0);
  CHECK(Field::make("Qp(2)")->local_prime() == 2);
  const Field* t2 = Field::make("Laurent(Laurent(GF(2),s),t)");
  CHECK(t2->characteristic() == 2);
  CHECK(t2->laurent_depth() == 2);
  CHECK_THROWS_AS((void)Field::make("GF(6)"), Error);
  CHECK_THROWS_AS((void)Field::make("GF(1)"), Error);
  CHECK_THROWS_AS(
      (void)Field::make("Laurent(Laurent(Laurent(Laurent(Laurent(GF(2),a),b),c),d),e)"), Error);
  // interning: same descriptor, same pointer
  CHECK(Field::make("GF(4)") == Field::make("GF(4)"));
}

static void check_axioms(const Field* f, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int i = 0; i < 40; ++i) {
    Elem a = random_elem(f, rng), b = random_elem(f, rng), c = random_elem(f, rng);
    CHECK(add(a, b) == add(b, a));
    CHECK(mul(a, b) == mul(b, a));
    CHECK(add(add(a, b), c) == add(a, add(b, c)));
    CHECK(mul(mul(a, b), c) == mul(a, mul(b, c)));
    CHECK(mul(a, add(b, c)) == add(mul(a, b), mul(a, c)));
    CHECK(add(a, neg(a)) == zero(f));
    CHECK(sub(a, a) == zero(f));
    if (!is_zero(a)) {
      CHECK(mul(a, inv(a)) == one(f));
      CHECK(div(b, a) * a == b);
    }
  }
  CHECK_THROWS_AS((void)inv(zero(f)), Error);
}

TEST_CASE("field axioms on randomized elements") {
  check_axioms(Field::make("GF(2)"), 1);
  check_axioms(Field::make("GF(9)"), 2);
  check_axioms(Field::make("GF(8)"), 3);
  check_axioms(Field::make("Q"), 4);
  check_axioms(Field::make("Qp(2)"), 5);
  check_axioms(Field::make("Laurent(GF(3),t)"), 6);
  check_axioms(Field::make("Laurent(Laurent(GF(2),s),t)"), 7);
  check_axioms(Field::make("RatFun(GF(2),[X1,Y1])"), 8);
}

TEST_CASE("frobenius is the identity on GF(q), q <= 81") {
  for (const char* d : {"GF(2)", "GF(4)", "GF(8)", "GF(16)", "GF(3)", "GF(9)", "GF(27)", "GF(81)",
                        "GF(5)", "GF(25)", "GF(7)", "GF(49)"}) {
    const Field* f = Field::make(d);
    std::uint64_t q = *f->cardinality();
    for (auto& x : all_elements(f)) CHECK(pow(x, static_cast<long long>(q)) == x);
  }
}

TEST_CASE("element parsing") {
  const Field* f4 = Field::make("GF(4)");
  Elem g = parse_elem(f4, "g");
  CHECK(mul(g, g) == parse_elem(f4, "g^2"));
  CHECK(parse_elem(f4, "g + g") == zero(f4));
  const Field* lt = Field::make("Laurent(GF(2),t)");
  Elem x = parse_elem(lt, "(1+t)/t");
  auto v = laurent_valuation(x);
  CHECK(v.v == -1);
  CHECK(is_one(v.leading));
  const Field* q = Field::make("Q");
  CHECK(parse_elem(q, "3/4 + 1/4") == one(q));
  CHECK_THROWS_AS((void)parse_elem(q, "nope"), Error);
  const Field* rf = Field::make("RatFun(GF(2),[X1,Y1])");
  Elem e = parse_elem(rf, "X1*Y1 + X1");
  CHECK(e == parse_elem(rf, "X1*(Y1+1)"));
}

TEST_CASE("laurent valuation and residue") {
  const Field* f = Field::make("Laurent(GF(3),t)");
  Elem x = parse_elem(f, "t^2 + t^3");
  auto v = laurent_valuation(x);
  CHECK(v.v == 2);
  CHECK(v.leading == one(Field::make("GF(3)")));
  auto vi = laurent_valuation(parse_elem(f, "t^-1"));
  CHECK(vi.v == -1);
  CHECK(is_one(vi.leading));
  CHECK_THROWS_AS((void)laurent_valuation(zero(f)), Error);

  // multiplicativity on randomized elements
  std::mt19937_64 rng(42);
  for (int i = 0; i < 50; ++i) {
    Elem a = random_elem(f, rng), b = random_elem(f, rng);
    if (is_zero(a) || is_zero(b)) continue;
    auto va = laurent_valuation(a), vb = laurent_valuation(b), vab = laurent_valuation(mul(a, b));
    CHECK(vab.v == va.v + vb.v);
    CHECK(vab.leading == mul(va.leading, vb.leading));
  }
}

TEST_CASE("etale quadratic algebras") {
  const Field* f2 = Field::make("GF(2)");
  EtaleQuadratic k4(f2, one(f2)); // u^2+u+1 irreducible
  CHECK(k4.splitness() == EtaleQuadratic::Splitness::NonSplit);
  EtaleQuadratic split(f2, zero(f2));
  CHECK(split.splitness() == EtaleQuadratic::Splitness::Split);

  const Field* f5 = Field::make("GF(5)");
  CHECK_THROWS_AS(EtaleQuadratic(f5, one(f5)), Error); // 1+4a = 5 = 0

  // norm multiplicativity, trace/conj compatibility
  const Field* f3 = Field::make("GF(3)");
  EtaleQuadratic k9(f3, one(f3)); // disc 1+4 = 5 = 2, nonsquare mod 3
  CHECK(k9.splitness() == EtaleQuadratic::Splitness::NonSplit);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 40; ++i) {
    EtaleQuadratic::El x{random_elem(f3, rng), random_elem(f3, rng)};
    EtaleQuadratic::El y{random_elem(f3, rng), random_elem(f3, rng)};
    CHECK(k9.norm(k9.mul(x, y)) == mul(k9.norm(x), k9.norm(y)));
    CHECK(k9.trace(k9.conj(x)) == k9.trace(x));
    auto uu = k9.mul(k9.gen(), k9.gen()); // u^2 = u + a
    CHECK(uu.second == one(f3));
    CHECK(uu.first == k9.param());
  }
}

TEST_CASE("squares") {
  const Field* f3 = Field::make("GF(3)");
  CHECK(*is_square(one(f3)));
  CHECK_FALSE(*is_square(from_int(f3, 2)));
  const Field* q = Field::make("Q");
  CHECK(*is_square(parse_elem(q, "9/4")));
  CHECK_FALSE(*is_square(parse_elem(q, "2")));
  CHECK_FALSE(*is_square(parse_elem(q, "-1")));
  CHECK(*sqrt_exact(parse_elem(q, "9/4")) == parse_elem(q, "3/2"));
  const Field* q2 = Field::make("Qp(2)");
  CHECK(*is_square(parse_elem(q2, "17"))); // 17 = 1 mod 8
  CHECK_FALSE(*is_square(parse_elem(q2, "2")));
  CHECK_FALSE(*is_square(parse_elem(q2, "3")));
  CHECK(*is_square(parse_elem(q2, "4")));
  const Field* q3 = Field::make("Qp(3)");
  CHECK(*is_square(parse_elem(q3, "7"))); // 7 = 1 mod 3
  CHECK_FALSE(*is_square(parse_elem(q3, "3")));

  const Field* lt = Field::make("Laurent(GF(2),t)");
  CHECK(*is_square(parse_elem(lt, "t^2")));
  CHECK_FALSE(*is_square(parse_elem(lt, "t")));
  CHECK_FALSE(*is_square(parse_elem(lt, "1+t")));
  CHECK(*is_square(parse_elem(lt, "1+t^2")));
  std::mt19937_64 rng(11);
  for (int i = 0; i < 30; ++i) {
    Elem a = random_elem(lt, rng);
    if (is_zero(a)) continue;
    Elem sq = mul(a, a);
    CHECK(*is_square(sq));
    CHECK(*sqrt_exact(sq) == a);
  }
}

TEST_CASE("artin-schreier classes over finite fields") {
  const Field* f2 = Field::make("GF(2)");
  CHECK(*artin_schreier_trivial(zero(f2)));
  CHECK_FALSE(*artin_schreier_trivial(one(f2)));
  const Field* f4 = Field::make("GF(4)");
  // Tr: F4 -> F2 kills exactly half the elements
  int trivial = 0;
  for (auto& x : all_elements(f4)) {
    if (*artin_schreier_trivial(x)) {
      ++trivial;
      auto r = artin_schreier_root(x);
      REQUIRE(r.has_value());
      CHECK(add(mul(*r, *r), *r) == x);
    } else {
      CHECK_FALSE(artin_schreier_root(x).has_value());
    }
  }
  CHECK(trivial == 2);
}

TEST_CASE("artin-schreier classes over laurent towers") {
  const Field* lt = Field::make("Laurent(GF(2),t)");
  CHECK(*artin_schreier_trivial(parse_elem(lt, "t")));        // Hensel
  CHECK(*artin_schreier_trivial(parse_elem(lt, "t + t^3")));
  CHECK_FALSE(*artin_schreier_trivial(parse_elem(lt, "1")));  // residue class of 1
  CHECK_FALSE(*artin_schreier_trivial(parse_elem(lt, "1/t"))); // odd pole
  CHECK(*artin_schreier_trivial(parse_elem(lt, "1/t^2 + 1/t"))); // = p(1/t)
  CHECK_FALSE(*artin_schreier_trivial(parse_elem(lt, "1/t^2"))); // kills to 1/t
  // p(x) invariance on randomized elements
  std::mt19937_64 rng(13);
  for (int i = 0; i < 30; ++i) {
    Elem a = random_elem(lt, rng);
    Elem x = random_elem(lt, rng);
    Elem shifted = add(a, add(mul(x, x), x));
    auto t1 = artin_schreier_trivial(a);
    auto t2 = artin_schreier_trivial(shifted);
    CHECK(*t1 == *t2);
  }

  const Field* k2 = Field::make("Laurent(Laurent(GF(2),s),t)");
  // even pole with non-square leading residue stays nontrivial
  CHECK_FALSE(*artin_schreier_trivial(parse_elem(k2, "s/t^2")));
  CHECK(*artin_schreier_trivial(parse_elem(k2, "s^2/t^2 + s/t")));
  CHECK_FALSE(*artin_schreier_trivial(parse_elem(k2, "1/s"))); // class from the residue field
}

TEST_CASE("square coordinates reconstruct the element") {
  const Field* k2 = Field::make("Laurent(Laurent(GF(2),s),t)");
  std::mt19937_64 rng(17);
  auto mono = [&](std::uint32_t mask) {
    Elem m = one(k2);
    if (mask & 1u) m = mul(m, embed(laurent_uniformizer(Field::make("Laurent(GF(2),s)")), k2));
    if (mask & 2u) m = mul(m, laurent_uniformizer(k2));
    return m;
  };
  for (int i = 0; i < 25; ++i) {
    Elem x = random_elem(k2, rng);
    auto coords = square_coordinates(x);
    Elem rec = zero(k2);
    for (auto& [mask, c] : coords) {
      CHECK(mask < 4);
      rec = add(rec, mul(mono(mask), mul(c, c)));
    }
    CHECK(rec == x);
  }
}

TEST_CASE("substitution of rational-function symbols") {
  const Field* rf = Field::make("RatFun(GF(2),[X1,Y1])");
  const Field* k2 = Field::make("Laurent(Laurent(GF(2),s),t)");
  Elem e = parse_elem(rf, "X1*Y1 + Y1");
  Elem s = embed(laurent_uniformizer(Field::make("Laurent(GF(2),s)")), k2);
  Elem t = laurent_uniformizer(k2);
  Elem img = substitute(e, {s, t});
  CHECK(img == add(mul(s, t), t));
  Elem bad = parse_elem(rf, "1/(X1+Y1)");
  CHECK_THROWS_AS((void)substitute(bad, {s, s}), Error);
}

TEST_CASE("polynomial factorization over finite fields") {
  const Field* f2 = Field::make("GF(2)");
  // x^2 + x + 1 irreducible
  Poly p = poly_make(f2, {one(f2), one(f2), one(f2)});
  CHECK(poly_irreducible(p));
  // x^2 + 1 = (x+1)^2 over GF(2)
  Poly sq = poly_make(f2, {one(f2), zero(f2), one(f2)});
  auto fac = poly_factor(sq, 0);
  REQUIRE(fac.size() == 1);
  CHECK(fac[0].second == 2);
  CHECK(fac[0].first.degree() == 1);

  const Field* f5 = Field::make("GF(5)");
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Elem> cs;
    for (int i = 0; i < 6; ++i) cs.push_back(random_elem(f5, rng));
    cs.push_back(one(f5));
    Poly f = poly_make(f5, cs);
    auto factors = poly_factor(f, trial);
    Poly prod = poly_const(f.leading());
    for (auto& [g, m] : factors)
      for (unsigned i = 0; i < m; ++i) prod = poly_mul(prod, g);
    CHECK(poly_equal(prod, f));
    for (auto& [g, m] : factors) {
      (void)m;
      CHECK(poly_irreducible(g));
    }
  }
}

TEST_CASE("poly nth root") {
  const Field* f2 = Field::make("GF(2)");
  Poly p = poly_make(f2, {one(f2), one(f2), zero(f2), one(f2)}); // 1 + x + x^3
  Poly p8 = poly_const(one(f2));
  for (int i = 0; i < 8; ++i) p8 = poly_mul(p8, p);
  CHECK(poly_equal(poly_nth_root(p8, 8), p));

  const Field* f3 = Field::make("GF(3)");
  Poly q = poly_make(f3, {from_int(f3, 2), one(f3), one(f3)});
  Poly q4 = poly_const(one(f3));
  for (int i = 0; i < 4; ++i) q4 = poly_mul(q4, q);
  CHECK(poly_equal(poly_nth_root(q4, 4), q));
  CHECK_THROWS_AS((void)poly_nth_root(poly_mul(q, q4), 4), Error);
}

TEST_CASE("linear algebra basics") {
  const Field* f5 = Field::make("GF(5)");
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 10; ++trial) {
    Mat m(f5, 4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) m.at(i, j) = random_elem(f5, rng);
    Elem d = mat_det(m);
    auto inv_m = mat_inverse(m);
    if (is_zero(d)) {
      CHECK_FALSE(inv_m.has_value());
      CHECK(mat_rank(m) < 4);
    } else {
      REQUIRE(inv_m.has_value());
      CHECK(mat_mul(m, *inv_m) == Mat::identity(f5, 4));
      CHECK(mat_kernel(m).empty());
    }
    // charpoly matches det: p(0) = det(-M) = (-1)^n det M
    Poly cp = mat_charpoly(m);
    CHECK(cp.degree() == 4);
    Elem p0 = poly_eval(cp, zero(f5));
    CHECK(p0 == d); // (-1)^4 = 1
  }
  // kernel correctness
  Mat s(f5, 2, 3);
  s.at(0, 0) = one(f5);
  s.at(0, 1) = from_int(f5, 2);
  s.at(1, 2) = one(f5);
  auto ker = mat_kernel(s);
  REQUIRE(ker.size() == 1);
  CHECK(is_zero(mat_apply(s, ker[0])[0]));
  CHECK(is_zero(mat_apply(s, ker[0])[1]));
}
