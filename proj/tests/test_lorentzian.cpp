#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atlas/lorentzian.hpp"

#include <random>

using namespace atlas;

namespace {

HomogeneousPolynomial poly(int n, int d,
                           std::initializer_list<std::pair<Exponent, long>> terms) {
  std::map<Exponent, Rat> m;
  for (const auto& [e, c] : terms) m[e] = rat(c);
  return HomogeneousPolynomial::from_terms(n, d, m);
}

HomogeneousPolynomial e2_of_3() {
  // w1 w2 + w1 w3 + w2 w3
  return poly(3, 2, {{{1, 1, 0}, 1}, {{1, 0, 1}, 1}, {{0, 1, 1}, 1}});
}

VecQ ones(int n) { return VecQ::Constant(n, Rat(1)); }

}  // namespace

TEST_CASE("construction and validation") {
  CHECK_THROWS_AS(poly(2, 2, {{{1, 0}, 1}}), std::invalid_argument);  // degree mismatch
  CHECK_THROWS_AS(poly(2, 2, {{{1, 1, 0}, 1}}), std::invalid_argument);  // wrong length
  const auto f = poly(2, 2, {{{1, 1}, 0}});
  CHECK(f.is_zero());  // zero coefficients are dropped
}

TEST_CASE("derivative") {
  const auto f = poly(2, 2, {{{1, 1}, 1}});  // w1 w2
  const auto d1 = derivative(f, {1, 0});
  CHECK(d1.degree() == 1);
  CHECK(d1.terms().at({0, 1}) == 1);

  const auto g = poly(2, 3, {{{2, 1}, 1}});  // w1^2 w2
  const auto d2 = derivative(g, {2, 0});
  CHECK(d2.terms().at({0, 1}) == 2);

  const auto h = poly(3, 2, {{{1, 1, 0}, 1}});
  CHECK(derivative(h, {0, 0, 1}).is_zero());
}

TEST_CASE("evaluation and the Euler identity") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<int> num(1, 5), den(1, 3);
  const std::vector<HomogeneousPolynomial> polys = {
      e2_of_3(), poly(3, 3, {{{2, 1, 0}, 3}, {{0, 1, 2}, 5}, {{1, 1, 1}, 7}}),
      poly(2, 4, {{{4, 0}, 1}, {{2, 2}, 2}})};
  int samples = 0;
  for (const auto& g : polys) {
    for (int trial = 0; trial < 34; ++trial) {
      VecQ w(g.n());
      for (int i = 0; i < g.n(); ++i) w(i) = rat(num(rng), den(rng));
      Rat side(0);
      for (int i = 0; i < g.n(); ++i) {
        Exponent e(g.n(), 0);
        e[i] = 1;
        side += w(i) * derivative(g, e).evaluate(w);
      }
      CHECK(g.evaluate(w) == side / rat(g.degree()));
      ++samples;
    }
  }
  CHECK(samples >= 100);
}

TEST_CASE("M-convexity") {
  CHECK_FALSE(m_convex_violation({{1, 1}}));
  const auto bad = m_convex_violation({{2, 0}, {0, 2}});
  REQUIRE(bad.has_value());
  // Lexicographic scan reports the symmetric witness first: a = (0,2) exceeds
  // b = (2,0) in coordinate 1 and (1,1) is missing.
  CHECK(bad->a == Exponent{0, 2});
  CHECK(bad->b == Exponent{2, 0});
  CHECK(bad->i == 1);
  CHECK_FALSE(m_convex_violation(e2_of_3().support()));
}

TEST_CASE("hessian") {
  const auto f = poly(2, 2, {{{1, 1}, 1}});
  MatQ expected(2, 2);
  expected << 0, 1, 1, 0;
  CHECK(hessian(f, ones(2)) == expected);

  const auto g = poly(2, 2, {{{2, 0}, 1}, {{0, 2}, 1}});
  MatQ diag(2, 2);
  diag << 2, 0, 0, 2;
  CHECK(hessian(g, ones(2)) == diag);

  const Inertia in = inertia(SymmetricMatrixQ(hessian(e2_of_3(), ones(3))));
  CHECK(in == Inertia{1, 2, 0});
}

TEST_CASE("is_lorentzian") {
  CHECK_FALSE(is_lorentzian(poly(2, 2, {{{2, 0}, 1}, {{0, 2}, 1}})).lorentzian);
  CHECK(is_lorentzian(poly(2, 2, {{{2, 0}, 1}, {{0, 2}, 1}})).support_witness.has_value());
  CHECK(is_lorentzian(e2_of_3()).lorentzian);
  CHECK(is_lorentzian(poly(2, 2, {{{1, 1}, 2}})).lorentzian);
  CHECK_FALSE(is_lorentzian(poly(2, 2, {{{1, 1}, -1}})).lorentzian);
  CHECK_THROWS_AS(is_lorentzian(poly(2, 1, {{{1, 0}, 1}})), std::invalid_argument);

  // Scaling invariance for positive rational scalars.
  const auto f = basis_polynomial(Matroid::uniform(2, 4 > 2 ? 2 : 2));
  (void)f;
  for (const auto& g : {e2_of_3(), poly(2, 2, {{{1, 1}, 2}})})
    CHECK(is_lorentzian(g.scaled(rat(7, 3))).lorentzian == is_lorentzian(g).lorentzian);
}

TEST_CASE("basis polynomials") {
  const auto u23 = basis_polynomial(Matroid::uniform(3, 2));
  CHECK(u23.degree() == 2);
  CHECK(u23.terms().size() == 3);
  CHECK(u23.terms().at({1, 1, 0}) == 1);

  const auto u12 = basis_polynomial(Matroid::uniform(2, 1));
  CHECK(u12.degree() == 1);
  CHECK(u12.terms().size() == 2);

  const auto k3 = basis_polynomial(Matroid::graphic(3, {{0, 1}, {1, 2}, {2, 0}}));
  CHECK(k3.terms() == u23.terms());
}

TEST_CASE("uniform matroid basis polynomials are Lorentzian") {
  for (int n = 2; n <= 5; ++n)
    for (int k = 2; k <= n; ++k)
      CHECK(is_lorentzian(basis_polynomial(Matroid::uniform(n, k))).lorentzian);
}

TEST_CASE("derivative tower atlas") {
  const auto f = poly(2, 3, {{{2, 1}, 3}, {{1, 2}, 3}});  // 3 w1^2 w2 + 3 w1 w2^2
  CHECK(is_lorentzian(f).lorentzian);
  const auto res = lorentzian_atlas(f, ones(2));
  REQUIRE(validate_atlas(res.atlas).holds);
  CHECK(res.atlas.vertices.size() == 1 + 2);  // root plus a sink per letter
  const auto& root = res.atlas.at(res.root);
  CHECK(root.out_edges.size() == 2);
  for (const auto& [id, v] : res.atlas.vertices) {
    CHECK(check_ope(v.M));
    if (v.is_sink()) continue;
    for (AtlasProperty p : {AtlasProperty::Inh, AtlasProperty::TInv, AtlasProperty::Iden,
                            AtlasProperty::DecSupp, AtlasProperty::PullEq})
      CHECK(check_property(res.atlas, id, p).holds);
    CHECK(verify_local_global(res.atlas, id).holds);
  }
  // supp(M_v) matches the variables still present in the derivative.
  for (const auto& [id, v] : res.atlas.vertices) {
    const HomogeneousPolynomial g = derivative(f, res.orders.at(id));
    IndexSet expected;
    for (int i = 0; i < f.n(); ++i) {
      Exponent e(f.n(), 0);
      e[i] = 1;
      if (!derivative(g, e).is_zero()) expected.push_back(i);
    }
    CHECK(support(v.M) == expected);
  }
}

TEST_CASE("verify_hessian_hyp") {
  CHECK(verify_hessian_hyp(e2_of_3(), ones(3)).holds);
  const auto u24 = basis_polynomial(Matroid::uniform(4, 2));
  VecQ w(4);
  w << rat(1), rat(2), rat(1, 2), rat(3);
  CHECK(verify_hessian_hyp(u24, w).holds);
  const auto u34 = basis_polynomial(Matroid::uniform(4, 3));
  CHECK(verify_hessian_hyp(u34, w).holds);
  CHECK_THROWS_AS(verify_hessian_hyp(poly(2, 2, {{{2, 0}, 1}, {{0, 2}, 1}}), ones(2)),
                  std::invalid_argument);
}
