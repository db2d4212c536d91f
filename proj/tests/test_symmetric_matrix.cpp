#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atlas/symmetric_matrix.hpp"

#include <random>

using namespace atlas;

namespace {

MatQ from_ints(std::initializer_list<std::initializer_list<long>> rows) {
  const int r = static_cast<int>(rows.size());
  MatQ m(r, r);
  int i = 0;
  for (const auto& row : rows) {
    int j = 0;
    for (long v : row) m(i, j++) = rat(v);
    ++i;
  }
  return m;
}

// Reduced sink matrix pattern: zero diagonal on the first r indices, ones
// everywhere else, including the last diagonal entry.
MatQ b_matrix(int r) {
  MatQ m = MatQ::Ones(r + 1, r + 1);
  for (int i = 0; i < r; ++i) m(i, i) = 0;
  return m;
}

MatQ random_symmetric(std::mt19937_64& rng, int order) {
  std::uniform_int_distribution<int> num(-4, 4);
  std::uniform_int_distribution<int> den(1, 3);
  MatQ m(order, order);
  for (int i = 0; i < order; ++i)
    for (int j = i; j < order; ++j) {
      m(i, j) = rat(num(rng), den(rng));
      m(j, i) = m(i, j);
    }
  return m;
}

}  // namespace

TEST_CASE("construction enforces symmetry and shape") {
  CHECK_THROWS_AS(SymmetricMatrixQ(MatQ::Zero(2, 3)), std::invalid_argument);
  MatQ bad = from_ints({{0, 1}, {2, 0}});
  CHECK_THROWS_AS(SymmetricMatrixQ{bad}, std::invalid_argument);
  CHECK_NOTHROW(SymmetricMatrixQ(from_ints({{0, 1}, {1, 0}})));
}

TEST_CASE("inertia: frozen cases") {
  CHECK(inertia(SymmetricMatrixQ::Identity(3)) == Inertia{3, 0, 0});
  CHECK(inertia(SymmetricMatrixQ(b_matrix(2))) == Inertia{1, 2, 0});
  CHECK(inertia(SymmetricMatrixQ(from_ints({{0, 2}, {2, 0}}))) == Inertia{1, 1, 0});
  CHECK(inertia(SymmetricMatrixQ::Zero(4)) == Inertia{0, 0, 4});
  CHECK(inertia(SymmetricMatrixQ(from_ints({{1, 0, 0}, {0, -1, 0}, {0, 0, 0}}))) ==
        Inertia{1, 1, 1});
}

TEST_CASE("inertia is congruence-invariant") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const int r = 2 + static_cast<int>(rng() % 4);
    const MatQ m = random_symmetric(rng, r);
    MatQ s;
    do {
      s = MatQ(r, r);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) s(i, j) = rat(entry(rng));
    } while (s.determinant() == 0);
    const Inertia a = inertia(SymmetricMatrixQ(m));
    const Inertia b = inertia(SymmetricMatrixQ((s.transpose() * m * s).eval()));
    CHECK(a == b);
  }
}

TEST_CASE("float and exact backends agree on inertia away from zero") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const int r = 2 + static_cast<int>(rng() % 4);
    const MatQ m = random_symmetric(rng, r);
    MatX<double> md(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) md(i, j) = to_double(m(i, j));
    const Inertia exact = inertia(SymmetricMatrixQ(m));
    const Inertia fl = inertia(SymmetricMatrixD(md));
    // The float zero band can only absorb genuinely tiny eigenvalues; with
    // small integer-denominator entries the counts should coincide outright
    // unless the exact matrix is singular.
    if (exact.n_zero == fl.n_zero) CHECK(exact == fl);
    CHECK(fl.n_pos <= exact.n_pos + exact.n_zero);
    CHECK(fl.n_neg <= exact.n_neg + exact.n_zero);
  }
}

TEST_CASE("check_ope: frozen cases") {
  CHECK(check_ope(SymmetricMatrixQ::Zero(3)));
  CHECK_FALSE(check_ope(SymmetricMatrixQ(from_ints({{2, 0}, {0, 2}}))));
  for (int r = 1; r <= 10; ++r) CHECK(check_ope(SymmetricMatrixQ(b_matrix(r))));
}

TEST_CASE("check_ndc: frozen cases") {
  CHECK(check_ndc(SymmetricMatrixQ(from_ints({{1, 0}, {0, -1}}))));
  CHECK_FALSE(check_ndc(SymmetricMatrixQ(from_ints({{1, 0}, {0, 1}}))));
  CHECK(check_ndc(SymmetricMatrixQ::Zero(2)));
  CHECK(check_ndc(SymmetricMatrixD(MatX<double>::Zero(3, 3))));
  MatX<double> d2(2, 2);
  d2 << 1, 0, 0, 1;
  CHECK_FALSE(check_ndc(SymmetricMatrixD(d2)));
}

TEST_CASE("check_hyp_pair: frozen cases") {
  const SymmetricMatrixQ off(from_ints({{0, 1}, {1, 0}}));
  VecQ v(2), w(2);
  v << rat(1), rat(0);
  w << rat(1), rat(1);
  CHECK(check_hyp_pair(off, v, w));

  const SymmetricMatrixQ id = SymmetricMatrixQ::Identity(2);
  VecQ e1(2), e2(2);
  e1 << rat(1), rat(0);
  e2 << rat(0), rat(1);
  CHECK_FALSE(check_hyp_pair(id, e1, e2));
  CHECK(check_hyp_pair(id, e2, e2));  // v = w equality case

  VecQ bad(3);
  bad << rat(1), rat(0), rat(0);
  CHECK_THROWS_AS(check_hyp_pair(id, bad, e2), std::invalid_argument);
}

TEST_CASE("ope, ndc, and sampled hyp agree on random rational matrices") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int r = 1 + static_cast<int>(rng() % 5);
    const SymmetricMatrixQ m(random_symmetric(rng, r));
    const bool ope = check_ope(m);
    CHECK(check_ndc(m) == ope);
    if (ope) CHECK(check_hyp_sampled(m, 16, trial));
  }
}

TEST_CASE("support and irreducibility") {
  CHECK(support(SymmetricMatrixQ::Zero(3)).empty());
  CHECK(support(SymmetricMatrixQ(from_ints({{0, 0, 0}, {0, 1, 0}, {0, 0, 0}}))) ==
        IndexSet{1});
  CHECK(support(SymmetricMatrixQ(b_matrix(4))) == IndexSet{0, 1, 2, 3, 4});

  CHECK(irreducible_on_support(SymmetricMatrixQ::Zero(3)));
  CHECK_FALSE(irreducible_on_support(SymmetricMatrixQ(from_ints({{1, 0}, {0, 1}}))));
  CHECK(irreducible_on_support(
      SymmetricMatrixQ(from_ints({{0, 1, 0, 1}, {1, 0, 1, 0}, {0, 1, 0, 1}, {1, 0, 1, 0}}))));

  // Invariance under symmetric permutation.
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const int r = 3 + static_cast<int>(rng() % 3);
    const MatQ m = random_symmetric(rng, r);
    std::vector<int> perm(r);
    for (int i = 0; i < r; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    MatQ pm(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) pm(i, j) = m(perm[i], perm[j]);
    const SymmetricMatrixQ a(m), b(pm);
    CHECK(support(a).size() == support(b).size());
    CHECK(irreducible_on_support(a) == irreducible_on_support(b));
  }
}

TEST_CASE("jacobi_eigenvalues: frozen cases") {
  MatX<double> d(2, 2);
  d << 3, 0, 0, 1;
  auto ev = jacobi_eigenvalues(SymmetricMatrixD(d));
  REQUIRE(ev.size() == 2);
  CHECK(ev[0] == doctest::Approx(1));
  CHECK(ev[1] == doctest::Approx(3));

  MatX<double> o(2, 2);
  o << 0, 1, 1, 0;
  ev = jacobi_eigenvalues(SymmetricMatrixD(o));
  CHECK(ev[0] == doctest::Approx(-1));
  CHECK(ev[1] == doctest::Approx(1));

  MatX<double> b(3, 3);
  b << 0, 1, 1, 1, 0, 1, 1, 1, 1;
  ev = jacobi_eigenvalues(SymmetricMatrixD(b));
  CHECK(ev[0] == doctest::Approx(-1));
  CHECK(ev[1] < -1e-6);
  CHECK(ev[2] > 1e-6);
  // Signs (+,-,-): exactly one eigenvalue of the pattern matrix is -1.
  CHECK(std::count_if(ev.begin(), ev.end(),
                      [](double x) { return std::abs(x + 1) < 1e-9; }) == 1);
}
