#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "pickfactor/freefock.hpp"
#include "pickfactor/rng.hpp"

using namespace pickfactor;

namespace {

FreePoly random_free(int dim, int degree, Rng& rng) {
  FreePoly F(dim);
  std::vector<Word> frontier{Word{}};
  F.set_coeff(Word{}, rng.cnormal());
  for (int len = 1; len <= degree; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier)
      for (int letter = 1; letter <= dim; ++letter) {
        Word e = w;
        e.push_back(letter);
        F.set_coeff(e, rng.cnormal());
        next.push_back(std::move(e));
      }
    frontier = std::move(next);
  }
  return F;
}

MatrixTuple random_tuple(int dim, int n, Rng& rng) {
  MatrixTuple X;
  for (int j = 0; j < dim; ++j) {
    Eigen::MatrixXcd M(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) M(r, c) = 0.3 * rng.cnormal();
    X.matrices.push_back(std::move(M));
  }
  return X;
}

double op_norm(const Eigen::MatrixXcd& M) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues()(0);
}

}  // namespace

TEST_CASE("free polynomial storage and algebra") {
  FreePoly F(2);
  F.set_coeff({1, 2}, cplx(1.0, 0.0));
  F.set_coeff({2, 1}, cplx(0.0, 2.0));
  CHECK(F.degree() == 2);
  CHECK(F.coeff({1, 2}) == cplx(1.0, 0.0));
  CHECK(F.coeff({1, 1}) == cplx(0.0, 0.0));
  F.set_coeff({1, 2}, cplx(0.0, 0.0));
  CHECK(F.terms().size() == 1);

  CHECK_THROWS_AS(F.set_coeff({0}, cplx(1.0, 0.0)), Error);   // letters 1..d
  CHECK_THROWS_AS(F.set_coeff({3}, cplx(1.0, 0.0)), Error);
  CHECK_THROWS_AS(FreePoly(0), Error);

  const FreePoly a = FreePoly::letter(2, 1);
  const FreePoly b = FreePoly::letter(2, 2);
  const FreePoly ab = free_mul(a, b);
  const FreePoly ba = free_mul(b, a);
  CHECK(ab.coeff({1, 2}) == cplx(1.0, 0.0));
  CHECK(ab.coeff({2, 1}) == cplx(0.0, 0.0));
  CHECK(ba.coeff({2, 1}) == cplx(1.0, 0.0));

  // Words form an orthonormal family.
  CHECK(fock_inner(ab, ba) == cplx(0.0, 0.0));
  CHECK(fock_inner(ab, ab) == cplx(1.0, 0.0));
  const FreePoly sum = ab + ba * cplx(0.0, 1.0);
  CHECK(sum.norm_sq() == doctest::Approx(2.0));
  CHECK(sum.homogeneous_part(2).terms().size() == 2);
  CHECK(sum.homogeneous_part(1).is_zero());
  CHECK(sum.degree_weight(2) == doctest::Approx(std::sqrt(2.0)));

  CHECK(word_multi_index({1, 2, 1}, 2) == MultiIndex{2, 1});
  CHECK_THROWS_AS(word_multi_index({3}, 2), Error);
}

TEST_CASE("free multiplication is associative and flip reverses it") {
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const FreePoly F = random_free(2, 2, rng);
    const FreePoly G = random_free(2, 2, rng);
    const FreePoly H = random_free(2, 1, rng);
    const FreePoly lhs = free_mul(free_mul(F, G), H);
    const FreePoly rhs = free_mul(F, free_mul(G, H));
    CHECK((lhs - rhs).norm_sq() < 1e-20);

    // flip is an isometric anti-homomorphism and an involution.
    CHECK((flip(flip(F)) - F).norm_sq() == 0.0);
    CHECK(flip(F).norm_sq() == doctest::Approx(F.norm_sq()));
    const FreePoly anti = flip(free_mul(F, G)) - free_mul(flip(G), flip(F));
    CHECK(anti.norm_sq() < 1e-20);
  }
}

TEST_CASE("matrix evaluation is multiplicative") {
  Rng rng(43);
  const FreePoly F = random_free(2, 2, rng);
  const FreePoly G = random_free(2, 2, rng);
  const MatrixTuple X = random_tuple(2, 3, rng);
  const Eigen::MatrixXcd direct = eval_free(free_mul(F, G), X);
  const Eigen::MatrixXcd split = eval_free(F, X) * eval_free(G, X);
  CHECK((direct - split).norm() < 1e-12);

  MatrixTuple bad = X;
  bad.matrices.pop_back();
  CHECK_THROWS_AS(eval_free(F, bad), Error);
}

TEST_CASE("homogeneous evaluation bound on row contractions") {
  // Degree-k pieces obey ||F_k(X)|| <= ||F_k|| ||X||_row^k.
  Rng rng(47);
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = 1 + static_cast<int>(rng.raw() % 3);
    const FreePoly F = random_free(dim, 3, rng);
    const MatrixTuple X = random_tuple(dim, 3, rng);
    const double r = X.row_norm();
    for (int k = 0; k <= 3; ++k) {
      const FreePoly Fk = F.homogeneous_part(k);
      if (Fk.is_zero()) continue;
      const double lhs = op_norm(eval_free(Fk, X));
      const double rhs = Fk.degree_weight(k) * std::pow(r, k);
      CHECK(lhs <= rhs + 1e-10);
    }
  }
}

TEST_CASE("free Sarason series matches the shifted inner products") {
  Rng rng(51);
  for (int trial = 0; trial < 12; ++trial) {
    const int dim = 1 + static_cast<int>(rng.raw() % 2);
    const FreePoly F = random_free(dim, 3, rng);
    for (const SarasonSide side : {SarasonSide::left, SarasonSide::right}) {
      const FreePoly V = free_sarason(F, side, 3, 10);
      CHECK(std::abs(V.coeff({}) - cplx(F.norm_sq(), 0.0)) < 1e-13);
      // Every nonconstant coefficient is 2 <F, F w> (left) or 2 <F, w F>.
      std::vector<Word> words;
      for (const auto& [w, c] : V.terms())
        if (!w.empty()) words.push_back(w);
      for (const Word& w : words) {
        const FreePoly mono = FreePoly::word_monomial(dim, w);
        const cplx expect =
            side == SarasonSide::left
                ? 2.0 * fock_inner(F, free_mul(F, mono))
                : 2.0 * fock_inner(F, free_mul(mono, F));
        CHECK(std::abs(V.coeff(w) - expect) < 1e-12);
      }
    }
  }
}

TEST_CASE("free Sarason sides differ on asymmetric inputs") {
  // F = x1 + x1 x2: appending x2 on the right matches, prepending never does.
  FreePoly F(2);
  F.set_coeff({1}, cplx(1.0, 0.0));
  F.set_coeff({1, 2}, cplx(1.0, 0.0));
  const FreePoly left = free_sarason(F, SarasonSide::left, 1, 10);
  const FreePoly right = free_sarason(F, SarasonSide::right, 1, 10);
  CHECK(left.coeff({2}) == cplx(2.0, 0.0));
  CHECK(right.coeff({2}) == cplx(0.0, 0.0));
  CHECK(right.terms().size() == 1);  // only the constant survives
  CHECK(left.coeff({}) == cplx(2.0, 0.0));

  // Mirrored support lights up the right side instead.
  FreePoly G(2);
  G.set_coeff({2}, cplx(1.0, 0.0));
  G.set_coeff({1, 2}, cplx(1.0, 0.0));
  const FreePoly gleft = free_sarason(G, SarasonSide::left, 1, 10);
  const FreePoly gright = free_sarason(G, SarasonSide::right, 1, 10);
  CHECK(gright.coeff({1}) == cplx(2.0, 0.0));
  CHECK(gleft.terms().size() == 1);

  CHECK_THROWS_AS(free_sarason(F, SarasonSide::left, -1, 10), Error);
  CHECK_THROWS_AS(free_sarason(F, SarasonSide::left, 9, 10), Error);
}

TEST_CASE("symmetric embedding is a flip-fixed isometry") {
  const KernelSpace da = KernelSpace::drury_arveson(2, 10);
  MultiPoly f(da);
  f.set_coeff({0, 0}, cplx(1.0, 0.0));
  f.set_coeff({1, 1}, cplx(2.0, 0.0));
  const FreePoly F = embed_symmetric(f);
  CHECK(F.coeff({}) == cplx(1.0, 0.0));
  CHECK(F.coeff({1, 2}) == cplx(1.0, 0.0));
  CHECK(F.coeff({2, 1}) == cplx(1.0, 0.0));
  CHECK(F.terms().size() == 3);

  Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    MultiPoly g(da);
    for (const MultiIndex& a : indices_up_to(2, 3))
      g.set_coeff(a, rng.cnormal());
    const FreePoly G = embed_symmetric(g);
    CHECK(G.norm_sq() == doctest::Approx(norm_sq(da, g)).epsilon(1e-12));
    CHECK((flip(G) - G).norm_sq() < 1e-24);
  }

  // Non-unit kernel coefficients do not embed isometrically.
  const KernelSpace d = KernelSpace::dirichlet(10);
  CHECK_THROWS_AS(embed_symmetric(MultiPoly::monomial(d, {1})), Error);
  // Constants are fine in any space.
  CHECK_NOTHROW(embed_symmetric(MultiPoly::constant(d, cplx(2.0, 0.0))));
}

TEST_CASE("outer defect of a geometric line has a closed form") {
  // F = 1 - t x: defect(N)^2 = t^{2N+2} / sum_{k <= N+1} t^{2k}.
  for (const double t : {0.3, 0.5, 0.8}) {
    FreePoly F(1);
    F.set_coeff({}, cplx(1.0, 0.0));
    F.set_coeff({1}, cplx(-t, 0.0));
    for (const int N : {0, 1, 4, 9}) {
      double denom = 0.0;
      for (int k = 0; k <= N + 1; ++k) denom += std::pow(t, 2 * k);
      const double expect = std::pow(t, N + 1) / std::sqrt(denom);
      CHECK(outer_defect(F, N, 12) == doctest::Approx(expect).epsilon(1e-10));
    }
  }

  // The pure shift keeps distance one from the vacuum.
  FreePoly shift(1);
  shift.set_coeff({1}, cplx(1.0, 0.0));
  CHECK(outer_defect(shift, 5, 12) == doctest::Approx(1.0));
  // The constant 1 is its own shift span member.
  CHECK(outer_defect(FreePoly::constant(1, cplx(1.0, 0.0)), 3, 12) ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("outer defect of the balanced degree-four polynomial") {
  FreePoly F(2);
  F.set_coeff({}, cplx(1.0, 0.0));
  for (const Word& w :
       {Word{1, 1, 2, 2}, Word{1, 2, 1, 2}, Word{1, 2, 2, 1},
        Word{2, 1, 1, 2}, Word{2, 1, 2, 1}, Word{2, 2, 1, 1}})
    F.set_coeff(w, cplx(-1.0 / 6.0, 0.0));
  double prev = 1e300;
  for (const int N : {4, 8}) {
    const double defect = outer_defect(F, N, N + 4);
    const double envelope = std::pow(6.0, -0.5 * (N / 4 + 1));
    CHECK(defect <= envelope + 1e-10);
    CHECK(defect < prev);
    prev = defect;
  }
}

TEST_CASE("fock budgets") {
  CHECK(default_fock_budget(1) == 30);
  CHECK(default_fock_budget(2) == 14);
  CHECK(default_fock_budget(3) == 9);
  CHECK(default_fock_budget(4) == -1);

  FreePoly F(4);
  F.set_coeff({1}, cplx(1.0, 0.0));
  // Four letters have no default budget; an explicit one is required.
  CHECK_THROWS_AS(outer_defect(F, 2, -1), Error);
  CHECK_NOTHROW(outer_defect(F, 2, 4));
  FreePoly G(2);
  G.set_coeff({1}, cplx(1.0, 0.0));
  CHECK_THROWS_AS(outer_defect(G, 14, -1), Error);  // N + deg > 14
  CHECK_THROWS_AS(outer_defect(FreePoly(2), 2, -1), Error);
  CHECK_THROWS_AS(outer_defect(G, -1, -1), Error);
}
