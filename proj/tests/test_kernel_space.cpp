#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "pickfactor/kernel_space.hpp"
#include "pickfactor/multi_poly.hpp"
#include "pickfactor/rng.hpp"

using namespace pickfactor;

namespace {

Point pt(cplx z) { return Point{z}; }

}  // namespace

TEST_CASE("family names round-trip") {
  for (Family f : {Family::hardy, Family::dirichlet, Family::d_alpha,
                   Family::drury_arveson, Family::custom})
    CHECK(family_from_name(family_name(f)) == f);
  CHECK_THROWS_AS(family_from_name("szego"), Error);
}

TEST_CASE("coefficient sequences of the stock families") {
  const KernelSpace hardy = KernelSpace::hardy(10);
  const KernelSpace dirichlet = KernelSpace::dirichlet(10);
  const KernelSpace bergman = KernelSpace::d_alpha(-1.0, 1, 10);
  const KernelSpace da = KernelSpace::drury_arveson(3, 10);
  for (int n = 0; n <= 10; ++n) {
    CHECK(hardy.coeff(n) == 1.0);
    CHECK(dirichlet.coeff(n) == doctest::Approx(1.0 / (n + 1)).epsilon(1e-15));
    CHECK(bergman.coeff(n) == doctest::Approx(n + 1.0).epsilon(1e-15));
    CHECK(da.coeff(n) == 1.0);
  }
  CHECK(KernelSpace::d_alpha(0.5, 1, 6).coeff(3) ==
        doctest::Approx(1.0 / std::sqrt(4.0)));
  CHECK(hardy.dim() == 1);
  CHECK(da.dim() == 3);
  CHECK(KernelSpace::hardy().working_degree() ==
        KernelSpace::kDefaultWorkingDegree);
  CHECK(KernelSpace::kDefaultWorkingDegree == 24);
}

TEST_CASE("custom spaces validate their coefficients") {
  const KernelSpace s = KernelSpace::custom({1.0, 0.5, 0.25}, 2);
  CHECK(s.working_degree() == 2);
  CHECK(s.coeff(2) == 0.25);
  CHECK(s.dim() == 2);
  CHECK_THROWS_AS(KernelSpace::custom({2.0, 1.0}, 1), Error);    // a_0 != 1
  CHECK_THROWS_AS(KernelSpace::custom({1.0, 0.0}, 1), Error);    // a_1 = 0
  CHECK_THROWS_AS(KernelSpace::custom({1.0, -1.0}, 1), Error);   // a_1 < 0
  CHECK_THROWS_AS(KernelSpace::custom({1.0, 1.0}, 0), Error);    // dim < 1
  CHECK_THROWS_AS(KernelSpace::custom({}, 1), Error);            // empty
  CHECK_THROWS_AS(KernelSpace::hardy(5).coeff(6), Error);
  CHECK_THROWS_AS(KernelSpace::hardy(5).coeff(-1), Error);
}

TEST_CASE("complete Pick flag follows the ratio test") {
  CHECK(KernelSpace::hardy(8).complete_pick());
  CHECK(KernelSpace::dirichlet(8).complete_pick());
  CHECK(KernelSpace::drury_arveson(2, 8).complete_pick());
  CHECK(KernelSpace::d_alpha(0.5, 1, 8).complete_pick());
  // Bergman-type growth breaks it: a_n/a_{n+1} = (n+1)/(n+2) increases.
  CHECK_FALSE(KernelSpace::d_alpha(-1.0, 1, 8).complete_pick());
  // Exponential decay a_n = 1/n! does too.
  CHECK_FALSE(KernelSpace::custom({1.0, 1.0, 0.5, 1.0 / 6.0}, 1).complete_pick());
  CHECK_FALSE(KernelSpace::custom({1.0, 2.0, 1.0}, 1).complete_pick());
  CHECK(KernelSpace::custom({1.0, 0.5, 1.0 / 3.0}, 1).complete_pick());
}

TEST_CASE("monomial norms") {
  const KernelSpace hardy = KernelSpace::hardy(8);
  const KernelSpace dirichlet = KernelSpace::dirichlet(8);
  const KernelSpace bergman = KernelSpace::d_alpha(-1.0, 1, 8);
  for (int n = 0; n <= 8; ++n) {
    CHECK(monomial_norm_sq(hardy, {n}) == doctest::Approx(1.0));
    CHECK(monomial_norm_sq(dirichlet, {n}) == doctest::Approx(n + 1.0));
    CHECK(monomial_norm_sq(bergman, {n}) == doctest::Approx(1.0 / (n + 1)));
  }
  // Drury-Arveson: ||z^alpha||^2 = alpha! / |alpha|!.
  const KernelSpace da = KernelSpace::drury_arveson(2, 8);
  CHECK(monomial_norm_sq(da, {1, 1}) == doctest::Approx(0.5));
  CHECK(monomial_norm_sq(da, {2, 0}) == doctest::Approx(1.0));
  CHECK(monomial_norm_sq(da, {2, 1}) == doctest::Approx(1.0 / 3.0));
  CHECK(monomial_norm_sq(da, {2, 2}) == doctest::Approx(1.0 / 6.0));

  CHECK_THROWS_AS(monomial_norm_sq(da, {1}), Error);       // wrong length
  CHECK_THROWS_AS(monomial_norm_sq(hardy, {9}), Error);    // above degree
}

TEST_CASE("multinomial and index enumeration") {
  CHECK(multinomial({0}) == 1.0);
  CHECK(multinomial({3}) == 1.0);
  CHECK(multinomial({1, 1}) == 2.0);
  CHECK(multinomial({2, 1}) == 3.0);
  CHECK(multinomial({2, 2}) == 6.0);
  CHECK(multinomial({1, 1, 1}) == 6.0);

  const std::vector<MultiIndex> idx = indices_up_to(2, 2);
  REQUIRE(idx.size() == 6);
  CHECK(idx.front() == MultiIndex{0, 0});
  CHECK(idx.back() == MultiIndex{2, 0});
  for (std::size_t i = 0; i + 1 < idx.size(); ++i)
    CHECK(GradedLexLess{}(idx[i], idx[i + 1]));
  CHECK(indices_up_to(1, 3).size() == 4);
  CHECK(indices_up_to(3, 4).size() == 35);
}

TEST_CASE("kernel evaluation matches the closed forms") {
  const KernelSpace hardy = KernelSpace::hardy(24);
  const KernelSpace dirichlet = KernelSpace::dirichlet(24);
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const cplx z = 0.6 * rng.uniform() *
                   std::polar(1.0, 6.283185307179586 * rng.uniform());
    const cplx w = 0.6 * rng.uniform() *
                   std::polar(1.0, 6.283185307179586 * rng.uniform());
    const cplx t = z * std::conj(w);
    const KernelValue h = kernel_eval(hardy, pt(w), pt(z), 24);
    CHECK(std::abs(h.value - 1.0 / (1.0 - t)) <= h.tail_bound + 1e-14);
    const KernelValue d = kernel_eval(dirichlet, pt(w), pt(z), 24);
    const cplx closed =
        std::abs(t) < 1e-8
            ? cplx(1.0, 0.0) + t / 2.0
            : -std::log(1.0 - t) / t;
    CHECK(std::abs(d.value - closed) <= d.tail_bound + 1e-10);
  }

  // Tail bound shrinks with the truncation degree and is honest.
  const Point z = pt(cplx(0.5, 0.1));
  const Point w = pt(cplx(0.3, -0.2));
  double prev_tail = 1e300;
  for (int trunc : {4, 8, 16, 24}) {
    const KernelValue v = kernel_eval(hardy, w, z, trunc);
    CHECK(v.tail_bound < prev_tail);
    prev_tail = v.tail_bound;
    const cplx exact = 1.0 / (1.0 - z[0] * std::conj(w[0]));
    CHECK(std::abs(v.value - exact) <= v.tail_bound + 1e-15);
  }

  // Normalization k(., 0) = 1.
  const KernelValue at0 = kernel_eval(dirichlet, pt(cplx(0, 0)), z, 24);
  CHECK(at0.value == cplx(1.0, 0.0));
  CHECK(at0.tail_bound == 0.0);
}

TEST_CASE("ball membership is enforced") {
  const KernelSpace hardy = KernelSpace::hardy(8);
  CHECK_NOTHROW(hardy.require_in_ball(pt(cplx(0.99, 0.0))));
  CHECK_THROWS_AS(hardy.require_in_ball(pt(cplx(1.0, 0.0))), Error);
  CHECK_THROWS_AS(hardy.require_in_ball(pt(cplx(0.8, 0.8))), Error);
  CHECK_THROWS_AS(hardy.require_in_ball(Point{cplx(0.1, 0), cplx(0.1, 0)}),
                  Error);
  const KernelSpace da = KernelSpace::drury_arveson(2, 8);
  CHECK_NOTHROW(da.require_in_ball(Point{cplx(0.7, 0), cplx(0.7, 0)}));
  CHECK_THROWS_AS(da.require_in_ball(Point{cplx(0.8, 0), cplx(0.8, 0)}),
                  Error);
  CHECK_THROWS_AS(kernel_eval(hardy, pt(cplx(0, 0)), pt(cplx(0, 0)), 9),
                  Error);  // truncation above working degree
}

TEST_CASE("polynomial arithmetic and coefficient storage") {
  const KernelSpace s = KernelSpace::drury_arveson(2, 10);
  MultiPoly f(s);
  f.set_coeff({1, 0}, cplx(2.0, 0.0));
  f.set_coeff({0, 1}, cplx(0.0, 1.0));
  MultiPoly g = MultiPoly::constant(s, cplx(1.0, 0.0));
  g.set_coeff({1, 1}, cplx(-1.0, 0.0));

  const MultiPoly sum = f + g;
  CHECK(sum.coeff({0, 0}) == cplx(1.0, 0.0));
  CHECK(sum.coeff({1, 0}) == cplx(2.0, 0.0));
  const MultiPoly prod = f * g;
  CHECK(prod.coeff({1, 0}) == cplx(2.0, 0.0));
  CHECK(prod.coeff({2, 1}) == cplx(-2.0, 0.0));
  CHECK(prod.coeff({1, 2}) == cplx(0.0, -1.0));
  CHECK(prod.degree() == 3);
  CHECK((f - f).is_zero());
  CHECK((f * cplx(0.0, 0.0)).is_zero());

  // Setting a coefficient to zero removes the term.
  MultiPoly h(s);
  h.set_coeff({1, 0}, cplx(1.0, 0.0));
  h.set_coeff({1, 0}, cplx(0.0, 0.0));
  CHECK(h.is_zero());

  CHECK_THROWS_AS(h.set_coeff({1}, cplx(1.0, 0.0)), Error);
  CHECK_THROWS_AS(h.set_coeff({-1, 0}, cplx(1.0, 0.0)), Error);
  CHECK_THROWS_AS(h.set_coeff({6, 5}, cplx(1.0, 0.0)), Error);

  const Point z{cplx(0.2, 0.1), cplx(-0.3, 0.0)};
  const cplx direct = 2.0 * z[0] + cplx(0.0, 1.0) * z[1];
  CHECK(std::abs(f.eval(z) - direct) < 1e-15);
  CHECK(eval_poly(f, z) == f.eval(z));
}

TEST_CASE("inner products agree with the monomial weights") {
  const KernelSpace dirichlet = KernelSpace::dirichlet(10);
  MultiPoly f(dirichlet);
  f.set_coeff({0}, cplx(1.0, 1.0));
  f.set_coeff({2}, cplx(2.0, 0.0));
  MultiPoly g(dirichlet);
  g.set_coeff({0}, cplx(0.0, 1.0));
  g.set_coeff({2}, cplx(1.0, -1.0));
  // <f, g> = (1+i)(-i) * 1 + 2(1+i) * 3.
  const cplx expect = cplx(1.0, 1.0) * cplx(0.0, -1.0) +
                      2.0 * cplx(1.0, 1.0) * 3.0;
  CHECK(std::abs(inner_product(dirichlet, f, g) - expect) < 1e-14);
  CHECK(norm_sq(dirichlet, f) == doctest::Approx(2.0 + 4.0 * 3.0));
  // Hermitian symmetry.
  CHECK(std::abs(inner_product(dirichlet, g, f) -
                 std::conj(inner_product(dirichlet, f, g))) < 1e-14);
}

TEST_CASE("adjoint of monomial multiplication") {
  const KernelSpace s = KernelSpace::drury_arveson(2, 8);
  Rng rng(11);
  const std::vector<MultiIndex> idx = indices_up_to(2, 3);
  for (int trial = 0; trial < 40; ++trial) {
    MultiPoly f(s), g(s);
    for (const MultiIndex& a : idx) {
      f.set_coeff(a, rng.cnormal());
      g.set_coeff(a, rng.cnormal());
    }
    const MultiIndex beta{static_cast<int>(rng.raw() % 3),
                          static_cast<int>(rng.raw() % 2)};
    // <f, z^beta g> = <adjoint_monomial(beta, f), g>.
    const MultiPoly zbg = MultiPoly::monomial(s, beta) * g;
    const cplx lhs = inner_product(s, f, zbg);
    const cplx rhs = inner_product(s, adjoint_monomial(s, beta, f), g);
    CHECK(std::abs(lhs - rhs) < 1e-12);
  }
}

TEST_CASE("truncated kernels reproduce point evaluation") {
  const KernelSpace da = KernelSpace::drury_arveson(2, 10);
  const Point w{cplx(0.3, 0.2), cplx(-0.1, 0.4)};
  const MultiPoly kw = truncated_kernel_poly(da, w, 10);
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    MultiPoly f(da);
    for (const MultiIndex& a : indices_up_to(2, 4))
      f.set_coeff(a, rng.cnormal());
    CHECK(std::abs(inner_product(da, f, kw) - f.eval(w)) < 1e-12);
  }
  // Evaluating the kernel polynomial matches kernel_eval.
  const Point z{cplx(0.2, -0.3), cplx(0.5, 0.1)};
  CHECK(std::abs(kw.eval(z) - kernel_eval(da, w, z, 10).value) < 1e-13);
}

TEST_CASE("multiplier norms of the coordinate function") {
  const KernelSpace hardy = KernelSpace::hardy(12);
  const KernelSpace dirichlet = KernelSpace::dirichlet(12);
  const MultiPoly zh = MultiPoly::monomial(hardy, {1});
  const MultiPoly zd = MultiPoly::monomial(dirichlet, {1});
  // Shift is isometric on the Hardy side; on the Dirichlet side the
  // worst ratio ||z^{n+1}||/||z^n|| sits at n = 0.
  CHECK(multiplier_compression_norm(hardy, zh, 6) == doctest::Approx(1.0));
  CHECK(multiplier_compression_norm(dirichlet, zd, 6) ==
        doctest::Approx(std::sqrt(2.0)));
  CHECK(multiplier_compression_norm(hardy, MultiPoly(hardy), 6) == 0.0);
  CHECK_THROWS_AS(multiplier_compression_norm(hardy, zh, 12), Error);
}
