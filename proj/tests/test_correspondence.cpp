#include "corrdyn/correspondence.hpp"

#include <cmath>

#include "doctest.h"
#include "support.hpp"

using namespace corrdyn;
using testsup::flatten;
using testsup::multiset_match;
using testsup::poly;

using testsup::make_cheb;
using testsup::make_cusp;
using testsup::make_e1;
using testsup::make_e2;

TEST_CASE("topological degrees") {
  CHECK(make_e1().degrees().d1 == 1);
  CHECK(make_e1().degrees().d2 == 2);
  CHECK(make_e2().degrees().d1 == 2);
  CHECK(make_e2().degrees().d2 == 3);
  CHECK(make_cusp().degrees().d1 == 2);
  CHECK(make_cusp().degrees().d2 == 3);
}

TEST_CASE("graph polynomial of a parametrized correspondence") {
  // (g, f) = (z, z^2): graph is y - x^2 up to sign
  const BiPoly q1 = make_e1().graph();
  BiPoly expect(2, 1);
  expect.at(0, 1) = 1;
  expect.at(2, 0) = -1;
  CHECK((q1.approx_equal(expect, 1e-10) || q1.approx_equal(expect.scaled(-1), 1e-10)));

  // (g, f) = (z^2, z^3): graph is y^2 - x^3 up to sign
  const Correspondence c = Correspondence::parametrized(poly({0, 0, 1}), poly({0, 0, 0, 1}));
  BiPoly cusp(3, 2);
  cusp.at(0, 2) = 1;
  cusp.at(3, 0) = -1;
  const BiPoly q2 = c.graph();
  CHECK((q2.approx_equal(cusp, 1e-10) || q2.approx_equal(cusp.scaled(-1), 1e-10)));

  // implicit graphs pass through unchanged
  CHECK(make_cusp().graph().approx_equal(cusp, 0.0));
}

TEST_CASE("graph vanishes along the parametrization") {
  Rng rng(424242);
  for (const Correspondence& c : {make_e1(), make_e2(), make_cheb()}) {
    const BiPoly& q = c.graph();
    const auto& [g, f] = c.parametrized_repr();
    const double scale = std::max(1.0, q.coeff_scale());
    for (int k = 0; k < 100; ++k) {
      const Complex t = testsup::random_point(rng, 1.5);
      const double mag =
          std::max({1.0, std::pow(std::abs(t), g.degree() * q.deg_x()),
                    std::pow(std::abs(t), f.degree() * q.deg_y())});
      CHECK(std::abs(q.eval(g.eval(t), f.eval(t))) <= 1e-8 * scale * mag);
    }
  }
}

TEST_CASE("preimage fibers") {
  const RootSet a = make_e1().preimages(Complex(4, 0));
  CHECK(a.total == 2);
  CHECK(multiset_match(flatten(a), {Complex(2, 0), Complex(-2, 0)}, 1e-9));

  const RootSet b = make_e2().preimages(Complex(0, 0));
  REQUIRE(b.roots.size() == 1);
  CHECK(b.roots[0].multiplicity == 3);
  CHECK(std::abs(b.roots[0].location) < 1e-9);

  const RootSet c = make_cusp().preimages(Complex(1, 0));
  CHECK(c.total == 3);
  const Complex w = std::polar(1.0, 2.0 * 3.14159265358979323846 / 3.0);
  CHECK(multiset_match(flatten(c), {Complex(1, 0), w, std::conj(w)}, 1e-9));
}

TEST_CASE("image fibers") {
  const RootSet a = make_e2().images(Complex(0, 0));
  CHECK(a.total == 2);
  CHECK(multiset_match(flatten(a), {Complex(0, 0), Complex(1, 0)}, 1e-9));

  const RootSet b = make_e1().images(Complex(3, 0));
  CHECK(b.total == 1);
  CHECK(std::abs(b.roots[0].location - Complex(9, 0)) < 1e-9);

  const RootSet c = make_cusp().images(Complex(4, 0));
  CHECK(multiset_match(flatten(c), {Complex(8, 0), Complex(-8, 0)}, 1e-9));
}

TEST_CASE("fiber multiplicities sum to the degrees") {
  Rng rng(909090);
  for (const Correspondence& c : {make_e1(), make_e2(), make_cusp(), make_cheb()}) {
    for (int k = 0; k < 200; ++k) {
      const Complex z = testsup::random_point(rng, 3.0);
      CHECK(c.preimages(z).total == c.degrees().d2);
      CHECK(c.images(z).total == c.degrees().d1);
    }
  }
}

TEST_CASE("adjoint swaps the projections") {
  const Correspondence e2 = make_e2();
  const Correspondence adj = e2.adjoint();
  CHECK(adj.degrees().d1 == 3);
  CHECK(adj.degrees().d2 == 2);

  const Correspondence back = adj.adjoint();
  CHECK(back.degrees().d1 == e2.degrees().d1);
  CHECK(back.parametrized_repr().g.approx_equal(e2.parametrized_repr().g, 0.0));

  // preimages(F, z) = images(adjoint(F), z)
  Rng rng(1311);
  for (int k = 0; k < 40; ++k) {
    const Complex z = testsup::random_point(rng, 2.0);
    CHECK(multiset_match(flatten(e2.preimages(z)), flatten(adj.images(z)), 1e-7));
  }

  const Correspondence cusp_adj = make_cusp().adjoint();
  CHECK(cusp_adj.graph().coeff(2, 0) == Complex(1, 0));   // x^2 term of x^2 - y^3
  CHECK(cusp_adj.graph().coeff(0, 3) == Complex(-1, 0));
}

TEST_CASE("composition of graphs") {
  const Correspondence e1 = make_e1();
  ComposeInfo info;
  const Correspondence sq = compose(e1, e1, &info);
  CHECK_FALSE(info.degree_dropped);
  CHECK(sq.degrees().d1 == 1);
  CHECK(sq.degrees().d2 == 4);
  // graph of z^4
  BiPoly expect(4, 1);
  expect.at(0, 1) = 1;
  expect.at(4, 0) = -1;
  CHECK((sq.graph().approx_equal(expect, 1e-9) || sq.graph().approx_equal(expect.scaled(-1), 1e-9)));

  const Correspondence e2 = make_e2();
  const Correspondence e2e2 = compose(e2, e2, &info);
  CHECK_FALSE(info.degree_dropped);
  CHECK(e2e2.degrees().d1 == 4);
  CHECK(e2e2.degrees().d2 == 9);
}

TEST_CASE("two-step images match the composed correspondence") {
  const Correspondence e2 = make_e2();
  const Correspondence e2e2 = compose(e2, e2);
  Rng rng(7321);
  for (int k = 0; k < 15; ++k) {
    const Complex x = testsup::random_point(rng, 2.0);
    std::vector<Complex> chained;
    for (const Root& mid : e2.images(x).roots)
      for (const Root& out : e2.images(mid.location).roots)
        for (int m = 0; m < mid.multiplicity * out.multiplicity; ++m)
          chained.push_back(out.location);
    CAPTURE(k);
    CHECK(multiset_match(flatten(e2e2.images(x)), chained, 1e-5));
  }
}

TEST_CASE("composing with the adjoint contains the identity branch") {
  const Correspondence e1 = make_e1();
  const Correspondence round_trip = compose(e1, e1.adjoint());
  Rng rng(99812);
  for (int k = 0; k < 25; ++k) {
    const Complex w = testsup::random_point(rng, 2.0);
    const double mag = std::pow(1.0 + std::abs(w), round_trip.graph().deg_x() + 1);
    CHECK(std::abs(round_trip.graph().eval(w, w)) <= 1e-8 * mag);
  }
}

TEST_CASE("perron-frobenius averages over the fiber") {
  const Correspondence e1 = make_e1();
  auto one = [](Complex) { return Complex(1, 0); };
  auto re = [](Complex z) { return Complex(z.real(), 0); };
  auto abs2 = [](Complex z) { return Complex(std::norm(z), 0); };

  Rng rng(5150);
  for (int k = 0; k < 20; ++k)
    CHECK(std::abs(e1.perron_frobenius(one, testsup::random_point(rng, 2.0)) - Complex(1, 0)) <
          1e-12);
  CHECK(std::abs(e1.perron_frobenius(re, Complex(1, 0))) < 1e-12);
  CHECK(std::abs(make_e2().perron_frobenius(abs2, Complex(0, 0))) < 1e-12);
}

TEST_CASE("growth exponent") {
  const LojasiewiczEstimate a = make_e2().lojasiewicz();
  CHECK(a.exact);
  CHECK(a.value == doctest::Approx(1.5));

  const LojasiewiczEstimate b = make_e1().lojasiewicz();
  CHECK(b.exact);
  CHECK(b.value == doctest::Approx(2.0));

  const LojasiewiczEstimate c = make_cusp().lojasiewicz();
  CHECK_FALSE(c.exact);
  CHECK(std::abs(c.value - 1.5) < 0.05);
  CHECK(c.fit_residual < 0.05);
}

TEST_CASE("critical values") {
  const RootSet a = make_e1().critical_values();
  REQUIRE(a.roots.size() == 1);
  CHECK(std::abs(a.roots[0].location) < 1e-9);

  const RootSet b = make_e2().critical_values();
  REQUIRE(b.roots.size() == 2);
  CHECK(multiset_match(flatten(b), {Complex(0, 0), Complex(0.125, 0)}, 1e-9));

  bool has_plus = false, has_minus = false;
  for (const Root& r : make_cheb().critical_values().roots) {
    if (std::abs(r.location - Complex(1, 0)) < 1e-8) has_plus = true;
    if (std::abs(r.location - Complex(-1, 0)) < 1e-8) has_minus = true;
  }
  CHECK(has_plus);
  CHECK(has_minus);

  // implicit route on the cusp: both discriminants point at the origin
  const RootSet d = make_cusp().critical_values();
  bool has_zero = false;
  for (const Root& r : d.roots)
    if (std::abs(r.location) < 1e-8) has_zero = true;
  CHECK(has_zero);
}

TEST_CASE("improper graphs are rejected") {
  BiPoly q(1, 1);  // x y - 1: branch to infinity over the origin
  q.at(1, 1) = 1;
  q.at(0, 0) = -1;
  CHECK_THROWS_AS(Correspondence::implicit_graph(std::move(q)), Error);
}

TEST_CASE("degenerate implicit fibers raise") {
  // Q = x^2 y - 1 + y: proper in neither sense; but fiber in x over y = 0 has
  // leading coefficient y -> degenerate specialization
  BiPoly q(2, 1);
  q.at(2, 1) = 1;
  q.at(0, 0) = -1;
  q.at(0, 1) = 1;
  // skip the properness gate; exercise solve_fiber via a direct specialization
  CHECK(q.specialize_y(Complex(0, 0)).degree() < 2);
}

TEST_CASE("escape radius is reported") {
  CHECK(make_e1().escape_radius() >= 10.0);
  CHECK(make_e2().escape_radius() >= 10.0);
}
