#include "corrdyn/exceptional.hpp"

#include <cmath>

#include "corrdyn/periodic.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace corrdyn;
using testsup::make_cheb;
using testsup::make_e1;
using testsup::make_e2;

TEST_CASE("the two-branch correspondence has the origin as its invariant set") {
  const ExceptionalReport rep = find_e0(make_e2());
  REQUIRE(rep.e0.size() == 1);
  CHECK(std::abs(rep.e0[0]) < 1e-9);
  CHECK(rep.certified);
}

TEST_CASE("the square map keeps only the origin") {
  const ExceptionalReport rep = find_e0(make_e1());
  REQUIRE(rep.e0.size() == 1);
  CHECK(std::abs(rep.e0[0]) < 1e-9);
  CHECK(rep.certified);
}

TEST_CASE("the chebyshev pair has no invariant finite set") {
  const ExceptionalReport rep = find_e0(make_cheb());
  CHECK(rep.e0.empty());
}

TEST_CASE("detection is stable under generic extra seeds") {
  const ExceptionalReport base = find_e0(make_e2());
  const ExceptionalReport extra = find_e0(make_e2(), 16, {Complex(1.37, 0.41)});
  REQUIRE(base.e0.size() == extra.e0.size());
  for (std::size_t i = 0; i < base.e0.size(); ++i)
    CHECK(std::abs(base.e0[i] - extra.e0[i]) < 1e-9);
}

TEST_CASE("no seed point outside the set can be added without breaking closure") {
  const Correspondence e2 = make_e2();
  const ExceptionalReport rep = find_e0(e2);
  // candidate pool: fixed points and critical values
  std::vector<Complex> candidates;
  for (const PeriodicPoint& p : fixed_points(e2)) candidates.push_back(p.location);
  for (const Root& r : e2.critical_values().roots) candidates.push_back(r.location);
  for (const Complex& cand : candidates) {
    bool inside = false;
    for (const Complex& e : rep.e0) inside = inside || std::abs(cand - e) < 1e-7;
    if (inside) continue;
    // the enlarged set must fail closure at some member
    std::vector<Complex> enlarged = rep.e0;
    enlarged.push_back(cand);
    bool closed = true;
    for (const Complex& e : enlarged) {
      for (const Root& r : e2.preimages(e).roots) {
        bool found = false;
        for (const Complex& s : enlarged) found = found || std::abs(s - r.location) < 1e-6;
        closed = closed && found;
      }
    }
    CHECK_FALSE(closed);
  }
}

TEST_CASE("certified sets trap one pullback of their uniform measure") {
  const Correspondence e2 = make_e2();
  const ExceptionalReport rep = find_e0(e2);
  REQUIRE(rep.certified);
  std::vector<Atom> atoms;
  for (const Complex& e : rep.e0) atoms.push_back({e, 1.0 / rep.e0.size()});
  const PointMeasure pulled = pullback_step(e2, PointMeasure(std::move(atoms)), 1 << 20, 9);
  for (const Atom& a : pulled.atoms()) {
    double nearest = 1e300;
    for (const Complex& e : rep.e0) nearest = std::min(nearest, std::abs(a.location - e));
    CHECK(nearest < 1e-7);
  }
}

TEST_CASE("forward orbit of the invariant set") {
  const Correspondence e2 = make_e2();
  const auto one_step = orbit(e2, {Complex(0, 0)}, 1);
  REQUIRE(one_step.size() == 2);
  CHECK(std::abs(one_step[0]) < 1e-9);
  CHECK(std::abs(one_step[1] - Complex(1, 0)) < 1e-9);

  const auto three = orbit(e2, {Complex(0, 0)}, 3);
  CHECK(three.size() >= 4);
  // frozen census of the truncated orbit: 0, 1, 1 +- sqrt 5, and their images
  const double s5 = std::sqrt(5.0);
  bool has_plus = false, has_minus = false;
  for (const Complex& p : three) {
    if (std::abs(p - Complex(1 + s5, 0)) < 1e-8) has_plus = true;
    if (std::abs(p - Complex(1 - s5, 0)) < 1e-8) has_minus = true;
  }
  CHECK(has_plus);
  CHECK(has_minus);

  CHECK(orbit(e2, {}, 3).empty());
}

TEST_CASE("preimage distributions flag the invariant point and clear a generic one") {
  SamplerConfig cfg;
  cfg.seed = 31415;
  cfg.n_samples = 50000;
  cfg.start_point = Complex(10, 0);
  const PointMeasure mu = brolin_sample(make_e2(), cfg);

  const ExceptionalTestResult bad = exceptional_test(make_e2(), Complex(0, 0), 8, mu);
  CHECK(bad.flagged);

  const ExceptionalTestResult good = exceptional_test(make_e2(), Complex(10, 0), 8, mu);
  CHECK_FALSE(good.flagged);
  CHECK(good.distance <= 2.0 * good.baseline);
}
