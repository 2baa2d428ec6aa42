#include "corrdyn/branches.hpp"

#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"

using namespace corrdyn;
using testsup::make_e1;
using testsup::make_e2;

namespace {

std::vector<Complex> circle_path(Complex center, double r, int n, bool closed = true) {
  std::vector<Complex> path;
  for (int k = 0; k < n; ++k)
    path.push_back(center + r * std::polar(1.0, 2.0 * std::numbers::pi * k / n));
  if (closed) path.push_back(path.front());
  return path;
}

}  // namespace

TEST_CASE("square-root monodromy around the origin") {
  const auto branch = continue_preimage(make_e1(), circle_path(Complex(0, 0), 1.0, 256), Complex(1, 0));
  REQUIRE(branch.size() == 257);
  CHECK(std::abs(branch.back() - Complex(-1, 0)) < 1e-8);
}

TEST_CASE("loops away from the critical value close up") {
  const auto path = circle_path(Complex(4, 0), 0.1, 64);
  // starting sheet: the preimage of 4.1 near +2
  Complex w0 = make_e1().preimages(path.front()).roots.front().location;
  if (w0.real() < 0) w0 = -w0;
  const auto branch = continue_preimage(make_e1(), path, w0);
  CHECK(std::abs(branch.back() - w0) < 1e-10);
}

TEST_CASE("continuation forward-checks as an inverse") {
  const Correspondence e2 = make_e2();
  const auto path = circle_path(Complex(2, 0), 0.3, 48);
  const Complex w0 = e2.preimages(path.front()).roots.front().location;
  const auto branch = continue_preimage(e2, path, w0);
  for (std::size_t k = 0; k < path.size(); ++k) {
    double nearest = 1e300;
    for (const Root& im : e2.images(branch[k]).roots)
      nearest = std::min(nearest, std::abs(im.location - path[k]));
    CHECK(nearest < 1e-6);
  }
}

TEST_CASE("continuation through a totally collapsed fiber dies") {
  const Correspondence e2 = make_e2();
  // straight path running into the origin, where the fiber has one triple root
  std::vector<Complex> path;
  for (int k = 0; k <= 16; ++k) path.push_back(Complex(1.0 - k / 16.0, 0));
  const Complex w0 = e2.preimages(path.front()).roots.front().location;
  CHECK_THROWS_AS(continue_preimage(e2, path, w0), Error);
}

TEST_CASE("bad starting fiber value is rejected") {
  CHECK_THROWS_AS(continue_preimage(make_e1(), circle_path(Complex(4, 0), 0.1, 16), Complex(5, 5)),
                  Error);
}

TEST_CASE("branch statistics of the square map") {
  const auto rows = branch_diameter_stats(make_e1(), Complex(4, 0), 0.1, 12, 16);
  REQUIRE(rows.size() == 13);
  CHECK(rows[0].median_diameter == doctest::Approx(0.2));
  for (const DiameterRow& row : rows) {
    CHECK(row.count_alive == (1LL << row.m));  // postcritical orbit misses the disks
    if (row.m >= 3) CHECK(row.median_diameter <= rows[static_cast<std::size_t>(row.m) - 1].median_diameter);
  }
  // the size law bounds diameters by (1/2)^{m/2} up to slack; the measured
  // contraction is the Lyapunov rate log 2, comfortably below the bound
  const double slope = diameter_slope(rows);
  const double bound = -0.5 * std::log(2.0);
  CHECK(slope <= bound * 0.75);
  CHECK(slope >= -1.5);
  CHECK(std::abs(slope + std::log(2.0)) < 0.1);
}

TEST_CASE("branch statistics of the two-branch correspondence") {
  const auto rows = branch_diameter_stats(make_e2(), Complex(2, 0), 0.05, 6, 12);
  REQUIRE(rows.size() >= 7);
  long long max_alive = 1;
  for (const DiameterRow& row : rows) {
    CHECK(row.count_alive <= max_alive);
    max_alive *= 3;
  }
  CHECK(rows[6].count_alive >= (243 * 3) / 2);  // at least half the branches survive
  const double slope = diameter_slope(rows);
  CHECK(slope <= -0.5 * std::log(1.5) + 0.25 * 0.5 * std::log(1.5));
}

TEST_CASE("base disks touching a critical value are refused") {
  // 0 is a critical value of z^2
  CHECK_THROWS_AS(branch_diameter_stats(make_e1(), Complex(0.05, 0), 0.1, 3, 8), Error);
}
