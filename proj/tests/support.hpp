#pragma once

// Shared fixtures and oracle helpers for the test suites.

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "corrdyn/correspondence.hpp"
#include "corrdyn/polycore.hpp"
#include "corrdyn/rng.hpp"

namespace testsup {

using corrdyn::Complex;
using corrdyn::UniPoly;

inline UniPoly poly(std::initializer_list<double> re_coeffs) {
  std::vector<Complex> c;
  for (double v : re_coeffs) c.emplace_back(v, 0.0);
  return UniPoly(std::move(c));
}

// Flattens a RootSet into one entry per multiplicity unit.
inline std::vector<Complex> flatten(const corrdyn::RootSet& rs) {
  std::vector<Complex> out;
  for (const auto& r : rs.roots)
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.location);
  return out;
}

// Greedy multiset match within tol; true when both lists pair off completely.
inline bool multiset_match(std::vector<Complex> a, std::vector<Complex> b, double tol) {
  if (a.size() != b.size()) return false;
  for (const Complex& x : a) {
    double best = tol;
    std::size_t best_i = b.size();
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double d = std::abs(x - b[i]);
      if (d <= best) {
        best = d;
        best_i = i;
      }
    }
    if (best_i == b.size()) return false;
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(best_i));
  }
  return b.empty();
}

inline UniPoly random_poly(corrdyn::Rng& rng, int max_degree, int min_degree = 1) {
  const int deg = min_degree + static_cast<int>(rng.index(static_cast<std::size_t>(max_degree - min_degree + 1)));
  std::vector<Complex> c(static_cast<std::size_t>(deg) + 1);
  for (auto& v : c) v = Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
  if (std::abs(c.back()) < 0.1) c.back() += Complex(0.5, 0.5);
  return UniPoly(std::move(c));
}

inline Complex random_point(corrdyn::Rng& rng, double radius = 2.0) {
  return Complex(rng.uniform(-radius, radius), rng.uniform(-radius, radius));
}

// the recurring cast: z^2 as a correspondence, the (z^2 - z, z^3) pair, the
// cuspidal implicit curve, and the Chebyshev pair
inline corrdyn::Correspondence make_e1() {
  return corrdyn::Correspondence::parametrized(poly({0, 1}), poly({0, 0, 1}), "E1");
}
inline corrdyn::Correspondence make_e2() {
  return corrdyn::Correspondence::parametrized(poly({0, -1, 1}), poly({0, 0, 0, 1}), "E2");
}
inline corrdyn::Correspondence make_cusp() {
  corrdyn::BiPoly q(3, 2);  // y^2 - x^3
  q.at(0, 2) = 1;
  q.at(3, 0) = -1;
  return corrdyn::Correspondence::implicit_graph(std::move(q), "cusp");
}
inline corrdyn::Correspondence make_cheb() {
  return corrdyn::Correspondence::parametrized(UniPoly::chebyshev(2), UniPoly::chebyshev(6),
                                               "cheb26");
}

}  // namespace testsup
