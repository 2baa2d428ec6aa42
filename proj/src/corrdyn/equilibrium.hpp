#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "corrdyn/correspondence.hpp"

namespace corrdyn {

struct Atom {
  Complex location;
  double weight = 0.0;  // > 0
};

// Weighted atomic measure on the plane.
class PointMeasure {
 public:
  PointMeasure() = default;
  explicit PointMeasure(std::vector<Atom> atoms);
  static PointMeasure dirac(Complex z, double mass = 1.0);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  double total_mass() const noexcept { return total_mass_; }
  bool is_probability(double tol = 1e-9) const {
    return std::abs(total_mass_ - 1.0) <= tol;
  }
  PointMeasure normalized() const;

 private:
  std::vector<Atom> atoms_;
  double total_mass_ = 0.0;
};

// Merges atoms within radius (multiplicity-weighted centers, summed weights).
std::vector<Atom> merge_atoms(std::vector<Atom> atoms, double radius);

// Test-function dictionary: weighted means of z^p conj(z)^q for p + q <= 4.
struct MomentVector {
  Complex m[5][5] = {};  // valid for p + q <= 4

  static MomentVector of(const PointMeasure& mu);
  // max |a - b| over the dictionary
  static double sup_difference(const MomentVector& a, const MomentVector& b);
};

struct BBox {
  double x_min = -2, x_max = 2, y_min = -2, y_max = 2;
};

// Axis-aligned box around the atoms, inflated by margin (relative).
BBox bbox_of(const PointMeasure& mu, double margin = 0.1);

struct GridDensity {
  BBox bbox;
  int nx = 0, ny = 0;
  std::vector<double> mass;  // row-major, index iy * nx + ix
  double overflow = 0.0;     // mass landing outside the box

  double cell(int ix, int iy) const { return mass[static_cast<std::size_t>(iy) * nx + ix]; }
};

GridDensity grid_density(const PointMeasure& mu, const BBox& bbox, int nx, int ny);

struct SamplerConfig {
  std::uint64_t seed = 0;
  int n_samples = 10000;
  int burn_in = 50;
  std::size_t atom_cap = 200000;
  Complex start_point = Complex(0.5, 0.5);
};

// One normalized pullback d2^{-1} F^* mu: every atom is replaced by its
// preimage fiber with multiplicity-proportional weights. Total mass is
// preserved exactly; when the atom count exceeds atom_cap the result is
// reduced by seeded multinomial resampling to atom_cap equal-weight atoms.
PointMeasure pullback_step(const Correspondence& F, const PointMeasure& mu, std::size_t atom_cap,
                           std::uint64_t seed);

// Exact normalized preimage distribution of order n started from the Dirac
// mass at z0; coincident atoms are merged level by level. Guard d2^n <= 1e6.
PointMeasure preimage_tree(const Correspondence& F, Complex z0, int n);

// Single-path backward random orbit: each step picks a preimage with
// probability proportional to multiplicity. The first burn_in points are
// dropped; the result is n_samples equal-weight atoms, deterministic in the
// seed. Degenerate fibers restart the orbit from a perturbed start point (at
// most 100 restarts). restart_count, when given, receives the number used.
PointMeasure brolin_sample(const Correspondence& F, const SamplerConfig& cfg,
                           int* restart_count = nullptr);

MomentVector moments(const PointMeasure& mu);

struct DistanceBreakdown {
  double total = 0.0;      // binned_l1 + moment_sup
  double binned_l1 = 0.0;  // half L1 between grid densities (overflow included)
  double moment_sup = 0.0;
};

// Weak-topology proxy distance: half the L1 gap between binned densities on a
// common box plus the sup difference of the moment dictionaries. Mass
// deficits show up through the binned term.
DistanceBreakdown measure_distance(const PointMeasure& a, const PointMeasure& b, const BBox& bbox,
                                   int n_grid);

// Correlation functional of the n-th Perron-Frobenius iterate over the
// measure estimate: sum w (L^n phi)(z) psi(z) - (sum w L^n phi)(sum w psi).
// Guard d2^n * atom count <= 1e7.
double mixing_correlation(const Correspondence& F, const PointMeasure& mu,
                          const std::function<double(Complex)>& phi,
                          const std::function<double(Complex)>& psi, int n);

// Distance between one normalized pullback of mu under G and mu itself,
// measured on a box derived from mu. Small when G preserves mu.
double commuting_check(const Correspondence& F, const Correspondence& G, const PointMeasure& mu,
                       std::uint64_t seed, int n_grid = 64);

}  // namespace corrdyn
