#include "corrdyn/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "corrdyn/parallel.hpp"
#include "corrdyn/rng.hpp"

namespace corrdyn {

PointMeasure::PointMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {
  for (const Atom& a : atoms_) {
    if (!(a.weight > 0.0)) raise(ErrorCode::InvalidArgument, "atom weights must be positive");
    total_mass_ += a.weight;
  }
}

PointMeasure PointMeasure::dirac(Complex z, double mass) {
  return PointMeasure({Atom{z, mass}});
}

PointMeasure PointMeasure::normalized() const {
  if (!(total_mass_ > 0.0)) raise(ErrorCode::InvalidArgument, "cannot normalize an empty measure");
  std::vector<Atom> out = atoms_;
  for (Atom& a : out) a.weight /= total_mass_;
  return PointMeasure(std::move(out));
}

std::vector<Atom> merge_atoms(std::vector<Atom> atoms, double radius) {
  if (atoms.empty()) return atoms;
  std::sort(atoms.begin(), atoms.end(), [](const Atom& a, const Atom& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  std::vector<Atom> out;
  for (const Atom& a : atoms) {
    bool absorbed = false;
    // merged atoms keep ascending real parts, so only a short tail can match
    for (std::size_t k = out.size(); k-- > 0;) {
      if (a.location.real() - out[k].location.real() > radius) break;
      if (std::abs(out[k].location - a.location) <= radius) {
        const double w = out[k].weight + a.weight;
        out[k].location = (out[k].location * out[k].weight + a.location * a.weight) / w;
        out[k].weight = w;
        absorbed = true;
        break;
      }
    }
    if (!absorbed) out.push_back(a);
  }
  return out;
}

MomentVector MomentVector::of(const PointMeasure& mu) { return moments(mu); }

double MomentVector::sup_difference(const MomentVector& a, const MomentVector& b) {
  double sup = 0.0;
  for (int p = 0; p <= 4; ++p)
    for (int q = 0; p + q <= 4; ++q) sup = std::max(sup, std::abs(a.m[p][q] - b.m[p][q]));
  return sup;
}

BBox bbox_of(const PointMeasure& mu, double margin) {
  if (mu.size() == 0) return BBox{};
  double x_min = 1e300, x_max = -1e300, y_min = 1e300, y_max = -1e300;
  for (const Atom& a : mu.atoms()) {
    x_min = std::min(x_min, a.location.real());
    x_max = std::max(x_max, a.location.real());
    y_min = std::min(y_min, a.location.imag());
    y_max = std::max(y_max, a.location.imag());
  }
  const double pad_x = margin * std::max(x_max - x_min, 1e-6);
  const double pad_y = margin * std::max(y_max - y_min, 1e-6);
  return BBox{x_min - pad_x, x_max + pad_x, y_min - pad_y, y_max + pad_y};
}

GridDensity grid_density(const PointMeasure& mu, const BBox& bbox, int nx, int ny) {
  if (nx < 1 || ny < 1) raise(ErrorCode::InvalidArgument, "grid needs nx, ny >= 1");
  GridDensity g;
  g.bbox = bbox;
  g.nx = nx;
  g.ny = ny;
  g.mass.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  const double wx = (bbox.x_max - bbox.x_min) / nx;
  const double wy = (bbox.y_max - bbox.y_min) / ny;
  for (const Atom& a : mu.atoms()) {
    const int ix = static_cast<int>(std::floor((a.location.real() - bbox.x_min) / wx));
    const int iy = static_cast<int>(std::floor((a.location.imag() - bbox.y_min) / wy));
    if (ix < 0 || ix >= nx || iy < 0 || iy >= ny)
      g.overflow += a.weight;
    else
      g.mass[static_cast<std::size_t>(iy) * nx + ix] += a.weight;
  }
  return g;
}

PointMeasure pullback_step(const Correspondence& F, const PointMeasure& mu, std::size_t atom_cap,
                           std::uint64_t seed) {
  const double d2 = F.degrees().d2;
  std::vector<std::vector<Atom>> children(mu.size());
  const auto& atoms = mu.atoms();
  parallel_for(mu.size(), [&](std::size_t i) {
    const RootSet fiber = F.preimages(atoms[i].location);
    for (const Root& r : fiber.roots)
      children[i].push_back({r.location, atoms[i].weight * r.multiplicity / d2});
  });
  std::vector<Atom> flat;
  for (const auto& group : children) flat.insert(flat.end(), group.begin(), group.end());

  if (flat.size() > atom_cap && atom_cap > 0) {
    Rng rng(seed);
    std::vector<double> weights(flat.size());
    for (std::size_t i = 0; i < flat.size(); ++i) weights[i] = flat[i].weight;
    const double w_each = mu.total_mass() / static_cast<double>(atom_cap);
    std::vector<Atom> sampled;
    sampled.reserve(atom_cap);
    for (std::size_t k = 0; k < atom_cap; ++k)
      sampled.push_back({flat[rng.categorical(weights)].location, w_each});
    flat = std::move(sampled);
  }
  return PointMeasure(std::move(flat));
}

PointMeasure preimage_tree(const Correspondence& F, Complex z0, int n) {
  if (n < 0) raise(ErrorCode::InvalidArgument, "tree order must be >= 0");
  const double d2 = F.degrees().d2;
  if (std::pow(d2, n) > 1e6) raise(ErrorCode::TreeTooLarge, "d2^n exceeds 1e6 atoms");

  std::vector<Atom> level{Atom{z0, 1.0}};
  for (int k = 0; k < n; ++k) {
    std::vector<std::vector<Atom>> children(level.size());
    parallel_for(level.size(), [&](std::size_t i) {
      const RootSet fiber = F.preimages(level[i].location);
      for (const Root& r : fiber.roots)
        children[i].push_back({r.location, level[i].weight * r.multiplicity / d2});
    });
    std::vector<Atom> next;
    for (const auto& group : children) next.insert(next.end(), group.begin(), group.end());
    double max_mag = 0.0;
    for (const Atom& a : next) max_mag = std::max(max_mag, std::abs(a.location));
    level = merge_atoms(std::move(next), merge_radius(max_mag));
  }
  return PointMeasure(std::move(level));
}

PointMeasure brolin_sample(const Correspondence& F, const SamplerConfig& cfg, int* restart_count) {
  if (cfg.n_samples < 1) raise(ErrorCode::InvalidArgument, "n_samples must be >= 1");
  Rng rng(cfg.seed);
  Complex z = cfg.start_point;
  int restarts = 0;
  std::vector<Atom> atoms;
  atoms.reserve(static_cast<std::size_t>(cfg.n_samples));
  const double w = 1.0 / cfg.n_samples;

  int produced = 0;
  int step = 0;
  std::vector<double> weights;
  while (produced < cfg.n_samples) {
    try {
      const RootSet fiber = F.preimages(z);
      weights.clear();
      for (const Root& r : fiber.roots) weights.push_back(static_cast<double>(r.multiplicity));
      z = fiber.roots[rng.categorical(weights)].location;
      if (++step > cfg.burn_in) {
        atoms.push_back({z, w});
        ++produced;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DegenerateFiber) throw;
      if (++restarts > 100) throw;
      const double r = 1e-3 * (1.0 + std::abs(cfg.start_point));
      z = cfg.start_point + Complex(rng.uniform(-r, r), rng.uniform(-r, r));
      step = 0;
    }
  }
  if (restart_count) *restart_count = restarts;
  return PointMeasure(std::move(atoms));
}

MomentVector moments(const PointMeasure& mu) {
  if (!(mu.total_mass() > 0.0)) raise(ErrorCode::InvalidArgument, "moments of an empty measure");
  MomentVector mv;
  for (const Atom& a : mu.atoms()) {
    Complex zp(1);
    for (int p = 0; p <= 4; ++p) {
      Complex zpq = zp;
      for (int q = 0; p + q <= 4; ++q) {
        mv.m[p][q] += a.weight * zpq;
        zpq *= std::conj(a.location);
      }
      zp *= a.location;
    }
  }
  for (int p = 0; p <= 4; ++p)
    for (int q = 0; p + q <= 4; ++q) mv.m[p][q] /= mu.total_mass();
  return mv;
}

DistanceBreakdown measure_distance(const PointMeasure& a, const PointMeasure& b, const BBox& bbox,
                                   int n_grid) {
  const GridDensity ga = grid_density(a, bbox, n_grid, n_grid);
  const GridDensity gb = grid_density(b, bbox, n_grid, n_grid);
  DistanceBreakdown d;
  for (std::size_t i = 0; i < ga.mass.size(); ++i) d.binned_l1 += std::abs(ga.mass[i] - gb.mass[i]);
  d.binned_l1 += std::abs(ga.overflow - gb.overflow);
  d.binned_l1 *= 0.5;
  d.moment_sup = MomentVector::sup_difference(moments(a), moments(b));
  d.total = d.binned_l1 + d.moment_sup;
  return d;
}

namespace {

double lambda_iterate(const Correspondence& F, const std::function<double(Complex)>& phi,
                      Complex z, int n) {
  if (n == 0) return phi(z);
  const RootSet fiber = F.preimages(z);
  double acc = 0.0;
  for (const Root& r : fiber.roots)
    acc += r.multiplicity * lambda_iterate(F, phi, r.location, n - 1);
  return acc / F.degrees().d2;
}

}  // namespace

double mixing_correlation(const Correspondence& F, const PointMeasure& mu,
                          const std::function<double(Complex)>& phi,
                          const std::function<double(Complex)>& psi, int n) {
  if (n < 0) raise(ErrorCode::InvalidArgument, "mixing order must be >= 0");
  if (std::pow(static_cast<double>(F.degrees().d2), n) * static_cast<double>(mu.size()) > 1e7)
    raise(ErrorCode::GuardExceeded, "d2^n * atom count exceeds 1e7");

  const auto& atoms = mu.atoms();
  std::vector<double> lam(mu.size());
  parallel_for(mu.size(), [&](std::size_t i) {
    lam[i] = lambda_iterate(F, phi, atoms[i].location, n);
  });
  double cross = 0.0, mean_phi = 0.0, mean_psi = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double p = psi(atoms[i].location);
    cross += atoms[i].weight * lam[i] * p;
    mean_phi += atoms[i].weight * lam[i];
    mean_psi += atoms[i].weight * p;
  }
  return cross - mean_phi * mean_psi;
}

double commuting_check(const Correspondence& /*F*/, const Correspondence& G,
                       const PointMeasure& mu, std::uint64_t seed, int n_grid) {
  const PointMeasure pulled = pullback_step(G, mu, mu.size(), seed);
  return measure_distance(pulled, mu, bbox_of(mu), n_grid).total;
}

}  // namespace corrdyn
