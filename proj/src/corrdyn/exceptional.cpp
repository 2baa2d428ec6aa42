#include "corrdyn/exceptional.hpp"

#include <algorithm>
#include <cmath>

#include "corrdyn/periodic.hpp"

namespace corrdyn {

namespace {

double cloud_scale(const std::vector<Complex>& pts) {
  double m = 0.0;
  for (const Complex& p : pts) m = std::max(m, std::abs(p));
  return m;
}

bool contains(const std::vector<Complex>& set, Complex z, double radius) {
  for (const Complex& s : set)
    if (std::abs(s - z) <= radius) return true;
  return false;
}

std::vector<Complex> dedup(std::vector<Complex> pts) {
  const double radius = merge_radius(cloud_scale(pts));
  std::vector<Complex> out;
  for (const Complex& p : pts)
    if (!contains(out, p, radius)) out.push_back(p);
  return out;
}

}  // namespace

ExceptionalReport find_e0(const Correspondence& F, int max_size,
                          const std::vector<Complex>& extra_seeds) {
  std::vector<Complex> seeds = extra_seeds;
  for (const PeriodicPoint& p : fixed_points(F)) seeds.push_back(p.location);
  for (const Root& r : F.critical_values().roots) seeds.push_back(r.location);

  // two preimage layers of the base candidates
  std::vector<Complex> frontier = seeds;
  for (int layer = 0; layer < 2; ++layer) {
    std::vector<Complex> next;
    for (const Complex& s : frontier) {
      try {
        for (const Root& r : F.preimages(s).roots) next.push_back(r.location);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::DegenerateFiber) throw;
      }
    }
    seeds.insert(seeds.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  seeds = dedup(std::move(seeds));

  // drop points whose full fiber leaves the set, until stable
  const double radius = merge_radius(cloud_scale(seeds));
  std::vector<Complex> current = seeds;
  bool changed = true;
  while (changed && !current.empty()) {
    changed = false;
    std::vector<Complex> kept;
    for (const Complex& e : current) {
      bool closed = true;
      try {
        for (const Root& r : F.preimages(e).roots)
          if (!contains(current, r.location, radius)) {
            closed = false;
            break;
          }
      } catch (const Error& err) {
        if (err.code() != ErrorCode::DegenerateFiber) throw;
        closed = false;
      }
      if (closed)
        kept.push_back(e);
      else
        changed = true;
    }
    current = std::move(kept);
  }

  ExceptionalReport report;
  report.e0 = std::move(current);
  std::sort(report.e0.begin(), report.e0.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });

  report.certified = static_cast<int>(report.e0.size()) <= max_size;
  for (const Complex& e : report.e0) {
    if (!report.certified) break;
    try {
      const RootSet fiber = F.preimages(e);
      if (fiber.total != F.degrees().d2) report.certified = false;
      for (const Root& r : fiber.roots)
        if (!contains(report.e0, r.location, radius)) report.certified = false;
    } catch (const Error&) {
      report.certified = false;
    }
  }
  if (static_cast<int>(report.e0.size()) > max_size)
    report.e0.resize(static_cast<std::size_t>(max_size));
  return report;
}

std::vector<Complex> orbit(const Correspondence& F, const std::vector<Complex>& e0, int n) {
  std::vector<Complex> points = dedup(e0);
  std::vector<Complex> frontier = points;
  for (int k = 0; k < n; ++k) {
    std::vector<Complex> next;
    for (const Complex& p : frontier)
      for (const Root& r : F.images(p).roots) next.push_back(r.location);
    next = dedup(std::move(next));
    const double radius = merge_radius(std::max(cloud_scale(points), cloud_scale(next)));
    std::vector<Complex> fresh;
    for (const Complex& p : next)
      if (!contains(points, p, radius)) fresh.push_back(p);
    points.insert(points.end(), fresh.begin(), fresh.end());
    frontier = std::move(fresh);
    if (points.size() > 10000)
      raise(ErrorCode::GuardExceeded, "orbit exceeded 1e4 points");
  }
  std::sort(points.begin(), points.end(), [](Complex a, Complex b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return points;
}

ExceptionalTestResult exceptional_test(const Correspondence& F, Complex z, int n,
                                       const PointMeasure& reference, Complex control_point,
                                       int n_grid) {
  const BBox box = bbox_of(reference);
  ExceptionalTestResult out;
  out.distance = measure_distance(preimage_tree(F, z, n), reference, box, n_grid).total;
  out.baseline = measure_distance(preimage_tree(F, control_point, n), reference, box, n_grid).total;
  out.flagged = out.distance > 3.0 * out.baseline;
  return out;
}

}  // namespace corrdyn
