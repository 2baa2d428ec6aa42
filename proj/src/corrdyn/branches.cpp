#include "corrdyn/branches.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "corrdyn/parallel.hpp"

namespace corrdyn {

namespace {

constexpr int kRefineBudget = 1 << 14;

struct FiberPick {
  Complex nearest;
  double gap;  // min distance between distinct fiber roots (inf when single)
};

// Nearest fiber root to w, with ambiguity checks. Throws BranchCollision on a
// multiple root at the pick or when the two closest roots have merged within
// the collision radius.
FiberPick pick_branch(const Correspondence& F, Complex target, Complex w) {
  const RootSet fiber = F.preimages(target);
  const Root* best = &fiber.roots.front();
  double best_d = std::abs(best->location - w);
  for (const Root& r : fiber.roots) {
    const double d = std::abs(r.location - w);
    if (d < best_d) {
      best_d = d;
      best = &r;
    }
  }
  double spread = 0.0, gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < fiber.roots.size(); ++i)
    for (std::size_t j = i + 1; j < fiber.roots.size(); ++j) {
      const double d = std::abs(fiber.roots[i].location - fiber.roots[j].location);
      spread = std::max(spread, d);
      gap = std::min(gap, d);
    }
  if (best->multiplicity > 1)
    raise(ErrorCode::BranchCollision, "continuation hit a multiple fiber root");
  const double delta_c = 1e-3 * spread;
  if (fiber.roots.size() >= 2 && gap <= delta_c)
    raise(ErrorCode::BranchCollision, "two fiber roots inside the collision radius");
  return {best->location, gap};
}

class Continuer {
 public:
  explicit Continuer(const Correspondence& f) : f_(f) {}

  // One path step from -> to; refines by bisection until the branch moves
  // less than half the local root gap.
  Complex step(Complex from, Complex to, Complex w, int depth = 0) {
    if (--budget_ < 0)
      raise(ErrorCode::BranchCollision, "refinement budget exhausted along the path");
    const FiberPick pick = pick_branch(f_, to, w);
    const double moved = std::abs(pick.nearest - w);
    if (moved < 0.5 * pick.gap || depth >= 18) {
      if (moved >= 0.5 * pick.gap)
        raise(ErrorCode::BranchCollision, "branch jump did not resolve under refinement");
      return pick.nearest;
    }
    const Complex mid = 0.5 * (from + to);
    const Complex wm = step(from, mid, w, depth + 1);
    return step(mid, to, wm, depth + 1);
  }

 private:
  const Correspondence& f_;
  int budget_ = kRefineBudget;
};

}  // namespace

std::vector<Complex> continue_preimage(const Correspondence& F, const std::vector<Complex>& path,
                                       Complex w0) {
  if (path.empty()) raise(ErrorCode::InvalidArgument, "empty continuation path");
  // w0 must sit on the starting fiber
  const RootSet start = F.preimages(path.front());
  double d0 = std::numeric_limits<double>::infinity();
  for (const Root& r : start.roots) d0 = std::min(d0, std::abs(r.location - w0));
  if (d0 > 1e-6 * (1.0 + std::abs(w0)))
    raise(ErrorCode::InvalidArgument, "w0 is not a preimage of the path start");

  Continuer cont(F);
  std::vector<Complex> out{w0};
  Complex w = w0;
  for (std::size_t k = 0; k + 1 < path.size(); ++k) {
    w = cont.step(path[k], path[k + 1], w);
    out.push_back(w);
  }
  return out;
}

std::vector<DiameterRow> branch_diameter_stats(const Correspondence& F, Complex z, double r,
                                               int m_max, int n_boundary) {
  if (r <= 0.0 || n_boundary < 4 || m_max < 0)
    raise(ErrorCode::InvalidArgument, "need r > 0, n_boundary >= 4, m_max >= 0");
  for (const Root& cv : F.critical_values().roots)
    if (std::abs(cv.location - z) <= r)
      raise(ErrorCode::BadBasePoint, "base disk touches a critical value");

  std::vector<Complex> circle(static_cast<std::size_t>(n_boundary));
  for (int k = 0; k < n_boundary; ++k)
    circle[static_cast<std::size_t>(k)] =
        z + r * std::polar(1.0, 2.0 * std::numbers::pi * k / n_boundary);

  auto diameter_of = [](const std::vector<Complex>& pts) {
    double d = 0.0;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) d = std::max(d, std::abs(pts[i] - pts[j]));
    return d;
  };

  BranchChain root;
  root.base = z;
  root.order = 0;
  root.boundary_images = circle;
  root.diameter = diameter_of(circle);

  std::vector<DiameterRow> rows;
  auto record = [&rows](int m, const std::vector<BranchChain>& gen) {
    DiameterRow row;
    row.m = m;
    std::vector<double> diams;
    for (const BranchChain& b : gen)
      if (b.alive) diams.push_back(b.diameter);
    row.count_alive = static_cast<long long>(diams.size());
    if (!diams.empty()) {
      std::sort(diams.begin(), diams.end());
      auto at = [&diams](double q) {
        const std::size_t i =
            std::min(diams.size() - 1, static_cast<std::size_t>(q * diams.size()));
        return diams[i];
      };
      row.median_diameter = at(0.5);
      row.q10 = at(0.1);
      row.q90 = at(0.9);
    }
    rows.push_back(row);
  };

  std::vector<BranchChain> generation{root};
  record(0, generation);

  for (int m = 1; m <= m_max; ++m) {
    std::vector<std::vector<BranchChain>> spawned(generation.size());
    parallel_for(generation.size(), [&](std::size_t i) {
      const BranchChain& parent = generation[i];
      if (!parent.alive) return;
      const RootSet fiber = F.preimages(parent.base);
      for (const Root& child_root : fiber.roots) {
        BranchChain child;
        child.order = m;
        child.base = child_root.location;
        child.alive = child_root.multiplicity == 1;
        if (child.alive) {
          try {
            Continuer cont(F);
            // radial leg to the first boundary point, then around the loop
            Complex w = cont.step(parent.base, parent.boundary_images.front(), child.base);
            child.boundary_images.push_back(w);
            for (std::size_t k = 1; k < parent.boundary_images.size(); ++k) {
              w = cont.step(parent.boundary_images[k - 1], parent.boundary_images[k], w);
              child.boundary_images.push_back(w);
            }
            // closing the loop must return to the starting sheet
            const Complex back = cont.step(parent.boundary_images.back(),
                                           parent.boundary_images.front(), w);
            if (std::abs(back - child.boundary_images.front()) >
                1e-6 * (1.0 + std::abs(back)))
              raise(ErrorCode::BranchCollision, "monodromy around the boundary loop");
            child.diameter = diameter_of(child.boundary_images);
          } catch (const Error& e) {
            if (e.code() != ErrorCode::BranchCollision && e.code() != ErrorCode::DegenerateFiber)
              throw;
            child.alive = false;
            child.boundary_images.clear();
          }
        }
        spawned[i].push_back(std::move(child));
      }
    });
    std::vector<BranchChain> next;
    for (auto& group : spawned)
      for (BranchChain& b : group)
        if (b.alive) next.push_back(std::move(b));
    record(m, next);
    generation = std::move(next);
    if (generation.empty()) break;
  }
  return rows;
}

double diameter_slope(const std::vector<DiameterRow>& rows, int skip) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const DiameterRow& row : rows) {
    if (row.m < skip || row.count_alive == 0 || row.median_diameter <= 0.0) continue;
    const double x = row.m, y = std::log(row.median_diameter);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) raise(ErrorCode::FitUnstable, "not enough rows for a diameter slope");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace corrdyn
