#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>

#include "corrdyn/polycore.hpp"

namespace corrdyn {

// Generic fiber sizes of the two graph projections: preimage fibers carry d2
// points with multiplicity, image fibers d1.
struct DegreePair {
  int d1 = 0;
  int d2 = 0;
};

struct LojasiewiczEstimate {
  double value = 0.0;
  bool exact = false;         // true for the degree-ratio case
  double fit_residual = 0.0;  // RMS log-log fit residual (0 when exact)
};

struct Parametrized {
  UniPoly g;
  UniPoly f;
};

// ---------------------------------------------------------------------------
// A polynomial correspondence x -> y on the complex plane, given either by a
// parametrized graph {(g(t), f(t))} or by an implicit plane curve Q(x, y) = 0.
// Values are immutable; all operations are pure.
// ---------------------------------------------------------------------------
class Correspondence {
 public:
  // deg g >= 1, deg f >= 1
  static Correspondence parametrized(UniPoly g, UniPoly f, std::string name = "");
  // deg_x Q >= 1 and deg_y Q >= 1. Properness of both projections is checked
  // empirically by sampling fibers over large circles; rejects ImproperGraph.
  static Correspondence implicit_graph(BiPoly q, std::string name = "");

  bool is_parametrized() const noexcept { return std::holds_alternative<Parametrized>(repr_); }
  const Parametrized& parametrized_repr() const { return std::get<Parametrized>(repr_); }
  const std::string& name() const noexcept { return name_; }
  DegreePair degrees() const noexcept { return degrees_; }

  // Graph polynomial in (x, y). Parametrized: Res_t(g(t)-x, f(t)-y) scaled to
  // unit leading coefficient in x. Implicit: Q as given.
  const BiPoly& graph() const;

  // Fiber of z under the correspondence run backwards; total multiplicity d2.
  RootSet preimages(Complex z) const;
  // Forward fiber of x; total multiplicity d1.
  RootSet images(Complex x) const;

  Correspondence adjoint() const;

  LojasiewiczEstimate lojasiewicz() const;

  // Finite set of values over which regular inverse branches can fail: the
  // critical values of the backward fiber map together with the forward
  // images of the critical values of the domain projection. Multiplicity 1.
  RootSet critical_values() const;

  // d2^{-1} sum of phi over the multiplicity-weighted preimage fiber of z.
  Complex perron_frobenius(const std::function<Complex(Complex)>& phi, Complex z) const;

  // Radius beyond which sampling treats points as escaped.
  double escape_radius() const;

 private:
  Correspondence() = default;
  // Construction path for graphs already known proper (adjoints, compositions).
  static Correspondence implicit_unchecked(BiPoly q, std::string name);
  friend Correspondence compose(const Correspondence&, const Correspondence&, struct ComposeInfo*);

  std::variant<Parametrized, BiPoly> repr_;
  DegreePair degrees_;
  std::string name_;
  mutable std::shared_ptr<const BiPoly> graph_cache_;
};

struct ComposeInfo {
  int expected_d1 = 0;
  int expected_d2 = 0;
  bool degree_dropped = false;  // trimmed degrees fell below the product bound
};

// Composite correspondence outer(inner(x)); graph by fibered-product
// elimination, degrees multiply.
Correspondence compose(const Correspondence& outer, const Correspondence& inner,
                       ComposeInfo* info = nullptr);

// n-fold self-composition, n >= 1.
Correspondence graph_power(const Correspondence& f, int n, ComposeInfo* info = nullptr);

// Clustering radius used when transporting multiplicities through merges.
double merge_radius(double max_magnitude);

}  // namespace corrdyn
