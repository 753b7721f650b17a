#pragma once

#include "cdineq/puiseux.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cdineq {

// Polynomial in x whose coefficients are series in t, lowest degree first.
using SeriesPoly = std::vector<PuiseuxSeries>;

// Exact polynomial in (x, t) over F_p: (x-degree, t-degree) -> coefficient.
struct BiPoly {
  std::uint32_t p = 0;
  std::map<std::pair<int, int>, std::uint32_t> terms;

  int x_degree() const;
  bool is_zero() const { return terms.empty(); }
  void add(int j, int k, std::int64_t c);
};

BiPoly bi_mul(const BiPoly& a, const BiPoly& b);
BiPoly bi_add(const BiPoly& a, const BiPoly& b);
BiPoly bi_neg(const BiPoly& a);
BiPoly bi_pow(const BiPoly& a, unsigned k);
std::string bi_to_string(const BiPoly& a);

SeriesPoly to_series_poly(const FieldTower& tw, const BiPoly& f);

// f = t^b * g with g free of t-content and a unit x-leading coefficient.
struct ExactPoly {
  const FieldTower* tower = nullptr;
  int b = 0;
  SeriesPoly g;
  int degree() const { return static_cast<int>(g.size()) - 1; }
  int parity() const { return degree() % 2; }
};

ExactPoly parse_and_normalize(const FieldTower& tw, const SeriesPoly& raw);

struct Segment {
  QInf slope;  // common valuation of the roots on this edge
  int length;
  bool operator==(const Segment& o) const { return slope == o.slope && length == o.length; }
};

// Edges of the Newton polygon as (root valuation, number of roots), ascending.
std::vector<Segment> newton_polygon(const SeriesPoly& g);
std::vector<Segment> newton_polygon(const ExactPoly& f);

struct Orbit {
  int n = 1;
  PuiseuxSeries rep;
  FieldElem residue;
  QInf lambda;      // n * valuation(rep - residue); inf when rep == residue exactly
  int origin = -1;  // index of the parent orbit this one was derived from (-2: adjoined root 0)
};

// The roots of an exact polynomial G that satisfy valuation > 0 (strict) or
// >= 0 (otherwise). Every level of the induction is a chart of this kind.
struct Chart {
  SeriesPoly G;
  bool strict = false;
};

struct SolveConfig {
  Rat initial{4};
  Rat cap{4096};
};

struct RootSystem {
  const FieldTower* tower = nullptr;
  int b = 0;
  std::vector<Orbit> orbits;
  Chart chart;
  Rat precision{0};  // working precision of the representatives

  int degree() const;
  int parity() const { return degree() % 2; }
  std::vector<PuiseuxSeries> conjugates(std::size_t i) const;
  // all roots, orbit by orbit, conjugates in twisting order
  std::vector<PuiseuxSeries> all_roots() const;
};

// Roots of the chart to precision at least `order`, pairwise separated and
// grouped into orbits; precision is doubled until everything certifies.
RootSystem solve_chart(const FieldTower& tw, int b, const Chart& chart, const SolveConfig& cfg, Rat order = Rat(0));
RootSystem puiseux_roots(const ExactPoly& f, const SolveConfig& cfg = {}, Rat order = Rat(0));
RootSystem refine(const RootSystem& rs, Rat order, const SolveConfig& cfg = {});

SeriesPoly materialize(const RootSystem& rs, QInf precision);
SeriesPoly materialize_orbit(const RootSystem& rs, std::size_t i, QInf precision);

// valuation of the Sylvester determinant; PrecisionExhausted if not certified
QInf resultant_valuation(const SeriesPoly& f, const SeriesPoly& g, Rat work = Rat(32));

int discriminant_valuation_direct(const ExactPoly& f);
int discriminant_valuation_direct(const RootSystem& rs, const SolveConfig& cfg = {});

// x-polynomial helpers
SeriesPoly poly_derivative(const SeriesPoly& f);
SeriesPoly taylor_shift(const SeriesPoly& f, const PuiseuxSeries& m);
PuiseuxSeries poly_eval(const SeriesPoly& f, const PuiseuxSeries& x, QInf cap = QInf::infinity());
void poly_trim(SeriesPoly& f);

// charts of the blowup at (x - a, t), content removed
SeriesPoly smooth_chart(const SeriesPoly& G, const FieldElem& a);
SeriesPoly infinity_chart(const SeriesPoly& G, const FieldElem& a, int b);

// order of vanishing of t^b * G at (x - a, t)
int multiplicity_at(const SeriesPoly& G, int b, const FieldElem& a);

std::string poly_to_string(const SeriesPoly& f);

}  // namespace cdineq
