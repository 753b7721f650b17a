#pragma once

#include "cdineq/newton.hpp"
#include "cdineq/tree.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cdineq {

// A point of specialization of the roots: a residue, or infinity.
struct ClusterPoint {
  bool at_infinity = false;
  FieldElem residue;
  std::vector<int> less;  // orbits with lambda/n < 1
  std::vector<int> geq;   // orbits with lambda/n >= 1 (including lambda = inf)
  int wt_tilde = 0;
  int wt = 0;
  bool bad = false;
  int b_P = 0;
  int deg_inf = 0;  // degree of the infinity replacement
  int deg_sm = 0;   // degree of the smooth replacement
  int d_nod = 0;
  int d_sm = 0;

  std::string label() const;
};

std::vector<ClusterPoint> classify(const RootSystem& rs);

// The replacement systems at a finite bad point. New orbits carry the index
// of the parent orbit they come from in `origin` (-2 for the adjoined 0).
RootSystem replace_smooth(const RootSystem& rs, const ClusterPoint& P, const SolveConfig& cfg = {});
RootSystem replace_infinity(const RootSystem& rs, const ClusterPoint& P, const SolveConfig& cfg = {});

// Roots of the inversion branch of one orbit with lambda/n < 1, obtained by
// swapping the roles of x and t; all conjugates, as series in the new
// parameter.
std::vector<PuiseuxSeries> derived_infinity_roots(const RootSystem& rs, std::size_t orbit, const FieldElem& a);

// Trees the replacement systems must reproduce, assembled from the parent tree.
MetricTree expected_smooth_tree(const RootSystem& rs, const ClusterPoint& P);
MetricTree expected_infinity_tree(const RootSystem& rs, const ClusterPoint& P);

struct StepTerms {
  std::int64_t lhs = 0;  // conductor change
  std::int64_t rhs = 0;  // discriminant change
  std::vector<bool> point_equal;  // per bad point, wt in {2, 3}
  bool equal = false;
};

StepTerms step_terms(const RootSystem& rs, const std::vector<ClusterPoint>& points);

struct ChildRef {
  int point = 0;        // index into the node's points
  std::string kind;     // "inf" or "sm"
  int degree = 0;
  int b = 0;
  int node = -1;        // -1 when the replacement has degree 0
};

struct InductionNode {
  std::string path;
  int level = 0;
  int degree = 0;
  int b = 0;
  std::vector<std::pair<int, std::string>> orbits;  // (n, lambda)
  std::vector<ClusterPoint> points;
  bool base = false;
  StepTerms terms;
  std::vector<ChildRef> children;
  std::int64_t conductor = 0;
  std::int64_t disc = 0;
  std::optional<std::int64_t> disc_tree;
  std::optional<std::int64_t> disc_direct;
};

struct Witness {
  std::string path;
  int level = 0;
  std::string point;
  int weight = 0;
  int weight_tilde = 0;
  std::string reason;
};

struct Verdict {
  bool equal = false;
  std::vector<Witness> witnesses;
};

struct InductConfig {
  SolveConfig solve;
  int max_depth = 64;
  bool verify_nodes = true;  // tree and resultant oracles on every node
};

struct InductionReport {
  std::int64_t minus_art = 0;
  std::int64_t disc = 0;
  std::vector<InductionNode> nodes;  // nodes[0] is the input
  Verdict verdict;
  int depth = 0;
  bool measure_ok = true;
  std::vector<std::string> notes;
};

InductionReport verify_inequality(const RootSystem& rs, const InductConfig& cfg = {});
std::int64_t conductor(const RootSystem& rs, const InductConfig& cfg = {});
std::int64_t discriminant_recursive(const RootSystem& rs, const InductConfig& cfg = {});
Verdict equality_criterion(const RootSystem& rs, const InductConfig& cfg = {});

}  // namespace cdineq
