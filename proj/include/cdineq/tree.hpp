#pragma once

#include "cdineq/newton.hpp"
#include "cdineq/rational.hpp"

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace cdineq {

struct TreeNode {
  Rat depth{0};        // unused for leaves
  bool leaf = false;
  int root_id = -1;    // leaves only
  int parent = -1;
  std::vector<int> children;
};

// Rooted ultrametric cluster hierarchy. Node 0 is the root; its depth is 0
// for trees of root systems and the cut depth for subtrees.
struct MetricTree {
  std::vector<TreeNode> nodes;

  const TreeNode& root() const { return nodes.front(); }
  Rat root_depth() const { return nodes.front().depth; }
  std::vector<int> leaves() const;        // node indices, canonical order
  std::vector<int> leaf_ids() const;      // root ids, canonical order
  std::vector<int> internal_depth_nodes() const;
  std::size_t leaf_count() const;
};

// nu[i][j] = valuation of the difference of roots i and j (i != j).
using ContactMatrix = std::vector<std::vector<QInf>>;

ContactMatrix pairwise_valuations(const std::vector<PuiseuxSeries>& roots);

// Hull of a point at depth `root_depth` and the given roots, all of whose
// pairwise contacts are >= root_depth.
MetricTree tree_from_contacts(const std::vector<int>& ids, const ContactMatrix& nu, Rat root_depth = Rat(0));

MetricTree build_tree(const RootSystem& rs);
MetricTree build_tree(const std::vector<PuiseuxSeries>& roots);

// Subtree spanned by some leaves (by root id), rooted at depth `root_depth`.
MetricTree restrict_tree(const MetricTree& tr, const std::vector<int>& ids, Rat root_depth);

Rat lca_depth(const MetricTree& tr, int id_a, int id_b);
Rat disc_from_tree(const MetricTree& tr, int b, int d, int deg);

// max over conjugate pairs of valuation(alpha - beta)
Rat contact_exponent(const RootSystem& rs, std::size_t i, std::size_t j);

std::vector<Rat> characteristic_exponents(const PuiseuxSeries& s);
std::vector<Rat> essential_exponents(std::vector<Rat> E, std::int64_t q);
std::vector<Rat> support(const PuiseuxSeries& s);

MetricTree scale_tree(const MetricTree& tr, Rat alpha);
MetricTree amalgamate(const std::vector<std::pair<MetricTree, Rat>>& D);

// Canonical form up to root- and depth-preserving isomorphism; depths are
// taken relative to the root.
std::string canonical_signature(const MetricTree& tr);
bool rooted_isometric(const MetricTree& a, const MetricTree& b);

std::string tree_to_dot(const MetricTree& tr);
std::string tree_to_ascii(const MetricTree& tr);
nlohmann::json tree_to_json(const MetricTree& tr);

}  // namespace cdineq
