#include "cdineq/tree.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

namespace cdineq {

namespace {

QInf difference_valuation(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  PuiseuxSeries d = a - b;
  if (!d.empty()) return d.valuation();
  if (d.is_exact()) return QInf::infinity();
  fail(ErrorKind::PrecisionExhausted, "roots not separated at precision " + qinf_str(d.precision()));
}

// Signatures bottom-up; children of every node re-sorted by them.
std::string canonize(MetricTree& tr, int v, std::map<int, int>& min_leaf) {
  TreeNode& node = tr.nodes[v];
  if (node.leaf) {
    min_leaf[v] = node.root_id;
    return "L";
  }
  std::vector<std::pair<std::string, int>> kids;
  int ml = INT32_MAX;
  for (int c : node.children) {
    kids.emplace_back(canonize(tr, c, min_leaf), c);
    ml = std::min(ml, min_leaf[c]);
  }
  min_leaf[v] = ml;
  std::sort(kids.begin(), kids.end(), [&](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return min_leaf[a.second] < min_leaf[b.second];
  });
  std::string s = "N" + rat_str(tr.nodes[v].depth - tr.root_depth()) + "{";
  std::vector<int> order;
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) s += ",";
    s += kids[i].first;
    order.push_back(kids[i].second);
  }
  tr.nodes[v].children = order;
  return s + "}";
}

std::string finalize(MetricTree& tr) {
  std::map<int, int> ml;
  return canonize(tr, 0, ml);
}

// Drop non-root internal nodes with a single child.
MetricTree compress(const MetricTree& in) {
  MetricTree out;
  out.nodes.push_back(TreeNode{in.root_depth(), false, -1, -1, {}});
  std::function<void(int, int)> copy = [&](int v, int parent) {
    const TreeNode& n = in.nodes[v];
    if (!n.leaf && n.children.size() == 1) {
      copy(n.children[0], parent);
      return;
    }
    int id = static_cast<int>(out.nodes.size());
    out.nodes.push_back(TreeNode{n.depth, n.leaf, n.root_id, parent, {}});
    out.nodes[parent].children.push_back(id);
    for (int c : n.children) copy(c, id);
  };
  for (int c : in.nodes[0].children) copy(c, 0);
  finalize(out);
  return out;
}

void leaf_counts(const MetricTree& tr, int v, std::vector<std::int64_t>& cnt) {
  const TreeNode& n = tr.nodes[v];
  if (n.leaf) {
    cnt[v] = 1;
    return;
  }
  std::int64_t s = 0;
  for (int c : n.children) {
    leaf_counts(tr, c, cnt);
    s += cnt[c];
  }
  cnt[v] = s;
}

}  // namespace

std::vector<int> MetricTree::leaves() const {
  std::vector<int> out;
  std::function<void(int)> walk = [&](int v) {
    if (nodes[v].leaf) out.push_back(v);
    for (int c : nodes[v].children) walk(c);
  };
  if (!nodes.empty()) walk(0);
  return out;
}

std::vector<int> MetricTree::leaf_ids() const {
  std::vector<int> out;
  for (int v : leaves()) out.push_back(nodes[v].root_id);
  return out;
}

std::vector<int> MetricTree::internal_depth_nodes() const {
  std::vector<int> out;
  std::function<void(int)> walk = [&](int v) {
    if (!nodes[v].leaf) out.push_back(v);
    for (int c : nodes[v].children) walk(c);
  };
  if (!nodes.empty()) walk(0);
  return out;
}

std::size_t MetricTree::leaf_count() const { return leaves().size(); }

ContactMatrix pairwise_valuations(const std::vector<PuiseuxSeries>& roots) {
  std::size_t n = roots.size();
  ContactMatrix nu(n, std::vector<QInf>(n, QInf::infinity()));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      QInf v = difference_valuation(roots[i], roots[j]);
      check_invariant(!v.is_inf(), "repeated root in a squarefree system");
      nu[i][j] = nu[j][i] = v;
    }
  return nu;
}

MetricTree tree_from_contacts(const std::vector<int>& ids, const ContactMatrix& nu, Rat root_depth) {
  MetricTree tr;
  tr.nodes.push_back(TreeNode{root_depth, false, -1, -1, {}});
  std::function<void(int, std::vector<int>, Rat)> add = [&](int parent, std::vector<int> S, Rat pd) {
    if (S.size() == 1) {
      int id = static_cast<int>(tr.nodes.size());
      tr.nodes.push_back(TreeNode{Rat(0), true, S[0], parent, {}});
      tr.nodes[parent].children.push_back(id);
      return;
    }
    QInf m = QInf::infinity();
    for (std::size_t a = 0; a < S.size(); ++a)
      for (std::size_t b = a + 1; b < S.size(); ++b) m = min(m, nu[S[a]][S[b]]);
    check_invariant(!m.is_inf(), "coincident roots in tree construction");
    check_invariant(m.q >= pd, "contact below the cut depth");
    int cur = parent;
    if (m.q > pd) {
      cur = static_cast<int>(tr.nodes.size());
      tr.nodes.push_back(TreeNode{m.q, false, -1, parent, {}});
      tr.nodes[parent].children.push_back(cur);
    }
    std::vector<bool> used(S.size(), false);
    for (std::size_t a = 0; a < S.size(); ++a) {
      if (used[a]) continue;
      std::vector<int> cls{S[a]};
      used[a] = true;
      for (std::size_t b = a + 1; b < S.size(); ++b)
        if (!used[b] && m < nu[S[a]][S[b]]) {
          cls.push_back(S[b]);
          used[b] = true;
        }
      add(cur, cls, m.q);
    }
  };
  if (!ids.empty()) add(0, ids, root_depth);
  finalize(tr);
  return tr;
}

MetricTree build_tree(const std::vector<PuiseuxSeries>& roots) {
  std::vector<int> ids(roots.size());
  std::iota(ids.begin(), ids.end(), 0);
  return tree_from_contacts(ids, pairwise_valuations(roots), Rat(0));
}

MetricTree build_tree(const RootSystem& rs) { return build_tree(rs.all_roots()); }

Rat lca_depth(const MetricTree& tr, int id_a, int id_b) {
  int va = -1, vb = -1;
  for (std::size_t v = 0; v < tr.nodes.size(); ++v)
    if (tr.nodes[v].leaf) {
      if (tr.nodes[v].root_id == id_a && va < 0) va = static_cast<int>(v);
      if (tr.nodes[v].root_id == id_b && vb < 0) vb = static_cast<int>(v);
    }
  if (va < 0 || vb < 0 || va == vb) fail(ErrorKind::InvalidArgument, "lca_depth needs two distinct leaves");
  std::vector<int> up;
  for (int v = tr.nodes[va].parent; v >= 0; v = tr.nodes[v].parent) up.push_back(v);
  for (int v = tr.nodes[vb].parent; v >= 0; v = tr.nodes[v].parent)
    if (std::find(up.begin(), up.end(), v) != up.end()) return tr.nodes[v].depth;
  return tr.root_depth();
}

MetricTree restrict_tree(const MetricTree& tr, const std::vector<int>& ids, Rat root_depth) {
  int mx = 0;
  for (int i : ids) mx = std::max(mx, i);
  ContactMatrix nu(mx + 1, std::vector<QInf>(mx + 1, QInf::infinity()));
  for (std::size_t a = 0; a < ids.size(); ++a)
    for (std::size_t b = a + 1; b < ids.size(); ++b)
      nu[ids[a]][ids[b]] = nu[ids[b]][ids[a]] = QInf(lca_depth(tr, ids[a], ids[b]));
  return tree_from_contacts(ids, nu, root_depth);
}

Rat disc_from_tree(const MetricTree& tr, int b, int d, int deg) {
  std::vector<std::int64_t> cnt(tr.nodes.size(), 0);
  leaf_counts(tr, 0, cnt);
  Rat sum(2 * b * (d + deg - 1));
  for (std::size_t v = 0; v < tr.nodes.size(); ++v) {
    const TreeNode& n = tr.nodes[v];
    if (n.leaf) continue;
    std::int64_t tot = 0, sq = 0;
    for (int c : n.children) {
      tot += cnt[c];
      sq += cnt[c] * cnt[c];
    }
    sum += Rat(tot * tot - sq) * n.depth;
  }
  return sum;
}

Rat contact_exponent(const RootSystem& rs, std::size_t i, std::size_t j) {
  if (i == j) fail(ErrorKind::InvalidArgument, "contact exponent of an orbit with itself");
  if (i >= rs.orbits.size() || j >= rs.orbits.size()) fail(ErrorKind::InvalidArgument, "orbit index out of range");
  const PuiseuxSeries& beta = rs.orbits[j].rep;
  QInf best;
  bool first = true;
  for (const auto& alpha : rs.conjugates(i)) {
    QInf v = difference_valuation(alpha, beta);
    check_invariant(!v.is_inf(), "distinct orbits share a root");
    if (first || best < v) best = v;
    first = false;
  }
  return best.q;
}

std::vector<Rat> support(const PuiseuxSeries& s) {
  std::vector<Rat> out;
  for (std::size_t i = 0; i < s.terms().size(); ++i) out.push_back(s.exponent(i));
  return out;
}

std::vector<Rat> characteristic_exponents(const PuiseuxSeries& s) {
  std::vector<Rat> out;
  std::int64_t N = 1;
  for (const Rat& l : support(s)) {
    if (l == Rat(0)) fail(ErrorKind::InvalidArgument, "series has a constant term");
    if (!is_integer(l * Rat(N))) out.push_back(l);
    N = lcm64(N, l.denominator());
  }
  return out;
}

std::vector<Rat> essential_exponents(std::vector<Rat> E, std::int64_t q) {
  if (E.empty()) fail(ErrorKind::InvalidArgument, "empty exponent set");
  std::sort(E.begin(), E.end());
  E.erase(std::unique(E.begin(), E.end()), E.end());
  // the group Z{q, e_0, ...} is g*Z for a rational g
  auto rgcd = [](Rat a, Rat b) {
    std::int64_t num = gcd64(a.numerator() * b.denominator(), b.numerator() * a.denominator());
    return Rat(num, a.denominator() * b.denominator());
  };
  std::vector<Rat> out{E.front()};
  Rat g = rgcd(Rat(q), E.front());
  while (true) {
    auto it = std::find_if(E.begin(), E.end(), [&](const Rat& e) { return !is_integer(e / g); });
    if (it == E.end()) break;
    out.push_back(*it);
    g = rgcd(g, *it);
  }
  return out;
}

MetricTree scale_tree(const MetricTree& tr, Rat alpha) {
  if (alpha <= Rat(0)) fail(ErrorKind::InvalidArgument, "scale factor must be positive");
  MetricTree out = tr;
  for (auto& n : out.nodes)
    if (!n.leaf) n.depth *= alpha;
  finalize(out);
  return out;
}

MetricTree amalgamate(const std::vector<std::pair<MetricTree, Rat>>& D) {
  if (D.empty()) fail(ErrorKind::InvalidArgument, "empty amalgamation");
  MetricTree out;
  out.nodes.push_back(TreeNode{Rat(0), false, -1, -1, {}});
  std::map<Rat, int> spine{{Rat(0), 0}};
  Rat top(0);
  for (const auto& [t, g] : D) {
    if (g < Rat(0)) fail(ErrorKind::InvalidArgument, "negative spine position");
    top = std::max(top, g);
  }
  std::vector<Rat> gs;
  for (const auto& d : D) gs.push_back(d.second);
  std::sort(gs.begin(), gs.end());
  int prev = 0;
  for (const Rat& g : gs) {
    if (spine.count(g)) {
      prev = spine[g];
      continue;
    }
    int id = static_cast<int>(out.nodes.size());
    out.nodes.push_back(TreeNode{g, false, -1, prev, {}});
    out.nodes[prev].children.push_back(id);
    spine[g] = id;
    prev = id;
  }
  for (const auto& [t, g] : D) {
    Rat off = g - t.root_depth();
    std::function<void(int, int)> copy = [&](int v, int parent) {
      const TreeNode& n = t.nodes[v];
      int id = static_cast<int>(out.nodes.size());
      out.nodes.push_back(TreeNode{n.leaf ? Rat(0) : n.depth + off, n.leaf, n.root_id, parent, {}});
      out.nodes[parent].children.push_back(id);
      for (int c : n.children) copy(c, id);
    };
    for (int c : t.nodes[0].children) copy(c, spine[g]);
  }
  return compress(out);
}

std::string canonical_signature(const MetricTree& tr) {
  MetricTree c = compress(tr);
  return finalize(c);
}

bool rooted_isometric(const MetricTree& a, const MetricTree& b) {
  return canonical_signature(a) == canonical_signature(b);
}

std::string tree_to_dot(const MetricTree& tr) {
  std::ostringstream os;
  os << "digraph metric_tree {\n  node [shape=circle];\n";
  for (std::size_t v = 0; v < tr.nodes.size(); ++v) {
    const TreeNode& n = tr.nodes[v];
    if (n.leaf)
      os << "  n" << v << " [shape=point, xlabel=\"r" << n.root_id << "\"];\n";
    else
      os << "  n" << v << " [label=\"" << (v == 0 ? "zeta " : "") << rat_pretty(n.depth) << "\"];\n";
  }
  for (std::size_t v = 0; v < tr.nodes.size(); ++v)
    for (int c : tr.nodes[v].children) {
      os << "  n" << v << " -> n" << c;
      if (!tr.nodes[c].leaf) os << " [label=\"" << rat_pretty(tr.nodes[c].depth - tr.nodes[v].depth) << "\"]";
      os << ";\n";
    }
  os << "}\n";
  return os.str();
}

std::string tree_to_ascii(const MetricTree& tr) {
  std::ostringstream os;
  std::vector<std::int64_t> cnt(tr.nodes.size(), 0);
  leaf_counts(tr, 0, cnt);
  std::function<void(int, std::string)> walk = [&](int v, std::string indent) {
    const TreeNode& n = tr.nodes[v];
    if (n.leaf)
      os << indent << "root r" << n.root_id << "\n";
    else
      os << indent << (v == 0 ? "zeta" : "node") << " depth " << rat_pretty(n.depth) << " (" << cnt[v]
         << " leaves)\n";
    for (int c : n.children) walk(c, indent + "  ");
  };
  walk(0, "");
  return os.str();
}

nlohmann::json tree_to_json(const MetricTree& tr) {
  nlohmann::json nodes = nlohmann::json::array();
  for (std::size_t v = 0; v < tr.nodes.size(); ++v) {
    const TreeNode& n = tr.nodes[v];
    nlohmann::json j;
    j["id"] = v;
    j["leaf"] = n.leaf;
    if (n.leaf)
      j["root_id"] = n.root_id;
    else
      j["depth"] = rat_str(n.depth);
    j["children"] = n.children;
    nodes.push_back(j);
  }
  return nlohmann::json{{"root_depth", rat_str(tr.root_depth())}, {"nodes", nodes}};
}

}  // namespace cdineq
