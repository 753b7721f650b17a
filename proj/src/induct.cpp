#include "cdineq/induct.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace cdineq {

std::string ClusterPoint::label() const { return at_infinity ? "inf" : to_string(residue); }

std::vector<ClusterPoint> classify(const RootSystem& rs) {
  std::vector<ClusterPoint> pts;
  for (std::size_t i = 0; i < rs.orbits.size(); ++i) {
    const Orbit& o = rs.orbits[i];
    auto it = std::find_if(pts.begin(), pts.end(), [&](const ClusterPoint& p) { return p.residue == o.residue; });
    if (it == pts.end()) {
      pts.push_back(ClusterPoint{});
      pts.back().residue = o.residue;
      it = pts.end() - 1;
    }
    bool less = !o.lambda.is_inf() && o.lambda.q < Rat(o.n);
    (less ? it->less : it->geq).push_back(static_cast<int>(i));
  }
  for (auto& P : pts) {
    int sl = 0, sn = 0;
    for (int i : P.less) {
      check_invariant(is_integer(rs.orbits[i].lambda.q), "lambda must be an integer");
      sl += static_cast<int>(rs.orbits[i].lambda.q.numerator());
    }
    for (int i : P.geq) sn += rs.orbits[i].n;
    P.wt_tilde = sl + sn;
    P.wt = rs.b + P.wt_tilde;
    P.bad = P.wt >= 2;
    P.b_P = P.wt % 2;
    P.deg_inf = rs.b + sl;
    P.deg_sm = sn;
    P.d_nod = P.deg_inf % 2;
    P.d_sm = P.deg_sm % 2;
    check_invariant(multiplicity_at(rs.chart.G, rs.b, P.residue) == P.wt,
                    "weight differs from the multiplicity at " + P.label());
  }
  if (rs.parity() == 1) {
    ClusterPoint inf;
    inf.at_infinity = true;
    inf.wt_tilde = 1;
    inf.wt = rs.b + 1;
    inf.bad = inf.wt >= 2;
    pts.push_back(inf);
  }
  return pts;
}

namespace {

struct Tagged {
  int orbit;
  PuiseuxSeries s;
};

// For each derived root find the unique new root it agrees with. Returns the
// origin of every new orbit, or nullopt when the precision cannot decide.
std::optional<std::vector<int>> match_origins(const RootSystem& fresh, const std::vector<Tagged>& derived,
                                              int adjoined_orbit) {
  std::vector<Tagged> roots;
  for (std::size_t k = 0; k < fresh.orbits.size(); ++k)
    for (auto& c : fresh.conjugates(k)) roots.push_back({static_cast<int>(k), c});
  std::vector<int> hits(roots.size(), 0);
  std::vector<int> origin(fresh.orbits.size(), -1);
  for (const auto& d : derived) {
    int found = -1, count = 0;
    for (std::size_t r = 0; r < roots.size(); ++r)
      if (agree(d.s, roots[r].s)) {
        found = static_cast<int>(r);
        ++count;
      }
    if (count != 1) return std::nullopt;
    ++hits[found];
    int k = roots[found].orbit;
    check_invariant(origin[k] < 0 || origin[k] == d.orbit, "replacement orbit mixes two parent orbits");
    origin[k] = d.orbit;
  }
  for (std::size_t r = 0; r < roots.size(); ++r) {
    if (roots[r].orbit == adjoined_orbit) continue;
    check_invariant(hits[r] == 1, "replacement roots do not match the parent roots");
  }
  if (adjoined_orbit >= 0) origin[adjoined_orbit] = -2;
  return origin;
}

RootSystem empty_system(const RootSystem& rs, int b) {
  RootSystem out;
  out.tower = rs.tower;
  out.b = b;
  out.precision = rs.precision;
  return out;
}

std::vector<Tagged> smooth_derived(const RootSystem& rs, const ClusterPoint& P) {
  std::vector<Tagged> out;
  PuiseuxSeries a = PuiseuxSeries::constant(P.residue);
  for (int i : P.geq)
    for (auto& c : rs.conjugates(i)) out.push_back({i, shift(c - a, Rat(-1))});
  return out;
}

}  // namespace

RootSystem replace_smooth(const RootSystem& rs0, const ClusterPoint& P, const SolveConfig& cfg) {
  if (P.at_infinity) fail(ErrorKind::InvalidArgument, "replacement at infinity");
  if (P.geq.empty()) return empty_system(rs0, P.b_P);
  Chart ch{smooth_chart(rs0.chart.G, P.residue), false};
  RootSystem fresh = solve_chart(*rs0.tower, P.b_P, ch, cfg);
  check_invariant(fresh.degree() == P.deg_sm, "smooth replacement has the wrong degree");
  RootSystem rs = rs0;
  for (;;) {
    auto origin = match_origins(fresh, smooth_derived(rs, P), -1);
    if (origin) {
      for (std::size_t k = 0; k < fresh.orbits.size(); ++k) fresh.orbits[k].origin = (*origin)[k];
      return fresh;
    }
    if (rs.precision * Rat(2) > std::max(cfg.cap, Rat(4096)))
      fail(ErrorKind::PrecisionExhausted, "cannot match the smooth replacement to its parent");
    rs = refine(rs, rs.precision * Rat(2), cfg);
    fresh = refine(fresh, rs.precision, cfg);
  }
}

std::vector<PuiseuxSeries> derived_infinity_roots(const RootSystem& rs, std::size_t orbit, const FieldElem& a) {
  const FieldTower& tw = *rs.tower;
  const Orbit& o = rs.orbits.at(orbit);
  if (o.lambda.is_inf() || o.lambda.q >= Rat(o.n))
    fail(ErrorKind::InvalidArgument, "inversion branch needs lambda < n");
  const std::int64_t n = o.n;
  const std::int64_t lam = o.lambda.q.numerator();
  PuiseuxSeries psi = o.rep - PuiseuxSeries::constant(a);
  check_invariant(n % psi.e() == 0, "representative ramification does not divide the orbit size");
  // in tau = t^{1/n}
  std::vector<PuiseuxSeries::Term> terms;
  const std::int64_t m = n / psi.e();
  for (auto& [k, c] : psi.terms()) terms.emplace_back(k * m, c);
  QInf pprec = psi.is_exact() ? QInf::infinity() : QInf(psi.precision().q * Rat(n));
  PuiseuxSeries Psi = PuiseuxSeries::from_terms(tw, 1, terms, pprec);
  QInf cap(rs.precision * Rat(n) + Rat(n));
  PuiseuxSeries u = nth_root(shift(Psi, Rat(-lam)), static_cast<unsigned>(lam), std::nullopt, cap);
  PuiseuxSeries sigma = shift(u, Rat(1));
  PuiseuxSeries tau = functional_inverse(sigma, cap);
  PuiseuxSeries rho = shift(power(tau, static_cast<unsigned>(n), QInf(cap.q + Rat(n))), Rat(-lam));
  // s = T^{1/lambda}
  std::vector<PuiseuxSeries::Term> out_terms(rho.terms().begin(), rho.terms().end());
  QInf tprec = rho.is_exact() ? QInf::infinity() : QInf(rho.precision().q / Rat(lam));
  PuiseuxSeries X = PuiseuxSeries::from_terms(tw, rho.e() * lam, out_terms, tprec);
  std::vector<PuiseuxSeries> conj;
  if (lam == 1) return {X};
  auto zs = const_cast<FieldTower&>(tw).nth_roots_of_unity(static_cast<unsigned>(lam));
  for (auto& z : zs) conj.push_back(twist(X, lam, z));
  return conj;
}

RootSystem replace_infinity(const RootSystem& rs0, const ClusterPoint& P, const SolveConfig& cfg) {
  if (P.at_infinity) fail(ErrorKind::InvalidArgument, "replacement at infinity");
  if (P.deg_inf == 0) return empty_system(rs0, P.b_P);
  Chart ch{infinity_chart(rs0.chart.G, P.residue, rs0.b), true};
  RootSystem fresh = solve_chart(*rs0.tower, P.b_P, ch, cfg);
  check_invariant(fresh.degree() == P.deg_inf, "infinity replacement has the wrong degree");
  RootSystem rs = rs0;
  for (;;) {
    int adjoined = -1;
    if (rs.b == 1) {
      for (std::size_t k = 0; k < fresh.orbits.size(); ++k)
        if (fresh.orbits[k].n == 1 && fresh.orbits[k].rep.is_exact_zero()) adjoined = static_cast<int>(k);
      check_invariant(adjoined >= 0, "adjoined root 0 missing from the infinity replacement");
    }
    std::vector<Tagged> derived;
    for (int i : P.less)
      for (auto& r : derived_infinity_roots(rs, i, P.residue)) {
        PuiseuxSeries ev = poly_eval(ch.G, r);
        check_invariant(ev.empty(), "inversion branch does not satisfy the strict transform");
        derived.push_back({i, r});
      }
    auto origin = match_origins(fresh, derived, adjoined);
    if (origin) {
      for (std::size_t k = 0; k < fresh.orbits.size(); ++k) fresh.orbits[k].origin = (*origin)[k];
      return fresh;
    }
    if (rs.precision * Rat(2) > std::max(cfg.cap, Rat(4096)))
      fail(ErrorKind::PrecisionExhausted, "cannot match the infinity replacement to its parent");
    rs = refine(rs, rs.precision * Rat(2), cfg);
    fresh = refine(fresh, rs.precision, cfg);
  }
}

namespace {

// root ids of build_tree(rs) grouped by orbit
std::vector<std::vector<int>> root_ids_by_orbit(const RootSystem& rs) {
  std::vector<std::vector<int>> ids(rs.orbits.size());
  int next = 0;
  for (std::size_t i = 0; i < rs.orbits.size(); ++i)
    for (int k = 0; k < rs.orbits[i].n; ++k) ids[i].push_back(next++);
  return ids;
}

}  // namespace

MetricTree expected_smooth_tree(const RootSystem& rs, const ClusterPoint& P) {
  MetricTree T = build_tree(rs);
  auto ids = root_ids_by_orbit(rs);
  std::vector<int> sel;
  for (int i : P.geq) sel.insert(sel.end(), ids[i].begin(), ids[i].end());
  return restrict_tree(T, sel, Rat(1));
}

MetricTree expected_infinity_tree(const RootSystem& rs, const ClusterPoint& P) {
  MetricTree T = build_tree(rs);
  auto ids = root_ids_by_orbit(rs);
  auto roots = rs.all_roots();
  PuiseuxSeries a = PuiseuxSeries::constant(P.residue);
  std::map<Rat, std::vector<int>> by_slope;
  for (int i : P.less) {
    Rat slope = rs.orbits[i].lambda.q / Rat(rs.orbits[i].n);
    by_slope[slope].insert(by_slope[slope].end(), ids[i].begin(), ids[i].end());
  }
  std::vector<std::pair<MetricTree, Rat>> D;
  Rat gmax(0);
  for (auto& [slope, S] : by_slope) {
    const std::int64_t num = slope.numerator(), den = slope.denominator();
    // components at the point of depth `slope`, keyed by leading coefficient
    std::vector<std::pair<FieldElem, std::vector<int>>> comps;
    for (int r : S) {
      FieldElem u = (roots[r] - a).coeff(slope);
      check_invariant(!u.is_zero(), "root valuation differs from its slope");
      auto it = std::find_if(comps.begin(), comps.end(), [&](const auto& c) { return c.first == u; });
      if (it == comps.end())
        comps.push_back({u, {r}});
      else
        it->second.push_back(r);
    }
    // twisting acts on leading coefficients through den-th roots of unity
    std::vector<std::pair<FieldElem, std::vector<int>>> classes;  // u^den -> component indices
    for (std::size_t c = 0; c < comps.size(); ++c) {
      FieldElem key = comps[c].first.pow(static_cast<std::uint64_t>(den));
      auto it = std::find_if(classes.begin(), classes.end(), [&](const auto& k) { return k.first == key; });
      if (it == classes.end())
        classes.push_back({key, {static_cast<int>(c)}});
      else
        it->second.push_back(static_cast<int>(c));
    }
    Rat gamma = Rat(den, num) - Rat(1);
    gmax = std::max(gmax, gamma);
    for (auto& [key, members] : classes) {
      check_invariant(static_cast<std::int64_t>(members.size()) == den, "Galois orbit of subtrees has the wrong size");
      MetricTree first = restrict_tree(T, comps[members[0]].second, slope);
      for (std::size_t k = 1; k < members.size(); ++k)
        check_invariant(rooted_isometric(first, restrict_tree(T, comps[members[k]].second, slope)),
                        "conjugate subtrees are not isometric");
      MetricTree scaled = scale_tree(first, Rat(den, num));
      for (std::int64_t c = 0; c < num; ++c) D.push_back({scaled, gamma});
    }
  }
  if (rs.b == 1) {
    MetricTree leaf;
    leaf.nodes.push_back(TreeNode{Rat(0), false, -1, -1, {1}});
    leaf.nodes.push_back(TreeNode{Rat(0), true, -1, 0, {}});
    D.push_back({leaf, gmax});
  }
  return amalgamate(D);
}

StepTerms step_terms(const RootSystem& rs, const std::vector<ClusterPoint>& points) {
  const std::int64_t b = rs.b, d = rs.parity(), deg = rs.degree();
  auto n_of = [&](int i) -> std::int64_t { return rs.orbits[i].n; };
  auto l_of = [&](int i) -> std::int64_t { return rs.orbits[i].lambda.q.numerator(); };
  StepTerms st;
  std::int64_t L = -b * (2 + d);
  std::int64_t R = 2 * b * (d + deg - 1);
  std::int64_t nbad = 0;
  bool all_equal = true;
  for (const auto& P : points) {
    if (!P.bad) {
      if (P.at_infinity) continue;
      for (int i : P.less) {
        L += n_of(i) - 1 + b;
        R += n_of(i) - 1;
      }
      for (int i : P.geq) {
        L += n_of(i) - 1 + b;
        R += n_of(i) - 1;
      }
      continue;
    }
    ++nbad;
    bool eq = P.wt == 2 || P.wt == 3;
    st.point_equal.push_back(eq);
    all_equal = all_equal && eq;
    if (P.at_infinity) continue;
    const std::int64_t bP = P.b_P;
    std::int64_t sum_l = 0;
    for (int i : P.less) {
      L += n_of(i) - l_of(i);
      sum_l += l_of(i);
    }
    if (P.deg_inf == 0) L -= b - b * bP;
    if (P.deg_inf >= 1 && P.deg_sm >= 1) L += 2 * bP;
    if (P.deg_inf >= 1) L -= b + 2 * bP * P.d_nod;
    if (P.deg_sm >= 1) L -= 2 * bP * P.d_sm;

    if (P.deg_inf >= 1) {
      R -= 2 * bP * (P.d_nod + b - 1 + sum_l);
      for (int i : P.less) R -= 2 * b * (n_of(i) - l_of(i));
    }
    if (P.deg_sm >= 1) R -= 2 * bP * (P.d_sm - 1 + P.deg_sm);
    for (int i : P.less) {
      for (int j : P.geq) R += 2 * l_of(i) * n_of(j);
      R += (n_of(i) - l_of(i)) + l_of(i) * (l_of(i) - 1);
    }
    for (std::size_t x = 0; x < P.less.size(); ++x)
      for (std::size_t y = x + 1; y < P.less.size(); ++y) R += 2 * l_of(P.less[x]) * l_of(P.less[y]);
    for (std::size_t x = 0; x < P.geq.size(); ++x) {
      R += n_of(P.geq[x]) * (n_of(P.geq[x]) - 1);
      for (std::size_t y = x + 1; y < P.geq.size(); ++y) R += 2 * n_of(P.geq[x]) * n_of(P.geq[y]);
    }
  }
  L += (2 + b) * nbad;
  st.lhs = L;
  st.rhs = R;
  st.equal = all_equal;
  return st;
}

namespace {

struct Engine {
  const InductConfig& cfg;
  InductionReport rep;
  std::vector<RootSystem> systems;
  std::vector<int> parent;

  int run(const RootSystem& rs, int level, const std::string& path, int par) {
    if (level > cfg.max_depth)
      fail(ErrorKind::DepthExceeded, "recursion depth above " + std::to_string(cfg.max_depth));
    int id = static_cast<int>(rep.nodes.size());
    rep.nodes.push_back(InductionNode{});
    systems.push_back(rs);
    parent.push_back(par);
    rep.depth = std::max(rep.depth, level);
    InductionNode node;
    node.path = path;
    node.level = level;
    node.degree = rs.degree();
    node.b = rs.b;
    for (auto& o : rs.orbits) node.orbits.emplace_back(o.n, qinf_str(o.lambda));
    node.points = classify(rs);
    bool any_bad = std::any_of(node.points.begin(), node.points.end(), [](const ClusterPoint& p) { return p.bad; });
    if (!any_bad) {
      node.base = true;
      std::int64_t s = 0;
      for (auto& o : rs.orbits) s += o.n - 1;
      node.conductor = node.disc = s;
    } else {
      node.terms = step_terms(rs, node.points);
      check_invariant(node.terms.lhs >= 0, "negative conductor change at " + path);
      check_invariant(node.terms.lhs <= node.terms.rhs, "conductor change exceeds discriminant change at " + path);
      check_invariant((node.terms.lhs == node.terms.rhs) == node.terms.equal,
                      "step equality disagrees with the weight rule at " + path);
      node.conductor = node.terms.lhs;
      node.disc = node.terms.rhs;
      for (std::size_t pi = 0; pi < node.points.size(); ++pi) {
        const ClusterPoint& P = node.points[pi];
        if (!P.bad || P.at_infinity) continue;
        check_invariant(P.deg_inf + P.deg_sm >= 1, "both replacements have degree 0 at " + P.label());
        for (const char* kind : {"sm", "inf"}) {
          bool sm = std::string(kind) == "sm";
          ChildRef ch;
          ch.point = static_cast<int>(pi);
          ch.kind = kind;
          ch.degree = sm ? P.deg_sm : P.deg_inf;
          ch.b = P.b_P;
          if (ch.degree >= 1) {
            RootSystem sub = sm ? replace_smooth(rs, P, cfg.solve) : replace_infinity(rs, P, cfg.solve);
            ch.node = run(sub, level + 1, path + "/" + P.label() + ":" + kind, id);
            node.conductor += rep.nodes[ch.node].conductor;
            node.disc += rep.nodes[ch.node].disc;
          }
          node.children.push_back(ch);
        }
      }
    }
    if (cfg.verify_nodes) {
      Rat td = disc_from_tree(build_tree(rs), rs.b, rs.parity(), rs.degree());
      check_invariant(is_integer(td), "tree discriminant is not an integer");
      node.disc_tree = td.numerator();
      node.disc_direct = discriminant_valuation_direct(rs, cfg.solve);
      check_invariant(*node.disc_tree == node.disc && *node.disc_direct == node.disc,
                      "recursive discriminant disagrees with the oracles at " + path);
    }
    check_invariant(node.conductor <= node.disc, "conductor exceeds discriminant at " + path);
    rep.nodes[id] = std::move(node);
    return id;
  }

  void check_measure() {
    auto key = [&](int v) { return std::make_pair(rep.nodes[v].degree, rep.nodes[v].disc); };
    for (std::size_t v = 0; v < rep.nodes.size(); ++v) {
      int u = parent[v];
      if (u < 0) continue;
      if (key(u) < key(static_cast<int>(v))) rep.measure_ok = false;
      int w = parent[u];
      if (w >= 0 && !(key(static_cast<int>(v)) < key(w))) rep.measure_ok = false;
    }
  }

  // Good weight 3 by the explicit cases; 0 when none applies.
  int good3_case(const ClusterPoint& P, const InductionNode& top) {
    const RootSystem& rs = systems[0];
    std::vector<int> members = P.less;
    members.insert(members.end(), P.geq.begin(), P.geq.end());
    // points reached on the exceptional curve
    std::vector<std::string> reached;
    for (const auto& ch : top.children) {
      if (&top.points[ch.point] != &P || ch.node < 0) continue;
      const RootSystem& sub = systems[ch.node];
      for (const auto& Q : rep.nodes[ch.node].points) {
        if (Q.at_infinity) continue;
        bool from_members = false;
        for (int k : Q.less) from_members |= sub.orbits[k].origin >= 0;
        for (int k : Q.geq) from_members |= sub.orbits[k].origin >= 0;
        if (!from_members) continue;
        std::string key = ch.kind == "inf" ? "inf-chart" : Q.label();
        if (std::find(reached.begin(), reached.end(), key) == reached.end()) reached.push_back(key);
      }
    }
    if (reached.size() >= 2) return 1;
    auto nl = [&](int i) {
      return std::make_pair(static_cast<std::int64_t>(rs.orbits[i].n),
                            rs.orbits[i].lambda.is_inf() ? INT64_MAX : rs.orbits[i].lambda.q.numerator());
    };
    auto min_nl = [&](int i) { return std::min(nl(i).first, nl(i).second); };
    if (members.size() == 2) {
      for (int k = 0; k < 2; ++k) {
        int f1 = members[k], f2 = members[1 - k];
        auto p = nl(f2);
        if (min_nl(f1) == 1 && (p == std::make_pair<std::int64_t, std::int64_t>(2, 3) ||
                                p == std::make_pair<std::int64_t, std::int64_t>(3, 2)))
          return 2;
      }
    }
    if (members.size() == 1) {
      auto p = nl(members[0]);
      for (auto q : {std::make_pair<std::int64_t, std::int64_t>(3, 4), std::make_pair<std::int64_t, std::int64_t>(4, 3),
                     std::make_pair<std::int64_t, std::int64_t>(3, 5), std::make_pair<std::int64_t, std::int64_t>(5, 3)})
        if (p == q) return 3;
    }
    return 0;
  }

  void verdict() {
    const InductionNode& top = rep.nodes[0];
    Verdict v;
    v.equal = true;
    for (const auto& P : top.points) {
      if (P.wt <= 2) continue;
      if (P.wt == 3 && top.b == 1) continue;  // wt_tilde = 2: every later step keeps wt <= 3
      if (P.wt == 3) {
        bool alt = true;
        std::vector<Witness> deeper;
        for (const auto& ch : top.children) {
          if (&top.points[ch.point] != &P || ch.node < 0) continue;
          for (const auto& Q : rep.nodes[ch.node].points)
            if (Q.wt_tilde > 2) {
              alt = false;
              deeper.push_back({rep.nodes[ch.node].path, 1, Q.label(), Q.wt, Q.wt_tilde,
                                "replacement point of weight " + std::to_string(Q.wt)});
            }
        }
        int c = good3_case(P, top);
        check_invariant(alt == (c != 0), "good weight 3 tests disagree at " + P.label());
        if (alt) {
          rep.notes.push_back("point " + P.label() + " is a good weight 3 point (case " + std::to_string(c) +
                              "); equality is for the model X^f, which need not be minimal");
          continue;
        }
        v.equal = false;
        v.witnesses.push_back({top.path, 0, P.label(), P.wt, P.wt_tilde, "weight 3 point that is not good"});
        v.witnesses.insert(v.witnesses.end(), deeper.begin(), deeper.end());
        continue;
      }
      v.equal = false;
      v.witnesses.push_back({top.path, 0, P.label(), P.wt, P.wt_tilde, "weight " + std::to_string(P.wt) + " >= 4"});
    }
    // every strict step deeper down
    for (std::size_t k = 1; k < rep.nodes.size(); ++k)
      for (const auto& Q : rep.nodes[k].points)
        if (Q.bad && Q.wt >= 4) {
          bool dup = false;
          for (auto& w : v.witnesses) dup |= w.path == rep.nodes[k].path && w.point == Q.label();
          if (!dup)
            v.witnesses.push_back({rep.nodes[k].path, rep.nodes[k].level, Q.label(), Q.wt, Q.wt_tilde,
                                   "strict step: weight " + std::to_string(Q.wt)});
        }
    rep.verdict = v;
  }
};

}  // namespace

InductionReport verify_inequality(const RootSystem& rs, const InductConfig& cfg) {
  Engine e{cfg, {}, {}, {}};
  e.run(rs, 0, "f", -1);
  e.rep.minus_art = e.rep.nodes[0].conductor;
  e.rep.disc = e.rep.nodes[0].disc;
  e.check_measure();
  e.verdict();
  check_invariant(e.rep.minus_art <= e.rep.disc, "conductor-discriminant inequality fails");
  check_invariant(e.rep.verdict.equal == (e.rep.minus_art == e.rep.disc),
                  "equality criterion disagrees with the ledger");
  return e.rep;
}

std::int64_t conductor(const RootSystem& rs, const InductConfig& cfg) { return verify_inequality(rs, cfg).minus_art; }

std::int64_t discriminant_recursive(const RootSystem& rs, const InductConfig& cfg) {
  return verify_inequality(rs, cfg).disc;
}

Verdict equality_criterion(const RootSystem& rs, const InductConfig& cfg) { return verify_inequality(rs, cfg).verdict; }

}  // namespace cdineq
