// One line per acceptance criterion; exit status 1 if any fails.
#include "corpus.hpp"

#include "cdineq/expr.hpp"
#include "cdineq/families.hpp"
#include "cdineq/induct.hpp"
#include "cdineq/tree.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

using namespace cdineq;

namespace {

struct Result {
  bool pass = true;
  std::string detail;
};

int failures = 0;

std::chrono::steady_clock::time_point t_last = std::chrono::steady_clock::now();

void report(int id, const std::string& title, const Result& r) {
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_last).count();
  t_last = std::chrono::steady_clock::now();
  std::cout << "criterion " << id << " [" << title << "]: " << (r.pass ? "PASS" : "FAIL") << "  " << r.detail << "  (" << static_cast<int>(secs * 10) / 10.0 << " s)\n";
  if (!r.pass) ++failures;
}

struct Analyzed {
  std::unique_ptr<FieldTower> tw;
  ExactPoly f;
  RootSystem rs;
  InductionReport rep;
};

Analyzed analyze(std::uint32_t p, const BiPoly& poly) {
  Analyzed a;
  a.tw = std::make_unique<FieldTower>(p);
  a.f = parse_and_normalize(*a.tw, to_series_poly(*a.tw, poly));
  a.rs = puiseux_roots(a.f);
  a.rep = verify_inequality(a.rs);
  return a;
}

Analyzed analyze(std::uint32_t p, const std::string& expr) { return analyze(p, parse_expression(expr, p)); }

std::string where(std::uint32_t p, const BiPoly& f) { return bi_to_string(f) + " (p=" + std::to_string(p) + ")"; }

// ---- law checks on one root system ----

struct LawCounts {
  int tree_inputs = 0, tree_fail = 0;
  int ess = 0, ess_fail = 0;
  int sqfree = 0, sqfree_fail = 0;
  int degrep = 0, degrep_fail = 0;
  int pairs = 0, pairs_fail = 0;
  int contact = 0, contact_fail = 0;
  int symmetry = 0, symmetry_fail = 0;
  int multiset = 0, multiset_fail = 0;
  std::vector<std::string> notes;
  void note(const std::string& s) {
    if (notes.size() < 5) notes.push_back(s);
  }
};

std::vector<int> orbits_from(const RootSystem& sub, int parent_orbit) {
  std::vector<int> out;
  for (std::size_t k = 0; k < sub.orbits.size(); ++k)
    if (sub.orbits[k].origin == parent_orbit) out.push_back(static_cast<int>(k));
  return out;
}

QInf lambda_at_zero(const Orbit& o) {
  if (o.rep.is_exact_zero()) return QInf::infinity();
  return QInf(o.rep.valuation().q * Rat(o.n));
}

std::vector<Rat> expected_essential(const PuiseuxSeries& g_root, std::int64_t n, std::int64_t m) {
  std::vector<Rat> ch = characteristic_exponents(g_root);
  std::vector<Rat> out{Rat(n, m) - Rat(1)};
  for (std::size_t k = 1; k < ch.size(); ++k) out.push_back(Rat(n, m) * (ch[k] + Rat(1)) - Rat(2));
  return out;
}

bool multiset_law(const RootSystem& rs, int i, int j, const FieldElem& a) {
  PuiseuxSeries A = PuiseuxSeries::constant(a);
  PuiseuxSeries gi = rs.orbits[i].rep - A;
  if (gi.empty()) return true;
  std::vector<Rat> e = essential_exponents(support(gi), 1);
  std::vector<std::int64_t> b;
  std::int64_t D = 1;
  for (const Rat& x : e) {
    std::int64_t nd = lcm64(D, x.denominator());
    b.push_back(nd / D);
    D = nd;
  }
  if (D != rs.orbits[i].n) return false;
  const PuiseuxSeries& beta = rs.orbits[j].rep;
  std::vector<Rat> M;
  for (const auto& alpha : rs.conjugates(i)) M.push_back((alpha - beta).valuation().q);
  Rat kappa = *std::max_element(M.begin(), M.end());
  std::vector<Rat> want;
  std::size_t r = 0;
  while (r < e.size() && e[r] < kappa) ++r;
  auto tail = [&](std::size_t from) {
    std::int64_t pr = 1;
    for (std::size_t s = from; s < b.size(); ++s) pr *= b[s];
    return pr;
  };
  for (std::size_t q = 0; q < r; ++q)
    for (std::int64_t c = 0; c < (b[q] - 1) * tail(q + 1); ++c) want.push_back(e[q]);
  for (std::int64_t c = 0; c < tail(r); ++c) want.push_back(kappa);
  std::sort(M.begin(), M.end());
  std::sort(want.begin(), want.end());
  return M == want;
}

void check_laws(const RootSystem& rs, LawCounts& L, const std::string& tag) {
  auto pts = classify(rs);
  bool tree_checked = false, tree_ok = true;
  for (const auto& P : pts) {
    if (P.at_infinity) continue;
    // contact multiset law for every ordered pair of orbits through P
    std::vector<int> all = P.less;
    all.insert(all.end(), P.geq.begin(), P.geq.end());
    for (int i : all)
      for (int j : all) {
        if (i == j) continue;
        ++L.multiset;
        if (!multiset_law(rs, i, j, P.residue)) {
          ++L.multiset_fail;
          L.note("multiset law " + tag);
        }
      }
    if (!P.bad) continue;
    if (P.deg_sm >= 1) {
      RootSystem sm = replace_smooth(rs, P);
      tree_checked = true;
      if (!rooted_isometric(build_tree(sm), expected_smooth_tree(rs, P))) {
        tree_ok = false;
        L.note("smooth tree law " + tag);
      }
      ++L.sqfree;
      try {
        discriminant_valuation_direct(sm);
      } catch (const Error&) {
        ++L.sqfree_fail;
      }
      for (int i : P.geq) {
        auto ks = orbits_from(sm, i);
        ++L.degrep;
        if (ks.size() != 1 || sm.orbits[ks[0]].n != rs.orbits[i].n) {
          ++L.degrep_fail;
          continue;
        }
        ++L.pairs;
        const Orbit& o = rs.orbits[i];
        QInf want = o.lambda.is_inf() ? QInf::infinity() : QInf(o.lambda.q - Rat(o.n));
        if (!(lambda_at_zero(sm.orbits[ks[0]]) == want)) {
          ++L.pairs_fail;
          L.note("pair law (smooth) " + tag);
        }
      }
    }
    if (P.deg_inf >= 1) {
      RootSystem in = replace_infinity(rs, P);
      tree_checked = true;
      if (!P.less.empty()) {
        ++L.symmetry;
        try {
          MetricTree want = expected_infinity_tree(rs, P);
          if (!rooted_isometric(build_tree(in), want)) {
            tree_ok = false;
            L.note("infinity tree law " + tag);
          }
        } catch (const Error& e) {
          ++L.symmetry_fail;
          L.note(std::string("symmetry ") + e.what());
        }
      } else if (!rooted_isometric(build_tree(in), expected_infinity_tree(rs, P))) {
        tree_ok = false;
      }
      ++L.sqfree;
      try {
        discriminant_valuation_direct(in);
      } catch (const Error&) {
        ++L.sqfree_fail;
      }
      std::map<int, int> image;
      for (int i : P.less) {
        auto ks = orbits_from(in, i);
        const Orbit& o = rs.orbits[i];
        const std::int64_t n = o.n, m = o.lambda.q.numerator();
        ++L.degrep;
        if (ks.size() != 1 || in.orbits[ks[0]].n != m) {
          ++L.degrep_fail;
          L.note("degree law " + tag);
          continue;
        }
        image[i] = ks[0];
        const Orbit& h = in.orbits[ks[0]];
        ++L.pairs;
        if (!(lambda_at_zero(h) == QInf(Rat(n - m)))) {
          ++L.pairs_fail;
          L.note("pair law " + tag);
        }
        ++L.ess;
        auto got = essential_exponents(support(h.rep), 1);
        PuiseuxSeries groot = o.rep - PuiseuxSeries::constant(P.residue);
        auto ch = characteristic_exponents(groot);
        if (ch.empty() || ch[0] != Rat(m, n) || got != expected_essential(groot, n, m)) {
          ++L.ess_fail;
          L.note("exponent law " + tag);
        }
      }
      for (std::size_t x = 0; x < P.less.size(); ++x)
        for (std::size_t y = 0; y < P.less.size(); ++y) {
          int i = P.less[x], j = P.less[y];
          if (i == j || !image.count(i) || !image.count(j)) continue;
          Rat si = rs.orbits[i].lambda.q / Rat(rs.orbits[i].n), sj = rs.orbits[j].lambda.q / Rat(rs.orbits[j].n);
          if (sj < si) continue;
          Rat kg = contact_exponent(rs, i, j);
          Rat kh = contact_exponent(in, image[i], image[j]);
          Rat want = si == sj ? (Rat(1) / si) * (kg + Rat(1)) - Rat(2) : Rat(1) / sj - Rat(1);
          ++L.contact;
          if (kh != want) {
            ++L.contact_fail;
            L.note("contact law " + tag + " got " + rat_str(kh) + " want " + rat_str(want));
          }
        }
    }
  }
  if (tree_checked) {
    ++L.tree_inputs;
    if (!tree_ok) ++L.tree_fail;
  }
}

std::string first_notes(const std::vector<std::string>& v) {
  std::string s;
  for (auto& x : v) s += " | " + x;
  return s;
}

}  // namespace

int main() {
  auto t_start = std::chrono::steady_clock::now();

  // 1, 3, 12 share the random corpus
  auto corpus1 = corpus::random_corpus(500, 20240601);
  Result c1, c3, c12;
  int bad_inputs = 0, nodes = 0;
  std::map<std::uint32_t, int> per_prime;
  LawCounts laws;
  for (const auto& s : corpus1) {
    ++per_prime[s.p];
    try {
      Analyzed a = analyze(s.p, s.f);
      int direct = discriminant_valuation_direct(a.f);
      Rat tree = disc_from_tree(build_tree(a.rs), a.f.b, a.f.parity(), a.f.degree());
      if (tree != Rat(direct) || a.rep.disc != direct) {
        c1.pass = false;
        c1.detail = "mismatch on " + where(s.p, s.f);
      }
      bool any_bad = false;
      for (const auto& n : a.rep.nodes) {
        ++nodes;
        if (!n.base) {
          any_bad = true;
          if (n.terms.lhs < 0 || n.terms.lhs > n.terms.rhs) {
            c3.pass = false;
            c3.detail = "step violation on " + where(s.p, s.f);
          }
        }
        if (n.conductor > n.disc) {
          c3.pass = false;
          c3.detail = "sub-input violation on " + where(s.p, s.f);
        }
      }
      bad_inputs += any_bad;
      if (a.rep.depth > 2 * a.rep.disc + 2 || !a.rep.measure_ok) {
        c12.pass = false;
        c12.detail = "termination bound fails on " + where(s.p, s.f);
      }
      check_laws(a.rs, laws, where(s.p, s.f));
    } catch (const Error& e) {
      c1.pass = c3.pass = c12.pass = false;
      c1.detail = std::string(error_name(e.kind())) + " on " + where(s.p, s.f) + ": " + e.what();
    }
  }
  if (c1.pass) {
    std::ostringstream os;
    os << corpus1.size() << " inputs (p=11: " << per_prime[11] << ", p=13: " << per_prime[13]
       << ", p=101: " << per_prime[101] << "), " << nodes << " induction nodes, tree = resultant = recursion";
    c1.detail = os.str();
  }
  report(1, "discriminant oracles", c1);

  // 2
  {
    Result r;
    auto base = corpus::base_case_corpus(120, 777);
    for (const auto& s : base) {
      try {
        Analyzed a = analyze(s.p, s.f);
        if (a.rep.minus_art != s.expected || a.rep.disc != s.expected) {
          r.pass = false;
          r.detail = where(s.p, s.f) + " gives " + std::to_string(a.rep.minus_art) + "/" + std::to_string(a.rep.disc) +
                     ", expected " + std::to_string(s.expected);
          break;
        }
      } catch (const Error& e) {
        r.pass = false;
        r.detail = std::string(e.what()) + " on " + where(s.p, s.f);
        break;
      }
    }
    if (r.pass) r.detail = std::to_string(base.size()) + " base-case inputs, minus_art = disc = sum(n_i - 1)";
    report(2, "base case", r);
  }

  if (c3.pass)
    c3.detail = std::to_string(corpus1.size()) + " inputs, " + std::to_string(bad_inputs) +
                " with bad points; 0 <= LHS <= RHS at every step";
  report(3, "global inequality", c3);

  auto family_check = [](int id, const std::string& title, const std::string& fam, int g0, int g1,
                         std::function<int(int)> want) {
    Result r;
    std::string vals;
    for (int g = g0; g <= g1; ++g) {
      try {
        Analyzed a = analyze(101, example_expression(fam, g, 101));
        vals += " g=" + std::to_string(g) + ":" + std::to_string(a.rep.minus_art) + "/" + std::to_string(a.rep.disc);
        if (a.rep.minus_art != want(g) || a.rep.disc != want(g) || !a.rep.verdict.equal) r.pass = false;
      } catch (const Error& e) {
        r.pass = false;
        vals += std::string(" error ") + e.what();
      }
    }
    r.detail = "minus_art/disc" + vals;
    report(id, title, r);
  };
  family_check(4, "eisenstein family", "eisenstein", 1, 5, [](int g) { return 2 * g + 1; });
  family_check(5, "pairs family", "pairs", 2, 5, [](int g) { return 2 * g; });

  // 6
  {
    Result r;
    const std::vector<std::pair<std::string, int>> cases{
        {"x^3 - t", 2}, {"x^3 - t^2", 4}, {"x^3 - t^2*x", 6}, {"x*(x-1)*(x-t)", 2}};
    for (auto& [e, want] : cases) {
      Analyzed a = analyze(101, e);
      r.detail += " " + e + " -> " + std::to_string(a.rep.minus_art) + "/" + std::to_string(a.rep.disc) + ";";
      if (a.rep.minus_art != want || a.rep.disc != want || !a.rep.verdict.equal) r.pass = false;
    }
    report(6, "genus 1 corpus", r);
  }

  // 7
  {
    Result r;
    Analyzed a = analyze(101, example_expression("collision", 2, 101));
    bool w4 = false;
    for (const auto& w : a.rep.verdict.witnesses) w4 |= w.level >= 1 && w.weight == 4;
    r.pass = a.rep.disc == 12 && a.rep.minus_art < 12 && !a.rep.verdict.equal && w4;
    r.detail = "disc " + std::to_string(a.rep.disc) + ", minus_art " + std::to_string(a.rep.minus_art) +
               ", weight-4 witness at replacement level: " + (w4 ? "yes" : "no");
    report(7, "collision example", r);
  }

  // 8
  {
    Result r;
    auto col = corpus::collision_corpus(60, 4242);
    int strict = 0;
    for (const auto& s : col) {
      Analyzed a = analyze(s.p, s.f);
      if (a.rep.verdict.equal || a.rep.minus_art >= a.rep.disc) {
        r.pass = false;
        r.detail = "equality on " + where(s.p, s.f);
        break;
      }
      ++strict;
    }
    if (r.pass) r.detail = std::to_string(strict) + " inputs with >= 4 factors through a point, all strict";
    report(8, "weight-4 rule", r);
  }

  // 9: minimal polynomial of t^{2/3} + t^{5/6} over F_13
  {
    Result r;
    Analyzed a = analyze(13, "x^6 - 2*t^2*x^3 - 9*t^3*x^2 - 6*t^4*x + t^4 - t^5");
    MetricTree T = build_tree(a.rs);
    std::string sig = canonical_signature(T);
    bool fig1 = sig == "N0/1{N2/3{N5/6{L,L},N5/6{L,L},N5/6{L,L}}}" && T.leaf_count() == 6;
    Rat d = disc_from_tree(T, a.f.b, a.f.parity(), a.f.degree());
    std::ostringstream os;
    os << "tree " << sig << ", disc " << rat_pretty(d) << " (direct " << discriminant_valuation_direct(a.f) << ")";
    r.pass = fig1 && d == Rat(21) && discriminant_valuation_direct(a.f) == 21;
    // replacement chain
    RootSystem cur = a.rs;
    const std::vector<std::pair<Rat, Rat>> want{{Rat(1, 2), Rat(1, 4)}, {Rat(1), Rat(1, 2)}};
    for (const auto& [trunk, inner] : want) {
      auto pts = classify(cur);
      const ClusterPoint* P = nullptr;
      for (auto& q : pts)
        if (q.bad && !q.at_infinity) P = &q;
      if (!P) {
        r.pass = false;
        break;
      }
      cur = replace_infinity(cur, *P);
      MetricTree t = build_tree(cur);
      Rat deepest(0);
      for (int v : t.internal_depth_nodes()) deepest = std::max(deepest, t.nodes[v].depth);
      Rat val = cur.orbits.at(0).rep.valuation().q;
      os << "; next trunk " << rat_pretty(val) << " inner " << rat_pretty(deepest - val);
      if (cur.orbits.size() != 1 || val != trunk || deepest - val != inner) r.pass = false;
    }
    r.detail = os.str();
    report(9, "metric tree figure", r);
  }

  // 10, 11: random corpus plus planted branches
  auto singles = corpus::branch_corpus(150, 99, false);
  auto doubles = corpus::branch_corpus(200, 100, true);
  for (const auto* set : {&singles, &doubles})
    for (const auto& s : *set) {
      try {
        Analyzed a = analyze(s.p, s.f);
        check_laws(a.rs, laws, where(s.p, s.f));
      } catch (const Error& e) {
        laws.note(std::string("error ") + e.what() + " on " + where(s.p, s.f));
        ++laws.tree_fail;
      }
    }
  {
    Result r;
    r.pass = laws.tree_inputs >= 200 && laws.tree_fail == 0 && laws.ess >= 100 && laws.ess_fail == 0;
    std::ostringstream os;
    os << laws.tree_inputs << " inputs with replacement tree checks (" << laws.tree_fail << " failed); exponent law on "
       << laws.ess << " branches (" << laws.ess_fail << " failed)";
    if (!r.pass) os << first_notes(laws.notes);
    r.detail = os.str();
    report(10, "replacement tree laws", r);
  }
  {
    Result r;
    auto ok = [](int n, int f) { return n >= 100 && f == 0; };
    r.pass = ok(laws.sqfree, laws.sqfree_fail) && ok(laws.degrep, laws.degrep_fail) && ok(laws.pairs, laws.pairs_fail) &&
             ok(laws.contact, laws.contact_fail) && ok(laws.symmetry, laws.symmetry_fail) &&
             ok(laws.multiset, laws.multiset_fail);
    std::ostringstream os;
    os << "repsqfree " << laws.sqfree - laws.sqfree_fail << "/" << laws.sqfree << ", degrep "
       << laws.degrep - laws.degrep_fail << "/" << laws.degrep << ", pair law " << laws.pairs - laws.pairs_fail << "/"
       << laws.pairs << ", contact " << laws.contact - laws.contact_fail << "/" << laws.contact << ", orbit size "
       << laws.symmetry - laws.symmetry_fail << "/" << laws.symmetry << ", contact multiset "
       << laws.multiset - laws.multiset_fail << "/" << laws.multiset;
    if (!r.pass) os << first_notes(laws.notes);
    r.detail = os.str();
    report(11, "structural laws", r);
  }

  if (c12.pass) c12.detail = "depth <= 2 v(disc) + 2 and measure decreases within two steps on all inputs";
  report(12, "termination", c12);

  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  std::cout << "total " << secs << " s, " << failures << " failing\n";
  return failures == 0 ? 0 : 1;
}
