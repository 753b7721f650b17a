#include <numeric>
#include "cdineq/newton.hpp"

#include <algorithm>

namespace cdineq {

// ---------- BiPoly ----------

int BiPoly::x_degree() const {
  int d = -1;
  for (auto& [jk, c] : terms) d = std::max(d, jk.first);
  return d;
}

void BiPoly::add(int j, int k, std::int64_t c) {
  std::int64_t r = c % static_cast<std::int64_t>(p);
  if (r < 0) r += p;
  auto key = std::make_pair(j, k);
  auto it = terms.find(key);
  std::uint64_t v = (it == terms.end() ? 0 : it->second) + static_cast<std::uint64_t>(r);
  v %= p;
  if (v == 0) {
    if (it != terms.end()) terms.erase(it);
  } else {
    terms[key] = static_cast<std::uint32_t>(v);
  }
}

BiPoly bi_add(const BiPoly& a, const BiPoly& b) {
  BiPoly r = a;
  r.p = a.p ? a.p : b.p;
  for (auto& [jk, c] : b.terms) r.add(jk.first, jk.second, c);
  return r;
}

BiPoly bi_neg(const BiPoly& a) {
  BiPoly r;
  r.p = a.p;
  for (auto& [jk, c] : a.terms) r.add(jk.first, jk.second, -static_cast<std::int64_t>(c));
  return r;
}

BiPoly bi_mul(const BiPoly& a, const BiPoly& b) {
  BiPoly r;
  r.p = a.p ? a.p : b.p;
  for (auto& [ja, ca] : a.terms)
    for (auto& [jb, cb] : b.terms)
      r.add(ja.first + jb.first, ja.second + jb.second,
            static_cast<std::int64_t>(static_cast<std::uint64_t>(ca) * cb % r.p));
  return r;
}

BiPoly bi_pow(const BiPoly& a, unsigned k) {
  BiPoly r;
  r.p = a.p;
  r.add(0, 0, 1);
  BiPoly base = a;
  while (k) {
    if (k & 1) r = bi_mul(r, base);
    k >>= 1;
    if (k) base = bi_mul(base, base);
  }
  return r;
}

std::string bi_to_string(const BiPoly& a) {
  if (a.terms.empty()) return "0";
  std::string out;
  // highest x-degree first, then highest t-degree
  std::vector<std::pair<std::pair<int, int>, std::uint32_t>> v(a.terms.begin(), a.terms.end());
  std::sort(v.begin(), v.end(), [](auto& l, auto& r) { return l.first > r.first; });
  bool first = true;
  for (auto& [jk, c] : v) {
    auto [j, k] = jk;
    std::int64_t s = c;
    if (s > static_cast<std::int64_t>(a.p / 2)) s -= a.p;
    bool neg = s < 0;
    std::uint64_t mag = static_cast<std::uint64_t>(neg ? -s : s);
    if (first)
      out += neg ? "-" : "";
    else
      out += neg ? " - " : " + ";
    first = false;
    std::string mono;
    if (j > 0) mono += j == 1 ? "x" : "x^" + std::to_string(j);
    if (k > 0) {
      if (!mono.empty()) mono += "*";
      mono += k == 1 ? "t" : "t^" + std::to_string(k);
    }
    if (mono.empty())
      out += std::to_string(mag);
    else if (mag == 1)
      out += mono;
    else
      out += std::to_string(mag) + "*" + mono;
  }
  return out;
}

SeriesPoly to_series_poly(const FieldTower& tw, const BiPoly& f) {
  const int D = f.x_degree();
  std::vector<std::vector<PuiseuxSeries::Term>> cols(static_cast<std::size_t>(std::max(D + 1, 0)));
  for (auto& [jk, c] : f.terms) cols[jk.first].push_back({jk.second, FieldElem::from_int(tw, c)});
  SeriesPoly out;
  for (auto& t : cols) out.push_back(PuiseuxSeries::from_terms(tw, 1, t));
  return out;
}

// ---------- x-polynomial helpers ----------

void poly_trim(SeriesPoly& f) {
  while (!f.empty() && f.back().is_exact_zero()) f.pop_back();
}

namespace {

std::vector<std::vector<std::int64_t>> binomials(int n, std::int64_t p) {
  std::vector<std::vector<std::int64_t>> C(n + 1);
  for (int i = 0; i <= n; ++i) {
    C[i].assign(i + 1, 1);
    for (int j = 1; j < i; ++j) C[i][j] = (C[i - 1][j - 1] + C[i - 1][j]) % p;
  }
  return C;
}

struct NeedMore {};

bool exact_integral(const PuiseuxSeries& s) { return s.is_exact() && s.e() == 1; }

}  // namespace

SeriesPoly poly_derivative(const SeriesPoly& f) {
  SeriesPoly out;
  if (f.size() <= 1) return out;
  const FieldTower& tw = *f[0].tower();
  for (std::size_t j = 1; j < f.size(); ++j)
    out.push_back(scale(f[j], FieldElem::from_int(tw, static_cast<std::int64_t>(j))));
  poly_trim(out);
  return out;
}

SeriesPoly taylor_shift(const SeriesPoly& f, const PuiseuxSeries& m) {
  const int D = static_cast<int>(f.size()) - 1;
  if (D < 0) return f;
  const FieldTower& tw = *m.tower();
  auto C = binomials(D, tw.p());
  SeriesPoly out(D + 1);
  if (m.is_exact() && m.terms().size() <= 1) {
    // f_i m^{i-j} is a rescaled, shifted copy of f_i
    const FieldElem c = m.empty() ? FieldElem::zero(tw) : m.terms()[0].second;
    const Rat g = m.empty() ? Rat(0) : m.exponent(0);
    std::vector<FieldElem> cp(D + 1);
    cp[0] = FieldElem::one(tw);
    for (int k = 1; k <= D; ++k) cp[k] = cp[k - 1] * c;
    for (int j = 0; j <= D; ++j) {
      std::int64_t E = g.denominator();
      QInf prec = QInf::infinity();
      for (int i = j; i <= D; ++i) {
        if (f[i].is_exact_zero() || C[i][j] == 0 || cp[i - j].is_zero()) continue;
        E = std::lcm(E, f[i].e());
        prec = min(prec, f[i].precision() + QInf(g * Rat(i - j)));
      }
      std::vector<PuiseuxSeries::Term> acc;
      for (int i = j; i <= D; ++i) {
        if (f[i].is_exact_zero() || C[i][j] == 0 || cp[i - j].is_zero()) continue;
        const FieldElem k = cp[i - j] * FieldElem::from_int(tw, C[i][j]);
        const std::int64_t r = E / f[i].e();
        const std::int64_t sh = (g * Rat(i - j) * Rat(E)).numerator();
        for (auto& [e, x] : f[i].terms()) acc.emplace_back(e * r + sh, x * k);
      }
      out[j] = PuiseuxSeries::from_terms(tw, E, std::move(acc), prec);
    }
    poly_trim(out);
    return out;
  }
  std::vector<PuiseuxSeries> mp(D + 1);
  mp[0] = PuiseuxSeries::constant(FieldElem::one(tw));
  for (int k = 1; k <= D; ++k) mp[k] = mul(mp[k - 1], m);
  for (int j = 0; j <= D; ++j) {
    // collect every contribution, then normalize once
    std::vector<PuiseuxSeries> parts;
    std::int64_t E = 1;
    QInf prec = QInf::infinity();
    for (int i = j; i <= D; ++i) {
      if (f[i].is_exact_zero()) continue;
      std::int64_t c = C[i][j];
      if (c == 0) continue;
      parts.push_back(scale(mul(f[i], mp[i - j]), FieldElem::from_int(tw, c)));
      E = std::lcm(E, parts.back().e());
      prec = min(prec, parts.back().precision());
    }
    std::vector<PuiseuxSeries::Term> acc;
    for (auto& q : parts) {
      const std::int64_t r = E / q.e();
      for (auto& [k, x] : q.terms()) acc.emplace_back(k * r, x);
    }
    out[j] = PuiseuxSeries::from_terms(tw, E, std::move(acc), prec);
  }
  poly_trim(out);
  return out;
}

PuiseuxSeries poly_eval(const SeriesPoly& f, const PuiseuxSeries& x, QInf cap) {
  const FieldTower& tw = *x.tower();
  PuiseuxSeries r = PuiseuxSeries::zero(tw);
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) r = mul(r, x, cap) + f[i].truncated(cap);
  return r;
}

std::string poly_to_string(const SeriesPoly& f) {
  std::string out;
  for (int j = static_cast<int>(f.size()) - 1; j >= 0; --j) {
    if (f[j].is_exact_zero()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + to_string(f[j]) + ")";
    if (j >= 1) out += j == 1 ? "*x" : "*x^" + std::to_string(j);
  }
  return out.empty() ? "0" : out;
}

// ---------- Newton polygon ----------

std::vector<Segment> newton_polygon(const SeriesPoly& g0) {
  SeriesPoly g = g0;
  poly_trim(g);
  std::vector<std::pair<Rat, Rat>> pts;
  int jmin = -1;
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (g[j].empty()) continue;
    if (jmin < 0) jmin = static_cast<int>(j);
    pts.push_back({Rat(static_cast<std::int64_t>(j)), g[j].exponent(0)});
  }
  std::vector<Segment> out;
  if (pts.empty()) return out;
  std::vector<std::pair<Rat, Rat>> hull;
  for (auto& P : pts) {
    while (hull.size() >= 2) {
      auto& A = hull[hull.size() - 2];
      auto& B = hull[hull.size() - 1];
      Rat cross = (B.first - A.first) * (P.second - A.second) - (B.second - A.second) * (P.first - A.first);
      if (cross <= Rat(0))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(P);
  }
  for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
    Rat dj = hull[i + 1].first - hull[i].first;
    Rat slope = (hull[i].second - hull[i + 1].second) / dj;
    out.push_back({QInf(slope), static_cast<int>(dj.numerator())});
  }
  std::reverse(out.begin(), out.end());
  if (jmin > 0) out.push_back({QInf::infinity(), jmin});
  return out;
}

std::vector<Segment> newton_polygon(const ExactPoly& f) { return newton_polygon(f.g); }

// ---------- normalization ----------

namespace {

int max_t_degree(const SeriesPoly& g) {
  int T = 0;
  for (auto& c : g)
    if (!c.empty()) T = std::max<int>(T, static_cast<int>(floor_rat(c.max_exponent())));
  return T;
}

// valuation of the Sylvester determinant with all arithmetic truncated at W
QInf sylvester_valuation(const SeriesPoly& f, const SeriesPoly& g, Rat W) {
  const FieldTower& tw = *f[0].tower();
  const int m = static_cast<int>(f.size()) - 1, n = static_cast<int>(g.size()) - 1;
  const int S = m + n;
  if (S == 0) return QInf(Rat(0));
  QInf cap(W);
  std::vector<std::vector<PuiseuxSeries>> M(S, std::vector<PuiseuxSeries>(S, PuiseuxSeries::zero(tw)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= m; ++j) M[i][i + j] = f[m - j].truncated(cap);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j <= n; ++j) M[n + i][i + j] = g[n - j].truncated(cap);
  Rat sum(0);
  for (int c = 0; c < S; ++c) {
    int piv = -1;
    bool all_exact_zero = true;
    for (int r = c; r < S; ++r) {
      if (!M[r][c].is_exact_zero()) all_exact_zero = false;
      if (M[r][c].empty()) continue;
      if (piv < 0 || M[r][c].exponent(0) < M[piv][c].exponent(0)) piv = r;
    }
    if (piv < 0) {
      if (all_exact_zero) return QInf::infinity();
      throw NeedMore{};
    }
    std::swap(M[piv], M[c]);
    const PuiseuxSeries& P = M[c][c];
    sum += P.exponent(0);
    for (int r = c + 1; r < S; ++r) {
      if (M[r][c].is_exact_zero()) continue;
      PuiseuxSeries q = divide(M[r][c], P, cap);
      for (int k = c; k < S; ++k) {
        if (M[c][k].is_exact_zero()) continue;
        M[r][k] = (M[r][k] - mul(q, M[c][k], cap)).truncated(cap);
      }
    }
  }
  return QInf(sum);
}

// Exact-input resultant valuation; infinity means the determinant vanishes.
QInf exact_resultant_valuation(const SeriesPoly& f, const SeriesPoly& g) {
  const int S = static_cast<int>(f.size() + g.size()) - 2;
  const int T = std::max(max_t_degree(f), max_t_degree(g));
  const std::int64_t bound = static_cast<std::int64_t>(S) * T;  // degree bound of the determinant
  const std::int64_t limit = 2 * bound + 8;
  for (std::int64_t W = 16;; W *= 2) {
    try {
      return sylvester_valuation(f, g, Rat(std::min(W, limit)));
    } catch (NeedMore&) {
      if (W >= limit) return QInf::infinity();
    }
  }
}

}  // namespace

ExactPoly parse_and_normalize(const FieldTower& tw, const SeriesPoly& raw0) {
  SeriesPoly raw = raw0;
  poly_trim(raw);
  if (raw.empty()) fail(ErrorKind::NotSquarefree, "the zero polynomial is not squarefree");
  for (auto& c : raw)
    if (!exact_integral(c)) fail(ErrorKind::InvalidArgument, "input coefficients must be exact polynomials in t");
  const int D = static_cast<int>(raw.size()) - 1;
  if (D < 1) fail(ErrorKind::InvalidArgument, "polynomial must have positive degree in x");
  if (static_cast<std::uint32_t>(D) >= tw.p())
    fail(ErrorKind::WildCharacteristic, "p = " + std::to_string(tw.p()) + " does not exceed deg f = " + std::to_string(D));
  Rat b(1 << 30);
  for (auto& c : raw)
    if (!c.empty()) b = std::min(b, c.exponent(0));
  if (b >= Rat(2)) fail(ErrorKind::NotSquarefree, "t^2 divides f");
  ExactPoly f;
  f.tower = &tw;
  f.b = static_cast<int>(b.numerator());
  for (auto& c : raw) f.g.push_back(shift(c, -b));
  if (f.g.back().valuation() != QInf(Rat(0)))
    fail(ErrorKind::NonUnitLeadingCoefficient, "leading x-coefficient is not a unit in F_p[[t]]");
  if (D >= 1) {
    QInf v = exact_resultant_valuation(f.g, poly_derivative(f.g));
    if (v.is_inf()) fail(ErrorKind::NotSquarefree, "f has a repeated factor");
  }
  return f;
}

// ---------- Newton-Puiseux ----------

namespace {

struct NPContext {
  const FieldTower& tw;
  const SeriesPoly& G;  // the exact chart
  Rat N;
  QInf M;  // working coefficients are known below t^M
  std::vector<PuiseuxSeries> out;
};

// The truncated coefficients do not determine the answer; retry with a larger M.
struct Uncertified {};

// Everything but exact zeros and the leading coefficient is cut at t^M.
SeriesPoly cut(const SeriesPoly& G, QInf M) {
  SeriesPoly H = G;
  if (M.is_inf()) return H;
  for (std::size_t j = 0; j + 1 < H.size(); ++j)
    if (!H[j].is_exact_zero()) H[j] = H[j].truncated(M);
  return H;
}

bool unknown(const PuiseuxSeries& c) { return c.empty() && !c.is_exact_zero(); }

// min_j v(H_j) + s*j over the known coefficients
Rat support_value(const SeriesPoly& H, Rat s) {
  bool first = true;
  Rat L(0);
  for (std::size_t j = 0; j < H.size(); ++j) {
    if (H[j].empty()) continue;
    Rat v = H[j].exponent(0) + s * Rat(static_cast<std::int64_t>(j));
    if (first || v < L) L = v;
    first = false;
  }
  return L;
}

// No unknown coefficient may reach the supporting line of slope s.
void certify_line(const SeriesPoly& H, Rat s) {
  const Rat L = support_value(H, s);
  for (std::size_t j = 0; j < H.size(); ++j)
    if (unknown(H[j]) && !(L < H[j].precision().q + s * Rat(static_cast<std::int64_t>(j)))) throw Uncertified{};
}

bool exact_root(const NPContext& ctx, const PuiseuxSeries& z) { return poly_eval(ctx.G, z).is_exact_zero(); }

PuiseuxSeries with_prec(const PuiseuxSeries& z, Rat N) {
  return PuiseuxSeries::from_terms(*z.tower(), z.e(), z.terms(), QInf(N));
}

void single_root(NPContext& ctx, SeriesPoly H, PuiseuxSeries z, Rat gamma) {
  if (H[0].is_exact_zero()) {
    ctx.out.push_back(z);
    return;
  }
  check_invariant(H.size() >= 2 && !H[1].is_exact_zero(), "simple root without a linear term");
  if (H[1].empty()) throw Uncertified{};
  const Rat kappa = H[1].exponent(0);
  const QInf B(ctx.N + kappa);
  for (auto& h : H) h = h.truncated(B);
  for (;;) {
    if (H[0].empty()) {
      if (H[0].is_exact_zero() || exact_root(ctx, z))
        ctx.out.push_back(z);
      else if (H[0].precision() < B)
        throw Uncertified{};
      else
        ctx.out.push_back(with_prec(z, ctx.N));
      return;
    }
    if (H[1].empty()) throw Uncertified{};
    check_invariant(H[1].exponent(0) == kappa, "linear coefficient changed valuation");
    const Rat g2 = H[0].exponent(0) - kappa;
    check_invariant(g2 > gamma, "Newton step did not increase the valuation");
    if (g2 >= ctx.N) {
      ctx.out.push_back(with_prec(z, ctx.N));
      return;
    }
    const FieldElem c = -(H[0].lead_coeff() / H[1].lead_coeff());
    PuiseuxSeries m = PuiseuxSeries::monomial(c, g2);
    z = z + m;
    H = taylor_shift(H, m);
    gamma = g2;
  }
}

void expand(NPContext& ctx, SeriesPoly H, const PuiseuxSeries& z, QInf mu, bool strict) {
  poly_trim(H);
  if (H.empty()) fail(ErrorKind::InvariantViolation, "chart polynomial vanished");
  bool z_is_root = false;
  if (H[0].is_exact_zero()) {
    std::size_t j = 0;
    while (j < H.size() && H[j].is_exact_zero()) ++j;
    if (j > 1) fail(ErrorKind::NotSquarefree, "repeated root in chart");
    z_is_root = true;
    ctx.out.push_back(z);
  }
  auto segs = newton_polygon(H);
  // roots at or beyond the working precision, counted but not expanded
  int deep = 0;
  for (auto& seg : segs) {
    if (seg.slope.is_inf()) {
      deep += seg.length - (z_is_root ? 1 : 0);
      continue;
    }
    const Rat gamma = seg.slope.q;
    if (strict ? !(mu < QInf(gamma)) : QInf(gamma) < mu) continue;
    if (gamma >= ctx.N) {
      deep += seg.length;
      continue;
    }
    certify_line(H, gamma);
    // locate the edge: the leftmost j on the supporting line
    Rat L(0);
    int j1 = -1;
    for (std::size_t j = 0; j < H.size(); ++j) {
      if (H[j].empty()) continue;
      Rat v = H[j].exponent(0) + gamma * Rat(static_cast<std::int64_t>(j));
      if (j1 < 0 || v < L) {
        L = v;
        j1 = static_cast<int>(j);
      }
    }
    UPoly phi;
    for (int j = j1; j <= j1 + seg.length; ++j) {
      Rat ex = L - gamma * Rat(j);
      phi.push_back(H[j].is_exact_zero() ? FieldElem::zero(ctx.tw) : H[j].coeff(ex));
    }
    for (auto& [c, r] : roots_of(phi)) {
      PuiseuxSeries m = PuiseuxSeries::monomial(c, gamma);
      PuiseuxSeries z2 = z + m;
      SeriesPoly H2 = taylor_shift(H, m);
      if (r == 1)
        single_root(ctx, std::move(H2), std::move(z2), gamma);
      else
        expand(ctx, std::move(H2), z2, QInf(gamma), true);
    }
  }
  if (deep > 0) certify_line(H, ctx.N);
  if (!z_is_root && deep > 0 && !ctx.M.is_inf() && unknown(H[0]) && exact_root(ctx, z)) {
    ctx.out.push_back(z);
    --deep;
  }
  for (int i = 0; i < deep; ++i) ctx.out.push_back(with_prec(z, ctx.N));
}

// Starting cut: a margin of (r + 1) N above the lowest coefficient valuation,
// r the number of roots in the chart's region.
QInf initial_cut(const Chart& chart, Rat N) {
  int r = 0;
  for (auto& seg : newton_polygon(chart.G))
    if (chart.strict ? QInf(Rat(0)) < seg.slope : !(seg.slope < QInf(Rat(0)))) r += seg.length;
  Rat v0(0);
  for (auto& c : chart.G)
    if (!c.empty()) {
      v0 = c.exponent(0);
      break;
    }
  return QInf(v0 + N * Rat(r + 1) + Rat(1));
}

std::vector<PuiseuxSeries> chart_roots(const FieldTower& tw, const Chart& chart, Rat N) {
  QInf M = initial_cut(chart, N);
  const Rat limit = M.q * Rat(64);
  for (;;) {
    NPContext ctx{tw, chart.G, N, M, {}};
    try {
      expand(ctx, cut(chart.G, M), PuiseuxSeries::zero(tw), QInf(Rat(0)), chart.strict);
      return std::move(ctx.out);
    } catch (const Uncertified&) {
      check_invariant(!M.is_inf(), "exact expansion reported missing precision");
    }
    M = M.q * Rat(2) > limit ? QInf::infinity() : QInf(M.q * Rat(2));
  }
}

// separation, orbit grouping, residues and lambdas; false if more precision is needed
bool certify(const FieldTower& tw, const std::vector<PuiseuxSeries>& roots, std::vector<Orbit>& orbits) {
  FieldTower& T = const_cast<FieldTower&>(tw);
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if ((roots[i] - roots[j]).empty()) return false;
  std::vector<bool> used(roots.size(), false);
  orbits.clear();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    const PuiseuxSeries& r = roots[i];
    const std::int64_t n = r.e();
    if (n > 1) {
      auto zetas = T.nth_roots_of_unity(static_cast<unsigned>(n));
      for (std::int64_t k = 1; k < n; ++k) {
        PuiseuxSeries c = twist(r, n, zetas[k]);
        bool found = false;
        for (std::size_t j = 0; j < roots.size() && !found; ++j)
          if (!used[j] && agree(c, roots[j])) {
            used[j] = true;
            found = true;
          }
        check_invariant(found, "conjugate of a root is missing from the root list");
      }
    }
    Orbit o;
    o.n = static_cast<int>(n);
    o.rep = r;
    o.residue = r.coeff(Rat(0));
    PuiseuxSeries eta = r - PuiseuxSeries::constant(o.residue);
    if (eta.is_exact_zero()) {
      o.lambda = QInf::infinity();
    } else {
      if (eta.empty()) return false;
      o.lambda = QInf(eta.exponent(0) * Rat(n));
    }
    orbits.push_back(std::move(o));
  }
  return true;
}

}  // namespace

int RootSystem::degree() const {
  int d = 0;
  for (auto& o : orbits) d += o.n;
  return d;
}

std::vector<PuiseuxSeries> RootSystem::conjugates(std::size_t i) const {
  const Orbit& o = orbits[i];
  if (o.n == 1) return {o.rep};
  auto zetas = const_cast<FieldTower*>(tower)->nth_roots_of_unity(static_cast<unsigned>(o.n));
  std::vector<PuiseuxSeries> out;
  for (int k = 0; k < o.n; ++k) out.push_back(twist(o.rep, o.n, zetas[k]));
  return out;
}

std::vector<PuiseuxSeries> RootSystem::all_roots() const {
  std::vector<PuiseuxSeries> out;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    auto c = conjugates(i);
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

RootSystem solve_chart(const FieldTower& tw, int b, const Chart& chart, const SolveConfig& cfg, Rat order) {
  Rat N = cfg.initial;
  while (N < order) N *= Rat(2);
  for (;;) {
    if (N > cfg.cap)
      fail(ErrorKind::PrecisionExhausted,
           "roots not separated below the precision cap " + rat_pretty(cfg.cap));
    auto roots = chart_roots(tw, chart, N);
    RootSystem rs;
    rs.tower = &tw;
    rs.b = b;
    rs.chart = chart;
    rs.precision = N;
    if (certify(tw, roots, rs.orbits)) return rs;
    N *= Rat(2);
  }
}

RootSystem puiseux_roots(const ExactPoly& f, const SolveConfig& cfg, Rat order) {
  return solve_chart(*f.tower, f.b, Chart{f.g, false}, cfg, order);
}

RootSystem refine(const RootSystem& rs, Rat order, const SolveConfig& cfg) {
  if (order <= rs.precision) return rs;
  SolveConfig c = cfg;
  c.cap = std::max(cfg.cap, order);
  RootSystem fresh = solve_chart(*rs.tower, rs.b, rs.chart, c, order);
  // keep the orbit order and the chosen representatives
  RootSystem out = fresh;
  out.orbits.clear();
  std::vector<bool> used(fresh.orbits.size(), false);
  for (auto& old : rs.orbits) {
    bool found = false;
    for (std::size_t i = 0; i < fresh.orbits.size() && !found; ++i) {
      if (used[i] || fresh.orbits[i].n != old.n) continue;
      for (auto& conj : fresh.conjugates(i))
        if (agree(conj, old.rep)) {
          Orbit o = fresh.orbits[i];
          o.rep = conj;
          o.origin = old.origin;
          out.orbits.push_back(std::move(o));
          used[i] = true;
          found = true;
          break;
        }
    }
    check_invariant(found, "refined root system lost an orbit");
  }
  return out;
}

SeriesPoly materialize_roots(const FieldTower& tw, const std::vector<PuiseuxSeries>& roots, QInf precision) {
  SeriesPoly P{PuiseuxSeries::constant(FieldElem::one(tw))};
  for (auto& r : roots) {
    SeriesPoly Q(P.size() + 1, PuiseuxSeries::zero(tw));
    for (std::size_t j = 0; j < P.size(); ++j) {
      Q[j + 1] = Q[j + 1] + P[j];
      Q[j] = (Q[j] - mul(r, P[j], precision)).truncated(precision);
    }
    P = std::move(Q);
  }
  for (auto& c : P)
    check_invariant(c.e() == 1, "materialized coefficient is not invariant under the twisting action");
  return P;
}

SeriesPoly materialize(const RootSystem& rs, QInf precision) {
  return materialize_roots(*rs.tower, rs.all_roots(), precision);
}

SeriesPoly materialize_orbit(const RootSystem& rs, std::size_t i, QInf precision) {
  return materialize_roots(*rs.tower, rs.conjugates(i), precision);
}

QInf resultant_valuation(const SeriesPoly& f0, const SeriesPoly& g0, Rat work) {
  SeriesPoly f = f0, g = g0;
  poly_trim(f);
  poly_trim(g);
  if (f.empty() || g.empty()) fail(ErrorKind::InvalidArgument, "resultant of a zero polynomial");
  QInf Pmax = QInf::infinity();
  for (auto& c : f) Pmax = min(Pmax, c.precision());
  for (auto& c : g) Pmax = min(Pmax, c.precision());
  Rat W = work;
  for (int it = 0; it < 12; ++it) {
    try {
      return sylvester_valuation(f, g, W);
    } catch (NeedMore&) {
      if (!Pmax.is_inf() && W >= Pmax.q) break;
      W *= Rat(2);
    }
  }
  fail(ErrorKind::PrecisionExhausted, "resultant valuation not certified at the available precision");
}

int discriminant_valuation_direct(const ExactPoly& f) {
  const int D = f.degree();
  const int d = f.parity();
  QInf v = exact_resultant_valuation(f.g, poly_derivative(f.g));
  if (v.is_inf()) fail(ErrorKind::NotSquarefree, "discriminant vanishes");
  check_invariant(is_integer(v.q), "discriminant valuation is not an integer");
  return 2 * f.b * (d + D - 1) + static_cast<int>(v.q.numerator());
}

int discriminant_valuation_direct(const RootSystem& rs0, const SolveConfig& cfg) {
  const int D = rs0.degree();
  if (D == 0) return 0;
  const int d = rs0.parity();
  RootSystem rs = rs0;
  for (;;) {
    try {
      SeriesPoly M = materialize(rs, QInf(rs.precision));
      QInf v = resultant_valuation(M, poly_derivative(M), rs.precision);
      check_invariant(!v.is_inf() && is_integer(v.q), "discriminant valuation of a separated system");
      return 2 * rs.b * (d + D - 1) + static_cast<int>(v.q.numerator());
    } catch (Error& e) {
      if (e.kind() != ErrorKind::PrecisionExhausted) throw;
      if (rs.precision * Rat(2) > std::max(cfg.cap, Rat(4096))) throw;
      rs = refine(rs, rs.precision * Rat(2), cfg);
    }
  }
}

// ---------- charts ----------

namespace {

SeriesPoly remove_content(SeriesPoly H) {
  poly_trim(H);
  Rat c(1 << 30);
  for (auto& h : H)
    if (!h.empty()) c = std::min(c, h.exponent(0));
  if (c != Rat(0))
    for (auto& h : H) h = shift(h, -c);
  return H;
}

}  // namespace

SeriesPoly smooth_chart(const SeriesPoly& G, const FieldElem& a) {
  SeriesPoly H = taylor_shift(G, PuiseuxSeries::constant(a));
  for (std::size_t j = 0; j < H.size(); ++j) H[j] = shift(H[j], Rat(static_cast<std::int64_t>(j)));
  return remove_content(std::move(H));
}

SeriesPoly infinity_chart(const SeriesPoly& G, const FieldElem& a, int b) {
  const FieldTower& tw = *a.tower();
  int D = static_cast<int>(G.size()) - 1;
  auto C = binomials(std::max(D, 0), tw.p());
  // coefficient of X^k: T^k * sum_j g_{jk} (a + T)^j
  std::map<int, std::vector<PuiseuxSeries::Term>> cols;
  std::vector<FieldElem> apow(D + 1);
  apow[0] = FieldElem::one(tw);
  for (int i = 1; i <= D; ++i) apow[i] = apow[i - 1] * a;
  for (int j = 0; j <= D; ++j) {
    check_invariant(exact_integral(G[j]), "chart polynomial must have exact integral coefficients");
    for (auto& [k, c] : G[j].terms())
      for (int i = 0; i <= j; ++i) {
        if (C[j][i] == 0) continue;
        FieldElem v = c * apow[j - i] * FieldElem::from_int(tw, C[j][i]);
        cols[static_cast<int>(k)].push_back({k + i, v});
      }
  }
  int K = cols.empty() ? 0 : cols.rbegin()->first;
  SeriesPoly H(K + b + 1, PuiseuxSeries::zero(tw));
  for (auto& [k, terms] : cols) H[k + b] = PuiseuxSeries::from_terms(tw, 1, terms);
  return remove_content(std::move(H));
}

int multiplicity_at(const SeriesPoly& G, int b, const FieldElem& a) {
  // the leading term bounds the answer, so everything past it can be cut
  const int D = static_cast<int>(G.size()) - 1;
  check_invariant(D >= 0 && !G[D].empty(), "multiplicity of the zero polynomial");
  Rat best = G[D].exponent(0) + Rat(D);
  SeriesPoly Gc = G;
  for (auto& c : Gc)
    if (!c.is_exact_zero()) c = c.truncated(QInf(best));
  SeriesPoly H = taylor_shift(Gc, PuiseuxSeries::constant(a));
  for (std::size_t j = 0; j < H.size(); ++j)
    if (!H[j].empty()) best = std::min(best, H[j].exponent(0) + Rat(static_cast<std::int64_t>(j)));
  check_invariant(is_integer(best), "multiplicity is not an integer");
  return b + static_cast<int>(best.numerator());
}

}  // namespace cdineq
