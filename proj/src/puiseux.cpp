#include "cdineq/puiseux.hpp"

#include <algorithm>
#include <iterator>
#include <limits>

namespace cdineq {

PuiseuxSeries build(const FieldTower* tw, std::int64_t e, std::vector<PuiseuxSeries::Term> terms, QInf prec) {
  PuiseuxSeries s;
  s.tower_ = tw;
  s.e_ = e;
  s.terms_ = std::move(terms);
  s.prec_ = prec;
  s.normalize();
  return s;
}

PuiseuxSeries::PuiseuxSeries(const FieldTower* tw, QInf prec) : tower_(tw), prec_(prec) {}

void PuiseuxSeries::normalize() {
  auto by_exp = [](const Term& a, const Term& b) { return a.first < b.first; };
  if (!std::is_sorted(terms_.begin(), terms_.end(), by_exp)) std::sort(terms_.begin(), terms_.end(), by_exp);
  // merge equal exponents, drop zeros and everything at or past the precision, in place
  std::int64_t kmax = std::numeric_limits<std::int64_t>::max();
  if (!prec_.is_inf()) kmax = ceil_rat(prec_.q * e_);
  std::size_t w = 0;
  for (std::size_t r = 0; r < terms_.size();) {
    std::int64_t k = terms_[r].first;
    if (k >= kmax) break;
    FieldElem c = std::move(terms_[r].second);
    for (++r; r < terms_.size() && terms_[r].first == k; ++r) c += terms_[r].second;
    if (c.is_zero()) continue;
    terms_[w].first = k;
    terms_[w].second = std::move(c);
    ++w;
  }
  terms_.resize(w);
  std::int64_t g = e_;
  for (auto& t : terms_) g = gcd64(g, t.first);
  if (terms_.empty()) g = e_;
  if (g > 1) {
    for (auto& t : terms_) t.first /= g;
    e_ /= g;
  }
}

PuiseuxSeries PuiseuxSeries::zero(const FieldTower& tw, QInf prec) { return PuiseuxSeries(&tw, prec); }

PuiseuxSeries PuiseuxSeries::constant(const FieldElem& c, QInf prec) {
  return build(c.tower(), 1, {{0, c}}, prec);
}

PuiseuxSeries PuiseuxSeries::monomial(const FieldElem& c, Rat exponent, QInf prec) {
  return build(c.tower(), exponent.denominator(), {{exponent.numerator(), c}}, prec);
}

PuiseuxSeries PuiseuxSeries::from_terms(const FieldTower& tw, std::int64_t e, std::vector<Term> terms, QInf prec) {
  return build(&tw, e, std::move(terms), prec);
}

QInf PuiseuxSeries::valuation() const {
  if (terms_.empty()) return QInf::infinity();
  return QInf(exponent(0));
}

QInf PuiseuxSeries::valuation_lower_bound() const {
  if (terms_.empty()) return prec_;
  return QInf(exponent(0));
}

FieldElem PuiseuxSeries::lead_coeff() const {
  if (terms_.empty()) return FieldElem::zero(*tower_);
  return terms_[0].second;
}

FieldElem PuiseuxSeries::coeff(Rat q) const {
  if (!prec_.is_inf() && !(q < prec_.q))
    fail(ErrorKind::PrecisionExhausted, "coefficient requested beyond the known precision");
  Rat k = q * e_;
  if (!is_integer(k)) return FieldElem::zero(*tower_);
  auto it = std::lower_bound(terms_.begin(), terms_.end(), k.numerator(),
                             [](const Term& t, std::int64_t v) { return t.first < v; });
  if (it != terms_.end() && it->first == k.numerator()) return it->second;
  return FieldElem::zero(*tower_);
}

Rat PuiseuxSeries::max_exponent() const {
  if (terms_.empty()) return Rat(0);
  return exponent(terms_.size() - 1);
}

PuiseuxSeries PuiseuxSeries::truncated(QInf bound) const {
  if (!(bound < prec_)) return *this;
  return build(tower_, e_, terms_, bound);
}

namespace {

const FieldTower* tower_of(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  return a.tower() ? a.tower() : b.tower();
}

std::vector<PuiseuxSeries::Term> rescaled(const PuiseuxSeries& a, std::int64_t E) {
  std::vector<PuiseuxSeries::Term> out;
  out.reserve(a.terms().size());
  const std::int64_t f = E / a.e();
  for (auto& [k, c] : a.terms()) out.push_back({k * f, c});
  return out;
}

using Dense = std::vector<FieldElem>;

Dense dmul(const Dense& a, const Dense& b, std::size_t K, const FieldTower& tw) {
  Dense r(K, FieldElem::zero(tw));
  for (std::size_t i = 0; i < a.size() && i < K; ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size() && i + j < K; ++j) {
      if (b[j].is_zero()) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

Dense dinv(const Dense& a, std::size_t K, const FieldTower& tw) {
  Dense b(K, FieldElem::zero(tw));
  FieldElem inv = a[0].inverse();
  b[0] = inv;
  for (std::size_t k = 1; k < K; ++k) {
    FieldElem s = FieldElem::zero(tw);
    for (std::size_t j = 1; j <= k && j < a.size(); ++j)
      if (!a[j].is_zero()) s += a[j] * b[k - j];
    b[k] = -(s * inv);
  }
  return b;
}

Dense dpow(Dense a, unsigned n, std::size_t K, const FieldTower& tw) {
  Dense r(K, FieldElem::zero(tw));
  r[0] = FieldElem::one(tw);
  while (n) {
    if (n & 1) r = dmul(r, a, K, tw);
    n >>= 1;
    if (n) a = dmul(a, a, K, tw);
  }
  return r;
}

bool dense_equal(const Dense& a, const Dense& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != b[i]) return false;
  return true;
}

// number of exponents k >= 0 with k/e < bound
std::size_t count_below(Rat bound, std::int64_t e) {
  Rat x = bound * e;
  std::int64_t c = ceil_rat(x);
  return c <= 0 ? 0 : static_cast<std::size_t>(c);
}

}  // namespace

PuiseuxSeries operator+(const PuiseuxSeries& a, const PuiseuxSeries& b) {
  const std::int64_t E = lcm64(a.e(), b.e());
  auto ta = rescaled(a, E);
  auto tb = rescaled(b, E);
  std::vector<PuiseuxSeries::Term> t;
  t.reserve(ta.size() + tb.size());
  std::merge(std::make_move_iterator(ta.begin()), std::make_move_iterator(ta.end()), std::make_move_iterator(tb.begin()),
             std::make_move_iterator(tb.end()), std::back_inserter(t),
             [](const auto& x, const auto& y) { return x.first < y.first; });
  return build(tower_of(a, b), E, std::move(t), min(a.precision(), b.precision()));
}

PuiseuxSeries operator-(const PuiseuxSeries& a) {
  std::vector<PuiseuxSeries::Term> t;
  for (auto& [k, c] : a.terms()) t.push_back({k, -c});
  return build(a.tower(), a.e(), std::move(t), a.precision());
}

PuiseuxSeries operator-(const PuiseuxSeries& a, const PuiseuxSeries& b) { return a + (-b); }

PuiseuxSeries scale(const PuiseuxSeries& a, const FieldElem& c) {
  if (c.is_zero()) return PuiseuxSeries::zero(*a.tower(), a.precision());
  std::vector<PuiseuxSeries::Term> t;
  for (auto& [k, x] : a.terms()) t.push_back({k, x * c});
  return build(a.tower(), a.e(), std::move(t), a.precision());
}

PuiseuxSeries shift(const PuiseuxSeries& a, Rat r) {
  const std::int64_t E = lcm64(a.e(), r.denominator());
  auto t = rescaled(a, E);
  const std::int64_t d = (r * E).numerator();
  for (auto& x : t) x.first += d;
  return build(a.tower(), E, std::move(t), a.precision() + QInf(r));
}

PuiseuxSeries mul(const PuiseuxSeries& a, const PuiseuxSeries& b, QInf cap) {
  const FieldTower* tw = tower_of(a, b);
  if (a.is_exact_zero() || b.is_exact_zero()) return PuiseuxSeries::zero(*tw);
  const QInf va = a.valuation_lower_bound(), vb = b.valuation_lower_bound();
  QInf P = min(min(a.precision() + vb, b.precision() + va), cap);
  if (a.empty() || b.empty()) return PuiseuxSeries::zero(*tw, P);
  if (b.is_exact() && b.terms().size() == 1)
    return shift(scale(a, b.terms()[0].second), b.exponent(0)).truncated(P);
  if (a.is_exact() && a.terms().size() == 1)
    return shift(scale(b, a.terms()[0].second), a.exponent(0)).truncated(P);
  const std::int64_t E = lcm64(a.e(), b.e());
  auto ta = rescaled(a, E);
  auto tb = rescaled(b, E);
  std::int64_t kmax = std::numeric_limits<std::int64_t>::max();
  if (!P.is_inf()) kmax = ceil_rat(P.q * E);  // exponents must be < kmax
  const std::int64_t k0 = ta[0].first + tb[0].first;
  std::int64_t hi = ta.back().first + tb.back().first;
  hi = std::min(hi, kmax - 1);
  std::vector<PuiseuxSeries::Term> out;
  if (hi < k0) return PuiseuxSeries::zero(*tw, P);
  const std::size_t range = static_cast<std::size_t>(hi - k0 + 1);
  if (range <= 4 * (ta.size() * tb.size()) + 64) {
    std::vector<FieldElem> acc(range, FieldElem::zero(*tw));
    for (auto& [ka, ca] : ta)
      for (auto& [kb, cb] : tb) {
        std::int64_t k = ka + kb;
        if (k > hi) break;
        acc[static_cast<std::size_t>(k - k0)] += ca * cb;
      }
    for (std::size_t i = 0; i < range; ++i)
      if (!acc[i].is_zero()) out.push_back({k0 + static_cast<std::int64_t>(i), std::move(acc[i])});
  } else {
    for (auto& [ka, ca] : ta)
      for (auto& [kb, cb] : tb) {
        std::int64_t k = ka + kb;
        if (k > hi) break;
        out.push_back({k, ca * cb});
      }
  }
  return build(tw, E, std::move(out), P);
}

PuiseuxSeries operator*(const PuiseuxSeries& a, const PuiseuxSeries& b) { return mul(a, b); }

PuiseuxSeries power(const PuiseuxSeries& a, unsigned k, QInf cap) {
  PuiseuxSeries r = PuiseuxSeries::constant(FieldElem::one(*a.tower()));
  PuiseuxSeries b = a;
  while (k) {
    if (k & 1) r = mul(r, b, cap);
    k >>= 1;
    if (k) b = mul(b, b, cap);
  }
  return r;
}

PuiseuxSeries unit_inverse(const PuiseuxSeries& a, QInf cap) {
  if (a.empty() || a.terms()[0].first != 0) fail(ErrorKind::NotAUnit, "series " + to_string(a) + " is not a unit");
  const FieldTower& tw = *a.tower();
  if (a.terms().size() == 1 && a.is_exact()) return PuiseuxSeries::constant(a.terms()[0].second.inverse());
  QInf P = min(a.precision(), cap);
  if (P.is_inf()) fail(ErrorKind::InvalidArgument, "inverse of a non-constant exact series needs a precision cap");
  const std::size_t K = count_below(P.q, a.e());
  if (K == 0) return PuiseuxSeries::zero(tw, P);
  Dense da(K, FieldElem::zero(tw));
  for (auto& [k, c] : a.terms())
    if (static_cast<std::size_t>(k) < K) da[static_cast<std::size_t>(k)] = c;
  Dense b = dinv(da, K, tw);
  std::vector<PuiseuxSeries::Term> t;
  for (std::size_t i = 0; i < K; ++i)
    if (!b[i].is_zero()) t.push_back({static_cast<std::int64_t>(i), b[i]});
  return build(&tw, a.e(), std::move(t), P);
}

PuiseuxSeries divide(const PuiseuxSeries& a, const PuiseuxSeries& b, QInf cap) {
  if (b.empty()) fail(ErrorKind::NotAUnit, "division by a series with no known terms");
  if (a.is_exact_zero()) return PuiseuxSeries::zero(*b.tower());
  const Rat vb = b.exponent(0);
  if (a.empty()) return PuiseuxSeries::zero(*b.tower(), min(a.precision() + QInf(-vb), cap));
  PuiseuxSeries u = shift(b, -vb);
  QInf icap = QInf::infinity();
  if (!cap.is_inf()) {
    QInf va = a.valuation_lower_bound();
    icap = va.is_inf() ? cap : QInf(cap.q + vb - va.q);
  }
  PuiseuxSeries ui = unit_inverse(u, icap);
  return shift(mul(a, ui, cap.is_inf() ? cap : QInf(cap.q + vb)), -vb).truncated(cap);
}

PuiseuxSeries nth_root(const PuiseuxSeries& s, unsigned n, std::optional<FieldElem> lead, QInf cap) {
  const FieldTower& tw = *s.tower();
  if (n == 0) fail(ErrorKind::InvalidArgument, "0-th root");
  if (n % tw.p() == 0) fail(ErrorKind::WildRamification, "root of order divisible by the characteristic");
  if (n == 1) return s.truncated(cap);
  if (s.is_exact_zero()) return s;
  if (s.empty()) return PuiseuxSeries::zero(tw, QInf(s.precision().q / static_cast<std::int64_t>(n)));
  const Rat v = s.exponent(0);
  const FieldElem c = s.terms()[0].second;
  FieldElem r0;
  if (lead) {
    r0 = *lead;
    if (r0.pow(n) != c) fail(ErrorKind::InvalidArgument, "designated leading root is not an n-th root");
  } else {
    UPoly f(n + 1, FieldElem::zero(tw));
    f[0] = -c;
    f[n] = FieldElem::one(tw);
    r0 = roots_of(f).front().first;
  }
  const Rat vn = v / static_cast<std::int64_t>(n);
  // unit part u = s / (c t^v)
  PuiseuxSeries u = scale(shift(s, -v), c.inverse());
  if (u.is_exact() && u.terms().size() == 1) return PuiseuxSeries::monomial(r0, vn);
  QInf rel = u.precision();
  if (!cap.is_inf()) rel = min(rel, QInf(cap.q - vn));
  if (rel.is_inf()) fail(ErrorKind::InvalidArgument, "root of a non-monomial exact series needs a precision cap");
  const std::int64_t e = u.e();
  const std::size_t K = count_below(rel.q, e);
  if (K == 0) return PuiseuxSeries::zero(tw, QInf(vn + rel.q));
  Dense du(K, FieldElem::zero(tw));
  for (auto& [k, x] : u.terms())
    if (static_cast<std::size_t>(k) < K) du[static_cast<std::size_t>(k)] = x;
  Dense y(K, FieldElem::zero(tw));
  y[0] = FieldElem::one(tw);
  const FieldElem ninv = FieldElem::from_int(tw, n).inverse();
  const FieldElem nm1 = FieldElem::from_int(tw, n - 1);
  for (int it = 0; it < 80; ++it) {
    Dense q = dmul(du, dinv(dpow(y, n - 1, K, tw), K, tw), K, tw);
    Dense ny(K, FieldElem::zero(tw));
    for (std::size_t i = 0; i < K; ++i) ny[i] = (nm1 * y[i] + q[i]) * ninv;
    if (dense_equal(ny, y)) break;
    y = std::move(ny);
  }
  const std::int64_t E = lcm64(e, vn.denominator());
  const std::int64_t f = E / e;
  const std::int64_t off = (vn * E).numerator();
  std::vector<PuiseuxSeries::Term> t;
  for (std::size_t i = 0; i < K; ++i)
    if (!y[i].is_zero()) t.push_back({off + static_cast<std::int64_t>(i) * f, y[i] * r0});
  return build(&tw, E, std::move(t), QInf(vn + rel.q));
}

PuiseuxSeries substitute(const PuiseuxSeries& g, const PuiseuxSeries& s, QInf cap) {
  const FieldTower& tw = *(g.tower() ? g.tower() : s.tower());
  if (s.is_exact_zero()) {
    if (!g.precision().is_inf() && g.precision().q <= 0)
      fail(ErrorKind::PrecisionExhausted, "constant term of g unknown");
    return PuiseuxSeries::constant(g.coeff(Rat(0))).truncated(cap);
  }
  const QInf vs = s.valuation_lower_bound();
  if (!(QInf(Rat(0)) < vs)) fail(ErrorKind::DivergentSubstitution, "substituted series must have positive valuation");
  QInf T = cap;
  if (!g.is_exact()) T = min(T, QInf(g.precision().q * vs.q));
  PuiseuxSeries r = s;
  if (g.e() > 1) r = nth_root(s, static_cast<unsigned>(g.e()), std::nullopt, T);
  const QInf vr = r.valuation_lower_bound();
  PuiseuxSeries acc = PuiseuxSeries::zero(tw);
  PuiseuxSeries cur = PuiseuxSeries::constant(FieldElem::one(tw));
  std::int64_t kprev = 0;
  for (auto& [k, c] : g.terms()) {
    if (k == 0) {
      acc = acc + PuiseuxSeries::constant(c);
      continue;
    }
    if (!T.is_inf() && !vr.is_inf() && !(vr.q * k < T.q)) break;
    cur = mul(cur, power(r, static_cast<unsigned>(k - kprev), T), T);
    kprev = k;
    acc = acc + scale(cur, c);
  }
  return acc.truncated(T);
}

PuiseuxSeries derivative(const PuiseuxSeries& s) {
  const FieldTower& tw = *s.tower();
  const FieldElem einv = FieldElem::from_int(tw, s.e()).inverse();
  std::vector<PuiseuxSeries::Term> t;
  for (auto& [k, c] : s.terms()) {
    if (k == 0) continue;
    t.push_back({k - s.e(), c * FieldElem::from_int(tw, k) * einv});
  }
  QInf P = s.precision().is_inf() ? s.precision() : QInf(s.precision().q - 1);
  return build(&tw, s.e(), std::move(t), P);
}

PuiseuxSeries functional_inverse(const PuiseuxSeries& sigma, QInf cap) {
  const FieldTower& tw = *sigma.tower();
  if (!(sigma.valuation() == QInf(Rat(1))))
    fail(ErrorKind::NotInvertible, "functional inverse needs valuation exactly 1, got " + to_string(sigma));
  const FieldElem c = sigma.lead_coeff();
  if (sigma.is_exact() && sigma.terms().size() == 1) return PuiseuxSeries::monomial(c.inverse(), Rat(1));
  const QInf P = min(sigma.precision(), cap);
  if (P.is_inf()) fail(ErrorKind::InvalidArgument, "functional inverse of a non-linear exact series needs a cap");
  const PuiseuxSeries t = PuiseuxSeries::monomial(FieldElem::one(tw), Rat(1));
  const PuiseuxSeries dsig = derivative(sigma);
  PuiseuxSeries tau = PuiseuxSeries::monomial(c.inverse(), Rat(1));
  Rat q(2);
  for (int it = 0; it < 200; ++it) {
    if (P.q < q) q = P.q;
    QInf Q(q);
    PuiseuxSeries st = substitute(sigma, tau, Q) - t;
    PuiseuxSeries ds = substitute(dsig, tau, Q);
    PuiseuxSeries corr = divide(st, ds, Q);
    tau = (tau - corr).truncated(Q);
    // the iterate is an exact polynomial; Newton corrects its error
    tau = PuiseuxSeries::from_terms(tw, tau.e(), tau.terms());
    if (q == P.q) {
      PuiseuxSeries chk = substitute(sigma, tau, Q) - t;
      if (chk.empty()) break;
    }
    q = q * Rat(2);
  }
  PuiseuxSeries res = PuiseuxSeries::from_terms(tw, tau.e(), tau.terms(), P);
  PuiseuxSeries chk = substitute(sigma, res, P) - t;
  check_invariant(chk.empty(), "functional inverse did not converge");
  return res;
}

PuiseuxSeries twist(const PuiseuxSeries& s, std::int64_t n, const FieldElem& zeta) {
  if (n % s.e() != 0) fail(ErrorKind::InvalidArgument, "twist: ramification index does not divide n");
  const std::int64_t f = n / s.e();
  std::vector<PuiseuxSeries::Term> t;
  for (auto& [k, c] : s.terms()) {
    std::int64_t kk = k * f;
    std::int64_t r = ((kk % n) + n) % n;
    t.push_back({kk, c * zeta.pow(static_cast<std::uint64_t>(r))});
  }
  return build(s.tower(), n, std::move(t), s.precision());
}

bool agree(const PuiseuxSeries& a, const PuiseuxSeries& b) { return (a - b).empty(); }

std::string to_string(const PuiseuxSeries& s) {
  std::string out;
  for (std::size_t i = 0; i < s.terms().size(); ++i) {
    if (i) out += " + ";
    Rat q = s.exponent(i);
    const std::string c = to_string(s.terms()[i].second);
    if (q == Rat(0)) {
      out += c;
    } else {
      if (c != "1") out += c + "*";
      out += "t";
      if (is_integer(q)) {
        if (q != Rat(1)) out += "^" + rat_pretty(q);
      } else {
        out += "^(" + rat_pretty(q) + ")";
      }
    }
  }
  if (!s.is_exact()) {
    if (!out.empty()) out += " + ";
    const Rat P = s.precision().q;
    out += is_integer(P) ? "O(t^" + rat_pretty(P) + ")" : "O(t^(" + rat_pretty(P) + "))";
  }
  if (out.empty()) out = "0";
  return out;
}

}  // namespace cdineq
