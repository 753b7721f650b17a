#include "cdineq/field.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <numeric>

namespace cdineq {

namespace {

using u64 = std::uint64_t;
using PP = std::vector<u64>;  // polynomial over F_p, lowest first

void pp_trim(PP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

u64 inv_mod(u64 a, u64 p) {
  // p prime
  u64 r = 1, b = a % p, e = p - 2;
  while (e) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
    e >>= 1;
  }
  return r;
}

// remainder of a modulo monic-or-not m (m nonzero)
PP pp_mod(PP a, const PP& m, u64 p) {
  pp_trim(a);
  const std::size_t dm = m.size() - 1;
  const u64 li = inv_mod(m.back(), p);
  while (a.size() > dm) {
    u64 c = a.back() * li % p;
    std::size_t shift = a.size() - 1 - dm;
    if (c)
      for (std::size_t i = 0; i <= dm; ++i) a[shift + i] = (a[shift + i] + (p - c) * m[i]) % p;
    a.pop_back();
    pp_trim(a);
  }
  return a;
}

PP pp_mulmod(const PP& a, const PP& b, const PP& m, u64 p) {
  if (a.empty() || b.empty()) return {};
  PP r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i]) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  }
  return pp_mod(std::move(r), m, p);
}

PP pp_powmod(PP a, u64 e, const PP& m, u64 p) {
  PP r{1};
  r = pp_mod(r, m, p);
  a = pp_mod(a, m, p);
  while (e) {
    if (e & 1) r = pp_mulmod(r, a, m, p);
    e >>= 1;
    if (e) a = pp_mulmod(a, a, m, p);
  }
  return r;
}

PP pp_gcd(PP a, PP b, u64 p) {
  pp_trim(a);
  pp_trim(b);
  while (!b.empty()) {
    PP r = pp_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    u64 li = inv_mod(a.back(), p);
    for (auto& c : a) c = c * li % p;
  }
  return a;
}

std::vector<unsigned> prime_divisors(unsigned n) {
  std::vector<unsigned> out;
  for (unsigned q = 2; q * q <= n; ++q)
    if (n % q == 0) {
      out.push_back(q);
      while (n % q == 0) n /= q;
    }
  if (n > 1) out.push_back(n);
  return out;
}

// Rabin's irreducibility test for monic f of degree m over F_p.
bool pp_irreducible(const PP& f, u64 p) {
  const unsigned m = static_cast<unsigned>(f.size() - 1);
  std::vector<PP> frob(m + 1);
  frob[0] = pp_mod(PP{0, 1}, f, p);
  for (unsigned i = 1; i <= m; ++i) frob[i] = pp_powmod(frob[i - 1], p, f, p);
  PP x = pp_mod(PP{0, 1}, f, p);
  if (frob[m] != x) return false;
  for (unsigned r : prime_divisors(m)) {
    PP h = frob[m / r];
    h.resize(std::max<std::size_t>(h.size(), 2), 0);
    h[1] = (h[1] + p - 1) % p;
    pp_trim(h);
    if (pp_gcd(h, f, p).size() != 1) return false;
  }
  return true;
}

// least monic irreducible of degree m, coefficients ordered (c0, c1, ...)
std::vector<std::uint32_t> least_irreducible(unsigned m, u64 p) {
  if (m == 1) return {0, 1};
  std::vector<u64> c(m, 0);
  c[0] = 1;  // c0 = 0 would be divisible by x
  for (;;) {
    PP f(c.begin(), c.end());
    f.push_back(1);
    if (pp_irreducible(f, p)) return std::vector<std::uint32_t>(f.begin(), f.end());
    // c0 most significant: increment from the last coordinate
    int i = static_cast<int>(m) - 1;
    while (i >= 0) {
      if (++c[i] < p) break;
      c[i] = 0;
      --i;
    }
    if (i < 0) fail(ErrorKind::InvariantViolation, "no irreducible polynomial found");
  }
}

// ---------- polynomials over a single registered field ----------

void up_trim(UPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

UPoly up_mod(UPoly a, const UPoly& m) {
  up_trim(a);
  const std::size_t dm = m.size() - 1;
  const FieldElem li = m.back().inverse();
  while (a.size() > dm) {
    FieldElem c = a.back() * li;
    std::size_t shift = a.size() - 1 - dm;
    if (!c.is_zero())
      for (std::size_t i = 0; i <= dm; ++i) a[shift + i] -= c * m[i];
    a.pop_back();
    up_trim(a);
  }
  return a;
}

UPoly up_div(const UPoly& a, const UPoly& m) {
  UPoly r = a;
  up_trim(r);
  const std::size_t dm = m.size() - 1;
  if (r.size() <= dm) return {};
  const FieldElem li = m.back().inverse();
  UPoly q(r.size() - dm, FieldElem::zero(*a[0].tower()));
  while (r.size() > dm) {
    FieldElem c = r.back() * li;
    std::size_t shift = r.size() - 1 - dm;
    q[shift] = c;
    for (std::size_t i = 0; i <= dm; ++i) r[shift + i] -= c * m[i];
    r.pop_back();
  }
  up_trim(q);
  return q;
}

UPoly up_mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, FieldElem::zero(*a[0].tower()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  up_trim(r);
  return r;
}

UPoly up_mulmod(const UPoly& a, const UPoly& b, const UPoly& m) { return up_mod(up_mul(a, b), m); }

UPoly up_powmod(UPoly a, u64 e, const UPoly& m) {
  UPoly r{FieldElem::one(*m[0].tower())};
  r = up_mod(r, m);
  a = up_mod(a, m);
  while (e) {
    if (e & 1) r = up_mulmod(r, a, m);
    e >>= 1;
    if (e) a = up_mulmod(a, a, m);
  }
  return r;
}

UPoly up_monic(UPoly a) {
  up_trim(a);
  if (a.empty()) return a;
  FieldElem li = a.back().inverse();
  for (auto& c : a) c *= li;
  return a;
}

UPoly up_gcd(UPoly a, UPoly b) {
  up_trim(a);
  up_trim(b);
  while (!b.empty()) {
    UPoly r = up_mod(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return up_monic(std::move(a));
}

// x^(p^k) style Frobenius: w -> w^p, applied `times` times
UPoly frob(UPoly w, unsigned times, const UPoly& m, u64 p) {
  for (unsigned i = 0; i < times; ++i) w = up_powmod(std::move(w), p, m);
  return w;
}

// All roots of a squarefree r that splits into linear factors over field T.
void split_linear(const UPoly& r, FieldId T, FieldTower& tw, std::mt19937_64& rng,
                  std::vector<FieldElem>& out) {
  const int d = static_cast<int>(r.size()) - 1;
  if (d <= 0) return;
  if (d == 1) {
    out.push_back(-(r[0] / r[1]));
    return;
  }
  const u64 p = tw.p();
  const unsigned M = tw.degree(T);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    FieldElem delta = tw.random_element(T, rng);
    UPoly acc;
    if (p == 2) {
      // trace map of delta*x
      UPoly z{FieldElem::zero(tw), delta};
      z = up_mod(z, r);
      acc = z;
      for (unsigned i = 1; i < M; ++i) {
        z = up_mulmod(z, z, r);
        acc.resize(std::max(acc.size(), z.size()), FieldElem::zero(tw));
        for (std::size_t k = 0; k < z.size(); ++k) acc[k] += z[k];
      }
      up_trim(acc);
    } else {
      UPoly base{delta, FieldElem::one(tw)};
      UPoly y = up_powmod(base, (p - 1) / 2, r);
      acc = y;
      UPoly z = y;
      for (unsigned i = 1; i < M; ++i) {
        z = up_powmod(z, p, r);
        acc = up_mulmod(acc, z, r);
      }
      if (acc.empty()) acc.push_back(FieldElem::zero(tw));
      acc[0] -= FieldElem::one(tw);
      up_trim(acc);
    }
    UPoly g = up_gcd(r, acc);
    int dg = static_cast<int>(g.size()) - 1;
    if (dg > 0 && dg < d) {
      split_linear(g, T, tw, rng, out);
      split_linear(up_monic(up_div(r, g)), T, tw, rng, out);
      return;
    }
  }
  fail(ErrorKind::InvariantViolation, "equal-degree splitting did not converge");
}

struct Prepared {
  FieldTower* tw = nullptr;
  FieldId base = 0;
  UPoly f;  // monic, coefficients in base
  std::vector<unsigned> factor_degrees;
};

Prepared prepare(const UPoly& in) {
  Prepared P;
  UPoly f = in;
  up_trim(f);
  if (f.empty()) fail(ErrorKind::InvalidArgument, "roots_of: zero polynomial");
  P.tw = const_cast<FieldTower*>(f[0].tower());
  FieldTower& tw = *P.tw;
  FieldId base = f[0].field();
  for (auto& c : f) base = tw.join(base, c.field());
  for (auto& c : f) c = tw.embed(c, base);
  P.base = base;
  P.f = up_monic(f);
  if (P.f.size() <= 1) return P;
  // distinct-degree pass to learn the splitting degree
  const u64 p = tw.p();
  const unsigned m0 = tw.degree(base);
  UPoly rem = P.f;
  UPoly w{FieldElem::zero(tw), FieldElem::one(tw)};
  w = up_mod(w, P.f);
  for (unsigned k = 1; rem.size() > 1; ++k) {
    w = frob(w, m0, P.f, p);
    UPoly wx = w;
    if (wx.size() < 2) wx.resize(2, FieldElem::zero(tw));
    wx[1] -= FieldElem::one(tw);
    up_trim(wx);
    UPoly e = up_gcd(rem, wx);
    if (e.size() > 1) {
      P.factor_degrees.push_back(k);
      for (;;) {
        UPoly g = up_gcd(rem, e);
        if (g.size() <= 1) break;
        rem = up_monic(up_div(rem, g));
      }
    }
    if (k > 4096) fail(ErrorKind::InvariantViolation, "distinct-degree pass did not terminate");
  }
  return P;
}

}  // namespace

// ---------- FieldElem ----------

FieldElem FieldElem::zero(const FieldTower& tw) { return FieldElem(&tw, 0, Coords{0}); }
FieldElem FieldElem::one(const FieldTower& tw) { return FieldElem(&tw, 0, Coords{1}); }
FieldElem FieldElem::from_int(const FieldTower& tw, std::int64_t v) {
  std::int64_t p = tw.p();
  std::int64_t r = v % p;
  if (r < 0) r += p;
  return FieldElem(&tw, 0, Coords{static_cast<std::uint32_t>(r)});
}

bool FieldElem::is_zero() const {
  for (auto x : c_)
    if (x) return false;
  return true;
}

bool FieldElem::is_one() const {
  if (c_.empty() || c_[0] != 1) return false;
  for (std::size_t i = 1; i < c_.size(); ++i)
    if (c_[i]) return false;
  return true;
}

namespace {

std::pair<FieldElem, FieldElem> lift_pair(const FieldElem& a, const FieldElem& b) {
  if (a.field() == b.field()) return {a, b};
  FieldTower& tw = const_cast<FieldTower&>(*a.tower());
  FieldId j = tw.join(a.field(), b.field());
  return {tw.embed(a, j), tw.embed(b, j)};
}

}  // namespace

FieldElem operator+(const FieldElem& a0, const FieldElem& b0) {
  if (a0.field() != b0.field()) {
    auto [a, b] = lift_pair(a0, b0);
    return a + b;
  }
  const u64 p = a0.tower()->p();
  Coords c(a0.coords().size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    u64 s = u64(a0.coords()[i]) + b0.coords()[i];
    c[i] = static_cast<std::uint32_t>(s >= p ? s - p : s);
  }
  return FieldElem(a0.tower(), a0.field(), std::move(c));
}

FieldElem FieldElem::operator-() const {
  const u64 p = tower_->p();
  Coords c(c_.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = c_[i] ? static_cast<std::uint32_t>(p - c_[i]) : 0;
  return FieldElem(tower_, fid_, std::move(c));
}

FieldElem operator-(const FieldElem& a, const FieldElem& b) { return a + (-b); }

FieldElem operator*(const FieldElem& a0, const FieldElem& b0) {
  if (a0.field() != b0.field()) {
    auto [a, b] = lift_pair(a0, b0);
    return a * b;
  }
  const u64 p = a0.tower()->p();
  const auto& A = a0.coords();
  const auto& B = b0.coords();
  const std::size_t m = A.size();
  if (m == 1)
    return FieldElem(a0.tower(), a0.field(), Coords{static_cast<std::uint32_t>(u64(A[0]) * B[0] % p)});
  const auto& mod = a0.tower()->field(a0.field()).modulus;
  boost::container::small_vector<u64, 16> r(2 * m - 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    if (!A[i]) continue;
    for (std::size_t j = 0; j < m; ++j) r[i + j] = (r[i + j] + u64(A[i]) * B[j]) % p;
  }
  for (std::size_t k = 2 * m - 2; k >= m; --k) {
    u64 c = r[k];
    if (!c) continue;
    std::size_t s = k - m;
    for (std::size_t i = 0; i < m; ++i) r[s + i] = (r[s + i] + (p - c) * mod[i]) % p;
    r[k] = 0;
  }
  Coords c(m);
  for (std::size_t i = 0; i < m; ++i) c[i] = static_cast<std::uint32_t>(r[i]);
  return FieldElem(a0.tower(), a0.field(), std::move(c));
}

FieldElem FieldElem::inverse() const {
  if (is_zero()) fail(ErrorKind::InvalidArgument, "inverse of zero field element");
  const u64 p = tower_->p();
  const std::size_t m = c_.size();
  if (m == 1) return FieldElem(tower_, fid_, Coords{static_cast<std::uint32_t>(inv_mod(c_[0], p))});
  const auto& mod32 = tower_->field(fid_).modulus;
  // extended Euclid: find s with s*a = 1 mod modulus
  PP r0(mod32.begin(), mod32.end()), r1(c_.begin(), c_.end());
  pp_trim(r1);
  PP s0{}, s1{1};
  while (r1.size() > 1) {
    // q, r = divmod(r0, r1)
    PP r = r0;
    PP q(r.size() >= r1.size() ? r.size() - r1.size() + 1 : 0, 0);
    u64 li = inv_mod(r1.back(), p);
    while (r.size() >= r1.size()) {
      u64 c = r.back() * li % p;
      std::size_t sh = r.size() - r1.size();
      q[sh] = c;
      for (std::size_t i = 0; i < r1.size(); ++i) r[sh + i] = (r[sh + i] + (p - c) * r1[i]) % p;
      r.pop_back();
      pp_trim(r);
      if (r.empty()) break;
    }
    // s2 = s0 - q*s1
    PP qs(q.size() + s1.size(), 0);
    for (std::size_t i = 0; i < q.size(); ++i)
      for (std::size_t j = 0; j < s1.size(); ++j) qs[i + j] = (qs[i + j] + q[i] * s1[j]) % p;
    PP s2(std::max(s0.size(), qs.size()), 0);
    for (std::size_t i = 0; i < s2.size(); ++i) {
      u64 a = i < s0.size() ? s0[i] : 0, b = i < qs.size() ? qs[i] : 0;
      s2[i] = (a + p - b) % p;
    }
    pp_trim(s2);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  // r1 is a nonzero constant
  u64 ci = inv_mod(r1[0], p);
  Coords c(m, 0);
  PP s = pp_mod(s1, PP(mod32.begin(), mod32.end()), p);
  for (std::size_t i = 0; i < s.size(); ++i) c[i] = static_cast<std::uint32_t>(s[i] * ci % p);
  return FieldElem(tower_, fid_, std::move(c));
}

FieldElem operator/(const FieldElem& a, const FieldElem& b) { return a * b.inverse(); }

FieldElem FieldElem::pow(std::uint64_t k) const {
  FieldElem r(tower_, fid_, Coords(c_.size(), 0));
  const_cast<Coords&>(r.coords())[0] = 1;
  FieldElem b = *this;
  while (k) {
    if (k & 1) r = r * b;
    k >>= 1;
    if (k) b = b * b;
  }
  return r;
}

bool operator==(const FieldElem& a, const FieldElem& b) {
  if (a.field() == b.field()) return a.coords() == b.coords();
  // quick path: both zero
  if (a.is_zero() || b.is_zero()) return a.is_zero() && b.is_zero();
  auto [x, y] = lift_pair(a, b);
  return x.coords() == y.coords();
}

bool lex_less(const FieldElem& a0, const FieldElem& b0) {
  auto [a, b] = lift_pair(a0, b0);
  return std::lexicographical_compare(a.coords().begin(), a.coords().end(), b.coords().begin(),
                                      b.coords().end());
}

std::string to_string(const FieldElem& a0) {
  FieldElem a = const_cast<FieldTower*>(a0.tower())->minimal_form(a0);
  if (a.degree() == 1) return std::to_string(a.coords()[0]);
  std::string s = "[";
  for (std::size_t i = 0; i < a.coords().size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(a.coords()[i]);
  }
  s += "]@" + std::to_string(a.degree());
  return s;
}

// ---------- FieldTower ----------

FieldTower::FieldTower(std::uint32_t p, unsigned max_degree) : p_(p), max_degree_(max_degree) {
  if (p < 2) fail(ErrorKind::InvalidArgument, "characteristic must be prime");
  for (std::uint32_t q = 2; u64(q) * q <= p; ++q)
    if (p % q == 0) fail(ErrorKind::InvalidArgument, std::to_string(p) + " is not prime");
  auto f = std::make_unique<Field>();
  f->id = 0;
  f->m = 1;
  f->modulus = {0, 1};
  fields_[0].store(f.get(), std::memory_order_release);
  owned_.push_back(std::move(f));
  nfields_ = 1;
  by_degree_[1] = 0;
}

FieldTower::~FieldTower() = default;

unsigned FieldTower::degree(FieldId fid) const { return field(fid).m; }
const std::vector<std::uint32_t>& FieldTower::modulus(FieldId fid) const { return field(fid).modulus; }

std::optional<FieldId> FieldTower::find_field(unsigned m) const {
  std::lock_guard<std::recursive_mutex> lk(mu_);
  auto it = by_degree_.find(m);
  if (it == by_degree_.end()) return std::nullopt;
  return it->second;
}

FieldId FieldTower::ensure_field(unsigned m) {
  std::lock_guard<std::recursive_mutex> lk(mu_);
  auto it = by_degree_.find(m);
  if (it != by_degree_.end()) return it->second;
  if (m > max_degree_)
    fail(ErrorKind::ExtensionDegreeExceeded,
         "extension of degree " + std::to_string(m) + " exceeds cap " + std::to_string(max_degree_));
  if (nfields_ >= kMaxFields) fail(ErrorKind::ExtensionDegreeExceeded, "too many registered fields");
  auto f = std::make_unique<Field>();
  f->id = nfields_;
  f->m = m;
  f->modulus = least_irreducible(m, p_);
  FieldId id = f->id;
  fields_[id].store(f.get(), std::memory_order_release);
  owned_.push_back(std::move(f));
  nfields_ = id + 1;
  by_degree_[m] = id;
  // embeddings from existing subfields, smallest first, then into superfields
  std::vector<std::pair<unsigned, FieldId>> subs, supers;
  for (auto& [deg, fid] : by_degree_) {
    if (fid == id || deg == 1) continue;
    if (m % deg == 0) subs.push_back({deg, fid});
    if (deg % m == 0) supers.push_back({deg, fid});
  }
  std::sort(subs.begin(), subs.end());
  std::sort(supers.begin(), supers.end());
  for (auto& s : subs) create_embedding(s.second, id);
  for (auto& s : supers) create_embedding(id, s.second);
  return id;
}

FieldId FieldTower::join(FieldId a, FieldId b) {
  if (a == b) return a;
  unsigned ma = degree(a), mb = degree(b);
  unsigned l = static_cast<unsigned>(std::lcm(ma, mb));
  if (l == ma) return a;
  if (l == mb) return b;
  return ensure_field(l);
}

const std::vector<Coords>* FieldTower::find_embedding(FieldId from, FieldId to) const {
  std::lock_guard<std::recursive_mutex> lk(mu_);
  auto it = emb_.find({from, to});
  return it == emb_.end() ? nullptr : &it->second;
}

FieldElem FieldTower::apply_embedding(const std::vector<Coords>& img, const FieldElem& a, FieldId to) const {
  const unsigned M = degree(to);
  std::vector<u64> acc(M, 0);
  for (std::size_t k = 0; k < img.size(); ++k) {
    u64 c = a.coords()[k];
    if (!c) continue;
    for (unsigned i = 0; i < M; ++i) acc[i] = (acc[i] + c * img[k][i]) % p_;
  }
  Coords out(M);
  for (unsigned i = 0; i < M; ++i) out[i] = static_cast<std::uint32_t>(acc[i]);
  return FieldElem(this, to, std::move(out));
}

FieldElem FieldTower::embed(const FieldElem& a, FieldId target) {
  if (a.field() == target) return a;
  const unsigned ma = a.degree(), M = degree(target);
  if (M % ma != 0) fail(ErrorKind::InvalidArgument, "embedding between non-dividing degrees");
  if (ma == 1) {
    Coords c(M, 0);
    c[0] = a.coords()[0];
    return FieldElem(this, target, std::move(c));
  }
  const auto* img = find_embedding(a.field(), target);
  if (!img) fail(ErrorKind::InvariantViolation, "missing embedding");
  return apply_embedding(*img, a, target);
}

void FieldTower::create_embedding(FieldId S, FieldId T) {
  const unsigned ms = degree(S);
  // candidate images of the generator of S: roots of its modulus in T
  UPoly mod;
  for (auto c : modulus(S)) mod.push_back(embed(FieldElem(this, 0, Coords{c}), T));
  std::mt19937_64 rng(0x5eed0000ULL + 131 * S + T);
  std::vector<FieldElem> cands;
  split_linear(mod, T, *this, rng, cands);
  std::sort(cands.begin(), cands.end(), lex_less);

  auto images_for = [&](const FieldElem& sigma) {
    std::vector<Coords> img;
    FieldElem pw = FieldElem::one(*this);
    pw = embed(pw, T);
    for (unsigned k = 0; k < ms; ++k) {
      img.push_back(pw.coords());
      pw = pw * sigma;
    }
    return img;
  };

  for (const auto& sigma : cands) {
    auto img = images_for(sigma);
    bool ok = true;
    for (auto& [deg, F] : by_degree_) {
      if (!ok) break;
      if (F == S || F == T || deg == 1) continue;
      if (ms % deg == 0) {
        // F ⊂ S: sigma ∘ ι_{F→S} must equal ι_{F→T}
        const auto* fs = find_embedding(F, S);
        const auto* ft = find_embedding(F, T);
        if (!fs || !ft) continue;
        FieldElem gS = apply_embedding(*fs, generator(F), S);
        FieldElem viaS = apply_embedding(img, gS, T);
        FieldElem direct = apply_embedding(*ft, generator(F), T);
        ok = viaS == direct;
      } else if (deg % ms == 0 && degree(T) % deg == 0) {
        // S ⊂ G ⊂ T
        const auto* sg = find_embedding(S, F);
        const auto* gt = find_embedding(F, T);
        if (!sg || !gt) continue;
        FieldElem gG = apply_embedding(*sg, generator(S), F);
        FieldElem via = apply_embedding(*gt, gG, T);
        ok = via == sigma;
      }
    }
    if (ok) {
      emb_[{S, T}] = std::move(img);
      return;
    }
  }
  fail(ErrorKind::InvariantViolation, "no compatible embedding exists");
}

std::optional<FieldElem> FieldTower::retract(const FieldElem& a, FieldId target) {
  if (a.field() == target) return a;
  const unsigned ma = a.degree(), mt = degree(target);
  if (ma % mt != 0) return std::nullopt;
  if (mt == 1) {
    for (std::size_t i = 1; i < a.coords().size(); ++i)
      if (a.coords()[i]) return std::nullopt;
    return FieldElem(this, target, Coords{a.coords()[0]});
  }
  const auto* img = find_embedding(target, a.field());
  if (!img) return std::nullopt;
  // solve sum_k v_k img[k] = a over F_p
  const unsigned rows = ma, cols = mt;
  std::vector<std::vector<u64>> A(rows, std::vector<u64>(cols + 1, 0));
  for (unsigned i = 0; i < rows; ++i) {
    for (unsigned k = 0; k < cols; ++k) A[i][k] = (*img)[k][i];
    A[i][cols] = a.coords()[i];
  }
  std::vector<int> pivcol;
  unsigned r = 0;
  for (unsigned c = 0; c < cols && r < rows; ++c) {
    unsigned piv = r;
    while (piv < rows && A[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(A[piv], A[r]);
    u64 inv = inv_mod(A[r][c], p_);
    for (auto& x : A[r]) x = x * inv % p_;
    for (unsigned i = 0; i < rows; ++i) {
      if (i == r || A[i][c] == 0) continue;
      u64 f = A[i][c];
      for (unsigned k = 0; k <= cols; ++k) A[i][k] = (A[i][k] + (p_ - f) * A[r][k]) % p_;
    }
    pivcol.push_back(static_cast<int>(c));
    ++r;
  }
  for (unsigned i = r; i < rows; ++i)
    if (A[i][cols] != 0) return std::nullopt;
  Coords v(cols, 0);
  for (unsigned i = 0; i < r; ++i) v[pivcol[i]] = static_cast<std::uint32_t>(A[i][cols]);
  return FieldElem(this, target, std::move(v));
}

FieldElem FieldTower::minimal_form(const FieldElem& a) {
  const unsigned ma = a.degree();
  std::vector<std::pair<unsigned, FieldId>> cands;
  {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    for (auto& [deg, fid] : by_degree_)
      if (ma % deg == 0 && deg < ma) cands.push_back({deg, fid});
  }
  for (auto& [deg, fid] : cands)
    if (auto r = retract(a, fid)) return *r;
  return a;
}

FieldElem FieldTower::generator(FieldId fid) const {
  const unsigned m = degree(fid);
  Coords c(m, 0);
  if (m == 1)
    c[0] = 0;  // F_p has no distinguished generator; x itself is 0 mod (x)
  else
    c[1] = 1;
  return FieldElem(this, fid, std::move(c));
}

FieldElem FieldTower::element(FieldId fid, const std::vector<std::uint32_t>& coords) const {
  const unsigned m = degree(fid);
  Coords c(m, 0);
  for (std::size_t i = 0; i < coords.size() && i < m; ++i) c[i] = coords[i] % p_;
  return FieldElem(this, fid, std::move(c));
}

FieldElem FieldTower::random_element(FieldId fid, std::mt19937_64& rng) const {
  const unsigned m = degree(fid);
  Coords c(m);
  for (unsigned i = 0; i < m; ++i) c[i] = static_cast<std::uint32_t>(rng() % p_);
  return FieldElem(this, fid, std::move(c));
}

std::vector<FieldElem> FieldTower::nth_roots_of_unity(unsigned n) {
  if (n == 0) fail(ErrorKind::InvalidArgument, "nth_roots_of_unity: n = 0");
  if (n % p_ == 0)
    fail(ErrorKind::WildRamification, "root of unity of order " + std::to_string(n) + " in characteristic " +
                                          std::to_string(p_));
  {
    std::lock_guard<std::recursive_mutex> lk(mu_);
    auto it = roots_of_unity_.find(n);
    if (it != roots_of_unity_.end()) return it->second;
  }
  unsigned m = 1;
  u64 pm = p_ % n;
  while (pm != 1 % n) {
    pm = pm * p_ % n;
    ++m;
  }
  FieldId F = ensure_field(m);
  using boost::multiprecision::cpp_int;
  cpp_int q = 1;
  for (unsigned i = 0; i < m; ++i) q *= p_;
  cpp_int e = (q - 1) / n;
  auto pow_big = [&](FieldElem b, cpp_int k) {
    FieldElem r = embed(FieldElem::one(*this), F);
    while (k > 0) {
      if ((k & 1) != 0) r = r * b;
      k >>= 1;
      if (k > 0) b = b * b;
    }
    return r;
  };
  auto primes = prime_divisors(n);
  FieldElem zeta;
  bool found = false;
  // enumerate nonzero elements by counter until a primitive n-th root appears
  for (u64 idx = 1; !found; ++idx) {
    std::vector<std::uint32_t> cs;
    u64 v = idx;
    for (unsigned i = 0; i < m; ++i) {
      cs.push_back(static_cast<std::uint32_t>(v % p_));
      v /= p_;
    }
    FieldElem x = element(F, cs);
    if (x.is_zero()) continue;
    FieldElem z = pow_big(x, e);
    bool prim = true;
    for (unsigned r : primes)
      if (z.pow(n / r).is_one()) prim = false;
    if (prim) {
      zeta = z;
      found = true;
    }
  }
  // canonical choice: the lexicographically least primitive root
  FieldElem best = zeta;
  for (unsigned k = 2; k < n; ++k)
    if (std::gcd(k, n) == 1) {
      FieldElem c = zeta.pow(k);
      if (lex_less(c, best)) best = c;
    }
  std::vector<FieldElem> out;
  FieldElem w = embed(FieldElem::one(*this), F);
  for (unsigned k = 0; k < n; ++k) {
    out.push_back(w);
    w = w * best;
  }
  std::lock_guard<std::recursive_mutex> lk(mu_);
  roots_of_unity_[n] = out;
  return out;
}

std::vector<FieldInfo> FieldTower::registered() const {
  std::lock_guard<std::recursive_mutex> lk(mu_);
  std::vector<FieldInfo> out;
  for (unsigned i = 0; i < nfields_; ++i) {
    const Field& f = field(i);
    out.push_back({f.id, f.m, f.modulus});
  }
  return out;
}

// ---------- root finding ----------

int poly_degree(const UPoly& f) {
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
    if (!f[i].is_zero()) return i;
  return -1;
}

FieldElem poly_eval(const UPoly& f, const FieldElem& x) {
  FieldElem r = FieldElem::zero(*x.tower());
  for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i) r = r * x + f[i];
  return r;
}

FieldId ensure_splitting_field(const UPoly& f) {
  Prepared P = prepare(f);
  unsigned L = 1;
  for (unsigned k : P.factor_degrees) L = std::lcm(L, k);
  return P.tw->join(P.base, P.tw->ensure_field(P.tw->degree(P.base) * L));
}

std::vector<std::pair<FieldElem, int>> roots_of(const UPoly& in) {
  Prepared P = prepare(in);
  std::vector<std::pair<FieldElem, int>> out;
  if (P.f.size() <= 1) return out;
  FieldTower& tw = *P.tw;
  unsigned L = 1;
  for (unsigned k : P.factor_degrees) L = std::lcm(L, k);
  const FieldId T = tw.ensure_field(tw.degree(P.base) * L);
  UPoly f;
  for (auto& c : P.f) f.push_back(tw.embed(c, T));
  // radical: gcd(f, x^Q - x), Q = |T|
  UPoly w{FieldElem::zero(tw), FieldElem::one(tw)};
  w = up_mod(w, f);
  w = frob(w, tw.degree(T), f, tw.p());
  if (w.size() < 2) w.resize(2, FieldElem::zero(tw));
  w[1] -= FieldElem::one(tw);
  up_trim(w);
  UPoly rad = w.empty() ? f : up_gcd(f, w);
  std::mt19937_64 rng(0xC0FFEEULL);
  std::vector<FieldElem> roots;
  split_linear(rad, T, tw, rng, roots);
  std::sort(roots.begin(), roots.end(), lex_less);
  for (auto& r : roots) {
    int mult = 0;
    UPoly g = f;
    for (;;) {
      if (!poly_eval(g, r).is_zero()) break;
      ++mult;
      // synthetic division by (x - r)
      UPoly q(g.size() - 1, FieldElem::zero(tw));
      FieldElem acc = FieldElem::zero(tw);
      for (int i = static_cast<int>(g.size()) - 1; i >= 1; --i) {
        acc = acc * r + g[i];
        q[i - 1] = acc;
      }
      g = std::move(q);
      if (g.size() <= 1) break;
    }
    out.push_back({r, mult});
  }
  int total = 0;
  for (auto& [r, m] : out) total += m;
  check_invariant(total == static_cast<int>(P.f.size()) - 1, "roots_of: multiplicities do not add up");
  return out;
}

}  // namespace cdineq
