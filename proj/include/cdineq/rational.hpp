#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>

namespace cdineq {

using Rat = boost::rational<std::int64_t>;

// Rational extended by +infinity (valuation of zero).
struct QInf {
  bool inf = true;
  Rat q{0};

  QInf() = default;
  QInf(Rat v) : inf(false), q(v) {}  // NOLINT
  static QInf infinity() { return QInf(); }

  bool is_inf() const { return inf; }
  bool operator==(const QInf& o) const { return inf == o.inf && (inf || q == o.q); }
  bool operator<(const QInf& o) const {
    if (inf) return false;
    if (o.inf) return true;
    return q < o.q;
  }
  bool operator<=(const QInf& o) const { return !(o < *this); }
  bool operator>(const QInf& o) const { return o < *this; }
  bool operator>=(const QInf& o) const { return !(*this < o); }
};

inline QInf operator+(const QInf& a, const QInf& b) {
  if (a.inf || b.inf) return QInf::infinity();
  return QInf(a.q + b.q);
}
inline QInf min(const QInf& a, const QInf& b) { return b < a ? b : a; }

inline std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  return boost::integer::lcm(a, b);
}
inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  return boost::integer::gcd(a, b);
}

inline bool is_integer(const Rat& r) { return r.denominator() == 1; }

// floor/ceil for rationals (denominator is always positive)
inline std::int64_t floor_rat(const Rat& r) {
  std::int64_t n = r.numerator(), d = r.denominator();
  return n >= 0 ? n / d : -((-n + d - 1) / d);
}
inline std::int64_t ceil_rat(const Rat& r) { return -floor_rat(-r); }

// "num/den" always, so consumers never have to special-case integers.
inline std::string rat_str(const Rat& r) {
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}
inline std::string qinf_str(const QInf& v) { return v.inf ? "inf" : rat_str(v.q); }

// Short human form: "2/3", "1", "inf".
inline std::string rat_pretty(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return rat_str(r);
}

Rat parse_rat(const std::string& s);
QInf parse_qinf(const std::string& s);

}  // namespace cdineq
