#pragma once

#include "cdineq/errors.hpp"

#include <boost/container/small_vector.hpp>

#include <array>
#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace cdineq {

class FieldTower;

using Coords = boost::container::small_vector<std::uint32_t, 4>;
using FieldId = std::uint32_t;

// An element of a registered field F_{p^m}, stored as coordinates in the
// power basis of that field's generator.
class FieldElem {
 public:
  FieldElem() = default;
  FieldElem(const FieldTower* tower, FieldId fid, Coords c)
      : tower_(tower), fid_(fid), c_(std::move(c)) {}

  static FieldElem zero(const FieldTower& tw);
  static FieldElem one(const FieldTower& tw);
  static FieldElem from_int(const FieldTower& tw, std::int64_t v);

  const FieldTower* tower() const { return tower_; }
  FieldId field() const { return fid_; }
  const Coords& coords() const { return c_; }
  unsigned degree() const { return static_cast<unsigned>(c_.size()); }
  bool valid() const { return tower_ != nullptr; }

  bool is_zero() const;
  bool is_one() const;

  FieldElem operator-() const;
  FieldElem inverse() const;
  FieldElem pow(std::uint64_t k) const;

  friend FieldElem operator+(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator-(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator*(const FieldElem& a, const FieldElem& b);
  friend FieldElem operator/(const FieldElem& a, const FieldElem& b);
  FieldElem& operator+=(const FieldElem& o) { return *this = *this + o; }
  FieldElem& operator-=(const FieldElem& o) { return *this = *this - o; }
  FieldElem& operator*=(const FieldElem& o) { return *this = *this * o; }

  friend bool operator==(const FieldElem& a, const FieldElem& b);
  friend bool operator!=(const FieldElem& a, const FieldElem& b) { return !(a == b); }

 private:
  const FieldTower* tower_ = nullptr;
  FieldId fid_ = 0;
  Coords c_;
};

// Lexicographic order on coordinate vectors (c0 first), after lifting both
// sides to a common field.
bool lex_less(const FieldElem& a, const FieldElem& b);

// "3" for prime-field elements, "[c0 c1 ...]@m" otherwise (in the smallest
// registered subfield that contains the element).
std::string to_string(const FieldElem& a);

using UPoly = std::vector<FieldElem>;  // coefficients, lowest degree first

struct FieldInfo {
  FieldId id;
  unsigned degree;
  std::vector<std::uint32_t> modulus;  // monic, lowest first, over F_p
};

// Lazily grown registry of the fields F_{p^m}. Each field is defined over F_p
// by the lexicographically least monic irreducible of its degree; embeddings
// between fields of dividing degree are chosen once and kept compatible.
class FieldTower {
 public:
  explicit FieldTower(std::uint32_t p, unsigned max_degree = 24);
  ~FieldTower();
  FieldTower(const FieldTower&) = delete;
  FieldTower& operator=(const FieldTower&) = delete;

  std::uint32_t p() const { return p_; }
  unsigned max_degree() const { return max_degree_; }
  void set_max_degree(unsigned m) { max_degree_ = m; }

  unsigned degree(FieldId fid) const;
  const std::vector<std::uint32_t>& modulus(FieldId fid) const;

  // Field of degree m, created on first request.
  FieldId ensure_field(unsigned m);
  std::optional<FieldId> find_field(unsigned m) const;
  FieldId join(FieldId a, FieldId b);

  FieldElem embed(const FieldElem& a, FieldId target);
  std::optional<FieldElem> retract(const FieldElem& a, FieldId target);
  FieldElem minimal_form(const FieldElem& a);

  FieldElem generator(FieldId fid) const;
  FieldElem element(FieldId fid, const std::vector<std::uint32_t>& coords) const;
  FieldElem random_element(FieldId fid, std::mt19937_64& rng) const;

  // 1, z, z^2, ..., z^{n-1} for the lexicographically least primitive n-th
  // root of unity z.
  std::vector<FieldElem> nth_roots_of_unity(unsigned n);

  std::vector<FieldInfo> registered() const;

  // internal fast path used by FieldElem
  struct Field;
  const Field& field(FieldId fid) const { return *fields_[fid].load(std::memory_order_acquire); }

 private:
  struct EmbKey {
    FieldId from, to;
    bool operator<(const EmbKey& o) const { return from != o.from ? from < o.from : to < o.to; }
  };
  const std::vector<Coords>* find_embedding(FieldId from, FieldId to) const;
  void create_embedding(FieldId from, FieldId to);
  FieldElem apply_embedding(const std::vector<Coords>& img, const FieldElem& a, FieldId to) const;

  std::uint32_t p_;
  unsigned max_degree_;
  static constexpr unsigned kMaxFields = 256;
  std::array<std::atomic<Field*>, kMaxFields> fields_{};
  std::atomic<unsigned> nfields_{0};
  std::vector<std::unique_ptr<Field>> owned_;
  std::map<unsigned, FieldId> by_degree_;
  std::map<EmbKey, std::vector<Coords>> emb_;
  std::map<unsigned, std::vector<FieldElem>> roots_of_unity_;
  mutable std::recursive_mutex mu_;
};

struct FieldTower::Field {
  FieldId id;
  unsigned m;
  std::vector<std::uint32_t> modulus;  // size m+1, monic
};

// Roots of a nonzero polynomial in its splitting field, sorted
// lexicographically, with multiplicities summing to the degree.
std::vector<std::pair<FieldElem, int>> roots_of(const UPoly& f);
FieldId ensure_splitting_field(const UPoly& f);

FieldElem poly_eval(const UPoly& f, const FieldElem& x);
int poly_degree(const UPoly& f);

}  // namespace cdineq
