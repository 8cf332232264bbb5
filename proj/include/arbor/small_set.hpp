#pragma once

#include <bit>
#include <cstdint>
#include <string>

#include "arbor/errors.hpp"

namespace arbor {

// Fixed-width bitmask over a ground set of at most 64 dense ids. The tag keeps
// vertex sets, arc sets and forest-index sets from mixing.
template <class Tag>
class SmallSet {
 public:
  constexpr SmallSet() = default;

  static constexpr SmallSet of_bits(std::uint64_t raw) {
    SmallSet s;
    s.bits_ = raw;
    return s;
  }
  static constexpr SmallSet single(int e) { return of_bits(std::uint64_t{1} << e); }
  static constexpr SmallSet full(int n) {
    return of_bits(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int count() const { return std::popcount(bits_); }
  constexpr bool contains(int e) const { return (bits_ >> e) & 1; }
  constexpr int first() const { return std::countr_zero(bits_); }

  constexpr SmallSet with(int e) const { return of_bits(bits_ | (std::uint64_t{1} << e)); }
  constexpr SmallSet without(int e) const { return of_bits(bits_ & ~(std::uint64_t{1} << e)); }

  constexpr bool subset_of(SmallSet o) const { return (bits_ & ~o.bits_) == 0; }
  constexpr bool intersects(SmallSet o) const { return (bits_ & o.bits_) != 0; }

  friend constexpr SmallSet operator|(SmallSet a, SmallSet b) { return of_bits(a.bits_ | b.bits_); }
  friend constexpr SmallSet operator&(SmallSet a, SmallSet b) { return of_bits(a.bits_ & b.bits_); }
  friend constexpr SmallSet operator-(SmallSet a, SmallSet b) { return of_bits(a.bits_ & ~b.bits_); }
  friend constexpr bool operator==(SmallSet a, SmallSet b) { return a.bits_ == b.bits_; }
  friend constexpr bool operator!=(SmallSet a, SmallSet b) { return a.bits_ != b.bits_; }
  friend constexpr bool operator<(SmallSet a, SmallSet b) { return a.bits_ < b.bits_; }

  // Iterates set elements in ascending order.
  struct iterator {
    std::uint64_t rest;
    int operator*() const { return std::countr_zero(rest); }
    iterator& operator++() {
      rest &= rest - 1;
      return *this;
    }
    bool operator!=(const iterator& o) const { return rest != o.rest; }
  };
  iterator begin() const { return {bits_}; }
  iterator end() const { return {0}; }

 private:
  std::uint64_t bits_ = 0;
};

struct VertexTag {};
struct ArcTag {};
struct ForestTag {};
struct PartTag {};
struct ElemTag {};

using VertexSet = SmallSet<VertexTag>;
using ArcSet = SmallSet<ArcTag>;
using IndexSet = SmallSet<ForestTag>;  // forest indices 0..k-1
using PartSet = SmallSet<PartTag>;     // partition-part indices 0..l-1
using ElemSet = SmallSet<ElemTag>;     // abstract ground elements

// X and Y properly intersect when X∩Y, X∖Y and Y∖X are all nonempty.
template <class Tag>
constexpr bool properly_intersecting(SmallSet<Tag> x, SmallSet<Tag> y) {
  return (x & y) != SmallSet<Tag>{} && !(x - y).empty() && !(y - x).empty();
}

// Visits every subset of `ground` (including the empty one) in ascending
// bitmask order. The visitor returns false to stop early; the function
// returns false iff stopped.
template <class Tag, class F>
bool for_each_subset(SmallSet<Tag> ground, F&& visit) {
  std::uint64_t g = ground.bits();
  std::uint64_t sub = 0;
  while (true) {
    if (!visit(SmallSet<Tag>::of_bits(sub))) return false;
    if (sub == g) return true;
    sub = (sub - g) & g;
  }
}

template <class Tag, class F>
bool for_each_nonempty_subset(SmallSet<Tag> ground, F&& visit) {
  return for_each_subset(ground, [&](SmallSet<Tag> s) { return s.empty() ? true : visit(s); });
}

}  // namespace arbor
