#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "subcount/errors.hpp"

namespace subcount {

/// A finite group as an explicit multiplication table over element
/// indices 0..n-1, with the identity at index 0.  Construction
/// validates the identity row/column, builds the two-sided inverse
/// table, and checks associativity (exhaustively for n <= 128, on
/// 100000 deterministic random triples above that cost threshold).
/// Immutable after construction.
class GroupTable {
 public:
  GroupTable(unsigned order, std::vector<std::uint16_t> mul,
             std::string name);

  unsigned order() const { return n_; }
  const std::string& name() const { return name_; }
  std::uint16_t mul(unsigned a, unsigned b) const {
    return mul_[static_cast<std::size_t>(a) * n_ + b];
  }
  std::uint16_t inv(unsigned a) const { return inv_[a]; }
  /// Row a of the multiplication table: row(a)[b] == mul(a, b).
  const std::uint16_t* row(unsigned a) const {
    return mul_.data() + static_cast<std::size_t>(a) * n_;
  }
  /// Multiplicative order of element a.
  unsigned element_order(unsigned a) const;

 private:
  unsigned n_;
  std::vector<std::uint16_t> mul_;
  std::vector<std::uint16_t> inv_;
  std::string name_;
};

/// Largest order accepted by any constructor.
inline constexpr unsigned kMaxGroupOrder = 10'000;

GroupTable make_cyclic(unsigned n);
/// Direct product of cyclic groups of the given orders.
GroupTable make_abelian(const std::vector<unsigned>& cyclic_orders);
/// Dihedral group of order 2n (symmetries of the n-gon), n >= 1.
GroupTable make_dihedral(unsigned n);
/// Dicyclic group of order 4n (n = 2 gives the quaternion group).
GroupTable make_dicyclic(unsigned n);
GroupTable make_symmetric(unsigned k);    // k <= 6
GroupTable make_alternating(unsigned k);  // k <= 6
/// Closure of the generated permutation group; each generator is an
/// image list over points 0..m-1, m <= 64.
GroupTable make_from_permutations(
    const std::vector<std::vector<unsigned>>& generators,
    const std::string& name = "perm-group");
/// Reads either a Cayley table ("n" header then n rows of n indices,
/// identity first) or cycle-notation generators ("perm" header, one
/// generator per line, points numbered from 1).
GroupTable make_from_table(std::istream& in, const std::string& name);
GroupTable direct_product(const GroupTable& a, const GroupTable& b);

/// Parses one permutation in cycle notation, e.g. "(1 2 3)(4 5)",
/// into an image list over 0..m-1 where m is the largest point named.
std::vector<unsigned> parse_cycles(const std::string& text);

}  // namespace subcount
