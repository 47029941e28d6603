#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "subcount/bound_value.hpp"
#include "subcount/errors.hpp"
#include "subcount/group.hpp"

namespace subcount {

/// One subgroup as a membership bitmask over element indices.
struct Subgroup {
  std::vector<std::uint64_t> members;  ///< (order+63)/64 words
  unsigned order = 0;
  bool contains(unsigned i) const {
    return (members[i >> 6] >> (i & 63)) & 1;
  }
};

struct EnumerateOptions {
  std::uint64_t cap = 1'000'000;  ///< abort beyond this many subgroups
  bool force = false;             ///< allow orders above the guaranteed 512
};

/// The complete, duplicate-free subgroup list: seeded with every
/// cyclic subgroup and saturated under joins <H, c> with c cyclic;
/// deduplicated by membership mask and sorted by (order, mask).
/// Throws Unsupported above order 512 without force, CapExceeded when
/// the count cap is hit (partial results discarded).
std::vector<Subgroup> enumerate_subgroups(const GroupTable& g,
                                          const EnumerateOptions& opt = {});

/// Subgroup count only; same algorithm without materializing the list.
mpz_class count_subgroups(const GroupTable& g,
                          const EnumerateOptions& opt = {});

/// Independent exponential oracle: tests closure of every subset
/// (containing the identity) whose size divides |G|.  Only for
/// |G| <= 20; throws TooLargeForOracle above.
mpz_class brute_subset_oracle(const GroupTable& g);

/// Outcome of checking one group against the main subgroup-count
/// bound c(2) |G|^{log2|G|/4}.
struct CheckResult {
  std::string group;
  unsigned order = 0;
  mpz_class sub_count;
  BoundValue rhs_log{0.0, 0.0};
  bool holds = false;
  double margin_log = 0.0;  ///< rhs_log - ln(sub_count)
};

CheckResult verify_theorem(const GroupTable& g,
                           const EnumerateOptions& opt = {});

/// The built-in corpus up to max_order (<= 512): every abelian group
/// of each order (one per isomorphism type, via partitions of the
/// prime exponents), the dihedral and dicyclic families, symmetric
/// and alternating groups of degree <= 6, and pairwise direct
/// products of the non-abelian families within the order cap.
/// Deterministic ordering.
std::vector<GroupTable> builtin_corpus(unsigned max_order);

/// verify_theorem over the built-in corpus; per-group failures are
/// recorded in the results, never thrown.
std::vector<CheckResult> corpus_run(unsigned max_order);

}  // namespace subcount
