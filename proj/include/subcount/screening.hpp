#pragma once

#include <optional>
#include <string>
#include <vector>

#include "subcount/bound_value.hpp"
#include "subcount/bounds.hpp"
#include "subcount/factored.hpp"
#include "subcount/simple_orders.hpp"

namespace subcount {

/// Which PSL2(3^(3^f)) orders trigger the relaxed Sylow-3 divisor rule.
enum class Psl2Trigger {
  FGe1,  // orders 9828, ... (the simple members); default
  FGe0,  // additionally order 12 (the literal reading)
};

/// Condition filter certifying "good" orders by shape alone.
/// Requires p_1 = 2, a_1 >= 2, ell >= 3; returns the 1-based clause
/// that fires (1: ell >= 13; 2..10: per-ell thresholds on p_ell, the
/// tail exponents, and a_1), or nullopt.
std::optional<int> lmax_filter(const FactoredInteger& r);

/// Upper bound on the number of Sylow p_i-subgroups of a non-solvable
/// group of order r (largest admissible divisor congruent 1 mod p_i).
mpz_class sylow_upper(const FactoredInteger& r, std::size_t i,
                      Psl2Trigger trigger = Psl2Trigger::FGe1);

/// One or two simple sections whose order product divides r.
struct SectionConfig {
  mpz_class d;
  std::vector<const SimpleGroupRecord*> parts;
  std::string names() const;  // "Alt(5)" or "Alt(5)+PSL2(7)"
  mpz_class cofactor_of(const mpz_class& r) const { return r / d; }
};

enum class ScreenKind { Yes, Unknown };
enum class ScreenStage { Lmax, Step1, Step2 };

struct ScreenVerdict {
  ScreenKind kind = ScreenKind::Yes;
  ScreenStage stage = ScreenStage::Step1;
  std::optional<BoundValue> bound_log;
  std::vector<SectionConfig> survivors;
};

/// Step 1: product of Sylow-count bounds times S(p_i, a_i) against the
/// global budget.  Yes when some bound is 1 or the product is
/// certainly below the budget; Unknown otherwise.
ScreenVerdict step1_screen(const FactoredInteger& r,
                           Psl2Trigger trigger = Psl2Trigger::FGe1);

/// All section configurations compatible with r: single records from
/// the DB plus the three admissible two-section products.
std::vector<SectionConfig> section_divisor_set(const FactoredInteger& r,
                                               const SimpleOrderDB& db);

/// A prime p >= 5 dividing the cofactor but not d, coprime to q-1 for
/// every prime-power divisor q > 1 of the cofactor; such a prime
/// forces a normal Sylow subgroup and eliminates the configuration.
std::optional<std::uint64_t> normal_sylow_filter(const mpz_class& cofactor,
                                                 const mpz_class& d);

/// Step 2: eliminates section configurations via normal_sylow_filter;
/// Yes iff none survive.
ScreenVerdict step2_screen(const FactoredInteger& r, const SimpleOrderDB& db,
                           Psl2Trigger trigger = Psl2Trigger::FGe1);

/// Caps describing the complement of one condition-filter clause.
struct ScanCaps {
  unsigned ell = 4;
  std::uint64_t p_max = 79;  // exclusive bound on the largest prime
  unsigned a_tail_max = 4;   // inclusive bound on a_i, i >= 2
  unsigned a1_max = 27;      // inclusive bound on a_1
  static ScanCaps for_ell(unsigned ell);  // from the clause table
};

struct ScanRow {
  FactoredInteger r;
  ScreenVerdict verdict;
};

struct ScanReport {
  ScanCaps caps;
  std::uint64_t patterns_examined = 0;
  std::vector<ScanRow> unknown_rows;  // ascending by value
};

/// Enumerates every factorization shape inside the caps (p_1 = 2,
/// a_1 >= 2) and runs step 1 on each; rows surviving step 1 are
/// reported.  A provable value ceiling prunes the enumeration; the
/// node budget guards against miscapped calls.
ScanReport scan_patterns(const ScanCaps& caps, unsigned workers = 0,
                         Psl2Trigger trigger = Psl2Trigger::FGe1,
                         std::uint64_t node_budget = 20'000'000'000);

/// Largest order that can possibly survive step 1 under the caps
/// (from the uniform bound on the step-1 product).
double scan_log_r_ceiling(const ScanCaps& caps);

}  // namespace subcount
