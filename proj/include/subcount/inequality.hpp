#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "subcount/bound_value.hpp"
#include "subcount/errors.hpp"
#include "subcount/factored.hpp"

namespace subcount {

/// One candidate for the prime-power pull-out inequality
///   S(p,a) * r / (r^2 / p^a)^{a log2(p)/4} <= 1,
/// where a is the exact multiplicity of p in r.
struct VeraCase {
  std::uint64_t p = 2;
  unsigned a = 1;
  FactoredInteger r;
};

enum class VeraStatus {
  Holds,      ///< left side strictly below 1
  Equality,   ///< left side exactly 1 (settled in integer arithmetic)
  Exception,  ///< left side strictly above 1
};

struct VeraVerdict {
  VeraStatus status = VeraStatus::Holds;
  double lhs_log = 0.0;      ///< natural log of the left side
  bool needed_exact = false; ///< fell inside the float guard band
};

/// Natural log of the left side of the pull-out inequality.
/// Throws ExponentMismatch when r's p-exponent differs from a.
double vera_lhs_log(const VeraCase& c);

/// Classifies a case with a 1e-12 guard band around zero; in-band
/// cases are settled exactly (integer powers when p = 2, where the
/// exponent a*log2(p)/4 is rational; other primes never land in-band
/// within the enumerated ranges and trigger BoundaryComparison if one
/// ever does).
VeraVerdict vera_classify(const VeraCase& c);

/// Exhaustively enumerates the exceptions of the pull-out inequality
/// for fixed exponent a over primes p <= prime_cap and coprime
/// cofactors 2..cofactor_cap; cases with unbounded exception families
/// (p in {2,3} at a = 1, p = 2 at a = 2) are scanned to the cap and
/// marked unbounded in the companion query below.  Sorted by (p,
/// cofactor).  Throws CapTooSmall when the caps cannot certify the
/// known finite lists (prime_cap >= 13, cofactor_cap >= 4918 at a=1).
std::vector<VeraCase> appendix_exceptions(unsigned a, std::uint64_t prime_cap,
                                          std::uint64_t cofactor_cap);

/// True when the (p, a) family has exceptions for every cofactor.
bool vera_family_unbounded(std::uint64_t p, unsigned a);

/// The four power-mixture inequalities that hold for every r >= 2000:
///   1: 4r(r/7)^E(r/7)  + 8r(r/14)^E(r/14)                <= r^E(r)
///   2: 8r(r/28)^E(r/28) + 6r(r/21)^E(r/21) + 4r(r/14)^E(r/14) <= r^E(r)
///   3: (2r+10)(r/10)^E(r/10) + (r/5+5)(r/5)^E(r/5)       <= r^E(r)
///   4: 2p(r/p)^E(r/p)                                    <= r^E(r)
/// with E(x) = log2(x)/4.  Part 4 needs an odd prime p with r >= 2p.
/// Throws PreconditionViolated on r < 2000 or a bad part-4 prime.
bool technical_check(int part, const mpz_class& r,
                     std::optional<std::uint64_t> p = std::nullopt);

/// Crossover thresholds on log2(r) above which the dominant-term
/// reductions of the first three mixtures apply, recomputed from
/// their closed forms; approximately {10.63, 8.62, 2.16}.
std::vector<double> technical_thresholds();

/// Same crossover for the single-term mixture at odd prime p:
/// (1 + log2(p)^2/4) / (log2(p)/2 - 1) for p >= 5, and the simpler
/// log2(p)/2 + 1 form at the boundary case handled separately.
double technical_threshold_part4(std::uint64_t p);

/// Recursive Hall tower bound on the number of subgroups of a
/// solvable group of order r: B(p^a) = S(p,a) and, splitting off the
/// largest prime,
///   B(r) = (1 + (B(r/q) - 1) q) * (1 + (S(p_l,a_l) - 1) r/q),
/// with q = p_l^{a_l}.  Exact when every exponent is at most 5.
BoundValue solvable_recursive_bound(const FactoredInteger& r);

/// Exact integer value of the recursion; requires all exponents <= 5.
mpz_class solvable_recursive_bound_exact(const FactoredInteger& r);

/// Two-prime refinement at r = 3 * 2^{a1}: returns
///   lhs = c(2) 2^{a1^2/4} (4 + 2^{a1/2+1/4} - 2^{-a1/2+1/4})
///   rhs = c(2) (3*2^{a1})^{log2(3*2^{a1})/4}
/// after re-deriving lhs from the q-binomial subgroup counts and
/// asserting agreement.  Throws A1OutOfRange outside 3 <= a1 <= 11.
std::pair<double, double> qbinom_refined_pair(unsigned a1);

/// Exact integer identity behind the refinement: for n >= 1,
///   sum_a [n,a]_2 2^a = (2^n - 1) sum_k [n-1,k]_2 + sum_k [n,k]_2.
/// Returns the common value.
mpz_class qbinom_resummation(unsigned n);

/// One conjugacy-class term k * m^{log2(m)/4} of a weighted
/// subgroup-class bound.
struct WeightedTerm {
  mpq_class count;  ///< k > 0
  mpq_class base;   ///< m >= 1
  std::string note;
};

/// Whether c(2) * sum of the terms <= c(2) * r^{log2(r)/4} in log
/// space.  Throws EmptyTerms.
bool weighted_power_bound(const std::vector<WeightedTerm>& terms,
                          const mpz_class& r);

/// Class data for the three-prime case analyses: two classes of
/// index-5 complements (10 and 5 conjugates) plus their 5-closures.
std::vector<WeightedTerm> weighted_terms_alt5(const mpz_class& r);
/// Four classes of 7'-subgroups of index 7 and 14.
std::vector<WeightedTerm> weighted_terms_psl27(const mpz_class& r);
/// Three classes of 7'-subgroups of index 28, 21 and 14.
std::vector<WeightedTerm> weighted_terms_pgl27(const mpz_class& r);

}  // namespace subcount
