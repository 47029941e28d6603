#pragma once

#include <gmpxx.h>

#include <cstdint>

#include "subcount/bound_value.hpp"
#include "subcount/factored.hpp"

namespace subcount {

inline constexpr double kLn2 = 0.6931471805599453094;

/// The limiting constant
///   c(p) = prod_{i>=1} 1/(1 - p^{-i}) * (-1 + 2 * sum_{k>=0} p^{-k^2}),
/// evaluated by truncating both series once one more factor/term moves
/// the running value by less than rel_tol relatively.  Memoized per
/// prime after first use; safe for concurrent reads after warm-up.
double c_of_p(std::uint64_t p, double rel_tol = 1e-12);

/// Natural log of c(p).
double log_c_of_p(std::uint64_t p);

/// Uniform bound on the number of subgroups of a group of order p^a:
/// an explicit polynomial in p for a <= 5, c(p) * p^{a^2/4} above.
BoundValue S_of(std::uint64_t p, unsigned a);

/// Exact integer value of S(p,a); only defined for a <= 5.
mpz_class S_exact(std::uint64_t p, unsigned a);

/// Natural log of S(p,a), cheap path used by the scanners.
double log_S(std::uint64_t p, unsigned a);

/// p-binomial coefficient [n, k]_p, exact.
mpz_class gaussian_binomial(unsigned n, unsigned k, std::uint64_t p);

/// sum_k [a, k]_p = number of subspaces of an a-dimensional space over
/// the p-element field = subgroup count of the elementary abelian
/// group of order p^a.
mpz_class subspace_count(std::uint64_t p, unsigned a);

/// ln(c(2)) + (ln r)^2 / (4 ln 2): log of the global subgroup-count
/// budget c(2) * r^{log_2(r)/4}.
BoundValue main_rhs_log(const FactoredInteger& r);
BoundValue main_rhs_log_from(double log_r);

/// The screening function
///   f(r) = ln c(2)/ln r
///        + sum_i (a_i ln p_i / (4 ln 2) - ln S(p_i,a_i)/ln r)
///        - (l - 1) + (l - 2) ln 2 / ln r.
/// Positive values certify the subgroup bound for every group of
/// order r with the stated shape.  Requires at least two primes.
double f_of(const FactoredInteger& r);

/// Same as f_of but with the uniform c(p) p^{a^2/4} replacing S for
/// every exponent; a lower bound on f_of.
double ft_of(const FactoredInteger& r);

enum class Goodness { TGood, Good, NotGood, Boundary };

struct GoodnessVerdict {
  Goodness kind;
  double f_value;
  double ft_value;
};

/// TGood if ft > tol, Good if f > tol, Boundary if either value lies
/// in [-tol, tol], NotGood otherwise.
GoodnessVerdict classify_good(const FactoredInteger& r, double tol = 1e-9);

}  // namespace subcount
