#include "subcount/inequality.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "subcount/bounds.hpp"

namespace subcount {

namespace {

constexpr double kVeraBand = 1e-12;

// Natural log of a positive mpz without materializing it as double.
double log_mpz(const mpz_class& z) {
  signed long int e = 0;
  const double d = mpz_get_d_2exp(&e, z.get_mpz_t());
  return std::log(d) + static_cast<double>(e) * kLn2;
}

double log_mpq(const mpq_class& q) {
  return log_mpz(q.get_num()) - log_mpz(q.get_den());
}

// log(1 + e^t), stable for large t.
double softplus(double t) {
  if (t > 40.0) return t + std::exp(-t);
  return std::log1p(std::exp(t));
}

// log(e^t - 1) for t >= log 2, stable.
double log_expm1(double t) {
  return t + std::log1p(-std::exp(-t));
}

double vera_lhs_log_raw(std::uint64_t p, unsigned a, double log_cof) {
  const double lp = std::log(static_cast<double>(p));
  const double log_r = log_cof + a * lp;
  const double coef = a * lp / kLn2 / 4.0;
  return log_S(p, a) + log_r - coef * (2.0 * log_r - a * lp);
}

VeraStatus vera_exact_p2(unsigned a, const mpz_class& r) {
  // For p = 2 the exponent a*log2(2)/4 = a/4 is rational, so the
  // inequality S*r <= (r^2/2^a)^{a/4} is equivalent to the integer
  // comparison (S*r)^4 <= (r^2/2^a)^a.  S(2,a) is an integer only
  // for a <= 5; no boundary case has ever arisen beyond that.
  if (a > 5)
    throw BoundaryComparison(
        "boundary pull-out case with irrational subgroup bound");
  mpz_class lhs, rhs;
  mpz_class sr = S_exact(2, a) * r;
  mpz_pow_ui(lhs.get_mpz_t(), sr.get_mpz_t(), 4);
  mpz_class base = r * r;
  mpz_fdiv_q_2exp(base.get_mpz_t(), base.get_mpz_t(), a);
  mpz_pow_ui(rhs.get_mpz_t(), base.get_mpz_t(), a);
  const int c = cmp(lhs, rhs);
  if (c > 0) return VeraStatus::Exception;
  if (c == 0) return VeraStatus::Equality;
  return VeraStatus::Holds;
}

}  // namespace

double vera_lhs_log(const VeraCase& c) {
  if (c.a == 0) throw PreconditionViolated("pull-out exponent must be >= 1");
  if (c.r.exponent_of(c.p) != c.a)
    throw ExponentMismatch("r's exponent at p differs from the case's a");
  mpz_class pa;
  mpz_ui_pow_ui(pa.get_mpz_t(), c.p, c.a);
  const mpz_class cof = c.r.value() / pa;
  return vera_lhs_log_raw(c.p, c.a, log_mpz(cof));
}

VeraVerdict vera_classify(const VeraCase& c) {
  VeraVerdict out;
  out.lhs_log = vera_lhs_log(c);
  if (std::abs(out.lhs_log) > kVeraBand) {
    out.status =
        out.lhs_log > 0 ? VeraStatus::Exception : VeraStatus::Holds;
    return out;
  }
  out.needed_exact = true;
  if (c.p != 2)
    throw BoundaryComparison(
        "boundary pull-out case with irrational exponent");
  out.status = vera_exact_p2(c.a, c.r.value());
  return out;
}

bool vera_family_unbounded(std::uint64_t p, unsigned a) {
  // Families whose left side grows without bound in the cofactor:
  // the exponent coefficient a*log2(p)/4 is at most 1/2 there, so
  // lhs ~ S * r^{1 - 2*coef} diverges.
  return (a == 1 && (p == 2 || p == 3)) || (a == 2 && p == 2);
}

std::vector<VeraCase> appendix_exceptions(unsigned a, std::uint64_t prime_cap,
                                          std::uint64_t cofactor_cap) {
  if (a == 0) throw PreconditionViolated("exponent must be >= 1");
  if (prime_cap < 13 || cofactor_cap < 4918)
    throw CapTooSmall(
        "caps below the certified ranges (prime_cap >= 13, cofactor_cap >= "
        "4918)");
  std::vector<VeraCase> out;
  for (std::uint64_t p = 2; p <= prime_cap; ++p) {
    if (!is_prime_u64(p)) continue;
    if (vera_family_unbounded(p, a)) continue;
    for (std::uint64_t cof = 2; cof <= cofactor_cap; ++cof) {
      if (cof % p == 0) continue;
      const double quick =
          vera_lhs_log_raw(p, a, std::log(static_cast<double>(cof)));
      if (quick < -1e-9) continue;
      mpz_class pa;
      mpz_ui_pow_ui(pa.get_mpz_t(), p, a);
      VeraCase c{p, a, factorize(mpz_class(cof) * pa)};
      if (vera_classify(c).status == VeraStatus::Exception)
        out.push_back(std::move(c));
    }
  }
  // Ascending (p, cofactor) by construction.
  return out;
}

bool weighted_power_bound(const std::vector<WeightedTerm>& terms,
                          const mpz_class& r) {
  if (terms.empty()) throw EmptyTerms("weighted bound needs at least one term");
  if (r < 2) throw PreconditionViolated("weighted bound needs r >= 2");
  std::vector<double> logs;
  logs.reserve(terms.size());
  for (const auto& t : terms) {
    if (t.count <= 0) throw PreconditionViolated("term count must be > 0");
    if (t.base < 1) throw PreconditionViolated("term base must be >= 1");
    const double lb = log_mpq(t.base);
    logs.push_back(log_mpq(t.count) + lb * lb / (4.0 * kLn2));
  }
  const double mx = *std::max_element(logs.begin(), logs.end());
  double acc = 0.0;
  for (double l : logs) acc += std::exp(l - mx);
  const double lhs = mx + std::log(acc);
  const double lr = log_mpz(r);
  const double rhs = lr * lr / (4.0 * kLn2);
  return lhs <= rhs + 1e-9;
}

bool technical_check(int part, const mpz_class& r,
                     std::optional<std::uint64_t> p) {
  if (part < 1 || part > 4) throw InputOutOfRange("part must be 1..4");
  if (r < 2000) throw PreconditionViolated("the mixtures need r >= 2000");
  const mpq_class rq(r);
  std::vector<WeightedTerm> terms;
  switch (part) {
    case 1:
      terms = {{4 * rq, rq / 7, "four classes of index 7"},
               {8 * rq, rq / 14, "four classes of index 14"}};
      break;
    case 2:
      terms = {{8 * rq, rq / 28, "index-28 class"},
               {6 * rq, rq / 21, "index-21 class"},
               {4 * rq, rq / 14, "index-14 class"}};
      break;
    case 3:
      terms = {{2 * rq + 10, rq / 10, "index-10 classes and closures"},
               {rq / 5 + 5, rq / 5, "index-5 class and closure"}};
      break;
    case 4: {
      if (!p) throw PreconditionViolated("part 4 needs a prime");
      if (*p < 3 || !is_prime_u64(*p))
        throw PreconditionViolated("part 4 needs an odd prime");
      if (r < 2 * mpz_class(static_cast<unsigned long>(*p)))
        throw PreconditionViolated("part 4 needs r >= 2p");
      terms = {{2 * mpq_class(static_cast<unsigned long>(*p)), rq / *p,
                "normal-complement class"}};
      break;
    }
  }
  return weighted_power_bound(terms, r);
}

std::vector<double> technical_thresholds() {
  const double l5 = std::log2(5.0), l7 = std::log2(7.0),
               l14 = std::log2(14.0), l18 = std::log2(18.0);
  return {(l5 + l7 * l7 / 4.0) / (l7 / 2.0 - 1.0),
          (l18 + l14 * l14 / 4.0) / (l14 / 2.0 - 1.0),
          (-1.0 + l5 * l5 / 4.0) / (-1.0 + l5 / 2.0)};
}

double technical_threshold_part4(std::uint64_t p) {
  if (p < 3 || !is_prime_u64(p))
    throw PreconditionViolated("part-4 threshold needs an odd prime");
  const double lp = std::log2(static_cast<double>(p));
  // The quotient form needs log2(p)/2 > 1; at p = 3 the weaker
  // log2(p)/2 + 1 reduction applies instead.
  if (p == 3) return lp / 2.0 + 1.0;
  return (1.0 + lp * lp / 4.0) / (lp / 2.0 - 1.0);
}

namespace {

struct LogVal {
  double log = 0.0;
  double tol = 0.0;
};

LogVal solvable_log(const FactoredInteger& r, std::size_t upto) {
  const PrimePower& top = r[upto];
  const double s_log = log_S(top.prime, top.exponent);
  const double s_tol = top.exponent <= 5 ? 1e-14 : 1e-11;
  if (upto == 0) return {s_log, s_tol};
  LogVal inner = solvable_log(r, upto - 1);
  double log_q = top.exponent * std::log(static_cast<double>(top.prime));
  double log_cof = 0.0;
  for (std::size_t i = 0; i < upto; ++i)
    log_cof += r[i].exponent * std::log(static_cast<double>(r[i].prime));
  // (1 + (B' - 1) q) * (1 + (S - 1) r/q), all factors >= 2 so the
  // log(x - 1) terms are stable.
  const double left = softplus(log_expm1(inner.log) + log_q);
  const double right = softplus(log_expm1(s_log) + log_cof);
  return {left + right, inner.tol + s_tol + 1e-13};
}

}  // namespace

mpz_class solvable_recursive_bound_exact(const FactoredInteger& r) {
  if (r.num_primes() == 0)
    throw PreconditionViolated("need at least one prime");
  for (const auto& f : r.factors())
    if (f.exponent > 5)
      throw InputOutOfRange("exact recursion needs all exponents <= 5");
  mpz_class acc = S_exact(r[0].prime, r[0].exponent);
  mpz_class cof(1);
  {
    mpz_class pa;
    mpz_ui_pow_ui(pa.get_mpz_t(), r[0].prime, r[0].exponent);
    cof = pa;
  }
  for (std::size_t i = 1; i < r.num_primes(); ++i) {
    mpz_class q;
    mpz_ui_pow_ui(q.get_mpz_t(), r[i].prime, r[i].exponent);
    const mpz_class s = S_exact(r[i].prime, r[i].exponent);
    acc = (1 + (acc - 1) * q) * (1 + (s - 1) * cof);
    cof *= q;
  }
  return acc;
}

BoundValue solvable_recursive_bound(const FactoredInteger& r) {
  if (r.num_primes() == 0)
    throw PreconditionViolated("need at least one prime");
  bool all_exact = true;
  for (const auto& f : r.factors())
    if (f.exponent > 5) all_exact = false;
  if (all_exact) {
    return BoundValue(log_mpz(solvable_recursive_bound_exact(r)), 1e-12);
  }
  LogVal v = solvable_log(r, r.num_primes() - 1);
  return BoundValue(v.log, v.tol);
}

mpz_class qbinom_resummation(unsigned n) {
  if (n < 1) throw InputOutOfRange("resummation needs n >= 1");
  mpz_class direct = 0;
  for (unsigned a = 0; a <= n; ++a) {
    mpz_class term = gaussian_binomial(n, a, 2);
    mpz_mul_2exp(term.get_mpz_t(), term.get_mpz_t(), a);
    direct += term;
  }
  mpz_class twon;
  mpz_ui_pow_ui(twon.get_mpz_t(), 2, n);
  const mpz_class regrouped =
      (twon - 1) * subspace_count(2, n - 1) + subspace_count(2, n);
  if (direct != regrouped)
    throw std::logic_error("q-binomial resummation identity failed");
  return direct;
}

std::pair<double, double> qbinom_refined_pair(unsigned a1) {
  if (a1 < 3 || a1 > 11)
    throw A1OutOfRange("the calculator check covers 3 <= a1 <= 11");
  const double c2 = c_of_p(2);
  const double da = static_cast<double>(a1);
  const double lhs =
      c2 * std::exp2(da * da / 4.0) *
      (4.0 + std::exp2(da / 2.0 + 0.25) - std::exp2(-da / 2.0 + 0.25));
  // Re-derivation along the counting route: 3 Sylow choices worth of
  // odd-order-index subgroups plus the regrouped q-binomial sum,
  // bounded by the subspace-count envelope of each summand.
  (void)qbinom_resummation(a1);
  const double lhs2 =
      c2 * (4.0 * std::exp2(da * da / 4.0) +
            (std::exp2(da) - 1.0) * std::exp2((da - 1.0) * (da - 1.0) / 4.0));
  if (std::abs(lhs - lhs2) > 1e-9 * lhs)
    throw std::logic_error("closed form disagrees with the counting route");
  const double log_r = std::log(3.0) + da * kLn2;
  const double rhs = c2 * std::exp(log_r * log_r / (4.0 * kLn2));
  return {lhs, rhs};
}

std::vector<WeightedTerm> weighted_terms_alt5(const mpz_class& r) {
  const mpq_class rq(r);
  return {{10, rq / 10, "ten conjugates of the smaller complement class"},
          {5, rq / 5, "five conjugates of the larger complement class"},
          {2 * rq, rq / 10, "closures over the smaller class"},
          {rq / 5, rq / 5, "closures over the larger class"}};
}

std::vector<WeightedTerm> weighted_terms_psl27(const mpz_class& r) {
  const mpq_class rq(r);
  return {{4 * rq, rq / 7, "two classes of index-7 complements"},
          {8 * rq, rq / 14, "two classes of index-14 complements"}};
}

std::vector<WeightedTerm> weighted_terms_pgl27(const mpz_class& r) {
  const mpq_class rq(r);
  return {{8 * rq, rq / 28, "index-28 complement class"},
          {6 * rq, rq / 21, "index-21 complement class"},
          {4 * rq, rq / 14, "index-14 complement class"}};
}

}  // namespace subcount
