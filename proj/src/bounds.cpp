#include "subcount/bounds.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

namespace subcount {

namespace {

struct CEntry {
  double value;
  double tolerance;
};

std::map<std::pair<std::uint64_t, double>, CEntry> g_c_cache;
std::mutex g_c_mutex;

CEntry c_of_p_compute(std::uint64_t p, double rel_tol) {
  const double inv_p = 1.0 / static_cast<double>(p);

  // prod_{i>=1} 1/(1 - p^{-i}); each extra factor multiplies by
  // 1/(1 - p^{-i}) > 1, so the partial products increase.
  double prod = 1.0;
  double last_rel = 0.0;
  double pi = inv_p;
  while (true) {
    const double factor = 1.0 / (1.0 - pi);
    const double next = prod * factor;
    last_rel = (next - prod) / next;
    prod = next;
    if (last_rel < rel_tol) break;
    pi *= inv_p;
  }
  const double prod_tol = 10.0 * last_rel * prod;

  // -1 + 2 * sum_{k>=0} p^{-k^2}; terms decrease super-geometrically.
  double sum = -1.0 + 2.0;  // k = 0 term
  unsigned k = 1;
  while (true) {
    const double term = 2.0 * std::pow(inv_p, static_cast<double>(k) * k);
    const double next = sum + term;
    const double rel = term / next;
    sum = next;
    if (rel < rel_tol) {
      last_rel = rel;
      break;
    }
    ++k;
  }
  const double sum_tol = 10.0 * last_rel * sum;

  const double value = prod * sum;
  const double tolerance = prod_tol * sum + sum_tol * prod;
  return {value, tolerance};
}

}  // namespace

double c_of_p(std::uint64_t p, double rel_tol) {
  if (!is_prime_u64(p)) throw NotPrime("c(p) requires a prime argument");
  if (!(rel_tol > 0.0) || rel_tol > 1e-10)
    throw InputOutOfRange("rel_tol must lie in (0, 1e-10]");
  const std::pair<std::uint64_t, double> key{p, rel_tol};
  {
    std::lock_guard<std::mutex> lock(g_c_mutex);
    auto it = g_c_cache.find(key);
    if (it != g_c_cache.end()) return it->second.value;
  }
  CEntry e = c_of_p_compute(p, rel_tol);
  std::lock_guard<std::mutex> lock(g_c_mutex);
  return g_c_cache.emplace(key, e).first->second.value;
}

double log_c_of_p(std::uint64_t p) { return std::log(c_of_p(p)); }

mpz_class S_exact(std::uint64_t p, unsigned a) {
  if (!is_prime_u64(p)) throw NotPrime("S(p,a) requires a prime");
  const mpz_class q(static_cast<unsigned long>(p));
  switch (a) {
    case 1:
      return 2;
    case 2:
      return q + 3;
    case 3:
      return 2 * q * q + 2 * q + 4;
    case 4:
      return ((q + 3) * q + 4) * q * q + 3 * q + 5;
    case 5:
      return ((((2 * q + 2) * q + 6) * q + 6) * q + 6) * q * q + 4 * q + 6;
    default:
      throw InputOutOfRange("S(p,a) is an explicit integer only for a <= 5");
  }
}

BoundValue S_of(std::uint64_t p, unsigned a) {
  if (a < 1) throw InputOutOfRange("S(p,a) requires a >= 1");
  if (a <= 5) {
    const mpz_class v = S_exact(p, a);
    // Exact integer; the only error is the final log conversion.
    return BoundValue(std::log(v.get_d()), 1e-14);
  }
  const double log_v = log_c_of_p(p) +
                       (static_cast<double>(a) * a / 4.0) *
                           std::log(static_cast<double>(p));
  return BoundValue(log_v, 1e-11);
}

double log_S(std::uint64_t p, unsigned a) { return S_of(p, a).log_value(); }

mpz_class gaussian_binomial(unsigned n, unsigned k, std::uint64_t p) {
  if (k > n) throw KOutOfRange("requires 0 <= k <= n");
  if (!is_prime_u64(p)) throw NotPrime("Gaussian binomial requires a prime base");
  const mpz_class q(static_cast<unsigned long>(p));
  mpz_class num = 1, den = 1, qpow;
  for (unsigned i = 0; i < k; ++i) {
    mpz_pow_ui(qpow.get_mpz_t(), q.get_mpz_t(), n - i);
    num *= qpow - 1;
    mpz_pow_ui(qpow.get_mpz_t(), q.get_mpz_t(), i + 1);
    den *= qpow - 1;
  }
  return num / den;
}

mpz_class subspace_count(std::uint64_t p, unsigned a) {
  mpz_class total = 0;
  for (unsigned k = 0; k <= a; ++k) total += gaussian_binomial(a, k, p);
  return total;
}

BoundValue main_rhs_log_from(double log_r) {
  return BoundValue(std::log(c_of_p(2)) + log_r * log_r / (4.0 * kLn2), 1e-9);
}

BoundValue main_rhs_log(const FactoredInteger& r) {
  if (r.value() < 2) throw InputOutOfRange("requires r >= 2");
  return main_rhs_log_from(r.log_value());
}

namespace {

double f_impl(const FactoredInteger& r, bool uniform_S) {
  if (r.num_primes() < 2)
    throw TooFewPrimes("f(r) requires at least two prime factors");
  const double log_r = r.log_value();
  const auto ell = static_cast<double>(r.num_primes());
  double acc = std::log(c_of_p(2)) / log_r - (ell - 1.0) +
               (ell - 2.0) * kLn2 / log_r;
  for (const auto& [p, a] : r.factors()) {
    const double log_p = std::log(static_cast<double>(p));
    double log_S_pa;
    if (uniform_S || a >= 6) {
      log_S_pa = log_c_of_p(p) +
                 (static_cast<double>(a) * a / 4.0) * log_p;
    } else {
      log_S_pa = log_S(p, a);
    }
    acc += static_cast<double>(a) * log_p / (4.0 * kLn2) - log_S_pa / log_r;
  }
  return acc;
}

}  // namespace

double f_of(const FactoredInteger& r) { return f_impl(r, false); }
double ft_of(const FactoredInteger& r) { return f_impl(r, true); }

GoodnessVerdict classify_good(const FactoredInteger& r, double tol) {
  if (!(tol > 0.0)) throw InputOutOfRange("tolerance must be positive");
  const double f = f_of(r);
  const double ft = ft_of(r);
  if (std::abs(f) <= tol || std::abs(ft) <= tol)
    return {Goodness::Boundary, f, ft};
  if (ft > tol) return {Goodness::TGood, f, ft};
  if (f > tol) return {Goodness::Good, f, ft};
  return {Goodness::NotGood, f, ft};
}

}  // namespace subcount
