#include "subcount/factored.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace subcount {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // This witness set is deterministic for all n < 2^64.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull,
                29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

bool is_prime(const mpz_class& n) {
  if (n.fits_ulong_p() || mpz_sizeinbase(n.get_mpz_t(), 2) <= 64) {
    u64 v = 0;
    mpz_export(&v, nullptr, -1, sizeof(v), 0, 0, n.get_mpz_t());
    return is_prime_u64(v);
  }
  if (mpz_probab_prime_p(n.get_mpz_t(), 40) == 0) return false;
  for (u64 d = 3; d < 2'000'000; d += 2) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), d)) return false;
  }
  return true;
}

FactoredInteger::FactoredInteger(std::vector<PrimePower> factors)
    : factors_(std::move(factors)), value_(1) {
  u64 last = 0;
  for (const auto& [p, a] : factors_) {
    if (p <= last)
      throw InputOutOfRange("prime factors must be strictly increasing");
    if (a < 1) throw InputOutOfRange("exponents must be >= 1");
    if (!is_prime_u64(p)) throw NotPrime(std::to_string(p) + " is not prime");
    last = p;
    mpz_class pk;
    mpz_ui_pow_ui(pk.get_mpz_t(), static_cast<unsigned long>(p), a);
    value_ *= pk;
  }
}

double FactoredInteger::log_value() const {
  double s = 0.0;
  for (const auto& [p, a] : factors_) s += a * std::log(static_cast<double>(p));
  return s;
}

mpz_class FactoredInteger::cofactor(std::size_t i) const {
  if (i >= factors_.size()) throw IndexOutOfRange("prime index out of range");
  mpz_class pk;
  mpz_ui_pow_ui(pk.get_mpz_t(),
                static_cast<unsigned long>(factors_[i].prime),
                factors_[i].exponent);
  return value_ / pk;
}

unsigned FactoredInteger::exponent_of(u64 p) const {
  for (const auto& [q, a] : factors_)
    if (q == p) return a;
  return 0;
}

bool FactoredInteger::divisible_by(const FactoredInteger& d) const {
  for (const auto& [p, a] : d.factors_)
    if (exponent_of(p) < a) return false;
  return true;
}

std::vector<u64> FactoredInteger::divisors_u64() const {
  if (mpz_sizeinbase(value_.get_mpz_t(), 2) > 63)
    throw InputOutOfRange("value too large for 64-bit divisor enumeration");
  std::vector<u64> ds{1};
  for (const auto& [p, a] : factors_) {
    const std::size_t base = ds.size();
    u64 pk = 1;
    for (unsigned k = 1; k <= a; ++k) {
      pk *= p;
      for (std::size_t j = 0; j < base; ++j) ds.push_back(ds[j] * pk);
    }
  }
  std::sort(ds.begin(), ds.end());
  return ds;
}

std::vector<mpz_class> FactoredInteger::prime_power_divisors() const {
  std::vector<mpz_class> out;
  for (const auto& [p, a] : factors_) {
    mpz_class pk = 1;
    for (unsigned k = 1; k <= a; ++k) {
      pk *= static_cast<unsigned long>(p);
      out.push_back(pk);
    }
  }
  return out;
}

std::string FactoredInteger::to_string() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& [p, a] : factors_) {
    if (!first) os << '.';
    first = false;
    os << p;
    if (a > 1) os << '^' << a;
  }
  return os.str();
}

namespace {

mpz_class pollard_rho(const mpz_class& n) {
  // n is odd, composite, with no factor below the trial bound.
  gmp_randclass rng(gmp_randinit_default);
  rng.seed(0xC0FFEEul);
  while (true) {
    mpz_class x = rng.get_z_range(n - 3) + 2;
    mpz_class y = x, c = rng.get_z_range(n - 2) + 1, d = 1;
    while (d == 1) {
      x = (x * x + c) % n;
      y = (y * y + c) % n;
      y = (y * y + c) % n;
      mpz_class diff = x > y ? x - y : y - x;
      if (diff == 0) break;
      mpz_gcd(d.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    }
    if (d != 1 && d != n) return d;
  }
}

void factor_rec(const mpz_class& n, std::vector<mpz_class>& primes) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes.push_back(n);
    return;
  }
  mpz_class d = pollard_rho(n);
  factor_rec(d, primes);
  factor_rec(n / d, primes);
}

}  // namespace

FactoredInteger factorize(const mpz_class& n) {
  static const mpz_class kCeiling = mpz_class(1) << 96;
  if (n < 2 || n > kCeiling)
    throw InputOutOfRange("factorize requires 2 <= n <= 2^96");

  std::vector<PrimePower> factors;
  mpz_class rest = n;
  for (u64 p = 2; p < 100'000 && rest > 1; p = (p == 2 ? 3 : p + 2)) {
    if (!mpz_divisible_ui_p(rest.get_mpz_t(), p)) continue;
    unsigned a = 0;
    while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
      rest /= static_cast<unsigned long>(p);
      ++a;
    }
    factors.push_back({p, a});
  }
  if (rest > 1) {
    std::vector<mpz_class> primes;
    factor_rec(rest, primes);
    std::sort(primes.begin(), primes.end());
    for (std::size_t i = 0; i < primes.size();) {
      std::size_t j = i;
      while (j < primes.size() && primes[j] == primes[i]) ++j;
      if (mpz_sizeinbase(primes[i].get_mpz_t(), 2) > 64)
        throw InputOutOfRange("prime factor exceeds 64-bit range");
      u64 p = 0;
      mpz_export(&p, nullptr, -1, sizeof(p), 0, 0, primes[i].get_mpz_t());
      factors.push_back({p, static_cast<unsigned>(j - i)});
      i = j;
    }
  }
  return FactoredInteger(std::move(factors));
}

FactoredInteger factorize(u64 n) { return factorize(mpz_class(static_cast<unsigned long>(n))); }

FactoredInteger parse_factored(const std::string& text) {
  if (text.find('^') == std::string::npos &&
      text.find('.') == std::string::npos) {
    mpz_class n(text);
    return factorize(n);
  }
  std::vector<PrimePower> factors;
  std::istringstream is(text);
  std::string tok;
  while (std::getline(is, tok, '.')) {
    if (tok.empty()) throw InputOutOfRange("empty factor token in " + text);
    const auto caret = tok.find('^');
    u64 p = std::stoull(tok.substr(0, caret));
    unsigned a = 1;
    if (caret != std::string::npos)
      a = static_cast<unsigned>(std::stoul(tok.substr(caret + 1)));
    factors.push_back({p, a});
  }
  return FactoredInteger(std::move(factors));
}

}  // namespace subcount
