#include "subcount/screening.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace subcount {

namespace {

struct ClauseRow {
  std::uint64_t p_min;   // clause fires when p_ell >= p_min
  unsigned tail_a_min;   // ... or a_i >= tail_a_min for some i >= 2
  unsigned a1_min;       // ... or a_1 >= a1_min
};

// Rows for ell = 4 .. 12.
constexpr ClauseRow kClauseRows[] = {
    {79, 5, 28}, {173, 5, 15}, {251, 5, 12}, {307, 5, 10}, {277, 5, 9},
    {233, 4, 7}, {163, 3, 6},  {89, 3, 4},   {47, 2, 3},
};

void require_shape(const FactoredInteger& r) {
  if (r.num_primes() < 3 || r[0].prime != 2 || r[0].exponent < 2)
    throw PreconditionViolated(
        "condition filter requires p_1 = 2, a_1 >= 2, and at least three "
        "primes");
}

}  // namespace

std::optional<int> lmax_filter(const FactoredInteger& r) {
  require_shape(r);
  const std::size_t ell = r.num_primes();
  if (ell >= 13) return 1;
  if (ell < 4) return std::nullopt;
  const ClauseRow& row = kClauseRows[ell - 4];
  bool fires = r[ell - 1].prime >= row.p_min || r[0].exponent >= row.a1_min;
  for (std::size_t i = 1; !fires && i < ell; ++i)
    fires = r[i].exponent >= row.tail_a_min;
  if (fires) return static_cast<int>(ell) - 2;
  return std::nullopt;
}

namespace {

// All divisors of r with the i-th prime removed, as exact integers.
std::vector<mpz_class> cofactor_divisors(const FactoredInteger& r,
                                         std::size_t skip) {
  std::vector<mpz_class> ds{1};
  for (std::size_t j = 0; j < r.num_primes(); ++j) {
    if (j == skip) continue;
    const std::size_t base = ds.size();
    mpz_class pk = 1;
    for (unsigned k = 1; k <= r[j].exponent; ++k) {
      pk *= static_cast<unsigned long>(r[j].prime);
      for (std::size_t t = 0; t < base; ++t) ds.push_back(ds[t] * pk);
    }
  }
  return ds;
}

bool psl2_power3_trigger(const FactoredInteger& r, Psl2Trigger trigger) {
  // Orders of PSL2(3^(3^f)): q(q^2-1)/2 with q = 3^(3^f).
  for (unsigned f = (trigger == Psl2Trigger::FGe0 ? 0u : 1u);; ++f) {
    mpz_class q;
    unsigned long e = 1;
    for (unsigned t = 0; t < f; ++t) e *= 3;
    mpz_ui_pow_ui(q.get_mpz_t(), 3, e);  // q = 3^(3^f)
    mpz_class order = q * (q * q - 1) / 2;
    if (order > r.value()) return false;
    if (mpz_divisible_p(r.value().get_mpz_t(), order.get_mpz_t())) return true;
  }
}

}  // namespace

mpz_class sylow_upper(const FactoredInteger& r, std::size_t i,
                      Psl2Trigger trigger) {
  if (i >= r.num_primes()) throw IndexOutOfRange("prime index out of range");
  const std::uint64_t p = r[i].prime;
  const mpz_class cof = r.cofactor(i);
  if (p == 2) return cof;
  const bool allow_full =
      (p == 3) && psl2_power3_trigger(r, trigger);
  mpz_class best = 1;
  for (const mpz_class& n : cofactor_divisors(r, i)) {
    if (n <= best) continue;
    if (!allow_full && n == cof) continue;
    if ((n - 1) % static_cast<unsigned long>(p) == 0) best = n;
  }
  return best;
}

ScreenVerdict step1_screen(const FactoredInteger& r, Psl2Trigger trigger) {
  if (lmax_filter(r).has_value())
    throw PreconditionViolated(
        "order is certified good by the condition filter");
  if (r.num_primes() < 4)
    throw PreconditionViolated("step 1 requires at least four primes");

  double bound_log = 0.0;
  for (std::size_t i = 0; i < r.num_primes(); ++i) {
    mpz_class n = sylow_upper(r, i, trigger);
    if (n == 1)
      return {ScreenKind::Yes, ScreenStage::Step1, std::nullopt, {}};
    bound_log += std::log(n.get_d()) + log_S(r[i].prime, r[i].exponent);
  }
  BoundValue bound(bound_log, 1e-9);
  BoundValue rhs = main_rhs_log(r);
  if (bound.certainly_less(rhs))
    return {ScreenKind::Yes, ScreenStage::Step1, bound, {}};
  return {ScreenKind::Unknown, ScreenStage::Step1, bound, {}};
}

std::string SectionConfig::names() const {
  std::string out;
  for (const auto* rec : parts) {
    if (!out.empty()) out += '+';
    out += rec->name;
  }
  return out;
}

std::vector<SectionConfig> section_divisor_set(const FactoredInteger& r,
                                               const SimpleOrderDB& db) {
  std::vector<SectionConfig> out;
  const auto records = db.section_records();
  for (const auto* rec : records) {
    if (r.divisible_by(rec->order))
      out.push_back({rec->order.value(), {rec}});
  }
  static const std::pair<const char*, const char*> kPairs[] = {
      {"Alt(5)", "PSL2(7)"}, {"Alt(5)", "PSL2(13)"}, {"PSL2(11)", "PSL2(13)"}};
  for (const auto& [na, nb] : kPairs) {
    const SimpleGroupRecord* a = db.find(na);
    const SimpleGroupRecord* b = db.find(nb);
    if (!a || !b) continue;
    bool divides = true;
    for (const auto& [p, e] : a->order.factors())
      if (r.exponent_of(p) < e + b->order.exponent_of(p)) divides = false;
    for (const auto& [p, e] : b->order.factors())
      if (a->order.exponent_of(p) == 0 && r.exponent_of(p) < e)
        divides = false;
    if (divides)
      out.push_back({a->order.value() * b->order.value(), {a, b}});
  }
  return out;
}

std::optional<std::uint64_t> normal_sylow_filter(const mpz_class& cofactor,
                                                 const mpz_class& d) {
  if (cofactor < 1 || d < 1)
    throw NotDivisible("cofactor and section order must be positive");
  if (cofactor == 1) return std::nullopt;
  FactoredInteger cf = factorize(cofactor);
  const auto qs = cf.prime_power_divisors();
  for (const auto& [p, e] : cf.factors()) {
    if (p < 5) continue;
    if (mpz_divisible_ui_p(d.get_mpz_t(), static_cast<unsigned long>(p)))
      continue;
    bool blocked = false;
    for (const mpz_class& q : qs) {
      if (mpz_divisible_ui_p(mpz_class(q - 1).get_mpz_t(),
                             static_cast<unsigned long>(p))) {
        blocked = true;
        break;
      }
    }
    if (!blocked) return p;
  }
  return std::nullopt;
}

ScreenVerdict step2_screen(const FactoredInteger& r, const SimpleOrderDB& db,
                           Psl2Trigger trigger) {
  if (step1_screen(r, trigger).kind != ScreenKind::Unknown)
    throw PreconditionViolated("step 2 applies only to step-1 unknowns");
  ScreenVerdict v{ScreenKind::Yes, ScreenStage::Step2, std::nullopt, {}};
  for (auto& config : section_divisor_set(r, db)) {
    if (!mpz_divisible_p(r.value().get_mpz_t(), config.d.get_mpz_t()))
      throw NotDivisible("section order does not divide the screened order");
    mpz_class cof = r.value() / config.d;
    if (!normal_sylow_filter(cof, config.d).has_value())
      v.survivors.push_back(std::move(config));
  }
  if (!v.survivors.empty()) v.kind = ScreenKind::Unknown;
  return v;
}

ScanCaps ScanCaps::for_ell(unsigned ell) {
  if (ell < 4 || ell > 12)
    throw InputOutOfRange("scan caps are defined for 4 <= ell <= 12");
  const ClauseRow& row = kClauseRows[ell - 4];
  return {ell, row.p_min, row.tail_a_min - 1, row.a1_min - 1};
}

double scan_log_r_ceiling(const ScanCaps& caps) {
  // A step-1 unknown needs (l-1)ln r + sum ln S >= rhs.  With
  // S(p,a) <= c(2) p^{a^2/4} and a_i <= Amax this forces
  // x^2/(4 ln 2) - (l-1+Amax/4) x - (l-1) ln c(2) <= guard,  x = ln r.
  const double amax = std::max(caps.a1_max, caps.a_tail_max);
  const double b = (caps.ell - 1) + amax / 4.0;
  const double c = (caps.ell - 1) * std::log(c_of_p(2)) + 1e-6;
  const double hb = 2.0 * kLn2 * b;
  return hb + std::sqrt(hb * hb + 4.0 * kLn2 * c) + 0.1;
}

namespace {

struct ScanContext {
  const ScanCaps& caps;
  Psl2Trigger trigger;
  double ceiling;     // on ln r
  double log_c2;
  double log_c3;
  std::vector<std::uint64_t> odd_primes;
  std::vector<std::vector<double>> log_s;  // [prime index][exponent]
  std::vector<double> log_p;               // [0] = ln 2, then ln odd_primes
  std::uint64_t node_budget;
};

struct WorkerState {
  std::vector<ScanRow> unknowns;
  std::uint64_t patterns = 0;
  std::uint64_t nodes = 0;
  bool budget_blown = false;
};

double log_s_table_value(std::uint64_t p, unsigned a) { return log_S(p, a); }

// Tangent-line relaxation.  A retained leaf needs
//   (l-1)x + sum_i ln S(p_i,a_i) >= ln c(2) + x^2/(4 ln 2),  x = ln r.
// The right side is convex in x, so bounding it from below by its
// tangent at the smallest reachable x_min and writing
// lambda = x_min/(2 ln 2) - (l-1) shows the leaf margin is at most
//   sum_i [ln S(p_i,a_i) - lambda a_i ln p_i] + x_min^2/(4 ln 2) - ln c(2).
// Each summand can be maximised independently over the allowed
// exponents (and primes), giving a sound subtree prune.
constexpr double kPruneSlack = -1e-6;

double bracket_max(const std::vector<double>& ls_row, double log_p,
                   double lambda, unsigned lo, unsigned hi) {
  double best = -std::numeric_limits<double>::infinity();
  for (unsigned a = lo; a <= hi; ++a)
    best = std::max(best, ls_row[a] - lambda * a * log_p);
  return best;
}

// Bound for a slot whose prime is still unchosen: ln S(p,a) never
// exceeds ln c(3) + a^2 ln(p)/4 for odd p, and the ln(p) coefficient
// a^2/4 - lambda a fixes which end of the candidate range maximises.
double open_slot_max(double log_c3, double lp_lo, double lp_hi, double lambda,
                     unsigned hi) {
  double best = -std::numeric_limits<double>::infinity();
  for (unsigned a = 1; a <= hi; ++a) {
    const double coeff = a * (a / 4.0 - lambda);
    best = std::max(best, log_c3 + coeff * (coeff < 0 ? lp_lo : lp_hi));
  }
  return best;
}

// Exponent assignment over a fixed prime tuple.
void exponent_dfs(const ScanContext& ctx, WorkerState& ws,
                  const std::vector<std::uint64_t>& primes, std::size_t pos,
                  std::vector<unsigned>& exps, double log_r, double sum_log_s,
                  const std::vector<const std::vector<double>*>& ls,
                  const std::vector<double>& lp) {
  if (++ws.nodes > ctx.node_budget) {
    ws.budget_blown = true;
    return;
  }
  if (pos < primes.size()) {
    double x_min = log_r;
    for (std::size_t j = pos; j < primes.size(); ++j)
      x_min += (j == 0 ? 2.0 : 1.0) * lp[j];
    const double lambda = x_min / (2.0 * kLn2) - (primes.size() - 1);
    double bound = sum_log_s - lambda * log_r +
                   x_min * x_min / (4.0 * kLn2) - ctx.log_c2;
    for (std::size_t j = pos; j < primes.size(); ++j)
      bound += bracket_max(*ls[j], lp[j], lambda, j == 0 ? 2 : 1,
                           j == 0 ? ctx.caps.a1_max : ctx.caps.a_tail_max);
    if (bound < kPruneSlack) return;
  }
  if (pos == primes.size()) {
    ++ws.patterns;
    const double rhs = ctx.log_c2 + log_r * log_r / (4.0 * kLn2);
    const double ub = (primes.size() - 1) * log_r + sum_log_s;
    if (ub < rhs - 1e-9) return;  // certainly below the budget
    std::vector<PrimePower> fs(primes.size());
    for (std::size_t i = 0; i < primes.size(); ++i)
      fs[i] = {primes[i], exps[i]};
    FactoredInteger r(std::move(fs));
    ScreenVerdict v = step1_screen(r, ctx.trigger);
    if (v.kind == ScreenKind::Unknown)
      ws.unknowns.push_back({std::move(r), std::move(v)});
    return;
  }
  const double log_p = std::log(static_cast<double>(primes[pos]));
  const unsigned lo = pos == 0 ? 2 : 1;
  const unsigned hi = pos == 0 ? ctx.caps.a1_max : ctx.caps.a_tail_max;
  for (unsigned a = lo; a <= hi; ++a) {
    const double lr = log_r + a * log_p;
    if (lr > ctx.ceiling) break;
    exps[pos] = a;
    exponent_dfs(ctx, ws, primes, pos + 1, exps, lr,
                 sum_log_s + (*ls[pos])[a], ls, lp);
    if (ws.budget_blown) return;
  }
}

// Choose the odd primes p_2 < ... < p_ell; the minimum attainable
// order prunes the choice.
void prime_dfs(const ScanContext& ctx, WorkerState& ws,
               std::vector<std::uint64_t>& primes,
               std::vector<const std::vector<double>*>& ls,
               std::vector<double>& lp, std::size_t next_idx,
               double min_log_r) {
  if (++ws.nodes > ctx.node_budget) {
    ws.budget_blown = true;
    return;
  }
  if (primes.size() == ctx.caps.ell) {
    std::vector<unsigned> exps(primes.size());
    exponent_dfs(ctx, ws, primes, 0, exps, 0.0, 0.0, ls, lp);
    return;
  }
  const std::size_t needed = ctx.caps.ell - primes.size();
  for (std::size_t i = next_idx; i + needed <= ctx.odd_primes.size(); ++i) {
    const std::uint64_t p = ctx.odd_primes[i];
    // Cheapest completion: this prime plus the immediately following
    // ones, all with exponent 1.
    double completion = 0.0;
    for (std::size_t t = 0; t < needed; ++t)
      completion += ctx.log_p[i + t + 1];
    if (min_log_r + completion > ctx.ceiling) break;
    const double x_min = min_log_r + completion;
    const double lambda = x_min / (2.0 * kLn2) - (ctx.caps.ell - 1);
    double bound = x_min * x_min / (4.0 * kLn2) - ctx.log_c2;
    for (std::size_t j = 0; j < primes.size(); ++j)
      bound += bracket_max(*ls[j], lp[j], lambda, j == 0 ? 2 : 1,
                           j == 0 ? ctx.caps.a1_max : ctx.caps.a_tail_max);
    bound += bracket_max(ctx.log_s[i + 1], ctx.log_p[i + 1], lambda, 1,
                         ctx.caps.a_tail_max);
    if (needed > 1)
      bound += (needed - 1) *
               open_slot_max(ctx.log_c3, ctx.log_p[i + 2], ctx.log_p.back(),
                             lambda, ctx.caps.a_tail_max);
    if (bound < kPruneSlack) continue;
    primes.push_back(p);
    ls.push_back(&ctx.log_s[i + 1]);
    lp.push_back(ctx.log_p[i + 1]);
    prime_dfs(ctx, ws, primes, ls, lp, i + 1, min_log_r + ctx.log_p[i + 1]);
    primes.pop_back();
    ls.pop_back();
    lp.pop_back();
    if (ws.budget_blown) return;
  }
}

}  // namespace

ScanReport scan_patterns(const ScanCaps& caps, unsigned workers,
                         Psl2Trigger trigger, std::uint64_t node_budget) {
  if (caps.ell < 4)
    throw PreconditionViolated("scan covers ell >= 4 only");
  ScanReport report;
  report.caps = caps;
  if (caps.p_max < 3 || caps.a1_max < 2) return report;

  ScanContext ctx{caps,
                  trigger,
                  scan_log_r_ceiling(caps),
                  std::log(c_of_p(2)),
                  std::log(c_of_p(3)),
                  {},
                  {},
                  {},
                  node_budget};
  for (std::uint64_t p = 3; p < caps.p_max; p += 2)
    if (is_prime_u64(p)) ctx.odd_primes.push_back(p);
  ctx.log_p.push_back(kLn2);
  for (std::uint64_t p : ctx.odd_primes)
    ctx.log_p.push_back(std::log(static_cast<double>(p)));

  const unsigned max_a = std::max(caps.a1_max, caps.a_tail_max);
  ctx.log_s.resize(ctx.odd_primes.size() + 1);
  for (std::size_t i = 0; i <= ctx.odd_primes.size(); ++i) {
    const std::uint64_t p = i == 0 ? 2 : ctx.odd_primes[i - 1];
    ctx.log_s[i].resize(max_a + 1, 0.0);
    for (unsigned a = 1; a <= max_a; ++a)
      ctx.log_s[i][a] = log_s_table_value(p, a);
  }

  if (workers == 0)
    workers = std::max(1u, std::thread::hardware_concurrency());

  // Partition on the first odd prime; each worker handles a strided
  // slice of the choices for p_2.
  std::vector<WorkerState> states(workers);
  std::vector<std::exception_ptr> errors(workers);
  auto run = [&](unsigned w) {
    try {
      WorkerState& ws = states[w];
      for (std::size_t i = w; i + (caps.ell - 2) <= ctx.odd_primes.size();
           i += workers) {
        std::vector<std::uint64_t> primes{2, ctx.odd_primes[i]};
        std::vector<const std::vector<double>*> ls{&ctx.log_s[0],
                                                   &ctx.log_s[i + 1]};
        std::vector<double> lp{kLn2, ctx.log_p[i + 1]};
        const double base = 2.0 * kLn2 + ctx.log_p[i + 1];
        prime_dfs(ctx, ws, primes, ls, lp, i + 1, base);
        if (ws.budget_blown) return;
      }
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);

  std::uint64_t nodes = 0;
  for (auto& ws : states) {
    if (ws.budget_blown) throw CapTooLarge("scan exceeded the node budget");
    report.patterns_examined += ws.patterns;
    nodes += ws.nodes;
    for (auto& row : ws.unknowns)
      report.unknown_rows.push_back(std::move(row));
  }
  (void)nodes;
  std::sort(report.unknown_rows.begin(), report.unknown_rows.end(),
            [](const ScanRow& a, const ScanRow& b) {
              return a.r.value() < b.r.value();
            });
  return report;
}

}  // namespace subcount
