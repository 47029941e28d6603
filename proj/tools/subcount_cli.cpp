// Batch front door: prints bound values, runs the two-step order
// screens and the inequality suites, verifies single groups or the
// whole built-in corpus, and diffs everything against the frozen data
// files.  Exit codes: 0 success, 1 usage, 2 data file missing,
// 3 golden/verification mismatch, 4 computation aborted (caps).

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "subcount/bounds.hpp"
#include "subcount/inequality.hpp"
#include "subcount/report.hpp"
#include "subcount/screening.hpp"
#include "subcount/simple_orders.hpp"
#include "subcount/subgroups.hpp"

using namespace subcount;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDataMissing = 2;
constexpr int kExitMismatch = 3;
constexpr int kExitAborted = 4;

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", x);
  return buf;
}

std::vector<mpz_class> load_order_list(const std::string& name) {
  const std::string path = default_data_dir() + "/" + name;
  std::ifstream in(path);
  if (!in.good()) throw DataFileMissing("cannot open " + path);
  std::vector<mpz_class> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.emplace_back(line);
  }
  return out;
}

struct SurvivorRow {
  unsigned ell;
  mpz_class r;
  std::string sections;
  mpz_class cofactor;
  bool operator<(const SurvivorRow& o) const {
    if (ell != o.ell) return ell < o.ell;
    if (r != o.r) return r < o.r;
    if (sections != o.sections) return sections < o.sections;
    return cofactor < o.cofactor;
  }
};

std::set<SurvivorRow> load_survivor_csv(const std::string& name) {
  const std::string path = default_data_dir() + "/" + name;
  std::ifstream in(path);
  if (!in.good()) throw DataFileMissing("cannot open " + path);
  std::set<SurvivorRow> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string ell, r, sections, cof;
    std::getline(is, ell, ',');
    std::getline(is, r, ',');
    std::getline(is, sections, ',');
    std::getline(is, cof, ',');
    out.insert({static_cast<unsigned>(std::stoul(ell)), mpz_class(r),
                sections, mpz_class(cof)});
  }
  return out;
}

struct ExceptionRow {
  unsigned a;
  std::uint64_t p;
  std::uint64_t cofactor;
  std::string status;
  auto operator<=>(const ExceptionRow&) const = default;
};

std::set<ExceptionRow> load_exception_csv() {
  const std::string path = default_data_dir() + "/vera_exceptions.csv";
  std::ifstream in(path);
  if (!in.good()) throw DataFileMissing("cannot open " + path);
  std::set<ExceptionRow> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string a, p, cof, status;
    std::getline(is, a, ',');
    std::getline(is, p, ',');
    std::getline(is, cof, ',');
    std::getline(is, status, ',');
    out.insert({static_cast<unsigned>(std::stoul(a)), std::stoull(p),
                std::stoull(cof), status});
  }
  return out;
}

std::uint64_t cofactor_value(const VeraCase& c) {
  mpz_class cof = c.r.value();
  for (unsigned i = 0; i < c.a; ++i) cof /= c.p;
  return cof.get_ui();
}

std::set<ExceptionRow> computed_exception_rows() {
  std::set<ExceptionRow> rows;
  for (unsigned a = 1; a <= 8; ++a)
    for (const VeraCase& c : appendix_exceptions(a, 23, 12'000)) {
      const VeraVerdict v = vera_classify(c);
      rows.insert({a, c.p, cofactor_value(c),
                   v.status == VeraStatus::Equality ? "equality"
                                                    : "exception"});
    }
  // The exact-equality boundary case is kept in the same file.
  rows.insert({4, 2, 67, "equality"});
  return rows;
}

/// Prints the symmetric difference; true when the sets agree.
template <typename Row, typename Show>
bool diff_sets(const std::set<Row>& got, const std::set<Row>& want,
               const std::string& label, Show show) {
  bool ok = true;
  for (const Row& r : got)
    if (!want.count(r)) {
      std::cerr << label << ": unexpected " << show(r) << "\n";
      ok = false;
    }
  for (const Row& r : want)
    if (!got.count(r)) {
      std::cerr << label << ": missing " << show(r) << "\n";
      ok = false;
    }
  return ok;
}

bool compare_step1(unsigned ell, unsigned workers, Psl2Trigger trigger,
                   bool print_rows) {
  const ScanReport report =
      scan_patterns(ScanCaps::for_ell(ell), workers, trigger);
  std::set<mpz_class> got;
  for (const ScanRow& row : report.unknown_rows) {
    got.insert(row.r.value());
    if (print_rows) std::cout << row.r.value() << "\n";
  }
  const std::string base = "table1_l" + std::to_string(ell);
  std::set<mpz_class> want;
  if (ell >= 11) {
    // Published result: nothing survives step 1.
  } else {
    for (const mpz_class& v : load_order_list(base + ".txt")) want.insert(v);
    if (ell >= 8)
      for (const mpz_class& v : load_order_list(base + "_extra.txt"))
        want.insert(v);
  }
  auto show = [](const mpz_class& v) { return v.get_str(); };
  return diff_sets(got, want, base, show);
}

bool compare_step2(unsigned workers, Psl2Trigger trigger, bool print_rows) {
  const SimpleOrderDB db = SimpleOrderDB::load_default();
  std::set<SurvivorRow> got;
  for (unsigned ell : {4u, 5u, 6u}) {
    const ScanReport report =
        scan_patterns(ScanCaps::for_ell(ell), workers, trigger);
    for (const ScanRow& row : report.unknown_rows) {
      const ScreenVerdict v = step2_screen(row.r, db, trigger);
      for (const SectionConfig& s : v.survivors)
        got.insert({static_cast<unsigned>(row.r.num_primes()),
                    row.r.value(), s.names(), s.cofactor_of(row.r.value())});
    }
  }
  if (print_rows)
    for (const SurvivorRow& row : got)
      std::cout << row.ell << "," << row.r << "," << row.sections << ","
                << row.cofactor << "\n";
  std::set<SurvivorRow> want = load_survivor_csv("tables345.csv");
  for (const SurvivorRow& row : load_survivor_csv("tables345_extra.csv"))
    want.insert(row);
  auto show = [](const SurvivorRow& r) {
    return std::to_string(r.ell) + "," + r.r.get_str() + "," + r.sections +
           "," + r.cofactor.get_str();
  };
  return diff_sets(got, want, "tables345", show);
}

bool compare_appendix(bool print_rows) {
  const std::set<ExceptionRow> got = computed_exception_rows();
  if (print_rows)
    for (const ExceptionRow& r : got)
      std::cout << r.a << "," << r.p << "," << r.cofactor << "," << r.status
                << "\n";
  auto show = [](const ExceptionRow& r) {
    return std::to_string(r.a) + "," + std::to_string(r.p) + "," +
           std::to_string(r.cofactor) + "," + r.status;
  };
  return diff_sets(got, load_exception_csv(), "vera_exceptions", show);
}

bool run_technical_suite() {
  bool ok = true;
  const std::vector<double> th = technical_thresholds();
  std::cout << "thresholds " << fmt(th[0]) << " " << fmt(th[1]) << " "
            << fmt(th[2]) << "\n";
  // Deterministic log-uniform sample of r in [2000, 1e8].
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next_u64 = [&state] {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  const double lo = std::log(2000.0), hi = std::log(1e8);
  for (int i = 0; i < 10'000 && ok; ++i) {
    const double u =
        static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    const mpz_class r(std::floor(std::exp(lo + u * (hi - lo))));
    for (int part = 1; part <= 3; ++part)
      if (!technical_check(part, r)) {
        std::cerr << "part " << part << " fails at r=" << r << "\n";
        ok = false;
      }
    for (std::uint64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43,
                            47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97})
      if (!technical_check(4, r, p)) {
        std::cerr << "part 4 fails at r=" << r << " p=" << p << "\n";
        ok = false;
      }
  }
  std::cout << "mixture sample " << (ok ? "ok" : "FAIL") << "\n";
  return ok;
}

bool run_solvable_suite() {
  bool ok = true;
  for (auto [n, want] : {std::pair<unsigned, unsigned>{4, 5},
                         {12, 65},
                         {60, 4173}}) {
    const mpz_class got = solvable_recursive_bound_exact(factorize(n));
    std::cout << "B(" << n << ") = " << got << "\n";
    if (got != want) {
      std::cerr << "B(" << n << ") expected " << want << "\n";
      ok = false;
    }
  }
  for (unsigned a1 = 3; a1 <= 11; ++a1) {
    const auto [lhs, rhs] = qbinom_refined_pair(a1);
    const bool holds = lhs <= rhs;
    std::cout << "refined a1=" << a1 << " lhs=" << fmt(lhs)
              << " rhs=" << fmt(rhs) << (holds ? " ok" : " FAIL") << "\n";
    ok = ok && holds;
    qbinom_resummation(a1);  // throws on identity failure
  }
  return ok;
}

GroupTable group_from_family(const std::string& family) {
  static const std::map<std::string, unsigned> sym{{"sym3", 3}, {"sym4", 4},
                                                   {"sym5", 5}, {"sym6", 6}};
  static const std::map<std::string, unsigned> alt{{"alt4", 4}, {"alt5", 5},
                                                   {"alt6", 6}};
  if (auto it = sym.find(family); it != sym.end())
    return make_symmetric(it->second);
  if (auto it = alt.find(family); it != alt.end())
    return make_alternating(it->second);
  const std::size_t colon = family.find(':');
  if (colon != std::string::npos) {
    const std::string kind = family.substr(0, colon);
    const unsigned n =
        static_cast<unsigned>(std::stoul(family.substr(colon + 1)));
    if (kind == "cyclic") return make_cyclic(n);
    if (kind == "dihedral") return make_dihedral(n);
    if (kind == "dicyclic") return make_dicyclic(n);
  }
  throw InputOutOfRange(
      "unknown family '" + family +
      "' (use sym3..6, alt4..6, cyclic:N, dihedral:N, dicyclic:N)");
}

void emit_results(const std::vector<CheckResult>& results,
                  const std::string& format, std::ostream& out) {
  if (format == "csv") {
    out << check_results_csv(results);
    return;
  }
  if (format == "markdown") {
    out << "| name | order | subgroups | bound | margin | holds |\n"
        << "|---|---|---|---|---|---|\n";
    for (const CheckResult& r : results)
      out << "| " << r.group << " | " << r.order << " | " << r.sub_count
          << " | " << fmt(std::exp(r.rhs_log.log_value())) << " | "
          << fmt(r.margin_log) << " | " << (r.holds ? "yes" : "no")
          << " |\n";
    return;
  }
  // json
  out << "[";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const CheckResult& r = results[i];
    out << (i ? ",\n " : "\n ") << "{\"name\":\"" << r.group
        << "\",\"order\":" << r.order << ",\"sub_count\":" << r.sub_count
        << ",\"rhs\":" << fmt(std::exp(r.rhs_log.log_value()))
        << ",\"margin_log\":" << fmt(r.margin_log)
        << ",\"holds\":" << (r.holds ? "true" : "false") << "}";
  }
  out << "\n]\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subgroup-count bound toolkit"};
  app.require_subcommand(1);

  std::string r_text, golden, format = "csv", family, group_file;
  std::string trigger_name = "a_ge_1";
  unsigned ell = 4, workers = 0, max_order = 512;
  double tol = 1e-9;
  std::uint64_t cap = 20'000'000;
  bool force_large = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "csv, markdown or json")
        ->check(CLI::IsMember({"csv", "markdown", "json"}))
        ->envname("SUBCOUNT_FORMAT");
    sub->add_option("--workers", workers,
                    "scan worker threads (0 = hardware)")
        ->envname("SUBCOUNT_WORKERS");
    sub->add_option("--psl2-trigger", trigger_name,
                    "relaxed Sylow-3 divisor rule variant")
        ->check(CLI::IsMember({"a_ge_1", "f_ge_0"}))
        ->envname("SUBCOUNT_PSL2_TRIGGER");
  };

  CLI::App* bounds = app.add_subcommand(
      "bounds", "print c(p), per-prime budgets and the screening value");
  bounds->add_option("--r", r_text, "order, plain or factored p^a.p^a...")
      ->required()
      ->envname("SUBCOUNT_R");
  bounds->add_option("--tol", tol, "classification tolerance")
      ->envname("SUBCOUNT_TOL");

  CLI::App* screen = app.add_subcommand(
      "screen", "step-1 scan for one prime count, optional golden diff");
  screen->add_option("--ell", ell, "number of distinct primes")
      ->required()
      ->check(CLI::Range(4u, 12u))
      ->envname("SUBCOUNT_ELL");
  screen->add_option("--golden", golden,
                     "diff target: table1 or tables345")
      ->check(CLI::IsMember({"table1", "tables345"}))
      ->envname("SUBCOUNT_GOLDEN");
  add_common(screen);

  CLI::App* appendix = app.add_subcommand(
      "appendix", "enumerate the pull-out inequality exceptions and diff");

  CLI::App* technical = app.add_subcommand(
      "technical", "power-mixture thresholds and sampled inequalities");

  CLI::App* solvable = app.add_subcommand(
      "solvable", "recursive solvable bound and two-prime refinement");

  CLI::App* verify = app.add_subcommand(
      "verify-group", "count subgroups of one group and check the bound");
  verify->add_option("--family", family,
                     "sym3..6, alt4..6, cyclic:N, dihedral:N, dicyclic:N")
      ->envname("SUBCOUNT_FAMILY");
  verify->add_option("--file", group_file,
                     "group file (Cayley table or perm generators)")
      ->envname("SUBCOUNT_FILE");
  verify->add_option("--caps", cap, "subgroup count cap")
      ->envname("SUBCOUNT_CAPS");
  verify->add_flag("--force-large", force_large,
                   "allow orders above the guaranteed 512")
      ->envname("SUBCOUNT_FORCE_LARGE");
  add_common(verify);

  CLI::App* corpus = app.add_subcommand(
      "corpus", "verify the bound over the built-in corpus");
  corpus->add_option("--max-order", max_order, "corpus order cap (<= 512)")
      ->check(CLI::Range(1u, 512u))
      ->envname("SUBCOUNT_MAX_ORDER");
  add_common(corpus);

  CLI::App* reproduce = app.add_subcommand(
      "reproduce-all", "every golden comparison; nonzero on any mismatch");
  add_common(reproduce);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Psl2Trigger trigger = trigger_name == "f_ge_0"
                                  ? Psl2Trigger::FGe0
                                  : Psl2Trigger::FGe1;
  try {
    if (bounds->parsed()) {
      const FactoredInteger r = parse_factored(r_text);
      std::cout << "r = " << r.to_string() << " = " << r.value() << "\n";
      std::cout << "c(2) = " << fmt(c_of_p(2)) << "\n";
      for (const PrimePower& pp : r.factors())
        std::cout << "log S(" << pp.prime << "," << pp.exponent
                  << ") = " << fmt(log_S(pp.prime, pp.exponent)) << "\n";
      const GoodnessVerdict v = classify_good(r, tol);
      std::cout << "f = " << fmt(v.f_value) << "\n";
      std::cout << "ft = " << fmt(v.ft_value) << "\n";
      const char* kind = v.kind == Goodness::TGood    ? "tgood"
                         : v.kind == Goodness::Good   ? "good"
                         : v.kind == Goodness::NotGood ? "not-good"
                                                       : "boundary";
      std::cout << "verdict = " << kind << "\n";
      return kExitOk;
    }
    if (screen->parsed()) {
      if (golden == "tables345")
        return compare_step2(workers, trigger, true) ? kExitOk
                                                     : kExitMismatch;
      const bool ok = compare_step1(ell, workers, trigger, true);
      return (golden.empty() || ok) ? kExitOk : kExitMismatch;
    }
    if (appendix->parsed())
      return compare_appendix(true) ? kExitOk : kExitMismatch;
    if (technical->parsed())
      return run_technical_suite() ? kExitOk : kExitMismatch;
    if (solvable->parsed())
      return run_solvable_suite() ? kExitOk : kExitMismatch;
    if (verify->parsed()) {
      if (family.empty() == group_file.empty()) {
        std::cerr << "verify-group needs exactly one of --family/--file\n";
        return kExitUsage;
      }
      GroupTable g = [&] {
        if (!family.empty()) return group_from_family(family);
        std::ifstream in(group_file);
        if (!in.good())
          throw DataFileMissing("cannot open " + group_file);
        return make_from_table(in, group_file);
      }();
      EnumerateOptions opt;
      opt.cap = cap;
      opt.force = force_large;
      const CheckResult res = verify_theorem(g, opt);
      emit_results({res}, format, std::cout);
      return res.holds ? kExitOk : kExitMismatch;
    }
    if (corpus->parsed()) {
      const std::vector<CheckResult> results = corpus_run(max_order);
      emit_results(results, format, std::cout);
      for (const CheckResult& r : results)
        if (!r.holds) return kExitMismatch;
      return kExitOk;
    }
    if (reproduce->parsed()) {
      bool ok = true;
      auto record = [&ok](const std::string& name, bool good) {
        std::cout << (good ? "ok   " : "FAIL ") << name << "\n";
        ok = ok && good;
      };
      record("vera_exceptions", compare_appendix(false));
      for (unsigned l = 4; l <= 12; ++l)
        record("table1_l" + std::to_string(l),
               compare_step1(l, workers, trigger, false));
      record("tables345", compare_step2(workers, trigger, false));
      record("technical", run_technical_suite());
      record("solvable", run_solvable_suite());
      return ok ? kExitOk : kExitMismatch;
    }
  } catch (const DataFileMissing& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDataMissing;
  } catch (const CapExceeded& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return kExitAborted;
  } catch (const CapTooLarge& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return kExitAborted;
  } catch (const Unsupported& e) {
    std::cerr << "aborted: " << e.what() << "\n";
    return kExitAborted;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
