#include "subcount/report.hpp"

#include <cmath>
#include <sstream>

namespace subcount {

std::string check_results_csv(const std::vector<CheckResult>& results) {
  std::ostringstream out;
  out << "name,order,sub_count,rhs,margin_log,holds\n";
  for (const CheckResult& r : results) {
    out << r.group << ',' << r.order << ',' << r.sub_count.get_str() << ','
        << std::exp(r.rhs_log.log_value()) << ',' << r.margin_log << ','
        << (r.holds ? "true" : "false") << '\n';
  }
  return out.str();
}

}  // namespace subcount
