#pragma once

#include <string>
#include <vector>

#include "subcount/subgroups.hpp"

namespace subcount {

/// CSV rows "name,order,sub_count,rhs,margin_log,holds" with a header
/// line; rhs is the bound value itself (exp of the stored log).
std::string check_results_csv(const std::vector<CheckResult>& results);

}  // namespace subcount
