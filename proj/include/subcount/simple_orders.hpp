#pragma once

#include <string>
#include <vector>

#include "subcount/factored.hpp"

namespace subcount {

/// One putative non-abelian simple section: its name, factored order,
/// and outer automorphism group order.
struct SimpleGroupRecord {
  std::string name;
  FactoredInteger order;
  unsigned out_order = 1;
  /// Extra three-prime-order groups used only for divisibility
  /// bookkeeping, not in the section screen.
  bool k3_only = false;
};

class SimpleOrderDB {
 public:
  /// Loads the bundled record file (name, factored order as p^a
  /// tokens, out-order, optional k3 flag).  Throws DataFileMissing.
  static SimpleOrderDB load(const std::string& path);
  static SimpleOrderDB load_default();
  static SimpleOrderDB from_records(std::vector<SimpleGroupRecord> records);

  const std::vector<SimpleGroupRecord>& records() const { return records_; }

  /// Records participating in the section screen (k3 rows excluded).
  std::vector<const SimpleGroupRecord*> section_records() const;

  const SimpleGroupRecord* find(const std::string& name) const;

 private:
  std::vector<SimpleGroupRecord> records_;
};

/// Bundled list of every non-abelian simple group order up to 10^6,
/// for the closure check on screened orders.
std::vector<std::uint64_t> load_simple_orders_upto_1e6(const std::string& path);

std::string default_data_dir();

}  // namespace subcount
