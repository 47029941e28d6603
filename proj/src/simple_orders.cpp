#include "subcount/simple_orders.hpp"

#include <fstream>
#include <sstream>

namespace subcount {

std::string default_data_dir() {
#ifdef SUBCOUNT_DATA_DIR
  return SUBCOUNT_DATA_DIR;
#else
  return "data";
#endif
}

SimpleOrderDB SimpleOrderDB::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataFileMissing("cannot open " + path);
  SimpleOrderDB db;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream is(line);
    std::string name, order_text, flag;
    unsigned out = 0;
    if (!(is >> name >> order_text >> out))
      throw DataFileMissing("malformed record in " + path + ": " + line);
    SimpleGroupRecord rec{name, parse_factored(order_text), out, false};
    if (is >> flag && flag == "k3") rec.k3_only = true;
    // Outer automorphism orders of the screened sections involve no
    // prime above 3.
    unsigned o = out;
    for (unsigned p : {2u, 3u})
      while (o % p == 0) o /= p;
    if (o != 1)
      throw DataFileMissing("out-order with prime factor > 3: " + line);
    db.records_.push_back(std::move(rec));
  }
  if (db.records_.empty()) throw DataFileMissing("no records in " + path);
  return db;
}

SimpleOrderDB SimpleOrderDB::load_default() {
  return load(default_data_dir() + "/simple_orders.txt");
}

SimpleOrderDB SimpleOrderDB::from_records(
    std::vector<SimpleGroupRecord> records) {
  SimpleOrderDB db;
  db.records_ = std::move(records);
  return db;
}

std::vector<const SimpleGroupRecord*> SimpleOrderDB::section_records() const {
  std::vector<const SimpleGroupRecord*> out;
  for (const auto& r : records_)
    if (!r.k3_only) out.push_back(&r);
  return out;
}

const SimpleGroupRecord* SimpleOrderDB::find(const std::string& name) const {
  for (const auto& r : records_)
    if (r.name == name) return &r;
  return nullptr;
}

std::vector<std::uint64_t> load_simple_orders_upto_1e6(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataFileMissing("cannot open " + path);
  std::vector<std::uint64_t> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(std::stoull(line));
  }
  return out;
}

}  // namespace subcount
