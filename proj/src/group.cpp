#include "subcount/group.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <utility>

namespace subcount {

namespace {

constexpr unsigned kFullAssocCheck = 128;

std::vector<unsigned> compose(const std::vector<unsigned>& f,
                              const std::vector<unsigned>& g) {
  std::vector<unsigned> h(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) h[i] = f[g[i]];
  return h;
}

}  // namespace

GroupTable::GroupTable(unsigned order, std::vector<std::uint16_t> mul,
                       std::string name)
    : n_(order), mul_(std::move(mul)), name_(std::move(name)) {
  if (n_ == 0 || n_ > kMaxGroupOrder)
    throw TooLarge("group order must be in 1.." +
                   std::to_string(kMaxGroupOrder));
  if (mul_.size() != static_cast<std::size_t>(n_) * n_)
    throw NotClosed("multiplication table has the wrong shape");
  for (std::uint16_t v : mul_)
    if (v >= n_) throw NotClosed("table entry out of range");
  for (unsigned x = 0; x < n_; ++x)
    if (this->mul(0, x) != x || this->mul(x, 0) != x)
      throw NotClosed("index 0 is not a two-sided identity");
  inv_.assign(n_, 0);
  for (unsigned x = 0; x < n_; ++x) {
    bool found = false;
    for (unsigned y = 0; y < n_; ++y) {
      if (this->mul(x, y) == 0) {
        if (this->mul(y, x) != 0)
          throw NotClosed("one-sided inverse at element " +
                          std::to_string(x));
        inv_[x] = static_cast<std::uint16_t>(y);
        found = true;
        break;
      }
    }
    if (!found) throw NotClosed("no inverse for element " + std::to_string(x));
  }
  auto assoc = [&](unsigned a, unsigned b, unsigned c) {
    return this->mul(this->mul(a, b), c) == this->mul(a, this->mul(b, c));
  };
  if (n_ <= kFullAssocCheck) {
    for (unsigned a = 0; a < n_; ++a)
      for (unsigned b = 0; b < n_; ++b)
        for (unsigned c = 0; c < n_; ++c)
          if (!assoc(a, b, c)) throw NotClosed("associativity failure");
  } else {
    std::mt19937 rng(0x5bc0u ^ n_);
    std::uniform_int_distribution<unsigned> d(0, n_ - 1);
    for (int i = 0; i < 100000; ++i)
      if (!assoc(d(rng), d(rng), d(rng)))
        throw NotClosed("associativity failure");
  }
}

unsigned GroupTable::element_order(unsigned a) const {
  unsigned ord = 1;
  for (unsigned x = a; x != 0; x = mul(x, a)) ++ord;
  return a == 0 ? 1 : ord;
}

GroupTable make_cyclic(unsigned n) {
  if (n == 0 || n > kMaxGroupOrder) throw TooLarge("cyclic order out of range");
  std::vector<std::uint16_t> mul(static_cast<std::size_t>(n) * n);
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b)
      mul[static_cast<std::size_t>(a) * n + b] =
          static_cast<std::uint16_t>((a + b) % n);
  return GroupTable(n, std::move(mul), "C" + std::to_string(n));
}

GroupTable make_abelian(const std::vector<unsigned>& cyclic_orders) {
  if (cyclic_orders.empty())
    throw InputOutOfRange("need at least one cyclic factor");
  unsigned long long order = 1;
  for (unsigned m : cyclic_orders) {
    if (m == 0) throw InputOutOfRange("cyclic factor of order 0");
    order *= m;
    if (order > kMaxGroupOrder) throw TooLarge("abelian order out of range");
  }
  const unsigned n = static_cast<unsigned>(order);
  const std::size_t k = cyclic_orders.size();
  // Mixed-radix element encoding, most significant factor first.
  std::vector<std::uint16_t> mul(static_cast<std::size_t>(n) * n);
  std::vector<unsigned> da(k), db(k);
  for (unsigned a = 0; a < n; ++a) {
    unsigned t = a;
    for (std::size_t i = k; i-- > 0;) {
      da[i] = t % cyclic_orders[i];
      t /= cyclic_orders[i];
    }
    for (unsigned b = 0; b < n; ++b) {
      unsigned u = b;
      for (std::size_t i = k; i-- > 0;) {
        db[i] = u % cyclic_orders[i];
        u /= cyclic_orders[i];
      }
      unsigned enc = 0;
      for (std::size_t i = 0; i < k; ++i)
        enc = enc * cyclic_orders[i] + (da[i] + db[i]) % cyclic_orders[i];
      mul[static_cast<std::size_t>(a) * n + b] =
          static_cast<std::uint16_t>(enc);
    }
  }
  std::string name = "C" + std::to_string(cyclic_orders[0]);
  for (std::size_t i = 1; i < k; ++i)
    name += "xC" + std::to_string(cyclic_orders[i]);
  return GroupTable(n, std::move(mul), name);
}

GroupTable make_dihedral(unsigned n) {
  if (n == 0 || 2ull * n > kMaxGroupOrder)
    throw TooLarge("dihedral parameter out of range");
  const unsigned N = 2 * n;
  // Element j*n + i stands for s^j r^i;  s r^i s = r^{-i}.
  std::vector<std::uint16_t> mul(static_cast<std::size_t>(N) * N);
  auto idx = [&](unsigned j, unsigned i) { return j * n + i; };
  for (unsigned j1 = 0; j1 < 2; ++j1)
    for (unsigned i1 = 0; i1 < n; ++i1)
      for (unsigned j2 = 0; j2 < 2; ++j2)
        for (unsigned i2 = 0; i2 < n; ++i2) {
          // (s^j1 r^i1)(s^j2 r^i2) = s^{j1+j2} r^{(-1)^{j2} i1 + i2}
          const unsigned j = (j1 + j2) % 2;
          const unsigned i =
              ((j2 ? n - i1 : i1) + i2) % n;
          mul[static_cast<std::size_t>(idx(j1, i1)) * N + idx(j2, i2)] =
              static_cast<std::uint16_t>(idx(j, i));
        }
  return GroupTable(N, std::move(mul), "D" + std::to_string(n));
}

GroupTable make_dicyclic(unsigned n) {
  if (n == 0 || 4ull * n > kMaxGroupOrder)
    throw TooLarge("dicyclic parameter out of range");
  const unsigned N = 4 * n;
  const unsigned m = 2 * n;  // order of a
  // Element j*m + i stands for b^j a^i with a^{2n} = e, b^2 = a^n,
  // b a^i b^{-1} = a^{-i}.
  std::vector<std::uint16_t> mul(static_cast<std::size_t>(N) * N);
  auto idx = [&](unsigned j, unsigned i) { return j * m + i; };
  for (unsigned j1 = 0; j1 < 2; ++j1)
    for (unsigned i1 = 0; i1 < m; ++i1)
      for (unsigned j2 = 0; j2 < 2; ++j2)
        for (unsigned i2 = 0; i2 < m; ++i2) {
          // (b^j1 a^i1)(b^j2 a^i2): move a^i1 past b^j2, then reduce
          // b^2 = a^n.
          unsigned i = ((j2 ? m - i1 : i1) + i2) % m;
          unsigned j = j1 + j2;
          if (j == 2) {
            j = 0;
            i = (i + n) % m;
          }
          mul[static_cast<std::size_t>(idx(j1, i1)) * N + idx(j2, i2)] =
              static_cast<std::uint16_t>(idx(j, i));
        }
  return GroupTable(N, std::move(mul), "Dic" + std::to_string(n));
}

GroupTable make_from_permutations(
    const std::vector<std::vector<unsigned>>& generators,
    const std::string& name) {
  if (generators.empty()) throw InvalidPermutation("no generators");
  const std::size_t m = generators[0].size();
  if (m == 0 || m > 64)
    throw InvalidPermutation("permutations must act on 1..64 points");
  for (const auto& g : generators) {
    if (g.size() != m)
      throw InvalidPermutation("generators act on different point sets");
    std::vector<bool> seen(m, false);
    for (unsigned v : g) {
      if (v >= m || seen[v]) throw InvalidPermutation("not a permutation");
      seen[v] = true;
    }
  }
  // Closure under composition, breadth-first from the identity.
  std::vector<unsigned> id(m);
  std::iota(id.begin(), id.end(), 0u);
  std::map<std::vector<unsigned>, unsigned> index;
  std::vector<std::vector<unsigned>> elems;
  elems.push_back(id);
  index[id] = 0;
  for (std::size_t head = 0; head < elems.size(); ++head) {
    for (const auto& g : generators) {
      std::vector<unsigned> h = compose(elems[head], g);
      if (index.emplace(h, static_cast<unsigned>(elems.size())).second) {
        elems.push_back(std::move(h));
        if (elems.size() > kMaxGroupOrder)
          throw TooLarge("generated group exceeds the order cap");
      }
    }
  }
  const unsigned n = static_cast<unsigned>(elems.size());
  std::vector<std::uint16_t> mul(static_cast<std::size_t>(n) * n);
  for (unsigned a = 0; a < n; ++a)
    for (unsigned b = 0; b < n; ++b)
      mul[static_cast<std::size_t>(a) * n + b] =
          static_cast<std::uint16_t>(index.at(compose(elems[a], elems[b])));
  return GroupTable(n, std::move(mul), name);
}

GroupTable make_symmetric(unsigned k) {
  if (k < 2 || k > 6) throw InputOutOfRange("symmetric degree must be 2..6");
  std::vector<unsigned> cycle(k), swap01(k);
  for (unsigned i = 0; i < k; ++i) cycle[i] = (i + 1) % k;
  std::iota(swap01.begin(), swap01.end(), 0u);
  std::swap(swap01[0], swap01[1]);
  return make_from_permutations({cycle, swap01}, "S" + std::to_string(k));
}

GroupTable make_alternating(unsigned k) {
  if (k < 3 || k > 6) throw InputOutOfRange("alternating degree must be 3..6");
  std::vector<unsigned> three(k), rot(k);
  std::iota(three.begin(), three.end(), 0u);
  three[0] = 1;
  three[1] = 2;
  three[2] = 0;
  if (k % 2 == 1) {
    for (unsigned i = 0; i < k; ++i) rot[i] = (i + 1) % k;
  } else {
    // k even: the k-cycle is odd, use the (k-1)-cycle on 1..k-1.
    rot[0] = 0;
    for (unsigned i = 1; i < k; ++i) rot[i] = i % (k - 1) + 1;
  }
  return make_from_permutations({three, rot}, "A" + std::to_string(k));
}

GroupTable direct_product(const GroupTable& a, const GroupTable& b) {
  const unsigned long long ord =
      static_cast<unsigned long long>(a.order()) * b.order();
  if (ord > kMaxGroupOrder) throw TooLarge("product order out of range");
  const unsigned n = static_cast<unsigned>(ord);
  const unsigned nb = b.order();
  std::vector<std::uint16_t> mul(static_cast<std::size_t>(n) * n);
  for (unsigned x = 0; x < n; ++x)
    for (unsigned y = 0; y < n; ++y)
      mul[static_cast<std::size_t>(x) * n + y] = static_cast<std::uint16_t>(
          a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb));
  return GroupTable(n, std::move(mul), a.name() + "x" + b.name());
}

std::vector<unsigned> parse_cycles(const std::string& text) {
  std::vector<std::vector<unsigned>> cycles;
  std::size_t i = 0;
  unsigned maxpt = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] != '(') throw InvalidPermutation("expected '('");
    ++i;
    std::vector<unsigned> cyc;
    while (i < text.size() && text[i] != ')') {
      if (std::isspace(static_cast<unsigned char>(text[i])) ||
          text[i] == ',') {
        ++i;
        continue;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i])))
        throw InvalidPermutation("expected a point number");
      unsigned v = 0;
      while (i < text.size() &&
             std::isdigit(static_cast<unsigned char>(text[i])))
        v = v * 10 + (text[i++] - '0');
      if (v == 0 || v > 64)
        throw InvalidPermutation("points are numbered 1..64");
      cyc.push_back(v - 1);
      maxpt = std::max(maxpt, v);
    }
    if (i >= text.size()) throw InvalidPermutation("unterminated cycle");
    ++i;  // ')'
    cycles.push_back(std::move(cyc));
  }
  if (cycles.empty()) throw InvalidPermutation("empty permutation");
  std::vector<unsigned> img(maxpt);
  std::iota(img.begin(), img.end(), 0u);
  for (const auto& cyc : cycles)
    for (std::size_t j = 0; j < cyc.size(); ++j) {
      unsigned from = cyc[j];
      unsigned to = cyc[(j + 1) % cyc.size()];
      if (img[from] != from && cyc.size() > 1)
        throw InvalidPermutation("point repeated across cycles");
      img[from] = to;
    }
  return img;
}

GroupTable make_from_table(std::istream& in, const std::string& name) {
  std::string header;
  if (!(in >> header)) throw NotClosed("empty group file");
  if (header == "perm") {
    std::string line;
    std::getline(in, line);  // rest of header line
    std::vector<std::vector<unsigned>> gens;
    std::size_t width = 0;
    while (std::getline(in, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      gens.push_back(parse_cycles(line));
      width = std::max(width, gens.back().size());
    }
    for (auto& g : gens)
      for (std::size_t i = g.size(); i < width; ++i)
        g.push_back(static_cast<unsigned>(i));
    return make_from_permutations(gens, name);
  }
  unsigned n = 0;
  try {
    n = static_cast<unsigned>(std::stoul(header));
  } catch (const std::exception&) {
    throw NotClosed("bad group file header");
  }
  if (n == 0 || n > kMaxGroupOrder) throw TooLarge("order out of range");
  std::vector<std::uint16_t> mul(static_cast<std::size_t>(n) * n);
  for (std::size_t i = 0; i < mul.size(); ++i) {
    unsigned v;
    if (!(in >> v)) throw NotClosed("truncated multiplication table");
    if (v >= n) throw NotClosed("table entry out of range");
    mul[i] = static_cast<std::uint16_t>(v);
  }
  return GroupTable(n, std::move(mul), name);
}

}  // namespace subcount
