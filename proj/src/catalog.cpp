#include "quasirand/catalog.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <sstream>

#include "quasirand/error.hpp"

namespace quasirand {
namespace {

constexpr int slots(int k) { return k * (k - 1) / 2; }

void check_order(int k) {
  if (k < 1 || k > kMaxClassOrder) {
    throw Error(ErrorKind::kUnsupported,
                "graph classes are available for 1 <= k <= 5, got k=" + std::to_string(k));
  }
}

std::uint32_t mask_from_edges(std::initializer_list<std::pair<int, int>> edges) {
  std::uint32_t m = 0;
  for (auto [a, b] : edges) m |= 1U << pair_index(a, b);
  return m;
}

struct NamedShape {
  int k;
  std::uint32_t mask;
  const char* name;
};

// Connected graphs with conventional names. Disconnected classes are named by
// joining component names ("2K2", "K3+K1").
std::vector<NamedShape> connected_names() {
  return {
      {1, 0, "K1"},
      {2, mask_from_edges({{0, 1}}), "K2"},
      {3, mask_from_edges({{0, 1}, {1, 2}}), "P2"},
      {3, mask_from_edges({{0, 1}, {0, 2}, {1, 2}}), "K3"},
      {4, mask_from_edges({{0, 1}, {1, 2}, {2, 3}}), "P3"},
      {4, mask_from_edges({{0, 1}, {0, 2}, {0, 3}}), "K1,3"},
      {4, mask_from_edges({{0, 1}, {1, 2}, {2, 3}, {0, 3}}), "C4"},
      {4, mask_from_edges({{0, 1}, {0, 2}, {1, 2}, {2, 3}}), "paw"},
      {4, mask_from_edges({{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}}), "diamond"},
      {4, mask_from_edges({{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}), "K4"},
      {5, mask_from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 4}}), "P4"},
      {5, mask_from_edges({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}}), "C5"},
      {5, mask_from_edges({{0, 1}, {0, 2}, {0, 3}, {0, 4}}), "K1,4"},
      {5, mask_from_edges({{0, 2}, {0, 3}, {0, 4}, {1, 2}, {1, 3}, {1, 4}}), "K2,3"},
      {5, mask_from_edges({{0, 1}, {0, 2}, {0, 3}, {0, 4}, {1, 2}, {2, 3}, {3, 4}, {1, 4}}), "W4"},
      {5, mask_from_edges({{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 4}}), "bull"},
      {5, mask_from_edges({{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 4}, {1, 4}}), "house"},
      {5, mask_from_edges({{0, 1}, {0, 2}, {1, 2}, {0, 3}, {0, 4}, {3, 4}}), "butterfly"},
      {5, mask_from_edges({{0, 1}, {1, 2}, {2, 3}, {1, 4}}), "chair"},
      {5, mask_from_edges({{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}}), "lollipop"},
      {5, (1U << 10) - 1, "K5"},
      {5, ((1U << 10) - 1) & ~(1U << pair_index(3, 4)), "K5-e"},
  };
}

std::uint32_t canonical_mask(std::uint32_t mask, int k) {
  std::vector<int> perm(k);
  std::iota(perm.begin(), perm.end(), 0);
  std::uint32_t best = mask;
  do {
    best = std::min(best, relabel_mask(mask, k, perm));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

std::string hex(std::uint32_t v) {
  std::ostringstream out;
  out << std::hex << v;
  return out.str();
}

}  // namespace

int SmallGraph::edges() const { return std::popcount(mask); }

int SmallGraph::degree(int v) const {
  int d = 0;
  for (int u = 0; u < k; ++u) {
    if (u != v && has_edge(u, v)) ++d;
  }
  return d;
}

bool SmallGraph::has_isolated_vertex() const {
  for (int v = 0; v < k; ++v) {
    if (degree(v) == 0) return true;
  }
  return false;
}

std::uint32_t relabel_mask(std::uint32_t mask, int k, std::span<const int> perm) {
  std::uint32_t out = 0;
  for (int j = 1; j < k; ++j) {
    for (int i = 0; i < j; ++i) {
      if ((mask >> pair_index(i, j)) & 1U) out |= 1U << pair_index(perm[i], perm[j]);
    }
  }
  return out;
}

std::uint32_t induced_mask(std::uint32_t host_mask, std::span<const int> vertices) {
  std::uint32_t out = 0;
  const int v = static_cast<int>(vertices.size());
  for (int b = 1; b < v; ++b) {
    for (int a = 0; a < b; ++a) {
      if ((host_mask >> pair_index(vertices[a], vertices[b])) & 1U) out |= 1U << pair_index(a, b);
    }
  }
  return out;
}

Catalog::Catalog() {
  for (int k = 1; k <= kMaxClassOrder; ++k) {
    const std::uint32_t total = 1U << slots(k);
    std::map<std::uint32_t, std::vector<std::uint32_t>> by_canon;
    for (std::uint32_t m = 0; m < total; ++m) by_canon[canonical_mask(m, k)].push_back(m);

    auto& cls = classes_[k];
    auto& lookup = class_of_mask_[k];
    lookup.assign(total, -1);
    for (auto& [canon, members] : by_canon) {
      const int idx = static_cast<int>(cls.size());
      // |Aut| = k! / orbit size.
      int fact = 1;
      for (int i = 2; i <= k; ++i) fact *= i;
      cls.push_back({k, canon, fact / static_cast<int>(members.size())});
      for (auto m : members) lookup[m] = static_cast<std::int16_t>(idx);
      orbits_[k].push_back(members);
    }
  }

  std::map<std::pair<int, std::uint32_t>, std::string> connected;
  for (const auto& shape : connected_names()) {
    connected[{shape.k, canonical_mask(shape.mask, shape.k)}] = shape.name;
  }

  for (int k = 1; k <= kMaxClassOrder; ++k) {
    for (const auto& g : classes_[k]) {
      // Split into components, name each, and join.
      std::vector<int> comp(k, -1);
      int ncomp = 0;
      for (int s = 0; s < k; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
          int v = stack.back();
          stack.pop_back();
          for (int u = 0; u < k; ++u) {
            if (u != v && comp[u] < 0 && g.has_edge(u, v)) {
              comp[u] = ncomp;
              stack.push_back(u);
            }
          }
        }
        ++ncomp;
      }
      std::vector<std::pair<int, std::string>> parts;
      for (int c = 0; c < ncomp; ++c) {
        std::vector<int> verts;
        for (int v = 0; v < k; ++v) {
          if (comp[v] == c) verts.push_back(v);
        }
        const int size = static_cast<int>(verts.size());
        const std::uint32_t canon = canonical_mask(induced_mask(g.mask, verts), size);
        auto it = connected.find({size, canon});
        parts.emplace_back(size, it != connected.end() ? it->second
                                                       : "g" + std::to_string(size) + "_" + hex(canon));
      }
      std::sort(parts.begin(), parts.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      std::string out;
      for (std::size_t i = 0; i < parts.size();) {
        std::size_t j = i;
        while (j < parts.size() && parts[j] == parts[i]) ++j;
        if (!out.empty()) out += "+";
        if (j - i > 1) out += std::to_string(j - i);
        out += parts[i].second;
        i = j;
      }
      names_[k].push_back(out);
    }
  }

  for (int k = 1; k <= kMaxClassOrder; ++k) {
    const auto& cls = classes_[k];
    const std::size_t c = cls.size();
    auto& span = spanning_[k];
    span.assign(c * c, 0);
    for (std::size_t h = 0; h < c; ++h) {
      const std::uint32_t host = cls[h].mask;
      // Enumerate all submasks of the host's edge set.
      for (std::uint32_t sub = host;; sub = (sub - 1) & host) {
        span[static_cast<std::size_t>(class_of_mask_[k][sub]) * c + h] += 1;
        if (sub == 0) break;
      }
    }

    auto& w = weights_[k];
    w.assign(c * c, Polynomial{});
    // terms[in][out] = (1-p)^in (-p)^out
    const int s = slots(k);
    std::vector<std::vector<Polynomial>> terms(s + 1, std::vector<Polynomial>(s + 1));
    for (int in = 0; in <= s; ++in) {
      for (int out = 0; in + out <= s; ++out) {
        terms[in][out] = Polynomial::binomial_power(1, -1, in) * Polynomial::binomial_power(0, -1, out);
      }
    }
    for (std::size_t f = 0; f < c; ++f) {
      for (std::size_t h = 0; h < c; ++h) {
        std::vector<std::int64_t> tally((s + 1) * (s + 1), 0);
        for (std::uint32_t placement : orbits_[k][f]) {
          const int in = std::popcount(placement & cls[h].mask);
          const int out = std::popcount(placement & ~cls[h].mask);
          ++tally[in * (s + 1) + out];
        }
        Polynomial total;
        for (int in = 0; in <= s; ++in) {
          for (int out = 0; in + out <= s; ++out) {
            if (const auto t = tally[in * (s + 1) + out]; t != 0) {
              Polynomial term = terms[in][out];
              term *= Rational(t);
              total += term;
            }
          }
        }
        w[f * c + h] = total;
      }
    }
  }
}

const Catalog& Catalog::instance() {
  static const Catalog catalog;
  return catalog;
}

std::span<const SmallGraph> Catalog::classes(int k) const {
  check_order(k);
  return classes_[k];
}

int Catalog::index_of(int k, std::uint32_t labeled_mask) const {
  check_order(k);
  return class_of_mask_[k].at(labeled_mask);
}

const SmallGraph& Catalog::classify(int k, std::uint32_t labeled_mask) const {
  return classes_[k][index_of(k, labeled_mask)];
}

std::span<const std::uint32_t> Catalog::orbit(const SmallGraph& g) const {
  return orbits_[g.k][index_of(g)];
}

std::string Catalog::name(const SmallGraph& g) const { return names_[g.k][index_of(g)]; }

std::string Catalog::hex_id(const SmallGraph& g) {
  return std::to_string(g.k) + ":" + hex(g.mask);
}

std::optional<SmallGraph> Catalog::find(std::string_view id) const {
  for (int k = 1; k <= kMaxClassOrder; ++k) {
    for (std::size_t i = 0; i < classes_[k].size(); ++i) {
      if (names_[k][i] == id) return classes_[k][i];
    }
  }
  auto colon = id.find(':');
  if (colon == std::string_view::npos) return std::nullopt;
  try {
    const int k = std::stoi(std::string(id.substr(0, colon)));
    const auto mask = static_cast<std::uint32_t>(std::stoul(std::string(id.substr(colon + 1)), nullptr, 16));
    if (k < 1 || k > kMaxClassOrder || mask >= (1U << slots(k))) return std::nullopt;
    return classify(k, mask);
  } catch (const std::logic_error&) {
    return std::nullopt;
  }
}

std::int64_t Catalog::spanning_copies(const SmallGraph& sub, const SmallGraph& host) const {
  if (sub.k != host.k) throw Error(ErrorKind::kInvalidArgument, "orders differ");
  const std::size_t c = classes_[sub.k].size();
  return spanning_[sub.k][static_cast<std::size_t>(index_of(sub)) * c + index_of(host)];
}

const Polynomial& Catalog::placement_weight(const SmallGraph& pattern, const SmallGraph& host) const {
  if (pattern.k != host.k) throw Error(ErrorKind::kInvalidArgument, "orders differ");
  const std::size_t c = classes_[pattern.k].size();
  return weights_[pattern.k][static_cast<std::size_t>(index_of(pattern)) * c + index_of(host)];
}

std::vector<SmallGraph> enumerate_classes(int k) {
  if (k < 2 || k > kMaxClassOrder) {
    throw Error(ErrorKind::kUnsupported, "enumerate_classes supports 2 <= k <= 5");
  }
  auto cls = Catalog::instance().classes(k);
  return {cls.begin(), cls.end()};
}

Family family_Fk(int k) {
  if (k < 2 || k > kMaxClassOrder) {
    throw Error(ErrorKind::kUnsupported, "family_Fk supports 2 <= k <= 5");
  }
  Family fam{k, {}};
  for (int v = 2; v <= k; ++v) {
    for (const auto& g : Catalog::instance().classes(v)) {
      if (!g.has_isolated_vertex()) fam.members.push_back(g);
    }
  }
  return fam;
}

std::int64_t count_induced_small(const SmallGraph& F, const SmallGraph& host) {
  if (F.k > host.k) return 0;
  const auto& cat = Catalog::instance();
  const int target = cat.index_of(F);
  std::vector<int> pick(F.k);
  std::int64_t count = 0;
  // Walk all F.k-subsets of host vertices in lexicographic order.
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    if (cat.index_of(F.k, induced_mask(host.mask, pick)) == target) ++count;
    int i = F.k - 1;
    while (i >= 0 && pick[i] == host.k - F.k + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < F.k; ++j) pick[j] = pick[j - 1] + 1;
  }
  return count;
}

}  // namespace quasirand
