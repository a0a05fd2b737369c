#include "gcl/config_model.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <numeric>
#include <utility>

#include "gcl/error.hpp"

namespace gcl {

Multigraph::Multigraph(std::uint64_t n, std::vector<Vertex> half_edge_owner,
                       std::vector<HalfEdge> partner)
    : n_(n), owner_(std::move(half_edge_owner)), partner_(std::move(partner)) {
  if (owner_.size() != partner_.size() || partner_.size() % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "owner and partner arrays must have equal even length");
  }
  for (std::size_t x = 0; x < partner_.size(); ++x) {
    const HalfEdge y = partner_[x];
    if (y >= partner_.size() || y == x || partner_[y] != x) {
      throw Error(ErrorKind::InvalidArgument,
                  "partner is not a fixed-point-free involution at half-edge " + std::to_string(x));
    }
    if (owner_[x] >= n_) throw Error(ErrorKind::InvalidArgument, "half-edge owner out of range");
  }
}

std::vector<Degree> Multigraph::degrees() const {
  std::vector<Degree> deg(n_, 0);
  for (const Vertex v : owner_) ++deg[v];
  return deg;
}

std::vector<Vertex> half_edge_layout(const DegreeSequence& seq) {
  if (seq.half_edges() > std::numeric_limits<HalfEdge>::max() ||
      seq.n() > std::numeric_limits<Vertex>::max()) {
    throw Error(ErrorKind::InvalidArgument, "graph too large for 32-bit half-edge indices");
  }
  std::vector<Vertex> owner;
  owner.reserve(seq.half_edges());
  Vertex v = 0;
  for (const auto& [k, count] : seq.counts()) {
    for (std::uint64_t i = 0; i < count; ++i, ++v) owner.insert(owner.end(), k, v);
  }
  return owner;
}

ComponentStats summarize_components(std::span<const Degree> degrees,
                                    std::span<const std::uint32_t> labels,
                                    std::span<const std::uint64_t> edges_per_label) {
  const std::size_t label_count = edges_per_label.size();
  std::vector<std::uint64_t> start(label_count + 1, 0);
  for (const auto label : labels) ++start[label + 1];
  std::partial_sum(start.begin(), start.end(), start.begin());

  // Stable counting sort of the vertex degrees by label.
  std::vector<Degree> grouped(labels.size());
  {
    std::vector<std::uint64_t> cursor(start.begin(), start.end() - 1);
    for (std::size_t v = 0; v < labels.size(); ++v) grouped[cursor[labels[v]]++] = degrees[v];
  }

  ComponentStats stats;
  stats.n = labels.size();
  stats.components.reserve(label_count);
  for (std::size_t label = 0; label < label_count; ++label) {
    const auto first = grouped.begin() + static_cast<std::ptrdiff_t>(start[label]);
    const auto last = grouped.begin() + static_cast<std::ptrdiff_t>(start[label + 1]);
    if (first == last) continue;
    if (!std::is_sorted(first, last)) std::sort(first, last);
    Component c;
    c.vertices = static_cast<std::uint64_t>(last - first);
    c.edges = edges_per_label[label];
    for (auto it = first; it != last;) {
      const auto run_end = std::upper_bound(it, last, *it);
      c.degree_histogram.push_back({*it, static_cast<std::uint64_t>(run_end - it)});
      it = run_end;
    }
    stats.m += c.edges;
    stats.components.push_back(std::move(c));
  }
  std::sort(stats.components.begin(), stats.components.end(),
            [](const Component& a, const Component& b) {
              if (a.edges != b.edges) return a.edges > b.edges;
              if (a.vertices != b.vertices) return a.vertices > b.vertices;
              return a.degree_histogram > b.degree_histogram;
            });
  return stats;
}

Multigraph pair_uniform(const DegreeSequence& seq, Rng& rng) {
  auto owner = half_edge_layout(seq);
  const auto total = static_cast<HalfEdge>(owner.size());
  std::vector<HalfEdge> slots(total);
  std::iota(slots.begin(), slots.end(), HalfEdge{0});
  std::vector<HalfEdge> partner(total);
  // slots[i] is paired with a uniform choice among the remaining half-edges.
  for (HalfEdge i = 0; i < total; i += 2) {
    const auto j = std::uniform_int_distribution<HalfEdge>(i + 1, total - 1)(rng);
    std::swap(slots[i + 1], slots[j]);
    partner[slots[i]] = slots[i + 1];
    partner[slots[i + 1]] = slots[i];
  }
  return Multigraph(seq.n(), std::move(owner), std::move(partner));
}

SimplicityReport is_simple(const Multigraph& g) {
  SimplicityReport report;
  std::vector<std::pair<Vertex, Vertex>> edges;
  edges.reserve(g.m());
  g.for_each_edge([&](Vertex u, Vertex v) {
    if (u == v) {
      ++report.loops;
    } else {
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
  });
  std::sort(edges.begin(), edges.end());
  for (std::size_t i = 0; i < edges.size();) {
    std::size_t j = i + 1;
    while (j < edges.size() && edges[j] == edges[i]) ++j;
    if (j - i >= 2) ++report.multi_edge_pairs;
    i = j;
  }
  report.simple = report.loops == 0 && report.multi_edge_pairs == 0;
  return report;
}

SimpleSample sample_simple(const DegreeSequence& seq, Rng& rng, std::uint64_t max_attempts) {
  if (max_attempts == 0) throw Error(ErrorKind::InvalidArgument, "max_attempts must be >= 1");
  for (std::uint64_t attempt = 1; attempt <= max_attempts; ++attempt) {
    auto g = pair_uniform(seq, rng);
    if (is_simple(g).simple) return SimpleSample{std::move(g), attempt};
  }
  throw Error(ErrorKind::MaxAttemptsExceeded,
              "no simple graph in " + std::to_string(max_attempts) + " configuration-model draws");
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) {
    std::iota(parent_.begin(), parent_.end(), std::uint32_t{0});
  }

  std::uint32_t find(std::uint32_t x) {
    std::uint32_t root = x;
    while (parent_[root] != root) root = parent_[root];
    while (parent_[x] != root) x = std::exchange(parent_[x], root);
    return root;
  }

  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }

 private:
  std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
};

}  // namespace

ComponentStats components_unionfind(const Multigraph& g) {
  const auto n = static_cast<std::size_t>(g.n());
  DisjointSets sets(n);
  g.for_each_edge([&](Vertex u, Vertex v) { sets.unite(u, v); });

  constexpr auto kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> dense(n, kUnset);
  std::vector<std::uint32_t> labels(n);
  std::uint32_t next = 0;
  for (std::size_t v = 0; v < n; ++v) {
    const auto root = sets.find(static_cast<std::uint32_t>(v));
    if (dense[root] == kUnset) dense[root] = next++;
    labels[v] = dense[root];
  }
  std::vector<std::uint64_t> edges(next, 0);
  g.for_each_edge([&](Vertex u, Vertex) { ++edges[labels[u]]; });
  const auto degrees = g.degrees();
  return summarize_components(degrees, labels, edges);
}

void write_edge_list(const Multigraph& g, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  g.for_each_edge([&](Vertex u, Vertex v) { out << u << ' ' << v << '\n'; });
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

}  // namespace gcl
