#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gcl/degree_model.hpp"
#include "gcl/rng.hpp"

namespace gcl {

using Vertex = std::uint32_t;
using HalfEdge = std::uint32_t;

// Configuration-model multigraph stored as a half-edge pairing. Half-edges are
// numbered vertex by vertex in ascending vertex order.
class Multigraph {
 public:
  Multigraph() = default;
  // Takes ownership of the arrays; validates sizes, ranges and the involution.
  Multigraph(std::uint64_t n, std::vector<Vertex> half_edge_owner, std::vector<HalfEdge> partner);

  std::uint64_t n() const noexcept { return n_; }
  std::uint64_t m() const noexcept { return partner_.size() / 2; }
  std::span<const Vertex> half_edge_owner() const noexcept { return owner_; }
  std::span<const HalfEdge> partner() const noexcept { return partner_; }
  std::vector<Degree> degrees() const;

  // Each edge once, as (owner(x), owner(partner(x))) for x < partner(x).
  template <typename Fn>
  void for_each_edge(Fn&& fn) const {
    for (std::size_t x = 0; x < partner_.size(); ++x) {
      if (x < partner_[x]) fn(owner_[x], owner_[partner_[x]]);
    }
  }

  bool operator==(const Multigraph&) const = default;

 private:
  std::uint64_t n_ = 0;
  std::vector<Vertex> owner_;
  std::vector<HalfEdge> partner_;
};

// Owner array for the fixed ascending layout of seq; throws if 2m does not fit a HalfEdge.
std::vector<Vertex> half_edge_layout(const DegreeSequence& seq);

struct DegreeCount {
  Degree degree = 0;
  std::uint64_t count = 0;
  auto operator<=>(const DegreeCount&) const = default;
};

struct Component {
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;
  std::vector<DegreeCount> degree_histogram;  // ascending degree

  auto operator<=>(const Component&) const = default;
};

struct ComponentStats {
  std::vector<Component> components;  // descending by edges, then vertices
  std::uint64_t n = 0;
  std::uint64_t m = 0;

  std::size_t component_count() const noexcept { return components.size(); }
  bool operator==(const ComponentStats&) const = default;
};

// Builds sorted ComponentStats from a labelling. labels[v] < edges_per_label.size().
ComponentStats summarize_components(std::span<const Degree> degrees,
                                    std::span<const std::uint32_t> labels,
                                    std::span<const std::uint64_t> edges_per_label);

Multigraph pair_uniform(const DegreeSequence& seq, Rng& rng);

struct SimplicityReport {
  bool simple = true;
  std::uint64_t loops = 0;
  std::uint64_t multi_edge_pairs = 0;
};

SimplicityReport is_simple(const Multigraph& g);

struct SimpleSample {
  Multigraph graph;
  std::uint64_t attempts = 0;
};

// Rejection sampling; throws MaxAttemptsExceeded after max_attempts non-simple draws.
SimpleSample sample_simple(const DegreeSequence& seq, Rng& rng, std::uint64_t max_attempts);

ComponentStats components_unionfind(const Multigraph& g);

// "u v" per line; loops as "u u".
void write_edge_list(const Multigraph& g, const std::filesystem::path& path);

}  // namespace gcl
