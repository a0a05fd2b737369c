#include "gcl/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcl/error.hpp"

namespace gcl {

std::string_view to_string(ExplorationMode mode) {
  return mode == ExplorationMode::Timed ? "timed" : "combinatorial";
}

namespace {

enum class Status : std::uint8_t { Sleeping, Active, Dead };

constexpr std::uint8_t kAwake = 1;
constexpr std::uint8_t kTildeDead = 2;
constexpr auto kNoLabel = std::numeric_limits<std::uint32_t>::max();

// One run of the C1/C2/C3 exploration. Living half-edges sit in a dense array
// with a position index so that uniform draws and removals are O(1). Active
// half-edges form a stack with lazy deletion: a half-edge taken as a partner
// while active stays on the stack and is skipped when popped.
class Explorer {
 public:
  Explorer(const DegreeSequence& seq, Rng& rng, ExplorationMode mode,
           std::span<const double> checkpoint_times)
      : rng_(rng), mode_(mode), checkpoint_times_(checkpoint_times), owner_(half_edge_layout(seq)) {
    if (!std::is_sorted(checkpoint_times.begin(), checkpoint_times.end())) {
      throw Error(ErrorKind::InvalidArgument, "checkpoint times must be ascending");
    }
    const auto n = static_cast<std::size_t>(seq.n());
    const auto total = static_cast<HalfEdge>(owner_.size());
    first_.assign(n + 1, 0);
    for (const Vertex v : owner_) ++first_[v + 1];
    for (std::size_t v = 0; v < n; ++v) first_[v + 1] += first_[v];

    partner_.assign(total, 0);
    status_.assign(total, Status::Sleeping);
    living_.resize(total);
    living_pos_.resize(total);
    for (HalfEdge h = 0; h < total; ++h) living_[h] = living_pos_[h] = h;
    stack_.reserve(std::min<std::size_t>(total, 1u << 20));
    vertex_flags_.assign(n, 0);
    label_.assign(n, kNoLabel);

    sleeping_vertices_.assign(seq.max_degree() + 1, 0);
    for (const auto& [k, count] : seq.counts()) sleeping_vertices_[k] = count;
    sleeping_vertices_tilde_ = sleeping_vertices_;
    living_count_ = sleeping_ = sleeping_tilde_ = total;

    trace_.mode = mode;
    trace_.n = seq.n();
    trace_.half_edges = total;
    trace_.max_degree = seq.max_degree();
    trace_.checkpoints.reserve(checkpoint_times.size());
  }

  ExplorationResult run() {
    if (mode_ == ExplorationMode::Timed) {
      run_timed();
    } else {
      run_combinatorial();
    }
    flush_checkpoints(std::numeric_limits<double>::infinity());

    // Whatever is still unlabelled has no half-edges: isolated vertices.
    const auto n = label_.size();
    std::vector<Degree> degrees(n);
    for (std::size_t v = 0; v < n; ++v) {
      degrees[v] = first_[v + 1] - first_[v];
      if (label_[v] == kNoLabel) {
        label_[v] = static_cast<std::uint32_t>(edges_.size());
        edges_.push_back(0);
      }
    }
    ExplorationResult result;
    result.components = summarize_components(degrees, label_, edges_);
    result.trace = std::move(trace_);
    result.graph = Multigraph(n, std::move(owner_), std::move(partner_));
    return result;
  }

 private:
  Degree degree(Vertex v) const { return first_[v + 1] - first_[v]; }

  void remove_living(HalfEdge h) {
    const HalfEdge pos = living_pos_[h];
    const HalfEdge last = living_[--living_count_];
    living_[pos] = last;
    living_pos_[last] = pos;
  }

  HalfEdge uniform_living() {
    const auto i = std::uniform_int_distribution<std::uint64_t>(0, living_count_ - 1)(rng_);
    return living_[i];
  }

  // Vertex v leaves the sleeping set; its half-edges other than `except` become active.
  void wake(Vertex v, HalfEdge except) {
    const Degree k = degree(v);
    vertex_flags_[v] |= kAwake;
    label_[v] = current_label_;
    --sleeping_vertices_[k];
    sleeping_ -= k;
    for (HalfEdge e = first_[v]; e < first_[v + 1]; ++e) {
      if (e == except) continue;
      status_[e] = Status::Active;
      ++active_;
      stack_.push_back(e);
    }
  }

  void mark_tilde_dead(Vertex v) {
    if (vertex_flags_[v] & kTildeDead) return;
    vertex_flags_[v] |= kTildeDead;
    const Degree k = degree(v);
    --sleeping_vertices_tilde_[k];
    sleeping_tilde_ -= k;
  }

  // C1: start a new component from the vertex of a uniformly chosen sleeping
  // half-edge. Only called with no active half-edges, so every living
  // half-edge is sleeping.
  bool start_component(double time) {
    if (living_count_ == 0) return false;
    const HalfEdge h = uniform_living();
    current_label_ = static_cast<std::uint32_t>(edges_.size());
    edges_.push_back(0);
    wake(owner_[h], std::numeric_limits<HalfEdge>::max());
    trace_.c1_times.push_back(time);
    return true;
  }

  // C2: kill an active half-edge (most recently activated first).
  void kill_active() {
    while (status_[stack_.back()] != Status::Active) stack_.pop_back();
    const HalfEdge x = stack_.back();
    stack_.pop_back();
    status_[x] = Status::Dead;
    remove_living(x);
    --active_;
    pending_ = x;
    has_pending_ = true;
  }

  // C3: y died spontaneously and is joined to the half-edge killed in C2.
  void join(HalfEdge y) {
    const HalfEdge x = pending_;
    has_pending_ = false;
    const Status was = status_[y];
    status_[y] = Status::Dead;
    remove_living(y);
    if (was == Status::Sleeping) {
      wake(owner_[y], y);
    } else {
      --active_;
    }
    partner_[x] = y;
    partner_[y] = x;
    ++edges_[current_label_];
  }

  void continue_after(double time) {
    if (active_ == 0 && !start_component(time)) return;
    kill_active();
  }

  void flush_checkpoints(double before) {
    while (next_checkpoint_ < checkpoint_times_.size() &&
           checkpoint_times_[next_checkpoint_] < before) {
      Checkpoint c;
      c.time = checkpoint_times_[next_checkpoint_++];
      c.living = living_count_;
      c.active = active_;
      c.sleeping = sleeping_;
      c.sleeping_tilde = sleeping_tilde_;
      c.sleeping_vertices = sleeping_vertices_;
      c.sleeping_vertices_tilde = sleeping_vertices_tilde_;
      trace_.checkpoints.push_back(std::move(c));
    }
  }

  void run_combinatorial() {
    continue_after(0.0);
    std::uint64_t step = 0;
    while (has_pending_) {
      flush_checkpoints(static_cast<double>(step + 1));
      const HalfEdge y = uniform_living();
      join(y);
      // Without clocks, V~ tracks vertices none of whose half-edges has been
      // taken as a partner.
      mark_tilde_dead(owner_[y]);
      ++step;
      continue_after(static_cast<double>(step));
    }
  }

  void run_timed() {
    std::vector<std::pair<double, HalfEdge>> order(owner_.size());
    std::exponential_distribution<double> lifetime(1.0);
    for (HalfEdge h = 0; h < order.size(); ++h) order[h] = {lifetime(rng_), h};
    std::sort(order.begin(), order.end());

    continue_after(0.0);
    for (const auto& [t, h] : order) {
      flush_checkpoints(t);
      // The first lifetime to expire at a vertex is its minimum.
      mark_tilde_dead(owner_[h]);
      if (status_[h] == Status::Dead) continue;
      join(h);
      continue_after(t);
    }
  }

  Rng& rng_;
  ExplorationMode mode_;
  std::span<const double> checkpoint_times_;
  std::size_t next_checkpoint_ = 0;

  std::vector<Vertex> owner_;
  std::vector<HalfEdge> first_;
  std::vector<HalfEdge> partner_;
  std::vector<Status> status_;
  std::vector<HalfEdge> living_;
  std::vector<HalfEdge> living_pos_;
  std::vector<HalfEdge> stack_;
  std::vector<std::uint8_t> vertex_flags_;
  std::vector<std::uint32_t> label_;
  std::vector<std::uint64_t> edges_;
  std::uint32_t current_label_ = 0;

  HalfEdge pending_ = 0;
  bool has_pending_ = false;

  std::uint64_t living_count_ = 0;
  std::uint64_t active_ = 0;
  std::uint64_t sleeping_ = 0;
  std::uint64_t sleeping_tilde_ = 0;
  std::vector<std::uint64_t> sleeping_vertices_;
  std::vector<std::uint64_t> sleeping_vertices_tilde_;

  ExplorationTrace trace_;
};

void require_timed(const ExplorationTrace& trace) {
  if (trace.mode != ExplorationMode::Timed) {
    throw Error(ErrorKind::ModeMismatch, "deviation from fluid limits needs a timed trace");
  }
}

}  // namespace

ExplorationResult explore(const DegreeSequence& seq, Rng& rng, ExplorationMode mode,
                          std::span<const double> checkpoint_times) {
  return Explorer(seq, rng, mode, checkpoint_times).run();
}

ExplorationTrace pure_death_trajectory(const DegreeSequence& seq, Rng& rng,
                                       std::span<const double> checkpoint_times) {
  if (!std::is_sorted(checkpoint_times.begin(), checkpoint_times.end())) {
    throw Error(ErrorKind::InvalidArgument, "checkpoint times must be ascending");
  }
  ExplorationTrace trace;
  trace.mode = ExplorationMode::Timed;
  trace.n = seq.n();
  trace.half_edges = seq.half_edges();
  trace.max_degree = seq.max_degree();
  trace.checkpoints.resize(checkpoint_times.size());
  for (std::size_t i = 0; i < checkpoint_times.size(); ++i) {
    trace.checkpoints[i].time = checkpoint_times[i];
    trace.checkpoints[i].sleeping_vertices_tilde.assign(seq.max_degree() + 1, 0);
  }

  // A degree-k vertex keeps all its half-edges until the minimum of k Exp(1)
  // lifetimes, which is Exp(k).
  std::vector<double> deaths;
  for (const auto& [k, count] : seq.counts()) {
    if (k == 0) {
      for (auto& c : trace.checkpoints) c.sleeping_vertices_tilde[0] = count;
      continue;
    }
    deaths.resize(count);
    std::exponential_distribution<double> death(static_cast<double>(k));
    for (auto& d : deaths) d = death(rng);
    std::sort(deaths.begin(), deaths.end());
    for (auto& c : trace.checkpoints) {
      const auto died = std::upper_bound(deaths.begin(), deaths.end(), c.time) - deaths.begin();
      c.sleeping_vertices_tilde[k] = count - static_cast<std::uint64_t>(died);
      c.sleeping_tilde += static_cast<std::uint64_t>(k) * c.sleeping_vertices_tilde[k];
    }
  }

  // Living half-edges: jumps of -2 at rate y from y = 2m - 1 (the last jump lands on 0).
  std::uint64_t living = seq.half_edges() == 0 ? 0 : seq.half_edges() - 1;
  double now = 0;
  std::size_t next = 0;
  while (next < checkpoint_times.size()) {
    const double jump_at =
        living == 0 ? std::numeric_limits<double>::infinity()
                    : now + std::exponential_distribution<double>(static_cast<double>(living))(rng);
    while (next < checkpoint_times.size() && checkpoint_times[next] < jump_at) {
      trace.checkpoints[next++].living = living;
    }
    now = jump_at;
    living = living >= 2 ? living - 2 : 0;
  }
  return trace;
}

double DeviationReport::worst() const {
  return std::max({living, sleeping_vertices_tilde, sleeping_tilde, active, tilde_gap});
}

DeviationReport trace_deviation(const ExplorationTrace& trace, const GeneratingFunctions& gf,
                                std::optional<Degree> max_k) {
  require_timed(trace);
  DeviationReport report;
  report.max_k = max_k.value_or(trace.max_degree);
  report.checkpoints = trace.checkpoints.size();

  const auto& dist = gf.distribution();
  const Regime regime = classify(dist);
  if (regime == Regime::Supercritical) {
    report.tau = -std::log(solve_xi(dist));
    report.tau_window = true;
  } else if (regime == Regime::DegenerateP1Zero) {
    report.tau = std::numeric_limits<double>::infinity();
    report.tau_window = true;
  } else {
    report.tau = std::numeric_limits<double>::infinity();
  }

  const double n = static_cast<double>(trace.n);
  const double lambda = gf.lambda();
  for (const auto& c : trace.checkpoints) {
    const double x = std::exp(-c.time);
    report.living = std::max(report.living, std::abs(c.living / n - lambda * x * x));
    for (Degree k = 0; k <= report.max_k; ++k) {
      const double observed =
          k < c.sleeping_vertices_tilde.size() ? c.sleeping_vertices_tilde[k] / n : 0.0;
      report.sleeping_vertices_tilde = std::max(
          report.sleeping_vertices_tilde, std::abs(observed - dist.p(k) * std::pow(x, k)));
    }
    report.sleeping_tilde = std::max(report.sleeping_tilde, std::abs(c.sleeping_tilde / n - gf.h(x)));
    if (c.time <= report.tau) {
      report.active = std::max(report.active, std::abs(c.active / n - gf.H(x)));
    }
    const double gap = (static_cast<double>(c.sleeping_tilde) - static_cast<double>(c.sleeping)) / n;
    report.tilde_gap = std::max(report.tilde_gap, std::abs(gap));
  }
  return report;
}

namespace {

template <typename Reference>
double rescaled_sup(const ExplorationTrace& trace, const DegreeSequence& seq, double t0,
                    Reference reference) {
  require_timed(trace);
  const double alpha = seq.alpha();
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "rescaling needs alpha_n > 0");
  const double scale = 1.0 / (alpha * alpha * static_cast<double>(trace.n));
  double sup = 0;
  for (const auto& c : trace.checkpoints) {
    const double t = c.time / alpha;
    if (t > t0 * (1.0 + 1e-12)) break;
    const double observed = scale * static_cast<double>(c.active_tilde());
    sup = std::max(sup, std::abs(observed - reference(t)));
  }
  return sup;
}

}  // namespace

double rescaled_near_critical_deviation(const ExplorationTrace& trace, const DegreeSequence& seq,
                                        double t0) {
  const double beta = seq.beta();
  return rescaled_sup(trace, seq, t0, [beta](double t) { return t - 0.5 * beta * t * t; });
}

double rescaled_drift_deviation(const ExplorationTrace& trace, const DegreeSequence& seq, double t0) {
  const auto gf = empirical_gf(seq);
  const double alpha = seq.alpha();
  return rescaled_sup(trace, seq, t0, [&](double t) {
    return gf.H(std::exp(-alpha * t)) / (alpha * alpha);
  });
}

std::vector<double> rescaled_checkpoint_times(const DegreeSequence& seq, double t0,
                                              std::size_t points) {
  const double alpha = seq.alpha();
  if (!(alpha > 0.0)) throw Error(ErrorKind::InvalidArgument, "rescaling needs alpha_n > 0");
  std::vector<double> times;
  if (points == 0) return times;
  times.reserve(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double t = points == 1 ? 0.0 : t0 * static_cast<double>(i) / static_cast<double>(points - 1);
    times.push_back(alpha * t);
  }
  return times;
}

}  // namespace gcl
