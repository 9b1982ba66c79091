#ifndef CASCADELAB_CASCADE_HPP
#define CASCADELAB_CASCADE_HPP

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cascadelab/graph.hpp"

namespace cascadelab {

enum class SeedPolicy {
    RandomAll,     // uniform over all nodes
    RandomGroup,   // uniform over the spreading group
    TopCentrality  // highest eigenvector centrality first
};

std::string_view to_string(SeedPolicy policy);
/// Accepts the enum spelling ("RandomAll") or the short CLI form
/// ("random", "group", "centrality"). Throws ParameterError otherwise.
SeedPolicy parse_policy(std::string_view text);

/**
 * When a run ends.
 *
 * Exhaustion: stop once the exposed count has been unchanged for two
 * consecutive steps *and* no exposed node can still transmit (every live
 * node is dormant or has no unexposed neighbour).
 *
 * QuietSteps: stop as soon as the exposed count has been unchanged for two
 * consecutive steps, even if some nodes could still transmit.
 */
enum class StopRule { Exhaustion, QuietSteps };

std::string_view to_string(StopRule rule);
StopRule parse_stop_rule(std::string_view text);

struct CascadeParams {
    double p0 = 0.05;        // transmission probability at age 0
    double c = 3.0;          // retention loss factor, p(a+1) = p(a) / c
    std::size_t seed_count = 25;
    SeedPolicy policy = SeedPolicy::RandomAll;
    std::size_t max_steps = 10'000;
    double p_floor = 1e-6;   // below this a node goes dormant
    StopRule stop_rule = StopRule::Exhaustion;
    std::uint64_t rng_seed = 0;

    void validate() const;
};

inline constexpr NodeId kNoSource = std::numeric_limits<NodeId>::max();

struct ExposureEvent {
    std::uint32_t step = 0;
    NodeId source = kNoSource;  // kNoSource for seeds
    NodeId target = 0;
    NodeId root = 0;            // seed whose cascade reached target

    bool is_seed() const noexcept { return source == kNoSource; }
    friend bool operator==(const ExposureEvent&, const ExposureEvent&) = default;
};

struct CascadeTrace {
    std::vector<ExposureEvent> events;  // ordered by (step, target)
    std::uint32_t final_step = 0;
    std::size_t exposed_count = 0;
    bool truncated = false;             // max_steps hit before the stop rule

    friend bool operator==(const CascadeTrace&, const CascadeTrace&) = default;
};

/// p(a) for ages 0, 1, 2, ... while p(a) >= p_floor, computed by the
/// recurrence p(a+1) = p(a) / c. This is the exact table run_cascade uses.
std::vector<double> decay_schedule(double p0, double c, double p_floor);

/// k distinct seed nodes. TopCentrality computes centrality on the fly.
std::vector<NodeId> select_seeds(const Graph& graph, SeedPolicy policy, std::size_t k, std::uint64_t rng_seed);

/// Same, with precomputed centrality scores (only read for TopCentrality).
std::vector<NodeId> select_seeds(const Graph& graph, SeedPolicy policy, std::size_t k, std::uint64_t rng_seed,
                                 std::span<const double> centrality);

/**
 * Synchronous retention-decay cascade.
 *
 * Seeds are exposed at step 0. At step t every live node exposed at step s
 * (age a = t - 1 - s) tries each still-unexposed neighbour independently
 * with probability p0 / c^a. A target hit by several transmitters in the
 * same step records one of them, chosen uniformly, as its source. Nodes
 * whose probability has fallen below p_floor are dormant for good.
 */
CascadeTrace run_cascade(const Graph& graph, std::span<const NodeId> seeds, const CascadeParams& params);

/// select_seeds + run_cascade, both streams derived from params.rng_seed.
CascadeTrace simulate(const Graph& graph, const CascadeParams& params,
                      std::optional<std::span<const double>> centrality = std::nullopt);

/// Checks the trace invariants. Returns an empty string when valid,
/// otherwise a description of the first violation.
std::string validate_trace(const Graph& graph, const CascadeTrace& trace);

}  // namespace cascadelab

#endif  // CASCADELAB_CASCADE_HPP
