#include "cascadelab/cascade.hpp"

#include <algorithm>
#include <numeric>

#include "cascadelab/error.hpp"
#include "cascadelab/netgen.hpp"
#include "cascadelab/rng.hpp"

namespace cascadelab {

std::string_view to_string(SeedPolicy policy) {
    switch (policy) {
        case SeedPolicy::RandomAll: return "RandomAll";
        case SeedPolicy::RandomGroup: return "RandomGroup";
        case SeedPolicy::TopCentrality: return "TopCentrality";
    }
    return "?";
}

SeedPolicy parse_policy(std::string_view text) {
    if (text == "RandomAll" || text == "random" || text == "all") return SeedPolicy::RandomAll;
    if (text == "RandomGroup" || text == "group") return SeedPolicy::RandomGroup;
    if (text == "TopCentrality" || text == "centrality" || text == "top") return SeedPolicy::TopCentrality;
    throw ParameterError("unknown seeding policy: " + std::string(text));
}

std::string_view to_string(StopRule rule) {
    return rule == StopRule::Exhaustion ? "exhaustion" : "quiet";
}

StopRule parse_stop_rule(std::string_view text) {
    if (text == "exhaustion") return StopRule::Exhaustion;
    if (text == "quiet") return StopRule::QuietSteps;
    throw ParameterError("unknown stop rule: " + std::string(text));
}

void CascadeParams::validate() const {
    if (!(p0 >= 0.0 && p0 <= 1.0)) throw ParameterError("p0 must be in [0, 1]");
    if (!(c > 1.0)) throw ParameterError("retention loss factor c must be > 1");
    if (p0 > 0.0 && !(p_floor > 0.0 && p_floor < p0)) throw ParameterError("p_floor must be in (0, p0)");
    if (max_steps == 0) throw ParameterError("max_steps must be positive");
}

std::vector<double> decay_schedule(double p0, double c, double p_floor) {
    std::vector<double> schedule;
    for (double p = p0; p > 0.0 && p >= p_floor; p /= c) {
        schedule.push_back(p);
    }
    return schedule;
}

std::vector<NodeId> select_seeds(const Graph& graph, SeedPolicy policy, std::size_t k, std::uint64_t rng_seed) {
    if (policy == SeedPolicy::TopCentrality) {
        const auto scores = eigenvector_centrality(graph);
        return select_seeds(graph, policy, k, rng_seed, scores);
    }
    return select_seeds(graph, policy, k, rng_seed, {});
}

std::vector<NodeId> select_seeds(const Graph& graph, SeedPolicy policy, std::size_t k, std::uint64_t rng_seed,
                                 std::span<const double> centrality) {
    const std::size_t n = graph.node_count();
    if (k == 0) throw ParameterError("seed count must be positive");
    if (k > n) throw ParameterError("seed count exceeds node count");

    if (policy == SeedPolicy::TopCentrality) {
        if (centrality.size() != n) throw ParameterError("centrality vector size does not match graph");
        return top_k(std::vector<double>(centrality.begin(), centrality.end()), k);
    }

    std::vector<NodeId> pool;
    if (policy == SeedPolicy::RandomGroup) {
        pool = graph.group_members();
        if (k > pool.size()) {
            throw InsufficientGroupError("RandomGroup needs " + std::to_string(k) + " seeds but the group has " +
                                         std::to_string(pool.size()) + " members");
        }
    } else {
        pool.resize(n);
        std::iota(pool.begin(), pool.end(), NodeId{0});
    }
    Rng rng(rng_seed);
    for (std::size_t i = 0; i < k; ++i) {
        std::swap(pool[i], pool[i + rng.below(pool.size() - i)]);
    }
    pool.resize(k);
    return pool;
}

CascadeTrace run_cascade(const Graph& graph, std::span<const NodeId> seeds, const CascadeParams& params) {
    params.validate();
    const std::size_t n = graph.node_count();
    if (seeds.empty()) throw ParameterError("seed set is empty");

    const std::vector<double> schedule = decay_schedule(params.p0, params.c, params.p_floor);
    Rng rng(params.rng_seed);

    std::vector<char> exposed(n, 0);
    std::vector<std::uint32_t> exposed_at(n, 0);
    std::vector<NodeId> root(n, 0);
    // Unexposed neighbours left; a node at zero can never transmit again.
    std::vector<std::uint32_t> open(n);
    for (NodeId v = 0; v < n; ++v) open[v] = static_cast<std::uint32_t>(graph.degree(v));

    CascadeTrace trace;
    std::vector<NodeId> live;

    auto expose = [&](NodeId v, std::uint32_t step, NodeId source, NodeId origin) {
        exposed[v] = 1;
        exposed_at[v] = step;
        root[v] = origin;
        for (NodeId u : graph.neighbors(v)) --open[u];
        trace.events.push_back({step, source, v, origin});
        live.push_back(v);
    };

    for (NodeId s : seeds) {
        if (s >= n) throw ParameterError("seed id out of range: " + std::to_string(s));
        if (exposed[s]) throw ParameterError("duplicate seed: " + std::to_string(s));
        expose(s, 0, kNoSource, s);
    }

    std::vector<std::uint32_t> hits(n, 0);
    std::vector<NodeId> chosen(n, kNoSource);
    std::vector<NodeId> fresh;
    std::vector<NodeId> still_live;
    unsigned quiet = 0;
    std::uint32_t step = 0;

    while (true) {
        if (step >= params.max_steps) {
            trace.truncated = true;
            break;
        }
        ++step;
        fresh.clear();
        still_live.clear();

        for (NodeId u : live) {
            const std::size_t age = step - 1 - exposed_at[u];
            if (age >= schedule.size() || open[u] == 0) continue;  // dormant or saturated
            still_live.push_back(u);
            const double p = schedule[age];
            for (NodeId v : graph.neighbors(u)) {
                if (exposed[v] || !rng.bernoulli(p)) continue;
                if (hits[v]++ == 0) fresh.push_back(v);
                // Reservoir choice: uniform over this step's successful transmitters.
                if (rng.below(hits[v]) == 0) chosen[v] = u;
            }
        }
        live.swap(still_live);

        std::sort(fresh.begin(), fresh.end());
        for (NodeId v : fresh) {
            expose(v, step, chosen[v], root[chosen[v]]);
            hits[v] = 0;
        }

        quiet = fresh.empty() ? quiet + 1 : 0;
        if (quiet >= 2) {
            if (params.stop_rule == StopRule::QuietSteps) break;
            const bool can_transmit = std::any_of(live.begin(), live.end(), [&](NodeId u) {
                return step - exposed_at[u] < schedule.size() && open[u] > 0;
            });
            if (!can_transmit) break;
        }
    }

    trace.final_step = step;
    trace.exposed_count = trace.events.size();
    return trace;
}

CascadeTrace simulate(const Graph& graph, const CascadeParams& params,
                      std::optional<std::span<const double>> centrality) {
    const std::uint64_t seed_stream = mix_seed(params.rng_seed, {1});
    std::vector<NodeId> seeds;
    if (centrality) {
        seeds = select_seeds(graph, params.policy, params.seed_count, seed_stream, *centrality);
    } else {
        seeds = select_seeds(graph, params.policy, params.seed_count, seed_stream);
    }
    CascadeParams run = params;
    run.rng_seed = mix_seed(params.rng_seed, {2});
    return run_cascade(graph, seeds, run);
}

std::string validate_trace(const Graph& graph, const CascadeTrace& trace) {
    const std::size_t n = graph.node_count();
    std::vector<char> seen(n, 0);
    std::vector<std::uint32_t> when(n, 0);
    std::vector<NodeId> origin(n, 0);
    std::uint32_t last_step = 0;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const auto& e = trace.events[i];
        const std::string at = "event " + std::to_string(i) + ": ";
        if (e.target >= n) return at + "target out of range";
        if (seen[e.target]) return at + "node " + std::to_string(e.target) + " exposed twice";
        if (e.step < last_step) return at + "events out of step order";
        last_step = e.step;
        if (e.is_seed()) {
            if (e.step != 0) return at + "seed not at step 0";
            if (e.root != e.target) return at + "seed root is not itself";
        } else {
            if (e.step == 0) return at + "non-seed at step 0";
            if (e.source >= n || !seen[e.source]) return at + "source not previously exposed";
            if (when[e.source] >= e.step) return at + "source not exposed strictly earlier";
            if (!graph.has_edge(e.source, e.target)) return at + "source and target not adjacent";
            if (e.root != origin[e.source]) return at + "root not inherited from source";
        }
        seen[e.target] = 1;
        when[e.target] = e.step;
        origin[e.target] = e.root;
    }
    if (trace.exposed_count != trace.events.size()) return "exposed_count does not match event count";
    return {};
}

}  // namespace cascadelab
