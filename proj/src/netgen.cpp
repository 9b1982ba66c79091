#include "cascadelab/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "cascadelab/error.hpp"
#include "cascadelab/rng.hpp"

namespace cascadelab {

void GenParams::validate() const {
    if (m_attach == 0) throw ParameterError("m_attach must be positive");
    if (m_attach >= n) throw ParameterError("m_attach must be smaller than n");
    if (n > std::numeric_limits<NodeId>::max()) throw ParameterError("n too large");
    if (!(r >= 0.0 && r < 1.0)) throw ParameterError("group ratio r must be in [0, 1)");
    if (!(q_intra >= 0.0 && q_intra <= 1.0)) throw ParameterError("q_intra must be in [0, 1]");
}

Graph generate_ba(const GenParams& params) {
    params.validate();
    const std::size_t n = params.n;
    const std::size_t m = params.m_attach;
    Rng rng(params.rng_seed);

    GraphBuilder builder(n);
    // Each edge contributes both endpoints, so a uniform pick from this list
    // is a degree-proportional pick over nodes.
    std::vector<NodeId> endpoints;
    endpoints.reserve(2 * (m * (m + 1) / 2 + (n - m - 1) * m));

    for (NodeId u = 0; u <= m; ++u) {
        for (NodeId v = u + 1; v <= m; ++v) {
            builder.add_edge(u, v);
            endpoints.push_back(u);
            endpoints.push_back(v);
        }
    }

    std::vector<NodeId> targets;
    targets.reserve(m);
    for (auto v = static_cast<NodeId>(m + 1); v < n; ++v) {
        targets.clear();
        while (targets.size() < m) {
            const NodeId t = endpoints[rng.below(endpoints.size())];
            if (std::find(targets.begin(), targets.end(), t) == targets.end()) {
                targets.push_back(t);
            }
        }
        for (NodeId t : targets) {
            builder.add_edge(v, t);
            endpoints.push_back(v);
            endpoints.push_back(t);
        }
    }
    return std::move(builder).finish();
}

std::size_t group_size(std::size_t n, double r) {
    // The epsilon absorbs representation error such as 10000 * 0.03.
    const double raw = static_cast<double>(n) * r;
    const auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
    return std::min(k, n);
}

Graph plant_group(const Graph& graph, double r, double q_intra, std::uint64_t rng_seed) {
    if (!(r >= 0.0 && r < 1.0)) throw ParameterError("group ratio r must be in [0, 1)");
    if (!(q_intra >= 0.0 && q_intra <= 1.0)) throw ParameterError("q_intra must be in [0, 1]");
    const std::size_t n = graph.node_count();
    const std::size_t k = group_size(n, r);

    GraphBuilder builder(graph);
    if (k == 0) {
        builder.set_group({});
        return std::move(builder).finish();
    }

    Rng rng(rng_seed);
    // Partial Fisher-Yates: the first k slots are a uniform k-subset.
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), NodeId{0});
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + rng.below(n - i);
        std::swap(pool[i], pool[j]);
    }
    std::vector<NodeId> members(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
    std::sort(members.begin(), members.end());

    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = i + 1; j < k; ++j) {
            // Draw for every pair so the stream does not depend on the base graph.
            const bool hit = rng.bernoulli(q_intra);
            if (hit && !graph.has_edge(members[i], members[j])) {
                builder.add_edge(members[i], members[j]);
            }
        }
    }
    builder.set_group(std::move(members));
    return std::move(builder).finish();
}

Graph generate_network(const GenParams& params) {
    params.validate();
    const Graph base = generate_ba(params);
    return plant_group(base, params.r, params.q_intra, mix_seed(params.rng_seed, {0x67726f7570ULL}));
}

std::vector<double> eigenvector_centrality(const Graph& graph, const CentralityOptions& options) {
    const std::size_t n = graph.node_count();
    std::vector<double> x(n, 0.0);
    std::size_t active = 0;
    for (NodeId v = 0; v < n; ++v) {
        if (graph.degree(v) > 0) {
            x[v] = 1.0;
            ++active;
        }
    }
    if (active == 0) return x;
    for (double& xi : x) xi /= std::sqrt(static_cast<double>(active));

    std::vector<double> next(n);
    double residual = 0.0;
    for (std::size_t iter = 0; iter < options.max_iter; ++iter) {
        double norm2 = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            double s = x[v];
            for (NodeId u : graph.neighbors(v)) s += x[u];
            next[v] = s;
            norm2 += s * s;
        }
        const double norm = std::sqrt(norm2);
        residual = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            next[v] /= norm;
            const double d = next[v] - x[v];
            residual += d * d;
        }
        residual = std::sqrt(residual);
        x.swap(next);
        if (residual < options.tol) return x;
    }
    throw ConvergenceError("eigenvector centrality did not converge in " + std::to_string(options.max_iter) +
                               " iterations (residual " + std::to_string(residual) + ")",
                           residual);
}

std::vector<NodeId> top_k(const std::vector<double>& scores, std::size_t k) {
    if (k > scores.size()) throw ParameterError("k exceeds node count");
    std::vector<NodeId> order(scores.size());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](NodeId a, NodeId b) { return scores[a] > scores[b] || (scores[a] == scores[b] && a < b); });
    order.resize(k);
    return order;
}

}  // namespace cascadelab
