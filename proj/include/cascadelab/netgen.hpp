#ifndef CASCADELAB_NETGEN_HPP
#define CASCADELAB_NETGEN_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cascadelab/graph.hpp"

namespace cascadelab {

struct GenParams {
    std::size_t n = 10'000;
    std::size_t m_attach = 2;  // edges per arriving node
    double r = 0.0;            // spreading-group ratio, [0, 1)
    double q_intra = 0.1;      // overlay edge probability inside the group
    std::uint64_t rng_seed = 0;

    void validate() const;
};

/**
 * Preferential attachment. Starts from a clique on m_attach+1 nodes; every
 * later node connects to m_attach distinct existing nodes, each drawn with
 * probability proportional to its current degree. group_members is empty.
 *
 * Only n, m_attach and rng_seed are used here.
 */
Graph generate_ba(const GenParams& params);

/// Number of group members for ratio r on n nodes: ceil(n*r).
std::size_t group_size(std::size_t n, double r);

/**
 * Marks ceil(n*r) uniformly chosen nodes as the spreading group and adds an
 * Erdos-Renyi overlay on them: every member pair that is not yet adjacent
 * gets an edge with probability q_intra. Existing edges are kept. r == 0
 * returns the graph unchanged with an empty group.
 */
Graph plant_group(const Graph& graph, double r, double q_intra, std::uint64_t rng_seed);

/// generate_ba followed by plant_group, with the planting stream derived
/// from params.rng_seed.
Graph generate_network(const GenParams& params);

struct CentralityOptions {
    double tol = 1e-8;
    std::size_t max_iter = 1000;
};

/**
 * Eigenvector centrality by power iteration on A + I (same eigenvectors as
 * A, but the shift keeps bipartite graphs from oscillating). Scores are
 * non-negative with unit L2 norm; isolated nodes score 0. Throws
 * ConvergenceError with the last residual if max_iter is exhausted.
 */
std::vector<double> eigenvector_centrality(const Graph& graph, const CentralityOptions& options = {});

/// Indices of the k largest scores, ties broken by ascending node id.
std::vector<NodeId> top_k(const std::vector<double>& scores, std::size_t k);

}  // namespace cascadelab

#endif  // CASCADELAB_NETGEN_HPP
