#ifndef CASCADELAB_GRAPH_HPP
#define CASCADELAB_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

namespace cascadelab {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/**
 * Simple undirected graph on nodes 0..n-1 with an optional set of
 * "spreading group" members.
 *
 * Adjacency lists are kept sorted; there are no self-loops and no parallel
 * edges. Instances are immutable once built and may be shared between
 * threads.
 */
class Graph {
public:
    Graph() = default;

    /// n isolated nodes.
    explicit Graph(std::size_t node_count);

    /// Builds from an edge list. Throws ParameterError on out-of-range ids,
    /// self-loops or duplicate edges (in either orientation).
    Graph(std::size_t node_count, std::span<const Edge> edges, std::vector<NodeId> group_members = {});

    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    std::span<const NodeId> neighbors(NodeId v) const { return adjacency_[v]; }
    std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
    bool has_edge(NodeId u, NodeId v) const;

    /// Sorted, duplicate-free.
    const std::vector<NodeId>& group_members() const noexcept { return group_; }
    bool is_member(NodeId v) const;

    /// Every edge once as (u, v) with u < v, lexicographically sorted.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    friend class GraphBuilder;

    std::vector<std::vector<NodeId>> adjacency_;
    std::vector<NodeId> group_;
    std::size_t edge_count_ = 0;
};

/// Mutable construction helper used by the generators. Callers guarantee
/// simplicity of the edges they add; finish() sorts and validates.
class GraphBuilder {
public:
    explicit GraphBuilder(std::size_t node_count) : adjacency_(node_count) {}
    explicit GraphBuilder(const Graph& base);

    void add_edge(NodeId u, NodeId v);
    bool has_edge(NodeId u, NodeId v) const;
    std::size_t degree(NodeId v) const { return adjacency_[v].size(); }
    std::size_t node_count() const noexcept { return adjacency_.size(); }
    void set_group(std::vector<NodeId> members) { group_ = std::move(members); }

    Graph finish() &&;

private:
    std::vector<std::vector<NodeId>> adjacency_;
    std::vector<NodeId> group_;
    std::size_t edge_count_ = 0;
};

// Edge-list text format:
//   # n=<n> group=<comma-separated member ids>
//   u v
//   ...
// Other lines starting with '#' are comments. Edges are written with u < v
// in sorted order, so write -> read -> write is byte-identical.
void write_edge_list(std::ostream& out, const Graph& graph);
Graph read_edge_list(std::istream& in);

}  // namespace cascadelab

#endif  // CASCADELAB_GRAPH_HPP
