#include "cascadelab/graph.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "cascadelab/error.hpp"

namespace cascadelab {

namespace {

void validate_group(std::vector<NodeId>& group, std::size_t n) {
    std::sort(group.begin(), group.end());
    if (std::adjacent_find(group.begin(), group.end()) != group.end()) {
        throw ParameterError("duplicate group member");
    }
    if (!group.empty() && group.back() >= n) {
        throw ParameterError("group member out of range: " + std::to_string(group.back()));
    }
}

}  // namespace

Graph::Graph(std::size_t node_count) : adjacency_(node_count) {}

Graph::Graph(std::size_t node_count, std::span<const Edge> edges, std::vector<NodeId> group_members)
    : adjacency_(node_count) {
    for (auto [u, v] : edges) {
        if (u >= node_count || v >= node_count) {
            throw ParameterError("edge endpoint out of range: " + std::to_string(u) + " " + std::to_string(v));
        }
        if (u == v) {
            throw ParameterError("self-loop on node " + std::to_string(u));
        }
        adjacency_[u].push_back(v);
        adjacency_[v].push_back(u);
    }
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end());
        if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
            throw ParameterError("duplicate edge");
        }
    }
    edge_count_ = edges.size();
    validate_group(group_members, node_count);
    group_ = std::move(group_members);
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    const auto& list = adjacency_[u];
    return std::binary_search(list.begin(), list.end(), v);
}

bool Graph::is_member(NodeId v) const { return std::binary_search(group_.begin(), group_.end(), v); }

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < adjacency_.size(); ++u) {
        for (NodeId v : adjacency_[u]) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

GraphBuilder::GraphBuilder(const Graph& base)
    : adjacency_(base.adjacency_), group_(base.group_), edge_count_(base.edge_count_) {}

void GraphBuilder::add_edge(NodeId u, NodeId v) {
    adjacency_[u].push_back(v);
    adjacency_[v].push_back(u);
    ++edge_count_;
}

bool GraphBuilder::has_edge(NodeId u, NodeId v) const {
    const auto& a = adjacency_[u];
    const auto& b = adjacency_[v];
    const auto& shorter = a.size() <= b.size() ? a : b;
    const NodeId target = a.size() <= b.size() ? v : u;
    return std::find(shorter.begin(), shorter.end(), target) != shorter.end();
}

Graph GraphBuilder::finish() && {
    Graph g;
    for (auto& list : adjacency_) {
        std::sort(list.begin(), list.end());
    }
    validate_group(group_, adjacency_.size());
    g.adjacency_ = std::move(adjacency_);
    g.group_ = std::move(group_);
    g.edge_count_ = edge_count_;
    return g;
}

void write_edge_list(std::ostream& out, const Graph& graph) {
    out << "# n=" << graph.node_count() << " group=";
    const auto& group = graph.group_members();
    for (std::size_t i = 0; i < group.size(); ++i) {
        if (i) out << ',';
        out << group[i];
    }
    out << '\n';
    for (auto [u, v] : graph.edges()) {
        out << u << ' ' << v << '\n';
    }
}

namespace {

template <typename T>
T parse_number(std::string_view text, std::size_t line) {
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size()) {
        throw ParseError(line, "expected integer, got '" + std::string(text) + "'");
    }
    return value;
}

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

}  // namespace

Graph read_edge_list(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::optional<std::size_t> n;
    std::vector<NodeId> group;
    std::vector<Edge> edges;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = trim(line);
        if (view.empty()) continue;
        if (view.front() == '#') {
            view = trim(view.substr(1));
            if (!view.starts_with("n=")) continue;
            if (n) throw ParseError(line_no, "duplicate header");
            const auto space = view.find(' ');
            n = parse_number<std::size_t>(view.substr(2, space == std::string_view::npos ? view.npos : space - 2),
                                          line_no);
            if (space != std::string_view::npos) {
                std::string_view rest = trim(view.substr(space + 1));
                if (!rest.starts_with("group=")) throw ParseError(line_no, "expected group=");
                rest.remove_prefix(6);
                while (!rest.empty()) {
                    const auto comma = rest.find(',');
                    group.push_back(parse_number<NodeId>(trim(rest.substr(0, comma)), line_no));
                    if (comma == std::string_view::npos) break;
                    rest.remove_prefix(comma + 1);
                }
            }
            continue;
        }
        if (!n) throw ParseError(line_no, "edge before '# n=' header");
        const auto space = view.find_first_of(" \t");
        if (space == std::string_view::npos) throw ParseError(line_no, "expected 'u v'");
        const NodeId u = parse_number<NodeId>(view.substr(0, space), line_no);
        const NodeId v = parse_number<NodeId>(trim(view.substr(space + 1)), line_no);
        edges.emplace_back(u, v);
    }
    if (!n) throw ParseError(line_no, "missing '# n=' header");
    try {
        return Graph(*n, edges, std::move(group));
    } catch (const ParameterError& e) {
        throw ParseError(line_no, e.what());
    }
}

}  // namespace cascadelab
