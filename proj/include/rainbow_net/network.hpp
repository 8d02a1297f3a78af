#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rainbow_net/rational.hpp"

namespace rnf {

using NodeId = std::size_t;
using EdgeId = std::size_t;

/// Edge as declared in a scenario document: endpoints by node name.
struct EdgeSpec {
    std::string id;
    std::string tail;
    std::string head;
    Rational capacity;
};

struct Edge {
    std::string id;
    NodeId tail;
    NodeId head;
    Rational capacity;  // bits per source symbol
};

/// Capacitated directed graph with designated source and sink nodes.
///
/// Nodes and edges are addressed by dense indices in declaration order; the
/// sink order given at construction is the index order of every per-sink
/// vector in the library. Immutable once built.
class Network {
public:
    Network(std::vector<std::string> nodes, const std::vector<EdgeSpec>& edges,
            const std::vector<std::string>& sources, const std::vector<std::string>& sinks);

    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    const std::vector<std::string>& node_names() const noexcept { return nodes_; }
    const std::string& node_name(NodeId v) const { return nodes_.at(v); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(EdgeId e) const { return edges_.at(e); }
    const std::vector<NodeId>& sources() const noexcept { return sources_; }
    const std::vector<NodeId>& sinks() const noexcept { return sinks_; }

    std::span<const EdgeId> out_edges(NodeId v) const { return out_.at(v); }
    std::span<const EdgeId> in_edges(NodeId v) const { return in_.at(v); }

    /// Throws ValidationError for unknown names.
    NodeId node(std::string_view name) const;
    EdgeId edge_index(std::string_view id) const;
    std::optional<NodeId> find_node(std::string_view name) const;
    std::optional<EdgeId> find_edge(std::string_view id) const;

    bool is_source(NodeId v) const noexcept { return is_source_.at(v); }
    /// Position of v in the sink order, if v is a sink.
    std::optional<std::size_t> sink_position(NodeId v) const noexcept;

    /// Copy with one capacity replaced.
    Network with_capacity(EdgeId e, Rational capacity) const;
    /// Copy without the given edges (ids are preserved for the rest).
    Network without_edges(std::span<const EdgeId> removed) const;

    std::vector<EdgeSpec> edge_specs() const;

private:
    std::vector<std::string> nodes_;
    std::vector<Edge> edges_;
    std::vector<NodeId> sources_;
    std::vector<NodeId> sinks_;
    std::vector<bool> is_source_;
    std::vector<std::optional<std::size_t>> sink_pos_;
    std::vector<std::vector<EdgeId>> out_;
    std::vector<std::vector<EdgeId>> in_;
    std::unordered_map<std::string, NodeId> node_by_name_;
    std::unordered_map<std::string, EdgeId> edge_by_id_;
};

/// Flow path: head-to-tail contiguous edge sequence from a source to a sink,
/// with no edge repeated.
struct FlowPath {
    std::vector<EdgeId> edges;

    friend bool operator==(const FlowPath&, const FlowPath&) = default;
    friend auto operator<=>(const FlowPath&, const FlowPath&) = default;
};

/// Throws ValidationError naming the first violated path invariant.
void validate_path(const Network& net, const FlowPath& path);

/// Nodes touched by the path in traversal order (tail of the first edge,
/// then every head).
std::vector<NodeId> path_nodes(const Network& net, const FlowPath& path);

/// Parses and validates a scenario document (JSON).
Network load_scenario(std::string_view text);
Network load_scenario_file(const std::string& path);
std::string dump_scenario(const Network& net);

/// Maximum flow value from the source set to `sink` under edge capacities.
/// Exact (augmenting paths over rational capacities). Throws ValidationError
/// if `sink` is not a sink or is itself a source (unbounded).
Rational max_flow(const Network& net, NodeId sink);

/// Every edge-simple source-to-sink path with at most `max_len` edges.
/// Paths may pass through other sinks. Sorted lexicographically by edge index.
std::vector<FlowPath> enumerate_paths(const Network& net, std::size_t max_len);

}  // namespace rnf
