#include "rainbow_net/network.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "rainbow_net/errors.hpp"

namespace rnf {

Network::Network(std::vector<std::string> nodes, const std::vector<EdgeSpec>& edges,
                 const std::vector<std::string>& sources, const std::vector<std::string>& sinks)
    : nodes_(std::move(nodes)) {
    for (NodeId v = 0; v < nodes_.size(); ++v) {
        if (!node_by_name_.emplace(nodes_[v], v).second)
            throw ValidationError("duplicate node '" + nodes_[v] + "'");
    }
    out_.resize(nodes_.size());
    in_.resize(nodes_.size());
    is_source_.assign(nodes_.size(), false);
    sink_pos_.assign(nodes_.size(), std::nullopt);

    for (const EdgeSpec& spec : edges) {
        auto tail = find_node(spec.tail);
        auto head = find_node(spec.head);
        if (!tail) throw ValidationError("edge '" + spec.id + "': undeclared tail node '" + spec.tail + "'");
        if (!head) throw ValidationError("edge '" + spec.id + "': undeclared head node '" + spec.head + "'");
        if (spec.capacity.is_negative()) throw ValidationError("edge '" + spec.id + "': negative capacity");
        const EdgeId e = edges_.size();
        if (!edge_by_id_.emplace(spec.id, e).second) throw ValidationError("duplicate edge id '" + spec.id + "'");
        edges_.push_back({spec.id, *tail, *head, spec.capacity});
        out_[*tail].push_back(e);
        in_[*head].push_back(e);
    }

    if (sources.empty()) throw ValidationError("source set is empty");
    if (sinks.empty()) throw ValidationError("sink set is empty");
    for (const auto& name : sources) {
        const NodeId v = node(name);
        if (is_source_[v]) throw ValidationError("duplicate source '" + name + "'");
        is_source_[v] = true;
        sources_.push_back(v);
    }
    for (const auto& name : sinks) {
        const NodeId v = node(name);
        if (sink_pos_[v]) throw ValidationError("duplicate sink '" + name + "'");
        sink_pos_[v] = sinks_.size();
        sinks_.push_back(v);
    }
}

NodeId Network::node(std::string_view name) const {
    if (auto v = find_node(name)) return *v;
    throw ValidationError("unknown node '" + std::string(name) + "'");
}

EdgeId Network::edge_index(std::string_view id) const {
    if (auto e = find_edge(id)) return *e;
    throw ValidationError("unknown edge '" + std::string(id) + "'");
}

std::optional<NodeId> Network::find_node(std::string_view name) const {
    auto it = node_by_name_.find(std::string(name));
    if (it == node_by_name_.end()) return std::nullopt;
    return it->second;
}

std::optional<EdgeId> Network::find_edge(std::string_view id) const {
    auto it = edge_by_id_.find(std::string(id));
    if (it == edge_by_id_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::size_t> Network::sink_position(NodeId v) const noexcept {
    return v < sink_pos_.size() ? sink_pos_[v] : std::nullopt;
}

std::vector<EdgeSpec> Network::edge_specs() const {
    std::vector<EdgeSpec> specs;
    specs.reserve(edges_.size());
    for (const Edge& e : edges_) specs.push_back({e.id, nodes_[e.tail], nodes_[e.head], e.capacity});
    return specs;
}

namespace {

std::vector<std::string> names_of(const Network& net, const std::vector<NodeId>& ids) {
    std::vector<std::string> out;
    for (NodeId v : ids) out.push_back(net.node_name(v));
    return out;
}

}  // namespace

Network Network::with_capacity(EdgeId e, Rational capacity) const {
    auto specs = edge_specs();
    specs.at(e).capacity = capacity;
    return Network(nodes_, specs, names_of(*this, sources_), names_of(*this, sinks_));
}

Network Network::without_edges(std::span<const EdgeId> removed) const {
    std::vector<EdgeSpec> specs;
    for (EdgeId e = 0; e < edges_.size(); ++e) {
        if (std::find(removed.begin(), removed.end(), e) != removed.end()) continue;
        const Edge& edge = edges_[e];
        specs.push_back({edge.id, nodes_[edge.tail], nodes_[edge.head], edge.capacity});
    }
    return Network(nodes_, specs, names_of(*this, sources_), names_of(*this, sinks_));
}

void validate_path(const Network& net, const FlowPath& path) {
    if (path.edges.empty()) throw ValidationError("flow path has no edges");
    for (EdgeId e : path.edges) {
        if (e >= net.edge_count()) throw ValidationError("flow path references edge index " + std::to_string(e) + " outside the network");
    }
    const Edge& first = net.edge(path.edges.front());
    if (!net.is_source(first.tail))
        throw ValidationError("flow path starts at '" + net.node_name(first.tail) + "', which is not a source");
    for (std::size_t i = 1; i < path.edges.size(); ++i) {
        const Edge& prev = net.edge(path.edges[i - 1]);
        const Edge& cur = net.edge(path.edges[i]);
        if (prev.head != cur.tail)
            throw ValidationError("flow path not contiguous between edges '" + prev.id + "' and '" + cur.id + "'");
    }
    const Edge& last = net.edge(path.edges.back());
    if (!net.sink_position(last.head))
        throw ValidationError("flow path ends at '" + net.node_name(last.head) + "', which is not a sink");
    std::vector<EdgeId> sorted = path.edges;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw ValidationError("flow path repeats an edge");
}

std::vector<NodeId> path_nodes(const Network& net, const FlowPath& path) {
    std::vector<NodeId> nodes;
    if (path.edges.empty()) return nodes;
    nodes.push_back(net.edge(path.edges.front()).tail);
    for (EdgeId e : path.edges) nodes.push_back(net.edge(e).head);
    return nodes;
}

Network load_scenario(std::string_view text) {
    using detail::json;
    const json doc = detail::parse_document(text, "scenario");
    if (!doc.is_object()) throw ParseError("scenario: top level must be an object");

    std::vector<std::string> nodes;
    const json& jnodes = detail::array_field(doc, "nodes", "scenario");
    for (std::size_t i = 0; i < jnodes.size(); ++i)
        nodes.push_back(detail::as_name(jnodes[i], "nodes[" + std::to_string(i) + "]"));

    std::vector<EdgeSpec> edges;
    const json& jedges = detail::array_field(doc, "edges", "scenario");
    for (std::size_t i = 0; i < jedges.size(); ++i) {
        const std::string ctx = "edges[" + std::to_string(i) + "]";
        const json& je = jedges[i];
        edges.push_back({detail::as_name(detail::field(je, "id", ctx), ctx + ".id"),
                         detail::as_name(detail::field(je, "tail", ctx), ctx + ".tail"),
                         detail::as_name(detail::field(je, "head", ctx), ctx + ".head"),
                         detail::as_rational(detail::field(je, "capacity", ctx), ctx + ".capacity")});
    }

    auto read_names = [&](const char* key) {
        std::vector<std::string> out;
        const json& arr = detail::array_field(doc, key, "scenario");
        for (std::size_t i = 0; i < arr.size(); ++i)
            out.push_back(detail::as_name(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
        return out;
    };
    return Network(std::move(nodes), edges, read_names("sources"), read_names("sinks"));
}

Network load_scenario_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

std::string dump_scenario(const Network& net) {
    using detail::json;
    json doc;
    doc["nodes"] = net.node_names();
    doc["edges"] = json::array();
    for (const Edge& e : net.edges())
        doc["edges"].push_back(
            {{"id", e.id}, {"tail", net.node_name(e.tail)}, {"head", net.node_name(e.head)}, {"capacity", e.capacity.to_string()}});
    doc["sources"] = json::array();
    for (NodeId v : net.sources()) doc["sources"].push_back(net.node_name(v));
    doc["sinks"] = json::array();
    for (NodeId v : net.sinks()) doc["sinks"].push_back(net.node_name(v));
    return doc.dump(2);
}

Rational max_flow(const Network& net, NodeId sink) {
    if (sink >= net.node_count() || !net.sink_position(sink))
        throw ValidationError("max_flow: node is not a sink");
    if (net.is_source(sink)) throw ValidationError("max_flow: sink '" + net.node_name(sink) + "' is a source; flow is unbounded");

    // Residual arcs: 2e is edge e forward, 2e+1 its reverse.
    const std::size_t m = net.edge_count();
    std::vector<Rational> residual(2 * m);
    std::vector<std::vector<std::size_t>> adj(net.node_count());
    for (EdgeId e = 0; e < m; ++e) {
        residual[2 * e] = net.edge(e).capacity;
        adj[net.edge(e).tail].push_back(2 * e);
        adj[net.edge(e).head].push_back(2 * e + 1);
    }
    auto arc_head = [&](std::size_t a) { return a % 2 == 0 ? net.edge(a / 2).head : net.edge(a / 2).tail; };

    Rational total;
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    for (;;) {
        // Shortest augmenting path from the whole source set (Edmonds-Karp).
        std::vector<std::size_t> parent(net.node_count(), kNone);
        std::vector<bool> seen(net.node_count(), false);
        std::deque<NodeId> queue;
        for (NodeId s : net.sources()) {
            seen[s] = true;
            queue.push_back(s);
        }
        while (!queue.empty() && !seen[sink]) {
            const NodeId u = queue.front();
            queue.pop_front();
            for (std::size_t a : adj[u]) {
                const NodeId v = arc_head(a);
                if (seen[v] || residual[a] <= Rational(0)) continue;
                seen[v] = true;
                parent[v] = a;
                queue.push_back(v);
            }
        }
        if (!seen[sink]) break;

        Rational bottleneck;
        bool first = true;
        for (NodeId v = sink; parent[v] != kNone; v = arc_head(parent[v] ^ 1)) {
            if (first || residual[parent[v]] < bottleneck) bottleneck = residual[parent[v]];
            first = false;
        }
        for (NodeId v = sink; parent[v] != kNone; v = arc_head(parent[v] ^ 1)) {
            residual[parent[v]] -= bottleneck;
            residual[parent[v] ^ 1] += bottleneck;
        }
        total += bottleneck;
    }
    return total;
}

std::vector<FlowPath> enumerate_paths(const Network& net, std::size_t max_len) {
    std::vector<FlowPath> paths;
    if (max_len == 0) return paths;
    std::vector<bool> used(net.edge_count(), false);
    std::vector<EdgeId> stack;

    auto extend = [&](auto&& self, NodeId at) -> void {
        for (EdgeId e : net.out_edges(at)) {
            if (used[e]) continue;
            used[e] = true;
            stack.push_back(e);
            const NodeId head = net.edge(e).head;
            if (net.sink_position(head)) paths.push_back(FlowPath{stack});
            if (stack.size() < max_len) self(self, head);
            stack.pop_back();
            used[e] = false;
        }
    };
    for (NodeId s : net.sources()) extend(extend, s);
    std::sort(paths.begin(), paths.end());
    return paths;
}

}  // namespace rnf
