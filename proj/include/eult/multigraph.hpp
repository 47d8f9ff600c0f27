#ifndef EULT_MULTIGRAPH_HPP
#define EULT_MULTIGRAPH_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace eult {

using NodeId = int32_t;
using EdgeId = int32_t;
using CopyId = int32_t;

// One directed multi-edge: `multiplicity` parallel copies of tail->head.
struct EdgeRecord {
    EdgeId id = -1;
    NodeId tail = -1;
    NodeId head = -1;
    int64_t multiplicity = 1;
};

class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

// Immutable directed multigraph. Node ids are dense, assigned in first
// appearance order; edge copies are numbered consecutively per record.
class Multigraph {
public:
    Multigraph() = default;
    Multigraph(std::vector<std::string> names, std::vector<EdgeRecord> recs);

    NodeId node_count() const { return static_cast<NodeId>(names_.size()); }
    EdgeId edge_count() const { return static_cast<EdgeId>(edges_.size()); }
    int64_t total_multiplicity() const { return m_total_; }

    const std::string& name(NodeId v) const { return names_[v]; }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<NodeId> find_node(const std::string& name) const;

    const EdgeRecord& edge(EdgeId e) const { return edges_[e]; }
    const std::vector<EdgeRecord>& edges() const { return edges_; }
    const std::vector<EdgeId>& out_edges(NodeId v) const { return out_adj_[v]; }
    const std::vector<EdgeId>& in_edges(NodeId v) const { return in_adj_[v]; }

    int64_t out_degree(NodeId v) const { return out_deg_[v]; }   // multiplicity weighted
    int64_t in_degree(NodeId v) const { return in_deg_[v]; }

    bool is_simple() const;

    // Copies of edge e are [copy_base(e), copy_base(e) + multiplicity).
    CopyId copy_base(EdgeId e) const { return copy_base_[e]; }
    EdgeId copy_edge(CopyId c) const { return copy_to_edge_[c]; }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> name_to_id_;
    std::vector<EdgeRecord> edges_;
    std::vector<std::vector<EdgeId>> out_adj_, in_adj_;
    std::vector<int64_t> out_deg_, in_deg_;
    std::vector<CopyId> copy_base_;
    std::vector<EdgeId> copy_to_edge_;
    int64_t m_total_ = 0;
};

// Sums multiplicities of duplicate (tail, head) pairs; record order follows
// first appearance of each pair.
Multigraph compact_multiplicities(std::vector<std::string> names,
                                  const std::vector<EdgeRecord>& raw);

// Text format: one edge per line, `<tail> <head> [multiplicity]`, `#` comments.
// In simple mode, self-loops, parallel edges and multiplicities > 1 are errors.
Multigraph parse_edge_list(std::istream& in, bool simple_mode = false);
Multigraph parse_edge_list(const std::string& text, bool simple_mode = false);

// Canonical writer; parse(write(g)) reproduces g and write is idempotent
// on its own output.
std::string write_edge_list(const Multigraph& g);

bool weakly_connected(const Multigraph& g);

struct SccPartition {
    std::vector<int32_t> component_of;   // node -> component index
    int32_t component_count = 0;
};

SccPartition tarjan_scc(const Multigraph& g);

// Edge ids whose endpoints lie in different strongly connected components.
std::vector<EdgeId> crossings_static(const Multigraph& g);

enum class TrailKind { Circuit, OpenTrail };

struct EulerInfo {
    bool feasible = false;
    TrailKind kind = TrailKind::Circuit;
    NodeId source = -1;
    NodeId target = -1;
    std::string reason;   // set when infeasible or on start conflicts
};

// Euler feasibility with multiplicity-weighted degrees. For circuits the
// default start is the lowest-id node with positive degree.
EulerInfo check_eulerian(const Multigraph& g,
                         std::optional<NodeId> requested_start = std::nullopt);

struct SubdivisionResult {
    Multigraph graph;                  // simple graph, two halves per copy
    std::vector<CopyId> back_map;      // subdivided edge id -> original copy id
};

// Splits every multiplicity unit u->v into u->x, x->v with a fresh node x.
SubdivisionResult subdivide(const Multigraph& g);

}  // namespace eult

#endif
