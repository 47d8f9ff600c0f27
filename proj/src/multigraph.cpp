#include "eult/multigraph.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <sstream>

namespace eult {

Multigraph::Multigraph(std::vector<std::string> names, std::vector<EdgeRecord> recs)
    : names_(std::move(names)), edges_(std::move(recs)) {
    const NodeId n = static_cast<NodeId>(names_.size());
    name_to_id_.reserve(names_.size());
    for (NodeId v = 0; v < n; ++v) name_to_id_.emplace(names_[v], v);

    out_adj_.assign(n, {});
    in_adj_.assign(n, {});
    out_deg_.assign(n, 0);
    in_deg_.assign(n, 0);
    copy_base_.resize(edges_.size());

    for (size_t i = 0; i < edges_.size(); ++i) {
        EdgeRecord& r = edges_[i];
        r.id = static_cast<EdgeId>(i);
        assert(r.multiplicity >= 1);
        assert(r.tail >= 0 && r.tail < n && r.head >= 0 && r.head < n);
        out_adj_[r.tail].push_back(r.id);
        in_adj_[r.head].push_back(r.id);
        out_deg_[r.tail] += r.multiplicity;
        in_deg_[r.head] += r.multiplicity;
        copy_base_[i] = static_cast<CopyId>(m_total_);
        m_total_ += r.multiplicity;
    }
    copy_to_edge_.resize(m_total_);
    for (size_t i = 0; i < edges_.size(); ++i)
        for (int64_t k = 0; k < edges_[i].multiplicity; ++k)
            copy_to_edge_[copy_base_[i] + k] = static_cast<EdgeId>(i);
}

std::optional<NodeId> Multigraph::find_node(const std::string& name) const {
    auto it = name_to_id_.find(name);
    if (it == name_to_id_.end()) return std::nullopt;
    return it->second;
}

bool Multigraph::is_simple() const {
    for (const EdgeRecord& r : edges_)
        if (r.multiplicity != 1 || r.tail == r.head) return false;
    // Parallel records would have been merged by compact_multiplicities, but
    // a hand-built edge list may still carry them.
    std::vector<std::pair<NodeId, NodeId>> pairs;
    pairs.reserve(edges_.size());
    for (const EdgeRecord& r : edges_) pairs.emplace_back(r.tail, r.head);
    std::sort(pairs.begin(), pairs.end());
    return std::adjacent_find(pairs.begin(), pairs.end()) == pairs.end();
}

Multigraph compact_multiplicities(std::vector<std::string> names,
                                  const std::vector<EdgeRecord>& raw) {
    std::unordered_map<int64_t, size_t> seen;   // (tail, head) -> record index
    std::vector<EdgeRecord> recs;
    recs.reserve(raw.size());
    for (const EdgeRecord& r : raw) {
        const int64_t key = (static_cast<int64_t>(r.tail) << 32) |
                            static_cast<uint32_t>(r.head);
        auto [it, fresh] = seen.emplace(key, recs.size());
        if (fresh) {
            recs.push_back(r);
        } else {
            recs[it->second].multiplicity += r.multiplicity;
        }
    }
    return Multigraph(std::move(names), std::move(recs));
}

namespace {

struct RawParse {
    std::vector<std::string> names;
    std::unordered_map<std::string, NodeId> ids;
    std::vector<EdgeRecord> recs;

    NodeId intern(const std::string& tok) {
        auto [it, fresh] = ids.emplace(tok, static_cast<NodeId>(names.size()));
        if (fresh) names.push_back(tok);
        return it->second;
    }
};

}  // namespace

Multigraph parse_edge_list(std::istream& in, bool simple_mode) {
    RawParse p;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        std::istringstream ls(line);
        std::string tail_tok, head_tok, mult_tok, extra;
        if (!(ls >> tail_tok)) continue;   // blank line
        if (!(ls >> head_tok))
            throw ParseError("line " + std::to_string(lineno) + ": missing head node");
        int64_t mult = 1;
        if (ls >> mult_tok) {
            size_t used = 0;
            try {
                mult = std::stoll(mult_tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != mult_tok.size())
                throw ParseError("line " + std::to_string(lineno) +
                                 ": bad multiplicity '" + mult_tok + "'");
            if (mult < 1)
                throw ParseError("line " + std::to_string(lineno) +
                                 ": multiplicity must be positive");
            if (ls >> extra)
                throw ParseError("line " + std::to_string(lineno) + ": trailing tokens");
        }
        const NodeId t = p.intern(tail_tok);
        const NodeId h = p.intern(head_tok);
        if (simple_mode) {
            if (t == h)
                throw ParseError("self-loop at line " + std::to_string(lineno));
            if (mult > 1)
                throw ParseError("parallel edge at line " + std::to_string(lineno));
            for (const EdgeRecord& r : p.recs)
                if (r.tail == t && r.head == h)
                    throw ParseError("parallel edge at line " + std::to_string(lineno));
        }
        p.recs.push_back(EdgeRecord{-1, t, h, mult});
    }
    return compact_multiplicities(std::move(p.names), p.recs);
}

Multigraph parse_edge_list(const std::string& text, bool simple_mode) {
    std::istringstream in(text);
    return parse_edge_list(in, simple_mode);
}

std::string write_edge_list(const Multigraph& g) {
    std::string out;
    for (const EdgeRecord& r : g.edges()) {
        out += g.name(r.tail);
        out += ' ';
        out += g.name(r.head);
        if (r.multiplicity > 1) {
            out += ' ';
            out += std::to_string(r.multiplicity);
        }
        out += '\n';
    }
    return out;
}

bool weakly_connected(const Multigraph& g) {
    const NodeId n = g.node_count();
    std::vector<NodeId> stack;
    std::vector<char> seen(n, 0);
    NodeId start = -1;
    for (NodeId v = 0; v < n; ++v)
        if (g.out_degree(v) + g.in_degree(v) > 0) { start = v; break; }
    if (start < 0) return true;   // no edges at all
    stack.push_back(start);
    seen[start] = 1;
    while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (EdgeId e : g.out_edges(v))
            if (!seen[g.edge(e).head]) { seen[g.edge(e).head] = 1; stack.push_back(g.edge(e).head); }
        for (EdgeId e : g.in_edges(v))
            if (!seen[g.edge(e).tail]) { seen[g.edge(e).tail] = 1; stack.push_back(g.edge(e).tail); }
    }
    for (NodeId v = 0; v < n; ++v)
        if (!seen[v] && g.out_degree(v) + g.in_degree(v) > 0) return false;
    return true;
}

SccPartition tarjan_scc(const Multigraph& g) {
    const NodeId n = g.node_count();
    SccPartition part;
    part.component_of.assign(n, -1);

    std::vector<int32_t> index(n, -1), low(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<NodeId> scc_stack;
    int32_t next_index = 0;

    // Explicit DFS frames: (node, position in its out list).
    struct Frame { NodeId v; size_t i; };
    std::vector<Frame> frames;

    for (NodeId root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        frames.push_back({root, 0});
        index[root] = low[root] = next_index++;
        scc_stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            const auto& outs = g.out_edges(f.v);
            if (f.i < outs.size()) {
                const NodeId w = g.edge(outs[f.i++]).head;
                if (index[w] == -1) {
                    index[w] = low[w] = next_index++;
                    scc_stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                const NodeId v = f.v;
                frames.pop_back();
                if (!frames.empty())
                    low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    const int32_t comp = part.component_count++;
                    while (true) {
                        const NodeId w = scc_stack.back();
                        scc_stack.pop_back();
                        on_stack[w] = 0;
                        part.component_of[w] = comp;
                        if (w == v) break;
                    }
                }
            }
        }
    }
    return part;
}

std::vector<EdgeId> crossings_static(const Multigraph& g) {
    const SccPartition part = tarjan_scc(g);
    std::vector<EdgeId> out;
    for (const EdgeRecord& r : g.edges())
        if (part.component_of[r.tail] != part.component_of[r.head])
            out.push_back(r.id);
    return out;
}

EulerInfo check_eulerian(const Multigraph& g, std::optional<NodeId> requested_start) {
    EulerInfo info;
    if (g.total_multiplicity() == 0) {
        info.reason = "empty graph";
        return info;
    }
    NodeId surplus_out = -1, surplus_in = -1;
    for (NodeId v = 0; v < g.node_count(); ++v) {
        const int64_t d = g.out_degree(v) - g.in_degree(v);
        if (d == 0) continue;
        if (d == 1 && surplus_out < 0) {
            surplus_out = v;
        } else if (d == -1 && surplus_in < 0) {
            surplus_in = v;
        } else {
            info.reason = d > 0 ? "two nodes with out-surplus or surplus > 1"
                                : "two nodes with in-surplus or surplus > 1";
            return info;
        }
    }
    if ((surplus_out < 0) != (surplus_in < 0)) {
        info.reason = "unbalanced degree totals";
        return info;
    }
    if (!weakly_connected(g)) {
        info.reason = "graph is not weakly connected";
        return info;
    }

    if (surplus_out >= 0) {
        info.kind = TrailKind::OpenTrail;
        info.source = surplus_out;
        info.target = surplus_in;
        if (requested_start && *requested_start != surplus_out) {
            info.reason = "start node must be " + g.name(surplus_out) +
                          " for this graph";
            return info;
        }
    } else {
        info.kind = TrailKind::Circuit;
        NodeId start = -1;
        if (requested_start) {
            if (g.out_degree(*requested_start) + g.in_degree(*requested_start) == 0) {
                info.reason = "requested start node is isolated";
                return info;
            }
            start = *requested_start;
        } else {
            for (NodeId v = 0; v < g.node_count(); ++v)
                if (g.out_degree(v) > 0) { start = v; break; }
        }
        info.source = info.target = start;
    }
    info.feasible = true;
    return info;
}

SubdivisionResult subdivide(const Multigraph& g) {
    std::vector<std::string> names = g.names();
    std::vector<EdgeRecord> recs;
    std::vector<CopyId> back;
    recs.reserve(2 * g.total_multiplicity());
    back.reserve(2 * g.total_multiplicity());
    for (const EdgeRecord& r : g.edges()) {
        for (int64_t k = 0; k < r.multiplicity; ++k) {
            const CopyId copy = g.copy_base(r.id) + static_cast<CopyId>(k);
            const NodeId mid = static_cast<NodeId>(names.size());
            names.push_back("__s" + std::to_string(copy));
            recs.push_back(EdgeRecord{-1, r.tail, mid, 1});
            back.push_back(copy);
            recs.push_back(EdgeRecord{-1, mid, r.head, 1});
            back.push_back(copy);
        }
    }
    return SubdivisionResult{Multigraph(std::move(names), std::move(recs)),
                             std::move(back)};
}

}  // namespace eult
