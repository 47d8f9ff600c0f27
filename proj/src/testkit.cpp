#include "eult/testkit.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "eult/explore.hpp"

namespace eult {

namespace {

std::vector<EdgeRecord> superimpose_cycles(const GenSpec& spec, SplitMix64& rng) {
    std::vector<EdgeRecord> raw;
    std::unordered_map<int64_t, int64_t> pair_mult;
    std::vector<NodeId> cyc;
    for (int32_t c = 0; c < spec.cycles; ++c) {
        const int32_t span = spec.max_cycle_len - spec.min_cycle_len + 1;
        const int32_t len =
            spec.min_cycle_len + static_cast<int32_t>(rng.below(span));
        cyc.clear();
        for (int32_t i = 0; i < len; ++i) {
            NodeId v = static_cast<NodeId>(rng.below(spec.nodes));
            if (!cyc.empty() && v == cyc.back()) v = (v + 1) % spec.nodes;
            cyc.push_back(v);
        }
        if (cyc.front() == cyc.back()) cyc.back() = (cyc.back() + 1) % spec.nodes;
        bool ok = true;
        for (size_t i = 0; i < cyc.size() && ok; ++i) {
            const NodeId t = cyc[i], h = cyc[(i + 1) % cyc.size()];
            const int64_t key = (static_cast<int64_t>(t) << 32) | static_cast<uint32_t>(h);
            if (spec.simple && (t == h || pair_mult.count(key))) ok = false;
            if (!spec.simple && pair_mult[key] >= spec.multiplicity_cap) ok = false;
        }
        if (!ok) { --c; continue; }   // redraw this cycle
        for (size_t i = 0; i < cyc.size(); ++i) {
            const NodeId t = cyc[i], h = cyc[(i + 1) % cyc.size()];
            const int64_t key = (static_cast<int64_t>(t) << 32) | static_cast<uint32_t>(h);
            pair_mult[key]++;
            raw.push_back(EdgeRecord{-1, t, h, 1});
        }
    }
    return raw;
}

}  // namespace

Multigraph gen_random_eulerian(const GenSpec& spec) {
    if (spec.nodes < 2) throw std::invalid_argument("need at least 2 nodes");
    if (spec.cycles < 1) throw std::invalid_argument("need at least 1 cycle");

    std::vector<std::string> names;
    for (int32_t v = 0; v < spec.nodes; ++v) names.push_back("n" + std::to_string(v));

    uint64_t seed = spec.seed;
    for (int attempt = 0; attempt < 1000; ++attempt) {
        SplitMix64 rng(seed * 0x100000001b3ULL + 0xcbf29ce484222325ULL);
        Multigraph g = compact_multiplicities(names, superimpose_cycles(spec, rng));
        if (check_eulerian(g).feasible) return g;
        seed += 1;   // bounded retries, then reseed deterministically
    }
    throw std::runtime_error("could not generate a connected Eulerian instance");
}

Multigraph gen_debruijn(const std::string& text, int k) {
    if (k < 2 || static_cast<int>(text.size()) < k)
        throw std::invalid_argument("text must be at least k characters, k >= 2");
    std::vector<std::string> names;
    std::unordered_map<std::string, NodeId> ids;
    std::vector<EdgeRecord> raw;
    auto intern = [&](const std::string& mer) {
        auto [it, fresh] = ids.emplace(mer, static_cast<NodeId>(names.size()));
        if (fresh) names.push_back(mer);
        return it->second;
    };
    for (size_t i = 0; i + k <= text.size(); ++i) {
        const NodeId t = intern(text.substr(i, k - 1));
        const NodeId h = intern(text.substr(i + 1, k - 1));
        raw.push_back(EdgeRecord{-1, t, h, 1});
    }
    return compact_multiplicities(std::move(names), raw);
}

bool oracle_crossings_check(const Multigraph& g, NodeId v0,
                            const std::vector<CopyId>& walk) {
    // Engine rule on the original-granularity walk.
    std::vector<NodeId> tails;
    NodeId at = v0;
    for (CopyId c : walk) {
        const EdgeRecord& r = g.edge(g.copy_edge(c));
        if (r.tail != at) return false;
        tails.push_back(r.tail);
        at = r.head;
    }
    const std::vector<char> flags = last_departure_flags(tails, at);

    // Ground truth: SCCs of every remaining graph along the trail.
    std::vector<int64_t> remaining(g.edge_count());
    for (const EdgeRecord& r : g.edges()) remaining[r.id] = r.multiplicity;
    for (size_t i = 0; i < walk.size(); ++i) {
        std::vector<EdgeRecord> raw;
        for (const EdgeRecord& r : g.edges())
            if (remaining[r.id] > 0)
                raw.push_back(EdgeRecord{-1, r.tail, r.head, remaining[r.id]});
        const Multigraph rem = compact_multiplicities(g.names(), raw);
        const SccPartition scc = tarjan_scc(rem);
        const EdgeRecord& r = g.edge(g.copy_edge(walk[i]));
        const bool truth = scc.component_of[r.tail] != scc.component_of[r.head];
        if (truth != (flags[i] != 0)) return false;
        remaining[r.id]--;
    }
    return true;
}

}  // namespace eult
