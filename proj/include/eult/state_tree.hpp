#ifndef EULT_STATE_TREE_HPP
#define EULT_STATE_TREE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eult/compressed_graph.hpp"
#include "eult/counting.hpp"
#include "eult/label.hpp"
#include "eult/multigraph.hpp"

namespace eult {

using StateId = int32_t;

struct Transition {
    StateId parent = -1;
    StateId child = -1;
    EdgeId choice_edge = -1;   // first compressed edge of the fused run
    LabelId label = kNoLabel;
};

// Compressed output trie: branching states and leaves only; forced runs live
// inside transition labels, and the shared prefix before the first branching
// state is the root preamble.
struct StateTree {
    LabelId preamble = kNoLabel;
    std::vector<std::vector<int32_t>> children;   // state -> transition indices
    std::vector<char> is_leaf;                    // per state
    std::vector<Transition> transitions;
    int32_t leaf_count = 0;

    StateId root() const { return 0; }
    StateId add_state() {
        children.emplace_back();
        is_leaf.push_back(0);
        return static_cast<StateId>(children.size() - 1);
    }
};

// A finished enumeration: the trie plus everything needed to decode it.
// `engine_graph` is the graph the walker ran on (the subdivision in
// edge-distinct mode); label leaves are its copy ids.
struct EnumerationResult {
    TrailMode mode = TrailMode::Simple;
    Multigraph engine_graph;
    std::vector<CopyId> back_map;    // edge-distinct only
    LabelArena arena;
    StateTree tree;
    NodeId start_node = -1;
    StepCounters counters;
    bool cap_reached = false;
    int64_t input_units = 0;         // m_total of the input graph
};

// Depth-first trail emission, children ordered by the first original copy id
// of their transition label (node-distinct ties by expanded node sequence).
// Trails are original copy ids in Simple/EdgeDistinct modes and edge record
// ids in NodeDistinct mode. Every trail is checked to start at the start node
// and cover each unit exactly once.
void for_each_trail(const EnumerationResult& r,
                    const std::function<void(const std::vector<int32_t>&)>& emit);

std::vector<std::vector<int32_t>> decode_trails(const EnumerationResult& r);

// Node-name rendering of a node-distinct trail (record-id sequence).
std::string trail_to_node_names(const EnumerationResult& r,
                                const std::vector<int32_t>& record_seq);

std::string trail_to_edge_tokens(const std::vector<int32_t>& copy_seq);

enum class TrieFormat { Expanded, Shared };

std::string trie_emit(const EnumerationResult& r, TrieFormat format);
int64_t trie_shared_entry_count(const EnumerationResult& r);

std::string dot_export(const EnumerationResult& r);

}  // namespace eult

#endif
