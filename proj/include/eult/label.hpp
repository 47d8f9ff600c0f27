#ifndef EULT_LABEL_HPP
#define EULT_LABEL_HPP

#include <cstdint>
#include <vector>

#include "eult/multigraph.hpp"

namespace eult {

using LabelId = int32_t;
inline constexpr LabelId kNoLabel = -1;

// Append-only arena of immutable label nodes. A label is either a single
// original edge copy or the concatenation of two labels; concatenation is
// O(1) and shares structure. Nodes are never freed while an enumeration is
// alive, so label ids stored in journals and state trees stay valid across
// rewinds.
class LabelArena {
public:
    LabelId leaf(CopyId copy, NodeId first_tail, NodeId last_head) {
        nodes_.push_back(Node{kNoLabel, kNoLabel, copy, 1, first_tail, last_head});
        return static_cast<LabelId>(nodes_.size() - 1);
    }

    LabelId concat(LabelId a, LabelId b) {
        if (a == kNoLabel) return b;
        if (b == kNoLabel) return a;
        nodes_.push_back(Node{a, b, -1, nodes_[a].length + nodes_[b].length,
                              nodes_[a].first_tail, nodes_[b].last_head});
        return static_cast<LabelId>(nodes_.size() - 1);
    }

    bool is_leaf(LabelId l) const { return nodes_[l].left == kNoLabel; }
    CopyId leaf_copy(LabelId l) const { return nodes_[l].copy; }
    LabelId left(LabelId l) const { return nodes_[l].left; }
    LabelId right(LabelId l) const { return nodes_[l].right; }
    int64_t length(LabelId l) const { return l == kNoLabel ? 0 : nodes_[l].length; }
    NodeId first_tail(LabelId l) const { return nodes_[l].first_tail; }
    NodeId last_head(LabelId l) const { return nodes_[l].last_head; }
    CopyId first_copy(LabelId l) const {
        while (!is_leaf(l)) l = nodes_[l].left;
        return nodes_[l].copy;
    }

    // Left-to-right copy ids; linear in output length.
    void expand(LabelId l, std::vector<CopyId>& out) const {
        if (l == kNoLabel) return;
        std::vector<LabelId> stack{l};
        while (!stack.empty()) {
            const LabelId x = stack.back();
            stack.pop_back();
            if (is_leaf(x)) {
                out.push_back(nodes_[x].copy);
            } else {
                stack.push_back(nodes_[x].right);
                stack.push_back(nodes_[x].left);
            }
        }
    }

    std::vector<CopyId> expand(LabelId l) const {
        std::vector<CopyId> out;
        out.reserve(static_cast<size_t>(length(l)));
        expand(l, out);
        return out;
    }

    size_t size() const { return nodes_.size(); }

private:
    struct Node {
        LabelId left, right;   // left == kNoLabel marks a leaf
        CopyId copy;
        int64_t length;
        NodeId first_tail;     // original endpoints of the expansion
        NodeId last_head;
    };
    std::vector<Node> nodes_;
};

}  // namespace eult

#endif
