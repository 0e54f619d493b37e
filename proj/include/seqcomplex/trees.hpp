#pragma once

#include "seqcomplex/errors.hpp"
#include "seqcomplex/rational.hpp"

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace seqcomplex {

// A path is T signs; sign t is read when descending from level t to t+1,
// so evaluation at level t consumes only the first t-1 signs.
struct SignPath {
    std::vector<int> signs;  // entries are -1 or +1

    SignPath() = default;
    explicit SignPath(std::vector<int> s);

    // Path from the low T bits of `bits`, bit t-1 carrying sign epsilon_t
    // (0 -> -1, 1 -> +1). Used to enumerate all 2^T paths by counting.
    static SignPath from_bits(std::uint32_t bits, int length);

    int length() const { return static_cast<int>(signs.size()); }
    int at(int t) const { return signs.at(static_cast<std::size_t>(t) - 1); }  // 1-based
    SignPath negated() const;
};

// Complete rooted binary tree of depth T stored as a flat heap-order array:
// node (t, prefix) sits at offset 2^{t-1} - 1 + prefix, where prefix packs
// signs epsilon_1..epsilon_{t-1} with epsilon_1 as the most significant bit
// and -1 -> 0, +1 -> 1. Immutable by convention after construction.
template <class V>
struct Tree {
    int depth = 0;
    std::vector<V> values;  // exactly 2^depth - 1 entries

    Tree() = default;
    Tree(int depth_, std::vector<V> values_) : depth(depth_), values(std::move(values_)) {
        if (depth < 0) throw StructureError("tree depth must be nonnegative");
        if (values.size() != node_count(depth))
            throw StructureError("tree value count must be 2^depth - 1");
    }

    static std::size_t node_count(int depth) { return (std::size_t{1} << depth) - 1; }

    static std::size_t node_offset(int t, std::uint32_t prefix) {
        return (std::size_t{1} << (t - 1)) - 1 + prefix;
    }

    const V& at(int t, std::uint32_t prefix) const { return values[node_offset(t, prefix)]; }
    V& at(int t, std::uint32_t prefix) { return values[node_offset(t, prefix)]; }

    bool operator==(const Tree&) const = default;
};

using DomainTree = Tree<int>;
using RealTree = Tree<Rat>;

namespace detail {
inline void check_eval_args(int depth, int path_len, int t) {
    if (t < 1 || t > depth) throw std::out_of_range("eval_path: round index out of range");
    if (path_len < t - 1) throw std::out_of_range("eval_path: path shorter than t-1");
}
}  // namespace detail

// Value x_t(eps); reads only the first t-1 signs.
template <class V>
const V& eval_path(const Tree<V>& x, const SignPath& eps, int t) {
    detail::check_eval_args(x.depth, eps.length(), t);
    std::uint32_t prefix = 0;
    for (int i = 1; i < t; ++i) prefix = (prefix << 1) | (eps.at(i) > 0 ? 1u : 0u);
    return x.at(t, prefix);
}

template <class V>
Tree<V> join(const V& root, const Tree<V>& left, const Tree<V>& right) {
    if (left.depth != right.depth) throw StructureError("join: subtree depths differ");
    int depth = left.depth + 1;
    std::vector<V> values;
    values.reserve(Tree<V>::node_count(depth));
    values.push_back(root);
    // Level t of the result interleaves left's and right's level t-1 blocks:
    // prefixes starting with bit 0 come from the left subtree.
    for (int t = 2; t <= depth; ++t) {
        std::size_t base = Tree<V>::node_offset(t - 1, 0);
        std::size_t width = std::size_t{1} << (t - 2);
        for (std::size_t i = 0; i < width; ++i) values.push_back(left.values[base + i]);
        for (std::size_t i = 0; i < width; ++i) values.push_back(right.values[base + i]);
    }
    return Tree<V>(depth, std::move(values));
}

// Left and right subtrees of depth T-1; inverse of join.
template <class V>
std::pair<Tree<V>, Tree<V>> split(const Tree<V>& x) {
    if (x.depth < 1) throw StructureError("split: empty tree");
    std::vector<V> left, right;
    left.reserve(Tree<V>::node_count(x.depth - 1));
    right.reserve(Tree<V>::node_count(x.depth - 1));
    for (int t = 2; t <= x.depth; ++t) {
        std::size_t base = Tree<V>::node_offset(t, 0);
        std::size_t width = std::size_t{1} << (t - 2);
        for (std::size_t i = 0; i < width; ++i) left.push_back(x.values[base + i]);
        for (std::size_t i = 0; i < width; ++i) right.push_back(x.values[base + width + i]);
    }
    return {Tree<V>(x.depth - 1, std::move(left)), Tree<V>(x.depth - 1, std::move(right))};
}

// Reflection: eval_path(reflect(x), eps, t) == eval_path(x, -eps, t).
// Negating every sign complements every prefix bit, so node (t, p) takes the
// value of node (t, ~p) within the level.
template <class V>
Tree<V> reflect(const Tree<V>& x) {
    Tree<V> out = x;
    for (int t = 1; t <= x.depth; ++t) {
        std::uint32_t width = std::uint32_t{1} << (t - 1);
        for (std::uint32_t p = 0; p < width; ++p) out.at(t, p) = x.at(t, width - 1 - p);
    }
    return out;
}

template <class V, class Fn>
auto apply_tree(const Tree<V>& x, Fn&& f) -> Tree<std::decay_t<decltype(f(x.values[0]))>> {
    using U = std::decay_t<decltype(f(x.values[0]))>;
    std::vector<U> values;
    values.reserve(x.values.size());
    for (const V& v : x.values) values.push_back(f(v));
    return Tree<U>(x.depth, std::move(values));
}

// Offsets of the nodes visited at levels 1..depth when the first depth-1
// signs pack `prefix` with the first sign as the most significant bit. Two
// paths sharing a prefix share the corresponding leading offsets, so node
// values along any full path depend only on these depth-1 bits.
inline std::vector<std::size_t> path_offsets(int depth, std::uint32_t prefix) {
    std::vector<std::size_t> out;
    out.reserve(depth);
    std::size_t node = 0;
    for (int t = 1; t <= depth; ++t) {
        out.push_back(node);
        if (t < depth) node = 2 * node + 1 + ((prefix >> (depth - 1 - t)) & 1u);
    }
    return out;
}

template <class V>
std::vector<V> path_values(const Tree<V>& x, std::uint32_t prefix) {
    std::vector<V> out;
    out.reserve(x.depth);
    for (std::size_t off : path_offsets(x.depth, prefix)) out.push_back(x.values[off]);
    return out;
}

// Img(x): sorted distinct node values.
std::vector<int> img(const DomainTree& x);

// n^(2^T - 1), saturating at uint64 max.
std::uint64_t tree_count(int domain_size, int depth);

// Depth-T tree whose node at storage offset i holds domain point i
// (the distinct-valued tree; needs domain_size >= 2^T - 1).
DomainTree identity_tree(int depth);

// All domain-valued trees in lexicographic storage order. Throws
// CapacityError when n^(2^T - 1) exceeds the budget.
void enumerate_trees(int domain_size, int depth, std::uint64_t budget,
                     const std::function<void(const DomainTree&)>& visit);

// Default enumeration budget; SEQCOMPLEX_BUDGET overrides.
std::uint64_t enumeration_budget();

}  // namespace seqcomplex
