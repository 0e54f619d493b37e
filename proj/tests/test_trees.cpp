#include <doctest.h>

#include "seqcomplex/trees.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <vector>

using namespace seqcomplex;

namespace {

// Independent nested-node representation used as the evaluation oracle.
struct NodeO {
    int value = 0;
    std::unique_ptr<NodeO> left, right;
};

int gen_value(int t, const std::vector<int>& bits, int domain_size) {
    long long h = t * 131;
    long long w = 7;
    for (int b : bits) {
        h += b * w;
        w *= 7;
    }
    return static_cast<int>(h % domain_size);
}

std::unique_ptr<NodeO> build_nested(int t, int depth, std::vector<int>& bits, int domain_size) {
    if (t > depth) return nullptr;
    auto node = std::make_unique<NodeO>();
    node->value = gen_value(t, bits, domain_size);
    bits.push_back(0);
    node->left = build_nested(t + 1, depth, bits, domain_size);
    bits.back() = 1;
    node->right = build_nested(t + 1, depth, bits, domain_size);
    bits.pop_back();
    return node;
}

int walk_nested(const NodeO* root, const SignPath& eps, int t) {
    const NodeO* cur = root;
    for (int i = 1; i < t; ++i) cur = eps.at(i) > 0 ? cur->right.get() : cur->left.get();
    return cur->value;
}

DomainTree build_flat(int depth, int domain_size) {
    std::vector<int> values(DomainTree::node_count(depth));
    for (int t = 1; t <= depth; ++t) {
        for (std::uint32_t prefix = 0; prefix < (std::uint32_t{1} << (t - 1)); ++prefix) {
            std::vector<int> bits;
            for (int i = t - 2; i >= 0; --i) bits.push_back((prefix >> i) & 1u);
            values[DomainTree::node_offset(t, prefix)] = gen_value(t, bits, domain_size);
        }
    }
    return DomainTree(depth, std::move(values));
}

}  // namespace

TEST_CASE("eval_path matches the nested-node oracle") {
    for (int depth = 1; depth <= 4; ++depth) {
        int n = 5;
        DomainTree flat = build_flat(depth, n);
        std::vector<int> bits;
        auto nested = build_nested(1, depth, bits, n);
        for (std::uint32_t raw = 0; raw < (std::uint32_t{1} << depth); ++raw) {
            SignPath eps = SignPath::from_bits(raw, depth);
            for (int t = 1; t <= depth; ++t)
                CHECK(eval_path(flat, eps, t) == walk_nested(nested.get(), eps, t));
        }
    }
}

TEST_CASE("eval_path reads only the first t-1 signs") {
    DomainTree x = build_flat(3, 4);
    SignPath a({-1, 1, -1});
    SignPath b({-1, 1, 1});
    for (int t = 1; t <= 3; ++t) CHECK(eval_path(x, a, t) == eval_path(x, b, t));
    SignPath shorty({-1, 1});
    CHECK(eval_path(x, shorty, 3) == eval_path(x, a, 3));
    CHECK_THROWS_AS(eval_path(x, shorty, 4), std::out_of_range);
    CHECK_THROWS_AS(eval_path(x, SignPath(std::vector<int>{}), 2), std::out_of_range);
}

TEST_CASE("sign path construction and negation") {
    SignPath p = SignPath::from_bits(0b101, 3);
    CHECK(p.at(1) == 1);
    CHECK(p.at(2) == -1);
    CHECK(p.at(3) == 1);
    SignPath q = p.negated();
    CHECK(q.at(1) == -1);
    CHECK(q.at(2) == 1);
    CHECK(q.at(3) == -1);
    CHECK_THROWS_AS(SignPath({0}), StructureError);
}

TEST_CASE("join places the left subtree under the minus branch") {
    DomainTree left = build_flat(2, 7);
    DomainTree right(2, {5, 6, 4});
    DomainTree x = join(9, left, right);
    CHECK(x.depth == 3);
    for (std::uint32_t raw = 0; raw < 8; ++raw) {
        SignPath eps = SignPath::from_bits(raw, 3);
        SignPath tail({eps.at(2), eps.at(3)});
        CHECK(eval_path(x, eps, 1) == 9);
        const DomainTree& sub = eps.at(1) < 0 ? left : right;
        for (int t = 2; t <= 3; ++t) CHECK(eval_path(x, eps, t) == eval_path(sub, tail, t - 1));
    }
    auto [l2, r2] = split(x);
    CHECK(l2 == left);
    CHECK(r2 == right);
    CHECK_THROWS_AS(join(1, left, DomainTree(1, {3})), StructureError);
    CHECK_THROWS_AS(split(DomainTree(0, {})), StructureError);
}

TEST_CASE("reflect swaps every sign") {
    DomainTree x = build_flat(3, 6);
    DomainTree r = reflect(x);
    for (std::uint32_t raw = 0; raw < 8; ++raw) {
        SignPath eps = SignPath::from_bits(raw, 3);
        SignPath neg = eps.negated();
        for (int t = 1; t <= 3; ++t) CHECK(eval_path(r, eps, t) == eval_path(x, neg, t));
    }
    CHECK(reflect(r) == x);
}

TEST_CASE("img lists sorted distinct node values") {
    DomainTree x(2, {3, 1, 3});
    CHECK(img(x) == std::vector<int>{1, 3});
}

TEST_CASE("tree_count is n^(2^T - 1) and saturates") {
    CHECK(tree_count(2, 2) == 8);
    CHECK(tree_count(3, 2) == 27);
    CHECK(tree_count(1, 5) == 1);
    CHECK(tree_count(10, 5) == ~std::uint64_t{0});
}

TEST_CASE("identity_tree enumerates node offsets") {
    DomainTree x = identity_tree(3);
    CHECK(x.values.size() == 7);
    CHECK(eval_path(x, SignPath({-1, -1, -1}), 1) == 0);
    CHECK(eval_path(x, SignPath({-1, -1, -1}), 3) == 3);
    CHECK(eval_path(x, SignPath({1, 1, 1}), 3) == 6);
}

TEST_CASE("enumerate_trees covers every assignment exactly once in order") {
    std::vector<DomainTree> seen;
    enumerate_trees(2, 2, 100, [&](const DomainTree& t) { seen.push_back(t); });
    CHECK(seen.size() == 8);
    std::set<std::vector<int>> distinct;
    for (const auto& t : seen) distinct.insert(t.values);
    CHECK(distinct.size() == 8);
    CHECK(seen.front().values == std::vector<int>{0, 0, 0});
    CHECK(seen[1].values == std::vector<int>{0, 0, 1});
    CHECK(seen.back().values == std::vector<int>{1, 1, 1});
    CHECK_THROWS_AS(enumerate_trees(2, 3, 100, [](const DomainTree&) {}), CapacityError);
}

TEST_CASE("tree constructor validates the node count") {
    CHECK_THROWS_AS(DomainTree(2, {1, 2}), StructureError);
    CHECK_NOTHROW(DomainTree(0, {}));
}
