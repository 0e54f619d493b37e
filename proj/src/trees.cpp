#include "seqcomplex/trees.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

namespace seqcomplex {

SignPath::SignPath(std::vector<int> s) : signs(std::move(s)) {
    for (int v : signs)
        if (v != -1 && v != 1) throw StructureError("sign path entries must be -1 or +1");
}

SignPath SignPath::from_bits(std::uint32_t bits, int length) {
    SignPath p;
    p.signs.resize(length);
    for (int t = 0; t < length; ++t) p.signs[t] = (bits >> t) & 1u ? 1 : -1;
    return p;
}

SignPath SignPath::negated() const {
    SignPath p;
    p.signs.reserve(signs.size());
    for (int v : signs) p.signs.push_back(-v);
    return p;
}

std::vector<int> img(const DomainTree& x) {
    std::vector<int> out = x.values;
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::uint64_t tree_count(int domain_size, int depth) {
    std::uint64_t nodes = DomainTree::node_count(depth);
    std::uint64_t count = 1;
    for (std::uint64_t i = 0; i < nodes; ++i) {
        if (count > ~std::uint64_t{0} / static_cast<std::uint64_t>(domain_size))
            return ~std::uint64_t{0};
        count *= static_cast<std::uint64_t>(domain_size);
    }
    return count;
}

DomainTree identity_tree(int depth) {
    std::vector<int> values(DomainTree::node_count(depth));
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = static_cast<int>(i);
    return DomainTree(depth, std::move(values));
}

void enumerate_trees(int domain_size, int depth, std::uint64_t budget,
                     const std::function<void(const DomainTree&)>& visit) {
    if (domain_size < 1) throw StructureError("enumerate_trees: empty domain");
    std::uint64_t total = tree_count(domain_size, depth);
    if (total > budget)
        throw CapacityError("enumerate_trees: " + std::to_string(domain_size) + "^(2^" +
                            std::to_string(depth) +
                            "-1) trees exceed budget; use a heuristic mode");
    DomainTree tree(depth, std::vector<int>(DomainTree::node_count(depth), 0));
    for (;;) {
        visit(tree);
        // Odometer increment, last node fastest: lexicographic order overall.
        std::size_t i = tree.values.size();
        for (;;) {
            if (i == 0) return;
            --i;
            if (++tree.values[i] < domain_size) break;
            tree.values[i] = 0;
        }
    }
}

std::uint64_t enumeration_budget() {
    if (const char* env = std::getenv("SEQCOMPLEX_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(env, &end, 10);
        if (end && *end == '\0' && v > 0) return v;
    }
    return 10'000'000ULL;
}

}  // namespace seqcomplex
