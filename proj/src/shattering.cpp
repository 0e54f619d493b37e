#include "seqcomplex/shattering.hpp"

#include <algorithm>
#include <bit>

namespace seqcomplex {

std::uint64_t full_mask(const FunctionClass& cls) {
    if (cls.size() > 64) throw CapacityError("exact shattering supports at most 64 rows");
    return cls.size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << cls.size()) - 1;
}

FatDimCache::FatDimCache(const FunctionClass& cls, const Rat& a) : alpha(a) {
    if (alpha <= 0) throw std::domain_error("fat_dim: alpha must be positive");
    (void)full_mask(cls);
    Rat half = alpha / 2;
    candidates.resize(cls.domain_size);
    for (int x = 0; x < cls.domain_size; ++x) {
        std::vector<Rat> vals;
        for (int f = 0; f < cls.size(); ++f) vals.push_back(cls.value(f, x));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        std::vector<Rat> thresholds;
        for (std::size_t i = 0; i < vals.size(); ++i)
            for (std::size_t j = i; j < vals.size(); ++j)
                thresholds.push_back((vals[i] + vals[j]) / 2);
        std::sort(thresholds.begin(), thresholds.end());
        thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());
        for (const Rat& s : thresholds) {
            Candidate c{s, 0, 0};
            for (int f = 0; f < cls.size(); ++f) {
                Rat v = cls.value(f, x);
                if (v <= s - half) c.low_mask |= std::uint64_t{1} << f;
                if (v >= s + half) c.high_mask |= std::uint64_t{1} << f;
            }
            if (c.low_mask && c.high_mask) candidates[x].push_back(c);
        }
    }
}

int fat_dim_mask(const FunctionClass& cls, std::uint64_t mask, FatDimCache& cache) {
    if (mask == 0) return -1;
    if (std::popcount(mask) == 1) return 0;
    auto it = cache.memo.find(mask);
    if (it != cache.memo.end()) return it->second;
    int best = 0;
    for (int x = 0; x < cls.domain_size; ++x) {
        for (const auto& c : cache.candidates[x]) {
            std::uint64_t lo = c.low_mask & mask;
            std::uint64_t hi = c.high_mask & mask;
            if (!lo || !hi) continue;
            int d = 1 + std::min(fat_dim_mask(cls, lo, cache), fat_dim_mask(cls, hi, cache));
            best = std::max(best, d);
        }
    }
    cache.memo.emplace(mask, best);
    return best;
}

int fat_dim(const FunctionClass& cls, const Rat& alpha) {
    if (cls.size() == 0) throw StructureError("fat_dim: empty class");
    FatDimCache cache(cls, alpha);
    return fat_dim_mask(cls, full_mask(cls), cache);
}

int ldim(const FunctionClass& cls) {
    if (cls.kind != ClassKind::Binary) throw KindError("ldim requires a binary class");
    if (cls.size() == 0) throw StructureError("ldim: empty class");
    std::uint64_t full = full_mask(cls);
    // Sign-restriction masks per point.
    std::vector<std::uint64_t> neg(cls.domain_size, 0), pos(cls.domain_size, 0);
    for (int x = 0; x < cls.domain_size; ++x)
        for (int f = 0; f < cls.size(); ++f)
            (cls.table[f][x] > 0 ? pos[x] : neg[x]) |= std::uint64_t{1} << f;
    std::unordered_map<std::uint64_t, int> memo;
    auto rec = [&](auto&& self, std::uint64_t mask) -> int {
        if (std::popcount(mask) <= 1) return 0;
        auto it = memo.find(mask);
        if (it != memo.end()) return it->second;
        int best = 0;
        for (int x = 0; x < cls.domain_size; ++x) {
            std::uint64_t lo = neg[x] & mask, hi = pos[x] & mask;
            if (!lo || !hi) continue;
            best = std::max(best, 1 + std::min(self(self, lo), self(self, hi)));
        }
        memo.emplace(mask, best);
        return best;
    };
    return rec(rec, full);
}

bool check_certificate(const FunctionClass& cls, const ShatterCertificate& cert) {
    int d = cert.tree.depth;
    if (cert.witness.depth != d) throw StructureError("certificate depths differ");
    if (d > 25) throw CapacityError("check_certificate: depth over enumeration budget");
    Rat half = cert.alpha / 2;
    for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << d); ++bits) {
        SignPath eps = SignPath::from_bits(bits, d);
        bool found = false;
        for (int f = 0; f < cls.size() && !found; ++f) {
            bool ok = true;
            for (int t = 1; t <= d && ok; ++t) {
                Rat margin = cls.value(f, eval_path(cert.tree, eps, t)) -
                             eval_path(cert.witness, eps, t);
                if (eps.at(t) < 0) margin = -margin;
                ok = margin >= half;
            }
            found = ok;
        }
        if (!found) return false;
    }
    return true;
}

namespace {

// Builds a depth-d certificate under `mask`: pick any (x, s) whose split
// keeps dimension >= d-1 on both sides, then recurse.
std::pair<DomainTree, RealTree> extract_rec(const FunctionClass& cls, std::uint64_t mask,
                                            int depth, FatDimCache& cache) {
    if (depth == 0) return {DomainTree(0, {}), RealTree(0, {})};
    for (int x = 0; x < cls.domain_size; ++x) {
        for (const auto& c : cache.candidates[x]) {
            std::uint64_t lo = c.low_mask & mask;
            std::uint64_t hi = c.high_mask & mask;
            if (!lo || !hi) continue;
            if (std::min(fat_dim_mask(cls, lo, cache), fat_dim_mask(cls, hi, cache)) < depth - 1)
                continue;
            auto [ltree, lwit] = extract_rec(cls, lo, depth - 1, cache);
            auto [rtree, rwit] = extract_rec(cls, hi, depth - 1, cache);
            return {join(x, ltree, rtree), join(c.threshold, lwit, rwit)};
        }
    }
    throw StructureError("extract_shattered_tree: recursion invariant violated");
}

}  // namespace

ShatterCertificate extract_shattered_tree(const FunctionClass& cls, const Rat& alpha) {
    FatDimCache cache(cls, alpha);
    int d = fat_dim_mask(cls, full_mask(cls), cache);
    if (d < 1) throw std::domain_error("extract_shattered_tree: fat dimension is 0");
    auto [tree, witness] = extract_rec(cls, full_mask(cls), d, cache);
    return ShatterCertificate{std::move(tree), std::move(witness), alpha};
}

}  // namespace seqcomplex
