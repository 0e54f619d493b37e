#include <doctest.h>

#include "seqcomplex/classes.hpp"
#include "seqcomplex/shattering.hpp"
#include "seqcomplex/trees.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

using namespace seqcomplex;

namespace {

// Direct transcription of the margin definition, walking heap indices on its
// own. Used as the oracle for everything in this file.
bool oracle_shatters(const FunctionClass& cls, const std::vector<int>& xs,
                     const std::vector<Rat>& ss, int d, const Rat& alpha) {
    Rat half = alpha / 2;
    for (std::uint32_t raw = 0; raw < (std::uint32_t{1} << d); ++raw) {
        bool found = false;
        for (int f = 0; f < cls.size() && !found; ++f) {
            bool ok = true;
            std::size_t node = 0;
            for (int t = 0; t < d && ok; ++t) {
                std::uint32_t bit = (raw >> t) & 1u;
                Rat margin = cls.value(f, xs[node]) - ss[node];
                if (!bit) margin = -margin;
                ok = margin >= half;
                node = 2 * node + 1 + bit;
            }
            found = ok;
        }
        if (!found) return false;
    }
    return true;
}

// Largest d <= max_d admitting a shattered tree, by enumerating every domain
// assignment and every witness assignment over a dense per-point grid
// (attained values, their pairwise midpoints, and alpha/2 shifts).
int fat_oracle(const FunctionClass& cls, const Rat& alpha, int max_d) {
    for (int d = max_d; d >= 1; --d) {
        std::size_t nodes = (std::size_t{1} << d) - 1;
        std::uint64_t ntrees = 1;
        for (std::size_t i = 0; i < nodes; ++i) ntrees *= cls.domain_size;
        std::vector<std::vector<Rat>> point_cands(cls.domain_size);
        for (int x = 0; x < cls.domain_size; ++x) {
            std::vector<Rat>& c = point_cands[x];
            for (int f = 0; f < cls.size(); ++f) {
                Rat v = cls.value(f, x);
                c.push_back(v);
                c.push_back(v - alpha / 2);
                c.push_back(v + alpha / 2);
                for (int g = 0; g < cls.size(); ++g)
                    c.push_back((v + cls.value(g, x)) / 2);
            }
            std::sort(c.begin(), c.end());
            c.erase(std::unique(c.begin(), c.end()), c.end());
        }
        for (std::uint64_t ti = 0; ti < ntrees; ++ti) {
            std::vector<int> xs(nodes);
            std::uint64_t rem = ti;
            for (std::size_t i = 0; i < nodes; ++i) {
                xs[i] = static_cast<int>(rem % cls.domain_size);
                rem /= cls.domain_size;
            }
            std::vector<std::size_t> pick(nodes, 0);
            for (;;) {
                std::vector<Rat> ss(nodes);
                for (std::size_t i = 0; i < nodes; ++i) ss[i] = point_cands[xs[i]][pick[i]];
                if (oracle_shatters(cls, xs, ss, d, alpha)) return d;
                std::size_t i = nodes;
                for (;;) {
                    if (i == 0) goto next_tree;
                    --i;
                    if (++pick[i] < point_cands[xs[i]].size()) break;
                    pick[i] = 0;
                }
            }
        next_tree:;
        }
    }
    return 0;
}

// Binary sign shattering: witness 0 everywhere at margin 1.
int ldim_oracle(const FunctionClass& cls, int max_d) {
    for (int d = max_d; d >= 1; --d) {
        std::size_t nodes = (std::size_t{1} << d) - 1;
        std::uint64_t ntrees = 1;
        for (std::size_t i = 0; i < nodes; ++i) ntrees *= cls.domain_size;
        for (std::uint64_t ti = 0; ti < ntrees; ++ti) {
            std::vector<int> xs(nodes);
            std::uint64_t rem = ti;
            for (std::size_t i = 0; i < nodes; ++i) {
                xs[i] = static_cast<int>(rem % cls.domain_size);
                rem /= cls.domain_size;
            }
            if (oracle_shatters(cls, xs, std::vector<Rat>(nodes, Rat(0)), d, Rat(2))) return d;
        }
    }
    return 0;
}

}  // namespace

TEST_CASE("fat_dim matches the brute-force oracle on small classes") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        FunctionClass cls = random_class(2, 4, ClassKind::RealGrid, 2, seed);
        for (const Rat& alpha : {Rat(1, 2), Rat(1)}) {
            int fast = fat_dim(cls, alpha);
            int slow = fat_oracle(cls, alpha, 2);
            CHECK(slow == std::min(fast, 2));
        }
    }
}

TEST_CASE("ldim matches the brute-force oracle on small binary classes") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        FunctionClass cls = random_class(3, 5, ClassKind::Binary, 0, seed);
        int fast = ldim(cls);
        int slow = ldim_oracle(cls, 2);
        CHECK(slow == std::min(fast, 2));
    }
    CHECK_THROWS_AS(ldim(random_class(2, 2, ClassKind::Levels, 2, 1)), KindError);
}

TEST_CASE("binary classes: fat dimension at full margin equals ldim") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        FunctionClass cls = random_class(3, 6, ClassKind::Binary, 0, seed);
        CHECK(fat_dim(cls, Rat(2)) == ldim(cls));
        CHECK(fat_dim(cls, Rat(1)) == ldim(cls));
    }
}

TEST_CASE("pinned dimensions of the named generators") {
    CHECK(ldim(thresholds_class(3)) == 2);
    CHECK(ldim(thresholds_class(7)) == 3);
    CHECK(ldim(full_binary_class(1)) == 1);
    CHECK(ldim(full_binary_class(2)) == 2);
    CHECK(ldim(full_binary_class(3)) == 3);
    CHECK(fat_dim(leaf_class(3), Rat(1)) == 1);
    CHECK(fat_dim(constants_class({Rat(-1), Rat(0), Rat(1)}), Rat(1)) == 1);
    CHECK(fat_dim(constants_class({Rat(-1), Rat(0), Rat(1)}), Rat(1, 2)) == 1);
    CHECK(fat_dim(constants_class({Rat(1, 2)}), Rat(1, 2)) == 0);
}

TEST_CASE("fat dimension is monotone nonincreasing in alpha") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        FunctionClass cls = random_class(3, 5, ClassKind::RealGrid, 2, seed);
        CHECK(fat_dim(cls, Rat(1)) <= fat_dim(cls, Rat(1, 2)));
        CHECK(fat_dim(cls, Rat(1, 2)) <= fat_dim(cls, Rat(1, 4)));
    }
}

TEST_CASE("empty and singleton version spaces") {
    FunctionClass cls = full_binary_class(2);
    FatDimCache cache(cls, Rat(1));
    CHECK(fat_dim_mask(cls, 0, cache) == -1);
    CHECK(fat_dim_mask(cls, 1, cache) == 0);
}

TEST_CASE("fat_dim_mask agrees with fat_dim of the row subset") {
    FunctionClass cls = random_class(2, 6, ClassKind::RealGrid, 2, 42);
    FatDimCache cache(cls, Rat(1, 2));
    std::vector<std::vector<int>> subsets{{0}, {0, 1}, {0, 2, 3}, {1, 2, 3, 4}};
    for (const auto& rows : subsets) {
        if (rows.back() >= cls.size()) continue;
        std::uint64_t mask = 0;
        for (int r : rows) mask |= std::uint64_t{1} << r;
        CHECK(fat_dim_mask(cls, mask, cache) == fat_dim(cls.subset(rows), Rat(1, 2)));
    }
}

TEST_CASE("extracted certificates pass both checkers at the claimed depth") {
    int found = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        FunctionClass cls = random_class(2, 5, ClassKind::RealGrid, 2, seed);
        Rat alpha(1, 2);
        int d = fat_dim(cls, alpha);
        if (d < 1) continue;
        ++found;
        ShatterCertificate cert = extract_shattered_tree(cls, alpha);
        CHECK(cert.tree.depth == d);
        CHECK(check_certificate(cls, cert));
        CHECK(oracle_shatters(cls, cert.tree.values, cert.witness.values, d, alpha));
        ShatterCertificate broken = cert;
        broken.witness.values[0] += 100;
        CHECK_FALSE(check_certificate(cls, broken));
    }
    CHECK(found > 0);
    CHECK_THROWS_AS(extract_shattered_tree(constants_class({Rat(0)}), Rat(1, 2)),
                    std::domain_error);
}
