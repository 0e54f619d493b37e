#pragma once

#include "seqcomplex/classes.hpp"
#include "seqcomplex/rational.hpp"
#include "seqcomplex/trees.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace seqcomplex {

// Depth-d domain tree plus the real-valued witness tree: for every sign path
// some row clears the margin eps_t * (f(x_t(eps)) - s_t(eps)) >= alpha/2 at
// every level.
struct ShatterCertificate {
    DomainTree tree;
    RealTree witness;
    Rat alpha;
};

// Shared memo for fat-dimension queries against one (class, alpha) pair.
// Version spaces are row bitsets, so |F| <= 64 in exact mode. Candidate
// thresholds per point are midpoints (u+v)/2 of attained values u <= v:
// a maximal split (A, B) is determined by a* = max A, b* = min B, and
// (a*+b*)/2 lies in the feasible interval [a*+alpha/2, b*-alpha/2] whenever
// that interval is nonempty, so midpoints lose nothing.
struct FatDimCache {
    Rat alpha;
    // Per point: sorted distinct values with, per candidate threshold, the
    // masks of rows f(x) <= s - alpha/2 and f(x) >= s + alpha/2.
    struct Candidate {
        Rat threshold;
        std::uint64_t low_mask;
        std::uint64_t high_mask;
    };
    std::vector<std::vector<Candidate>> candidates;  // indexed by point
    std::unordered_map<std::uint64_t, int> memo;

    FatDimCache(const FunctionClass& cls, const Rat& alpha);
};

// Exact Littlestone dimension of a binary class.
int ldim(const FunctionClass& cls);

// Exact sequential fat-shattering dimension at scale alpha > 0.
int fat_dim(const FunctionClass& cls, const Rat& alpha);

// Fat dimension of the row subset given by `mask`, sharing `cache`.
// Empty mask yields -1: an empty version space shatters nothing, and the
// Fat-SOA argmax must prefer any nonempty restriction over an empty one
// (otherwise the mistake bound fails already for singleton classes).
int fat_dim_mask(const FunctionClass& cls, std::uint64_t mask, FatDimCache& cache);

// Exact truth of the shattering definition by 2^d path enumeration; the
// independent oracle for the recursions above.
bool check_certificate(const FunctionClass& cls, const ShatterCertificate& cert);

// Certificate of depth fat_dim(cls, alpha) >= 1, built from the recursion
// transcript; always passes check_certificate.
ShatterCertificate extract_shattered_tree(const FunctionClass& cls, const Rat& alpha);

std::uint64_t full_mask(const FunctionClass& cls);

}  // namespace seqcomplex
