#pragma once

#include "seqcomplex/classes.hpp"
#include "seqcomplex/rational.hpp"
#include "seqcomplex/trees.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace seqcomplex {

// Exact0 demands node equality along every path; the numeric norms use the
// length-normalized path distance (1/T sum |d_t|^p)^{1/p}, compared to the
// radius without leaving rationals (p=2 on squares, p=inf as a max).
enum class NormP { Exact0, L1, L2, Linf };

std::string norm_name(NormP p);
NormP norm_from_name(const std::string& name);

// dist(a, b) <= alpha, exactly.
bool within_radius(const std::vector<Rat>& a, const std::vector<Rat>& b, const Rat& alpha,
                   NormP p);

struct CoverSet {
    int depth = 0;
    NormP norm = NormP::Linf;
    Rat radius = 0;
    std::vector<RealTree> trees;
};

// Exact check of the covering property: every row, on every path, has a tree
// within the radius. The independent oracle for every construction below.
bool is_cover(const FunctionClass& cls, const DomainTree& x, const CoverSet& V);

struct ZeroCoverResult {
    std::size_t size = 0;
    CoverSet cover;
};

// Minimal 0-cover. Trees sharing a path with a row must equal it node-wise,
// so trees partition by root value and the minimum satisfies
//   N(F, x) = sum over root values c of max(N(F_c, left), N(F_c, right)),
// met by pairing the left and right covers index-wise (the recursion both
// proves the lower bound and materializes a witness cover).
ZeroCoverResult zero_cover_min(const FunctionClass& cls, const DomainTree& x);

enum class CoverMode { Exact, Greedy };

struct CoverResult {
    std::size_t size = 0;
    CoverSet cover;
    bool exact = false;
    // Exact search over L1/L2 restricts candidate node values to attained
    // values, their midpoints, and alpha/2 shifts, so the result is a true
    // minimum only over that grid. Linf feasibility is interval intersection,
    // which is lossless over arbitrary real trees.
    bool grid_restricted = false;
};

CoverResult cover_number(const FunctionClass& cls, const DomainTree& x, const Rat& alpha,
                         NormP p, CoverMode mode);

// Largest subset of distinct projections where every member has some path
// separating it from all others (weak), or one common path separates all
// pairs (strong). Separation is strict: dist > alpha.
std::size_t packing_number(const FunctionClass& cls, const DomainTree& x, const Rat& alpha,
                           NormP p);
std::size_t strong_packing_number(const FunctionClass& cls, const DomainTree& x,
                                  const Rat& alpha, NormP p);

enum class ConstructMode { Fat1, Fat2 };

// Constructive cover for levels(k) classes: partition by root value, recurse
// on the subtrees, pair the sub-covers index-wise. Fat1 builds a 0-cover.
// Fat2 builds an Linf cover at radius 1/(2k) (a half level): at most two
// root-value groups can carry the full fat dimension at two level units, and
// they are adjacent, so they merge under the root (i + 1/2)/k.
CoverSet cover_construct(const FunctionClass& cls, const DomainTree& x, ConstructMode mode);

// sum_{i=0}^{d} C(T, i) k^i; satisfies g(d,T) = g(d,T-1) + k g(d-1,T-1).
BigInt g_k(int d, int T, int k);

// (e k T / d)^d, an upper bound for g_k whenever T >= d (1 when d = 0).
double sauer_real_bound(int d, int T, int k);

struct PointwiseCover {
    std::size_t size = 0;
    // Per chosen center: its value at every domain point.
    std::vector<std::vector<Rat>> centers;
};

// Minimum number of functions on X within alpha of every row uniformly over
// all points. Exact mask set-cover for at most 12 rows, greedy beyond.
PointwiseCover pointwise_entropy(const FunctionClass& cls, const Rat& alpha);

// Piecewise-linear map over exact grid points, clamped outside the grid.
struct GridMap {
    std::vector<std::pair<Rat, Rat>> points;  // strictly increasing x

    explicit GridMap(std::vector<std::pair<Rat, Rat>> pts);
    Rat eval(const Rat& v) const;
    // |g(u) - g(v)| <= bound * |u - v|; for a clamped piecewise-linear map it
    // suffices that every segment slope obeys the bound.
    bool lipschitz(const Rat& bound) const;
};

// {g(v) : g in maps, v in V} at doubled radius: each map is within the
// pointwise radius of some g and carries the tree error with factor one.
CoverSet cover_compose(const std::vector<GridMap>& maps, const CoverSet& V);

}  // namespace seqcomplex
