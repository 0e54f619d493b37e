#pragma once

#include "seqcomplex/errors.hpp"
#include "seqcomplex/rational.hpp"
#include "seqcomplex/trees.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace seqcomplex {

enum class ClassKind { Binary, Levels, RealGrid };

std::string kind_name(ClassKind kind);
ClassKind kind_from_name(const std::string& name);

// Finite family of functions on domain points 0..n-1 with exact grid values.
// Entry v denotes the value v/scale. Binary rows live in {-S, +S}; levels(k)
// rows in {0, S/k, ..., S}; real-grid rows may span [-2S, 2S] (loss classes
// take values in [0, 2]). Duplicate rows are collapsed at construction.
struct FunctionClass {
    int domain_size = 0;
    long long scale = 1;
    ClassKind kind = ClassKind::RealGrid;
    int levels = 0;  // k, for Levels kind
    std::vector<std::vector<long long>> table;

    int size() const { return static_cast<int>(table.size()); }

    Rat value(int f, int x) const { return Rat(table[f][x], scale); }

    // Value in integer level units (0..k); Levels kind only.
    Rat level_value(int f, int x) const;

    // Largest |value| over the table, as a rational.
    Rat max_abs_value() const;

    std::vector<Rat> row_values(int f) const;

    // Projection f(x): the real tree of this row's values along the tree.
    RealTree project(int f, const DomainTree& x) const;

    FunctionClass subset(const std::vector<int>& rows) const;
};

FunctionClass make_class(int domain_size, long long scale, ClassKind kind, int levels,
                         std::vector<std::vector<long long>> rows);

// B_alpha = {-1 + alpha/2, -1 + 3*alpha/2, ...} while (2k+1)*alpha <= 4.
std::vector<Rat> alpha_grid(const Rat& alpha);

// Nearest grid point, ties toward the smaller point. Requires a in [-1, 1].
Rat floor_alpha(const Rat& a, const Rat& alpha);

// Row indices f of `subset` with f(x) in (r - alpha/2, r + alpha/2].
std::vector<int> restrict_rows(const FunctionClass& cls, const std::vector<int>& subset, int x,
                               const Rat& r, const Rat& alpha);

// V(r, x) as a class (may be empty; duplicate collapsing already done upstream).
FunctionClass restrict_class(const FunctionClass& cls, int x, const Rat& r, const Rat& alpha);

// Loss class over the product domain X x Y: row f at pair (x, y_j) holds
// |f(x) - y_j| exactly. Pair (x, j) maps to domain index x * |Y| + j.
FunctionClass supervised_loss_class(const FunctionClass& cls, const std::vector<Rat>& labels,
                                    long long scale_budget = 1'000'000'000);

// Generators. All deterministic; random_class keyed on (seed).
FunctionClass constants_class(const std::vector<Rat>& values);
FunctionClass thresholds_class(int domain_size);
FunctionClass full_binary_class(int domain_size);
// 2^{T-1} functions on the 2^T - 1 node indices of a depth-T tree, each 1 on
// one leaf offset and 0 elsewhere; pair with identity_tree(T).
FunctionClass leaf_class(int depth);
FunctionClass random_class(int domain_size, int rows, ClassKind kind, int param,
                           std::uint64_t seed);
// Functions x -> <w, x> over the given weight and point vectors, scaled so all
// values land in [-1, 1] when the norms are <= 1 (values are exact rationals).
FunctionClass linear_ball_class(const std::vector<std::vector<Rat>>& weights,
                                const std::vector<std::vector<Rat>>& points);

}  // namespace seqcomplex
