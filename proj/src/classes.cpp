#include "seqcomplex/classes.hpp"

#include "seqcomplex/rng.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace seqcomplex {

std::string kind_name(ClassKind kind) {
    switch (kind) {
        case ClassKind::Binary: return "binary";
        case ClassKind::Levels: return "levels";
        case ClassKind::RealGrid: return "real-grid";
    }
    throw KindError("unknown class kind");
}

ClassKind kind_from_name(const std::string& name) {
    if (name == "binary") return ClassKind::Binary;
    if (name == "levels") return ClassKind::Levels;
    if (name == "real-grid") return ClassKind::RealGrid;
    throw KindError("unknown class kind: " + name);
}

Rat FunctionClass::level_value(int f, int x) const {
    if (kind != ClassKind::Levels) throw KindError("level_value requires a levels class");
    return Rat(BigInt(table[f][x]) * levels, scale);
}

Rat FunctionClass::max_abs_value() const {
    long long m = 0;
    for (const auto& row : table)
        for (long long v : row) m = std::max(m, v < 0 ? -v : v);
    return Rat(m, scale);
}

std::vector<Rat> FunctionClass::row_values(int f) const {
    std::vector<Rat> out;
    out.reserve(domain_size);
    for (int x = 0; x < domain_size; ++x) out.push_back(value(f, x));
    return out;
}

RealTree FunctionClass::project(int f, const DomainTree& x) const {
    std::vector<Rat> values;
    values.reserve(x.values.size());
    for (int node : x.values) {
        if (node < 0 || node >= domain_size) throw std::out_of_range("tree node outside domain");
        values.push_back(value(f, node));
    }
    return RealTree(x.depth, std::move(values));
}

FunctionClass FunctionClass::subset(const std::vector<int>& rows) const {
    FunctionClass out = *this;
    out.table.clear();
    for (int r : rows) out.table.push_back(table.at(r));
    return out;
}

FunctionClass make_class(int domain_size, long long scale, ClassKind kind, int levels,
                         std::vector<std::vector<long long>> rows) {
    if (domain_size < 1) throw StructureError("domain_size must be >= 1");
    if (scale < 1) throw StructureError("scale must be >= 1");
    if (kind == ClassKind::Levels) {
        if (levels < 1) throw KindError("levels kind requires k >= 1");
        if (scale % levels != 0) throw KindError("levels kind requires scale divisible by k");
    }
    long long bound = kind == ClassKind::RealGrid ? 2 * scale : scale;
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != domain_size)
            throw StructureError("row width must equal domain_size");
        for (long long v : row) {
            if (v < -bound || v > bound) throw StructureError("table entry out of range");
            if (kind == ClassKind::Binary && v != scale && v != -scale)
                throw KindError("binary kind entries must be +-scale");
            if (kind == ClassKind::Levels && (v < 0 || v % (scale / levels) != 0))
                throw KindError("levels kind entries must be multiples of scale/k in [0, scale]");
        }
    }
    // Collapse duplicates, keeping first occurrence order.
    std::vector<std::vector<long long>> unique_rows;
    std::set<std::vector<long long>> seen;
    for (auto& row : rows)
        if (seen.insert(row).second) unique_rows.push_back(std::move(row));
    FunctionClass out;
    out.domain_size = domain_size;
    out.scale = scale;
    out.kind = kind;
    out.levels = kind == ClassKind::Levels ? levels : 0;
    out.table = std::move(unique_rows);
    return out;
}

std::vector<Rat> alpha_grid(const Rat& alpha) {
    if (alpha <= 0) throw std::domain_error("alpha must be positive");
    std::vector<Rat> points;
    for (BigInt k = 0;; ++k) {
        if (Rat(2 * k + 1) * alpha > 4) break;
        points.push_back(Rat(-1) + Rat(2 * k + 1) * alpha / 2);
    }
    return points;
}

Rat floor_alpha(const Rat& a, const Rat& alpha) {
    if (a < -1 || a > 1) throw std::domain_error("floor_alpha: value outside [-1, 1]");
    std::vector<Rat> grid = alpha_grid(alpha);
    Rat best = grid.front();
    Rat best_dist = abs_rat(a - best);
    for (const Rat& r : grid) {
        Rat d = abs_rat(a - r);
        // Strict improvement only: ties stay at the smaller (earlier) point.
        if (d < best_dist) {
            best = r;
            best_dist = d;
        }
    }
    return best;
}

std::vector<int> restrict_rows(const FunctionClass& cls, const std::vector<int>& subset, int x,
                               const Rat& r, const Rat& alpha) {
    if (x < 0 || x >= cls.domain_size) throw std::out_of_range("restrict: point outside domain");
    std::vector<int> out;
    Rat lo = r - alpha / 2, hi = r + alpha / 2;
    for (int f : subset) {
        Rat v = cls.value(f, x);
        if (v > lo && v <= hi) out.push_back(f);
    }
    return out;
}

FunctionClass restrict_class(const FunctionClass& cls, int x, const Rat& r, const Rat& alpha) {
    std::vector<int> all(cls.table.size());
    std::iota(all.begin(), all.end(), 0);
    return cls.subset(restrict_rows(cls, all, x, r, alpha));
}

FunctionClass supervised_loss_class(const FunctionClass& cls, const std::vector<Rat>& labels,
                                    long long scale_budget) {
    if (labels.empty()) throw StructureError("label grid must be nonempty");
    for (const Rat& y : labels)
        if (y < -1 || y > 1) throw std::domain_error("labels must lie in [-1, 1]");
    // Common scale: lcm of the class scale and all label denominators.
    BigInt common = cls.scale;
    for (const Rat& y : labels) common = lcm(common, denominator(y));
    if (common > scale_budget)
        throw CapacityError("supervised_loss_class: common grid scale exceeds budget");
    long long s = common.convert_to<long long>();
    int m = static_cast<int>(labels.size());
    std::vector<std::vector<long long>> rows;
    rows.reserve(cls.table.size());
    for (int f = 0; f < cls.size(); ++f) {
        std::vector<long long> row(static_cast<std::size_t>(cls.domain_size) * m);
        for (int x = 0; x < cls.domain_size; ++x)
            for (int j = 0; j < m; ++j) {
                Rat loss = abs_rat(cls.value(f, x) - labels[j]);
                row[static_cast<std::size_t>(x) * m + j] = (loss * s).convert_to<long long>();
            }
        rows.push_back(std::move(row));
    }
    return make_class(cls.domain_size * m, s, ClassKind::RealGrid, 0, std::move(rows));
}

FunctionClass constants_class(const std::vector<Rat>& values) {
    if (values.empty()) throw StructureError("constants_class: no values");
    BigInt common = 1;
    for (const Rat& v : values) {
        if (v < -1 || v > 1) throw std::domain_error("constants must lie in [-1, 1]");
        common = lcm(common, denominator(v));
    }
    long long s = common.convert_to<long long>();
    std::vector<std::vector<long long>> rows;
    for (const Rat& v : values)
        rows.push_back({(v * s).convert_to<long long>()});
    return make_class(1, s, ClassKind::RealGrid, 0, std::move(rows));
}

FunctionClass thresholds_class(int domain_size) {
    std::vector<std::vector<long long>> rows;
    for (int j = 0; j <= domain_size; ++j) {
        std::vector<long long> row(domain_size);
        for (int x = 0; x < domain_size; ++x) row[x] = x >= j ? 1 : -1;
        rows.push_back(std::move(row));
    }
    return make_class(domain_size, 1, ClassKind::Binary, 0, std::move(rows));
}

FunctionClass full_binary_class(int domain_size) {
    if (domain_size > 20) throw CapacityError("full_binary_class: 2^n rows exceed budget");
    std::vector<std::vector<long long>> rows;
    for (std::uint32_t mask = 0; mask < (1u << domain_size); ++mask) {
        std::vector<long long> row(domain_size);
        for (int x = 0; x < domain_size; ++x) row[x] = (mask >> x) & 1u ? 1 : -1;
        rows.push_back(std::move(row));
    }
    return make_class(domain_size, 1, ClassKind::Binary, 0, std::move(rows));
}

FunctionClass leaf_class(int depth) {
    if (depth < 1 || depth > 20) throw CapacityError("leaf_class: depth out of range");
    int n = static_cast<int>(DomainTree::node_count(depth));
    int first_leaf = static_cast<int>(DomainTree::node_offset(depth, 0));
    std::vector<std::vector<long long>> rows;
    for (int leaf = first_leaf; leaf < n; ++leaf) {
        std::vector<long long> row(n, 0);
        row[leaf] = 1;
        rows.push_back(std::move(row));
    }
    return make_class(n, 1, ClassKind::Levels, 1, std::move(rows));
}

FunctionClass random_class(int domain_size, int rows, ClassKind kind, int param,
                           std::uint64_t seed) {
    if (rows < 1 || rows > 64) throw CapacityError("random_class: 1..64 rows supported");
    RngStream rng(seed, "random_class");
    std::vector<std::vector<long long>> table;
    long long scale = 1;
    int k = 0;
    switch (kind) {
        case ClassKind::Binary: scale = 1; break;
        case ClassKind::Levels:
            k = param < 1 ? 1 : param;
            scale = k;
            break;
        case ClassKind::RealGrid: scale = param < 1 ? 4 : param; break;
    }
    for (int f = 0; f < rows; ++f) {
        std::vector<long long> row(domain_size);
        for (int x = 0; x < domain_size; ++x) {
            switch (kind) {
                case ClassKind::Binary: row[x] = rng.next_bool() ? 1 : -1; break;
                case ClassKind::Levels:
                    row[x] = rng.next_below(static_cast<std::uint32_t>(k + 1));
                    break;
                case ClassKind::RealGrid:
                    row[x] = static_cast<long long>(rng.next_below(
                                 static_cast<std::uint32_t>(2 * scale + 1))) -
                             scale;
                    break;
            }
        }
        table.push_back(std::move(row));
    }
    return make_class(domain_size, scale, kind, k, std::move(table));
}

FunctionClass linear_ball_class(const std::vector<std::vector<Rat>>& weights,
                                const std::vector<std::vector<Rat>>& points) {
    if (weights.empty() || points.empty())
        throw StructureError("linear_ball_class: empty input");
    std::size_t dim = weights.front().size();
    for (const auto& w : weights)
        if (w.size() != dim) throw StructureError("weight dimension mismatch");
    for (const auto& p : points)
        if (p.size() != dim) throw StructureError("point dimension mismatch");
    BigInt common = 1;
    std::vector<std::vector<Rat>> inner(weights.size(), std::vector<Rat>(points.size()));
    for (std::size_t i = 0; i < weights.size(); ++i)
        for (std::size_t j = 0; j < points.size(); ++j) {
            Rat v = 0;
            for (std::size_t d = 0; d < dim; ++d) v += weights[i][d] * points[j][d];
            if (v < -1 || v > 1)
                throw std::domain_error("linear_ball_class: inner product outside [-1, 1]");
            inner[i][j] = v;
            common = lcm(common, denominator(v));
        }
    long long s = common.convert_to<long long>();
    std::vector<std::vector<long long>> rows;
    for (auto& r : inner) {
        std::vector<long long> row;
        row.reserve(r.size());
        for (const Rat& v : r) row.push_back((v * s).convert_to<long long>());
        rows.push_back(std::move(row));
    }
    return make_class(static_cast<int>(points.size()), s, ClassKind::RealGrid, 0,
                      std::move(rows));
}

}  // namespace seqcomplex
