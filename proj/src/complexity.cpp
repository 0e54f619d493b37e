#include "seqcomplex/complexity.hpp"

#include "seqcomplex/rng.hpp"
#include "seqcomplex/shattering.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace seqcomplex {

std::string rad_mode_name(RadMode mode) {
    switch (mode) {
        case RadMode::ExactTree: return "exact-tree";
        case RadMode::ExactSup: return "exact-sup";
        case RadMode::MonteCarlo: return "monte-carlo";
        case RadMode::LocalSearch: return "local-search";
    }
    throw KindError("unknown rad mode");
}

namespace {

// E_eps max_f sum_t eps_t val(f, offset_t) over all 2^T sign paths, exactly.
// The two paths sharing a prefix differ only in the last sign, so per-row
// prefix sums are reused for both.
template <class RowValue>
Rat exact_path_expectation(int T, int rows, RowValue&& val) {
    if (T == 0 || rows == 0) return 0;
    Rat total = 0;
    std::uint32_t npref = std::uint32_t{1} << (T - 1);
    std::vector<Rat> base(rows), last(rows);
    for (std::uint32_t prefix = 0; prefix < npref; ++prefix) {
        std::vector<std::size_t> offs = path_offsets(T, prefix);
        for (int f = 0; f < rows; ++f) {
            Rat b = 0;
            for (int t = 1; t < T; ++t) {
                int sign = (prefix >> (T - 1 - t)) & 1u ? 1 : -1;
                b += sign * val(f, offs[t - 1]);
            }
            base[f] = b;
            last[f] = val(f, offs[T - 1]);
        }
        for (int s : {-1, 1}) {
            Rat best = base[0] + s * last[0];
            for (int f = 1; f < rows; ++f) best = std::max(best, Rat(base[f] + s * last[f]));
            total += best;
        }
    }
    return total / Rat(std::int64_t{1} << T);
}

}  // namespace

RadResult rad_fixed_tree(const FunctionClass& cls, const DomainTree& x) {
    if (cls.size() == 0) throw StructureError("rad_fixed_tree: empty class");
    if (x.depth > 20) throw CapacityError("rad_fixed_tree: depth over 20; use Monte Carlo");
    RadResult res;
    res.mode = RadMode::ExactTree;
    res.exact_value = exact_path_expectation(
        x.depth, cls.size(), [&](int f, std::size_t off) { return cls.value(f, x.values[off]); });
    res.has_exact = true;
    res.value = to_double(res.exact_value);
    res.sample_count = std::uint64_t{1} << x.depth;
    return res;
}

RadResult rad_fixed_tree_mc(const FunctionClass& cls, const DomainTree& x, std::uint64_t trials,
                            std::uint64_t seed) {
    if (cls.size() == 0) throw StructureError("rad_fixed_tree_mc: empty class");
    if (trials == 0) throw std::domain_error("rad_fixed_tree_mc: need at least one trial");
    std::vector<std::vector<double>> dbl(cls.size(), std::vector<double>(cls.domain_size));
    for (int f = 0; f < cls.size(); ++f)
        for (int p = 0; p < cls.domain_size; ++p) dbl[f][p] = to_double(cls.value(f, p));
    double sum = 0, sumsq = 0;
    std::vector<double> acc(cls.size());
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        RngStream rng(seed, "rad_mc." + std::to_string(trial));
        std::fill(acc.begin(), acc.end(), 0.0);
        std::size_t node = 0;
        for (int t = 1; t <= x.depth; ++t) {
            int point = x.values[node];
            int eps = rng.next_sign();
            for (int f = 0; f < cls.size(); ++f) acc[f] += eps * dbl[f][point];
            if (t < x.depth) node = 2 * node + 1 + (eps > 0 ? 1 : 0);
        }
        double best = *std::max_element(acc.begin(), acc.end());
        sum += best;
        sumsq += best * best;
    }
    RadResult res;
    res.mode = RadMode::MonteCarlo;
    res.value = sum / static_cast<double>(trials);
    if (trials > 1) {
        double var =
            (sumsq - sum * sum / static_cast<double>(trials)) / static_cast<double>(trials - 1);
        res.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(trials));
    }
    res.sample_count = trials;
    res.seed = seed;
    return res;
}

RadResult rad_sup(const FunctionClass& cls, int n, int T, RadMode mode, std::uint64_t seed,
                  int restarts) {
    if (cls.size() == 0) throw StructureError("rad_sup: empty class");
    if (n < 1 || n > cls.domain_size) throw std::domain_error("rad_sup: bad point count");
    if (mode == RadMode::ExactSup) {
        RadResult best;
        best.mode = RadMode::ExactSup;
        best.has_exact = true;
        std::uint64_t count = 0;
        enumerate_trees(n, T, enumeration_budget(), [&](const DomainTree& x) {
            ++count;
            Rat r = rad_fixed_tree(cls, x).exact_value;
            if (!best.argmax_tree || r > best.exact_value) {
                best.exact_value = r;
                best.argmax_tree = x;
            }
        });
        best.value = to_double(best.exact_value);
        best.sample_count = count;
        return best;
    }
    if (mode != RadMode::LocalSearch) throw KindError("rad_sup: mode must be exact-sup or local-search");
    if (restarts < 1) throw std::domain_error("rad_sup: need at least one restart");
    std::size_t nodes = DomainTree::node_count(T);
    RadResult best;
    best.mode = RadMode::LocalSearch;
    best.has_exact = true;
    best.seed = seed;
    for (int r = 0; r < restarts; ++r) {
        RngStream rng(seed, "rad_local." + std::to_string(r));
        std::vector<int> values(nodes);
        for (std::size_t i = 0; i < nodes; ++i)
            values[i] = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n)));
        DomainTree x(T, values);
        Rat cur = rad_fixed_tree(cls, x).exact_value;
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t off = 0; off < nodes; ++off) {
                int keep = x.values[off];
                int arg = keep;
                for (int v = 0; v < n; ++v) {
                    if (v == keep) continue;
                    x.values[off] = v;
                    Rat cand = rad_fixed_tree(cls, x).exact_value;
                    if (cand > cur) {
                        cur = cand;
                        arg = v;
                        improved = true;
                    }
                }
                x.values[off] = arg;
            }
        }
        if (!best.argmax_tree || cur > best.exact_value) {
            best.exact_value = cur;
            best.argmax_tree = x;
        }
    }
    best.value = to_double(best.exact_value);
    best.sample_count = static_cast<std::uint64_t>(restarts);
    return best;
}

MassartReport massart_bound(const std::vector<RealTree>& V) {
    if (V.empty()) throw std::domain_error("massart_bound: empty tree set");
    int T = V[0].depth;
    for (const RealTree& v : V)
        if (v.depth != T) throw StructureError("massart_bound: mixed depths");
    if (T > 20) throw CapacityError("massart_bound: depth over 20");
    MassartReport rep;
    rep.lhs_exact = exact_path_expectation(
        T, static_cast<int>(V.size()), [&](int f, std::size_t off) { return V[f].values[off]; });
    rep.lhs = to_double(rep.lhs_exact);
    Rat maxsq = 0;
    std::uint32_t npref = T >= 1 ? std::uint32_t{1} << (T - 1) : 1;
    for (std::uint32_t prefix = 0; prefix < npref && T >= 1; ++prefix) {
        std::vector<std::size_t> offs = path_offsets(T, prefix);
        for (const RealTree& v : V) {
            Rat s = 0;
            for (std::size_t off : offs) s += v.values[off] * v.values[off];
            maxsq = std::max(maxsq, s);
        }
    }
    rep.rhs = std::sqrt(2.0 * std::log(static_cast<double>(V.size())) * to_double(maxsq));
    rep.holds = rep.lhs <= rep.rhs + 1e-9;
    return rep;
}

DudleyReport dudley_bound(const FunctionClass& cls, const DomainTree& x,
                          const ChainingParams& params) {
    if (cls.size() == 0) throw StructureError("dudley_bound: empty class");
    if (params.scales < 1) throw std::domain_error("dudley_bound: need at least one scale");
    int T = x.depth;
    int J = params.scales;
    std::vector<Rat> beta(J + 1);
    for (int j = 0; j <= J; ++j) beta[j] = Rat(1, std::int64_t{1} << j);
    std::vector<std::size_t> n2(J + 1, 1);
    for (int j = 1; j <= J; ++j)
        n2[j] = cover_number(cls, x, beta[j], NormP::L2, params.mode).size;
    std::size_t n0 = T == 0 ? 1 : zero_cover_min(cls, x).size;

    auto seg = [&](double width, std::size_t n) {
        return width * std::sqrt(static_cast<double>(T) * std::log(static_cast<double>(n)));
    };
    DudleyReport rep;
    rep.value = 0;
    bool first = true;
    double integral = 0;
    for (int m = 0; m <= J; ++m) {
        double cand = 4.0 * T * to_double(beta[m]) + 12.0 * integral;
        if (first || cand < rep.value) {
            rep.value = cand;
            rep.alpha = beta[m];
            first = false;
        }
        if (m < J) integral += seg(to_double(beta[m] - beta[m + 1]), n2[m + 1]);
    }
    double tail = integral + seg(to_double(beta[J]), n0);
    double zero_cand = 12.0 * tail;
    if (zero_cand < rep.value) {
        rep.value = zero_cand;
        rep.alpha = 0;
    }
    for (int j = 1; j <= J; ++j) rep.grid.push_back({beta[j], n2[j]});
    rep.grid.push_back({Rat(0), n0});
    return rep;
}

FatRadReport fat_rad_relation(const FunctionClass& cls, int n, int T) {
    if (T < 1) throw std::domain_error("fat_rad_relation: horizon must be positive");
    FatRadReport rep;
    RadResult rs = rad_sup(cls, n, T, RadMode::ExactSup);
    rep.rad = rs.exact_value;
    rep.threshold = 2 * rs.exact_value / T;
    std::vector<Rat> betas{Rat(2)};
    for (int j = 0; j <= 6; ++j) betas.push_back(Rat(1, std::int64_t{1} << j));
    for (const Rat& beta : betas) {
        FatRadEntry e;
        e.beta = beta;
        e.fat = fat_dim(cls, beta);
        e.checked = beta > rep.threshold;
        e.holds = !e.checked || e.fat < T;
        rep.all_hold = rep.all_hold && e.holds;
        rep.entries.push_back(e);
    }
    return rep;
}

LinearRadResult linear_rad_check(const std::vector<std::vector<Rat>>& points,
                                 const DomainTree& x) {
    if (points.empty()) throw StructureError("linear_rad_check: no points");
    std::size_t dim = points[0].size();
    for (const auto& p : points)
        if (p.size() != dim) throw StructureError("linear_rad_check: mixed dimensions");
    for (int v : x.values)
        if (v < 0 || static_cast<std::size_t>(v) >= points.size())
            throw StructureError("linear_rad_check: tree node outside the point list");
    if (x.depth > 16) throw CapacityError("linear_rad_check: depth over 16");
    int T = x.depth;
    LinearRadResult res;
    Rat maxsq = 0;
    for (const auto& p : points) {
        Rat s = 0;
        for (const Rat& c : p) s += c * c;
        maxsq = std::max(maxsq, s);
    }
    res.bound = std::sqrt(2.0 * T * to_double(maxsq));
    if (T == 0) {
        res.value = 0;
        res.holds = true;
        return res;
    }
    double total = 0;
    std::uint32_t npref = std::uint32_t{1} << (T - 1);
    std::vector<Rat> base(dim), plus(dim);
    for (std::uint32_t prefix = 0; prefix < npref; ++prefix) {
        std::vector<std::size_t> offs = path_offsets(T, prefix);
        std::fill(base.begin(), base.end(), Rat(0));
        for (int t = 1; t < T; ++t) {
            int sign = (prefix >> (T - 1 - t)) & 1u ? 1 : -1;
            const auto& p = points[x.values[offs[t - 1]]];
            for (std::size_t i = 0; i < dim; ++i) base[i] += sign * p[i];
        }
        const auto& lastp = points[x.values[offs[T - 1]]];
        for (int s : {-1, 1}) {
            Rat normsq = 0;
            for (std::size_t i = 0; i < dim; ++i) {
                Rat c = base[i] + s * lastp[i];
                normsq += c * c;
            }
            total += std::sqrt(to_double(normsq));
        }
    }
    res.value = total / static_cast<double>(std::uint64_t{1} << T);
    res.holds = res.value <= res.bound + 1e-9;
    return res;
}

namespace {

// Internal class transforms for the structural checks. The transformed
// tables bypass make_class validation; only value() is consumed downstream.
FunctionClass raw_class(const FunctionClass& src, long long scale,
                        std::vector<std::vector<long long>> table) {
    FunctionClass out;
    out.domain_size = src.domain_size;
    out.scale = scale;
    out.kind = ClassKind::RealGrid;
    out.levels = 0;
    out.table = std::move(table);
    return out;
}

FunctionClass scale_by(const FunctionClass& cls, long long num, long long den) {
    std::vector<std::vector<long long>> table = cls.table;
    for (auto& row : table)
        for (long long& v : row) v *= num;
    return raw_class(cls, cls.scale * den, std::move(table));
}

FunctionClass clamp_half(const FunctionClass& cls) {
    std::vector<std::vector<long long>> table = cls.table;
    for (auto& row : table)
        for (long long& v : row) v = std::clamp(2 * v, -cls.scale, cls.scale);
    return raw_class(cls, 2 * cls.scale, std::move(table));
}

FunctionClass shift_by_row(const FunctionClass& cls, const std::vector<long long>& h,
                           long long hscale) {
    std::vector<std::vector<long long>> table = cls.table;
    for (auto& row : table)
        for (int p = 0; p < cls.domain_size; ++p) row[p] = row[p] * hscale + h[p] * cls.scale;
    return raw_class(cls, cls.scale * hscale, std::move(table));
}

FunctionClass grid_mixtures(const FunctionClass& cls) {
    std::vector<std::vector<long long>> table;
    for (const auto& row : cls.table) {
        std::vector<long long> r(row);
        for (long long& v : r) v *= 4;
        table.push_back(std::move(r));
    }
    for (int i = 0; i < cls.size(); ++i)
        for (int j = i + 1; j < cls.size(); ++j)
            for (long long lam = 1; lam <= 3; ++lam) {
                std::vector<long long> r(cls.domain_size);
                for (int p = 0; p < cls.domain_size; ++p)
                    r[p] = lam * cls.table[i][p] + (4 - lam) * cls.table[j][p];
                table.push_back(std::move(r));
            }
    return raw_class(cls, 4 * cls.scale, std::move(table));
}

}  // namespace

StructuralReport structural_checks(const FunctionClass& cls, int n, int T) {
    if (cls.size() == 0) throw StructureError("structural_checks: empty class");
    StructuralReport rep;
    RadResult base = rad_sup(cls, n, T, RadMode::ExactSup);
    rep.rad = base.exact_value;

    std::vector<int> half;
    for (int f = 0; f < (cls.size() + 1) / 2; ++f) half.push_back(f);
    rep.subset_monotone =
        rad_sup(cls.subset(half), n, T, RadMode::ExactSup).exact_value <= rep.rad;

    rep.convex_hull_equal =
        rad_sup(grid_mixtures(cls), n, T, RadMode::ExactSup).exact_value == rep.rad;

    Rat doubled = rad_sup(scale_by(cls, 2, 1), n, T, RadMode::ExactSup).exact_value;
    Rat halved = rad_sup(scale_by(cls, 1, 2), n, T, RadMode::ExactSup).exact_value;
    Rat negated = rad_sup(scale_by(cls, -1, 1), n, T, RadMode::ExactSup).exact_value;
    rep.scaling_equal = doubled == 2 * rep.rad && 2 * halved == rep.rad && negated == rep.rad;

    rep.reflection_equal = true;
    FunctionClass neg = scale_by(cls, -1, 1);
    enumerate_trees(n, T, enumeration_budget(), [&](const DomainTree& x) {
        rep.reflection_equal =
            rep.reflection_equal && rad_fixed_tree(neg, reflect(x)).exact_value ==
                                        rad_fixed_tree(cls, x).exact_value;
    });

    rep.contraction_holds =
        rad_sup(clamp_half(cls), n, T, RadMode::ExactSup).exact_value <= rep.rad;

    std::vector<long long> hconst(cls.domain_size, 1);
    Rat shifted_const =
        rad_sup(shift_by_row(cls, hconst, 2), n, T, RadMode::ExactSup).exact_value;
    std::vector<long long> hneg(cls.table[0]);
    for (long long& v : hneg) v = -v;
    Rat shifted_row =
        rad_sup(shift_by_row(cls, hneg, cls.scale), n, T, RadMode::ExactSup).exact_value;
    rep.shift_equal = shifted_const == rep.rad && shifted_row == rep.rad;

    rep.all_hold = rep.subset_monotone && rep.convex_hull_equal && rep.scaling_equal &&
                   rep.reflection_equal && rep.contraction_holds && rep.shift_equal;
    return rep;
}

}  // namespace seqcomplex
