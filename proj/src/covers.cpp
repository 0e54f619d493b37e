#include "seqcomplex/covers.hpp"

#include "seqcomplex/shattering.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>

namespace seqcomplex {

std::string norm_name(NormP p) {
    switch (p) {
        case NormP::Exact0: return "0";
        case NormP::L1: return "1";
        case NormP::L2: return "2";
        case NormP::Linf: return "inf";
    }
    throw KindError("unknown norm");
}

NormP norm_from_name(const std::string& name) {
    if (name == "0") return NormP::Exact0;
    if (name == "1") return NormP::L1;
    if (name == "2") return NormP::L2;
    if (name == "inf") return NormP::Linf;
    throw KindError("unknown norm: " + name);
}

bool within_radius(const std::vector<Rat>& a, const std::vector<Rat>& b, const Rat& alpha,
                   NormP p) {
    if (a.size() != b.size()) throw StructureError("path length mismatch");
    switch (p) {
        case NormP::Exact0: return a == b;
        case NormP::Linf:
            for (std::size_t i = 0; i < a.size(); ++i)
                if (abs_rat(a[i] - b[i]) > alpha) return false;
            return true;
        case NormP::L1: {
            Rat sum = 0;
            for (std::size_t i = 0; i < a.size(); ++i) sum += abs_rat(a[i] - b[i]);
            return sum <= alpha * static_cast<int>(a.size());
        }
        case NormP::L2: {
            Rat sum = 0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                Rat d = a[i] - b[i];
                sum += d * d;
            }
            return sum <= alpha * alpha * static_cast<int>(a.size());
        }
    }
    throw KindError("unknown norm");
}

bool is_cover(const FunctionClass& cls, const DomainTree& x, const CoverSet& V) {
    if (V.depth != x.depth) throw StructureError("cover and tree depths differ");
    for (const RealTree& v : V.trees)
        if (v.depth != x.depth) throw StructureError("cover tree depth mismatch");
    if (x.depth == 0) return cls.size() == 0 || !V.trees.empty();
    if (x.depth > 25) throw CapacityError("is_cover: depth over the path enumeration budget");
    std::uint32_t npaths = std::uint32_t{1} << (x.depth - 1);
    for (std::uint32_t prefix = 0; prefix < npaths; ++prefix) {
        std::vector<std::size_t> offs = path_offsets(x.depth, prefix);
        std::vector<std::vector<Rat>> tree_vals;
        tree_vals.reserve(V.trees.size());
        for (const RealTree& v : V.trees) tree_vals.push_back(path_values(v, prefix));
        for (int f = 0; f < cls.size(); ++f) {
            std::vector<Rat> fv;
            fv.reserve(offs.size());
            for (std::size_t off : offs) fv.push_back(cls.value(f, x.values[off]));
            bool matched = false;
            for (const auto& tv : tree_vals)
                if (within_radius(tv, fv, V.radius, V.norm)) {
                    matched = true;
                    break;
                }
            if (!matched) return false;
        }
    }
    return true;
}

namespace {

// Minimal 0-cover construction: per root value, cover the two subtrees and
// pair the results index-wise, reusing the last tree of the shorter list.
std::vector<RealTree> zero_cover_rec(const FunctionClass& cls, const std::vector<int>& rows,
                                     const DomainTree& sub) {
    if (sub.depth == 0) return {RealTree(0, {})};
    int point = sub.values[0];
    std::map<long long, std::vector<int>> groups;
    for (int f : rows) groups[cls.table[f][point]].push_back(f);
    auto [left, right] = split(sub);
    std::vector<RealTree> out;
    for (const auto& [val, group] : groups) {
        std::vector<RealTree> L = zero_cover_rec(cls, group, left);
        std::vector<RealTree> R = zero_cover_rec(cls, group, right);
        std::size_t count = std::max(L.size(), R.size());
        for (std::size_t i = 0; i < count; ++i)
            out.push_back(join(Rat(val, cls.scale), L[std::min(i, L.size() - 1)],
                               R[std::min(i, R.size() - 1)]));
    }
    return out;
}

}  // namespace

ZeroCoverResult zero_cover_min(const FunctionClass& cls, const DomainTree& x) {
    if (cls.size() == 0) throw StructureError("zero_cover_min: empty class");
    if (x.depth > 16)
        throw CapacityError("zero_cover_min: depth over budget; use cover_construct");
    std::vector<int> rows(cls.size());
    std::iota(rows.begin(), rows.end(), 0);
    ZeroCoverResult res;
    res.cover.depth = x.depth;
    res.cover.norm = NormP::Exact0;
    res.cover.radius = 0;
    res.cover.trees = zero_cover_rec(cls, rows, x);
    res.size = res.cover.trees.size();
    return res;
}

namespace {

// One covering constraint: a row's values along one path. Constraints with
// identical values on the same path are collapsed.
struct Element {
    std::uint32_t prefix = 0;
    std::vector<Rat> values;
    std::vector<std::size_t> offsets;
};

std::vector<Element> build_elements(const FunctionClass& cls, const DomainTree& x) {
    std::vector<Element> out;
    std::uint32_t npaths = std::uint32_t{1} << (x.depth - 1);
    for (std::uint32_t prefix = 0; prefix < npaths; ++prefix) {
        std::vector<std::size_t> offs = path_offsets(x.depth, prefix);
        std::set<std::vector<Rat>> seen;
        for (int f = 0; f < cls.size(); ++f) {
            std::vector<Rat> vals;
            vals.reserve(offs.size());
            for (std::size_t off : offs) vals.push_back(cls.value(f, x.values[off]));
            if (seen.insert(vals).second) out.push_back(Element{prefix, std::move(vals), offs});
        }
    }
    return out;
}

CoverResult greedy_cover(const FunctionClass& cls, const DomainTree& x, const Rat& alpha,
                         NormP p) {
    std::vector<Element> elems = build_elements(cls, x);
    std::vector<RealTree> cands;
    std::set<std::vector<Rat>> seen;
    for (int f = 0; f < cls.size(); ++f) {
        RealTree t = cls.project(f, x);
        if (seen.insert(t.values).second) cands.push_back(std::move(t));
    }
    std::vector<std::vector<bool>> covers(cands.size(), std::vector<bool>(elems.size(), false));
    for (std::size_t c = 0; c < cands.size(); ++c)
        for (std::size_t e = 0; e < elems.size(); ++e)
            covers[c][e] =
                within_radius(path_values(cands[c], elems[e].prefix), elems[e].values, alpha, p);
    std::vector<bool> covered(elems.size(), false);
    std::size_t remaining = elems.size();
    CoverResult out;
    out.cover.depth = x.depth;
    out.cover.norm = p;
    out.cover.radius = alpha;
    while (remaining > 0) {
        std::size_t best = cands.size(), best_gain = 0;
        for (std::size_t c = 0; c < cands.size(); ++c) {
            std::size_t gain = 0;
            for (std::size_t e = 0; e < elems.size(); ++e)
                if (!covered[e] && covers[c][e]) ++gain;
            if (gain > best_gain) {
                best = c;
                best_gain = gain;
            }
        }
        // Every row projection covers its own constraints, so progress is
        // guaranteed for any alpha >= 0.
        if (best == cands.size()) throw StructureError("greedy cover made no progress");
        for (std::size_t e = 0; e < elems.size(); ++e)
            if (!covered[e] && covers[best][e]) {
                covered[e] = true;
                --remaining;
            }
        out.cover.trees.push_back(cands[best]);
    }
    out.size = out.cover.trees.size();
    out.exact = false;
    out.grid_restricted = false;
    return out;
}

// Assignment search at Linf: a tree can serve a set of constraints iff at
// every node the intervals [v - alpha, v + alpha] intersect, so feasibility
// over arbitrary real trees reduces to interval bookkeeping (lossless).
struct InfSearch {
    const std::vector<Element>& elems;
    Rat alpha;
    int N;
    std::size_t nodes;
    std::uint64_t budget;
    std::uint64_t steps = 0;
    int used = 0;
    std::vector<std::vector<std::optional<std::pair<Rat, Rat>>>> iv;

    InfSearch(const std::vector<Element>& e, const Rat& a, int n, std::size_t node_count,
              std::uint64_t b)
        : elems(e), alpha(a), N(n), nodes(node_count), budget(b) {
        iv.assign(N, std::vector<std::optional<std::pair<Rat, Rat>>>(nodes));
    }

    bool dfs(std::size_t e) {
        if (e == elems.size()) return true;
        if (++steps > budget)
            throw CapacityError("cover_number: exact search budget exceeded; use greedy mode");
        const Element& el = elems[e];
        int limit = std::min(used + 1, N);
        for (int i = 0; i < limit; ++i) {
            std::vector<std::pair<std::size_t, std::optional<std::pair<Rat, Rat>>>> trail;
            bool ok = true;
            for (std::size_t t = 0; t < el.offsets.size() && ok; ++t) {
                std::size_t off = el.offsets[t];
                Rat lo = el.values[t] - alpha, hi = el.values[t] + alpha;
                auto& cur = iv[i][off];
                trail.emplace_back(off, cur);
                if (cur) {
                    lo = std::max(lo, cur->first);
                    hi = std::min(hi, cur->second);
                }
                if (lo > hi)
                    ok = false;
                else
                    cur = std::make_pair(lo, hi);
            }
            if (ok) {
                bool fresh = i == used;
                if (fresh) ++used;
                if (dfs(e + 1)) return true;
                if (fresh) --used;
            }
            for (auto it = trail.rbegin(); it != trail.rend(); ++it) iv[i][it->first] = it->second;
        }
        return false;
    }
};

// Assignment search at L1/L2 over per-node candidate grids; per-path budgets
// couple the nodes, so node values are branched explicitly.
struct GridSearch {
    const std::vector<Element>& elems;
    NormP p;
    Rat path_budget;
    int N;
    const std::vector<std::vector<Rat>>& cands;  // per node offset
    std::uint64_t budget;
    std::uint64_t steps = 0;
    int used = 0;
    std::vector<std::vector<std::optional<Rat>>> val;

    GridSearch(const std::vector<Element>& e, NormP p_, const Rat& pb, int n, std::size_t nodes,
               const std::vector<std::vector<Rat>>& c, std::uint64_t b)
        : elems(e), p(p_), path_budget(pb), N(n), cands(c), budget(b) {
        val.assign(N, std::vector<std::optional<Rat>>(nodes));
    }

    Rat contrib(const Rat& w, const Rat& v) const {
        Rat d = abs_rat(w - v);
        return p == NormP::L1 ? d : Rat(d * d);
    }

    bool place(std::size_t e, int i, std::size_t k, const Rat& sum) {
        const Element& el = elems[e];
        if (k == el.offsets.size()) {
            bool fresh = i == used;
            if (fresh) ++used;
            if (dfs(e + 1)) return true;
            if (fresh) --used;
            return false;
        }
        std::size_t off = el.offsets[k];
        if (val[i][off]) {
            Rat next = sum + contrib(*val[i][off], el.values[k]);
            if (next > path_budget) return false;
            return place(e, i, k + 1, next);
        }
        for (const Rat& c : cands[off]) {
            if (++steps > budget)
                throw CapacityError(
                    "cover_number: exact search budget exceeded; use greedy mode");
            Rat next = sum + contrib(c, el.values[k]);
            if (next > path_budget) continue;
            val[i][off] = c;
            if (place(e, i, k + 1, next)) return true;
            val[i][off].reset();
        }
        return false;
    }

    bool dfs(std::size_t e) {
        if (e == elems.size()) return true;
        if (++steps > budget)
            throw CapacityError("cover_number: exact search budget exceeded; use greedy mode");
        int limit = std::min(used + 1, N);
        for (int i = 0; i < limit; ++i)
            if (place(e, i, 0, Rat(0))) return true;
        return false;
    }
};

CoverResult exact_cover(const FunctionClass& cls, const DomainTree& x, const Rat& alpha,
                        NormP p) {
    if (x.depth > 12 || cls.size() > 16)
        throw CapacityError("cover_number: exact mode supports depth <= 12 and <= 16 rows");
    std::vector<Element> elems = build_elements(cls, x);
    if (elems.size() > 64) throw CapacityError("cover_number: too many path constraints");
    CoverResult greedy = greedy_cover(cls, x, alpha, p);

    // Constraints pairwise farther than 2*alpha on one path cannot share a
    // tree, so any per-path anti-chain is a lower bound.
    std::size_t lb = 1;
    std::uint32_t npaths = std::uint32_t{1} << (x.depth - 1);
    for (std::uint32_t prefix = 0; prefix < npaths; ++prefix) {
        std::vector<const Element*> chain;
        for (const Element& el : elems) {
            if (el.prefix != prefix) continue;
            bool far = true;
            for (const Element* c : chain)
                if (within_radius(el.values, c->values, 2 * alpha, p)) {
                    far = false;
                    break;
                }
            if (far) chain.push_back(&el);
        }
        lb = std::max(lb, chain.size());
    }

    std::size_t nodes = DomainTree::node_count(x.depth);
    std::uint64_t budget = enumeration_budget();

    std::vector<std::vector<Rat>> cands(nodes);
    if (p != NormP::Linf) {
        // Attained values, their midpoints, and alpha/2 shifts at each node's
        // point. Any optimal Linf cover materialized below uses attained
        // midpoints, so these grids preserve the p <= inf monotonicity.
        for (std::size_t off = 0; off < nodes; ++off) {
            std::vector<Rat> vals;
            for (int f = 0; f < cls.size(); ++f) vals.push_back(cls.value(f, x.values[off]));
            std::sort(vals.begin(), vals.end());
            vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
            std::vector<Rat>& c = cands[off];
            for (std::size_t i = 0; i < vals.size(); ++i) {
                c.push_back(vals[i] - alpha / 2);
                c.push_back(vals[i] + alpha / 2);
                for (std::size_t j = i; j < vals.size(); ++j)
                    c.push_back((vals[i] + vals[j]) / 2);
            }
            std::sort(c.begin(), c.end());
            c.erase(std::unique(c.begin(), c.end()), c.end());
        }
    }

    for (std::size_t n = lb; n <= greedy.size; ++n) {
        CoverResult out;
        out.cover.depth = x.depth;
        out.cover.norm = p;
        out.cover.radius = alpha;
        out.exact = true;
        out.grid_restricted = p != NormP::Linf;
        if (p == NormP::Linf) {
            InfSearch search(elems, alpha, static_cast<int>(n), nodes, budget);
            if (!search.dfs(0)) continue;
            for (int i = 0; i < search.used; ++i) {
                std::vector<Rat> values(nodes);
                for (std::size_t off = 0; off < nodes; ++off)
                    values[off] = search.iv[i][off]
                                      ? (search.iv[i][off]->first + search.iv[i][off]->second) / 2
                                      : cls.value(0, x.values[off]);
                out.cover.trees.emplace_back(x.depth, std::move(values));
            }
        } else {
            Rat pb = p == NormP::L1 ? Rat(alpha * x.depth) : Rat(alpha * alpha * x.depth);
            GridSearch search(elems, p, pb, static_cast<int>(n), nodes, cands, budget);
            if (!search.dfs(0)) continue;
            for (int i = 0; i < search.used; ++i) {
                std::vector<Rat> values(nodes);
                for (std::size_t off = 0; off < nodes; ++off)
                    values[off] =
                        search.val[i][off] ? *search.val[i][off] : cls.value(0, x.values[off]);
                out.cover.trees.emplace_back(x.depth, std::move(values));
            }
        }
        out.size = out.cover.trees.size();
        if (!is_cover(cls, x, out.cover))
            throw StructureError("cover_number: materialized cover failed verification");
        return out;
    }
    // The greedy cover realizes its own assignment, so its size is feasible.
    return greedy;
}

}  // namespace

CoverResult cover_number(const FunctionClass& cls, const DomainTree& x, const Rat& alpha,
                         NormP p, CoverMode mode) {
    if (cls.size() == 0) throw StructureError("cover_number: empty class");
    if (alpha < 0) throw std::domain_error("cover_number: negative radius");
    if (x.depth == 0) {
        CoverResult out;
        out.size = 1;
        out.cover = CoverSet{0, p, alpha, {RealTree(0, {})}};
        out.exact = true;
        return out;
    }
    if (p == NormP::Exact0 || alpha == 0) {
        ZeroCoverResult z = zero_cover_min(cls, x);
        CoverResult out;
        out.size = z.size;
        out.cover = std::move(z.cover);
        out.cover.norm = p;
        out.cover.radius = p == NormP::Exact0 ? Rat(0) : alpha;
        out.exact = true;
        out.grid_restricted = false;
        return out;
    }
    if (mode == CoverMode::Greedy) return greedy_cover(cls, x, alpha, p);
    return exact_cover(cls, x, alpha, p);
}

namespace {

std::size_t packing_search(const FunctionClass& cls, const DomainTree& x, const Rat& alpha,
                           NormP p, bool strong) {
    if (cls.size() == 0) throw StructureError("packing: empty class");
    if (p == NormP::Exact0) throw KindError("packing requires a numeric norm");
    if (alpha < 0) throw std::domain_error("packing: negative separation");
    std::vector<std::vector<Rat>> proj;
    {
        std::set<std::vector<Rat>> seen;
        for (int f = 0; f < cls.size(); ++f) {
            std::vector<Rat> t = cls.project(f, x).values;
            if (seen.insert(t).second) proj.push_back(std::move(t));
        }
    }
    std::size_t m = proj.size();
    if (m > 20) throw CapacityError("packing: more than 20 distinct projections");
    if (x.depth == 0) return 1;
    std::uint32_t npaths = std::uint32_t{1} << (x.depth - 1);
    if (x.depth > 13) throw CapacityError("packing: depth over the path enumeration budget");

    // far[path][i]: mask of projections farther than alpha from i on path.
    std::vector<std::vector<std::uint32_t>> far(npaths, std::vector<std::uint32_t>(m, 0));
    for (std::uint32_t prefix = 0; prefix < npaths; ++prefix) {
        std::vector<std::size_t> offs = path_offsets(x.depth, prefix);
        std::vector<std::vector<Rat>> pv(m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t off : offs) pv[i].push_back(proj[i][off]);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                if (!within_radius(pv[i], pv[j], alpha, p)) {
                    far[prefix][i] |= std::uint32_t{1} << j;
                    far[prefix][j] |= std::uint32_t{1} << i;
                }
    }

    std::size_t best = 1;
    for (std::uint32_t mask = 1; mask < (std::uint32_t{1} << m); ++mask) {
        std::size_t size = static_cast<std::size_t>(std::popcount(mask));
        if (size <= best) continue;
        bool ok;
        if (strong) {
            ok = false;
            for (std::uint32_t prefix = 0; prefix < npaths && !ok; ++prefix) {
                bool all = true;
                for (std::uint32_t rest = mask; rest && all;) {
                    int i = std::countr_zero(rest);
                    rest &= rest - 1;
                    all = (mask & ~(std::uint32_t{1} << i) & ~far[prefix][i]) == 0;
                }
                ok = all;
            }
        } else {
            ok = true;
            for (std::uint32_t rest = mask; rest && ok;) {
                int i = std::countr_zero(rest);
                rest &= rest - 1;
                bool witness = false;
                for (std::uint32_t prefix = 0; prefix < npaths && !witness; ++prefix)
                    witness = (mask & ~(std::uint32_t{1} << i) & ~far[prefix][i]) == 0;
                ok = witness;
            }
        }
        if (ok) best = size;
    }
    return best;
}

}  // namespace

std::size_t packing_number(const FunctionClass& cls, const DomainTree& x, const Rat& alpha,
                           NormP p) {
    return packing_search(cls, x, alpha, p, false);
}

std::size_t strong_packing_number(const FunctionClass& cls, const DomainTree& x,
                                  const Rat& alpha, NormP p) {
    return packing_search(cls, x, alpha, p, true);
}

CoverSet cover_construct(const FunctionClass& cls, const DomainTree& x, ConstructMode mode) {
    if (cls.kind != ClassKind::Levels) throw KindError("cover_construct requires a levels class");
    if (cls.size() == 0) throw StructureError("cover_construct: empty class");
    CoverSet out;
    out.depth = x.depth;
    if (mode == ConstructMode::Fat1) {
        std::vector<int> rows(cls.size());
        std::iota(rows.begin(), rows.end(), 0);
        out.norm = NormP::Exact0;
        out.radius = 0;
        out.trees = zero_cover_rec(cls, rows, x);
        return out;
    }

    int k = cls.levels;
    long long unit = cls.scale / k;
    FatDimCache cache(cls, Rat(2, k));
    std::function<std::vector<RealTree>(std::uint64_t, const DomainTree&)> rec =
        [&](std::uint64_t mask, const DomainTree& sub) -> std::vector<RealTree> {
        if (sub.depth == 0) return {RealTree(0, {})};
        int point = sub.values[0];
        std::map<long long, std::uint64_t> groups;
        for (std::uint64_t rest = mask; rest;) {
            int f = std::countr_zero(rest);
            rest &= rest - 1;
            groups[cls.table[f][point]] |= std::uint64_t{1} << f;
        }
        int d = fat_dim_mask(cls, mask, cache);
        std::vector<std::pair<long long, std::uint64_t>> full, rest_groups;
        for (const auto& [val, gm] : groups)
            (fat_dim_mask(cls, gm, cache) == d ? full : rest_groups).emplace_back(val, gm);
        // Two groups two or more levels apart would join into a deeper
        // shattered tree through this node, contradicting d.
        if (full.size() > 2 ||
            (full.size() == 2 && std::llabs(full[1].first - full[0].first) != unit))
            throw StructureError("cover_construct: root group adjacency invariant violated");
        auto [left, right] = split(sub);
        std::vector<RealTree> trees;
        auto emit = [&](std::uint64_t gm, const Rat& root) {
            std::vector<RealTree> L = rec(gm, left);
            std::vector<RealTree> R = rec(gm, right);
            std::size_t count = std::max(L.size(), R.size());
            for (std::size_t i = 0; i < count; ++i)
                trees.push_back(join(root, L[std::min(i, L.size() - 1)],
                                     R[std::min(i, R.size() - 1)]));
        };
        if (full.size() == 2)
            emit(full[0].second | full[1].second,
                 Rat(full[0].first + full[1].first, 2 * cls.scale));
        else
            for (const auto& [val, gm] : full) emit(gm, Rat(val, cls.scale));
        for (const auto& [val, gm] : rest_groups) emit(gm, Rat(val, cls.scale));
        return trees;
    };
    out.norm = NormP::Linf;
    out.radius = Rat(1, 2 * static_cast<long long>(k));
    out.trees = rec(full_mask(cls), x);
    return out;
}

BigInt g_k(int d, int T, int k) {
    if (T < 0 || k < 0) throw std::domain_error("g_k: T and k must be nonnegative");
    if (d < 0) return 0;
    BigInt total = 0, binom = 1, kp = 1;
    for (int i = 0; i <= std::min(d, T); ++i) {
        total += binom * kp;
        binom = binom * (T - i) / (i + 1);
        kp *= k;
    }
    return total;
}

double sauer_real_bound(int d, int T, int k) {
    if (d == 0) return 1.0;
    double e = std::exp(1.0);
    return std::pow(e * k * T / d, d);
}

PointwiseCover pointwise_entropy(const FunctionClass& cls, const Rat& alpha) {
    if (cls.size() == 0) throw StructureError("pointwise_entropy: empty class");
    if (alpha < 0) throw std::domain_error("pointwise_entropy: negative radius");
    int m = cls.size();
    if (m > 64) throw CapacityError("pointwise_entropy: more than 64 rows");
    Rat diameter = 2 * alpha;
    auto coverable = [&](std::uint64_t mask) {
        for (int x = 0; x < cls.domain_size; ++x) {
            long long lo = 0, hi = 0;
            bool first = true;
            for (std::uint64_t rest = mask; rest;) {
                int f = std::countr_zero(rest);
                rest &= rest - 1;
                long long v = cls.table[f][x];
                lo = first ? v : std::min(lo, v);
                hi = first ? v : std::max(hi, v);
                first = false;
            }
            if (Rat(hi - lo, cls.scale) > diameter) return false;
        }
        return true;
    };
    auto center_of = [&](std::uint64_t mask) {
        std::vector<Rat> g(cls.domain_size);
        for (int x = 0; x < cls.domain_size; ++x) {
            long long lo = 0, hi = 0;
            bool first = true;
            for (std::uint64_t rest = mask; rest;) {
                int f = std::countr_zero(rest);
                rest &= rest - 1;
                long long v = cls.table[f][x];
                lo = first ? v : std::min(lo, v);
                hi = first ? v : std::max(hi, v);
                first = false;
            }
            g[x] = Rat(lo + hi, 2 * cls.scale);
        }
        return g;
    };

    PointwiseCover out;
    if (m <= 12) {
        std::uint32_t full = (std::uint32_t{1} << m) - 1;
        std::vector<int> dp(full + 1, m + 1);
        std::vector<std::uint32_t> choice(full + 1, 0);
        dp[0] = 0;
        for (std::uint32_t mask = 1; mask <= full; ++mask) {
            std::uint32_t low = mask & (~mask + 1);
            for (std::uint32_t s = mask; s; s = (s - 1) & mask) {
                if (!(s & low)) continue;
                if (!coverable(s)) continue;
                if (dp[mask ^ s] + 1 < dp[mask]) {
                    dp[mask] = dp[mask ^ s] + 1;
                    choice[mask] = s;
                }
            }
        }
        out.size = static_cast<std::size_t>(dp[full]);
        for (std::uint32_t mask = full; mask;) {
            out.centers.push_back(center_of(choice[mask]));
            mask ^= choice[mask];
        }
    } else {
        std::uint64_t uncovered =
            m == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
        while (uncovered) {
            int low = std::countr_zero(uncovered);
            std::uint64_t cur = std::uint64_t{1} << low;
            for (int f = 0; f < m; ++f) {
                std::uint64_t bit = std::uint64_t{1} << f;
                if ((cur & bit) || !(uncovered & bit)) continue;
                if (coverable(cur | bit)) cur |= bit;
            }
            out.centers.push_back(center_of(cur));
            uncovered &= ~cur;
        }
        out.size = out.centers.size();
    }
    return out;
}

GridMap::GridMap(std::vector<std::pair<Rat, Rat>> pts) : points(std::move(pts)) {
    if (points.empty()) throw StructureError("grid map needs at least one point");
    for (std::size_t i = 1; i < points.size(); ++i)
        if (points[i - 1].first >= points[i].first)
            throw StructureError("grid map x-coordinates must strictly increase");
}

Rat GridMap::eval(const Rat& v) const {
    if (v <= points.front().first) return points.front().second;
    if (v >= points.back().first) return points.back().second;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (v <= points[i].first) {
            const auto& [x0, y0] = points[i - 1];
            const auto& [x1, y1] = points[i];
            return y0 + (y1 - y0) * (v - x0) / (x1 - x0);
        }
    }
    return points.back().second;
}

bool GridMap::lipschitz(const Rat& bound) const {
    for (std::size_t i = 1; i < points.size(); ++i)
        if (abs_rat(points[i].second - points[i - 1].second) >
            bound * (points[i].first - points[i - 1].first))
            return false;
    return true;
}

CoverSet cover_compose(const std::vector<GridMap>& maps, const CoverSet& V) {
    if (maps.empty()) throw StructureError("cover_compose: no maps");
    if (V.norm != NormP::Linf && V.norm != NormP::Exact0)
        throw KindError("cover_compose requires an Linf or exact-0 cover");
    for (const GridMap& g : maps)
        if (!g.lipschitz(Rat(1)))
            throw StructureError("cover_compose: map is not 1-Lipschitz on its grid");
    CoverSet out;
    out.depth = V.depth;
    out.norm = NormP::Linf;
    out.radius = 2 * V.radius;
    for (const GridMap& g : maps)
        for (const RealTree& v : V.trees)
            out.trees.push_back(apply_tree(v, [&](const Rat& r) { return g.eval(r); }));
    return out;
}

}  // namespace seqcomplex
