#include "seqcomplex/harness.hpp"

#include "seqcomplex/classes.hpp"
#include "seqcomplex/complexity.hpp"
#include "seqcomplex/covers.hpp"
#include "seqcomplex/errors.hpp"
#include "seqcomplex/games.hpp"
#include "seqcomplex/learners.hpp"
#include "seqcomplex/rng.hpp"
#include "seqcomplex/shattering.hpp"
#include "seqcomplex/tailbounds.hpp"
#include "seqcomplex/trees.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <utility>

namespace seqcomplex {

namespace {

using Clock = std::chrono::steady_clock;

std::string dstr(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

// Row builders. Rational rows keep both sides exact; numeric rows are the
// sqrt/log/exp boundary and carry decimal strings.
ReportRecord rat_row(const std::string& suite, int inst, const std::string& check, const Rat& lhs,
                     const Rat& rhs, bool holds, const std::string& method) {
    return {suite,          inst,
            check,          rat_to_string(lhs),
            rat_to_string(rhs), rat_to_string(rhs - lhs),
            method,         holds,
            0};
}

ReportRecord num_row(const std::string& suite, int inst, const std::string& check, double lhs,
                     double rhs, bool holds, const std::string& method) {
    return {suite, inst, check, dstr(lhs), dstr(rhs), dstr(rhs - lhs), method, holds, 0};
}

ReportRecord count_row(const std::string& suite, int inst, const std::string& check,
                       std::uint64_t got, std::uint64_t want, bool holds,
                       const std::string& method) {
    return {suite,
            inst,
            check,
            std::to_string(got),
            std::to_string(want),
            std::to_string(static_cast<long long>(want) - static_cast<long long>(got)),
            method,
            holds,
            0};
}

void stamp(std::vector<ReportRecord>& out, std::size_t from, Clock::time_point t0) {
    double ms = ms_since(t0);
    for (std::size_t i = from; i < out.size(); ++i) out[i].runtime_ms = ms;
}

Rat alpha_or(const ExperimentConfig& cfg, const Rat& fallback) {
    return cfg.alpha.empty() ? fallback : rat_from_string(cfg.alpha);
}

std::uint64_t budget_or_default(const ExperimentConfig& cfg) {
    return cfg.budget != 0 ? cfg.budget : enumeration_budget();
}

// Seeded game on grid values {0, 1/2, 1} with |F| <= 3, n <= 2, T <= 3.
FunctionClass grid_game_class(std::uint64_t seed, int& n_out, int& T_out) {
    RngStream rng(seed, "suite.game.grid");
    const int rows = 1 + static_cast<int>(rng.next_below(3));
    const int n = 1 + static_cast<int>(rng.next_below(2));
    std::vector<std::vector<long long>> table(rows, std::vector<long long>(n));
    for (auto& row : table)
        for (auto& v : row) v = static_cast<long long>(rng.next_below(3));
    n_out = n;
    T_out = 1 + static_cast<int>(rng.next_below(3));
    return make_class(n, 2, ClassKind::RealGrid, 0, std::move(table));
}

DomainTree seeded_tree(int depth, int domain, RngStream& rng) {
    std::vector<int> vals(DomainTree::node_count(depth));
    for (auto& v : vals) v = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(domain)));
    return DomainTree(depth, std::move(vals));
}

Rat plays_zero(int, int, const std::vector<int>&, const std::vector<Rat>&) { return Rat(0); }

std::uint64_t int_pow(int base, int exp) {
    std::uint64_t v = 1;
    for (int i = 0; i < exp; ++i) v *= static_cast<std::uint64_t>(base);
    return v;
}

// The small families shared by the learner-facing suites: n <= 2, |F| <= 6.
std::vector<std::pair<std::string, FunctionClass>> learner_families(std::uint64_t seed) {
    return {
        {"constants3", constants_class({Rat(-1, 2), Rat(0), Rat(1, 2)})},
        {"sign-pair", make_class(2, 2, ClassKind::RealGrid, 0, {{2, -2}, {-2, 2}})},
        {"full-binary", full_binary_class(2)},
        {"levels", random_class(2, 6, ClassKind::Levels, 2, seed + 7)},
        {"grid", random_class(2, 5, ClassKind::RealGrid, 2, seed + 11)},
    };
}

std::vector<ReportRecord> suite_duality(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    for (int i = 0; i < 20; ++i) {
        auto t0 = Clock::now();
        int n = 0, T = 0;
        GameSpec spec;
        spec.cls = grid_game_class(cfg.seed + static_cast<std::uint64_t>(i), n, T);
        spec.horizon = T;
        GameValue primal = value_primal(spec);
        GameValue dual = value_dual(spec);
        out.push_back(rat_row("duality", i, "primal == dual", primal.value, dual.value,
                              primal.value == dual.value, "exact"));
        stamp(out, out.size() - 1, t0);
    }
    return out;
}

std::vector<ReportRecord> suite_value_vs_rad(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    for (int i = 0; i < 20; ++i) {
        auto t0 = Clock::now();
        int n = 0, T = 0;
        GameSpec spec;
        spec.cls = grid_game_class(cfg.seed + static_cast<std::uint64_t>(i), n, T);
        spec.horizon = T;
        GameValue primal = value_primal(spec);
        RadResult rad = rad_sup(spec.cls, n, T, RadMode::ExactSup);
        out.push_back(rat_row("value-vs-rad", i, "value <= 2 rad", primal.value,
                              2 * rad.exact_value, primal.value <= 2 * rad.exact_value, "exact"));
        stamp(out, out.size() - 1, t0);
    }
    return out;
}

std::vector<ReportRecord> suite_supervised_rad(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    const std::vector<Rat> signs{Rat(1), Rat(-1)};
    for (int i = 0; i < 6; ++i) {
        auto t0 = Clock::now();
        std::size_t from = out.size();
        RngStream rng(cfg.seed + static_cast<std::uint64_t>(i), "suite.supervised");
        const int n = 1 + static_cast<int>(rng.next_below(2));
        const int rows = 1 + static_cast<int>(rng.next_below(3));
        const int T = 1 + static_cast<int>(rng.next_below(3));
        FunctionClass cls =
            random_class(n, rows, ClassKind::RealGrid, 4, cfg.seed + static_cast<std::uint64_t>(i));
        Rat val = value_primal(supervised_spec(cls, signs, T)).value;
        std::uint64_t trees = 0, equal = 0;
        Rat best(-4);
        enumerate_trees(n, T, budget_or_default(cfg), [&](const DomainTree& x) {
            ++trees;
            Rat rad = rad_fixed_tree(cls, x).exact_value;
            if (rad == rad_adversary_exact_regret(cls, x, plays_zero)) ++equal;
            best = std::max(best, rad);
        });
        out.push_back(count_row("supervised-rad", i, "tree regret == per-tree rad (all trees)",
                                equal, trees, equal == trees, "exact"));
        out.push_back(rat_row("supervised-rad", i, "sup-tree rad <= supervised value", best, val,
                              best <= val, "exact"));
        stamp(out, from, t0);
    }
    return out;
}

std::vector<ReportRecord> suite_cover_chain(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    const NormP norms[3] = {NormP::L1, NormP::L2, NormP::Linf};
    for (int i = 0; i < 50; ++i) {
        auto t0 = Clock::now();
        std::size_t from = out.size();
        std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        RngStream rng(seed, "suite.coverchain");
        FunctionClass cls = random_class(2, 4, ClassKind::RealGrid, 2, seed);
        DomainTree x = seeded_tree(2, 2, rng);
        NormP p = norms[i % 3];
        Rat alpha = alpha_or(cfg, i % 2 == 0 ? Rat(1, 2) : Rat(1));
        std::size_t cover = cover_number(cls, x, alpha, p, CoverMode::Exact).size;
        std::size_t strong = strong_packing_number(cls, x, 2 * alpha, p);
        std::size_t pack = packing_number(cls, x, alpha, p);
        std::string tag = norm_name(p);
        out.push_back(count_row("cover-chain", i, "strong packing(2a) <= cover(a) [" + tag + "]",
                                strong, cover, strong <= cover, "exact"));
        out.push_back(count_row("cover-chain", i, "cover(a) <= packing(a) [" + tag + "]", cover,
                                pack, cover <= pack, "exact"));
        stamp(out, from, t0);
    }
    return out;
}

std::vector<ReportRecord> suite_gap_example(const ExperimentConfig&) {
    std::vector<ReportRecord> out;
    auto t0 = Clock::now();
    FunctionClass cls = leaf_class(3);
    DomainTree x = identity_tree(3);
    std::size_t zmin = zero_cover_min(cls, x).size;
    std::size_t weak = packing_number(cls, x, Rat(1, 4), NormP::Linf);
    std::size_t strong = strong_packing_number(cls, x, Rat(1, 4), NormP::Linf);
    out.push_back(count_row("gap-example", 0, "minimal 0-cover size == 2", zmin, 2, zmin == 2,
                            "exact"));
    out.push_back(
        count_row("gap-example", 0, "weak packing == 4", weak, 4, weak == 4, "exact"));
    out.push_back(
        count_row("gap-example", 0, "strong packing == 2", strong, 2, strong == 2, "exact"));
    stamp(out, 0, t0);
    return out;
}

std::vector<ReportRecord> suite_levels_cover(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    for (int i = 0; i < 30; ++i) {
        auto t0 = Clock::now();
        std::size_t from = out.size();
        std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        RngStream rng(seed, "suite.levels");
        int k = 1 + i % 2;
        FunctionClass cls = random_class(3, 5, ClassKind::Levels, k, seed);
        DomainTree x = seeded_tree(3, 3, rng);
        CoverSet zero = cover_construct(cls, x, ConstructMode::Fat1);
        std::size_t zmin = zero_cover_min(cls, x).size;
        BigInt bound1 = g_k(fat_dim(cls, Rat(1, k)), x.depth, k);
        out.push_back(count_row("levels-cover", i, "0-cover minimum <= constructed size", zmin,
                                zero.trees.size(), zmin <= zero.trees.size(), "exact"));
        bool under1 = BigInt(zero.trees.size()) <= bound1;
        out.push_back({"levels-cover", i, "constructed size <= g_k(fat at one level)",
                       std::to_string(zero.trees.size()), bound1.str(),
                       (bound1 - BigInt(zero.trees.size())).str(), "exact", under1, 0});
        std::size_t half =
            cover_number(cls, x, Rat(1, 2 * k), NormP::Linf, CoverMode::Exact).size;
        BigInt bound2 = g_k(fat_dim(cls, Rat(2, k)), x.depth, k);
        bool under2 = BigInt(half) <= bound2;
        out.push_back({"levels-cover", i, "exact half-level cover <= g_k(fat at two levels)",
                       std::to_string(half), bound2.str(), (bound2 - BigInt(half)).str(), "exact",
                       under2, 0});
        stamp(out, from, t0);
    }
    auto t0 = Clock::now();
    for (int k = 1; k <= 2; ++k) {
        std::uint64_t good = 0, total = 0;
        for (int d = 1; d <= 12; ++d)
            for (int T = 1; T <= 12; ++T) {
                ++total;
                if (g_k(d, T, k) == g_k(d, T - 1, k) + k * g_k(d - 1, T - 1, k)) ++good;
            }
        out.push_back(count_row("levels-cover", 30 + k,
                                "g_" + std::to_string(k) + " recurrence (d,T <= 12)", good, total,
                                good == total, "exact"));
    }
    stamp(out, out.size() - 2, t0);
    return out;
}

std::vector<ReportRecord> suite_massart(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    for (int i = 0; i < 100; ++i) {
        auto t0 = Clock::now();
        RngStream rng(cfg.seed + static_cast<std::uint64_t>(i), "suite.massart");
        int T = 2 + static_cast<int>(rng.next_below(9));
        int m = 2 + static_cast<int>(rng.next_below(4));
        std::vector<RealTree> V;
        for (int v = 0; v < m; ++v) {
            std::vector<Rat> vals(RealTree::node_count(T));
            for (auto& r : vals) r = Rat(static_cast<int>(rng.next_below(17)) - 8, 8);
            V.emplace_back(T, std::move(vals));
        }
        MassartReport rep = massart_bound(V);
        out.push_back(num_row("massart", i, "exact expectation <= sqrt(2 log|V|) radius", rep.lhs,
                              rep.rhs, rep.holds, "exact-lhs"));
        stamp(out, out.size() - 1, t0);
    }
    auto t0 = Clock::now();
    std::vector<RealTree> two{RealTree(2, std::vector<Rat>(3, Rat(1))),
                              RealTree(2, std::vector<Rat>(3, Rat(-1)))};
    MassartReport pinned = massart_bound(two);
    out.push_back(rat_row("massart", 100, "two-constant instance lhs == 1", pinned.lhs_exact,
                          Rat(1), pinned.lhs_exact == Rat(1), "exact"));
    double want = std::sqrt(4.0 * std::log(2.0));
    out.push_back(num_row("massart", 100, "two-constant instance rhs == sqrt(4 log 2)", pinned.rhs,
                          want, std::abs(pinned.rhs - want) <= 1e-9, "float"));
    stamp(out, out.size() - 2, t0);
    return out;
}

std::vector<ReportRecord> suite_chaining(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    for (int i = 0; i < 30; ++i) {
        auto t0 = Clock::now();
        std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        RngStream rng(seed, "suite.chaining");
        bool exact = i < 15;
        int T = exact ? 1 + i % 3 : 4 + i % 5;
        ClassKind kind = i % 2 == 0 ? ClassKind::RealGrid : ClassKind::Levels;
        FunctionClass cls = random_class(2, 4, kind, 2, seed);
        DomainTree x = seeded_tree(T, 2, rng);
        ChainingParams params;
        params.mode = exact ? CoverMode::Exact : CoverMode::Greedy;
        DudleyReport dud = dudley_bound(cls, x, params);
        double rad = to_double(rad_fixed_tree(cls, x).exact_value);
        out.push_back(num_row("chaining", i, "per-tree rad <= entropy integral bound", rad,
                              dud.value, rad <= dud.value,
                              exact ? "exact-cover" : "greedy-cover"));
        stamp(out, out.size() - 1, t0);
    }
    return out;
}

std::vector<ReportRecord> suite_fat_vs_rad(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    auto families = learner_families(cfg.seed);
    families.emplace_back("pennies", make_class(2, 1, ClassKind::RealGrid, 0, {{1, 0}, {0, 1}}));
    int inst = 0;
    for (const auto& [name, cls] : families) {
        auto t0 = Clock::now();
        std::size_t from = out.size();
        int n = cls.domain_size;
        int T = n == 1 ? 3 : 2;
        FatRadReport rep = fat_rad_relation(cls, n, T);
        std::uint64_t checked = 0, good = 0;
        for (const FatRadEntry& e : rep.entries) {
            if (!e.checked) continue;
            ++checked;
            if (e.holds) ++good;
            out.push_back(count_row(
                "fat-vs-rad", inst,
                name + ": fat(" + rat_to_string(e.beta) + ") < horizon",
                static_cast<std::uint64_t>(std::max(e.fat, 0)), static_cast<std::uint64_t>(T),
                e.holds, "exact"));
        }
        out.push_back(count_row("fat-vs-rad", inst,
                                name + ": scales above 2 rad / T = " +
                                    rat_to_string(rep.threshold) + " all hold",
                                good, checked, rep.all_hold, "exact"));
        stamp(out, from, t0);
        ++inst;
    }
    return out;
}

std::vector<ReportRecord> suite_mistake_bound(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    int inst = 0;
    for (const auto& [name, cls] : learner_families(cfg.seed)) {
        for (const Rat& alpha : {Rat(1, 2), Rat(1), Rat(2)}) {
            auto t0 = Clock::now();
            int fat = fat_dim(cls, alpha);
            int n = cls.domain_size;
            const int T = 4;
            int worst = 0;
            std::uint64_t runs = 0, within = 0;
            std::vector<int> xs(T, 0);
            for (std::uint64_t code = 0; code < int_pow(n, T); ++code) {
                std::uint64_t c = code;
                for (int t = 0; t < T; ++t) {
                    xs[t] = static_cast<int>(c % static_cast<std::uint64_t>(n));
                    c /= static_cast<std::uint64_t>(n);
                }
                for (int f = 0; f < cls.size(); ++f) {
                    int m = fat_soa_mistakes(cls, alpha, f, xs);
                    worst = std::max(worst, m);
                    ++runs;
                    if (m <= fat) ++within;
                }
            }
            out.push_back(count_row("mistake-bound", inst,
                                    name + " a=" + rat_to_string(alpha) +
                                        ": worst mistakes <= fat dimension",
                                    static_cast<std::uint64_t>(worst),
                                    static_cast<std::uint64_t>(fat), within == runs, "exhaustive"));
            stamp(out, out.size() - 1, t0);
            ++inst;
        }
    }
    return out;
}

std::vector<ReportRecord> suite_expert_pool(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    int inst = 0;
    for (const auto& [name, cls] : learner_families(cfg.seed)) {
        for (const Rat& alpha : {Rat(1, 2), Rat(1)}) {
            auto t0 = Clock::now();
            std::size_t from = out.size();
            const int T = 3;
            auto specs = enumerate_experts(cls, alpha, T);
            BigInt want = expert_count(cls, alpha, T);
            bool size_ok = BigInt(specs.size()) == want;
            out.push_back({"expert-pool", inst,
                           name + " a=" + rat_to_string(alpha) + ": pool size == predicted count",
                           std::to_string(specs.size()), want.str(),
                           (want - BigInt(specs.size())).str(), "exact", size_ok, 0});
            int fat = fat_dim(cls, alpha);
            double cap = std::pow(2.0 * T / to_double(alpha), fat);
            double got = static_cast<double>(specs.size());
            out.push_back(num_row("expert-pool", inst,
                                  name + " a=" + rat_to_string(alpha) +
                                      ": pool size <= (2T/a)^fat",
                                  got, cap, got <= cap, "exact"));
            int n = cls.domain_size;
            std::uint64_t pairs = 0, approximated = 0;
            std::vector<int> xs(T, 0);
            for (std::uint64_t code = 0; code < int_pow(n, T); ++code) {
                std::uint64_t c = code;
                for (int t = 0; t < T; ++t) {
                    xs[t] = static_cast<int>(c % static_cast<std::uint64_t>(n));
                    c /= static_cast<std::uint64_t>(n);
                }
                for (int f = 0; f < cls.size(); ++f) {
                    ++pairs;
                    bool close = false;
                    for (const ExpertSpec& spec : specs) {
                        ExpertState st = make_expert_state(cls, alpha);
                        bool ok = true;
                        for (int t = 1; t <= T; ++t) {
                            Rat play = expert_predict(spec, st, xs[t - 1], t);
                            if (abs_rat(play - cls.value(f, xs[t - 1])) > alpha) {
                                ok = false;
                                break;
                            }
                        }
                        if (ok) {
                            close = true;
                            break;
                        }
                    }
                    if (close) ++approximated;
                }
            }
            out.push_back(count_row("expert-pool", inst,
                                    name + " a=" + rat_to_string(alpha) +
                                        ": rows approximated on all sequences",
                                    approximated, pairs, approximated == pairs, "exhaustive"));
            stamp(out, from, t0);
            ++inst;
        }
    }
    return out;
}

std::vector<ReportRecord> suite_ewa_regret(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    const int T = 16, experts = 8;
    const int trials = cfg.trials > 0 ? cfg.trials : 10000;
    const double eta = 1.0 / std::sqrt(static_cast<double>(T));
    std::vector<double> priors(experts, 1.0 / experts);
    for (int m = 0; m < 3; ++m) {
        auto t0 = Clock::now();
        std::size_t from = out.size();
        RngStream rng(cfg.seed + static_cast<std::uint64_t>(m), "suite.ewa.matrix");
        std::vector<std::vector<double>> losses(experts, std::vector<double>(T));
        for (auto& row : losses)
            for (auto& v : row) v = static_cast<double>(rng.next_below(9)) / 8.0;
        double sum = 0, sumsq = 0;
        for (int trial = 0; trial < trials; ++trial) {
            double total = ewa_matrix_trial(
                losses, priors, eta,
                RngStream(cfg.seed + static_cast<std::uint64_t>(m),
                          "suite.ewa.trial." + std::to_string(trial))
                    .next_u64());
            sum += total;
            sumsq += total * total;
        }
        double mean = sum / trials;
        double var = std::max(0.0, sumsq / trials - mean * mean);
        double se = std::sqrt(var / trials);
        for (int i = 0; i < experts; ++i) {
            double cum = 0;
            for (double v : losses[i]) cum += v;
            double bound = cum + std::sqrt(static_cast<double>(T)) / 8.0 +
                           std::sqrt(static_cast<double>(T)) * std::log(1.0 / priors[i]) +
                           3.0 * se;
            out.push_back(num_row("ewa-regret", m * experts + i,
                                  "mean total loss <= expert " + std::to_string(i) +
                                      " bound + 3 se",
                                  mean, bound, mean <= bound, "monte-carlo"));
        }
        stamp(out, from, t0);
    }
    return out;
}

std::vector<ReportRecord> suite_lower_bound(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    FunctionClass cls = constants_class({Rat(1), Rat(-1)});
    const int trials = cfg.trials > 0 ? cfg.trials : 400;
    int inst = 0;
    for (int T : {4, 8}) {
        auto t0 = Clock::now();
        std::size_t from = out.size();
        Rat exact = lower_bound_exact_regret(cls, Rat(2), T, plays_zero);
        double target = 2.0 * std::sqrt(static_cast<double>(T) / 8.0);
        out.push_back(num_row("lower-bound", inst,
                              "T=" + std::to_string(T) +
                                  ": exact zero-predictor regret >= 2 sqrt(T/8)",
                              to_double(exact), target, to_double(exact) >= target, "exact-lhs"));
        auto learner = agnostic_learner(cls, T, 512);
        auto adversary = lower_bound_adversary(cls, Rat(2), T);
        auto traces = simulate(*learner, *adversary, cls, T, trials, cfg.seed);
        double sum = 0, sumsq = 0;
        for (const RegretTrace& tr : traces) {
            double r = to_double(tr.regret);
            sum += r;
            sumsq += r * r;
        }
        double mean = sum / trials;
        double var = std::max(0.0, sumsq / trials - mean * mean);
        double se = std::sqrt(var / trials);
        out.push_back(num_row("lower-bound", inst,
                              "T=" + std::to_string(T) +
                                  ": mean regret of scale-oblivious learner >= target - 3 se",
                              mean, target - 3.0 * se, mean >= target - 3.0 * se, "monte-carlo"));
        stamp(out, from, t0);
        ++inst;
    }
    return out;
}

std::vector<ReportRecord> suite_linear_rad(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    // Exact unit vectors (Pythagorean quadruples), signs flipped per draw.
    const std::vector<std::vector<Rat>> pool = {
        {Rat(0), Rat(0), Rat(1)},          {Rat(0), Rat(3, 5), Rat(4, 5)},
        {Rat(1, 3), Rat(2, 3), Rat(2, 3)}, {Rat(2, 7), Rat(3, 7), Rat(6, 7)},
        {Rat(1, 9), Rat(4, 9), Rat(8, 9)}, {Rat(4, 9), Rat(4, 9), Rat(7, 9)},
        {Rat(2, 11), Rat(6, 11), Rat(9, 11)}, {Rat(6, 11), Rat(6, 11), Rat(7, 11)},
    };
    const int T = 8;
    for (int i = 0; i < 50; ++i) {
        auto t0 = Clock::now();
        RngStream rng(cfg.seed + static_cast<std::uint64_t>(i), "suite.linear");
        int m = 4 + static_cast<int>(rng.next_below(3));
        std::vector<std::vector<Rat>> points;
        for (int p = 0; p < m; ++p) {
            auto v = pool[rng.next_below(pool.size())];
            for (auto& c : v)
                if (rng.next_bool()) c = -c;
            points.push_back(std::move(v));
        }
        DomainTree x = seeded_tree(T, m, rng);
        LinearRadResult rep = linear_rad_check(points, x);
        out.push_back(num_row("linear-rad", i, "per-tree rad <= sqrt(2T) max norm", rep.value,
                              rep.bound, rep.holds, "exact-paths"));
        stamp(out, out.size() - 1, t0);
    }
    return out;
}

std::vector<ReportRecord> suite_structural(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    std::vector<std::pair<std::string, FunctionClass>> families = {
        {"sign-constants", constants_class({Rat(1), Rat(-1)})},
        {"pennies", make_class(2, 1, ClassKind::RealGrid, 0, {{1, 0}, {0, 1}})},
        {"full-binary", full_binary_class(2)},
        {"grid", random_class(2, 4, ClassKind::RealGrid, 2, cfg.seed + 3)},
        {"levels", random_class(2, 4, ClassKind::Levels, 2, cfg.seed + 5)},
        {"constants3", constants_class({Rat(-1, 2), Rat(0), Rat(1, 2)})},
    };
    int inst = 0;
    for (const auto& [name, cls] : families) {
        auto t0 = Clock::now();
        std::size_t from = out.size();
        StructuralReport rep = structural_checks(cls, cls.domain_size, 2);
        const std::pair<const char*, bool> flags[] = {
            {"subset monotonicity", rep.subset_monotone},
            {"convex hull invariance", rep.convex_hull_equal},
            {"scaling homogeneity", rep.scaling_equal},
            {"reflection invariance", rep.reflection_equal},
            {"clamp contraction", rep.contraction_holds},
            {"shift invariance", rep.shift_equal},
        };
        for (const auto& [check, ok] : flags)
            out.push_back(count_row("structural", inst, name + ": " + check, ok ? 1 : 0, 1, ok,
                                    "exact"));
        stamp(out, from, t0);
        ++inst;
    }
    return out;
}

std::vector<ReportRecord> suite_tail_bound(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    int inst = 0;
    if (!cfg.class_path.empty() && !cfg.tree_path.empty()) {
        auto t0 = Clock::now();
        FunctionClass cls = load_class(cfg.class_path);
        DomainTree x = load_tree(cfg.tree_path);
        TailReport rep = pollard_check(cls, x, alpha_or(cfg, Rat(1)));
        out.push_back({"tail-bound", inst++, "file instance: exceedance <= cover bound",
                       rat_to_string(rep.lhs), dstr(rep.rhs), dstr(rep.rhs - to_double(rep.lhs)),
                       "greedy-cover", rep.holds, 0});
        stamp(out, out.size() - 1, t0);
    }
    const int depths[5] = {4, 6, 8, 10, 12};
    for (int i = 0; i < 20; ++i) {
        auto t0 = Clock::now();
        std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(i);
        RngStream rng(seed, "suite.tail");
        int depth = depths[i % 5];
        ClassKind kind = i % 2 == 0 ? ClassKind::Levels : ClassKind::RealGrid;
        FunctionClass cls = random_class(3, 4, kind, 2, seed);
        DomainTree x = seeded_tree(depth, 3, rng);
        Rat alpha = alpha_or(cfg, i % 3 == 0 ? Rat(1, 2) : (i % 3 == 1 ? Rat(1) : Rat(2)));
        TailReport rep = pollard_check(cls, x, alpha);
        bool in_range = rep.lhs >= 0 && rep.lhs <= Rat(1);
        out.push_back({"tail-bound", inst++, "exceedance probability <= cover bound",
                       rat_to_string(rep.lhs), dstr(rep.rhs), dstr(rep.rhs - to_double(rep.lhs)),
                       "greedy-cover", rep.holds && in_range, 0});
        stamp(out, out.size() - 1, t0);
    }
    return out;
}

std::vector<ReportRecord> suite_entropy_bound(const ExperimentConfig& cfg) {
    std::vector<ReportRecord> out;
    std::vector<std::pair<std::string, FunctionClass>> families = {
        {"constants3", constants_class({Rat(-1, 2), Rat(0), Rat(1, 2)})},
        {"pennies", make_class(2, 1, ClassKind::RealGrid, 0, {{1, 0}, {0, 1}})},
        {"full-binary", full_binary_class(2)},
        {"levels", random_class(2, 4, ClassKind::Levels, 2, cfg.seed + 1)},
    };
    int inst = 0;
    for (const auto& [name, cls] : families) {
        for (const Rat& alpha : {Rat(1, 2), Rat(1)}) {
            auto t0 = Clock::now();
            PointwiseCover pw = pointwise_entropy(cls, alpha);
            int T = cls.domain_size == 1 ? 3 : (cls.size() > 3 ? 2 : 3);
            std::size_t worst = 0;
            std::uint64_t trees = 0, dominated = 0;
            enumerate_trees(cls.domain_size, T, budget_or_default(cfg), [&](const DomainTree& x) {
                ++trees;
                std::size_t n =
                    cover_number(cls, x, alpha, NormP::Linf, CoverMode::Exact).size;
                worst = std::max(worst, n);
                if (n <= pw.size) ++dominated;
            });
            out.push_back(count_row("entropy-bound", inst,
                                    name + " a=" + rat_to_string(alpha) + ": max tree cover (" +
                                        std::to_string(trees) +
                                        " trees) <= pointwise cover",
                                    worst, pw.size, dominated == trees, "exact"));
            stamp(out, out.size() - 1, t0);
            ++inst;
        }
    }
    return out;
}

struct SuiteEntry {
    const char* name;
    const char* summary;
    std::vector<ReportRecord> (*run)(const ExperimentConfig&);
};

const SuiteEntry kSuites[] = {
    {"duality", "primal and dual inductions agree exactly on seeded grid games", suite_duality},
    {"value-vs-rad", "game value is at most twice the exact supremum Rademacher complexity",
     suite_value_vs_rad},
    {"supervised-rad",
     "tree-adversary regret equals per-tree Rademacher and stays below the supervised value",
     suite_supervised_rad},
    {"cover-chain", "strong packing at doubled radius, exact cover, and packing are ordered",
     suite_cover_chain},
    {"gap-example", "single-leaf class: minimal 0-cover is 2 while weak packing is 4",
     suite_gap_example},
    {"levels-cover", "constructive covers for level classes respect the growth function g_k",
     suite_levels_cover},
    {"massart", "finite-set maximal inequality holds exactly, with the pinned two-tree instance",
     suite_massart},
    {"chaining", "per-tree Rademacher is below the entropy-integral bound", suite_chaining},
    {"fat-vs-rad", "scales above twice the normalized Rademacher keep fat dimension below T",
     suite_fat_vs_rad},
    {"mistake-bound", "version-space predictor stays within fat-dimension many alpha-mistakes",
     suite_mistake_bound},
    {"expert-pool", "expert pool has the exact predicted cardinality and approximates every row",
     suite_expert_pool},
    {"ewa-regret", "sampled weighted-average forecaster meets its expected-loss bound",
     suite_ewa_regret},
    {"lower-bound", "sign constants force expected regret at least 2 sqrt(T/8)",
     suite_lower_bound},
    {"linear-rad", "linear class over unit vectors keeps per-tree Rademacher within sqrt(2T)",
     suite_linear_rad},
    {"structural", "sup-level structural properties and contraction hold on tiny classes",
     suite_structural},
    {"tail-bound", "exact sign-path exceedance probability stays below the cover bound",
     suite_tail_bound},
    {"entropy-bound", "pointwise cover dominates the tree cover number on every enumerated tree",
     suite_entropy_bound},
};

}  // namespace

ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig cfg;
    cfg.suite = j.value("suite", "");
    cfg.class_path = j.value("class", "");
    cfg.tree_path = j.value("tree", "");
    cfg.horizon = j.value("horizon", 0);
    cfg.alpha = j.value("alpha", "");
    cfg.trials = j.value("trials", 0);
    cfg.seed = j.value("seed", std::uint64_t{0});
    cfg.budget = j.value("budget", std::uint64_t{0});
    cfg.output = j.value("output", "");
    cfg.format = j.value("format", "json");
    return cfg;
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
    return nlohmann::json{{"suite", cfg.suite},     {"class", cfg.class_path},
                          {"tree", cfg.tree_path},  {"horizon", cfg.horizon},
                          {"alpha", cfg.alpha},     {"trials", cfg.trials},
                          {"seed", cfg.seed},       {"budget", cfg.budget},
                          {"output", cfg.output},   {"format", cfg.format}};
}

std::vector<std::string> suite_names() {
    std::vector<std::string> names;
    for (const SuiteEntry& s : kSuites) names.emplace_back(s.name);
    return names;
}

std::string suite_summary(const std::string& name) {
    for (const SuiteEntry& s : kSuites)
        if (name == s.name) return s.summary;
    throw std::domain_error("unknown suite \"" + name + "\"");
}

std::vector<ReportRecord> run_suite(const std::string& name, const ExperimentConfig& cfg) {
    for (const SuiteEntry& s : kSuites) {
        if (name != s.name) continue;
        std::vector<ReportRecord> reports = s.run(cfg);
        std::stable_sort(reports.begin(), reports.end(),
                         [](const ReportRecord& a, const ReportRecord& b) {
                             return a.instance < b.instance;
                         });
        return reports;
    }
    throw std::domain_error("unknown suite \"" + name + "\"");
}

bool all_hold(const std::vector<ReportRecord>& reports) {
    for (const ReportRecord& r : reports)
        if (!r.holds) return false;
    return !reports.empty();
}

std::vector<ReportRecord> failing_rows(const std::vector<ReportRecord>& reports) {
    std::vector<ReportRecord> bad;
    for (const ReportRecord& r : reports)
        if (!r.holds) bad.push_back(r);
    return bad;
}

nlohmann::json reports_to_json(const std::vector<ReportRecord>& reports) {
    nlohmann::json rows = nlohmann::json::array();
    for (const ReportRecord& r : reports)
        rows.push_back({{"suite", r.suite},
                        {"instance", r.instance},
                        {"check", r.check},
                        {"lhs", r.lhs},
                        {"rhs", r.rhs},
                        {"margin", r.margin},
                        {"method", r.method},
                        {"holds", r.holds},
                        {"runtime_ms", r.runtime_ms}});
    return rows;
}

std::vector<ReportRecord> reports_from_json(const nlohmann::json& j) {
    std::vector<ReportRecord> out;
    for (const auto& row : j) {
        ReportRecord r;
        r.suite = row.at("suite").get<std::string>();
        r.instance = row.at("instance").get<int>();
        r.check = row.at("check").get<std::string>();
        r.lhs = row.at("lhs").get<std::string>();
        r.rhs = row.at("rhs").get<std::string>();
        r.margin = row.at("margin").get<std::string>();
        r.method = row.at("method").get<std::string>();
        r.holds = row.at("holds").get<bool>();
        r.runtime_ms = row.at("runtime_ms").get<double>();
        out.push_back(std::move(r));
    }
    return out;
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += "\"\"";
        else q += c;
    }
    return q + "\"";
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

}  // namespace

std::string reports_to_csv(const std::vector<ReportRecord>& reports) {
    std::string out = "suite,instance,check,lhs,rhs,margin,method,holds,runtime_ms\n";
    for (const ReportRecord& r : reports) {
        out += csv_escape(r.suite) + "," + std::to_string(r.instance) + "," +
               csv_escape(r.check) + "," + csv_escape(r.lhs) + "," + csv_escape(r.rhs) + "," +
               csv_escape(r.margin) + "," + csv_escape(r.method) + "," +
               (r.holds ? "true" : "false") + "," + dstr(r.runtime_ms) + "\n";
    }
    return out;
}

std::vector<ReportRecord> reports_from_csv(const std::string& text) {
    std::vector<ReportRecord> out;
    std::istringstream in(text);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        auto f = csv_split(line);
        if (f.size() != 9) throw StructureError("report CSV row has " +
                                                std::to_string(f.size()) + " fields, wanted 9");
        ReportRecord r;
        r.suite = f[0];
        r.instance = std::stoi(f[1]);
        r.check = f[2];
        r.lhs = f[3];
        r.rhs = f[4];
        r.margin = f[5];
        r.method = f[6];
        r.holds = f[7] == "true";
        r.runtime_ms = std::stod(f[8]);
        out.push_back(std::move(r));
    }
    return out;
}

bool same_reports(const std::vector<ReportRecord>& a, const std::vector<ReportRecord>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const ReportRecord &x = a[i], &y = b[i];
        if (x.suite != y.suite || x.instance != y.instance || x.check != y.check ||
            x.lhs != y.lhs || x.rhs != y.rhs || x.margin != y.margin || x.method != y.method ||
            x.holds != y.holds)
            return false;
    }
    return true;
}

void write_reports(const ExperimentConfig& cfg, const std::vector<ReportRecord>& reports) {
    if (cfg.output.empty()) return;
    if (cfg.format == "csv") {
        std::ofstream out(cfg.output);
        if (!out) throw StructureError("cannot write \"" + cfg.output + "\"");
        out << reports_to_csv(reports);
    } else if (cfg.format == "json") {
        save_json(cfg.output, reports_to_json(reports));
    } else {
        throw std::domain_error("unknown report format \"" + cfg.format + "\"");
    }
}

}  // namespace seqcomplex
