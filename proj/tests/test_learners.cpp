#include <doctest.h>

#include "seqcomplex/classes.hpp"
#include "seqcomplex/errors.hpp"
#include "seqcomplex/games.hpp"
#include "seqcomplex/learners.hpp"
#include "seqcomplex/rng.hpp"
#include "seqcomplex/shattering.hpp"
#include "seqcomplex/trees.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <utility>
#include <vector>

using namespace seqcomplex;

namespace {

FunctionClass constants3() { return constants_class({Rat(-1), Rat(0), Rat(1)}); }

FunctionClass sign_pair() { return constants_class({Rat(-1), Rat(1)}); }

std::vector<std::vector<int>> all_sequences(int n, int T) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(T, 0);
    while (true) {
        out.push_back(cur);
        int j = T - 1;
        while (j >= 0 && ++cur[j] == n) cur[j--] = 0;
        if (j < 0) break;
    }
    return out;
}

// Prediction sequence of one expert along xs; experts never read labels.
std::vector<Rat> expert_run(const FunctionClass& cls, const Rat& alpha, const ExpertSpec& spec,
                            const std::vector<int>& xs) {
    ExpertState st = make_expert_state(cls, alpha);
    std::vector<Rat> preds;
    for (std::size_t t = 0; t < xs.size(); ++t)
        preds.push_back(expert_predict(spec, st, xs[t], static_cast<int>(t) + 1));
    return preds;
}

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v) {
    double m = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (static_cast<double>(v.size()) - 1) / static_cast<double>(v.size()));
}

}  // namespace

TEST_CASE("fat-soa predictions on pinned instances") {
    FunctionClass c3 = constants3();
    SUBCASE("single maximizer at the full dimension") {
        FatSoaState st = make_fat_soa(c3, Rat(1));
        REQUIRE(st.grid == std::vector<Rat>{Rat(-1, 2), Rat(1, 2)});
        // V(-1/2) = {-1, 0} has fat 1 = fat(F); V(1/2) = {1} has fat 0.
        CHECK(fat_soa_argmax(st, 0) == std::vector<int>{0});
        CHECK(fat_soa_predict(st, 0) == Rat(-1, 2));
    }
    SUBCASE("two adjacent maximizers average to the midpoint") {
        FatSoaState st = make_fat_soa(sign_pair(), Rat(1));
        // Both cells hold one constant (fat 0 < fat(F) = 1).
        CHECK(fat_soa_argmax(st, 0) == std::vector<int>{0, 1});
        CHECK(fat_soa_predict(st, 0) == Rat(0));
    }
    SUBCASE("sub-maximal rounds may average many grid points") {
        FatSoaState st = make_fat_soa(c3, Rat(1, 2));
        // Cells split F into singletons (fat 0 each, one empty); the mean of
        // {-3/4, -1/4, 3/4} is -1/12.
        CHECK(fat_soa_argmax(st, 0) == std::vector<int>{0, 1, 3});
        CHECK(fat_soa_predict(st, 0) == Rat(-1, 12));
    }
    SUBCASE("single grid point at alpha = 2") {
        FatSoaState st = make_fat_soa(sign_pair(), Rat(2));
        REQUIRE(st.grid == std::vector<Rat>{Rat(0)});
        CHECK(fat_soa_predict(st, 0) == Rat(0));
    }
}

TEST_CASE("fat-soa updates keep close rounds and survive the -1 boundary") {
    SUBCASE("mistake restricts to the label cell") {
        FatSoaState st = make_fat_soa(constants3(), Rat(1));
        CHECK(fat_soa_predict(st, 0) == Rat(-1, 2));
        fat_soa_update(st, 0, Rat(1));
        CHECK(fat_soa_predict(st, 0) == Rat(1, 2));
        // Within alpha now: version space stays put.
        std::uint64_t version = st.version;
        fat_soa_update(st, 0, Rat(1));
        CHECK(st.version == version);
    }
    SUBCASE("value -1 lies in the bottom cell") {
        FatSoaState st = make_fat_soa(sign_pair(), Rat(1, 2));
        CHECK(fat_soa_predict(st, 0) == Rat(0));
        // |0 - (-1)| > 1/2: restricts to the cell of floor(-1) = -3/4, which
        // must keep the row with value exactly -1.
        fat_soa_update(st, 0, Rat(-1));
        CHECK(fat_soa_predict(st, 0) == Rat(-3, 4));
        CHECK(fat_soa_mistakes(sign_pair(), Rat(1, 2), 0, {0, 0, 0}) == 1);
    }
}

TEST_CASE("fat-soa mistake bound holds exhaustively on realizable runs") {
    struct Instance {
        FunctionClass cls;
        std::vector<Rat> alphas;
    };
    std::vector<Instance> instances;
    instances.push_back({constants3(), {Rat(1, 2), Rat(1), Rat(2)}});
    instances.push_back({sign_pair(), {Rat(1, 2), Rat(1), Rat(2)}});
    instances.push_back({full_binary_class(2), {Rat(1, 2), Rat(1), Rat(2)}});
    instances.push_back({random_class(2, 4, ClassKind::Levels, 2, 7), {Rat(1, 2), Rat(1)}});
    instances.push_back({random_class(2, 5, ClassKind::RealGrid, 2, 11), {Rat(1, 2), Rat(1)}});
    for (const Instance& inst : instances) {
        for (const Rat& alpha : inst.alphas) {
            int d = fat_dim(inst.cls, alpha);
            for (const auto& xs : all_sequences(inst.cls.domain_size, 3))
                for (int f = 0; f < inst.cls.size(); ++f)
                    CHECK(fat_soa_mistakes(inst.cls, alpha, f, xs) <= d);
        }
    }
    // One deeper horizon.
    FunctionClass fb = full_binary_class(2);
    int d = fat_dim(fb, Rat(1));
    for (const auto& xs : all_sequences(2, 4))
        for (int f = 0; f < fb.size(); ++f) CHECK(fat_soa_mistakes(fb, Rat(1), f, xs) <= d);
}

TEST_CASE("fat-soa rejects empty version spaces and bad inputs") {
    CHECK_THROWS_AS(fat_soa_predict(FatSoaState{}, 0), ProtocolError);
    FatSoaState st = make_fat_soa(constants3(), Rat(1));
    st.version = 0;
    CHECK_THROWS_AS(fat_soa_predict(st, 0), ProtocolError);
    FunctionClass one = constants_class({Rat(1)});
    FatSoaState single = make_fat_soa(one, Rat(1, 2));
    CHECK_THROWS_AS(fat_soa_update(single, 0, Rat(-1)), ProtocolError);
    CHECK_THROWS_AS(fat_soa_update(single, 0, Rat(2)), std::domain_error);
    CHECK_THROWS_AS(make_fat_soa(one, Rat(5)), std::domain_error);
    CHECK_THROWS_AS(make_fat_soa(one, Rat(0)), std::domain_error);
    CHECK_THROWS_AS(fat_soa_mistakes(one, Rat(1), 3, {0}), std::out_of_range);
    CHECK_THROWS_AS(restrict_version(one, 1, 5, Rat(0), Rat(1)), std::out_of_range);
}

TEST_CASE("expert pool size matches the closed form") {
    SUBCASE("pinned pools") {
        // fat = 1, |grid| = 4, T = 2: 1 + C(2,1)*3 = 7.
        CHECK(expert_count(constants3(), Rat(1, 2), 2) == 7);
        CHECK(enumerate_experts(constants3(), Rat(1, 2), 2).size() == 7);
        // Single grid point leaves only the undesignated expert.
        CHECK(expert_count(constants3(), Rat(2), 3) == 1);
        CHECK(enumerate_experts(constants3(), Rat(2), 3).size() == 1);
        // fat = 2, |grid| = 4, T = 3: 1 + 3*3 + 3*9 = 37.
        CHECK(expert_count(full_binary_class(2), Rat(1, 2), 3) == 37);
        CHECK(enumerate_experts(full_binary_class(2), Rat(1, 2), 3).size() == 37);
    }
    SUBCASE("specs are distinct and within bounds") {
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            FunctionClass cls = random_class(2, 4, ClassKind::RealGrid, 2, seed);
            for (const Rat& alpha : {Rat(1, 2), Rat(1)}) {
                for (int T = 1; T <= 3; ++T) {
                    std::vector<ExpertSpec> pool = enumerate_experts(cls, alpha, T);
                    CHECK(BigInt(pool.size()) == expert_count(cls, alpha, T));
                    std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
                    int fat = fat_dim(cls, alpha);
                    int choices = static_cast<int>(alpha_grid(alpha).size()) - 1;
                    for (const ExpertSpec& spec : pool) {
                        CHECK(static_cast<int>(spec.rounds.size()) <= fat);
                        CHECK(std::is_sorted(spec.rounds.begin(), spec.rounds.end()));
                        for (int r : spec.rounds) CHECK((1 <= r && r <= T));
                        for (int a : spec.alternatives) CHECK((0 <= a && a < choices));
                        seen.insert({spec.rounds, spec.alternatives});
                    }
                    CHECK(seen.size() == pool.size());
                    // Pool bound from the count formula.
                    double cap = std::pow(2.0 * T / to_double(alpha),
                                          static_cast<double>(fat));
                    CHECK(static_cast<double>(pool.size()) <= cap + 1e-9);
                }
            }
        }
    }
    SUBCASE("budget and horizon validation") {
        CHECK_THROWS_AS(enumerate_experts(full_binary_class(2), Rat(1, 2), 3, 10), CapacityError);
        CHECK_THROWS_AS(expert_count(constants3(), Rat(1, 2), 0), std::domain_error);
    }
}

TEST_CASE("designated rounds play the decoded alternative and restrict") {
    FunctionClass c3 = constants3();
    Rat alpha(1, 2);
    // Fresh prediction is -1/12, whose floor is -1/4; the remaining grid in
    // order is {-3/4, 1/4, 3/4}.
    std::vector<Rat> expected = {Rat(-3, 4), Rat(1, 4), Rat(3, 4)};
    for (int a = 0; a < 3; ++a) {
        ExpertSpec spec{{1}, {a}};
        ExpertState st = make_expert_state(c3, alpha);
        CHECK(expert_peek(spec, st, 0, 1) == expected[a]);
        std::uint64_t before = st.soa.version;
        Rat played = expert_predict(spec, st, 0, 1);
        CHECK(played == expected[a]);
        CHECK(st.soa.version != before);
        CHECK(st.soa.version ==
              restrict_version(c3, before, 0, played, alpha));
    }
    SUBCASE("undesignated rounds leave the version space alone") {
        ExpertSpec spec{{2}, {0}};
        ExpertState st = make_expert_state(c3, alpha);
        std::uint64_t before = st.soa.version;
        CHECK(expert_predict(spec, st, 0, 1) == Rat(-1, 12));
        CHECK(st.soa.version == before);
    }
    SUBCASE("peek does not mutate") {
        ExpertSpec spec{{1}, {1}};
        ExpertState st = make_expert_state(c3, alpha);
        CHECK(expert_peek(spec, st, 0, 1) == expert_peek(spec, st, 0, 1));
        CHECK(st.soa.version == full_mask(c3));
        CHECK_FALSE(st.dead);
    }
    SUBCASE("malformed specs are rejected") {
        ExpertState st = make_expert_state(c3, alpha);
        CHECK_THROWS_AS(expert_peek(ExpertSpec{{1}, {}}, st, 0, 1), StructureError);
        CHECK_THROWS_AS(expert_peek(ExpertSpec{{1}, {3}}, st, 0, 1), StructureError);
    }
}

TEST_CASE("dead experts predict zero and never throw") {
    FunctionClass one = constants_class({Rat(1)});
    // The only row has value 1; playing the alternative -3/4 empties the
    // version space.
    ExpertSpec spec{{1}, {0}};
    ExpertState st = make_expert_state(one, Rat(1, 2));
    CHECK(expert_predict(spec, st, 0, 1) == Rat(-3, 4));
    CHECK(st.dead);
    CHECK(expert_predict(spec, st, 0, 2) == Rat(0));
    CHECK(expert_peek(spec, st, 0, 3) == Rat(0));
}

TEST_CASE("some expert stays alpha-close to every row on every sequence") {
    struct Instance {
        FunctionClass cls;
        Rat alpha;
    };
    std::vector<Instance> instances;
    instances.push_back({constants3(), Rat(1, 2)});
    instances.push_back({constants3(), Rat(1)});
    instances.push_back({sign_pair(), Rat(1)});
    instances.push_back({full_binary_class(2), Rat(1, 2)});
    instances.push_back({random_class(2, 4, ClassKind::Levels, 2, 5), Rat(1, 2)});
    const int T = 3;
    for (const Instance& inst : instances) {
        std::vector<ExpertSpec> pool = enumerate_experts(inst.cls, inst.alpha, T);
        for (const auto& xs : all_sequences(inst.cls.domain_size, T)) {
            std::vector<std::vector<Rat>> runs;
            runs.reserve(pool.size());
            for (const ExpertSpec& spec : pool)
                runs.push_back(expert_run(inst.cls, inst.alpha, spec, xs));
            for (int f = 0; f < inst.cls.size(); ++f) {
                bool tracked = false;
                for (const auto& preds : runs) {
                    bool close = true;
                    for (int t = 0; t < T && close; ++t)
                        close = abs_rat(inst.cls.value(f, xs[t]) - preds[t]) <= inst.alpha;
                    if (close) {
                        tracked = true;
                        break;
                    }
                }
                CHECK(tracked);
            }
        }
    }
}

TEST_CASE("a one-expert pool follows the plain algorithm") {
    FunctionClass c3 = constants3();
    std::vector<ExpertSpec> pool = enumerate_experts(c3, Rat(2), 4);
    REQUIRE(pool.size() == 1);
    std::vector<int> xs(4, 0);
    std::vector<Rat> expert_preds = expert_run(c3, Rat(2), pool.front(), xs);
    for (int f = 0; f < c3.size(); ++f) {
        FatSoaState st = make_fat_soa(c3, Rat(2));
        for (int t = 0; t < 4; ++t) {
            CHECK(fat_soa_predict(st, xs[t]) == expert_preds[t]);
            fat_soa_update(st, xs[t], c3.value(f, xs[t]));
        }
    }
}

TEST_CASE("ewa weights track cumulative losses exactly") {
    FunctionClass c3 = constants3();
    Rat alpha(1, 2);
    std::vector<ExpertSpec> pool = enumerate_experts(c3, alpha, 2);
    REQUIRE(pool.size() == 7);
    std::vector<double> priors(7, 1.0 / 7.0);
    double eta = 0.7;
    EwaLearner learner(c3, alpha, pool, priors, eta);
    learner.reset(42);
    std::vector<Rat> labels = {Rat(1), Rat(-1)};
    std::vector<std::vector<Rat>> preds(7);
    {
        std::vector<ExpertState> states;
        for (int i = 0; i < 7; ++i) states.push_back(make_expert_state(c3, alpha));
        for (int t = 1; t <= 2; ++t)
            for (int i = 0; i < 7; ++i)
                preds[i].push_back(expert_predict(pool[i], states[i], 0, t));
    }
    for (int t = 1; t <= 2; ++t) {
        Rat play = learner.predict(t, 0);
        bool matches_some_expert = false;
        for (int i = 0; i < 7; ++i) matches_some_expert |= preds[i][t - 1] == play;
        CHECK(matches_some_expert);
        learner.observe(t, 0, labels[t - 1]);
        double total = 0;
        for (double w : learner.weights()) {
            CHECK(w > 0);
            total += w;
        }
        CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        // Uniform priors collapse the update to w_i proportional to
        // exp(-eta * cum_i / 2).
        std::vector<double> expected(7);
        double norm = 0;
        for (int i = 0; i < 7; ++i) {
            double cum = 0;
            for (int s = 0; s < t; ++s) cum += to_double(abs_rat(preds[i][s] - labels[s]));
            expected[i] = std::exp(-eta * cum / 2.0);
            norm += expected[i];
        }
        for (int i = 0; i < 7; ++i)
            CHECK(learner.weights()[i] == doctest::Approx(expected[i] / norm).epsilon(1e-12));
    }
}

TEST_CASE("ewa validates priors, labels, and protocol order") {
    FunctionClass c3 = constants3();
    Rat alpha(1, 2);
    std::vector<ExpertSpec> pool = enumerate_experts(c3, alpha, 2);
    std::vector<double> uniform(pool.size(), 1.0 / static_cast<double>(pool.size()));
    CHECK_THROWS_AS(EwaLearner(c3, alpha, {}, {}, 0.5), std::domain_error);
    CHECK_THROWS_AS(EwaLearner(c3, alpha, pool, std::vector<double>(7, 0.1), 0.5),
                    std::domain_error);
    CHECK_THROWS_AS(EwaLearner(c3, alpha, pool, std::vector<double>(6, 1.0 / 6), 0.5),
                    std::domain_error);
    {
        std::vector<double> bad = uniform;
        bad[0] = -bad[0];
        bad[1] += 2 * uniform[0];
        CHECK_THROWS_AS(EwaLearner(c3, alpha, pool, bad, 0.5), std::domain_error);
    }
    CHECK_THROWS_AS(EwaLearner(c3, alpha, pool, uniform, -1.0), std::domain_error);
    EwaLearner learner(c3, alpha, pool, uniform, 0.5);
    learner.reset(7);
    CHECK_THROWS_AS(learner.observe(1, 0, Rat(0)), ProtocolError);
    (void)learner.predict(1, 0);
    CHECK_THROWS_AS(learner.predict(1, 0), ProtocolError);
    CHECK_THROWS_AS(learner.predict(2, 0), ProtocolError);
    CHECK_THROWS_AS(learner.observe(2, 0, Rat(0)), ProtocolError);
    CHECK_THROWS_AS(learner.observe(1, 1, Rat(0)), ProtocolError);
    CHECK_THROWS_AS(learner.observe(1, 0, Rat(2)), std::domain_error);
    learner.observe(1, 0, Rat(1));
    SUBCASE("same trial seed replays the same plays") {
        std::vector<Rat> first, second;
        for (int pass = 0; pass < 2; ++pass) {
            learner.reset(99);
            auto& out = pass == 0 ? first : second;
            for (int t = 1; t <= 2; ++t) {
                out.push_back(learner.predict(t, 0));
                learner.observe(t, 0, Rat(t == 1 ? 1 : -1));
            }
        }
        CHECK(first == second);
    }
}

TEST_CASE("ewa matrix trials meet the proposition bound") {
    SUBCASE("single expert is followed exactly") {
        std::vector<std::vector<double>> losses = {{0.25, 0.5, 0.0, 1.0}};
        CHECK(ewa_matrix_trial(losses, {1.0}, 0.5, 3) == doctest::Approx(1.75));
    }
    SUBCASE("deterministic given the seed") {
        std::vector<std::vector<double>> losses = {{0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}};
        std::vector<double> priors = {0.5, 0.5};
        CHECK(ewa_matrix_trial(losses, priors, 0.5, 11) ==
              ewa_matrix_trial(losses, priors, 0.5, 11));
    }
    SUBCASE("seeded loss matrices stay under every expert's bound") {
        const int experts = 4, T = 16, trials = 600;
        RngStream gen(2024, "test.learners.ewa");
        std::vector<std::vector<double>> losses(experts, std::vector<double>(T));
        for (auto& row : losses)
            for (double& v : row) v = gen.next_unit();
        std::vector<double> priors(experts, 1.0 / experts);
        double eta = 1.0 / std::sqrt(static_cast<double>(T));
        std::vector<double> totals;
        totals.reserve(trials);
        for (int i = 0; i < trials; ++i)
            totals.push_back(ewa_matrix_trial(losses, priors, eta, 1000 + i));
        double m = mean_of(totals), se = stderr_of(totals);
        for (int i = 0; i < experts; ++i) {
            double cum = 0;
            for (double v : losses[i]) cum += v;
            double bound = cum + std::sqrt(16.0) / 8.0 + std::sqrt(16.0) * std::log(4.0);
            CHECK(m <= bound + 3 * se);
        }
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(ewa_matrix_trial({}, {}, 0.5, 1), std::domain_error);
        CHECK_THROWS_AS(ewa_matrix_trial({{0.5}, {0.5, 0.5}}, {0.5, 0.5}, 0.5, 1),
                        std::domain_error);
        CHECK_THROWS_AS(ewa_matrix_trial({{1.5}}, {1.0}, 0.5, 1), std::domain_error);
        CHECK_THROWS_AS(ewa_matrix_trial({{0.5}}, {0.9}, 0.5, 1), std::domain_error);
    }
}

TEST_CASE("agnostic learner pools, priors, and guarantees") {
    FunctionClass c3 = constants3();
    SUBCASE("realized scales and metadata") {
        AgnosticLearner learner(c3, 4, 4096, 3);
        const auto& meta = learner.metadata();
        CHECK(meta.scales == 3);
        CHECK_FALSE(meta.truncated);
        // Pools: 13 at alpha=1/2, 29 at 1/4, 61 at 1/8.
        CHECK(meta.experts == 103);
        double mass = 6.0 / (std::numbers::pi * std::numbers::pi) * (1.0 + 0.25 + 1.0 / 9.0);
        CHECK(meta.prior_mass == doctest::Approx(mass).epsilon(1e-12));
        CHECK(learner.weights().size() == 103);
        double total = 0;
        for (double w : learner.weights()) total += w;
        CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
        double b1 = 0.5 * 4 + std::sqrt(4.0 * 1 * std::log(2.0 * 4 / 0.5)) +
                    std::sqrt(4.0) * (3.0 + 2.0 * std::log(std::log(2.0)));
        CHECK(learner.bound_at_scale(1) == doctest::Approx(b1).epsilon(1e-12));
        double best = b1;
        for (int i = 2; i <= 3; ++i) best = std::min(best, learner.bound_at_scale(i));
        CHECK(learner.best_bound() == doctest::Approx(best).epsilon(1e-12));
        CHECK_THROWS_AS(learner.bound_at_scale(5), std::domain_error);
    }
    SUBCASE("budget truncation") {
        AgnosticLearner small(c3, 4, 50, 6);
        CHECK(small.metadata().scales == 2);
        CHECK(small.metadata().truncated);
        CHECK(small.metadata().experts == 42);
        CHECK_THROWS_AS(AgnosticLearner(c3, 4, 5, 3), CapacityError);
        CHECK_THROWS_AS(AgnosticLearner(c3, 0, 50, 3), std::domain_error);
        CHECK_THROWS_AS(AgnosticLearner(c3, 4, 0, 3), std::domain_error);
        CHECK_THROWS_AS(AgnosticLearner(c3, 4, 50, 0), std::domain_error);
    }
}

TEST_CASE("simulate produces consistent regret traces") {
    FunctionClass pair = sign_pair();
    SUBCASE("trace identities and determinism") {
        auto learner = fat_soa_learner(pair, Rat(2));
        const DomainTree x(3, std::vector<int>(Tree<int>::node_count(3), 0));
        auto adversary = rad_adversary(x);
        std::vector<RegretTrace> traces = simulate(*learner, *adversary, pair, 3, 4, 17);
        REQUIRE(traces.size() == 4);
        std::set<std::uint64_t> seeds;
        for (const RegretTrace& tr : traces) {
            CHECK(tr.moves.size() == 3);
            CHECK(tr.plays.size() == 3);
            CHECK(tr.losses.size() == 3);
            for (int t = 0; t < 3; ++t)
                CHECK(tr.losses[t] == abs_rat(tr.plays[t] - tr.moves[t].y));
            Rat cum = 0;
            for (const Rat& l : tr.losses) cum += l;
            CHECK(tr.cumulative == cum);
            Rat best = abs_rat(Rat(-1) - tr.moves[0].y) + abs_rat(Rat(-1) - tr.moves[1].y) +
                       abs_rat(Rat(-1) - tr.moves[2].y);
            Rat alt = abs_rat(Rat(1) - tr.moves[0].y) + abs_rat(Rat(1) - tr.moves[1].y) +
                      abs_rat(Rat(1) - tr.moves[2].y);
            CHECK(tr.comparator == std::min(best, alt));
            CHECK(tr.regret == tr.cumulative - tr.comparator);
            seeds.insert(tr.seed);
        }
        CHECK(seeds.size() == 4);
        auto learner2 = fat_soa_learner(pair, Rat(2));
        auto adversary2 = rad_adversary(x);
        std::vector<RegretTrace> replay = simulate(*learner2, *adversary2, pair, 3, 4, 17);
        for (int i = 0; i < 4; ++i) {
            CHECK(replay[i].plays == traces[i].plays);
            CHECK(replay[i].regret == traces[i].regret);
        }
    }
    SUBCASE("zero player against the block adversary matches the exact mean") {
        auto learner = zero_learner();
        auto adversary = lower_bound_adversary(pair, Rat(2), 4);
        const int trials = 600;
        std::vector<RegretTrace> traces = simulate(*learner, *adversary, pair, 4, trials, 5);
        std::vector<double> regrets;
        regrets.reserve(trials);
        for (const RegretTrace& tr : traces) {
            CHECK(tr.cumulative == Rat(4));
            regrets.push_back(to_double(tr.regret));
        }
        double m = mean_of(regrets), se = stderr_of(regrets);
        Rat exact = lower_bound_exact_regret(pair, Rat(2), 4,
                                             [](int, int, const auto&, const auto&) {
                                                 return Rat(0);
                                             });
        CHECK(exact == Rat(3, 2));
        CHECK(std::abs(m - to_double(exact)) <= 3 * se + 1e-12);
    }
    SUBCASE("validation") {
        auto learner = zero_learner();
        auto adversary = stochastic_adversary(1, {Rat(1), Rat(-1)}, 3);
        FunctionClass c3 = constants3();
        CHECK_THROWS_AS(simulate(*learner, *adversary, c3, 4, 1, 1), StructureError);
        CHECK_THROWS_AS(simulate(*learner, *adversary, c3, 0, 1, 1), std::domain_error);
        CHECK_THROWS_AS(simulate(*learner, *adversary, c3, 3, 0, 1), std::domain_error);
    }
    SUBCASE("protocol violations carry the trial transcript") {
        FunctionClass one = constants_class({Rat(1)});
        auto learner = fat_soa_learner(one, Rat(1, 2));
        auto adversary = stochastic_adversary(1, {Rat(-1)}, 2);
        bool caught = false;
        try {
            simulate(*learner, *adversary, one, 2, 1, 9);
        } catch (const ProtocolError& e) {
            caught = true;
            std::string msg = e.what();
            CHECK(msg.find("trial 0") != std::string::npos);
            CHECK(msg.find("y=-1") != std::string::npos);
        }
        CHECK(caught);
    }
    SUBCASE("pooled learners run end to end") {
        FunctionClass c3 = constants3();
        auto adversary = stochastic_adversary(1, {Rat(-1), Rat(1)}, 4);
        auto agnostic = agnostic_learner(c3, 4, 256, 2);
        std::vector<RegretTrace> at = simulate(*agnostic, *adversary, c3, 4, 3, 23);
        for (const RegretTrace& tr : at) CHECK(tr.regret == tr.cumulative - tr.comparator);
        std::vector<ExpertSpec> pool = enumerate_experts(c3, Rat(1, 2), 4);
        std::vector<double> priors(pool.size(), 1.0 / static_cast<double>(pool.size()));
        auto ewa = ewa_learner(c3, Rat(1, 2), pool, priors, 0.5);
        std::vector<RegretTrace> et = simulate(*ewa, *adversary, c3, 4, 3, 23);
        for (const RegretTrace& tr : et) {
            CHECK(tr.plays.size() == 4);
            CHECK(tr.regret == tr.cumulative - tr.comparator);
        }
    }
}

TEST_CASE("agnostic regret stays under the per-scale guarantee on a singleton") {
    FunctionClass one = constants_class({Rat(1, 2)});
    const int T = 8, trials = 200;
    AgnosticLearner learner(one, T, 512, 4);
    REQUIRE(learner.metadata().scales == 4);
    REQUIRE(learner.metadata().experts == 4);
    std::vector<double> priors = learner.weights();
    auto adversary = stochastic_adversary(1, {Rat(1, 2)}, T);
    std::vector<RegretTrace> traces = simulate(learner, *adversary, one, T, trials, 31);
    std::vector<double> regrets;
    regrets.reserve(trials);
    for (const RegretTrace& tr : traces) regrets.push_back(to_double(tr.regret));
    double m = mean_of(regrets), se = stderr_of(regrets);
    // Expert at scale i stays within alpha_i/2 of the target, so its total
    // loss is at most T*alpha_i/2; the weighting overhead doubles because
    // supervised losses live in [0,2] and are halved internally.
    double best = 1e18;
    double sqrtT = std::sqrt(static_cast<double>(T));
    for (int i = 1; i <= 4; ++i) {
        double alpha = std::ldexp(1.0, -i);
        double prior = priors[static_cast<std::size_t>(i) - 1];
        best = std::min(best, T * alpha / 2 +
                                  2.0 * (sqrtT / 8.0 + sqrtT * std::log(1.0 / prior)));
    }
    CHECK(m <= best + 3 * se + 1e-9);
}
