#include "seqcomplex/games.hpp"

#include "seqcomplex/classes.hpp"
#include "seqcomplex/complexity.hpp"
#include "seqcomplex/errors.hpp"
#include "seqcomplex/rng.hpp"
#include "seqcomplex/shattering.hpp"
#include "seqcomplex/trees.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

using namespace seqcomplex;

namespace {

FunctionClass pennies_class() {
    return make_class(2, 1, ClassKind::RealGrid, 0, {{1, 0}, {0, 1}});
}

FunctionClass sign_constants() { return constants_class({Rat(1), Rat(-1)}); }

Rat plays_zero(int, int, const std::vector<int>&, const std::vector<Rat>&) { return Rat(0); }

std::vector<std::vector<Rat>> random_matrix(int rows, int cols, std::uint64_t seed) {
    RngStream rng(seed, "test.games.matrix");
    std::vector<std::vector<Rat>> M(rows, std::vector<Rat>(cols));
    for (auto& row : M) {
        for (auto& v : row) v = Rat(static_cast<int>(rng.next_below(49)) - 24, 12);
    }
    return M;
}

FunctionClass random_grid_class(std::uint64_t seed, int& n_out, int& T_out) {
    RngStream rng(seed, "test.games.grid");
    const int rows = 1 + static_cast<int>(rng.next_below(3));
    const int n = 1 + static_cast<int>(rng.next_below(2));
    std::vector<std::vector<long long>> table(rows, std::vector<long long>(n));
    for (auto& row : table) {
        for (auto& v : row) v = static_cast<long long>(rng.next_below(3));
    }
    n_out = n;
    T_out = 1 + static_cast<int>(rng.next_below(3));
    return make_class(n, 2, ClassKind::RealGrid, 0, std::move(table));
}

Rat matrix_value_oracle(const std::vector<std::vector<Rat>>& M) {
    return solve_matrix_game(M).value;
}

}  // namespace

TEST_CASE("matrix game solver pins closed-form instances") {
    SUBCASE("one by one") {
        for (const Rat& c : {Rat(3, 7), Rat(-2, 3), Rat(0)}) {
            const auto sol = solve_matrix_game({{c}});
            CHECK(sol.exact);
            CHECK(sol.value == c);
            CHECK(sol.row_mixture == std::vector<Rat>{Rat(1)});
            CHECK(sol.col_mixture == std::vector<Rat>{Rat(1)});
        }
    }
    SUBCASE("matching pennies") {
        const auto sol = solve_matrix_game({{Rat(1), Rat(0)}, {Rat(0), Rat(1)}});
        CHECK(sol.exact);
        CHECK(sol.value == Rat(1, 2));
        CHECK(sol.row_mixture == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
        CHECK(sol.col_mixture == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
    }
    SUBCASE("dominated row") {
        const auto sol = solve_matrix_game({{Rat(0), Rat(0)}, {Rat(1), Rat(1)}});
        CHECK(sol.value == Rat(0));
    }
    SUBCASE("rectangular with a middle column") {
        const auto sol =
            solve_matrix_game({{Rat(0), Rat(1), Rat(1, 2)}, {Rat(1), Rat(0), Rat(1, 2)}});
        CHECK(sol.value == Rat(1, 2));
    }
    SUBCASE("degenerate shapes are rejected") {
        CHECK_THROWS_AS(solve_matrix_game({}), std::domain_error);
        CHECK_THROWS_AS(solve_matrix_game({{}}), std::domain_error);
        CHECK_THROWS_AS(solve_matrix_game({{Rat(1)}, {Rat(1), Rat(2)}}), StructureError);
    }
}

TEST_CASE("matrix game certificates, weak duality and slackness hold on random matrices") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        RngStream rng(seed, "test.games.shape");
        const int rows = 1 + static_cast<int>(rng.next_below(6));
        const int cols = 1 + static_cast<int>(rng.next_below(7));
        const auto M = random_matrix(rows, cols, seed);
        const auto sol = solve_matrix_game(M);
        REQUIRE(sol.exact);

        Rat qsum = 0, psum = 0;
        for (const Rat& v : sol.row_mixture) {
            CHECK(v >= 0);
            qsum += v;
        }
        for (const Rat& v : sol.col_mixture) {
            CHECK(v >= 0);
            psum += v;
        }
        CHECK(qsum == 1);
        CHECK(psum == 1);

        std::vector<Rat> against_col(cols, Rat(0));
        for (int x = 0; x < cols; ++x) {
            for (int f = 0; f < rows; ++f) against_col[x] += sol.row_mixture[f] * M[f][x];
        }
        std::vector<Rat> against_row(rows, Rat(0));
        for (int f = 0; f < rows; ++f) {
            for (int x = 0; x < cols; ++x) against_row[f] += M[f][x] * sol.col_mixture[x];
        }
        CHECK(*std::max_element(against_col.begin(), against_col.end()) == sol.value);
        CHECK(*std::min_element(against_row.begin(), against_row.end()) == sol.value);

        Rat maxmin = M[0][0], minmax = M[0][0];
        for (int x = 0; x < cols; ++x) {
            Rat colmin = M[0][x];
            for (int f = 0; f < rows; ++f) colmin = std::min(colmin, M[f][x]);
            if (x == 0 || colmin > maxmin) maxmin = colmin;
        }
        for (int f = 0; f < rows; ++f) {
            Rat rowmax = M[f][0];
            for (int x = 0; x < cols; ++x) rowmax = std::max(rowmax, M[f][x]);
            if (f == 0 || rowmax < minmax) minmax = rowmax;
        }
        CHECK(maxmin <= sol.value);
        CHECK(sol.value <= minmax);

        for (int f = 0; f < rows; ++f) {
            if (sol.row_mixture[f] > 0) CHECK(against_row[f] == sol.value);
        }
        for (int x = 0; x < cols; ++x) {
            if (sol.col_mixture[x] > 0) CHECK(against_col[x] == sol.value);
        }
    }
}

TEST_CASE("large matrices take the certified floating point path") {
    const int n = 13;
    std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i) M[i][i] = 1;
    const auto sol = solve_matrix_game(M);
    CHECK_FALSE(sol.exact);
    CHECK(sol.gap <= 1e-9);
    CHECK(std::abs(to_double(sol.value) - 1.0 / n) <= 1e-9);
    double qsum = 0;
    for (const Rat& v : sol.row_mixture) {
        CHECK(std::abs(to_double(v) - 1.0 / n) <= 1e-9);
        qsum += to_double(v);
    }
    CHECK(std::abs(qsum - 1.0) <= 1e-9);
}

TEST_CASE("backward induction pins tiny game values") {
    SUBCASE("singleton class has value zero at every horizon") {
        GameSpec spec;
        spec.cls = constants_class({Rat(1, 2)});
        for (int T = 0; T <= 3; ++T) {
            spec.horizon = T;
            const auto primal = value_primal(spec);
            CHECK(primal.value == 0);
            CHECK(primal.exact);
            CHECK(primal.form == "primal");
            CHECK(value_dual(spec).value == 0);
        }
    }
    SUBCASE("matching pennies horizons one and two") {
        GameSpec spec;
        spec.cls = pennies_class();
        spec.horizon = 1;
        const auto v1 = value_primal(spec);
        CHECK(v1.value == Rat(1, 2));
        CHECK(v1.states == 3);
        CHECK(v1.player_mixtures.at({}) == std::vector<Rat>{Rat(1, 2), Rat(1, 2)});
        spec.horizon = 2;
        const auto v2 = value_primal(spec);
        CHECK(v2.value == Rat(1, 2));
        CHECK(v2.value == value_dual(spec).value);
        CHECK(v2.states == 7);
    }
    SUBCASE("horizon zero pays the empty comparator") {
        GameSpec spec;
        spec.cls = pennies_class();
        spec.horizon = 0;
        CHECK(value_primal(spec).value == 0);
        CHECK(value_primal(spec).states == 1);
    }
    SUBCASE("state budget is enforced") {
        GameSpec spec;
        spec.cls = full_binary_class(4);
        spec.horizon = 9;
        CHECK_THROWS_AS(value_primal(spec), CapacityError);
        CHECK_THROWS_AS(value_dual(spec), CapacityError);
    }
    SUBCASE("empty class and negative horizon are rejected") {
        GameSpec spec;
        spec.cls = pennies_class();
        spec.horizon = -1;
        CHECK_THROWS_AS(value_primal(spec), std::domain_error);
    }
}

TEST_CASE("primal and dual inductions agree exactly on random grid games") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        int n = 0, T = 0;
        const auto cls = random_grid_class(seed, n, T);
        GameSpec spec;
        spec.cls = cls;
        spec.horizon = T;
        const auto primal = value_primal(spec);
        const auto dual = value_dual(spec);
        CHECK(primal.value == dual.value);
        CHECK(primal.form == "primal");
        CHECK(dual.form == "dual");
        CHECK(primal.states == dual.states);
    }
}

TEST_CASE("game value is at most twice the exact supremum Rademacher complexity") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        int n = 0, T = 0;
        const auto cls = random_grid_class(seed, n, T);
        GameSpec spec;
        spec.cls = cls;
        spec.horizon = T;
        const auto val = value_primal(spec);
        const auto rad = rad_sup(cls, n, T, RadMode::ExactSup);
        REQUIRE(rad.has_exact);
        CHECK(val.value <= 2 * rad.exact_value);
    }
}

TEST_CASE("supervised games wrap the loss class") {
    SUBCASE("singleton class yields value zero") {
        const auto spec = supervised_spec(constants_class({Rat(1, 2)}), {Rat(-1), Rat(1)}, 2);
        CHECK(spec.mode == LossMode::Supervised);
        CHECK(spec.base_domain == 1);
        CHECK(value_primal(spec).value == 0);
    }
    SUBCASE("sign constants against sign labels match the stage oracle") {
        const auto spec = supervised_spec(sign_constants(), {Rat(1), Rat(-1)}, 1);
        REQUIRE(spec.cls.domain_size == 2);
        std::vector<std::vector<Rat>> M(spec.cls.size(), std::vector<Rat>(2));
        for (int f = 0; f < spec.cls.size(); ++f) {
            for (int x = 0; x < 2; ++x) {
                Rat best = spec.cls.value(0, x);
                for (int g = 1; g < spec.cls.size(); ++g)
                    best = std::min(best, spec.cls.value(g, x));
                M[f][x] = spec.cls.value(f, x) - best;
            }
        }
        CHECK(value_primal(spec).value == matrix_value_oracle(M));
        CHECK(value_primal(spec).value == 1);
    }
    SUBCASE("empty label grid is rejected") {
        CHECK_THROWS_AS(supervised_spec(sign_constants(), {}, 1), std::domain_error);
    }
}

TEST_CASE("tree adversary regret equals the per-tree Rademacher average") {
    SUBCASE("singleton class earns nothing") {
        const auto cls = constants_class({Rat(0)});
        const DomainTree x(2, {0, 0, 0});
        CHECK(rad_adversary_exact_regret(cls, x, plays_zero) == 0);
    }
    SUBCASE("matching pennies root") {
        const auto cls = pennies_class();
        const DomainTree x(1, {0});
        CHECK(rad_adversary_exact_regret(cls, x, plays_zero) == Rat(1, 2));
        CHECK(rad_adversary_exact_regret(cls, x, plays_zero) == rad_fixed_tree(cls, x).exact_value);
    }
    SUBCASE("random classes and trees, several deterministic players") {
        const DeterministicPlayer follow_first = [](int, int, const std::vector<int>&,
                                                    const std::vector<Rat>& past_y) {
            return past_y.empty() ? Rat(0) : past_y.back() / 2;
        };
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            RngStream rng(seed, "test.games.radtree");
            const int n = 1 + static_cast<int>(rng.next_below(3));
            const int rows = 1 + static_cast<int>(rng.next_below(4));
            const int T = 1 + static_cast<int>(rng.next_below(5));
            const auto cls = random_class(n, rows, ClassKind::RealGrid, 4, seed);
            std::vector<int> vals(Tree<int>::node_count(T));
            for (auto& v : vals) v = static_cast<int>(rng.next_below(static_cast<std::uint32_t>(n)));
            const DomainTree x(T, vals);
            const Rat rad = rad_fixed_tree(cls, x).exact_value;
            const DeterministicPlayer first_row = [&cls](int, int xt, const std::vector<int>&,
                                                         const std::vector<Rat>&) {
                return cls.value(0, xt);
            };
            CHECK(rad_adversary_exact_regret(cls, x, plays_zero) == rad);
            CHECK(rad_adversary_exact_regret(cls, x, follow_first) == rad);
            CHECK(rad_adversary_exact_regret(cls, x, first_row) == rad);
        }
    }
    SUBCASE("sampled moves follow the tree along the drawn labels") {
        RngStream rng(11, "test.games.radsample");
        const DomainTree x(3, {0, 1, 2, 0, 1, 2, 0});
        auto adv = rad_adversary(x);
        CHECK(adv->name() == "tree");
        CHECK(adv->horizon() == 3);
        for (std::uint64_t trial = 0; trial < 4; ++trial) {
            adv->reset(trial);
            std::size_t node = 0;
            for (int t = 1; t <= 3; ++t) {
                const auto mv = adv->next(t);
                CHECK(mv.x == x.values[node]);
                CHECK((mv.y == 1 || mv.y == -1));
                node = 2 * node + 1 + (mv.y > 0 ? 1 : 0);
            }
        }
        adv->reset(7);
        const auto first = adv->next(1);
        adv->reset(7);
        const auto again = adv->next(1);
        CHECK(first.x == again.x);
        CHECK(first.y == again.y);
        CHECK_THROWS_AS(adv->next(1), ProtocolError);
    }
    SUBCASE("out of range predictions and foreign trees are rejected") {
        const auto cls = pennies_class();
        const DomainTree bad(1, {5});
        CHECK_THROWS_AS(rad_adversary_exact_regret(cls, bad, plays_zero), StructureError);
        const DomainTree x(1, {0});
        const DeterministicPlayer wild = [](int, int, const std::vector<int>&,
                                            const std::vector<Rat>&) { return Rat(2); };
        CHECK_THROWS_AS(rad_adversary_exact_regret(cls, x, wild), StructureError);
    }
}

TEST_CASE("block adversary meets the fat shattering lower bound") {
    SUBCASE("sign constants at scale two") {
        const auto cls = sign_constants();
        const Rat alpha(2);
        const auto plan4 = lower_bound_plan(cls, alpha, 4);
        CHECK(plan4.d == 1);
        CHECK(plan4.k == 4);
        CHECK(plan4.blocks == 1);
        CHECK(plan4.bound == doctest::Approx(std::sqrt(2.0)));
        const Rat r4 = lower_bound_exact_regret(cls, alpha, 4, plays_zero);
        CHECK(r4 == Rat(3, 2));
        CHECK(to_double(r4) >= plan4.bound - 1e-12);
        const Rat r8 = lower_bound_exact_regret(cls, alpha, 8, plays_zero);
        CHECK(r8 == Rat(35, 16));
        CHECK(to_double(r8) >= lower_bound_plan(cls, alpha, 8).bound - 1e-12);
    }
    SUBCASE("full binary class on two points uses two blocks") {
        const auto cls = full_binary_class(2);
        const Rat alpha(2);
        const auto plan = lower_bound_plan(cls, alpha, 4);
        CHECK(plan.d == 2);
        CHECK(plan.k == 2);
        CHECK(plan.blocks == 2);
        const Rat r = lower_bound_exact_regret(cls, alpha, 4, plays_zero);
        CHECK(r == 2);
        CHECK(to_double(r) >= plan.bound - 1e-12);
        CHECK(lower_bound_exact_regret(cls, alpha, 2, plays_zero) == 2);
    }
    SUBCASE("horizon below the dimension truncates the certificate") {
        const auto cls = full_binary_class(2);
        const auto plan = lower_bound_plan(cls, Rat(2), 1);
        CHECK(plan.k == 1);
        CHECK(plan.blocks == 1);
        CHECK(plan.bound == doctest::Approx(2.0 / std::sqrt(8.0)));
        CHECK(lower_bound_exact_regret(cls, Rat(2), 1, plays_zero) == 1);
    }
    SUBCASE("unsupported horizons and flat classes are rejected") {
        CHECK_THROWS_AS(lower_bound_plan(full_binary_class(2), Rat(2), 3), std::domain_error);
        CHECK_THROWS_AS(lower_bound_plan(constants_class({Rat(0)}), Rat(1), 2),
                        std::domain_error);
        CHECK_THROWS_AS(lower_bound_plan(sign_constants(), Rat(2), 0), std::domain_error);
    }
    SUBCASE("sampling matches the exact expectation") {
        const auto cls = full_binary_class(2);
        auto adv = lower_bound_adversary(cls, Rat(2), 4);
        CHECK(adv->name() == "lowerbound");
        CHECK(adv->horizon() == 4);
        const int trials = 2000;
        double mean = 0, sq = 0;
        for (int trial = 0; trial < trials; ++trial) {
            adv->reset(static_cast<std::uint64_t>(trial));
            std::vector<int> pts;
            std::vector<Rat> ys;
            for (int t = 1; t <= 4; ++t) {
                const auto mv = adv->next(t);
                pts.push_back(mv.x);
                ys.push_back(mv.y);
            }
            CHECK(pts[0] == pts[1]);
            CHECK(pts[2] == pts[3]);
            Rat loss = 0;
            for (const Rat& y : ys) loss += abs_rat(y);
            Rat best;
            for (int f = 0; f < cls.size(); ++f) {
                Rat s = 0;
                for (int t = 0; t < 4; ++t) s += abs_rat(cls.value(f, pts[t]) - ys[t]);
                if (f == 0 || s < best) best = s;
            }
            const double regret = to_double(loss - best);
            mean += regret;
            sq += regret * regret;
        }
        mean /= trials;
        const double se = std::sqrt((sq / trials - mean * mean) / trials);
        CHECK(mean >= 2.0 - 3 * se);
        CHECK(mean <= 2.0 + 3 * se);
    }
}

TEST_CASE("supervised game value dominates every per-tree Rademacher average") {
    const std::vector<Rat> signs{Rat(1), Rat(-1)};
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        RngStream rng(seed, "test.games.uplow");
        const int n = 1 + static_cast<int>(rng.next_below(2));
        const int rows = 1 + static_cast<int>(rng.next_below(3));
        const int T = 1 + static_cast<int>(rng.next_below(2));
        const auto cls = random_class(n, rows, ClassKind::RealGrid, 4, seed);
        const auto spec = supervised_spec(cls, signs, T);
        const Rat val = value_primal(spec).value;
        enumerate_trees(n, T, 100000, [&](const DomainTree& x) {
            const Rat rad = rad_fixed_tree(cls, x).exact_value;
            CHECK(rad == rad_adversary_exact_regret(cls, x, plays_zero));
            CHECK(rad <= val);
        });
    }
}

TEST_CASE("minimax and stochastic adversaries replay stored structure") {
    SUBCASE("minimax on matching pennies") {
        GameSpec spec;
        spec.cls = pennies_class();
        spec.horizon = 2;
        const auto val = value_primal(spec);
        auto adv = minimax_adversary(spec, val);
        CHECK(adv->name() == "minimax");
        CHECK(adv->horizon() == 2);
        int seen[2] = {0, 0};
        for (std::uint64_t seed = 0; seed < 64; ++seed) {
            adv->reset(seed);
            const auto mv1 = adv->next(1);
            REQUIRE(mv1.x >= 0);
            REQUIRE(mv1.x < 2);
            ++seen[mv1.x];
            const auto mv2 = adv->next(2);
            CHECK(mv2.x >= 0);
            CHECK(mv2.x < 2);
            CHECK(mv2.pair == -1);
        }
        CHECK(seen[0] > 8);
        CHECK(seen[1] > 8);
        adv->reset(5);
        const int first = adv->next(1).x;
        adv->reset(5);
        CHECK(adv->next(1).x == first);
    }
    SUBCASE("minimax on a supervised spec decodes pairs") {
        const auto spec = supervised_spec(sign_constants(), {Rat(1), Rat(-1)}, 1);
        const auto val = value_primal(spec);
        auto adv = minimax_adversary(spec, val);
        adv->reset(9);
        const auto mv = adv->next(1);
        CHECK(mv.x == 0);
        CHECK((mv.y == 1 || mv.y == -1));
        CHECK(mv.pair == (mv.y == 1 ? 0 : 1));
    }
    SUBCASE("minimax requires stored mixtures") {
        GameSpec spec;
        spec.cls = pennies_class();
        spec.horizon = 2;
        CHECK_THROWS_AS(minimax_adversary(spec, GameValue{}), StructureError);
    }
    SUBCASE("stochastic draws stay inside the declared ranges") {
        auto adv = stochastic_adversary(3, {Rat(-1), Rat(1)}, 5);
        CHECK(adv->name() == "stochastic");
        CHECK(adv->horizon() == 5);
        CHECK_THROWS_AS(adv->next(1), ProtocolError);
        adv->reset(3);
        for (int t = 1; t <= 5; ++t) {
            const auto mv = adv->next(t);
            CHECK(mv.x >= 0);
            CHECK(mv.x < 3);
            CHECK((mv.y == 1 || mv.y == -1));
            CHECK(mv.pair == mv.x * 2 + (mv.y == -1 ? 0 : 1));
        }
        CHECK_THROWS_AS(adv->next(7), ProtocolError);
        CHECK_THROWS_AS(stochastic_adversary(0, {}, 1), std::domain_error);
    }
}
