#include "seqcomplex/games.hpp"

#include "seqcomplex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <utility>

namespace seqcomplex {

namespace {

// Standard game LP for a strictly positive payoff matrix A (row player
// minimizing): maximize 1.w subject to A^T w <= 1, w >= 0. At the optimum
// 1.w = 1/v(A), w/1.w is an optimal row mixture, and the constraint duals
// (read off the slack columns of the objective row), scaled the same way,
// form an optimal column mixture. Bland's rule keeps every run finite.
template <class S>
struct GameLp {
    S objective;
    std::vector<S> w;
    std::vector<S> u;
};

template <class S, class Pos>
GameLp<S> positive_game_lp(const std::vector<std::vector<S>>& A, Pos positive) {
    const int rows = static_cast<int>(A.size());
    const int cols = static_cast<int>(A[0].size());
    const int vars = rows + cols;

    std::vector<std::vector<S>> tab(cols, std::vector<S>(vars + 1, S(0)));
    for (int i = 0; i < cols; ++i) {
        for (int f = 0; f < rows; ++f) tab[i][f] = A[f][i];
        tab[i][rows + i] = S(1);
        tab[i][vars] = S(1);
    }
    std::vector<S> obj(vars + 1, S(0));
    for (int f = 0; f < rows; ++f) obj[f] = S(-1);
    std::vector<int> basis(cols);
    for (int i = 0; i < cols; ++i) basis[i] = rows + i;

    const int pivot_cap = 1000 + 50 * vars * vars;
    for (int step = 0;; ++step) {
        if (step > pivot_cap) throw StructureError("matrix game LP failed to converge");
        int enter = -1;
        for (int j = 0; j < vars; ++j) {
            if (positive(-obj[j])) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;
        int leave = -1;
        for (int i = 0; i < cols; ++i) {
            if (!positive(tab[i][enter])) continue;
            if (leave < 0) {
                leave = i;
                continue;
            }
            const S lhs = tab[i][vars] * tab[leave][enter];
            const S rhs = tab[leave][vars] * tab[i][enter];
            if (lhs < rhs || (!(rhs < lhs) && basis[i] < basis[leave])) leave = i;
        }
        if (leave < 0) throw StructureError("matrix game LP unbounded");
        const S pivot = tab[leave][enter];
        for (int j = 0; j <= vars; ++j) tab[leave][j] /= pivot;
        for (int i = 0; i < cols; ++i) {
            if (i == leave) continue;
            const S c = tab[i][enter];
            if (c == S(0)) continue;
            for (int j = 0; j <= vars; ++j) tab[i][j] -= c * tab[leave][j];
        }
        const S oc = obj[enter];
        if (!(oc == S(0))) {
            for (int j = 0; j <= vars; ++j) obj[j] -= oc * tab[leave][j];
        }
        basis[leave] = enter;
    }

    GameLp<S> out;
    out.objective = obj[vars];
    out.w.assign(rows, S(0));
    for (int i = 0; i < cols; ++i) {
        if (basis[i] < rows) out.w[basis[i]] = tab[i][vars];
    }
    out.u.assign(cols, S(0));
    for (int i = 0; i < cols; ++i) out.u[i] = obj[rows + i];
    return out;
}

template <class S>
std::vector<S> normalized(const std::vector<S>& raw) {
    S total(0);
    for (const S& v : raw) total += v;
    std::vector<S> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) out[i] = raw[i] / total;
    return out;
}

Rat row_guarantee(const std::vector<std::vector<Rat>>& M, const std::vector<Rat>& q) {
    const std::size_t cols = M[0].size();
    Rat hi;
    for (std::size_t x = 0; x < cols; ++x) {
        Rat s = 0;
        for (std::size_t f = 0; f < M.size(); ++f) s += q[f] * M[f][x];
        if (x == 0 || s > hi) hi = s;
    }
    return hi;
}

Rat col_guarantee(const std::vector<std::vector<Rat>>& M, const std::vector<Rat>& p) {
    Rat lo;
    for (std::size_t f = 0; f < M.size(); ++f) {
        Rat s = 0;
        for (std::size_t x = 0; x < M[f].size(); ++x) s += M[f][x] * p[x];
        if (f == 0 || s < lo) lo = s;
    }
    return lo;
}

}  // namespace

MatrixGameSolution solve_matrix_game(const std::vector<std::vector<Rat>>& payoff) {
    const int rows = static_cast<int>(payoff.size());
    if (rows == 0) throw std::domain_error("solve_matrix_game: empty matrix");
    const int cols = static_cast<int>(payoff[0].size());
    if (cols == 0) throw std::domain_error("solve_matrix_game: empty matrix");
    for (const auto& row : payoff) {
        if (static_cast<int>(row.size()) != cols)
            throw StructureError("solve_matrix_game: ragged matrix");
    }

    Rat low = payoff[0][0];
    for (const auto& row : payoff) {
        for (const Rat& v : row) low = std::min(low, v);
    }
    const Rat shift = Rat(1) - low;

    MatrixGameSolution sol;
    if (rows <= 12 && cols <= 12) {
        std::vector<std::vector<Rat>> A(rows, std::vector<Rat>(cols));
        for (int f = 0; f < rows; ++f) {
            for (int x = 0; x < cols; ++x) A[f][x] = payoff[f][x] + shift;
        }
        const auto lp = positive_game_lp<Rat>(A, [](const Rat& v) { return v > 0; });
        sol.row_mixture = normalized(lp.w);
        sol.col_mixture = normalized(lp.u);
        sol.exact = true;
        sol.gap = 0.0;
        const Rat hi = row_guarantee(payoff, sol.row_mixture);
        const Rat lo = col_guarantee(payoff, sol.col_mixture);
        if (hi != lo) throw StructureError("solve_matrix_game: certificates disagree");
        sol.value = hi;
        return sol;
    }

    std::vector<std::vector<double>> A(rows, std::vector<double>(cols));
    for (int f = 0; f < rows; ++f) {
        for (int x = 0; x < cols; ++x) A[f][x] = to_double(payoff[f][x] + shift);
    }
    const auto lp = positive_game_lp<double>(A, [](double v) { return v > 1e-12; });
    const auto q = normalized(lp.w);
    const auto p = normalized(lp.u);
    double hi = -std::numeric_limits<double>::infinity();
    for (int x = 0; x < cols; ++x) {
        double s = 0;
        for (int f = 0; f < rows; ++f) s += q[f] * to_double(payoff[f][x]);
        hi = std::max(hi, s);
    }
    double lo = std::numeric_limits<double>::infinity();
    for (int f = 0; f < rows; ++f) {
        double s = 0;
        for (int x = 0; x < cols; ++x) s += to_double(payoff[f][x]) * p[x];
        lo = std::min(lo, s);
    }
    sol.gap = hi - lo;
    if (!(sol.gap <= 1e-9)) throw StructureError("solve_matrix_game: duality gap above tolerance");
    sol.exact = false;
    sol.value = Rat((hi + lo) / 2);
    sol.row_mixture.reserve(q.size());
    for (double v : q) sol.row_mixture.emplace_back(v);
    sol.col_mixture.reserve(p.size());
    for (double v : p) sol.col_mixture.emplace_back(v);
    return sol;
}

namespace {

// sum_{t<=T} n^t, saturating just above `budget`.
std::uint64_t induction_states(int n, int T, std::uint64_t budget) {
    std::uint64_t total = 0;
    std::uint64_t layer = 1;
    for (int t = 0; t <= T; ++t) {
        total += layer;
        if (total > budget) return budget + 1;
        if (t < T) {
            if (layer > budget / static_cast<std::uint64_t>(n)) return budget + 1;
            layer *= static_cast<std::uint64_t>(n);
        }
    }
    return total;
}

struct Induction {
    const FunctionClass& cls;
    int T;
    bool dual;
    GameValue& out;
    std::map<std::vector<int>, Rat> memo;

    Rat visit(std::vector<int>& h) {
        if (auto it = memo.find(h); it != memo.end()) return it->second;
        Rat result;
        if (static_cast<int>(h.size()) == T) {
            Rat best;
            for (int f = 0; f < cls.size(); ++f) {
                Rat s = 0;
                for (int x : h) s += cls.value(f, x);
                if (f == 0 || s < best) best = s;
            }
            result = -best;
        } else {
            const int n = cls.domain_size;
            std::vector<Rat> cont(n);
            for (int x = 0; x < n; ++x) {
                h.push_back(x);
                cont[x] = visit(h);
                h.pop_back();
            }
            std::vector<std::vector<Rat>> M(cls.size(), std::vector<Rat>(n));
            for (int f = 0; f < cls.size(); ++f) {
                for (int x = 0; x < n; ++x) M[f][x] = cls.value(f, x) + cont[x];
            }
            const auto sol = solve_matrix_game(M);
            // The dual stage program sup_p [min_f p.loss_f + p.cont] is the
            // epigraph LP over the same matrix; its value is read off the
            // column certificate, the primal's off the row certificate.
            result = dual ? col_guarantee(M, sol.col_mixture) : row_guarantee(M, sol.row_mixture);
            out.player_mixtures.emplace(h, sol.row_mixture);
            out.adversary_mixtures.emplace(h, sol.col_mixture);
        }
        memo.emplace(h, result);
        return result;
    }
};

GameValue value_of(const GameSpec& spec, bool dual) {
    if (spec.horizon < 0) throw std::domain_error("game value: horizon must be nonnegative");
    if (spec.cls.size() == 0) throw std::domain_error("game value: class is empty");
    if (induction_states(spec.cls.domain_size, spec.horizon, spec.state_budget) >
        spec.state_budget)
        throw CapacityError("game value: backward induction state count exceeds budget");
    GameValue out;
    out.form = dual ? "dual" : "primal";
    Induction ind{spec.cls, spec.horizon, dual, out, {}};
    std::vector<int> h;
    out.value = ind.visit(h);
    out.states = ind.memo.size();
    out.exact = true;
    return out;
}

}  // namespace

GameValue value_primal(const GameSpec& spec) { return value_of(spec, false); }

GameValue value_dual(const GameSpec& spec) { return value_of(spec, true); }

GameSpec supervised_spec(const FunctionClass& cls, const std::vector<Rat>& labels, int horizon) {
    if (labels.empty()) throw std::domain_error("supervised_spec: label grid is empty");
    GameSpec spec;
    spec.cls = supervised_loss_class(cls, labels);
    spec.horizon = horizon;
    spec.mode = LossMode::Supervised;
    spec.base_domain = cls.domain_size;
    spec.labels = labels;
    return spec;
}

namespace {

class FixedTreeAdversary final : public Adversary {
  public:
    explicit FixedTreeAdversary(DomainTree x) : x_(std::move(x)) {}

    void reset(std::uint64_t trial_seed) override {
        RngStream rng(trial_seed, "adv.tree");
        signs_.resize(static_cast<std::size_t>(x_.depth));
        for (int& s : signs_) s = rng.next_sign();
        node_ = 0;
        t_ = 0;
    }

    AdversaryMove next(int t) override {
        if (signs_.size() != static_cast<std::size_t>(x_.depth) || t != t_ + 1 || t > x_.depth)
            throw ProtocolError("tree adversary: rounds must run 1..T after reset");
        AdversaryMove mv;
        mv.x = x_.values[node_];
        const int s = signs_[static_cast<std::size_t>(t - 1)];
        mv.y = Rat(s);
        node_ = 2 * node_ + 1 + (s > 0 ? 1 : 0);
        ++t_;
        return mv;
    }

    std::string name() const override { return "tree"; }
    int horizon() const override { return x_.depth; }

  private:
    DomainTree x_;
    std::vector<int> signs_;
    std::size_t node_ = 0;
    int t_ = 0;
};

// Certificate node presented during round t: level j of the tree along the
// modal signs of the completed blocks (ties toward +1).
int block_point(const LowerBoundPlan& plan, const std::vector<int>& eps, int t) {
    const int j = (t - 1) / plan.k;
    std::size_t node = 0;
    for (int b = 0; b < j; ++b) {
        int total = 0;
        for (int i = b * plan.k; i < (b + 1) * plan.k; ++i) total += eps[static_cast<std::size_t>(i)];
        node = 2 * node + 1 + (total >= 0 ? 1 : 0);
    }
    return plan.certificate.tree.values[node];
}

class LowerBoundAdversary final : public Adversary {
  public:
    LowerBoundAdversary(LowerBoundPlan plan, int T) : plan_(std::move(plan)), T_(T) {}

    void reset(std::uint64_t trial_seed) override {
        RngStream rng(trial_seed, "adv.lowerbound");
        eps_.resize(static_cast<std::size_t>(T_));
        for (int& e : eps_) e = rng.next_sign();
        t_ = 0;
    }

    AdversaryMove next(int t) override {
        if (eps_.size() != static_cast<std::size_t>(T_) || t != t_ + 1 || t > T_)
            throw ProtocolError("lower bound adversary: rounds must run 1..T after reset");
        AdversaryMove mv;
        mv.x = block_point(plan_, eps_, t);
        mv.y = Rat(eps_[static_cast<std::size_t>(t - 1)]);
        ++t_;
        return mv;
    }

    std::string name() const override { return "lowerbound"; }
    int horizon() const override { return T_; }

  private:
    LowerBoundPlan plan_;
    int T_;
    std::vector<int> eps_;
    int t_ = 0;
};

class StochasticAdversary final : public Adversary {
  public:
    StochasticAdversary(int domain_size, std::vector<Rat> labels, int T)
        : n_(domain_size), labels_(std::move(labels)), T_(T) {}

    void reset(std::uint64_t trial_seed) override {
        rng_.emplace(trial_seed, "adv.stochastic");
        t_ = 0;
    }

    AdversaryMove next(int t) override {
        if (!rng_ || t != t_ + 1 || t > T_)
            throw ProtocolError("stochastic adversary: rounds must run 1..T after reset");
        AdversaryMove mv;
        mv.x = static_cast<int>(rng_->next_below(static_cast<std::uint32_t>(n_)));
        if (!labels_.empty()) {
            const int j = static_cast<int>(rng_->next_below(static_cast<std::uint32_t>(labels_.size())));
            mv.y = labels_[static_cast<std::size_t>(j)];
            mv.pair = mv.x * static_cast<int>(labels_.size()) + j;
        }
        ++t_;
        return mv;
    }

    std::string name() const override { return "stochastic"; }
    int horizon() const override { return T_; }

  private:
    int n_;
    std::vector<Rat> labels_;
    int T_;
    std::optional<RngStream> rng_;
    int t_ = 0;
};

class MinimaxAdversary final : public Adversary {
  public:
    MinimaxAdversary(GameSpec spec, GameValue value)
        : spec_(std::move(spec)), value_(std::move(value)) {}

    void reset(std::uint64_t trial_seed) override {
        rng_.emplace(trial_seed, "adv.minimax");
        hist_.clear();
        t_ = 0;
    }

    AdversaryMove next(int t) override {
        if (!rng_ || t != t_ + 1 || t > spec_.horizon)
            throw ProtocolError("minimax adversary: rounds must run 1..T after reset");
        const auto it = value_.adversary_mixtures.find(hist_);
        if (it == value_.adversary_mixtures.end())
            throw StructureError("minimax adversary: no stored mixture for the current history");
        const auto& p = it->second;
        const double u = rng_->next_unit();
        int pick = static_cast<int>(p.size()) - 1;
        double acc = 0;
        for (std::size_t i = 0; i < p.size(); ++i) {
            acc += to_double(p[i]);
            if (u < acc) {
                pick = static_cast<int>(i);
                break;
            }
        }
        hist_.push_back(pick);
        ++t_;
        AdversaryMove mv;
        if (spec_.mode == LossMode::Supervised) {
            const int L = static_cast<int>(spec_.labels.size());
            mv.pair = pick;
            mv.x = pick / L;
            mv.y = spec_.labels[static_cast<std::size_t>(pick % L)];
        } else {
            mv.x = pick;
        }
        return mv;
    }

    std::string name() const override { return "minimax"; }
    int horizon() const override { return spec_.horizon; }

  private:
    GameSpec spec_;
    GameValue value_;
    std::vector<int> hist_;
    std::optional<RngStream> rng_;
    int t_ = 0;
};

// Enumerates all 2^T sign draws; `point_at` realizes the adversary's point
// for round t from the full draw (only entries before t may influence it).
Rat exact_supervised_regret(const FunctionClass& cls, int T,
                            const std::function<int(const std::vector<int>&, int)>& point_at,
                            const DeterministicPlayer& player) {
    if (cls.size() == 0) throw std::domain_error("exact regret: class is empty");
    if (T < 1) throw std::domain_error("exact regret: horizon must be positive");
    if (T > 20) throw CapacityError("exact regret: horizon above enumeration limit");
    Rat total = 0;
    std::vector<int> eps(static_cast<std::size_t>(T));
    std::vector<int> points(static_cast<std::size_t>(T));
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << T); ++mask) {
        for (int i = 0; i < T; ++i) eps[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? 1 : -1;
        std::vector<int> past_x;
        std::vector<Rat> past_y;
        Rat loss = 0;
        for (int t = 1; t <= T; ++t) {
            const int xt = point_at(eps, t);
            if (xt < 0 || xt >= cls.domain_size)
                throw StructureError("exact regret: point outside the class domain");
            const Rat yhat = player(t, xt, past_x, past_y);
            if (abs_rat(yhat) > 1) throw StructureError("exact regret: prediction outside [-1, 1]");
            const Rat y = Rat(eps[static_cast<std::size_t>(t - 1)]);
            loss += abs_rat(yhat - y);
            points[static_cast<std::size_t>(t - 1)] = xt;
            past_x.push_back(xt);
            past_y.push_back(y);
        }
        Rat best;
        for (int f = 0; f < cls.size(); ++f) {
            Rat s = 0;
            for (int t = 0; t < T; ++t)
                s += abs_rat(cls.value(f, points[static_cast<std::size_t>(t)]) -
                             Rat(eps[static_cast<std::size_t>(t)]));
            if (f == 0 || s < best) best = s;
        }
        total += loss - best;
    }
    return total / Rat(std::uint64_t{1} << T);
}

}  // namespace

std::unique_ptr<Adversary> rad_adversary(const DomainTree& x) {
    return std::make_unique<FixedTreeAdversary>(x);
}

LowerBoundPlan lower_bound_plan(const FunctionClass& cls, const Rat& alpha, int T) {
    if (T < 1) throw std::domain_error("lower_bound_plan: horizon must be positive");
    const int d = fat_dim(cls, alpha);
    if (d < 1) throw std::domain_error("lower_bound_plan: fat dimension is zero");
    LowerBoundPlan plan;
    plan.alpha = alpha;
    plan.certificate = extract_shattered_tree(cls, alpha);
    plan.d = d;
    if (T % d == 0) {
        plan.k = T / d;
        plan.blocks = d;
        plan.bound = to_double(alpha) * std::sqrt(static_cast<double>(T) * d / 8.0);
    } else if (T < d) {
        plan.k = 1;
        plan.blocks = T;
        plan.bound = to_double(alpha) * T / std::sqrt(8.0);
    } else {
        throw std::domain_error(
            "lower_bound_plan: horizon must be a multiple of the fat dimension or smaller");
    }
    return plan;
}

std::unique_ptr<Adversary> lower_bound_adversary(const FunctionClass& cls, const Rat& alpha,
                                                 int T) {
    return std::make_unique<LowerBoundAdversary>(lower_bound_plan(cls, alpha, T), T);
}

std::unique_ptr<Adversary> stochastic_adversary(int domain_size, std::vector<Rat> labels, int T) {
    if (domain_size < 1) throw std::domain_error("stochastic_adversary: empty domain");
    if (T < 0) throw std::domain_error("stochastic_adversary: negative horizon");
    return std::make_unique<StochasticAdversary>(domain_size, std::move(labels), T);
}

std::unique_ptr<Adversary> minimax_adversary(const GameSpec& spec, const GameValue& value) {
    if (spec.mode == LossMode::Supervised && spec.labels.empty())
        throw std::domain_error("minimax_adversary: supervised spec without labels");
    if (spec.horizon > 0 && value.adversary_mixtures.find(std::vector<int>{}) ==
                                value.adversary_mixtures.end())
        throw StructureError("minimax_adversary: value carries no stored mixtures");
    return std::make_unique<MinimaxAdversary>(spec, value);
}

Rat rad_adversary_exact_regret(const FunctionClass& cls, const DomainTree& x,
                               const DeterministicPlayer& player) {
    for (int v : x.values) {
        if (v < 0 || v >= cls.domain_size)
            throw StructureError("rad_adversary_exact_regret: tree leaves the class domain");
    }
    const auto point_at = [&x](const std::vector<int>& eps, int t) {
        std::size_t node = 0;
        for (int i = 0; i + 1 < t; ++i)
            node = 2 * node + 1 + (eps[static_cast<std::size_t>(i)] > 0 ? 1 : 0);
        return x.values[node];
    };
    return exact_supervised_regret(cls, x.depth, point_at, player);
}

Rat lower_bound_exact_regret(const FunctionClass& cls, const Rat& alpha, int T,
                             const DeterministicPlayer& player) {
    const LowerBoundPlan plan = lower_bound_plan(cls, alpha, T);
    const auto point_at = [&plan](const std::vector<int>& eps, int t) {
        return block_point(plan, eps, t);
    };
    return exact_supervised_regret(cls, T, point_at, player);
}

}  // namespace seqcomplex
