#include "seqcomplex/learners.hpp"

#include "seqcomplex/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

namespace seqcomplex {

namespace {

FatSoaState make_state(const FunctionClass& cls, const Rat& alpha,
                       std::shared_ptr<FatDimCache> cache) {
    if (cls.size() == 0) throw StructureError("fat-soa: empty class");
    FatSoaState st;
    st.cls = cls;
    st.alpha = alpha;
    st.grid = alpha_grid(alpha);
    if (st.grid.empty()) throw std::domain_error("fat-soa: alpha too large, the scale grid is empty");
    st.version = full_mask(cls);
    st.cache = cache ? std::move(cache) : std::make_shared<FatDimCache>(cls, alpha);
    return st;
}

bool designated_at(const ExpertSpec& spec, int t, int* pos) {
    auto it = std::lower_bound(spec.rounds.begin(), spec.rounds.end(), t);
    if (it == spec.rounds.end() || *it != t) return false;
    *pos = static_cast<int>(it - spec.rounds.begin());
    return true;
}

int sample_index(const std::vector<double>& w, RngStream& rng) {
    double u = rng.next_unit();
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        acc += w[i];
        if (u < acc) return static_cast<int>(i);
    }
    return static_cast<int>(w.size()) - 1;
}

void check_priors(std::size_t experts, const std::vector<double>& priors) {
    if (experts == 0) throw std::domain_error("ewa: expert pool is empty");
    if (priors.size() != experts) throw std::domain_error("ewa: one prior per expert required");
    double sum = 0.0;
    for (double p : priors) {
        if (!(p > 0.0)) throw std::domain_error("ewa: priors must be strictly positive");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("ewa: priors must sum to 1");
}

void check_label(const Rat& y) {
    if (y < -1 || y > 1) throw std::domain_error("labels must lie in [-1, 1]");
}

// Base prediction and the grid position its floor cell excludes depend only
// on the version mask, so one computation serves every expert sharing that
// mask this round. The probe's version mask is overwritten on a miss.
std::pair<Rat, int> base_prediction(FatSoaState& probe, std::uint64_t version, int x,
                                    std::unordered_map<std::uint64_t, std::pair<Rat, int>>& memo) {
    auto it = memo.find(version);
    if (it == memo.end()) {
        probe.version = version;
        Rat pred = fat_soa_predict(probe, x);
        Rat excluded = floor_alpha(pred, probe.alpha);
        int ex = -1;
        for (std::size_t i = 0; i < probe.grid.size(); ++i)
            if (probe.grid[i] == excluded) {
                ex = static_cast<int>(i);
                break;
            }
        it = memo.emplace(version, std::pair<Rat, int>(std::move(pred), ex)).first;
    }
    return it->second;
}

// The `remaining`-th grid point counted with position `ex` skipped; matches
// the expert_peek walk over grid values other than the excluded one.
Rat alternative_value(const std::vector<Rat>& grid, int ex, int remaining) {
    int idx = (ex >= 0 && remaining >= ex) ? remaining + 1 : remaining;
    if (idx >= static_cast<int>(grid.size()))
        throw StructureError("expert spec: alternative index outside the grid");
    return grid[idx];
}

}  // namespace

FatSoaState make_fat_soa(const FunctionClass& cls, const Rat& alpha) {
    return make_state(cls, alpha, nullptr);
}

std::uint64_t restrict_version(const FunctionClass& cls, std::uint64_t version, int x,
                               const Rat& r, const Rat& alpha) {
    if (x < 0 || x >= cls.domain_size) throw std::out_of_range("restrict: point outside domain");
    Rat lo = r - alpha / 2, hi = r + alpha / 2;
    // The bottom cell keeps its left endpoint: the grid starts at -1+alpha/2,
    // so without it the value -1 would lie in no cell at all and a realizable
    // update could drop the target row. Cell diameters stay alpha.
    bool closed_left = lo <= -1;
    std::uint64_t out = 0;
    for (int f = 0; f < cls.size(); ++f) {
        if (!(version >> f & 1)) continue;
        Rat v = cls.value(f, x);
        if ((v > lo || (closed_left && v == lo)) && v <= hi) out |= std::uint64_t{1} << f;
    }
    return out;
}

std::vector<int> fat_soa_argmax(const FatSoaState& state, int x) {
    std::vector<int> best;
    int best_fat = -2;
    for (int i = 0; i < static_cast<int>(state.grid.size()); ++i) {
        std::uint64_t sub =
            restrict_version(state.cls, state.version, x, state.grid[i], state.alpha);
        int fat = fat_dim_mask(state.cls, sub, *state.cache);
        if (fat > best_fat) {
            best_fat = fat;
            best.clear();
        }
        if (fat == best_fat) best.push_back(i);
    }
    return best;
}

Rat fat_soa_predict(const FatSoaState& state, int x) {
    if (state.version == 0) throw ProtocolError("fat-soa: version space is empty");
    std::vector<int> best = fat_soa_argmax(state, x);
    std::uint64_t sub = restrict_version(state.cls, state.version, x, state.grid[best.front()],
                                         state.alpha);
    int best_fat = fat_dim_mask(state.cls, sub, *state.cache);
    // With the maximum at the full version-space dimension, three maximizers
    // (or two non-adjacent ones) would assemble a deeper shattered tree, so
    // the mistake bound itself would be broken.
    if (best_fat == fat_dim_mask(state.cls, state.version, *state.cache)) {
        bool ok = best.size() == 1 ||
                  (best.size() == 2 && best[1] == best[0] + 1);
        if (!ok)
            throw ProtocolError(
                "fat-soa: maximizers at the full dimension must be at most two adjacent grid "
                "points");
    }
    Rat sum = 0;
    for (int i : best) sum += state.grid[i];
    return sum / static_cast<int>(best.size());
}

void fat_soa_update(FatSoaState& state, int x, const Rat& y) {
    check_label(y);
    Rat pred = fat_soa_predict(state, x);
    if (abs_rat(pred - y) <= state.alpha) return;
    std::uint64_t next =
        restrict_version(state.cls, state.version, x, floor_alpha(y, state.alpha), state.alpha);
    if (next == 0)
        throw ProtocolError(
            "fat-soa: update emptied the version space, labels are not realizable at this scale");
    state.version = next;
}

int fat_soa_mistakes(const FunctionClass& cls, const Rat& alpha, int f,
                     const std::vector<int>& xs) {
    if (f < 0 || f >= cls.size()) throw std::out_of_range("fat_soa_mistakes: row outside class");
    FatSoaState st = make_fat_soa(cls, alpha);
    int mistakes = 0;
    for (int x : xs) {
        Rat y = cls.value(f, x);
        if (abs_rat(fat_soa_predict(st, x) - y) > alpha) ++mistakes;
        fat_soa_update(st, x, y);
    }
    return mistakes;
}

BigInt expert_count(const FunctionClass& cls, const Rat& alpha, int T) {
    if (T < 1) throw std::domain_error("expert_count: horizon must be >= 1");
    int fat = fat_dim(cls, alpha);
    BigInt choices = std::max(static_cast<int>(alpha_grid(alpha).size()) - 1, 0);
    BigInt total = 0, binom = 1, power = 1;
    for (int L = 0; L <= std::min(fat, T); ++L) {
        total += binom * power;
        binom = binom * (T - L) / (L + 1);
        power *= choices;
    }
    return total;
}

std::vector<ExpertSpec> enumerate_experts(const FunctionClass& cls, const Rat& alpha, int T,
                                          std::uint64_t budget) {
    if (budget == 0) budget = enumeration_budget();
    BigInt count = expert_count(cls, alpha, T);
    if (count > budget)
        throw CapacityError("expert pool of size " + count.str() + " exceeds budget " +
                            std::to_string(budget));
    int fat = fat_dim(cls, alpha);
    int choices = static_cast<int>(alpha_grid(alpha).size()) - 1;
    std::vector<ExpertSpec> out;
    out.reserve(count.convert_to<std::size_t>());
    out.push_back({});
    for (int L = 1; L <= std::min(fat, T) && choices > 0; ++L) {
        std::vector<int> rounds(L);
        std::iota(rounds.begin(), rounds.end(), 1);
        while (true) {
            std::vector<int> alt(L, 0);
            while (true) {
                out.push_back({rounds, alt});
                int j = L - 1;
                while (j >= 0 && ++alt[j] == choices) alt[j--] = 0;
                if (j < 0) break;
            }
            int j = L - 1;
            while (j >= 0 && rounds[j] == T - (L - 1 - j)) --j;
            if (j < 0) break;
            ++rounds[j];
            for (int k = j + 1; k < L; ++k) rounds[k] = rounds[k - 1] + 1;
        }
    }
    return out;
}

ExpertState make_expert_state(const FunctionClass& cls, const Rat& alpha,
                              std::shared_ptr<FatDimCache> cache) {
    ExpertState st;
    st.soa = make_state(cls, alpha, std::move(cache));
    return st;
}

Rat expert_peek(const ExpertSpec& spec, const ExpertState& state, int x, int t) {
    if (spec.rounds.size() != spec.alternatives.size())
        throw StructureError("expert spec: rounds and alternatives must align");
    if (state.dead) return Rat(0);
    Rat pred = fat_soa_predict(state.soa, x);
    int pos = 0;
    if (!designated_at(spec, t, &pos)) return pred;
    Rat excluded = floor_alpha(pred, state.soa.alpha);
    int remaining = spec.alternatives[pos];
    for (const Rat& r : state.soa.grid) {
        if (r == excluded) continue;
        if (remaining == 0) return r;
        --remaining;
    }
    throw StructureError("expert spec: alternative index outside the grid");
}

Rat expert_predict(const ExpertSpec& spec, ExpertState& state, int x, int t) {
    Rat pred = expert_peek(spec, state, x, t);
    int pos = 0;
    if (!state.dead && designated_at(spec, t, &pos)) {
        state.soa.version =
            restrict_version(state.soa.cls, state.soa.version, x, pred, state.soa.alpha);
        if (state.soa.version == 0) state.dead = true;
    }
    return pred;
}

namespace {

class FatSoaLearner final : public Learner {
  public:
    FatSoaLearner(const FunctionClass& cls, const Rat& alpha)
        : cls_(cls), alpha_(alpha), cache_(std::make_shared<FatDimCache>(cls_, alpha_)) {
        reset(0);
    }

    void reset(std::uint64_t) override { state_ = make_state(cls_, alpha_, cache_); }
    Rat predict(int, int x) override { return fat_soa_predict(state_, x); }
    void observe(int, int x, const Rat& y) override { fat_soa_update(state_, x, y); }
    std::string name() const override { return "fatsoa"; }

  private:
    FunctionClass cls_;
    Rat alpha_;
    std::shared_ptr<FatDimCache> cache_;
    FatSoaState state_;
};

class ZeroLearner final : public Learner {
  public:
    void reset(std::uint64_t) override {}
    Rat predict(int, int) override { return Rat(0); }
    void observe(int, int, const Rat&) override {}
    std::string name() const override { return "const0"; }
};

}  // namespace

std::unique_ptr<Learner> fat_soa_learner(const FunctionClass& cls, const Rat& alpha) {
    return std::make_unique<FatSoaLearner>(cls, alpha);
}

std::unique_ptr<Learner> zero_learner() { return std::make_unique<ZeroLearner>(); }

EwaLearner::EwaLearner(const FunctionClass& cls, const Rat& alpha, std::vector<ExpertSpec> specs,
                       std::vector<double> priors, double eta)
    : cls_(cls),
      alpha_(alpha),
      specs_(std::move(specs)),
      priors_(std::move(priors)),
      eta_(eta),
      cache_(std::make_shared<FatDimCache>(cls_, alpha_)) {
    check_priors(specs_.size(), priors_);
    if (!(eta_ >= 0)) throw std::domain_error("ewa: eta must be nonnegative");
    reset(0);
}

void EwaLearner::reset(std::uint64_t trial_seed) {
    rng_.emplace(trial_seed, "learner.ewa");
    states_.clear();
    states_.reserve(specs_.size());
    for (std::size_t i = 0; i < specs_.size(); ++i)
        states_.push_back(make_expert_state(cls_, alpha_, cache_));
    weights_ = priors_;
    predicted_t_ = observed_t_ = 0;
    round_x_ = -1;
    sampled_ = -1;
}

Rat EwaLearner::predict(int t, int x) {
    if (t != observed_t_ + 1 || predicted_t_ != observed_t_)
        throw ProtocolError("ewa: predict called out of order");
    round_preds_.clear();
    round_preds_.reserve(specs_.size());
    std::unordered_map<std::uint64_t, std::pair<Rat, int>> memo;
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        if (states_[i].dead) {
            round_preds_.push_back(Rat(0));
            continue;
        }
        auto [pred, ex] = base_prediction(states_[i].soa, states_[i].soa.version, x, memo);
        int pos = 0;
        if (!designated_at(specs_[i], t, &pos))
            round_preds_.push_back(std::move(pred));
        else
            round_preds_.push_back(
                alternative_value(states_[i].soa.grid, ex, specs_[i].alternatives[pos]));
    }
    // The expert is sampled before its prediction is used, so the draw is
    // independent of the revealed point's values.
    sampled_ = sample_index(weights_, *rng_);
    predicted_t_ = t;
    round_x_ = x;
    return round_preds_[sampled_];
}

void EwaLearner::observe(int t, int x, const Rat& y) {
    if (t != predicted_t_ || predicted_t_ == observed_t_)
        throw ProtocolError("ewa: observe must follow predict for the same round");
    if (x != round_x_) throw ProtocolError("ewa: observe point differs from predicted point");
    check_label(y);
    double total = 0.0;
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        double loss = to_double(abs_rat(round_preds_[i] - y));
        weights_[i] *= std::exp(-eta_ * loss / 2.0);
        total += weights_[i];
    }
    for (double& w : weights_) w /= total;
    // round_preds_ holds each expert's peek for this (t, x); at designated
    // rounds the version space restricts to that played value's cell.
    for (std::size_t i = 0; i < specs_.size(); ++i) {
        if (states_[i].dead) continue;
        int pos = 0;
        if (!designated_at(specs_[i], t, &pos)) continue;
        states_[i].soa.version =
            restrict_version(cls_, states_[i].soa.version, x, round_preds_[i], alpha_);
        if (states_[i].soa.version == 0) states_[i].dead = true;
    }
    observed_t_ = t;
}

std::unique_ptr<EwaLearner> ewa_learner(const FunctionClass& cls, const Rat& alpha,
                                        std::vector<ExpertSpec> specs,
                                        std::vector<double> priors, double eta) {
    return std::make_unique<EwaLearner>(cls, alpha, std::move(specs), std::move(priors), eta);
}

double ewa_matrix_trial(const std::vector<std::vector<double>>& losses,
                        const std::vector<double>& priors, double eta, std::uint64_t seed) {
    if (losses.empty()) throw std::domain_error("ewa: expert pool is empty");
    std::size_t T = losses.front().size();
    if (T == 0) throw std::domain_error("ewa: at least one round required");
    for (const auto& row : losses) {
        if (row.size() != T) throw std::domain_error("ewa: loss rows must share one horizon");
        for (double v : row)
            if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("ewa: losses must lie in [0, 1]");
    }
    check_priors(losses.size(), priors);
    if (!(eta >= 0)) throw std::domain_error("ewa: eta must be nonnegative");
    RngStream rng(seed, "learner.ewa.matrix");
    std::vector<double> w = priors;
    double total_loss = 0.0;
    for (std::size_t t = 0; t < T; ++t) {
        total_loss += losses[sample_index(w, rng)][t];
        double norm = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            w[i] *= std::exp(-eta * losses[i][t]);
            norm += w[i];
        }
        for (double& v : w) v /= norm;
    }
    return total_loss;
}

AgnosticLearner::AgnosticLearner(const FunctionClass& cls, int T, std::uint64_t expert_budget,
                                 int max_scales)
    : cls_(cls), horizon_(T) {
    if (T < 1) throw std::domain_error("agnostic: horizon must be >= 1");
    if (max_scales < 1) throw std::domain_error("agnostic: at least one scale required");
    if (expert_budget == 0) throw std::domain_error("agnostic: expert budget must be positive");
    eta_ = 1.0 / std::sqrt(static_cast<double>(T));
    BigInt used = 0;
    for (int i = 1; i <= max_scales; ++i) {
        Rat alpha = Rat(BigInt(1), BigInt(1) << i);
        BigInt count = expert_count(cls_, alpha, T);
        if (used + count > expert_budget) {
            meta_.truncated = true;
            break;
        }
        Scale sc;
        sc.index = i;
        sc.alpha = alpha;
        sc.cache = std::make_shared<FatDimCache>(cls_, alpha);
        sc.fat = fat_dim(cls_, alpha);
        sc.specs = enumerate_experts(cls_, alpha, T, expert_budget);
        sc.probe = make_state(cls_, alpha, sc.cache);
        used += count;
        scales_.push_back(std::move(sc));
    }
    if (scales_.empty())
        throw CapacityError("agnostic: the scale-1 expert pool alone exceeds the budget");
    double mass = 0.0;
    constexpr double pi2 = std::numbers::pi * std::numbers::pi;
    std::vector<double> raw;
    for (std::size_t s = 0; s < scales_.size(); ++s) {
        const Scale& sc = scales_[s];
        double share = 6.0 / (pi2 * sc.index * sc.index);
        mass += share;
        for (std::size_t j = 0; j < sc.specs.size(); ++j) {
            pool_.emplace_back(static_cast<int>(s), static_cast<int>(j));
            raw.push_back(share / static_cast<double>(sc.specs.size()));
        }
    }
    // Renormalizing the truncated tail away only raises each prior, which
    // only shrinks the log(1/p) overhead in the guarantee.
    priors_.reserve(raw.size());
    for (double p : raw) priors_.push_back(p / mass);
    meta_.scales = static_cast<int>(scales_.size());
    meta_.experts = pool_.size();
    meta_.prior_mass = mass;
    reset(0);
}

void AgnosticLearner::reset(std::uint64_t trial_seed) {
    rng_.emplace(trial_seed, "learner.agnostic");
    states_.assign(pool_.size(), Track{full_mask(cls_), false});
    weights_ = priors_;
    predicted_t_ = observed_t_ = 0;
    round_x_ = -1;
}

Rat AgnosticLearner::predict(int t, int x) {
    if (t != observed_t_ + 1 || predicted_t_ != observed_t_)
        throw ProtocolError("agnostic: predict called out of order");
    round_preds_.clear();
    round_preds_.reserve(pool_.size());
    std::vector<std::unordered_map<std::uint64_t, std::pair<Rat, int>>> memo(scales_.size());
    for (std::size_t k = 0; k < pool_.size(); ++k) {
        const auto& [s, j] = pool_[k];
        if (states_[k].dead) {
            round_preds_.push_back(Rat(0));
            continue;
        }
        Scale& sc = scales_[s];
        auto [pred, ex] = base_prediction(sc.probe, states_[k].version, x, memo[s]);
        int pos = 0;
        if (!designated_at(sc.specs[j], t, &pos))
            round_preds_.push_back(std::move(pred));
        else
            round_preds_.push_back(
                alternative_value(sc.probe.grid, ex, sc.specs[j].alternatives[pos]));
    }
    int pick = sample_index(weights_, *rng_);
    predicted_t_ = t;
    round_x_ = x;
    return round_preds_[pick];
}

void AgnosticLearner::observe(int t, int x, const Rat& y) {
    if (t != predicted_t_ || predicted_t_ == observed_t_)
        throw ProtocolError("agnostic: observe must follow predict for the same round");
    if (x != round_x_)
        throw ProtocolError("agnostic: observe point differs from predicted point");
    check_label(y);
    double total = 0.0;
    for (std::size_t k = 0; k < pool_.size(); ++k) {
        double loss = to_double(abs_rat(round_preds_[k] - y));
        weights_[k] *= std::exp(-eta_ * loss / 2.0);
        total += weights_[k];
    }
    for (double& w : weights_) w /= total;
    // round_preds_ holds each expert's peek for this (t, x); at designated
    // rounds the version space restricts to that played value's cell.
    for (std::size_t k = 0; k < pool_.size(); ++k) {
        const auto& [s, j] = pool_[k];
        if (states_[k].dead) continue;
        int pos = 0;
        if (!designated_at(scales_[s].specs[j], t, &pos)) continue;
        states_[k].version =
            restrict_version(cls_, states_[k].version, x, round_preds_[k], scales_[s].alpha);
        if (states_[k].version == 0) states_[k].dead = true;
    }
    observed_t_ = t;
}

double AgnosticLearner::bound_at_scale(int scale_index) const {
    for (const Scale& sc : scales_) {
        if (sc.index != scale_index) continue;
        double a = to_double(sc.alpha);
        double T = static_cast<double>(horizon_);
        return a * T + std::sqrt(T * sc.fat * std::log(2.0 * T / a)) +
               std::sqrt(T) * (3.0 + 2.0 * std::log(std::log(1.0 / a)));
    }
    throw std::domain_error("agnostic: scale not realized");
}

double AgnosticLearner::best_bound() const {
    double best = bound_at_scale(scales_.front().index);
    for (const Scale& sc : scales_) best = std::min(best, bound_at_scale(sc.index));
    return best;
}

std::unique_ptr<AgnosticLearner> agnostic_learner(const FunctionClass& cls, int T,
                                                  std::uint64_t expert_budget, int max_scales) {
    return std::make_unique<AgnosticLearner>(cls, T, expert_budget, max_scales);
}

namespace {

std::string transcript(int trial, const RegretTrace& tr) {
    std::string s = " | trial " + std::to_string(trial) + ":";
    for (std::size_t t = 0; t < tr.moves.size(); ++t) {
        s += " (x=" + std::to_string(tr.moves[t].x) + ", y=" + rat_to_string(tr.moves[t].y);
        s += t < tr.plays.size() ? ", play=" + rat_to_string(tr.plays[t]) + ")" : ")";
    }
    return s;
}

}  // namespace

std::vector<RegretTrace> simulate(Learner& learner, Adversary& adversary,
                                  const FunctionClass& cls, int T, int trials,
                                  std::uint64_t seed) {
    if (T < 1) throw std::domain_error("simulate: horizon must be >= 1");
    if (trials < 1) throw std::domain_error("simulate: trials must be >= 1");
    if (cls.size() == 0) throw StructureError("simulate: empty class");
    if (adversary.horizon() != T)
        throw StructureError("simulate: adversary horizon differs from requested horizon");
    std::vector<RegretTrace> out;
    out.reserve(static_cast<std::size_t>(trials));
    for (int trial = 0; trial < trials; ++trial) {
        RegretTrace tr;
        tr.seed = RngStream(seed, "sim.trial." + std::to_string(trial)).next_u64();
        tr.cumulative = Rat(0);
        learner.reset(tr.seed);
        adversary.reset(tr.seed);
        try {
            for (int t = 1; t <= T; ++t) {
                AdversaryMove mv = adversary.next(t);
                if (mv.x < 0 || mv.x >= cls.domain_size)
                    throw StructureError("simulate: adversary point outside the class domain");
                if (mv.y < -1 || mv.y > 1)
                    throw StructureError("simulate: adversary label outside [-1, 1]");
                tr.moves.push_back(mv);
                Rat play = learner.predict(t, mv.x);
                tr.plays.push_back(play);
                Rat loss = abs_rat(play - mv.y);
                tr.losses.push_back(loss);
                tr.cumulative += loss;
                learner.observe(t, mv.x, mv.y);
                adversary.observe(play);
            }
        } catch (const ProtocolError& e) {
            throw ProtocolError(e.what() + transcript(trial, tr));
        }
        bool first = true;
        for (int f = 0; f < cls.size(); ++f) {
            Rat total = 0;
            for (const AdversaryMove& mv : tr.moves) total += abs_rat(cls.value(f, mv.x) - mv.y);
            if (first || total < tr.comparator) {
                tr.comparator = total;
                first = false;
            }
        }
        tr.regret = tr.cumulative - tr.comparator;
        out.push_back(std::move(tr));
    }
    return out;
}

}  // namespace seqcomplex
