#pragma once

#include "seqcomplex/classes.hpp"
#include "seqcomplex/games.hpp"
#include "seqcomplex/rational.hpp"
#include "seqcomplex/rng.hpp"
#include "seqcomplex/shattering.hpp"
#include "seqcomplex/trees.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace seqcomplex {

// Version-space state of the scale-grid prediction algorithm: surviving rows
// as a bitset plus the grid and a fat-dimension memo shared across rounds
// (and across experts at the same scale; the memo is keyed by row mask).
struct FatSoaState {
    FunctionClass cls;
    Rat alpha;
    std::vector<Rat> grid;
    std::uint64_t version = 0;
    std::shared_ptr<FatDimCache> cache;
};

FatSoaState make_fat_soa(const FunctionClass& cls, const Rat& alpha);

// Rows of `version` whose value at x lies in the half-open cell
// (r - alpha/2, r + alpha/2]; the bottom cell additionally contains its left
// endpoint -1, so the cells tile the whole value range.
std::uint64_t restrict_version(const FunctionClass& cls, std::uint64_t version, int x,
                               const Rat& r, const Rat& alpha);

// Grid indices maximizing the fat dimension of the restricted version space;
// empty restrictions score -1, so any nonempty restriction beats them.
std::vector<int> fat_soa_argmax(const FatSoaState& state, int x);

// Mean of the argmax grid points. Whenever the maximum equals the dimension
// of the whole version space, at most two maximizers can occur and they must
// be adjacent grid points; a violation is reported as a protocol error, as
// is prediction from an empty version space.
Rat fat_soa_predict(const FatSoaState& state, int x);

// Keeps the version space when the prediction was within alpha of y,
// otherwise restricts to the cell of floor(y). An update that empties the
// version space means the input was not realizable and throws.
void fat_soa_update(FatSoaState& state, int x, const Rat& y);

// Rounds with |prediction - label| > alpha when the algorithm runs against
// labels generated by row f along xs. Bounded by fat_dim(cls, alpha).
int fat_soa_mistakes(const FunctionClass& cls, const Rat& alpha, int f,
                     const std::vector<int>& xs);

// A derived expert: designated rounds (1-based, strictly increasing) with,
// per round, which label to play counted among the grid points other than
// the floor of the expert's own current prediction. Storing that alternative
// index instead of a fixed grid value keeps the pool at (|B_alpha| - 1)^L
// per choice of rounds while the excluded value follows the state, and the
// label needed to track any target row is never the excluded one.
struct ExpertSpec {
    std::vector<int> rounds;
    std::vector<int> alternatives;
};

// Every spec with at most fat_dim(cls, alpha) designated rounds in 1..T.
// The pool size is exactly sum_{L=0}^{fat} C(T,L) * (|B_alpha| - 1)^L and
// at most (2T/alpha)^fat for T >= 2; a pool larger than `budget` throws
// CapacityError before allocating. budget = 0 means enumeration_budget().
std::vector<ExpertSpec> enumerate_experts(const FunctionClass& cls, const Rat& alpha, int T,
                                          std::uint64_t budget = 0);

// The pool size formula above, without enumerating.
BigInt expert_count(const FunctionClass& cls, const Rat& alpha, int T);

// Runtime state of one expert. `dead` marks an emptied version space; a dead
// expert predicts 0 at every remaining round and never throws.
struct ExpertState {
    FatSoaState soa;
    bool dead = false;
};

ExpertState make_expert_state(const FunctionClass& cls, const Rat& alpha,
                              std::shared_ptr<FatDimCache> cache = nullptr);

// Prediction at round t without advancing the state.
Rat expert_peek(const ExpertSpec& spec, const ExpertState& state, int x, int t);

// Prediction plus the state transition: at designated rounds the expert
// plays its decoded label and restricts its version space to that label's
// cell; at every other round it follows the version-space prediction and
// leaves the state untouched. Rounds must be fed in increasing order.
Rat expert_predict(const ExpertSpec& spec, ExpertState& state, int x, int t);

// Supervised online learner protocol: per round, reset -> predict -> observe
// in order, with matching (t, x).
class Learner {
  public:
    virtual ~Learner() = default;
    virtual void reset(std::uint64_t trial_seed) = 0;
    virtual Rat predict(int t, int x) = 0;
    virtual void observe(int t, int x, const Rat& y) = 0;
    virtual std::string name() const = 0;
};

std::unique_ptr<Learner> fat_soa_learner(const FunctionClass& cls, const Rat& alpha);
std::unique_ptr<Learner> zero_learner();

// Exponentially weighted averaging over a pool of experts at one scale.
// Each round one expert is sampled with the current weights and its
// prediction is played; after the label arrives every weight is multiplied
// by exp(-eta * loss_i / 2) and the vector renormalized. The division by 2
// maps the prediction losses |e(x) - y| from [0, 2] into [0, 1]; reported
// losses stay unscaled.
class EwaLearner final : public Learner {
  public:
    EwaLearner(const FunctionClass& cls, const Rat& alpha, std::vector<ExpertSpec> specs,
               std::vector<double> priors, double eta);

    void reset(std::uint64_t trial_seed) override;
    Rat predict(int t, int x) override;
    void observe(int t, int x, const Rat& y) override;
    std::string name() const override { return "ewa"; }

    const std::vector<double>& weights() const { return weights_; }
    int sampled_expert() const { return sampled_; }

  private:
    FunctionClass cls_;
    Rat alpha_;
    std::vector<ExpertSpec> specs_;
    std::vector<double> priors_;
    double eta_;
    std::shared_ptr<FatDimCache> cache_;
    std::vector<ExpertState> states_;
    std::vector<double> weights_;
    std::vector<Rat> round_preds_;
    std::optional<RngStream> rng_;
    int predicted_t_ = 0;
    int observed_t_ = 0;
    int round_x_ = -1;
    int sampled_ = -1;
};

std::unique_ptr<EwaLearner> ewa_learner(const FunctionClass& cls, const Rat& alpha,
                                        std::vector<ExpertSpec> specs,
                                        std::vector<double> priors, double eta);

// One run of the same weighting scheme over an explicit loss matrix
// (experts x rounds, entries in [0, 1], no rescaling); returns the total
// sampled loss. The per-round loss column is revealed after sampling.
double ewa_matrix_trial(const std::vector<std::vector<double>>& losses,
                        const std::vector<double>& priors, double eta, std::uint64_t seed);

// Scale-oblivious learner: expert pools at scales alpha_i = 2^-i with prior
// mass 6 / (pi^2 i^2) split evenly inside pool i, run under one weighting.
// Scales are added until the pool budget or the scale cap stops them; the
// truncated prior mass is renormalized away (that only shrinks log(1/p) in
// the regret guarantee). The per-scale guarantee evaluates
//   alpha*T + sqrt(T * fat_alpha * log(2T/alpha)) + sqrt(T) * (3 + 2*log(log(1/alpha)))
// on the realized grid.
class AgnosticLearner final : public Learner {
  public:
    struct Metadata {
        int scales = 0;
        bool truncated = false;
        std::uint64_t experts = 0;
        double prior_mass = 0.0;
    };

    AgnosticLearner(const FunctionClass& cls, int T, std::uint64_t expert_budget = 4096,
                    int max_scales = 12);

    void reset(std::uint64_t trial_seed) override;
    Rat predict(int t, int x) override;
    void observe(int t, int x, const Rat& y) override;
    std::string name() const override { return "agnostic"; }

    const Metadata& metadata() const { return meta_; }
    double bound_at_scale(int scale_index) const;
    double best_bound() const;
    const std::vector<double>& weights() const { return weights_; }

  private:
    struct Scale {
        int index = 0;
        Rat alpha;
        std::vector<ExpertSpec> specs;
        std::shared_ptr<FatDimCache> cache;
        int fat = 0;
        // Scratch state for base predictions; its version mask is overwritten
        // per lookup, everything else is shared by the whole scale.
        FatSoaState probe;
    };

    // Per-expert surviving-row mask; grid, cache, and class live on the scale.
    struct Track {
        std::uint64_t version = 0;
        bool dead = false;
    };

    FunctionClass cls_;
    int horizon_;
    std::vector<Scale> scales_;
    std::vector<std::pair<int, int>> pool_;  // (scale position, spec index)
    std::vector<double> priors_;
    double eta_;
    Metadata meta_;
    std::vector<Track> states_;
    std::vector<double> weights_;
    std::vector<Rat> round_preds_;
    std::optional<RngStream> rng_;
    int predicted_t_ = 0;
    int observed_t_ = 0;
    int round_x_ = -1;
};

std::unique_ptr<AgnosticLearner> agnostic_learner(const FunctionClass& cls, int T,
                                                  std::uint64_t expert_budget = 4096,
                                                  int max_scales = 12);

// One simulated trial: the adversary's moves, the realized plays and losses
// |play - y|, and the regret against the best single row in hindsight
// (comparator scanned exactly over all rows).
struct RegretTrace {
    std::uint64_t seed = 0;
    std::vector<AdversaryMove> moves;
    std::vector<Rat> plays;
    std::vector<Rat> losses;
    Rat cumulative;
    Rat comparator;
    Rat regret;
};

// Runs `trials` independent trials of learner vs adversary over horizon T.
// Trial seeds derive from (seed, trial index), so any prefix of trials is
// reproducible in isolation. The adversary's horizon must equal T. Protocol
// errors are rethrown with the trial transcript appended.
std::vector<RegretTrace> simulate(Learner& learner, Adversary& adversary,
                                  const FunctionClass& cls, int T, int trials,
                                  std::uint64_t seed);

}  // namespace seqcomplex
