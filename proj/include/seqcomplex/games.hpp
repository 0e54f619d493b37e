#pragma once

#include "seqcomplex/classes.hpp"
#include "seqcomplex/rational.hpp"
#include "seqcomplex/rng.hpp"
#include "seqcomplex/shattering.hpp"
#include "seqcomplex/trees.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace seqcomplex {

// Zero-sum matrix game, row player minimizing, column player maximizing.
// In exact mode the certificates are verified: max over columns of q^T M and
// min over rows of M p both equal `value` as rationals. Matrices larger than
// 12x12 are solved in floating point; `gap` then bounds the duality gap.
struct MatrixGameSolution {
    Rat value;
    std::vector<Rat> row_mixture;
    std::vector<Rat> col_mixture;
    bool exact = true;
    double gap = 0.0;
};

MatrixGameSolution solve_matrix_game(const std::vector<std::vector<Rat>>& payoff);

enum class LossMode { Direct, Supervised };

// In Supervised mode `cls` is the loss class over X x Y pairs; base_domain
// and labels record the factorization (pair (x, j) sits at index x*|Y|+j).
struct GameSpec {
    FunctionClass cls;
    int horizon = 0;
    LossMode mode = LossMode::Direct;
    int base_domain = 0;
    std::vector<Rat> labels;
    std::uint64_t state_budget = 100000;
};

// Histories are keyed by the x-sequence alone: the player's randomization
// integrates out, so sum_t n^t states suffice for the whole induction.
struct GameValue {
    Rat value;
    bool exact = true;
    std::string form;
    std::map<std::vector<int>, std::vector<Rat>> player_mixtures;
    std::map<std::vector<int>, std::vector<Rat>> adversary_mixtures;
    std::uint64_t states = 0;
};

// Backward induction over x-histories. Terminal histories pay the comparator
// term -min_f sum_t f(x_t); interior histories solve the stage game on
// M[f][x] = f(x) + V(h.x). The primal reads each stage value off the row
// certificate (max over columns of q^T M), the dual off the column
// certificate (min over rows of M p) of its epigraph program, so the two
// recursions agree only when every stage solve is exact on both sides.
GameValue value_primal(const GameSpec& spec);
GameValue value_dual(const GameSpec& spec);

// Direct game on the loss class of `cls` against label grid `labels`.
GameSpec supervised_spec(const FunctionClass& cls, const std::vector<Rat>& labels, int horizon);

// One adversary move; y and pair are meaningful only in supervised mode,
// where the label is revealed after the player commits a prediction.
struct AdversaryMove {
    int x = 0;
    Rat y;
    int pair = -1;
};

// Sequential adversary. Observes realized plays, never mixtures.
class Adversary {
  public:
    virtual ~Adversary() = default;
    virtual void reset(std::uint64_t trial_seed) = 0;
    virtual AdversaryMove next(int t) = 0;
    virtual void observe(const Rat& play) { (void)play; }
    virtual std::string name() const = 0;
    virtual int horizon() const = 0;
};

// Labels are i.i.d. uniform signs; the point sequence follows `x` along the
// realized labels, so any player's expected regret is the per-tree
// Rademacher average of the class on `x`.
std::unique_ptr<Adversary> rad_adversary(const DomainTree& x);

// Block structure of the fat-shattering lower-bound strategy. When T is a
// multiple of d the certificate is played in d blocks of length k = T/d and
// the guarantee is alpha*sqrt(T*d/8); when T < d the certificate is
// truncated to depth T with k = 1 and the guarantee degrades to
// alpha*T/sqrt(8).
struct LowerBoundPlan {
    int d = 0;
    int k = 0;
    int blocks = 0;
    Rat alpha;
    double bound = 0.0;
    ShatterCertificate certificate;
};

LowerBoundPlan lower_bound_plan(const FunctionClass& cls, const Rat& alpha, int T);

// Draws a uniform sign sequence; block j presents the certificate node at
// level j along the modal signs of completed blocks and labels each round
// with the drawn sign.
std::unique_ptr<Adversary> lower_bound_adversary(const FunctionClass& cls, const Rat& alpha,
                                                 int T);

// Points i.i.d. uniform over the domain; labels i.i.d. uniform over `labels`
// (empty for direct games).
std::unique_ptr<Adversary> stochastic_adversary(int domain_size, std::vector<Rat> labels, int T);

// Samples each move from the stored optimal column mixture at the current
// x-history; `value` must come from value_primal or value_dual on `spec`.
std::unique_ptr<Adversary> minimax_adversary(const GameSpec& spec, const GameValue& value);

// Deterministic supervised player: prediction for round t given the current
// point and the revealed history. Predictions must stay in [-1, 1].
using DeterministicPlayer =
    std::function<Rat(int t, int x_t, const std::vector<int>& past_x,
                      const std::vector<Rat>& past_y)>;

// Exact expectation over all 2^T label paths of the supervised regret of
// `player` against rad_adversary(x).
Rat rad_adversary_exact_regret(const FunctionClass& cls, const DomainTree& x,
                               const DeterministicPlayer& player);

// Exact expectation over all 2^T sign draws of the supervised regret of
// `player` against lower_bound_adversary(cls, alpha, T).
Rat lower_bound_exact_regret(const FunctionClass& cls, const Rat& alpha, int T,
                             const DeterministicPlayer& player);

}  // namespace seqcomplex
