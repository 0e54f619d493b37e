#pragma once

#include "seqcomplex/classes.hpp"
#include "seqcomplex/covers.hpp"
#include "seqcomplex/rational.hpp"
#include "seqcomplex/trees.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace seqcomplex {

enum class RadMode { ExactTree, ExactSup, MonteCarlo, LocalSearch };

std::string rad_mode_name(RadMode mode);

// E_eps sup_f sum_t eps_t f(x_t(eps)), the sum (not time-averaged) form.
// Exact modes carry the value as a rational; local search is a certified
// lower bound on the sup; Monte Carlo reports a standard error.
struct RadResult {
    double value = 0;
    RadMode mode = RadMode::ExactTree;
    Rat exact_value = 0;
    bool has_exact = false;
    std::optional<DomainTree> argmax_tree;
    std::uint64_t sample_count = 0;  // paths, trees, or MC trials
    double std_error = 0;
    std::uint64_t seed = 0;
};

// Full enumeration of all 2^T sign paths; T <= 20.
RadResult rad_fixed_tree(const FunctionClass& cls, const DomainTree& x);

// Unbiased estimate from `trials` uniform sign paths; per-trial RNG streams
// are derived from (seed, trial index) so results are schedule-independent.
RadResult rad_fixed_tree_mc(const FunctionClass& cls, const DomainTree& x, std::uint64_t trials,
                            std::uint64_t seed);

// Supremum over all domain trees of depth T on n points. ExactSup enumerates
// every tree (budgeted); LocalSearch runs seeded coordinate ascent over node
// values from random restarts and returns a lower bound with its witness.
RadResult rad_sup(const FunctionClass& cls, int n, int T, RadMode mode, std::uint64_t seed = 0,
                  int restarts = 8);

struct MassartReport {
    Rat lhs_exact = 0;
    double lhs = 0;
    double rhs = 0;
    bool holds = false;
};

// lhs = E_eps max_v sum_t eps_t v_t(eps) exactly; rhs uses the largest
// per-path sum of squares: sqrt(2 log|V| max_v max_eps sum v_t(eps)^2).
MassartReport massart_bound(const std::vector<RealTree>& V);

struct ChainingParams {
    int scales = 6;  // geometric grid beta_j = 2^-j, j = 0..scales
    CoverMode mode = CoverMode::Greedy;
};

struct DudleyEntry {
    Rat beta;
    std::size_t n2 = 0;
};

struct DudleyReport {
    double value = 0;
    Rat alpha = 0;  // grid point attaining the reported minimum
    std::vector<DudleyEntry> grid;
};

// min over grid alpha in {0} u {2^-j} of 4 T alpha + 12 I(alpha), where
// I upper-Riemann-sums sqrt(T log N_2(delta)) on the geometric segments,
// taking N_2 at each segment's smaller endpoint (N_2 is nonincreasing, so
// the reported value over-approximates the integral; the alpha = 0 tail
// uses the 0-cover size).
DudleyReport dudley_bound(const FunctionClass& cls, const DomainTree& x,
                          const ChainingParams& params = {});

struct FatRadEntry {
    Rat beta;
    bool checked = false;  // beta clears the threshold 2 rad / T
    int fat = -1;
    bool holds = true;  // fat < T whenever checked
};

struct FatRadReport {
    Rat rad = 0;        // exact sup over trees
    Rat threshold = 0;  // 2 rad / T
    std::vector<FatRadEntry> entries;
    bool all_hold = true;
};

// For every dyadic beta > 2 rad_sup / T, fat_dim at beta stays below T.
FatRadReport fat_rad_relation(const FunctionClass& cls, int n, int T);

struct LinearRadResult {
    double value = 0;
    double bound = 0;  // sqrt(2 T) max ||x||_2
    bool holds = false;
};

// Linear class over the l2 unit ball of weights: per path the sup equals
// ||sum_t eps_t x_t(eps)||_2, averaged exactly over all 2^T paths (square
// roots are the only floating step). Tree nodes index into `points`.
LinearRadResult linear_rad_check(const std::vector<std::vector<Rat>>& points,
                                 const DomainTree& x);

struct StructuralReport {
    Rat rad = 0;  // exact sup-over-trees complexity of the base class
    bool subset_monotone = false;
    bool convex_hull_equal = false;
    bool scaling_equal = false;
    bool reflection_equal = false;
    bool contraction_holds = false;
    bool shift_equal = false;
    bool all_hold = false;
};

// Exact sup-over-trees checks: subset monotonicity; invariance under grid
// convex mixtures; |c|-homogeneity (c in {-1, 1/2, 2}, the negation case
// also checked per tree against the reflected tree); 1-Lipschitz clamp
// contraction; invariance under adding a fixed function.
StructuralReport structural_checks(const FunctionClass& cls, int n, int T);

}  // namespace seqcomplex
