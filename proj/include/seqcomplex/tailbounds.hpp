#pragma once

#include "seqcomplex/classes.hpp"
#include "seqcomplex/rational.hpp"
#include "seqcomplex/trees.hpp"

#include <cstddef>

namespace seqcomplex {

// Tail check for the symmetrized process on a fixed tree: the exact
// probability, over uniform signs, that some row's signed average along the
// sign path exceeds alpha/4 in magnitude, against two cover-based bounds.
struct TailReport {
    Rat alpha;
    Rat lhs;                     // exact violating-path fraction, in [0, 1]
    double rhs = 0.0;            // 2 * N1(alpha/8) * exp(-T alpha^2 / 128)
    double weak_rhs = 0.0;       // 2 * (16 e T / alpha)^fat * exp(same)
    std::size_t cover_size = 0;  // greedy l1 cover size at scale alpha/8
    int fat = 0;                 // fat dimension at scale alpha/8
    bool holds = false;          // lhs <= rhs, compared in double
};

// lhs = P( max_f |(1/T) sum_t eps_t f(x_t(eps))| > alpha/4 ) by enumerating
// all 2^T sign sequences; sums stay in integer table units, so the count is
// exact. The greedy cover only inflates rhs, so a reported hold is sound.
//   pre:  1 <= x.depth <= 20, tree values inside the domain, alpha > 0
//   post: holds == (lhs <= rhs); weak_rhs is reported, not checked
TailReport pollard_check(const FunctionClass& cls, const DomainTree& x, const Rat& alpha);

}  // namespace seqcomplex
