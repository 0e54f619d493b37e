#include "seqcomplex/tailbounds.hpp"

#include "seqcomplex/covers.hpp"
#include "seqcomplex/errors.hpp"
#include "seqcomplex/shattering.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <vector>

namespace seqcomplex {

namespace {

// Counts sign paths whose largest row sum exceeds `thresh` in magnitude.
// Paths share prefixes, so a depth-first walk updating one running sum per
// row costs one add per (node, row) instead of T adds per leaf.
std::uint64_t count_violations(const FunctionClass& cls, const DomainTree& x, long long thresh) {
    const int T = x.depth;
    const int rows = cls.size();
    std::vector<long long> sums(static_cast<std::size_t>(rows), 0);
    std::uint64_t violating = 0;
    auto walk = [&](auto&& self, std::size_t node, int t) -> void {
        if (t == T) {
            for (int f = 0; f < rows; ++f) {
                if (std::llabs(sums[static_cast<std::size_t>(f)]) > thresh) {
                    ++violating;
                    break;
                }
            }
            return;
        }
        int point = x.values[node];
        for (int bit = 0; bit < 2; ++bit) {
            long long sign = bit == 0 ? -1 : 1;
            for (int f = 0; f < rows; ++f)
                sums[static_cast<std::size_t>(f)] += sign * cls.table[static_cast<std::size_t>(f)]
                                                                      [static_cast<std::size_t>(point)];
            self(self, 2 * node + 1 + static_cast<std::size_t>(bit), t + 1);
            for (int f = 0; f < rows; ++f)
                sums[static_cast<std::size_t>(f)] -= sign * cls.table[static_cast<std::size_t>(f)]
                                                                      [static_cast<std::size_t>(point)];
        }
    };
    walk(walk, 0, 0);
    return violating;
}

}  // namespace

TailReport pollard_check(const FunctionClass& cls, const DomainTree& x, const Rat& alpha) {
    if (cls.size() == 0) throw StructureError("pollard_check: empty class");
    if (alpha <= 0) throw std::domain_error("pollard_check: alpha must be positive");
    const int T = x.depth;
    if (T < 1) throw StructureError("pollard_check: tree depth must be at least 1");
    if (T > 20) throw CapacityError("pollard_check: depth exceeds exact enumeration limit 20");
    for (int v : x.values)
        if (v < 0 || v >= cls.domain_size)
            throw StructureError("pollard_check: tree value outside class domain");
    long long max_abs = 0;
    for (const auto& row : cls.table)
        for (long long v : row) max_abs = std::max(max_abs, std::llabs(v));
    if (max_abs > std::numeric_limits<long long>::max() / (4 * T))
        throw CapacityError("pollard_check: table scale too large for exact path sums");

    // In table units the exceedance |sum|/(T*scale) > alpha/4 becomes
    // |sum| > num(alpha)*scale*T / (4*den(alpha)); flooring the right side
    // keeps the strict comparison exact for integer sums.
    BigInt bound = numerator(alpha) * cls.scale * T / (denominator(alpha) * 4);
    long long thresh = bound > BigInt(std::numeric_limits<long long>::max())
                           ? std::numeric_limits<long long>::max()
                           : bound.convert_to<long long>();

    TailReport rep;
    rep.alpha = alpha;
    std::uint64_t violating = count_violations(cls, x, thresh);
    rep.lhs = Rat(BigInt(violating), BigInt(1) << T);

    Rat alpha8 = alpha / 8;
    CoverResult cov = cover_number(cls, x, alpha8, NormP::L1, CoverMode::Greedy);
    rep.cover_size = cov.size;
    rep.fat = fat_dim(cls, alpha8);
    double a = to_double(alpha);
    double decay = std::exp(-static_cast<double>(T) * a * a / 128.0);
    rep.rhs = 2.0 * static_cast<double>(cov.size) * decay;
    rep.weak_rhs = 2.0 * std::pow(16.0 * std::numbers::e * T / a, rep.fat) * decay;
    rep.holds = to_double(rep.lhs) <= rep.rhs;
    return rep;
}

}  // namespace seqcomplex
