#pragma once

#include <cstddef>
#include <cstdint>

#include "sever/dataset.hpp"

namespace sever {

struct CenteredSplit {
    Dataset train;
    Dataset test;
    Vec center;
    Vec scale;
    bool center_budget_exceeded = false;
};

/// Shifts both splits by a filter-based robust mean of the active training
/// features and, when do_scale is set, divides each coordinate by a robust
/// scale (1.4826 * median absolute deviation, floored at 1e-12). All
/// statistics come from the training split.
CenteredSplit robust_center_scale(const Dataset& train, const Dataset& test, double eps,
                                  bool do_scale, std::uint64_t seed = 0);

struct PFraction {
    double p = 0.0;
    /// Set when the raw value exceeded kMaxPFraction and was clamped.
    bool capped = false;
};

inline constexpr double kMaxPFraction = 0.45;

/// Per-round removal fraction that accounts for class imbalance:
/// (n+ + n-) / min(n+, n-) * eps / r, capped at kMaxPFraction.
PFraction compute_p(std::size_t n_plus, std::size_t n_minus, double eps, std::size_t rounds);

}  // namespace sever
