#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "sever/linalg.hpp"

namespace sever {

/// Per-sample outlier scores for one filtering round.
struct ScoreReport {
    /// Sample id of each scored row.
    std::vector<std::size_t> indices;
    /// tau_i >= 0, aligned with indices.
    Vec scores;
    /// Unit direction the rows were projected on (e1 when unused).
    Vec direction;
    /// Top singular value of the centered rows divided by sqrt(rows).
    double sigma_hat = 0.0;
    bool degenerate = false;

    double mean_score() const;
    double max_score() const;
};

enum class FilterMode { randomized, top_p };

struct FilterConfig {
    /// Bound on the spread of good gradients along any direction.
    double sigma = 0.0;
    /// The randomized filter is a no-op once mean(tau) <= threshold_mult * sigma^2.
    double threshold_mult = 12.0;
    FilterMode mode = FilterMode::randomized;
    double p_fraction = 0.0;
    std::uint64_t seed = 0;
};

struct FilterSplit {
    std::vector<std::size_t> kept;
    std::vector<std::size_t> removed;
};

/// Centers the rows at their mean, finds the top right singular vector v of
/// the centered matrix G and scores row j by (G_j . v)^2. When ids is empty
/// rows are labelled 0..rows-1.
ScoreReport compute_scores(const Matrix& rows, std::span<const std::size_t> ids = {},
                           std::uint64_t seed = 0);

/// Randomized filter: if the mean score exceeds threshold_mult * sigma^2,
/// draws T uniformly from [0, max score) and removes every id with score > T,
/// so each id is removed with probability score / max score.
FilterSplit randomized_filter(const ScoreReport& report, const FilterConfig& cfg);

/// Removes the ceil(p * count) highest-scoring ids; among equal scores the
/// lower sample id goes first.
FilterSplit top_p_filter(const ScoreReport& report, double p_fraction);

/// Number of ids top_p_filter removes from a set of `count`.
std::size_t top_p_count(double p_fraction, std::size_t count);

struct RobustMeanResult {
    Vec mean;
    std::size_t removed = 0;
    std::size_t rounds = 0;
    bool budget_exceeded = false;
};

/// Filter-based robust mean of the rows of `points`. Repeats score +
/// randomized filter until a fixed point, or until the total removal would
/// exceed 3 * eps_budget * n, and returns the mean of the survivors. A round
/// whose threshold draw overshoots the budget is redrawn a few times (with
/// derived seeds) before budget_exceeded is set.
RobustMeanResult robust_mean(const Matrix& points, double sigma, double eps_budget,
                             const FilterConfig& cfg = {});

}  // namespace sever
