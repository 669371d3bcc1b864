#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "sever/dataset.hpp"
#include "sever/filter.hpp"
#include "sever/learners.hpp"

namespace sever {

enum class SeverVariant {
    /// Randomized filter repeated until it removes nothing.
    theoretical,
    /// Remove the top p fraction by score for a fixed number of rounds.
    practical,
};

struct SeverConfig {
    SeverVariant variant = SeverVariant::practical;
    /// Gradient spread bound; required by the theoretical variant and by
    /// robust gradient descent.
    double sigma = 0.0;
    double threshold_mult = 12.0;
    double p_fraction = 0.05;
    std::size_t num_rounds = 4;
    /// Score and filter each label class separately.
    bool per_class = false;
    /// Start each refit from the previous round's parameters.
    bool warm_start = false;
    /// Contamination budget for robust gradient descent.
    double eps_budget = 0.1;
    /// Keep every round's scores in SeverOutcome::round_scores.
    bool record_scores = false;
    std::uint64_t seed = 0;
};

struct SeverOutcome {
    Vec w;
    /// Sample ids removed in each filtering round; disjoint across rounds.
    std::vector<std::vector<std::size_t>> removed_per_round;
    std::size_t rounds_run = 0;
    std::size_t learner_calls = 0;
    /// Achieved gamma of w over the retained samples.
    double achieved_gamma = 0.0;
    ScoreReport final_score_report;
    std::vector<ScoreReport> round_scores;
    /// Active mask after filtering.
    std::vector<std::uint8_t> retained;
    /// Robust gradient descent only: steps whose robust mean hit its budget.
    std::size_t budget_exceeded_steps = 0;

    std::size_t total_removed() const;
};

/// Scores one group of active samples (all of them, or one label class) at
/// the current fit w.
using GroupScorer = std::function<ScoreReport(std::span<const double> w, const Dataset& data,
                                              std::span<const std::size_t> ids,
                                              std::uint64_t seed)>;

/// Remove-and-retrain loop shared by Sever and the score-based baselines.
/// See run_sever for the round structure.
SeverOutcome run_filter_loop(const Dataset& data, const Learner& learner, const SeverConfig& cfg,
                             const GroupScorer& scorer);

/// Sever's scorer: spectral scores of the per-sample loss gradients.
ScoreReport gradient_spectral_scores(const LossModel& model, std::span<const double> w,
                                     const Dataset& data, std::span<const std::size_t> ids,
                                     std::uint64_t seed);

/// Sever meta-algorithm. Each round fits the learner on the active samples,
/// scores the per-sample loss gradients at the fit and filters them. The
/// practical variant runs num_rounds filtering rounds and then refits on the
/// survivors; the theoretical variant stops at the first round whose
/// randomized filter removes nothing and returns that round's fit.
/// `data`'s active mask is the starting sample set and is left unchanged.
SeverOutcome run_sever(const Dataset& data, const Learner& learner, const SeverConfig& cfg);

/// Runs Sever k times with derived seeds and keeps the run with the smallest
/// achieved gamma.
SeverOutcome run_sever_best_of(const Dataset& data, const Learner& learner,
                               const SeverConfig& cfg, std::size_t k);

/// Projected gradient descent whose step direction is the filter-based
/// robust mean of the per-sample gradients (plus the regularizer). Stops once
/// the robust gradient norm reaches learner_cfg.gamma_target.
SeverOutcome run_robust_gd(const LossModel& model, const Dataset& data, const SeverConfig& cfg,
                           const LearnerConfig& learner_cfg);

/// Splits active ids by label: [0] holds y > 0, [1] the rest.
std::vector<std::vector<std::size_t>> active_ids_by_class(const Dataset& data);

}  // namespace sever
