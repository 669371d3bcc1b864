#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

#include "sever/dataset.hpp"
#include "sever/filter.hpp"
#include "sever/learners.hpp"
#include "sever/sever.hpp"

namespace sever {

enum class BaselineKind { no_defense, l2, loss, gradient, gradient_centered, ransac };

std::string_view to_string(BaselineKind kind);
BaselineKind parse_baseline_kind(std::string_view name);

/// Scores for the score-based baselines, over the given ids (all active ids
/// when empty):
///   l2                |x_i - mean x|^2
///   loss              f_i(w)
///   gradient          |grad f_i(w)|^2
///   gradient_centered |grad f_i(w) - mean gradient|^2
/// Means run over the scored ids. The direction field is e1 and unused.
ScoreReport baseline_scores(BaselineKind kind, const LossModel& model, std::span<const double> w,
                            const Dataset& data, std::span<const std::size_t> ids = {});

/// Sever's practical loop with baseline_scores in place of the spectral
/// scores. no_defense fits once and removes nothing. Always runs the
/// practical variant regardless of cfg.variant.
SeverOutcome run_baseline(BaselineKind kind, const Dataset& data, const Learner& learner,
                          const SeverConfig& cfg);

enum class RansacSelection {
    /// Keep the fit with the lowest test error. Looks at the test set.
    oracle_test,
    /// Keep the fit with the lowest median per-sample training loss.
    median_train_loss,
};

struct RansacConfig {
    /// 0 means dim + 5.
    std::size_t subsample_size = 0;
    std::size_t num_rounds = 100;
    RansacSelection selection = RansacSelection::median_train_loss;
    std::uint64_t seed = 0;
};

/// Test error of w: mean squared error for squared loss, 0/1 error otherwise.
double test_error(const LossModel& model, std::span<const double> w, const Dataset& test);

/// Fits the learner on num_rounds uniform subsamples of the active samples
/// and keeps one fit according to cfg.selection.
SeverOutcome run_ransac(const Dataset& data, const Learner& learner, const RansacConfig& cfg,
                        const Dataset* test_data = nullptr);

}  // namespace sever
