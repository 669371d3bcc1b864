#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "sever/dataset.hpp"
#include "sever/losses.hpp"

namespace sever {

struct LearnerConfig {
    /// Stop once the achieved gamma drops to this value.
    double gamma_target = 1e-6;
    std::size_t max_epochs = 2000;
    double step_size = 0.5;
    /// Radius of the feasible ball; unset means unconstrained.
    std::optional<double> domain_radius;
    std::uint64_t seed = 0;
};

struct FitResult {
    Vec w;
    /// Achieved gamma of w on the data it was fit to.
    double gamma = 0.0;
    std::size_t epochs = 0;
    bool converged = false;
};

/// Solves (X^T X / n + lambda I) w = X^T y / n over the active samples.
/// Throws "singular normal equations" when lambda == 0 and X^T X is singular.
Vec fit_ridge_closed_form(const Dataset& data, double lambda);

/// Full-batch projected (sub)gradient descent on the mean loss plus
/// lambda |w|^2 / 2. The step is halved whenever it would increase the
/// objective, so the objective never increases between epochs. Returns the
/// final iterate when gamma_target is met, otherwise the best iterate seen.
/// A non-empty warm_start is used as the initial iterate (after projection).
FitResult fit_subgradient(const LossModel& model, const Dataset& data, const LearnerConfig& cfg,
                          std::span<const double> warm_start = {});

/// Size of the steepest feasible descent rate of the regularized mean
/// objective at w. Inside the domain that is the gradient norm; on the
/// boundary of the ball any outward radial part of the descent direction is
/// discarded first.
double achieved_gamma(const LossModel& model, const Dataset& data, std::span<const double> w,
                      std::optional<double> domain_radius = std::nullopt);

/// Euclidean projection onto the ball; no-op when radius is unset.
void project_onto_ball(std::span<double> w, std::optional<double> radius);

/// Norm of g after dropping the outward radial part of -g when w sits on the
/// boundary of the ball of the given radius.
double feasible_descent_norm(Vec g, std::span<const double> w, std::optional<double> domain_radius);

/// Black-box gamma-approximate learner handed to Sever and the baselines.
struct Learner {
    std::string name;
    LossModel model;
    std::optional<double> domain_radius;
    /// Fits the active samples. The span is an optional warm start; learners
    /// without iterative state ignore it.
    std::function<FitResult(const Dataset&, std::span<const double>)> fit;

    FitResult operator()(const Dataset& data, std::span<const double> warm_start = {}) const {
        return fit(data, warm_start);
    }
};

Learner ridge_learner(double lambda);
Learner subgradient_learner(std::string name, LossModel model, LearnerConfig cfg);

}  // namespace sever
