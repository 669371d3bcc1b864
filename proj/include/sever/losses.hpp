#pragma once

#include <span>
#include <string_view>

#include "sever/dataset.hpp"
#include "sever/linalg.hpp"

namespace sever {

enum class LossKind { squared, hinge, logistic };

std::string_view to_string(LossKind kind);
LossKind parse_loss_kind(std::string_view name);

/// Task definition. The per-sample loss and gradient exclude regularization;
/// lambda enters only the learner objective as lambda * |w|^2 / 2.
struct LossModel {
    LossKind kind = LossKind::squared;
    double lambda = 0.0;
};

/// Numerically stable logistic function 1 / (1 + e^-t).
double logistic_sigmoid(double t);

double loss(const LossModel& model, std::span<const double> w, const LabeledSample& s);
Vec grad(const LossModel& model, std::span<const double> w, const LabeledSample& s);

/// Row j is the gradient at the j-th active sample, in increasing id order.
Matrix grad_matrix(const LossModel& model, std::span<const double> w, const Dataset& data);

/// Mean loss over active samples plus lambda * |w|^2 / 2.
double objective(const LossModel& model, std::span<const double> w, const Dataset& data);
/// Gradient of objective().
Vec objective_gradient(const LossModel& model, std::span<const double> w, const Dataset& data);

}  // namespace sever
