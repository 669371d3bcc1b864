#include "sever/losses.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace sever {

std::string_view to_string(LossKind kind) {
    switch (kind) {
        case LossKind::squared:
            return "squared";
        case LossKind::hinge:
            return "hinge";
        case LossKind::logistic:
            return "logistic";
    }
    return "unknown";
}

LossKind parse_loss_kind(std::string_view name) {
    if (name == "squared") return LossKind::squared;
    if (name == "hinge") return LossKind::hinge;
    if (name == "logistic") return LossKind::logistic;
    throw Error("unknown loss kind '" + std::string(name) + "'");
}

double logistic_sigmoid(double t) {
    if (t >= 0.0) {
        return 1.0 / (1.0 + std::exp(-t));
    }
    const double e = std::exp(t);
    return e / (1.0 + e);
}

namespace {

// ln(1 + e^t) without overflow.
double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

void check_dims(std::span<const double> w, const LabeledSample& s) {
    if (w.size() != s.x.size()) {
        throw Error("loss: parameter dimension " + std::to_string(w.size()) +
                    " does not match sample dimension " + std::to_string(s.x.size()));
    }
}

// Derivative of the per-sample loss with respect to the margin t = w.x.
double margin_derivative(LossKind kind, double t, double y) {
    switch (kind) {
        case LossKind::squared:
            return t - y;
        case LossKind::hinge:
            return y * t < 1.0 ? -y : 0.0;
        case LossKind::logistic:
            return 0.5 * (logistic_sigmoid(t) - logistic_sigmoid(-t) - y);
    }
    return 0.0;
}

}  // namespace

double loss(const LossModel& model, std::span<const double> w, const LabeledSample& s) {
    check_dims(w, s);
    const double t = dot(w, s.x);
    double value = 0.0;
    switch (model.kind) {
        case LossKind::squared:
            value = 0.5 * (t - s.y) * (t - s.y);
            break;
        case LossKind::hinge:
            value = std::max(0.0, 1.0 - s.y * t);
            break;
        case LossKind::logistic:
            // -ln(phi(t) phi(-t)) = softplus(-t) + softplus(t)
            value = 0.5 * (softplus(t) + softplus(-t) - s.y * t);
            break;
    }
    if (!std::isfinite(value)) {
        throw Error("loss: non-finite value");
    }
    return value;
}

Vec grad(const LossModel& model, std::span<const double> w, const LabeledSample& s) {
    check_dims(w, s);
    const double c = margin_derivative(model.kind, dot(w, s.x), s.y);
    return scaled(s.x, c);
}

Matrix grad_matrix(const LossModel& model, std::span<const double> w, const Dataset& data) {
    if (data.active_count() == 0) {
        throw Error("grad_matrix: empty active set");
    }
    Matrix g(data.active_count(), data.dim());
    std::size_t r = 0;
    for (auto i : data.active_indices()) {
        const auto s = data.sample(i);
        check_dims(w, s);
        const double c = margin_derivative(model.kind, dot(w, s.x), s.y);
        auto row = g.row(r++);
        for (std::size_t k = 0; k < row.size(); ++k) {
            row[k] = c * s.x[k];
        }
    }
    return g;
}

double objective(const LossModel& model, std::span<const double> w, const Dataset& data) {
    if (data.active_count() == 0) {
        throw Error("objective: empty active set");
    }
    double total = 0.0;
    for (auto i : data.active_indices()) {
        total += loss(model, w, data.sample(i));
    }
    return total / static_cast<double>(data.active_count()) + 0.5 * model.lambda * squared_norm(w);
}

Vec objective_gradient(const LossModel& model, std::span<const double> w, const Dataset& data) {
    if (data.active_count() == 0) {
        throw Error("objective_gradient: empty active set");
    }
    Vec g(w.size(), 0.0);
    for (auto i : data.active_indices()) {
        const auto s = data.sample(i);
        check_dims(w, s);
        axpy(margin_derivative(model.kind, dot(w, s.x), s.y), s.x, g);
    }
    const double inv = 1.0 / static_cast<double>(data.active_count());
    for (std::size_t k = 0; k < g.size(); ++k) {
        g[k] = g[k] * inv + model.lambda * w[k];
    }
    return g;
}

}  // namespace sever
