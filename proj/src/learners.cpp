#include "sever/learners.hpp"

#include <cmath>
#include <limits>

namespace sever {

Vec fit_ridge_closed_form(const Dataset& data, double lambda) {
    if (data.active_count() == 0) {
        throw Error("fit_ridge_closed_form: empty active set");
    }
    if (lambda < 0.0) {
        throw Error("fit_ridge_closed_form: lambda must be nonnegative");
    }
    const std::size_t d = data.dim();
    Matrix gram(d, d);
    Vec rhs(d, 0.0);
    for (auto i : data.active_indices()) {
        const auto s = data.sample(i);
        for (std::size_t a = 0; a < d; ++a) {
            const double xa = s.x[a];
            rhs[a] += xa * s.y;
            for (std::size_t b = 0; b <= a; ++b) {
                gram(a, b) += xa * s.x[b];
            }
        }
    }
    const double inv = 1.0 / static_cast<double>(data.active_count());
    for (std::size_t a = 0; a < d; ++a) {
        rhs[a] *= inv;
        for (std::size_t b = 0; b <= a; ++b) {
            gram(a, b) *= inv;
            gram(b, a) = gram(a, b);
        }
        gram(a, a) += lambda;
    }
    try {
        return solve_spd(gram, rhs);
    } catch (const Error&) {
        throw Error("singular normal equations");
    }
}

void project_onto_ball(std::span<double> w, std::optional<double> radius) {
    if (!radius) {
        return;
    }
    const double n = norm2(w);
    if (n > *radius) {
        const double s = *radius / n;
        for (auto& x : w) {
            x *= s;
        }
    }
}

double feasible_descent_norm(Vec g, std::span<const double> w, std::optional<double> domain_radius) {
    if (domain_radius) {
        const double wn = norm2(w);
        if (wn > 0.0 && wn >= *domain_radius - 1e-9) {
            const double radial = dot(g, w) / wn;
            // Descent direction -g leaves the ball when g.w < 0.
            if (radial < 0.0) {
                axpy(-radial / wn, w, g);
            }
        }
    }
    return norm2(g);
}

double achieved_gamma(const LossModel& model, const Dataset& data, std::span<const double> w,
                      std::optional<double> domain_radius) {
    return feasible_descent_norm(objective_gradient(model, w, data), w, domain_radius);
}

FitResult fit_subgradient(const LossModel& model, const Dataset& data, const LearnerConfig& cfg,
                          std::span<const double> warm_start) {
    if (data.active_count() == 0) {
        throw Error("fit_subgradient: empty active set");
    }
    if (!(cfg.step_size > 0.0)) {
        throw Error("fit_subgradient: step_size must be positive");
    }
    FitResult out;
    Vec w(data.dim(), 0.0);
    if (!warm_start.empty()) {
        if (warm_start.size() != data.dim()) {
            throw Error("fit_subgradient: warm start dimension mismatch");
        }
        w.assign(warm_start.begin(), warm_start.end());
        project_onto_ball(w, cfg.domain_radius);
    }
    double f = objective(model, w, data);
    double step = cfg.step_size;
    const double initial_grad_norm = norm2(objective_gradient(model, w, data));

    Vec best = w;
    double best_f = f;

    for (std::size_t epoch = 0; epoch < cfg.max_epochs; ++epoch) {
        out.epochs = epoch + 1;
        const Vec g = objective_gradient(model, w, data);
        const double gn = norm2(g);
        if (!std::isfinite(gn) || (initial_grad_norm > 0.0 && gn > 1e6 * initial_grad_norm)) {
            throw Error("diverged; reduce step_size");
        }
        if (achieved_gamma(model, data, w, cfg.domain_radius) <= cfg.gamma_target) {
            out.converged = true;
            best = w;
            break;
        }
        Vec candidate = w;
        axpy(-step, g, candidate);
        project_onto_ball(candidate, cfg.domain_radius);
        const double fc = objective(model, candidate, data);
        if (!std::isfinite(fc)) {
            throw Error("diverged; reduce step_size");
        }
        // Differences of a few ulps are rounding noise near the optimum, not
        // evidence that the step is too long.
        const double slack = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(f);
        if (fc > f + slack) {
            step *= 0.5;
            if (step < 1e-14 * cfg.step_size) {
                break;
            }
            continue;
        }
        w = std::move(candidate);
        f = fc;
        if (f <= best_f + slack) {
            best = w;
            best_f = f;
        }
    }
    out.w = std::move(best);
    out.gamma = achieved_gamma(model, data, out.w, cfg.domain_radius);
    out.converged = out.converged || out.gamma <= cfg.gamma_target;
    return out;
}

Learner ridge_learner(double lambda) {
    Learner l;
    l.name = "ridge";
    l.model = LossModel{LossKind::squared, lambda};
    l.fit = [lambda](const Dataset& data, std::span<const double>) {
        FitResult r;
        r.w = fit_ridge_closed_form(data, lambda);
        r.gamma = achieved_gamma(LossModel{LossKind::squared, lambda}, data, r.w);
        r.epochs = 1;
        r.converged = true;
        return r;
    };
    return l;
}

Learner subgradient_learner(std::string name, LossModel model, LearnerConfig cfg) {
    Learner l;
    l.name = std::move(name);
    l.model = model;
    l.domain_radius = cfg.domain_radius;
    l.fit = [model, cfg](const Dataset& data, std::span<const double> warm_start) {
        return fit_subgradient(model, data, cfg, warm_start);
    };
    return l;
}

}  // namespace sever
