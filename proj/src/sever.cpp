#include "sever/sever.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sever/seed.hpp"

namespace sever {

std::size_t SeverOutcome::total_removed() const {
    std::size_t n = 0;
    for (const auto& r : removed_per_round) {
        n += r.size();
    }
    return n;
}

std::vector<std::vector<std::size_t>> active_ids_by_class(const Dataset& data) {
    std::vector<std::vector<std::size_t>> groups(2);
    for (auto i : data.active_indices()) {
        groups[data.responses()[i] > 0.0 ? 0 : 1].push_back(i);
    }
    return groups;
}

ScoreReport gradient_spectral_scores(const LossModel& model, std::span<const double> w,
                                     const Dataset& data, std::span<const std::size_t> ids,
                                     std::uint64_t seed) {
    Matrix rows(ids.size(), data.dim());
    for (std::size_t r = 0; r < ids.size(); ++r) {
        const Vec g = grad(model, w, data.sample(ids[r]));
        std::copy(g.begin(), g.end(), rows.row(r).begin());
    }
    return compute_scores(rows, ids, seed);
}

namespace {

void validate(const Dataset& data, const SeverConfig& cfg) {
    if (data.active_count() < 2) {
        throw Error("sever: need at least two active samples");
    }
    if (cfg.variant == SeverVariant::practical) {
        if (cfg.num_rounds < 1) {
            throw Error("sever: practical variant needs num_rounds >= 1");
        }
        if (!(cfg.p_fraction > 0.0 && cfg.p_fraction < 1.0)) {
            throw Error("sever: practical variant needs p_fraction in (0, 1)");
        }
    } else if (!(cfg.sigma > 0.0)) {
        throw Error("sever: theoretical variant needs sigma > 0");
    }
}

void merge_into(ScoreReport& merged, const ScoreReport& part) {
    if (merged.indices.empty()) {
        merged.direction = part.direction;
        merged.sigma_hat = part.sigma_hat;
        merged.degenerate = part.degenerate;
    } else {
        merged.sigma_hat = std::max(merged.sigma_hat, part.sigma_hat);
        merged.degenerate = merged.degenerate && part.degenerate;
    }
    merged.indices.insert(merged.indices.end(), part.indices.begin(), part.indices.end());
    merged.scores.insert(merged.scores.end(), part.scores.begin(), part.scores.end());
}

}  // namespace

SeverOutcome run_filter_loop(const Dataset& data, const Learner& learner, const SeverConfig& cfg,
                             const GroupScorer& scorer) {
    validate(data, cfg);
    Dataset work = data;
    SeverOutcome out;
    const bool practical = cfg.variant == SeverVariant::practical;
    const std::size_t max_rounds = practical ? cfg.num_rounds : data.active_count();

    FitResult fit;
    for (std::size_t round = 0;; ++round) {
        const std::span<const double> warm =
            cfg.warm_start ? std::span<const double>(fit.w) : std::span<const double>();
        fit = learner(work, warm);
        ++out.learner_calls;
        if (practical && round == max_rounds) {
            break;
        }

        std::vector<std::vector<std::size_t>> groups;
        if (cfg.per_class) {
            groups = active_ids_by_class(work);
        } else {
            groups.push_back(work.active_indices());
        }

        ScoreReport merged;
        std::vector<std::size_t> removed;
        for (std::size_t g = 0; g < groups.size(); ++g) {
            if (groups[g].empty()) {
                continue;
            }
            const std::uint64_t seed = derive_seed(cfg.seed, {round, g});
            const ScoreReport report = scorer(fit.w, work, groups[g], seed);
            FilterSplit split;
            if (practical) {
                split = top_p_filter(report, cfg.p_fraction);
            } else {
                FilterConfig fc;
                fc.sigma = cfg.sigma;
                fc.threshold_mult = cfg.threshold_mult;
                fc.mode = FilterMode::randomized;
                fc.seed = derive_seed(seed, {0x66696c74});
                split = randomized_filter(report, fc);
            }
            removed.insert(removed.end(), split.removed.begin(), split.removed.end());
            merge_into(merged, report);
        }
        out.rounds_run = round + 1;
        if (cfg.record_scores) {
            out.round_scores.push_back(merged);
        }
        out.final_score_report = std::move(merged);

        if (!practical && removed.empty()) {
            break;
        }
        for (auto id : removed) {
            work.deactivate(id);
        }
        out.removed_per_round.push_back(std::move(removed));
        if (work.active_count() < 2) {
            throw Error("filtered everything; attack budget or p too large");
        }
        if (!practical && out.rounds_run >= max_rounds) {
            // Unreachable when every non-final round removes a point; kept as
            // a hard stop so a misbehaving scorer cannot loop forever.
            fit = learner(work, {});
            ++out.learner_calls;
            break;
        }
    }

    out.w = std::move(fit.w);
    out.achieved_gamma = fit.gamma;
    out.retained = work.active_mask();
    return out;
}

SeverOutcome run_sever(const Dataset& data, const Learner& learner, const SeverConfig& cfg) {
    const LossModel model = learner.model;
    return run_filter_loop(data, learner, cfg,
                           [&model](std::span<const double> w, const Dataset& d,
                                    std::span<const std::size_t> ids, std::uint64_t seed) {
                               return gradient_spectral_scores(model, w, d, ids, seed);
                           });
}

SeverOutcome run_sever_best_of(const Dataset& data, const Learner& learner,
                               const SeverConfig& cfg, std::size_t k) {
    if (k == 0) {
        throw Error("sever: best-of needs k >= 1");
    }
    SeverOutcome best;
    double best_gamma = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < k; ++t) {
        SeverConfig run_cfg = cfg;
        run_cfg.seed = t == 0 ? cfg.seed : derive_seed(cfg.seed, {t});
        SeverOutcome o = run_sever(data, learner, run_cfg);
        if (o.achieved_gamma < best_gamma) {
            best_gamma = o.achieved_gamma;
            best = std::move(o);
        }
    }
    return best;
}

SeverOutcome run_robust_gd(const LossModel& model, const Dataset& data, const SeverConfig& cfg,
                           const LearnerConfig& learner_cfg) {
    if (data.active_count() < 2) {
        throw Error("sever: need at least two active samples");
    }
    if (!(cfg.sigma > 0.0)) {
        throw Error("robust gradient descent needs sigma > 0");
    }
    if (!(learner_cfg.step_size > 0.0)) {
        throw Error("robust gradient descent: step_size must be positive");
    }
    SeverOutcome out;
    Vec w(data.dim(), 0.0);
    FilterConfig fc;
    fc.threshold_mult = cfg.threshold_mult;
    double initial_norm = -1.0;
    double gamma = std::numeric_limits<double>::infinity();
    Vec evaluated = w;

    for (std::size_t epoch = 0; epoch < learner_cfg.max_epochs; ++epoch) {
        out.rounds_run = epoch + 1;
        evaluated = w;
        const Matrix g_rows = grad_matrix(model, w, data);
        fc.seed = derive_seed(cfg.seed, {epoch});
        const RobustMeanResult rm = robust_mean(g_rows, cfg.sigma, cfg.eps_budget, fc);
        if (rm.budget_exceeded) {
            ++out.budget_exceeded_steps;
        }
        Vec g = rm.mean;
        axpy(model.lambda, w, g);
        const double gn = norm2(g);
        if (initial_norm < 0.0) {
            initial_norm = gn;
        }
        if (!std::isfinite(gn) || (initial_norm > 0.0 && gn > 1e6 * initial_norm)) {
            throw Error("diverged; reduce step_size");
        }
        gamma = feasible_descent_norm(g, w, learner_cfg.domain_radius);
        if (gamma <= learner_cfg.gamma_target) {
            break;
        }
        axpy(-learner_cfg.step_size, g, w);
        project_onto_ball(w, learner_cfg.domain_radius);
    }
    out.w = std::move(evaluated);
    out.achieved_gamma = gamma;
    out.retained = data.active_mask();
    return out;
}

}  // namespace sever
