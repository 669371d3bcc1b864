#include "sever/baselines.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <string>

#include "sever/seed.hpp"

namespace sever {

std::string_view to_string(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::no_defense:
            return "noDefense";
        case BaselineKind::l2:
            return "l2";
        case BaselineKind::loss:
            return "loss";
        case BaselineKind::gradient:
            return "gradient";
        case BaselineKind::gradient_centered:
            return "gradientCentered";
        case BaselineKind::ransac:
            return "ransac";
    }
    return "unknown";
}

BaselineKind parse_baseline_kind(std::string_view name) {
    if (name == "noDefense" || name == "none") return BaselineKind::no_defense;
    if (name == "l2") return BaselineKind::l2;
    if (name == "loss") return BaselineKind::loss;
    if (name == "gradient") return BaselineKind::gradient;
    if (name == "gradientCentered") return BaselineKind::gradient_centered;
    if (name == "ransac") return BaselineKind::ransac;
    throw Error("unknown defense '" + std::string(name) + "'");
}

namespace {

// |row_j - mean|^2 for each row.
Vec centered_squared_norms(const Matrix& rows) {
    const Vec mu = mean_rows(rows);
    Vec out(rows.rows());
    for (std::size_t j = 0; j < rows.rows(); ++j) {
        double s = 0.0;
        const auto r = rows.row(j);
        for (std::size_t k = 0; k < r.size(); ++k) {
            const double e = r[k] - mu[k];
            s += e * e;
        }
        out[j] = s;
    }
    return out;
}

}  // namespace

ScoreReport baseline_scores(BaselineKind kind, const LossModel& model, std::span<const double> w,
                            const Dataset& data, std::span<const std::size_t> ids) {
    if (kind == BaselineKind::no_defense || kind == BaselineKind::ransac) {
        throw Error("baseline_scores: " + std::string(to_string(kind)) + " has no scores");
    }
    ScoreReport report;
    if (ids.empty()) {
        report.indices = data.active_indices();
    } else {
        report.indices.assign(ids.begin(), ids.end());
    }
    if (report.indices.empty()) {
        throw Error("baseline_scores: empty active set");
    }
    report.direction.assign(data.dim(), 0.0);
    if (!report.direction.empty()) {
        report.direction[0] = 1.0;
    }
    report.degenerate = true;

    const std::size_t n = report.indices.size();
    switch (kind) {
        case BaselineKind::l2: {
            Matrix rows(0, data.dim());
            for (auto i : report.indices) {
                rows.append_row(data.sample(i).x);
            }
            report.scores = centered_squared_norms(rows);
            break;
        }
        case BaselineKind::loss:
            report.scores.resize(n);
            for (std::size_t j = 0; j < n; ++j) {
                report.scores[j] = loss(model, w, data.sample(report.indices[j]));
            }
            break;
        case BaselineKind::gradient:
            report.scores.resize(n);
            for (std::size_t j = 0; j < n; ++j) {
                report.scores[j] = squared_norm(grad(model, w, data.sample(report.indices[j])));
            }
            break;
        case BaselineKind::gradient_centered: {
            Matrix rows(0, data.dim());
            for (auto i : report.indices) {
                rows.append_row(grad(model, w, data.sample(i)));
            }
            report.scores = centered_squared_norms(rows);
            break;
        }
        default:
            break;
    }
    return report;
}

SeverOutcome run_baseline(BaselineKind kind, const Dataset& data, const Learner& learner,
                          const SeverConfig& cfg) {
    if (kind == BaselineKind::ransac) {
        throw Error("run_baseline: use run_ransac for the ransac defense");
    }
    if (kind == BaselineKind::no_defense) {
        if (data.active_count() == 0) {
            throw Error("run_baseline: empty active set");
        }
        SeverOutcome out;
        FitResult fit = learner(data);
        out.learner_calls = 1;
        out.w = std::move(fit.w);
        out.achieved_gamma = fit.gamma;
        out.retained = data.active_mask();
        return out;
    }
    SeverConfig practical = cfg;
    practical.variant = SeverVariant::practical;
    const LossModel model = learner.model;
    return run_filter_loop(data, learner, practical,
                           [kind, &model](std::span<const double> w, const Dataset& d,
                                          std::span<const std::size_t> ids, std::uint64_t) {
                               return baseline_scores(kind, model, w, d, ids);
                           });
}

double test_error(const LossModel& model, std::span<const double> w, const Dataset& test) {
    if (test.size() == 0) {
        throw Error("test_error: empty test set");
    }
    double total = 0.0;
    for (std::size_t i = 0; i < test.size(); ++i) {
        const auto s = test.sample(i);
        const double t = dot(w, s.x);
        if (model.kind == LossKind::squared) {
            total += (t - s.y) * (t - s.y);
        } else {
            const double predicted = t >= 0.0 ? 1.0 : -1.0;
            total += predicted != s.y ? 1.0 : 0.0;
        }
    }
    return total / static_cast<double>(test.size());
}

namespace {

double median_loss(const LossModel& model, std::span<const double> w, const Dataset& data) {
    Vec losses;
    losses.reserve(data.active_count());
    for (auto i : data.active_indices()) {
        losses.push_back(loss(model, w, data.sample(i)));
    }
    const std::size_t mid = losses.size() / 2;
    std::nth_element(losses.begin(), losses.begin() + static_cast<std::ptrdiff_t>(mid), losses.end());
    if (losses.size() % 2 == 1) {
        return losses[mid];
    }
    const double hi = losses[mid];
    const double lo = *std::max_element(losses.begin(), losses.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

}  // namespace

SeverOutcome run_ransac(const Dataset& data, const Learner& learner, const RansacConfig& cfg,
                        const Dataset* test_data) {
    const auto ids = data.active_indices();
    const std::size_t m = cfg.subsample_size == 0 ? data.dim() + 5 : cfg.subsample_size;
    if (m == 0 || m > ids.size()) {
        throw Error("run_ransac: subsample_size exceeds the active count");
    }
    if (cfg.num_rounds == 0) {
        throw Error("run_ransac: num_rounds must be >= 1");
    }
    if (cfg.selection == RansacSelection::oracle_test && test_data == nullptr) {
        throw Error("run_ransac: oracle_test selection needs test data");
    }

    SeverOutcome best;
    double best_value = std::numeric_limits<double>::infinity();
    std::vector<std::uint8_t> best_mask;
    for (std::size_t round = 0; round < cfg.num_rounds; ++round) {
        std::vector<std::size_t> chosen;
        if (m == ids.size()) {
            chosen = ids;
        } else {
            std::mt19937_64 rng(derive_seed(cfg.seed, {round}));
            std::sample(ids.begin(), ids.end(), std::back_inserter(chosen), m, rng);
        }
        Dataset sub = data;
        std::vector<std::uint8_t> keep(data.size(), 0);
        for (auto i : chosen) {
            keep[i] = 1;
        }
        for (auto i : ids) {
            if (keep[i] == 0) {
                sub.deactivate(i);
            }
        }
        FitResult fit = learner(sub);
        const double value = cfg.selection == RansacSelection::oracle_test
                                 ? test_error(learner.model, fit.w, *test_data)
                                 : median_loss(learner.model, fit.w, data);
        if (value < best_value) {
            best_value = value;
            best.w = std::move(fit.w);
            best.achieved_gamma = fit.gamma;
            best_mask = sub.active_mask();
        }
        ++best.learner_calls;
    }
    best.rounds_run = cfg.num_rounds;
    // Samples left out of the winning subsample count as removed.
    std::vector<std::size_t> excluded;
    for (auto i : ids) {
        if (best_mask[i] == 0) {
            excluded.push_back(i);
        }
    }
    best.removed_per_round.push_back(std::move(excluded));
    best.retained = std::move(best_mask);
    return best;
}

}  // namespace sever
