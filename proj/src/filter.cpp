#include "sever/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "sever/seed.hpp"

namespace sever {

double ScoreReport::mean_score() const {
    if (scores.empty()) {
        return 0.0;
    }
    return std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
}

double ScoreReport::max_score() const {
    return scores.empty() ? 0.0 : *std::max_element(scores.begin(), scores.end());
}

ScoreReport compute_scores(const Matrix& rows, std::span<const std::size_t> ids,
                           std::uint64_t seed) {
    if (rows.rows() == 0) {
        throw Error("compute_scores: empty input");
    }
    if (!ids.empty() && ids.size() != rows.rows()) {
        throw Error("compute_scores: id count does not match row count");
    }
    ScoreReport report;
    if (ids.empty()) {
        report.indices.resize(rows.rows());
        std::iota(report.indices.begin(), report.indices.end(), std::size_t{0});
    } else {
        report.indices.assign(ids.begin(), ids.end());
    }

    const Matrix centered = center_rows(rows, mean_rows(rows));
    const auto top = top_right_singular_vector(centered, 1e-8, 1000, seed);
    report.direction = top.v;
    report.degenerate = top.degenerate;
    report.sigma_hat = top.sigma / std::sqrt(static_cast<double>(rows.rows()));
    report.scores.resize(rows.rows(), 0.0);
    if (!top.degenerate) {
        const Vec proj = multiply(centered, top.v);
        for (std::size_t j = 0; j < proj.size(); ++j) {
            report.scores[j] = proj[j] * proj[j];
        }
    }
    return report;
}

FilterSplit randomized_filter(const ScoreReport& report, const FilterConfig& cfg) {
    if (report.scores.empty()) {
        throw Error("randomized_filter: empty report");
    }
    FilterSplit split;
    const double threshold = cfg.threshold_mult * cfg.sigma * cfg.sigma;
    if (report.mean_score() <= threshold) {
        split.kept = report.indices;
        return split;
    }
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> uniform(0.0, report.max_score());
    const double t = uniform(rng);
    for (std::size_t j = 0; j < report.scores.size(); ++j) {
        (report.scores[j] > t ? split.removed : split.kept).push_back(report.indices[j]);
    }
    return split;
}

std::size_t top_p_count(double p_fraction, std::size_t count) {
    if (p_fraction < 0.0 || p_fraction >= 1.0) {
        throw Error("top_p_filter: p_fraction must lie in [0, 1)");
    }
    // Guard against p * count landing a hair above an integer.
    const double raw = p_fraction * static_cast<double>(count);
    return std::min(count, static_cast<std::size_t>(std::ceil(raw - 1e-9)));
}

FilterSplit top_p_filter(const ScoreReport& report, double p_fraction) {
    const std::size_t k = top_p_count(p_fraction, report.scores.size());
    std::vector<std::size_t> order(report.scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (report.scores[a] != report.scores[b]) {
            return report.scores[a] > report.scores[b];
        }
        return report.indices[a] < report.indices[b];
    });
    std::vector<std::uint8_t> drop(order.size(), 0);
    for (std::size_t r = 0; r < k; ++r) {
        drop[order[r]] = 1;
    }
    FilterSplit split;
    for (std::size_t j = 0; j < order.size(); ++j) {
        (drop[j] != 0 ? split.removed : split.kept).push_back(report.indices[j]);
    }
    return split;
}

constexpr std::uint64_t kBudgetRedraws = 8;

RobustMeanResult robust_mean(const Matrix& points, double sigma, double eps_budget,
                             const FilterConfig& cfg) {
    if (points.rows() < 2) {
        throw Error("robust_mean: need at least two points");
    }
    if (eps_budget < 0.0 || eps_budget > 0.3) {
        throw Error("robust_mean: eps_budget must lie in [0, 0.3]");
    }
    const std::size_t n = points.rows();
    const double budget = 3.0 * eps_budget * static_cast<double>(n);

    std::vector<std::size_t> alive(n);
    std::iota(alive.begin(), alive.end(), std::size_t{0});
    RobustMeanResult out;

    auto gather = [&](const std::vector<std::size_t>& ids) {
        Matrix m(0, points.cols());
        for (auto i : ids) {
            m.append_row(points.row(i));
        }
        return m;
    };

    while (alive.size() >= 2) {
        const Matrix current = gather(alive);
        FilterConfig round_cfg = cfg;
        round_cfg.sigma = sigma;
        round_cfg.mode = FilterMode::randomized;
        round_cfg.seed = derive_seed(cfg.seed, {out.rounds});
        const auto report = compute_scores(current, alive, round_cfg.seed);
        // A single low threshold draw can overshoot the budget even when the
        // round is useful, so redraw a few times before giving up.
        FilterSplit split;
        bool within_budget = false;
        for (std::uint64_t attempt = 0; attempt < kBudgetRedraws && !within_budget; ++attempt) {
            round_cfg.seed = derive_seed(cfg.seed, {out.rounds, attempt});
            split = randomized_filter(report, round_cfg);
            within_budget = static_cast<double>(out.removed + split.removed.size()) <= budget;
        }
        ++out.rounds;
        if (split.removed.empty()) {
            break;
        }
        if (!within_budget) {
            out.budget_exceeded = true;
            break;
        }
        out.removed += split.removed.size();
        alive = std::move(split.kept);
    }
    out.mean = mean_rows(gather(alive));
    return out;
}

}  // namespace sever
