#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sever/filter.hpp"
#include "support.hpp"

using namespace sever;
namespace ts = testing_support;

namespace {

ScoreReport report_of(Vec scores) {
    ScoreReport r;
    r.scores = std::move(scores);
    for (std::size_t i = 0; i < r.scores.size(); ++i) r.indices.push_back(i);
    r.direction = {1.0};
    return r;
}

}  // namespace

TEST_CASE("scores in d = 3 match a grid search over directions") {
    std::mt19937_64 rng(5);
    const Matrix rows = ts::random_matrix(rng, 30, 3);
    const auto report = compute_scores(rows);
    // Brute force: the unit direction maximising the sum of squared centered
    // projections, searched on a fine grid over the sphere.
    const Matrix c = center_rows(rows, mean_rows(rows));
    double best = -1.0;
    Vec best_v;
    const int steps = 400;
    for (int i = 0; i <= steps; ++i) {
        const double theta = M_PI * i / steps;
        for (int j = 0; j < 2 * steps; ++j) {
            const double phi = M_PI * j / steps;
            const Vec v{std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)};
            const double energy = squared_norm(multiply(c, v));
            if (energy > best) {
                best = energy;
                best_v = v;
            }
        }
    }
    double total = 0.0;
    for (double s : report.scores) total += s;
    CHECK(total == doctest::Approx(best).epsilon(1e-4));
    CHECK(std::abs(dot(best_v, report.direction)) > 0.999);
    for (std::size_t j = 0; j < 30; ++j) {
        const double p = dot(c.row(j), report.direction);
        CHECK(report.scores[j] == doctest::Approx(p * p));
    }
    CHECK(report.sigma_hat == doctest::Approx(std::sqrt(best / 30.0)).epsilon(1e-4));
}

TEST_CASE("scores are invariant to a common shift and scale quadratically") {
    std::mt19937_64 rng(8);
    Matrix rows = ts::random_matrix(rng, 20, 4);
    const auto base = compute_scores(rows);
    Matrix moved = rows;
    for (std::size_t r = 0; r < 20; ++r)
        for (std::size_t c = 0; c < 4; ++c) moved(r, c) = 2.0 * rows(r, c) + 7.0;
    const auto other = compute_scores(moved);
    for (std::size_t j = 0; j < 20; ++j) CHECK(other.scores[j] == doctest::Approx(4.0 * base.scores[j]));
}

TEST_CASE("identical rows give zero scores") {
    const Matrix rows = Matrix::from_rows({{1, 2}, {1, 2}, {1, 2}});
    const auto report = compute_scores(rows, std::vector<std::size_t>{4, 7, 9});
    CHECK(report.degenerate);
    CHECK(report.indices == std::vector<std::size_t>{4, 7, 9});
    CHECK(report.max_score() == 0.0);
    FilterConfig cfg;
    CHECK(randomized_filter(report, cfg).removed.empty());
    CHECK_THROWS_AS(compute_scores(rows, std::vector<std::size_t>{1}), Error);
}

TEST_CASE("randomized filter is a no-op at or below the threshold") {
    const auto report = report_of({3.0, 1.0, 2.0});  // mean 2
    FilterConfig cfg;
    cfg.threshold_mult = 2.0;
    cfg.sigma = 1.0;
    CHECK(randomized_filter(report, cfg).kept.size() == 3);
    cfg.sigma = 0.999;
    for (std::uint64_t s = 0; s < 20; ++s) {
        cfg.seed = s;
        const auto split = randomized_filter(report, cfg);
        CHECK(!split.removed.empty());
        CHECK(std::find(split.removed.begin(), split.removed.end(), 0u) != split.removed.end());
    }
}

TEST_CASE("randomized filter removal law by Monte Carlo") {
    const auto report = report_of({4.0, 2.0, 1.0, 1.0});
    const Vec expect{1.0, 0.5, 0.25, 0.25};
    std::vector<double> hits(4, 0.0);
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
        FilterConfig cfg;
        cfg.seed = static_cast<std::uint64_t>(t);
        const auto split = randomized_filter(report, cfg);
        CHECK(split.kept.size() + split.removed.size() == 4);
        for (auto id : split.removed) hits[id] += 1.0;
    }
    for (int i = 0; i < 4; ++i) CHECK(hits[i] / trials == doctest::Approx(expect[i]).epsilon(0.03));
}

TEST_CASE("top-p filter") {
    CHECK(top_p_filter(report_of({5, 1, 3}), 1.0 / 3).removed == std::vector<std::size_t>{0});
    CHECK(top_p_filter(report_of({2, 2, 2, 2}), 0.5).removed == std::vector<std::size_t>{0, 1});
    CHECK(top_p_filter(report_of({1, 9, 9, 4}), 0.5).removed == std::vector<std::size_t>{1, 2});
    CHECK(top_p_count(0.1, 30) == 3);   // p * n lands on an integer
    CHECK(top_p_count(0.07, 100) == 7);  // 7.000000000000001 in floating point
    CHECK(top_p_count(0.05, 41) == 3);
    CHECK(top_p_count(0.0, 41) == 0);
    CHECK_THROWS_AS(top_p_count(1.0, 5), Error);
}

TEST_CASE("robust mean of clean data stays near the sample mean") {
    std::mt19937_64 rng(17);
    const Matrix pts = ts::random_matrix(rng, 500, 10);
    FilterConfig cfg;
    const auto res = robust_mean(pts, 1.0, 0.1, cfg);
    CHECK(norm2(res.mean) < 0.3);
    CHECK(norm2(subtract(res.mean, mean_rows(pts))) < 0.2);
}

TEST_CASE("robust mean of identical points") {
    const Matrix pts = Matrix::from_rows({{2, -1}, {2, -1}, {2, -1}});
    const auto res = robust_mean(pts, 0.1, 0.1);
    CHECK(res.mean == Vec{2, -1});
    CHECK(res.removed == 0);
}

TEST_CASE("robust mean removes a planted cluster") {
    std::mt19937_64 rng(23);
    Matrix pts = ts::random_matrix(rng, 500, 10);
    for (int i = 0; i < 50; ++i) pts.append_row(Vec{20, 0, 0, 0, 0, 0, 0, 0, 0, 0});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        FilterConfig cfg;
        cfg.seed = seed;
        const auto res = robust_mean(pts, 1.0, 0.1, cfg);
        CHECK(norm2(res.mean) < 1.0);
        CHECK(res.removed <= 150);
    }
    CHECK(norm2(mean_rows(pts)) == doctest::Approx(20.0 * 50 / 550).epsilon(0.1));
}

TEST_CASE("robust mean budget flag") {
    // Two equal clusters: any useful round exceeds a zero budget.
    Matrix pts(0, 1);
    for (int i = 0; i < 20; ++i) pts.append_row(Vec{i < 10 ? -5.0 : 5.0});
    const auto res = robust_mean(pts, 0.1, 0.0);
    CHECK(res.budget_exceeded);
    CHECK(res.removed == 0);
    CHECK(res.mean[0] == doctest::Approx(0.0));
    CHECK_THROWS_AS(robust_mean(pts, 0.1, 0.5), Error);
    CHECK_THROWS_AS(robust_mean(Matrix::from_rows({{1.0}}), 0.1, 0.1), Error);
}
