#include <doctest.h>

#include <cmath>
#include <random>

#include "sever/losses.hpp"

using namespace sever;

namespace {

Vec finite_difference(const LossModel& model, Vec w, const LabeledSample& s) {
    Vec out(w.size());
    const double h = 1e-6;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double keep = w[k];
        w[k] = keep + h;
        const double up = loss(model, w, s);
        w[k] = keep - h;
        const double down = loss(model, w, s);
        w[k] = keep;
        out[k] = (up - down) / (2 * h);
    }
    return out;
}

}  // namespace

TEST_CASE("loss values by hand") {
    const Vec w{1.0, -2.0};
    const Vec x{3.0, 1.0};  // w.x = 1
    CHECK(loss({LossKind::squared}, w, {x, 3.0}) == doctest::Approx(2.0));  // (1-3)^2 / 2
    CHECK(loss({LossKind::hinge}, w, {x, -1.0}) == doctest::Approx(2.0));
    CHECK(loss({LossKind::hinge}, w, {x, 1.0}) == doctest::Approx(0.0));
    CHECK(loss({LossKind::hinge}, scaled(w, 0.5), {x, 1.0}) == doctest::Approx(0.5));
    CHECK(loss({LossKind::logistic}, w, {x, 1.0}) == doctest::Approx(std::log1p(std::exp(-1.0))));
}

TEST_CASE("gradients match finite differences") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> normal;
    for (auto kind : {LossKind::squared, LossKind::hinge, LossKind::logistic}) {
        const LossModel model{kind, 0.0};
        for (int t = 0; t < 40; ++t) {
            Vec w(5), x(5);
            for (auto& v : w) v = normal(rng);
            for (auto& v : x) v = normal(rng);
            const double y = kind == LossKind::squared ? normal(rng) : (t % 2 ? 1.0 : -1.0);
            if (kind == LossKind::hinge && std::abs(1.0 - y * dot(w, x)) < 1e-3) continue;
            const LabeledSample s{x, y};
            const Vec g = grad(model, w, s);
            const Vec fd = finite_difference(model, w, s);
            CHECK(norm2(subtract(fd, g)) <= 1e-6 * std::max(1.0, norm2(g)));
        }
    }
}

TEST_CASE("hinge subgradient is zero at the kink and outside the margin") {
    const LossModel hinge{LossKind::hinge};
    const Vec x{1.0, 0.0};
    CHECK(grad(hinge, Vec{1.0, 0.0}, {x, 1.0}) == Vec{0.0, 0.0});  // y w.x == 1
    CHECK(grad(hinge, Vec{2.0, 0.0}, {x, 1.0}) == Vec{0.0, 0.0});
    CHECK(grad(hinge, Vec{0.5, 0.0}, {x, 1.0}) == Vec{-1.0, 0.0});
}

TEST_CASE("logistic sigmoid is stable at the extremes") {
    CHECK(logistic_sigmoid(0.0) == doctest::Approx(0.5));
    CHECK(logistic_sigmoid(800.0) == 1.0);
    CHECK(logistic_sigmoid(-800.0) >= 0.0);
    CHECK(std::isfinite(loss({LossKind::logistic}, Vec{1000.0}, {Vec{1.0}, -1.0})));
    CHECK(loss({LossKind::logistic}, Vec{1000.0}, {Vec{1.0}, -1.0}) == doctest::Approx(1000.0));
}

TEST_CASE("objective adds the ridge penalty once") {
    Dataset data(Matrix::from_rows({{1.0}, {2.0}}), Vec{1.0, 0.0});
    const LossModel model{LossKind::squared, 0.5};
    const Vec w{1.0};
    // mean of (0, 2) plus 0.5 * 1 / 2
    CHECK(objective(model, w, data) == doctest::Approx(1.0 + 0.25));
    // mean of (0, 4) plus 0.5 * 1
    CHECK(objective_gradient(model, w, data)[0] == doctest::Approx(2.0 + 0.5));
    data.deactivate(1);
    CHECK(objective(model, w, data) == doctest::Approx(0.25));
}

TEST_CASE("grad_matrix lists active rows in id order") {
    Dataset data(Matrix::from_rows({{1.0}, {2.0}, {3.0}}), Vec{0.0, 0.0, 0.0});
    data.deactivate(1);
    const Matrix g = grad_matrix({LossKind::squared}, Vec{1.0}, data);
    REQUIRE(g.rows() == 2);
    CHECK(g(0, 0) == doctest::Approx(1.0));
    CHECK(g(1, 0) == doctest::Approx(9.0));
    data.deactivate(0);
    data.deactivate(2);
    CHECK_THROWS_AS(grad_matrix({LossKind::squared}, Vec{1.0}, data), Error);
}

TEST_CASE("loss kind names round-trip") {
    for (auto kind : {LossKind::squared, LossKind::hinge, LossKind::logistic}) {
        CHECK(parse_loss_kind(to_string(kind)) == kind);
    }
    CHECK_THROWS_AS(parse_loss_kind("huber"), Error);
}
