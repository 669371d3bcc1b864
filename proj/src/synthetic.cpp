#include "sever/synthetic.hpp"

#include <random>

namespace sever {

namespace {

template <class Label>
SyntheticTask generate(const SyntheticConfig& cfg, Label label) {
    if (cfg.n_train == 0 || cfg.dim == 0) {
        throw Error("synthetic: n and d must be at least 1");
    }
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> normal;

    SyntheticTask task;
    task.w_star.resize(cfg.dim);
    double norm = 0.0;
    while (norm < 1e-12) {
        for (auto& v : task.w_star) {
            v = normal(rng);
        }
        norm = norm2(task.w_star);
    }
    for (auto& v : task.w_star) {
        v /= norm;
    }

    auto draw = [&](std::size_t n) {
        Matrix x(n, cfg.dim);
        Vec y(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto row = x.row(i);
            for (auto& v : row) {
                v = normal(rng);
            }
            const double z = normal(rng);
            y[i] = label(dot(row, task.w_star) + cfg.noise * z);
        }
        return Dataset(std::move(x), std::move(y));
    };
    task.train = draw(cfg.n_train);
    task.test = draw(cfg.n_test);
    return task;
}

}  // namespace

SyntheticTask gen_regression(const SyntheticConfig& cfg) {
    return generate(cfg, [](double t) { return t; });
}

SyntheticTask gen_classification(const SyntheticConfig& cfg) {
    return generate(cfg, [](double t) { return t >= 0.0 ? 1.0 : -1.0; });
}

}  // namespace sever
