#pragma once

#include <cstddef>
#include <cstdint>

#include "sever/dataset.hpp"

namespace sever {

struct SyntheticConfig {
    std::size_t n_train = 1000;
    std::size_t n_test = 200;
    std::size_t dim = 20;
    double noise = 0.1;
    std::uint64_t seed = 0;
};

struct SyntheticTask {
    Dataset train;
    Dataset test;
    /// True parameters, uniform on the unit sphere.
    Vec w_star;
};

/// x ~ N(0, I), y = x.w* + noise z with z ~ N(0, 1).
SyntheticTask gen_regression(const SyntheticConfig& cfg);

/// x ~ N(0, I), y = sign(x.w* + noise z) with sign(0) = +1.
SyntheticTask gen_classification(const SyntheticConfig& cfg);

}  // namespace sever
