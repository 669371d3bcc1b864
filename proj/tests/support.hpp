#pragma once

// Independent oracles and hand-built instances shared by the unit tests and
// the acceptance binary. Nothing here calls into the code under test except
// to build inputs.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <vector>

#include "sever/attacks.hpp"
#include "sever/linalg.hpp"
#include "sever/synthetic.hpp"

namespace testing_support {

using sever::Matrix;
using sever::Vec;

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.
inline Vec jacobi_eigenvalues(std::vector<Vec> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    Vec ev(n);
    for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
    std::sort(ev.begin(), ev.end(), std::greater<>());
    return ev;
}

/// Largest singular value via the eigenvalues of m^T m.
inline double brute_top_singular_value(const Matrix& m) {
    std::vector<Vec> g(m.cols(), Vec(m.cols(), 0.0));
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t i = 0; i < m.cols(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) g[i][j] += m(r, i) * m(r, j);
    return std::sqrt(std::max(0.0, jacobi_eigenvalues(std::move(g)).front()));
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols) {
    std::normal_distribution<double> normal;
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = normal(rng);
    return m;
}

/// Regression data with three groups of outliers planted on orthogonal axes.
/// Each group's gradients are weaker than the previous group's, so a
/// spectral filter only sees a group once the stronger ones are gone.
/// Groups: 20 points on axis 0, then 40 on axis 1, then 40 on axis 2.
inline sever::CorruptedDataset masked_groups_instance(std::uint64_t seed) {
    sever::SyntheticConfig sc;
    sc.n_train = 1000;
    sc.dim = 20;
    sc.seed = seed;
    const auto task = sever::gen_regression(sc);
    sever::CorruptedDataset out{task.train, {}};
    out.provenance.is_outlier.assign(out.data.size(), 0);
    auto plant = [&](std::size_t axis, std::size_t count, double offset) {
        Vec x(sc.dim, 0.0);
        x[axis] = 3.0;
        for (std::size_t i = 0; i < count; ++i) {
            out.data.append(x, 3.0 * task.w_star[axis] + offset);
            out.provenance.is_outlier.push_back(1);
        }
    };
    plant(0, 20, 10.0);
    plant(1, 40, 5.0);
    plant(2, 40, 2.5);
    return out;
}

/// Gradient-like rows for the filter: 90 good points ~ N(0, I_10) and 10 bad
/// points far out along e1 and slightly spread. Returns the rows and the
/// number of good rows (the first ones).
inline Matrix good_bad_rows(std::uint64_t seed, std::size_t& n_good) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    n_good = 90;
    Matrix m(100, 10);
    for (std::size_t r = 0; r < 100; ++r) {
        for (std::size_t c = 0; c < 10; ++c) m(r, c) = normal(rng);
        if (r >= n_good) m(r, 0) += 15.0;
    }
    return m;
}

inline std::size_t count_flagged(const std::vector<std::size_t>& ids,
                                 const std::vector<std::uint8_t>& flags) {
    std::size_t k = 0;
    for (auto id : ids) k += flags[id] != 0 ? 1 : 0;
    return k;
}

}  // namespace testing_support
