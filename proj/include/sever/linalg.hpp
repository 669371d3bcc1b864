#pragma once

// Minimal dense linear algebra used by the filters and learners.
// Matrices are row-major: one row per sample (a gradient or a feature vector).

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace sever {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Vec = std::vector<double>;

class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    /// Builds a matrix from a list of equally sized rows.
    static Matrix from_rows(const std::vector<Vec>& rows);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const noexcept { return data_; }

    void append_row(std::span<const double> r);

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double squared_norm(std::span<const double> a);
/// a += scale * b
void axpy(double scale, std::span<const double> b, std::span<double> a);
Vec scaled(std::span<const double> a, double scale);
Vec subtract(std::span<const double> a, std::span<const double> b);

/// m * v, one entry per row.
Vec multiply(const Matrix& m, std::span<const double> v);
/// m^T * u, one entry per column.
Vec multiply_transposed(const Matrix& m, std::span<const double> u);

double frobenius_norm(const Matrix& m);

Vec mean_rows(const Matrix& m);
Matrix center_rows(const Matrix& m, std::span<const double> mu);

struct SingularDirection {
    Vec v;
    double sigma = 0.0;
    bool converged = false;
    /// Set when the matrix has no nonzero direction; v is then e1.
    bool degenerate = false;
    std::size_t iterations = 0;
};

/// Top right singular vector of m by power iteration on m^T m, started from a
/// seeded random unit vector. Never throws on non-convergence; the best
/// iterate is returned with converged == false.
SingularDirection top_right_singular_vector(const Matrix& m, double tol = 1e-8,
                                            std::size_t max_iters = 1000,
                                            std::uint64_t seed = 0);

/// Solves a symmetric positive definite system a x = b by Cholesky
/// decomposition. Throws Error if a is not numerically positive definite.
Vec solve_spd(const Matrix& a, std::span<const double> b);

}  // namespace sever
