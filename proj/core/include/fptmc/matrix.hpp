#pragma once

#include <cstddef>
#include <vector>

namespace fptmc {

/// Dense row-major square matrix, sized for small transient blocks.
class Matrix {
  public:
    Matrix() = default;
    explicit Matrix(std::size_t n, double fill = 0.0) : n_(n), a_(n * n, fill) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    std::size_t size() const { return n_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

    double row_sum(std::size_t i) const {
        double s = 0.0;
        for (std::size_t j = 0; j < n_; ++j) {
            s += a_[i * n_ + j];
        }
        return s;
    }

    /// this * other
    Matrix multiply(const Matrix& other) const;

    /// x' * this (row vector times matrix)
    std::vector<double> left_multiply(const std::vector<double>& x) const;

    bool operator==(const Matrix& other) const = default;

  private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// LU factorization with partial pivoting. Factors A = P·L·U once and
/// serves repeated right-hand sides. A pivot whose magnitude falls below
/// the threshold raises SingularSystem.
class LuSolver {
  public:
    static constexpr double kPivotThreshold = 1e-12;

    explicit LuSolver(Matrix a, double pivot_threshold = kPivotThreshold);

    std::size_t size() const { return lu_.size(); }

    /// Solves A·x = b.
    std::vector<double> solve(const std::vector<double>& b) const;

  private:
    Matrix lu_;
    std::vector<std::size_t> perm_;
};

}  // namespace fptmc
