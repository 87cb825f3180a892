#include "fptmc/matrix.hpp"

#include <cmath>
#include <cstddef>
#include <utility>

#include "fptmc/errors.hpp"

namespace fptmc {

Matrix Matrix::multiply(const Matrix& other) const {
    const std::size_t n = n_;
    Matrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < n; ++l) {
            const double a = (*this)(i, l);
            if (a == 0.0) {
                continue;
            }
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += a * other(l, j);
            }
        }
    }
    return out;
}

std::vector<double> Matrix::left_multiply(const std::vector<double>& x) const {
    std::vector<double> out(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const double xi = x[i];
        if (xi == 0.0) {
            continue;
        }
        for (std::size_t j = 0; j < n_; ++j) {
            out[j] += xi * (*this)(i, j);
        }
    }
    return out;
}

LuSolver::LuSolver(Matrix a, double pivot_threshold) : lu_(std::move(a)), perm_(lu_.size()) {
    const std::size_t n = lu_.size();
    for (std::size_t i = 0; i < n; ++i) {
        perm_[i] = i;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot_row = col;
        double pivot = std::fabs(lu_(col, col));
        for (std::size_t r = col + 1; r < n; ++r) {
            const double cand = std::fabs(lu_(r, col));
            if (cand > pivot) {
                pivot = cand;
                pivot_row = r;
            }
        }
        if (!(pivot >= pivot_threshold)) {
            throw SingularSystem("pivot " + std::to_string(pivot) + " in column " +
                                 std::to_string(col) + " is below threshold; no path to "
                                 "absorption from some state");
        }
        if (pivot_row != col) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lu_(col, j), lu_(pivot_row, j));
            }
            std::swap(perm_[col], perm_[pivot_row]);
        }
        const double inv = 1.0 / lu_(col, col);
        for (std::size_t r = col + 1; r < n; ++r) {
            const double factor = lu_(r, col) * inv;
            lu_(r, col) = factor;
            if (factor == 0.0) {
                continue;
            }
            for (std::size_t j = col + 1; j < n; ++j) {
                lu_(r, j) -= factor * lu_(col, j);
            }
        }
    }
}

std::vector<double> LuSolver::solve(const std::vector<double>& b) const {
    const std::size_t n = lu_.size();
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = b[perm_[i]];
    }
    for (std::size_t i = 1; i < n; ++i) {
        double s = x[i];
        for (std::size_t j = 0; j < i; ++j) {
            s -= lu_(i, j) * x[j];
        }
        x[i] = s;
    }
    for (std::size_t i = n; i-- > 0;) {
        double s = x[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= lu_(i, j) * x[j];
        }
        x[i] = s / lu_(i, i);
    }
    return x;
}

}  // namespace fptmc
