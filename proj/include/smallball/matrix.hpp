#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <vector>

namespace smallball {

// Dense row-major matrix, just large enough for N x n coefficient matrices
// (rows are the vectors a_1..a_N of a weighted sum) and their small Gram
// matrices. Not a linear algebra library on purpose.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    Matrix(std::initializer_list<std::initializer_list<double>> init) {
        rows_ = init.size();
        cols_ = rows_ ? init.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : init) {
            if (r.size() != cols_) throw std::invalid_argument("ragged matrix initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return {data_.data() + i * cols_, cols_};
    }
    std::span<const double> flat() const { return data_; }

    // out = A * x, out must have size rows().
    void multiply(std::span<const double> x, std::span<double> out) const {
        for (std::size_t i = 0; i < rows_; ++i) {
            double acc = 0.0;
            const double* r = data_.data() + i * cols_;
            for (std::size_t j = 0; j < cols_; ++j) acc += r[j] * x[j];
            out[i] = acc;
        }
    }

    bool is_zero() const {
        for (double v : data_)
            if (v != 0.0) return false;
        return true;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

// Singular values of A via Jacobi diagonalization of A^T A. Fine for the
// n <= 3 matrices the LCD machinery handles.
struct SingularValues {
    double min = 0.0;
    double max = 0.0;
};
SingularValues singular_values(const Matrix& a);

} // namespace smallball
