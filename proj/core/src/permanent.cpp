/**
 * Copyright 2026 The bosonvalid authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "bosonvalid/permanent.hpp"

#include <bit>
#include <cstdint>
#include <vector>

#include "bosonvalid/errors.hpp"

namespace bosonvalid {

namespace {

template <typename Matrix>
void check_square(const Matrix &matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw DimensionError("permanent requires a square matrix, got " +
                             std::to_string(matrix.rows()) + "x" + std::to_string(matrix.cols()));
    }
    if (matrix.rows() > 62) {
        throw CapacityError("permanent limited to n <= 62 (subset bitmask width)");
    }
}

// Ryser: per(A) = (-1)^n sum over non-empty column subsets S of
// (-1)^|S| prod_i sum_{j in S} A[i][j]. Subsets walk in Gray-code order so
// each step toggles one column in the cached row sums.
template <typename Scalar, typename Matrix>
Scalar ryser(const Matrix &matrix) {
    const int n = static_cast<int>(matrix.rows());
    if (n == 0) {
        return Scalar(1);
    }
    // Column-major copy: toggling column j touches entries[j*n .. j*n+n).
    std::vector<Scalar> entries(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            entries[static_cast<std::size_t>(j) * n + i] = matrix(i, j);
        }
    }
    std::vector<Scalar> row_sums(static_cast<std::size_t>(n), Scalar(0));
    Scalar total(0);
    std::uint64_t gray = 0;
    const std::uint64_t count = std::uint64_t(1) << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        const int bit = std::countr_zero(k);
        const std::uint64_t mask = std::uint64_t(1) << bit;
        gray ^= mask;
        const Scalar *column = entries.data() + static_cast<std::size_t>(bit) * n;
        if (gray & mask) {
            for (int i = 0; i < n; ++i) {
                row_sums[static_cast<std::size_t>(i)] += column[i];
            }
        } else {
            for (int i = 0; i < n; ++i) {
                row_sums[static_cast<std::size_t>(i)] -= column[i];
            }
        }
        Scalar product = row_sums[0];
        for (int i = 1; i < n; ++i) {
            product *= row_sums[static_cast<std::size_t>(i)];
        }
        if (std::popcount(gray) & 1) {
            total -= product;
        } else {
            total += product;
        }
    }
    return (n & 1) ? -total : total;
}

} // namespace

std::complex<double> permanent(const Eigen::MatrixXcd &matrix) {
    check_square(matrix);
    return ryser<std::complex<double>>(matrix);
}

double permanent(const Eigen::MatrixXd &matrix) {
    check_square(matrix);
    return ryser<double>(matrix);
}

std::complex<double> permanent_glynn(const Eigen::MatrixXcd &matrix) {
    check_square(matrix);
    const int n = static_cast<int>(matrix.rows());
    if (n == 0) {
        return 1.0;
    }
    if (n == 1) {
        return matrix(0, 0);
    }
    // Glynn: per(A) = 2^(1-n) sum over delta in {-1,+1}^n with delta_0 = +1
    // of (prod_i delta_i) prod_j sum_i delta_i A[i][j]. Row-major copy:
    // flipping delta_i touches row i across all column sums.
    std::vector<std::complex<double>> entries(static_cast<std::size_t>(n) *
                                              static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            entries[static_cast<std::size_t>(i) * n + j] = matrix(i, j);
        }
    }
    std::vector<std::complex<double>> column_sums(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            column_sums[static_cast<std::size_t>(j)] += entries[static_cast<std::size_t>(i) * n + j];
        }
    }
    std::complex<double> total(0.0);
    double delta_sign = 1.0;
    std::uint64_t gray = 0;
    const std::uint64_t count = std::uint64_t(1) << (n - 1);
    for (std::uint64_t k = 0; k < count; ++k) {
        if (k != 0) {
            const int bit = std::countr_zero(k);
            const std::uint64_t mask = std::uint64_t(1) << bit;
            gray ^= mask;
            // Rows 1..n-1 carry the free signs; row (bit+1) flips here.
            const int row = bit + 1;
            const double direction = (gray & mask) ? -2.0 : 2.0;
            const std::complex<double> *row_entries =
                entries.data() + static_cast<std::size_t>(row) * n;
            for (int j = 0; j < n; ++j) {
                column_sums[static_cast<std::size_t>(j)] += direction * row_entries[j];
            }
            delta_sign = -delta_sign;
        }
        std::complex<double> product = column_sums[0];
        for (int j = 1; j < n; ++j) {
            product *= column_sums[static_cast<std::size_t>(j)];
        }
        total += delta_sign * product;
    }
    return total / static_cast<double>(std::uint64_t(1) << (n - 1));
}

} // namespace bosonvalid
