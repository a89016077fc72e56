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

// Test-only oracles, deliberately written along different routes than the
// library: permutation-sum permanents, Pascal-triangle binomials, quadrature
// chi-square tails. They must stay independent of the code they check.

#ifndef BOSONVALID_TEST_UTIL_HPP
#define BOSONVALID_TEST_UTIL_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <vector>

#include <Eigen/Dense>

namespace bosonvalid::test {

/// Definitional permanent: sum over all permutations. Usable to n ~ 8.
inline std::complex<double> naive_permanent(const Eigen::MatrixXcd &matrix) {
    const int n = static_cast<int>(matrix.rows());
    if (n == 0) {
        return 1.0;
    }
    std::vector<int> sigma(static_cast<std::size_t>(n));
    std::iota(sigma.begin(), sigma.end(), 0);
    std::complex<double> total = 0.0;
    do {
        std::complex<double> product = 1.0;
        for (int i = 0; i < n; ++i) {
            product *= matrix(i, sigma[static_cast<std::size_t>(i)]);
        }
        total += product;
    } while (std::next_permutation(sigma.begin(), sigma.end()));
    return total;
}

/// Binomial coefficients by Pascal's triangle (additions only).
inline unsigned long long pascal_binomial(int n, int k) {
    if (k < 0 || k > n) {
        return 0;
    }
    std::vector<unsigned long long> row(static_cast<std::size_t>(n) + 1, 0);
    row[0] = 1;
    for (int i = 1; i <= n; ++i) {
        for (int j = i; j >= 1; --j) {
            row[static_cast<std::size_t>(j)] += row[static_cast<std::size_t>(j - 1)];
        }
    }
    return row[static_cast<std::size_t>(k)];
}

namespace detail {

inline double adaptive_simpson(const std::function<double(double)> &f, double a, double b,
                               double fa, double fm, double fb, double whole, double tol,
                               int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol) {
        return left + right + (left + right - whole) / 15.0;
    }
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

} // namespace detail

inline double integrate(const std::function<double(double)> &f, double a, double b, double tol) {
    const double m = 0.5 * (a + b);
    const double fa = f(a);
    const double fm = f(m);
    const double fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

/// Upper-tail chi-square probability by direct quadrature of the density.
inline double chi_square_tail_by_quadrature(double statistic, int dof) {
    const double a = 0.5 * static_cast<double>(dof);
    const double log_norm = -a * std::log(2.0) - std::lgamma(a);
    const auto density = [&](double x) {
        return std::exp(log_norm + (a - 1.0) * std::log(x) - 0.5 * x);
    };
    // The density is negligible well before this cutoff for desk-scale dof.
    const double cutoff = statistic + 120.0 + 30.0 * static_cast<double>(dof);
    return integrate(density, statistic, cutoff, 1e-13);
}

/// Kolmogorov asymptotic tail Q(lambda) = 2 sum (-1)^{j-1} exp(-2 j^2 l^2).
inline double kolmogorov_tail(double lambda) {
    double sum = 0.0;
    for (int j = 1; j <= 100; ++j) {
        const double term = 2.0 * std::exp(-2.0 * static_cast<double>(j) * j * lambda * lambda);
        sum += (j % 2 == 1) ? term : -term;
    }
    return std::clamp(sum, 0.0, 1.0);
}

/// One-sample KS p-value against a continuous CDF.
inline double ks_test_pvalue(std::vector<double> sample,
                             const std::function<double(double)> &cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::abs(f - static_cast<double>(i) / n));
        d = std::max(d, std::abs(static_cast<double>(i + 1) / n - f));
    }
    const double scale = std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n);
    return kolmogorov_tail(scale * d);
}

/// Two-sample KS p-value (asymptotic).
inline double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) {
            ++i;
        } else {
            ++j;
        }
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double effective = std::sqrt(na * nb / (na + nb));
    return kolmogorov_tail((effective + 0.12 + 0.11 / effective) * d);
}

/// All output occupations of N bosons over m modes, collisions included.
inline std::vector<std::vector<int>> enumerate_compositions(int photons, int modes) {
    std::vector<std::vector<int>> all;
    std::vector<int> current(static_cast<std::size_t>(modes), 0);
    const std::function<void(int, int)> recurse = [&](int mode, int remaining) {
        if (mode == modes - 1) {
            current[static_cast<std::size_t>(mode)] = remaining;
            all.push_back(current);
            return;
        }
        for (int count = 0; count <= remaining; ++count) {
            current[static_cast<std::size_t>(mode)] = count;
            recurse(mode + 1, remaining - count);
        }
    };
    recurse(0, photons);
    return all;
}

/// The balanced two-mode coupler (1, i; i, 1)/sqrt(2).
inline Eigen::MatrixXcd balanced_coupler() {
    Eigen::MatrixXcd u(2, 2);
    const double s = 1.0 / std::sqrt(2.0);
    u(0, 0) = s;
    u(0, 1) = std::complex<double>(0.0, s);
    u(1, 0) = std::complex<double>(0.0, s);
    u(1, 1) = s;
    return u;
}

} // namespace bosonvalid::test

#endif // BOSONVALID_TEST_UTIL_HPP
