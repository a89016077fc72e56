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

#ifndef BOSONVALID_PERMANENT_HPP
#define BOSONVALID_PERMANENT_HPP

#include <complex>

#include <Eigen/Dense>

namespace bosonvalid {

/// Permanent of a square complex matrix by Ryser's inclusion-exclusion
/// formula with Gray-code subset updates, O(2^n * n). Exact in the sense of
/// floating-point summation; per(empty) = 1.
std::complex<double> permanent(const Eigen::MatrixXcd &matrix);

/// Real specialization (used for distinguishable-particle probabilities).
double permanent(const Eigen::MatrixXd &matrix);

/// Glynn's formula over {-1,+1}^n with Gray-code updates. Independent
/// arithmetic route kept as a cross-check for the Ryser kernel.
std::complex<double> permanent_glynn(const Eigen::MatrixXcd &matrix);

} // namespace bosonvalid

#endif // BOSONVALID_PERMANENT_HPP
