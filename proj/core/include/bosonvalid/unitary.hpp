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

#ifndef BOSONVALID_UNITARY_HPP
#define BOSONVALID_UNITARY_HPP

#include <cstdint>

#include <Eigen/Dense>

namespace bosonvalid {

/// An m x m interferometer matrix. Entry (i, j) is the amplitude from input
/// mode j to output mode i (0-based).
class UnitaryMatrix {
  public:
    /// Validates squareness and unitarity (max-norm defect below tolerance).
    explicit UnitaryMatrix(Eigen::MatrixXcd entries, double tolerance = 1e-10);

    int modes() const { return static_cast<int>(entries_.rows()); }
    const Eigen::MatrixXcd &entries() const { return entries_; }

    /// Max-norm of U^dagger U - I.
    double unitarity_defect() const;

  private:
    Eigen::MatrixXcd entries_;
};

/// Haar-distributed random unitary: QR decomposition of a complex
/// standard-Gaussian matrix with the R diagonal phases folded back into Q.
/// Deterministic for a given seed.
UnitaryMatrix haar_random_unitary(int modes, std::uint64_t seed);

} // namespace bosonvalid

#endif // BOSONVALID_UNITARY_HPP
