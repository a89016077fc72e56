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

#include "bosonvalid/unitary.hpp"

#include <cmath>
#include <complex>

#include "bosonvalid/errors.hpp"
#include "bosonvalid/rng.hpp"

namespace bosonvalid {

UnitaryMatrix::UnitaryMatrix(Eigen::MatrixXcd entries, double tolerance)
    : entries_(std::move(entries)) {
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
        throw DimensionError("unitary must be a non-empty square matrix");
    }
    if (unitarity_defect() > tolerance) {
        throw DimensionError("matrix fails the unitarity check (defect " +
                             std::to_string(unitarity_defect()) + ")");
    }
}

double UnitaryMatrix::unitarity_defect() const {
    const Eigen::MatrixXcd gram = entries_.adjoint() * entries_;
    const Eigen::MatrixXcd identity =
        Eigen::MatrixXcd::Identity(entries_.rows(), entries_.cols());
    return (gram - identity).cwiseAbs().maxCoeff();
}

UnitaryMatrix haar_random_unitary(int modes, std::uint64_t seed) {
    if (modes < 1) {
        throw DimensionError("mode count must be at least 1");
    }
    Rng rng(seed);
    Eigen::MatrixXcd ginibre(modes, modes);
    for (int i = 0; i < modes; ++i) {
        for (int j = 0; j < modes; ++j) {
            ginibre(i, j) = std::complex<double>(rng.normal(), rng.normal()) / std::sqrt(2.0);
        }
    }
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
    Eigen::MatrixXcd q = qr.householderQ();
    const Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
    // Fixing the phases of R's diagonal makes the decomposition unique and
    // the resulting Q exactly Haar (Mezzadri's recipe).
    for (int j = 0; j < modes; ++j) {
        const std::complex<double> diag = r(j, j);
        const double magnitude = std::abs(diag);
        const std::complex<double> phase = magnitude > 0.0 ? diag / magnitude : 1.0;
        q.col(j) *= phase;
    }
    return UnitaryMatrix(std::move(q));
}

} // namespace bosonvalid
