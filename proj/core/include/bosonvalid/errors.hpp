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

#ifndef BOSONVALID_ERRORS_HPP
#define BOSONVALID_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bosonvalid {

/// Base class for all library errors.
class Error : public std::runtime_error {
  public:
    explicit Error(const std::string &what) : std::runtime_error(what) {}
};

/// Invalid or mismatched photon/mode dimensions.
class DimensionError : public Error {
  public:
    explicit DimensionError(const std::string &what) : Error(what) {}
};

/// A state with multiply-occupied modes was passed where only
/// collision-free states are supported.
class UnsupportedStateError : public Error {
  public:
    explicit UnsupportedStateError(const std::string &what) : Error(what) {}
};

/// A dense computation would exceed the configured capacity guard.
class CapacityError : public Error {
  public:
    explicit CapacityError(const std::string &what) : Error(what) {}
};

/// Invalid run parameter (even voting trials, zero significance, ...).
class InvalidParameterError : public Error {
  public:
    explicit InvalidParameterError(const std::string &what) : Error(what) {}
};

/// Requested more clusters than distinct observed states.
class InfeasibleKError : public InvalidParameterError {
  public:
    explicit InfeasibleKError(const std::string &what) : InvalidParameterError(what) {}
};

/// Agglomeration reached the minimum cluster count without satisfying
/// the outlier-fraction halting condition.
class HaltingError : public Error {
  public:
    explicit HaltingError(const std::string &what) : Error(what) {}
};

/// Fewer than three clusters survive expected-count merging; no verdict.
class DegenerateStructureError : public Error {
  public:
    explicit DegenerateStructureError(const std::string &what) : Error(what) {}
};

/// Not enough pooled events to reshuffle the requested sample size.
class InsufficientDataError : public Error {
  public:
    explicit InsufficientDataError(const std::string &what) : Error(what) {}
};

/// A structure does not cover the sample it is asked to score.
class CoverageError : public Error {
  public:
    explicit CoverageError(const std::string &what) : Error(what) {}
};

/// Malformed or unreadable input file.
class IoError : public Error {
  public:
    explicit IoError(const std::string &what) : Error(what) {}
};

} // namespace bosonvalid

#endif // BOSONVALID_ERRORS_HPP
