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

#ifndef BOSONVALID_IO_HPP
#define BOSONVALID_IO_HPP

#include <filesystem>
#include <string>

#include "bosonvalid/analysis.hpp"
#include "bosonvalid/clustering.hpp"
#include "bosonvalid/sampler.hpp"
#include "bosonvalid/unitary.hpp"
#include "bosonvalid/validation.hpp"

namespace bosonvalid {

/// Unitary file: JSON object { "m": int, "re": [[...]], "im": [[...]] },
/// row-major. Serialization is byte-deterministic for a given matrix.
std::string unitary_to_json(const UnitaryMatrix &unitary);
UnitaryMatrix unitary_from_json(const std::string &text);
void write_unitary(const UnitaryMatrix &unitary, const std::filesystem::path &path);
UnitaryMatrix read_unitary(const std::filesystem::path &path);

/// Sample file: JSON lines. The header line carries
/// { "N", "m", "input", "model", "seed" } (plus "source" when set); each
/// following line is { "modes": [ascending 1-based occupied indices] }.
std::string sample_to_jsonl(const EventSample &sample);
EventSample sample_from_jsonl(const std::string &text);
void write_sample(const EventSample &sample, const std::filesystem::path &path);
EventSample read_sample(const std::filesystem::path &path);

/// Cluster structure: centroids, metric and provenance; enough to
/// re-assign any sample reproducibly.
std::string structure_to_json(const ClusterStructure &structure);
ClusterStructure structure_from_json(const std::string &text);
void write_structure(const ClusterStructure &structure, const std::filesystem::path &path);
ClusterStructure read_structure(const std::filesystem::path &path);

/// Experiment spec file, e.g.
/// { "models": ["ind","dis"], "N": 3, "m": 13, "sample_size": 500,
///   "trials": 100, "algorithm": "kmeans", "k": 25, "metric": "L2",
///   "init": "kmeans++", "voting_trials": 11, "alpha": 0.05,
///   "master_seed": 42 }
/// with optional "unitaries", "method", "input", "bubble_radius",
/// "outlier_fraction", "min_cluster_size", "max_iterations",
/// "reshuffle_pool", "burn_in", "thin".
ExperimentSpec experiment_spec_from_json(const std::string &text);
std::string experiment_spec_to_json(const ExperimentSpec &spec);
ExperimentSpec read_experiment_spec(const std::filesystem::path &path);

/// Machine-readable experiment results (the aligned text rendering comes
/// from ConfusionMatrix::to_text).
std::string confusion_to_json(const ConfusionMatrix &matrix, const ExperimentSpec &spec);

/// Chi-square verdict report for the validate command.
std::string chi_square_to_json(const ChiSquareResult &result);
std::string scattershot_to_json(const ScattershotResult &result);

/// Ball-ratio rows as CSV (one row per unitary, outcome, k) and a JSON
/// summary of the per-k averages and above-one fractions.
std::string ball_report_to_csv(const BallRatioReport &report);
std::string ball_report_summary_json(const BallRatioReport &report);

std::string read_text_file(const std::filesystem::path &path);
void write_text_file(const std::filesystem::path &path, const std::string &text);

} // namespace bosonvalid

#endif // BOSONVALID_IO_HPP
