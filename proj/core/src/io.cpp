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

#include "bosonvalid/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bosonvalid/errors.hpp"

namespace bosonvalid {

using json = nlohmann::ordered_json;

namespace {

json parse_json(const std::string &text, const char *what) {
    json parsed = json::parse(text, nullptr, false);
    if (parsed.is_discarded()) {
        throw IoError(std::string("malformed JSON in ") + what);
    }
    return parsed;
}

} // namespace

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    out << text;
    if (!out) {
        throw IoError("failed writing " + path.string());
    }
}

std::string unitary_to_json(const UnitaryMatrix &unitary) {
    const int m = unitary.modes();
    json real = json::array();
    json imag = json::array();
    for (int i = 0; i < m; ++i) {
        json real_row = json::array();
        json imag_row = json::array();
        for (int j = 0; j < m; ++j) {
            real_row.push_back(unitary.entries()(i, j).real());
            imag_row.push_back(unitary.entries()(i, j).imag());
        }
        real.push_back(std::move(real_row));
        imag.push_back(std::move(imag_row));
    }
    json out;
    out["m"] = m;
    out["re"] = std::move(real);
    out["im"] = std::move(imag);
    return out.dump(2) + "\n";
}

UnitaryMatrix unitary_from_json(const std::string &text) {
    const json in = parse_json(text, "unitary file");
    if (!in.contains("m") || !in.contains("re") || !in.contains("im")) {
        throw IoError("unitary file needs \"m\", \"re\" and \"im\" fields");
    }
    const int m = in["m"].get<int>();
    const auto &real = in["re"];
    const auto &imag = in["im"];
    if (static_cast<int>(real.size()) != m || static_cast<int>(imag.size()) != m) {
        throw IoError("unitary file row count does not match m");
    }
    Eigen::MatrixXcd entries(m, m);
    for (int i = 0; i < m; ++i) {
        if (static_cast<int>(real[i].size()) != m || static_cast<int>(imag[i].size()) != m) {
            throw IoError("unitary file column count does not match m");
        }
        for (int j = 0; j < m; ++j) {
            entries(i, j) = std::complex<double>(real[i][j].get<double>(),
                                                 imag[i][j].get<double>());
        }
    }
    return UnitaryMatrix(std::move(entries));
}

void write_unitary(const UnitaryMatrix &unitary, const std::filesystem::path &path) {
    write_text_file(path, unitary_to_json(unitary));
}

UnitaryMatrix read_unitary(const std::filesystem::path &path) {
    return unitary_from_json(read_text_file(path));
}

std::string sample_to_jsonl(const EventSample &sample) {
    json header;
    header["N"] = sample.photons();
    header["m"] = sample.modes();
    header["input"] = sample.input_state.to_string();
    header["model"] = to_string(sample.model);
    header["seed"] = sample.seed;
    if (!sample.source.empty()) {
        header["source"] = sample.source;
    }
    std::string out = header.dump() + "\n";
    for (const ModeOccupation &event : sample.events) {
        json line;
        line["modes"] = event.occupied_modes();
        out += line.dump() + "\n";
    }
    return out;
}

EventSample sample_from_jsonl(const std::string &text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) {
        throw IoError("sample file is empty");
    }
    const json header = parse_json(line, "sample header");
    for (const char *field : {"N", "m", "input", "model", "seed"}) {
        if (!header.contains(field)) {
            throw IoError(std::string("sample header misses \"") + field + "\"");
        }
    }
    EventSample sample;
    const int modes = header["m"].get<int>();
    const int photons = header["N"].get<int>();
    sample.input_state = ModeOccupation::parse(header["input"].get<std::string>(), modes);
    sample.model = particle_model_from_string(header["model"].get<std::string>());
    sample.seed = header["seed"].get<std::uint64_t>();
    if (header.contains("source")) {
        sample.source = header["source"].get<std::string>();
    }
    if (sample.input_state.photon_count() != photons) {
        throw IoError("sample header input state does not carry N photons");
    }
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        const json event = parse_json(line, "sample event line");
        if (!event.contains("modes")) {
            throw IoError("sample event line misses \"modes\"");
        }
        const std::vector<int> modes_1based = event["modes"].get<std::vector<int>>();
        sample.events.push_back(ModeOccupation::from_modes(modes_1based, modes));
    }
    sample.validate();
    return sample;
}

void write_sample(const EventSample &sample, const std::filesystem::path &path) {
    write_text_file(path, sample_to_jsonl(sample));
}

EventSample read_sample(const std::filesystem::path &path) {
    return sample_from_jsonl(read_text_file(path));
}

std::string structure_to_json(const ClusterStructure &structure) {
    json out;
    out["algorithm"] = structure.algorithm;
    out["metric"] = to_string(structure.metric);
    out["parameters"] = structure.parameters;
    out["seed"] = structure.seed;
    out["counts"] = structure.counts;
    out["outlier_events"] = structure.outlier_events;
    out["centroids"] = structure.centroids;
    return out.dump(2) + "\n";
}

ClusterStructure structure_from_json(const std::string &text) {
    const json in = parse_json(text, "cluster structure file");
    ClusterStructure structure;
    structure.algorithm = in.value("algorithm", std::string("unknown"));
    structure.metric = metric_from_string(in.at("metric").get<std::string>());
    structure.parameters = in.value("parameters", std::string());
    structure.seed = in.value("seed", std::uint64_t(0));
    if (in.contains("counts")) {
        structure.counts = in["counts"].get<std::vector<long>>();
    }
    structure.outlier_events = in.value("outlier_events", 0L);
    structure.centroids = in.at("centroids").get<std::vector<std::vector<double>>>();
    if (structure.counts.empty()) {
        structure.counts.assign(structure.centroids.size(), 0);
    }
    return structure;
}

void write_structure(const ClusterStructure &structure, const std::filesystem::path &path) {
    write_text_file(path, structure_to_json(structure));
}

ClusterStructure read_structure(const std::filesystem::path &path) {
    return structure_from_json(read_text_file(path));
}

ExperimentSpec experiment_spec_from_json(const std::string &text) {
    const json in = parse_json(text, "experiment spec");
    ExperimentSpec spec;
    if (in.contains("models")) {
        const auto models = in["models"].get<std::vector<std::string>>();
        if (models.size() != 2) {
            throw IoError("\"models\" must list [reference, alternative]");
        }
        spec.reference_model = particle_model_from_string(models[0]);
        spec.alternative_model = particle_model_from_string(models[1]);
    }
    spec.photons = in.at("N").get<int>();
    spec.modes = in.at("m").get<int>();
    spec.sample_size = in.at("sample_size").get<std::size_t>();
    spec.trials = in.at("trials").get<int>();
    spec.n_unitaries = in.value("unitaries", 1);
    spec.method = in.value("method", std::string("exact"));
    spec.alpha = in.value("alpha", 0.05);
    spec.master_seed = in.value("master_seed", std::uint64_t(0));
    if (in.contains("input")) {
        spec.input = ModeOccupation::parse(in["input"].get<std::string>(), spec.modes);
    }
    spec.reshuffle_pool = in.value("reshuffle_pool", std::size_t(0));
    spec.mcmc.burn_in = in.value("burn_in", spec.mcmc.burn_in);
    spec.mcmc.thin = in.value("thin", spec.mcmc.thin);

    if (in.contains("algorithm")) {
        spec.config.algorithm = algorithm_from_string(in["algorithm"].get<std::string>());
    }
    spec.config.k = in.value("k", spec.config.k);
    spec.config.bubble_radius = in.value("bubble_radius", spec.config.bubble_radius);
    spec.config.outlier_fraction = in.value("outlier_fraction", spec.config.outlier_fraction);
    spec.config.min_cluster_size = in.value("min_cluster_size", spec.config.min_cluster_size);
    spec.config.max_iterations = in.value("max_iterations", spec.config.max_iterations);
    if (in.contains("metric")) {
        spec.config.metric = metric_from_string(in["metric"].get<std::string>());
    }
    if (in.contains("init")) {
        spec.config.init = init_from_string(in["init"].get<std::string>());
    }
    spec.config.voting_trials = in.value("voting_trials", spec.config.voting_trials);
    return spec;
}

std::string experiment_spec_to_json(const ExperimentSpec &spec) {
    json out;
    out["models"] = {to_string(spec.reference_model), to_string(spec.alternative_model)};
    out["N"] = spec.photons;
    out["m"] = spec.modes;
    out["sample_size"] = spec.sample_size;
    out["trials"] = spec.trials;
    out["unitaries"] = spec.n_unitaries;
    out["method"] = spec.method;
    out["input"] = spec.resolved_input().to_string();
    out["algorithm"] = to_string(spec.config.algorithm);
    out["k"] = spec.config.k;
    out["bubble_radius"] = spec.config.bubble_radius;
    out["outlier_fraction"] = spec.config.outlier_fraction;
    out["min_cluster_size"] = spec.config.min_cluster_size;
    out["max_iterations"] = spec.config.max_iterations;
    out["metric"] = to_string(spec.config.metric);
    out["init"] = to_string(spec.config.init);
    out["voting_trials"] = spec.config.voting_trials;
    out["alpha"] = spec.alpha;
    out["master_seed"] = spec.master_seed;
    out["reshuffle_pool"] = spec.reshuffle_pool;
    out["burn_in"] = spec.mcmc.burn_in;
    out["thin"] = spec.mcmc.thin;
    return out.dump(2) + "\n";
}

ExperimentSpec read_experiment_spec(const std::filesystem::path &path) {
    return experiment_spec_from_json(read_text_file(path));
}

std::string confusion_to_json(const ConfusionMatrix &matrix, const ExperimentSpec &spec) {
    const ClassOutcome compat = matrix.compatible_class();
    const ClassOutcome incompat = matrix.incompatible_class();
    json out;
    out["labels"] = {matrix.reference_label, matrix.alternative_label};
    out["counts"] = {{matrix.counts[0][0], matrix.counts[0][1]},
                     {matrix.counts[1][0], matrix.counts[1][1]}};
    out["success_percent"] = {compat.success_percent(), incompat.success_percent()};
    out["std_error_percent"] = {compat.std_error_percent(), incompat.std_error_percent()};
    const auto mean = matrix.mean_per_unitary_success();
    out["mean_per_unitary_success"] = {mean[0], mean[1]};
    out["per_unitary_success"] = matrix.per_unitary_success;
    out["degenerate_trials"] = matrix.degenerate_trials;
    out["spec"] = json::parse(experiment_spec_to_json(spec));
    return out.dump(2) + "\n";
}

std::string chi_square_to_json(const ChiSquareResult &result) {
    json out;
    out["statistic"] = result.statistic;
    out["dof"] = result.dof;
    out["p_value"] = result.p_value;
    out["alpha"] = result.alpha;
    out["verdict"] = result.compatible ? "compatible" : "incompatible";
    out["retained_clusters"] = result.retained_clusters;
    json merges = json::array();
    for (const MergeLogEntry &entry : result.merges) {
        json merge;
        merge["from"] = entry.from_cluster;
        merge["into"] = entry.into_cluster;
        merge["expected_reference"] = entry.expected_reference;
        merge["expected_candidate"] = entry.expected_candidate;
        merges.push_back(std::move(merge));
    }
    out["merged_cells"] = std::move(merges);
    return out.dump(2) + "\n";
}

std::string scattershot_to_json(const ScattershotResult &result) {
    json out;
    out["statistic"] = result.combined.statistic;
    out["dof"] = result.combined.dof;
    out["p_value"] = result.combined.p_value;
    out["alpha"] = result.combined.alpha;
    out["verdict"] = result.combined.compatible ? "compatible" : "incompatible";
    json inputs = json::array();
    for (const ChiSquareResult &per : result.per_input) {
        json one;
        one["statistic"] = per.statistic;
        one["dof"] = per.dof;
        one["p_value"] = per.p_value;
        inputs.push_back(std::move(one));
    }
    out["per_input"] = std::move(inputs);
    return out.dump(2) + "\n";
}

std::string ball_report_to_csv(const BallRatioReport &report) {
    std::string out = "unitary,outcome,k,sorted_by,p_ball,q_ball,ratio\n";
    char buffer[160];
    for (const BallRatioRow &row : report.rows) {
        std::snprintf(buffer, sizeof(buffer), "%d,%llu,%d,%s,%.17g,%.17g,%.17g\n", row.unitary,
                      static_cast<unsigned long long>(row.outcome), row.k,
                      row.sorted_by_p ? "p" : "q", row.p_ball, row.q_ball, row.ratio);
        out += buffer;
    }
    return out;
}

std::string ball_report_summary_json(const BallRatioReport &report) {
    json out;
    out["N"] = report.photons;
    out["m"] = report.modes;
    out["unitaries"] = report.n_unitaries;
    out["top_outcomes"] = report.top_outcomes;
    out["seed"] = report.seed;
    json stats = json::array();
    for (const BallRatioStats &per : report.stats) {
        json one;
        one["k"] = per.k;
        one["mean_rp"] = per.mean_rp;
        one["mean_rq"] = per.mean_rq;
        one["fraction_rp_above_one"] = per.fraction_rp_above_one;
        one["fraction_rq_above_one"] = per.fraction_rq_above_one;
        stats.push_back(std::move(one));
    }
    out["stats"] = std::move(stats);
    return out.dump(2) + "\n";
}

} // namespace bosonvalid
