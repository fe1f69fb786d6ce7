#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "modsamp/adc.hpp"
#include "modsamp/recovery.hpp"
#include "modsamp/sequence.hpp"
#include "modsamp/signal.hpp"

namespace modsamp {

/// One end-to-end trial: draw a signal, sample, fold, recover, compare.
///
/// `oversample_factor` divides the guaranteed-limit period, so 1 samples
/// exactly at the guarantee boundary and larger values sample faster. An
/// unset `order` selects the guaranteed difference order automatically;
/// setting it (or an oversample factor below 1) switches the run into the
/// empirical regime where the sufficiency checks are relaxed.
struct ExperimentConfig {
    std::uint64_t seed = 1;
    double lambda = 0.05;
    double oversample_factor = 1.0;
    double beta = 1.0;
    std::optional<int> order;
    int samples = 512;
    int terms = 32;
    double noise_amplitude = 0.0;
    std::string output_dir;
};

/// Metrics of a single trial. Errors are measured against the prefold
/// sequence (bandlimited samples plus any injected noise) after removing one
/// common multiple of 2*lambda, the inherent anchoring ambiguity.
struct ExperimentResult {
    double mse = 0.0;
    double max_abs_err = 0.0;
    bool success = false;
    int N_used = 0;
    int J_used = 0;
    std::vector<long long> kappa;
    double runtime_ms = 0.0;
    RecoveryDiagnostics diagnostics;
};

/// Full per-sample record of a trial, used for CSV artifacts.
struct ExperimentTrace {
    std::vector<double> times;
    SampleSequence prefold;
    SampleSequence folded;
    std::vector<double> residual_true;
    SampleSequence recovered;
    std::vector<double> residual_rec;
};

/// Sampling period implied by the config: guaranteed limit / oversample.
double resolve_period(const ExperimentConfig& cfg);

/// Throws std::invalid_argument when a config field is unusable.
void validate(const ExperimentConfig& cfg);

/// Runs one trial. With a nonempty output_dir, writes experiment.csv and
/// result.json into it. Parameter errors throw; a completed run that failed
/// to match the ground truth is reported through `success`.
ExperimentResult run_experiment(const ExperimentConfig& cfg, ExperimentTrace* trace = nullptr);

/// Sweepable axes: lambda expressed as a beta/lambda ratio, the oversample
/// factor, the difference order, and the noise amplitude.
enum class SweepAxis { LambdaRatio, Period, Order, Noise };

SweepAxis sweep_axis_from_name(const std::string& name);
std::string to_string(SweepAxis axis);

struct SweepCell {
    double value = 0.0;
    int trials = 0;
    int successes = 0;
    double success_rate = 0.0;
    /// Mean over trials that completed (threw nothing); NaN when none did.
    double mean_mse = 0.0;
};

struct SweepTable {
    SweepAxis axis = SweepAxis::LambdaRatio;
    std::vector<SweepCell> cells;
};

/// Repeats run_experiment over `values` on one axis with `trials` seeds per
/// cell (seed, seed+1, ...). Trials that throw count as failures. Zero trials
/// or no values produce an empty table.
SweepTable sweep(const ExperimentConfig& base, SweepAxis axis, std::span<const double> values,
                 int trials);

enum class ReportFormat { Json, Csv };

std::string format_result_json(const ExperimentResult& result);
std::string format_result_csv(const ExperimentResult& result);
void emit_report(const ExperimentResult& result, ReportFormat format,
                 const std::filesystem::path& file);

std::string format_sweep_csv(const SweepTable& table);
void write_sweep_csv(const SweepTable& table, const std::filesystem::path& file);

/// Reads an ExperimentConfig from a JSON file whose keys mirror the struct
/// fields; "order" accepts an integer or the string "auto". Unknown keys are
/// rejected.
ExperimentConfig load_config(const std::filesystem::path& json_file);

/// Column-oriented numeric CSV with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> columns;

    const std::vector<double>& column(const std::string& name) const;
    bool has_column(const std::string& name) const;
};

CsvTable read_csv(const std::filesystem::path& file);
void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns);

/// Writes the canonical per-sample artifact:
/// k,t,gamma,y,eps,gamma_rec,eps_rec.
void write_trace_csv(const std::filesystem::path& file, const ExperimentTrace& trace);

/// 0 on success, 2 when recovery did not reproduce the ground truth.
int exit_code_for(const ExperimentResult& result);

}  // namespace modsamp
