#include "modsamp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace modsamp {

namespace {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string join_kappa(const std::vector<long long>& kappa) {
    std::string out;
    for (std::size_t i = 0; i < kappa.size(); ++i) {
        if (i) out += ';';
        out += std::to_string(kappa[i]);
    }
    return out;
}

void require(bool cond, const std::string& message) {
    if (!cond) throw std::invalid_argument(message);
}

}  // namespace

double resolve_period(const ExperimentConfig& cfg) {
    require(std::isfinite(cfg.oversample_factor) && cfg.oversample_factor > 0.0,
            "oversample factor must be positive and finite");
    return max_guaranteed_period() / cfg.oversample_factor;
}

void validate(const ExperimentConfig& cfg) {
    require(std::isfinite(cfg.lambda) && cfg.lambda > 0.0,
            "lambda must be positive and finite");
    require(std::isfinite(cfg.beta) && cfg.beta > 0.0, "beta must be positive and finite");
    require(std::isfinite(cfg.oversample_factor) && cfg.oversample_factor > 0.0,
            "oversample factor must be positive and finite");
    require(cfg.samples >= 2, "need at least two samples");
    require(cfg.terms >= 1, "need at least one signal term");
    require(!cfg.order || *cfg.order >= 0, "order must be nonnegative");
    require(std::isfinite(cfg.noise_amplitude) && cfg.noise_amplitude >= 0.0,
            "noise amplitude must be nonnegative and finite");
    require(cfg.noise_amplitude < cfg.lambda / 4.0, "noise amplitude must stay below lambda / 4");
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, ExperimentTrace* trace) {
    validate(cfg);
    const double period = resolve_period(cfg);
    const auto started = std::chrono::steady_clock::now();

    const SamplingGrid grid{period, cfg.samples, 0.0};
    const BandlimitedSignal g = generate_random(cfg.seed, cfg.terms, cfg.beta);
    const SampleSequence clean = sample(g, grid);
    // The folding stage draws its noise from a stream decorrelated from the
    // coefficient draw, so the prefold reference can be rebuilt here.
    const std::uint64_t noise_seed = cfg.seed ^ 0x9e3779b97f4a7c15ULL;
    const SampleSequence prefold =
        cfg.noise_amplitude > 0.0
            ? add(clean, make_noise(clean.size(), cfg.noise_amplitude, noise_seed))
            : clean;
    const SrAdcConfig adc{cfg.lambda, cfg.noise_amplitude};
    const SampleSequence folded = fold_samples(clean, adc, noise_seed);
    const ResidualSequence eps_true = residual(prefold, folded, cfg.lambda);

    const int order = cfg.order ? *cfg.order : choose_order(cfg.lambda, cfg.beta, period);
    const int span = choose_span(cfg.lambda, cfg.beta);
    const bool relaxed = cfg.order.has_value() || cfg.oversample_factor < 1.0;
    const RecoveryParams params{cfg.lambda, period, cfg.beta, order, span, relaxed};
    const RecoveryReport rep = unfold(folded, params);

    // Remove the anchoring ambiguity: one common multiple of 2*lambda.
    double mean_diff = 0.0;
    for (std::size_t i = 0; i < prefold.size(); ++i) {
        mean_diff += rep.recovered[i] - prefold[i];
    }
    mean_diff /= static_cast<double>(prefold.size());
    const double offset =
        2.0 * cfg.lambda * static_cast<double>(std::llround(mean_diff / (2.0 * cfg.lambda)));

    double mse = 0.0;
    double max_abs_err = 0.0;
    for (std::size_t i = 0; i < prefold.size(); ++i) {
        const double e = rep.recovered[i] - offset - prefold[i];
        mse += e * e;
        max_abs_err = std::max(max_abs_err, std::abs(e));
    }
    mse /= static_cast<double>(prefold.size());

    ExperimentResult result;
    result.mse = mse;
    result.max_abs_err = max_abs_err;
    result.success = max_abs_err <= 1e-9;
    result.N_used = order;
    result.J_used = span;
    result.kappa = rep.kappa;
    result.diagnostics = rep.diagnostics;
    result.runtime_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
            .count();

    if (trace || !cfg.output_dir.empty()) {
        ExperimentTrace local;
        local.times = grid.times();
        local.prefold = prefold;
        local.folded = folded;
        local.residual_true = eps_true.values();
        local.recovered = rep.recovered;
        local.residual_rec = rep.residual;
        if (!cfg.output_dir.empty()) {
            const std::filesystem::path dir(cfg.output_dir);
            std::filesystem::create_directories(dir);
            write_trace_csv(dir / "experiment.csv", local);
            emit_report(result, ReportFormat::Json, dir / "result.json");
        }
        if (trace) *trace = std::move(local);
    }
    return result;
}

SweepAxis sweep_axis_from_name(const std::string& name) {
    if (name == "lambda-ratio") return SweepAxis::LambdaRatio;
    if (name == "period") return SweepAxis::Period;
    if (name == "order") return SweepAxis::Order;
    if (name == "noise") return SweepAxis::Noise;
    throw std::invalid_argument("unknown sweep axis: " + name +
                                " (expected lambda-ratio, period, order or noise)");
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::LambdaRatio: return "lambda-ratio";
        case SweepAxis::Period: return "period";
        case SweepAxis::Order: return "order";
        case SweepAxis::Noise: return "noise";
    }
    return "unknown";
}

SweepTable sweep(const ExperimentConfig& base, SweepAxis axis, std::span<const double> values,
                 int trials) {
    require(trials >= 0, "trial count must be nonnegative");
    SweepTable table;
    table.axis = axis;
    if (trials == 0) return table;

    for (double value : values) {
        SweepCell cell;
        cell.value = value;
        double mse_sum = 0.0;
        int completed = 0;
        for (int t = 0; t < trials; ++t) {
            ExperimentConfig cfg = base;
            cfg.output_dir.clear();
            cfg.seed = base.seed + static_cast<std::uint64_t>(t);
            switch (axis) {
                case SweepAxis::LambdaRatio:
                    // An unusable ratio surfaces as a failed trial below.
                    cfg.lambda = value != 0.0 ? base.beta / value : -1.0;
                    break;
                case SweepAxis::Period:
                    cfg.oversample_factor = value;
                    break;
                case SweepAxis::Order:
                    cfg.order = static_cast<int>(std::llround(value));
                    break;
                case SweepAxis::Noise:
                    cfg.noise_amplitude = value;
                    break;
            }
            ++cell.trials;
            try {
                const ExperimentResult r = run_experiment(cfg);
                if (r.success) ++cell.successes;
                mse_sum += r.mse;
                ++completed;
            } catch (const std::exception&) {
                // An unusable parameter combination counts as a failed trial.
            }
        }
        cell.success_rate = static_cast<double>(cell.successes) / static_cast<double>(cell.trials);
        cell.mean_mse =
            completed > 0 ? mse_sum / completed : std::numeric_limits<double>::quiet_NaN();
        table.cells.push_back(cell);
    }
    return table;
}

std::string format_result_json(const ExperimentResult& result) {
    nlohmann::ordered_json j;
    j["mse"] = result.mse;
    j["max_abs_err"] = result.max_abs_err;
    j["success"] = result.success;
    j["N_used"] = result.N_used;
    j["J_used"] = result.J_used;
    j["kappa"] = result.kappa;
    j["runtime_ms"] = result.runtime_ms;
    return j.dump(2) + "\n";
}

std::string format_result_csv(const ExperimentResult& result) {
    std::string out = "mse,max_abs_err,success,N_used,J_used,kappa,runtime_ms\n";
    out += format_number(result.mse);
    out += ',';
    out += format_number(result.max_abs_err);
    out += ',';
    out += result.success ? "1" : "0";
    out += ',';
    out += std::to_string(result.N_used);
    out += ',';
    out += std::to_string(result.J_used);
    out += ',';
    out += join_kappa(result.kappa);
    out += ',';
    out += format_number(result.runtime_ms);
    out += '\n';
    return out;
}

namespace {

void write_text(const std::filesystem::path& file, const std::string& text) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + file.string());
    out << text;
    if (!out) throw std::runtime_error("failed writing: " + file.string());
}

}  // namespace

void emit_report(const ExperimentResult& result, ReportFormat format,
                 const std::filesystem::path& file) {
    write_text(file, format == ReportFormat::Json ? format_result_json(result)
                                                  : format_result_csv(result));
}

std::string format_sweep_csv(const SweepTable& table) {
    std::string out = "axis,value,trials,successes,success_rate,mean_mse\n";
    for (const SweepCell& cell : table.cells) {
        out += to_string(table.axis);
        out += ',';
        out += format_number(cell.value);
        out += ',';
        out += std::to_string(cell.trials);
        out += ',';
        out += std::to_string(cell.successes);
        out += ',';
        out += format_number(cell.success_rate);
        out += ',';
        out += format_number(cell.mean_mse);
        out += '\n';
    }
    return out;
}

void write_sweep_csv(const SweepTable& table, const std::filesystem::path& file) {
    write_text(file, format_sweep_csv(table));
}

ExperimentConfig load_config(const std::filesystem::path& json_file) {
    std::ifstream in(json_file);
    if (!in) throw std::runtime_error("cannot open config file: " + json_file.string());
    nlohmann::json j = nlohmann::json::parse(in);
    if (!j.is_object()) throw std::invalid_argument("config root must be a JSON object");

    ExperimentConfig cfg;
    for (const auto& [key, value] : j.items()) {
        if (key == "seed") {
            cfg.seed = value.get<std::uint64_t>();
        } else if (key == "lambda") {
            cfg.lambda = value.get<double>();
        } else if (key == "oversample_factor") {
            cfg.oversample_factor = value.get<double>();
        } else if (key == "beta") {
            cfg.beta = value.get<double>();
        } else if (key == "order") {
            if (value.is_string()) {
                if (value.get<std::string>() != "auto") {
                    throw std::invalid_argument("order must be an integer or \"auto\"");
                }
                cfg.order.reset();
            } else {
                cfg.order = value.get<int>();
            }
        } else if (key == "samples") {
            cfg.samples = value.get<int>();
        } else if (key == "terms") {
            cfg.terms = value.get<int>();
        } else if (key == "noise_amplitude") {
            cfg.noise_amplitude = value.get<double>();
        } else if (key == "output_dir") {
            cfg.output_dir = value.get<std::string>();
        } else {
            throw std::invalid_argument("unknown config key: " + key);
        }
    }
    return cfg;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) return columns[i];
    }
    throw std::invalid_argument("CSV is missing a required column: " + name);
}

bool CsvTable::has_column(const std::string& name) const {
    return std::find(header.begin(), header.end(), name) != header.end();
}

CsvTable read_csv(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open CSV file: " + file.string());

    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream stream(line);
        while (std::getline(stream, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        return cells;
    };

    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV file: " + file.string());
    if (!line.empty() && line.back() == '\r') line.pop_back();
    table.header = split(line);
    table.columns.resize(table.header.size());

    std::size_t row = 1;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw std::runtime_error(file.string() + ": row " + std::to_string(row) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(table.header.size()));
        }
        for (std::size_t i = 0; i < cells.size(); ++i) {
            try {
                table.columns[i].push_back(std::stod(cells[i]));
            } catch (const std::exception&) {
                throw std::runtime_error(file.string() + ": row " + std::to_string(row) +
                                         " has a non-numeric cell: " + cells[i]);
            }
        }
        ++row;
    }
    return table;
}

void write_csv(const std::filesystem::path& file, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& columns) {
    if (header.size() != columns.size()) {
        throw std::length_error("CSV header and column counts differ");
    }
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (const auto& col : columns) {
        if (col.size() != rows) throw std::length_error("CSV columns have unequal lengths");
    }
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ',';
            out += format_number(columns[c][r]);
        }
        out += '\n';
    }
    write_text(file, out);
}

void write_trace_csv(const std::filesystem::path& file, const ExperimentTrace& trace) {
    const std::size_t n = trace.times.size();
    std::vector<double> k(n);
    for (std::size_t i = 0; i < n; ++i) k[i] = static_cast<double>(i + 1);
    write_csv(file, {"k", "t", "gamma", "y", "eps", "gamma_rec", "eps_rec"},
              {k, trace.times, trace.prefold.values(), trace.folded.values(), trace.residual_true,
               trace.recovered.values(), trace.residual_rec});
}

int exit_code_for(const ExperimentResult& result) { return result.success ? 0 : 2; }

}  // namespace modsamp
