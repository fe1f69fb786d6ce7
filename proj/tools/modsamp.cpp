#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "modsamp/harness.hpp"

namespace {

using namespace modsamp;

std::optional<int> parse_order(const std::string& text) {
    if (text == "auto") return std::nullopt;
    std::size_t pos = 0;
    int value = 0;
    try {
        value = std::stoi(text, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != text.size() || value < 0) {
        throw std::invalid_argument("--order expects a nonnegative integer or 'auto'");
    }
    return value;
}

std::vector<double> index_column(std::size_t n) {
    std::vector<double> k(n);
    std::iota(k.begin(), k.end(), 1.0);
    return k;
}

// Recovers the sampling period from the time column of an input file.
double infer_period(const std::vector<double>& times) {
    if (times.size() < 2) throw std::invalid_argument("need at least two samples to infer the period");
    const double period = times[1] - times[0];
    if (!(period > 0.0)) throw std::invalid_argument("time column must be strictly increasing");
    for (std::size_t i = 0; i + 1 < times.size(); ++i) {
        const double gap = times[i + 1] - times[i];
        if (std::abs(gap - period) > 1e-9 * std::max(1.0, std::abs(period))) {
            throw std::invalid_argument("time column is not a uniform grid");
        }
    }
    return period;
}

// Shared config surface of the experiment and sweep subcommands. Flags given
// on the command line override values loaded from --config.
struct ConfigFlags {
    std::string config_file;
    std::uint64_t seed = 1;
    double lambda = 0.05;
    double oversample = 1.0;
    double beta = 1.0;
    std::string order = "auto";
    int samples = 512;
    int terms = 32;
    double noise = 0.0;
    std::string out_dir;

    CLI::Option* config_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* lambda_opt = nullptr;
    CLI::Option* oversample_opt = nullptr;
    CLI::Option* beta_opt = nullptr;
    CLI::Option* order_opt = nullptr;
    CLI::Option* samples_opt = nullptr;
    CLI::Option* terms_opt = nullptr;
    CLI::Option* noise_opt = nullptr;
    CLI::Option* out_opt = nullptr;

    void attach(CLI::App& cmd) {
        config_opt = cmd.add_option("--config", config_file,
                                    "JSON file with experiment settings; flags override it");
        seed_opt = cmd.add_option("--seed", seed, "Random seed");
        lambda_opt = cmd.add_option("--lambda", lambda, "Folding threshold");
        oversample_opt = cmd.add_option("--oversample", oversample,
                                        "Sampling rate as a multiple of the guaranteed minimum");
        beta_opt = cmd.add_option("--beta", beta, "Signal amplitude bound");
        order_opt = cmd.add_option("--order", order, "Difference order, or 'auto'");
        samples_opt = cmd.add_option("--samples", samples, "Number of samples");
        terms_opt = cmd.add_option("--terms", terms, "Number of signal terms");
        noise_opt = cmd.add_option("--noise", noise, "Bounded noise amplitude added before folding");
        out_opt = cmd.add_option("--out", out_dir, "Directory for per-sample and report artifacts");
    }

    ExperimentConfig resolve() const {
        ExperimentConfig cfg;
        if (config_opt->count()) cfg = load_config(config_file);
        if (seed_opt->count()) cfg.seed = seed;
        if (lambda_opt->count()) cfg.lambda = lambda;
        if (oversample_opt->count()) cfg.oversample_factor = oversample;
        if (beta_opt->count()) cfg.beta = beta;
        if (order_opt->count()) cfg.order = parse_order(order);
        if (samples_opt->count()) cfg.samples = samples;
        if (terms_opt->count()) cfg.terms = terms;
        if (noise_opt->count()) cfg.noise_amplitude = noise;
        if (out_opt->count()) cfg.output_dir = out_dir;
        return cfg;
    }
};

int run_generate(std::uint64_t seed, int terms, double beta, int samples, double oversample,
                 const std::string& out) {
    ExperimentConfig period_cfg;
    period_cfg.oversample_factor = oversample;
    const SamplingGrid grid{resolve_period(period_cfg), samples, 0.0};
    const BandlimitedSignal g = generate_random(seed, terms, beta);
    const SampleSequence gamma = sample(g, grid);
    write_csv(out, {"k", "t", "gamma"}, {index_column(gamma.size()), grid.times(), gamma.values()});
    return 0;
}

int run_fold(const std::string& input, double lambda, double noise, std::uint64_t seed,
             const std::string& out) {
    const CsvTable table = read_csv(input);
    const SampleSequence gamma{table.column("gamma")};
    const SrAdcConfig cfg{lambda, noise};
    const SampleSequence prefold =
        noise > 0.0 ? add(gamma, make_noise(gamma.size(), noise, seed)) : gamma;
    const SampleSequence folded = fold_samples(gamma, cfg, seed);
    const ResidualSequence eps = residual(prefold, folded, lambda);
    write_csv(out, {"k", "t", "gamma", "y", "eps"},
              {index_column(gamma.size()), table.column("t"), prefold.values(), folded.values(),
               eps.values()});
    return 0;
}

int run_recover(const std::string& input, double lambda, double beta, const std::string& order_text,
                const std::string& out) {
    const CsvTable table = read_csv(input);
    const std::vector<double>& times = table.column("t");
    const SampleSequence folded{table.column("y")};
    const double period = infer_period(times);

    const std::optional<int> requested = parse_order(order_text);
    RecoveryParams params;
    params.lambda = lambda;
    params.period = period;
    params.beta = beta;
    params.order = requested ? *requested : choose_order(lambda, beta, period);
    params.span = choose_span(lambda, beta);
    params.relax_sufficiency = requested.has_value();

    const RecoveryReport rep = unfold(folded, params);
    write_csv(out, {"k", "t", "y", "gamma_rec", "eps_rec"},
              {index_column(folded.size()), times, folded.values(), rep.recovered.values(),
               rep.residual});

    nlohmann::ordered_json j;
    j["N_used"] = params.order;
    j["J_used"] = params.span;
    j["kappa"] = rep.kappa;
    j["margins_ok"] = rep.diagnostics.margins_ok;
    j["folded_diff_peak"] = rep.diagnostics.folded_diff_peak;
    j["max_kappa_residual"] = rep.diagnostics.max_kappa_residual;
    j["kappa_residual_limit"] = rep.diagnostics.kappa_residual_limit;
    j["max_grid_correction"] = rep.diagnostics.max_grid_correction;
    j["flags"] = rep.diagnostics.flags;
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
    return rep.diagnostics.margins_ok ? 0 : 2;
}

int run_experiment_cmd(const ConfigFlags& flags, const std::string& format) {
    const ExperimentConfig cfg = flags.resolve();
    const ExperimentResult result = run_experiment(cfg);
    const ReportFormat fmt = format == "csv" ? ReportFormat::Csv : ReportFormat::Json;
    const std::string text =
        fmt == ReportFormat::Json ? format_result_json(result) : format_result_csv(result);
    std::fputs(text.c_str(), stdout);
    if (!cfg.output_dir.empty() && fmt == ReportFormat::Csv) {
        emit_report(result, fmt, std::filesystem::path(cfg.output_dir) / "result.csv");
    }
    return exit_code_for(result);
}

int run_sweep_cmd(const ConfigFlags& flags, const std::string& axis_name,
                  const std::vector<double>& values, int trials) {
    const ExperimentConfig base = flags.resolve();
    const SweepAxis axis = sweep_axis_from_name(axis_name);
    const SweepTable table = sweep(base, axis, values, trials);
    std::fputs(format_sweep_csv(table).c_str(), stdout);
    if (!base.output_dir.empty()) {
        const std::filesystem::path dir(base.output_dir);
        std::filesystem::create_directories(dir);
        write_sweep_csv(table, dir / "sweep.csv");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulates a self-reset (folding) ADC and recovers the unfolded samples"};
    app.require_subcommand(1);

    auto* gen = app.add_subcommand("generate", "Draw a random bandlimited signal and sample it");
    std::uint64_t gen_seed = 1;
    int gen_terms = 32;
    double gen_beta = 1.0;
    int gen_samples = 512;
    double gen_oversample = 1.0;
    std::string gen_out;
    gen->add_option("--seed", gen_seed, "Random seed");
    gen->add_option("--terms", gen_terms, "Number of signal terms");
    gen->add_option("--beta", gen_beta, "Signal amplitude bound");
    gen->add_option("--samples", gen_samples, "Number of samples");
    gen->add_option("--oversample", gen_oversample,
                    "Sampling rate as a multiple of the guaranteed minimum");
    gen->add_option("--out", gen_out, "Output CSV (k,t,gamma)")->required();

    auto* fold = app.add_subcommand("fold", "Fold samples into the ADC range");
    std::string fold_in;
    double fold_lambda = 0.0;
    double fold_noise = 0.0;
    std::uint64_t fold_seed = 1;
    std::string fold_out;
    fold->add_option("input", fold_in, "CSV with a gamma column")->required();
    fold->add_option("--lambda", fold_lambda, "Folding threshold")->required();
    fold->add_option("--noise", fold_noise, "Bounded noise amplitude added before folding");
    fold->add_option("--seed", fold_seed, "Noise seed");
    fold->add_option("--out", fold_out, "Output CSV (k,t,gamma,y,eps)")->required();

    auto* rec = app.add_subcommand("recover", "Recover unfolded samples from folded ones");
    std::string rec_in;
    double rec_lambda = 0.0;
    double rec_beta = 0.0;
    std::string rec_order = "auto";
    std::string rec_out;
    rec->add_option("input", rec_in, "CSV with t and y columns")->required();
    rec->add_option("--lambda", rec_lambda, "Folding threshold")->required();
    rec->add_option("--beta", rec_beta, "Signal amplitude bound")->required();
    rec->add_option("--order", rec_order, "Difference order, or 'auto'");
    rec->add_option("--out", rec_out, "Output CSV (k,t,y,gamma_rec,eps_rec)")->required();

    auto* exp = app.add_subcommand("experiment", "Run one generate-fold-recover trial end to end");
    ConfigFlags exp_flags;
    exp_flags.attach(*exp);
    std::string exp_format = "json";
    exp->add_option("--format", exp_format, "Report format")
        ->check(CLI::IsMember({"json", "csv"}));

    auto* swp = app.add_subcommand("sweep", "Repeat experiments across one parameter axis");
    ConfigFlags swp_flags;
    swp_flags.attach(*swp);
    std::string swp_axis;
    std::vector<double> swp_values;
    int swp_trials = 10;
    swp->add_option("--axis", swp_axis, "One of lambda-ratio, period, order, noise")->required();
    swp->add_option("--values", swp_values, "Comma-separated axis values")
        ->required()
        ->delimiter(',');
    swp->add_option("--trials", swp_trials, "Seeded trials per axis value");

    try {
        app.parse(argc, argv);
        if (*gen) {
            return run_generate(gen_seed, gen_terms, gen_beta, gen_samples, gen_oversample,
                                gen_out);
        }
        if (*fold) return run_fold(fold_in, fold_lambda, fold_noise, fold_seed, fold_out);
        if (*rec) return run_recover(rec_in, rec_lambda, rec_beta, rec_order, rec_out);
        if (*exp) return run_experiment_cmd(exp_flags, exp_format);
        if (*swp) return run_sweep_cmd(swp_flags, swp_axis, swp_values, swp_trials);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
