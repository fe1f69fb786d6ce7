#include "modsamp/recovery.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace modsamp {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kE = std::numbers::e;

// ceil with a downward fuzz so ratios that land on an integer up to fp noise
// do not get bumped one level higher.
int fuzzy_ceil(double x) {
    return static_cast<int>(std::ceil(x - 1e-9 * std::max(1.0, std::abs(x))));
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

// Snaps every entry onto the step grid (half-up) and returns the largest
// correction that was applied.
double snap_onto_grid(std::vector<double>& v, double step) {
    double max_corr = 0.0;
    for (double& x : v) {
        const double snapped = step * std::floor(x / step + 0.5);
        max_corr = std::max(max_corr, std::abs(x - snapped));
        x = snapped;
    }
    return max_corr;
}

std::vector<double> prefix_sum(const std::vector<double>& v) {
    std::vector<double> out(v);
    double acc = 0.0;
    for (double& x : out) {
        acc += x;
        x = acc;
    }
    return out;
}

}  // namespace

double max_guaranteed_period() { return 1.0 / (2.0 * kPi * kE); }

std::string ValidationResult::summary() const {
    std::string out;
    for (const auto& issue : issues) {
        if (!out.empty()) out += "; ";
        out += issue.message;
    }
    return out;
}

int choose_order(double lambda, double beta, double period) {
    if (!positive_finite(lambda)) throw std::invalid_argument("lambda must be positive and finite");
    if (!positive_finite(beta)) throw std::invalid_argument("beta must be positive and finite");
    if (!positive_finite(period)) throw std::invalid_argument("period must be positive and finite");
    const double growth = period * kPi * kE;
    if (growth >= 1.0) {
        throw std::invalid_argument("no guaranteed order exists: period * pi * e must be below 1");
    }
    const double raw = (std::log(lambda) - std::log(beta)) / std::log(growth);
    return std::max(fuzzy_ceil(raw), 0);
}

int choose_span(double lambda, double beta) {
    if (!positive_finite(lambda)) throw std::invalid_argument("lambda must be positive and finite");
    if (!positive_finite(beta)) throw std::invalid_argument("beta must be positive and finite");
    return std::max(fuzzy_ceil(6.0 * beta / lambda), 1);
}

KappaEstimate compute_kappa(const SampleSequence& double_sum, int span, double lambda,
                            double beta) {
    if (!positive_finite(lambda)) throw std::invalid_argument("lambda must be positive and finite");
    if (!positive_finite(beta)) throw std::invalid_argument("beta must be positive and finite");
    if (span < 1) throw std::invalid_argument("span must be at least 1");
    if (double_sum.size() < static_cast<std::size_t>(span) + 1) {
        throw std::length_error("span extends past the end of the summed sequence");
    }
    const double raw =
        (double_sum[0] - double_sum[static_cast<std::size_t>(span)]) / (2.0 * lambda * span);
    const double nearest = std::floor(raw + 0.5);
    KappaEstimate est;
    est.value = static_cast<long long>(nearest);
    est.residual = raw - nearest;
    est.residual_limit = 3.0 * beta / (2.0 * lambda * span);
    return est;
}

ValidationResult validate(const RecoveryParams& p, std::size_t sample_count) {
    ValidationResult r;
    auto push = [&](ParamIssue code, std::string message) {
        r.issues.push_back({code, std::move(message)});
    };

    if (!positive_finite(p.lambda)) {
        push(ParamIssue::NonPositiveLambda, "lambda must be positive and finite");
    }
    if (!positive_finite(p.period)) {
        push(ParamIssue::NonPositivePeriod, "period must be positive and finite");
    }
    if (!positive_finite(p.beta)) {
        push(ParamIssue::NonPositiveBeta, "beta must be positive and finite");
    }
    if (p.order < 0) push(ParamIssue::NegativeOrder, "order must be nonnegative");
    if (p.span < 1) push(ParamIssue::NonPositiveSpan, "span must be at least 1");
    if (!r.ok()) return r;

    if (!p.relax_sufficiency) {
        if (p.period > max_guaranteed_period() * (1.0 + 1e-12)) {
            push(ParamIssue::PeriodAboveGuarantee,
                 "period exceeds the guaranteed limit 1 / (2 pi e); use a higher sampling rate or "
                 "relax the sufficiency checks");
        }
        if (p.order >= 1) {
            const double shrink = std::pow(p.period * kPi * kE, p.order) * p.beta;
            if (shrink > p.lambda * (1.0 + 1e-9)) {
                push(ParamIssue::InsufficientShrink,
                     "difference order too low: the guaranteed bound on the order-th difference "
                     "does not drop below lambda");
            }
        } else if (p.beta > p.lambda * (1.0 + 1e-9)) {
            push(ParamIssue::InsufficientShrink,
                 "order 0 requires amplitudes within the folding range (beta <= lambda)");
        }
        if (p.span < choose_span(p.lambda, p.beta)) {
            push(ParamIssue::SpanBelowGuarantee,
                 "span below the guaranteed estimation window ceil(6 beta / lambda)");
        }
    }

    const std::size_t needed =
        p.order >= 1 ? static_cast<std::size_t>(p.span) + static_cast<std::size_t>(p.order) + 1
                     : 1;
    if (sample_count < needed) {
        push(ParamIssue::TooFewSamples,
             "need at least span + order + 1 samples (" + std::to_string(needed) + "), got " +
                 std::to_string(sample_count));
    }
    return r;
}

RecoveryReport unfold(const SampleSequence& folded, const RecoveryParams& p) {
    const ValidationResult check = validate(p, folded.size());
    if (!check.ok()) {
        throw std::invalid_argument("invalid recovery parameters: " + check.summary());
    }

    RecoveryReport report;
    RecoveryDiagnostics& diag = report.diagnostics;
    diag.kappa_residual_limit = 3.0 * p.beta / (2.0 * p.lambda * p.span);

    if (p.relax_sufficiency) {
        // Disclose which guarantees the caller opted out of.
        RecoveryParams strict = p;
        strict.relax_sufficiency = false;
        for (const ValidationIssue& issue : validate(strict, folded.size()).issues) {
            diag.flags.push_back("relaxed: " + issue.message);
        }
    }

    if (p.order == 0) {
        report.recovered = folded;
        report.residual.assign(folded.size(), 0.0);
        diag.folded_diff_peak = folded.max_abs();
        return report;
    }

    const double step = 2.0 * p.lambda;
    const SampleSequence diffed = finite_diff(folded, p.order);
    const SampleSequence folded_diff = centered_modulo(diffed, p.lambda);
    diag.folded_diff_peak = folded_diff.max_abs();
    const double shrink_bound = std::pow(p.period * kPi * kE, p.order) * p.beta;
    if (diag.folded_diff_peak > shrink_bound * (1.0 + 1e-9)) {
        diag.flags.push_back(
            "peak of the folded order-th difference exceeds the guaranteed shrink bound; the "
            "input may violate the amplitude or bandwidth assumptions");
    }

    // Difference of the folding residual at the highest order. Folding maps
    // each value onto the same 2*lambda coset, so this is on the grid up to
    // floating-point drift, which the snap removes.
    std::vector<double> stage(folded_diff.size());
    for (std::size_t i = 0; i < stage.size(); ++i) stage[i] = folded_diff[i] - diffed[i];
    diag.max_grid_correction = std::max(diag.max_grid_correction, snap_onto_grid(stage, step));

    // Walk the order back down one level per pass: sum, estimate the unwrap
    // constant from a second summation, then reattach it as the first entry
    // of the lower-order difference.
    for (int n = 1; n <= p.order - 1; ++n) {
        std::vector<double> summed = prefix_sum(stage);
        diag.max_grid_correction = std::max(diag.max_grid_correction, snap_onto_grid(summed, step));
        const SampleSequence double_sum{prefix_sum(summed)};
        const KappaEstimate est = compute_kappa(double_sum, p.span, p.lambda, p.beta);
        report.kappa.push_back(est.value);
        diag.max_kappa_residual = std::max(diag.max_kappa_residual, std::abs(est.residual));

        const double shift = step * static_cast<double>(est.value);
        stage.resize(summed.size() + 1);
        stage[0] = shift;
        for (std::size_t i = 0; i < summed.size(); ++i) stage[i + 1] = summed[i] + shift;
        diag.max_grid_correction = std::max(diag.max_grid_correction, snap_onto_grid(stage, step));
    }

    // Last summation; the leading residual entry is not observable, so the
    // output is anchored at zero and matches the truth up to one common
    // multiple of 2*lambda.
    std::vector<double> summed = prefix_sum(stage);
    diag.max_grid_correction = std::max(diag.max_grid_correction, snap_onto_grid(summed, step));
    report.residual.resize(summed.size() + 1);
    report.residual[0] = 0.0;
    for (std::size_t i = 0; i < summed.size(); ++i) report.residual[i + 1] = summed[i];

    report.recovered = add(folded, SampleSequence(report.residual));

    if (diag.max_kappa_residual > diag.kappa_residual_limit) {
        diag.flags.push_back("an unwrap constant was estimated outside its residual margin");
        diag.margins_ok = false;
    }
    if (diag.max_grid_correction > 1e-3 * p.lambda) {
        diag.flags.push_back("grid corrections grew beyond floating-point scale");
        diag.margins_ok = false;
    }
    return report;
}

}  // namespace modsamp
