#pragma once

#include <string>
#include <vector>

#include "modsamp/sequence.hpp"

namespace modsamp {

/// Largest sampling period with a recovery guarantee, 1 / (2 pi e).
double max_guaranteed_period();

/// Parameters steering the unfolding algorithm.
///
/// `order` is the difference order N (0 means the input is assumed unfolded
/// and is passed through). `span` is the window length J used to estimate the
/// unwrap constants. With relax_sufficiency set, the sufficiency conditions
/// tied to the guarantee (period bound and difference-shrink margin) are
/// reported but not enforced, which permits empirically driven runs outside
/// the guaranteed regime.
struct RecoveryParams {
    double lambda = 1.0;
    double period = 1.0;
    double beta = 1.0;
    int order = 0;
    int span = 1;
    bool relax_sufficiency = false;
};

enum class ParamIssue {
    NonPositiveLambda,
    NonPositivePeriod,
    NonPositiveBeta,
    NegativeOrder,
    NonPositiveSpan,
    PeriodAboveGuarantee,
    InsufficientShrink,
    SpanBelowGuarantee,
    TooFewSamples,
};

struct ValidationIssue {
    ParamIssue code;
    std::string message;
};

struct ValidationResult {
    std::vector<ValidationIssue> issues;

    bool ok() const noexcept { return issues.empty(); }
    std::string summary() const;
};

/// Smallest difference order with a recovery guarantee for the given
/// threshold, amplitude bound and period:
/// ceil((log lambda - log beta) / log(period * pi * e)), clamped to >= 0.
/// Requires period * pi * e < 1.
int choose_order(double lambda, double beta, double period);

/// Estimation window with a guarantee margin: ceil(6 * beta / lambda).
int choose_span(double lambda, double beta);

/// Unwrap constant estimated from a twice-summed difference sequence.
struct KappaEstimate {
    long long value = 0;
    /// Distance from the raw ratio to the chosen integer, in grid units.
    double residual = 0.0;
    /// Margin the residual must stay under for the estimate to be trusted:
    /// 3 * beta / (2 * lambda * span).
    double residual_limit = 0.0;
};

/// Reads entries 1 and span+1 (1-based) of `double_sum`, the twice-summed
/// n-th difference of the folding residual, and rounds
/// (first - later) / (2 * lambda * span) to the nearest integer.
KappaEstimate compute_kappa(const SampleSequence& double_sum, int span, double lambda,
                            double beta);

/// Checks parameter invariants and, when relax_sufficiency is unset, the
/// sufficiency conditions of the recovery guarantee. `sample_count` must
/// cover span + order + 1 samples.
ValidationResult validate(const RecoveryParams& params, std::size_t sample_count);

/// Per-run diagnostics. Recovery is never silently wrong: when a margin is
/// breached the corresponding flag names it and `margins_ok` drops to false.
struct RecoveryDiagnostics {
    /// Peak of the folded order-th difference; the guarantee implies it stays
    /// at or below lambda only through the shrink condition.
    double folded_diff_peak = 0.0;
    /// Largest distance between a summation output and the 2*lambda grid.
    double max_grid_correction = 0.0;
    /// Largest kappa rounding residual seen, and the limit it is held to.
    double max_kappa_residual = 0.0;
    double kappa_residual_limit = 0.0;
    bool margins_ok = true;
    std::vector<std::string> flags;
};

struct RecoveryReport {
    /// Recovered samples, anchored so the first residual entry is zero; the
    /// true sequence is matched up to one common multiple of 2*lambda.
    SampleSequence recovered;
    /// Recovered folding residual (recovered - folded), on the 2*lambda grid.
    std::vector<double> residual;
    /// Unwrap constants, one per summation stage (empty when order <= 1).
    std::vector<long long> kappa;
    RecoveryDiagnostics diagnostics;
};

/// Recovers unfolded samples from folded ones by iterated differencing,
/// unwrapping and summation. Throws std::invalid_argument when validate()
/// reports issues for the given parameters and input length.
RecoveryReport unfold(const SampleSequence& folded, const RecoveryParams& params);

}  // namespace modsamp
