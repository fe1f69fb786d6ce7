#pragma once

#include <cstdint>
#include <vector>

#include "modsamp/sequence.hpp"

namespace modsamp {

/// Self-reset ADC front end: folding threshold and optional bounded
/// pre-fold noise. Requires lambda > 0 and 0 <= noise_amplitude < lambda / 4.
struct SrAdcConfig {
    double lambda = 1.0;
    double noise_amplitude = 0.0;
};

/// Throws std::invalid_argument when the config violates its invariants.
void validate(const SrAdcConfig& cfg);

/// Residual between unfolded samples and their folded counterparts. Every
/// entry must be an integer multiple of 2*lambda (construction enforces this
/// to 1e-8 relative and throws grid_error otherwise).
class ResidualSequence {
public:
    ResidualSequence(std::vector<double> values, double lambda);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    const std::vector<double>& values() const noexcept { return values_; }
    double lambda() const noexcept { return lambda_; }
    /// Residuals expressed as integer multiples of 2*lambda.
    const std::vector<long long>& quotients() const noexcept { return quotients_; }

private:
    std::vector<double> values_;
    std::vector<long long> quotients_;
    double lambda_ = 1.0;
};

/// Bounded white noise, uniform on [-amplitude, amplitude), drawn from a
/// dedicated deterministic stream.
SampleSequence make_noise(std::size_t count, double amplitude, std::uint64_t seed);

/// Folds every sample into [-lambda, lambda). When the config carries a
/// nonzero noise amplitude, noise is added before folding so the output
/// models a perturbed front end.
SampleSequence fold_samples(const SampleSequence& samples, const SrAdcConfig& cfg,
                            std::uint64_t noise_seed = 0);

/// samples - folded, validated onto the 2*lambda grid.
ResidualSequence residual(const SampleSequence& samples, const SampleSequence& folded,
                          double lambda);

}  // namespace modsamp
