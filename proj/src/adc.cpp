#include "modsamp/adc.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

#include "modsamp/signal.hpp"

namespace modsamp {

void validate(const SrAdcConfig& cfg) {
    if (!std::isfinite(cfg.lambda) || cfg.lambda <= 0.0) {
        throw std::invalid_argument("folding threshold lambda must be positive and finite");
    }
    if (!std::isfinite(cfg.noise_amplitude) || cfg.noise_amplitude < 0.0) {
        throw std::invalid_argument("noise amplitude must be nonnegative and finite");
    }
    if (cfg.noise_amplitude >= cfg.lambda / 4.0) {
        throw std::invalid_argument("noise amplitude must stay below lambda / 4");
    }
}

ResidualSequence::ResidualSequence(std::vector<double> values, double lambda)
    : values_(std::move(values)), lambda_(lambda) {
    if (!std::isfinite(lambda_) || lambda_ <= 0.0) {
        throw std::invalid_argument("residual lambda must be positive and finite");
    }
    quotients_.reserve(values_.size());
    for (double v : values_) {
        // GridScalar enforces the 2*lambda grid; grid_error signals corrupted
        // data or a lambda mismatch between the folded and unfolded inputs.
        quotients_.push_back(GridScalar(v, 2.0 * lambda_).quotient());
    }
}

SampleSequence make_noise(std::size_t count, double amplitude, std::uint64_t seed) {
    if (!std::isfinite(amplitude) || amplitude < 0.0) {
        throw std::invalid_argument("noise amplitude must be nonnegative and finite");
    }
    std::vector<double> out(count, 0.0);
    if (amplitude > 0.0) {
        UniformSource rng(seed);
        for (double& v : out) v = amplitude * rng.symmetric();
    }
    return SampleSequence(std::move(out));
}

SampleSequence fold_samples(const SampleSequence& samples, const SrAdcConfig& cfg,
                            std::uint64_t noise_seed) {
    validate(cfg);
    if (cfg.noise_amplitude > 0.0) {
        const SampleSequence noisy =
            add(samples, make_noise(samples.size(), cfg.noise_amplitude, noise_seed));
        return centered_modulo(noisy, cfg.lambda);
    }
    return centered_modulo(samples, cfg.lambda);
}

ResidualSequence residual(const SampleSequence& samples, const SampleSequence& folded,
                          double lambda) {
    if (samples.size() != folded.size()) {
        throw std::length_error("residual requires equally long sample and folded sequences");
    }
    std::vector<double> diff;
    diff.reserve(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) diff.push_back(samples[i] - folded[i]);
    return ResidualSequence(std::move(diff), lambda);
}

}  // namespace modsamp
