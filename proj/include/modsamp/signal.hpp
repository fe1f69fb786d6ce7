#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "modsamp/sequence.hpp"

namespace modsamp {

/// Normalized sinc kernel: sin(pi x) / (pi x), with sinc(0) = 1.
double sinc(double x);

/// Deterministic uniform variates, identical across platforms for a seed.
/// The raw engine output is portable; the double conversion is done by hand
/// because the standard distributions are implementation-defined.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1).
    double unit();
    /// Uniform on [-1, 1).
    double symmetric();

private:
    std::mt19937_64 engine_;
};

/// Finite weighted sum of unit-bandwidth sinc kernels placed on a regular
/// node lattice: g(t) = norm_scale * sum_m c_m sinc(t - m * node_spacing),
/// m = 1..M. With node_spacing = 1 the lattice is the kernel's Nyquist grid
/// and g(k) picks out the scaled coefficients at integer k in [1, M].
class BandlimitedSignal {
public:
    explicit BandlimitedSignal(std::vector<double> coefficients, double node_spacing = 1.0,
                               double norm_scale = 1.0);

    double evaluate(double t) const;

    const std::vector<double>& coefficients() const noexcept { return coefficients_; }
    int num_terms() const noexcept { return static_cast<int>(coefficients_.size()); }
    double node_spacing() const noexcept { return node_spacing_; }
    double norm_scale() const noexcept { return norm_scale_; }

private:
    std::vector<double> coefficients_;
    double node_spacing_ = 1.0;
    double norm_scale_ = 1.0;
};

/// Uniform sampling grid t_k = start + k * period, k = 1..count.
struct SamplingGrid {
    double period = 1.0;
    int count = 0;
    double start = 0.0;

    std::vector<double> times() const;
};

/// Draws `terms` coefficients uniform on [-1, 1) and rescales the signal so
/// its estimated sup norm equals `target_norm`.
BandlimitedSignal generate_random(std::uint64_t seed, int terms, double target_norm);

/// Pointwise samples of g on the grid.
SampleSequence sample(const BandlimitedSignal& g, const SamplingGrid& grid);

/// Shannon interpolation of the samples: sum_k gamma_k * T * sinc(t - t_k).
/// Only valid for period <= 1 (the kernel's Nyquist limit); throws otherwise.
std::vector<double> sinc_reconstruct(const SampleSequence& samples, const SamplingGrid& grid,
                                     std::span<const double> query_times);

/// Sup norm estimated on a dense grid covering the node span plus a margin of
/// 10 on each side. Requires 0 < dense_step <= 0.01.
double sup_norm_estimate(const BandlimitedSignal& g, double dense_step = 0.01);

/// Dense pointwise samples of g on [t0, t1] with the given step.
std::vector<double> sample_dense(const BandlimitedSignal& g, double t0, double t1, double step);

/// Sup norm of the iterated central-difference estimate of the order-th
/// derivative over already dense samples taken with spacing `step`.
double max_abs_iterated_central_diff(std::span<const double> dense, double step, int order);

/// Convenience composition of the two estimators over the node span.
double derivative_sup_estimate(const BandlimitedSignal& g, int order, double step = 1e-3);

}  // namespace modsamp
