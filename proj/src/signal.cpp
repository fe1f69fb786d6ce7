#include "modsamp/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace modsamp {

namespace {

constexpr double kPi = std::numbers::pi;

void require_step(double step, double max_step) {
    if (!std::isfinite(step) || step <= 0.0 || step > max_step) {
        throw std::invalid_argument("dense grid step must lie in (0, " + std::to_string(max_step) +
                                    "]");
    }
}

}  // namespace

double sinc(double x) {
    const double px = kPi * x;
    if (std::abs(x) < 1e-6) {
        // Taylor expansion; avoids 0/0 and keeps full precision near zero.
        const double p2 = px * px;
        return 1.0 - p2 / 6.0 + (p2 * p2) / 120.0;
    }
    return std::sin(px) / px;
}

double UniformSource::unit() {
    // Top 53 bits of the engine output scaled into [0, 1).
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double UniformSource::symmetric() { return 2.0 * unit() - 1.0; }

BandlimitedSignal::BandlimitedSignal(std::vector<double> coefficients, double node_spacing,
                                     double norm_scale)
    : coefficients_(std::move(coefficients)), node_spacing_(node_spacing), norm_scale_(norm_scale) {
    if (coefficients_.empty()) throw std::length_error("signal needs at least one coefficient");
    for (double c : coefficients_) {
        if (!std::isfinite(c)) throw std::domain_error("signal coefficient must be finite");
    }
    if (!std::isfinite(node_spacing_) || node_spacing_ <= 0.0) {
        throw std::invalid_argument("node spacing must be positive and finite");
    }
    if (!std::isfinite(norm_scale_) || norm_scale_ <= 0.0) {
        throw std::invalid_argument("norm scale must be positive and finite");
    }
}

double BandlimitedSignal::evaluate(double t) const {
    if (!std::isfinite(t)) throw std::domain_error("evaluate requires a finite time");
    double acc = 0.0;
    for (std::size_t m = 0; m < coefficients_.size(); ++m) {
        acc += coefficients_[m] * sinc(t - static_cast<double>(m + 1) * node_spacing_);
    }
    return norm_scale_ * acc;
}

std::vector<double> SamplingGrid::times() const {
    if (count < 1) throw std::invalid_argument("sampling grid needs a positive sample count");
    if (!std::isfinite(period) || period <= 0.0) {
        throw std::invalid_argument("sampling period must be positive and finite");
    }
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k) out.push_back(start + static_cast<double>(k) * period);
    return out;
}

BandlimitedSignal generate_random(std::uint64_t seed, int terms, double target_norm) {
    if (terms < 1) throw std::invalid_argument("signal needs at least one term");
    if (!std::isfinite(target_norm) || target_norm <= 0.0) {
        throw std::invalid_argument("target norm must be positive and finite");
    }
    UniformSource rng(seed);
    std::vector<double> coeffs;
    coeffs.reserve(static_cast<std::size_t>(terms));
    for (int m = 0; m < terms; ++m) coeffs.push_back(rng.symmetric());
    BandlimitedSignal raw(coeffs, 1.0, 1.0);
    const double raw_sup = sup_norm_estimate(raw);
    if (raw_sup <= 0.0) throw std::runtime_error("degenerate random draw with zero sup norm");
    return BandlimitedSignal(std::move(coeffs), 1.0, target_norm / raw_sup);
}

SampleSequence sample(const BandlimitedSignal& g, const SamplingGrid& grid) {
    std::vector<double> out;
    const auto times = grid.times();
    out.reserve(times.size());
    for (double t : times) out.push_back(g.evaluate(t));
    return SampleSequence(std::move(out));
}

std::vector<double> sinc_reconstruct(const SampleSequence& samples, const SamplingGrid& grid,
                                     std::span<const double> query_times) {
    if (static_cast<int>(samples.size()) != grid.count) {
        throw std::length_error("sample count does not match the grid");
    }
    if (grid.period > 1.0) {
        throw std::invalid_argument("reconstruction requires period <= 1 for unit-bandwidth data");
    }
    const auto times = grid.times();
    std::vector<double> out;
    out.reserve(query_times.size());
    for (double t : query_times) {
        double acc = 0.0;
        for (std::size_t k = 0; k < times.size(); ++k) {
            acc += samples[k] * grid.period * sinc(t - times[k]);
        }
        out.push_back(acc);
    }
    return out;
}

double sup_norm_estimate(const BandlimitedSignal& g, double dense_step) {
    require_step(dense_step, 0.01);
    const double t0 = g.node_spacing() - 10.0;
    const double t1 = g.num_terms() * g.node_spacing() + 10.0;
    double peak = 0.0;
    const auto n = static_cast<long long>(std::floor((t1 - t0) / dense_step));
    for (long long i = 0; i <= n; ++i) {
        peak = std::max(peak, std::abs(g.evaluate(t0 + static_cast<double>(i) * dense_step)));
    }
    return peak;
}

std::vector<double> sample_dense(const BandlimitedSignal& g, double t0, double t1, double step) {
    if (!std::isfinite(step) || step <= 0.0) {
        throw std::invalid_argument("dense grid step must be positive and finite");
    }
    if (!(t1 > t0)) throw std::invalid_argument("dense window must be nonempty");
    const auto n = static_cast<long long>(std::floor((t1 - t0) / step));
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n + 1));
    for (long long i = 0; i <= n; ++i) out.push_back(g.evaluate(t0 + static_cast<double>(i) * step));
    return out;
}

double max_abs_iterated_central_diff(std::span<const double> dense, double step, int order) {
    if (order < 1) throw std::invalid_argument("derivative order must be at least 1");
    if (!std::isfinite(step) || step <= 0.0) {
        throw std::invalid_argument("dense grid step must be positive and finite");
    }
    if (dense.size() < static_cast<std::size_t>(2 * order + 1)) {
        throw std::length_error("dense sample window too short for the requested order");
    }
    std::vector<double> work(dense.begin(), dense.end());
    for (int n = 0; n < order; ++n) {
        for (std::size_t i = 0; i + 2 < work.size(); ++i) {
            work[i] = (work[i + 2] - work[i]) / (2.0 * step);
        }
        work.resize(work.size() - 2);
    }
    double peak = 0.0;
    for (double v : work) peak = std::max(peak, std::abs(v));
    return peak;
}

double derivative_sup_estimate(const BandlimitedSignal& g, int order, double step) {
    const double t0 = g.node_spacing();
    const double t1 = g.num_terms() * g.node_spacing();
    if (g.num_terms() < 2) {
        // Single-node signals have no interior span; widen by one kernel width.
        return max_abs_iterated_central_diff(sample_dense(g, t0 - 1.0, t0 + 1.0, step), step,
                                             order);
    }
    return max_abs_iterated_central_diff(sample_dense(g, t0, t1, step), step, order);
}

}  // namespace modsamp
