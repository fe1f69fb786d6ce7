#include "modsamp/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace modsamp {

namespace {

void require_finite(const std::vector<double>& values) {
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::domain_error("sample sequence contains a non-finite value");
        }
    }
}

void require_positive_finite(double x, const char* name) {
    if (!std::isfinite(x) || x <= 0.0) {
        throw std::invalid_argument(std::string(name) + " must be positive and finite");
    }
}

}  // namespace

SampleSequence::SampleSequence(std::vector<double> values) : values_(std::move(values)) {
    require_finite(values_);
}

SampleSequence::SampleSequence(std::initializer_list<double> values) : values_(values) {
    require_finite(values_);
}

double SampleSequence::max_abs() const noexcept {
    double peak = 0.0;
    for (double v : values_) peak = std::max(peak, std::abs(v));
    return peak;
}

GridScalar::GridScalar(double value, double grid_step, double rel_tol)
    : value_(value), grid_step_(grid_step) {
    require_positive_finite(grid_step, "grid step");
    if (!std::isfinite(value)) throw std::domain_error("grid value must be finite");
    const double ratio = value / grid_step;
    const double nearest = std::floor(ratio + 0.5);
    const double scale = std::max(1.0, std::abs(ratio));
    if (std::abs(ratio - nearest) > rel_tol * scale) {
        throw grid_error("value " + std::to_string(value) + " is not a multiple of " +
                         std::to_string(grid_step));
    }
    quotient_ = static_cast<long long>(nearest);
}

double fractional_part(double t) {
    if (!std::isfinite(t)) throw std::domain_error("fractional_part requires a finite input");
    double r = t - std::floor(t);
    // Guard against r rounding up to 1.0 for tiny negative t.
    if (r >= 1.0) r -= 1.0;
    return r;
}

double centered_modulo(double t, double lambda) {
    require_positive_finite(lambda, "lambda");
    if (!std::isfinite(t)) throw std::domain_error("centered_modulo requires a finite input");
    // Identity short-circuit: keeps in-range values bit-exact (the folded form
    // below can absorb values much smaller than lambda into the 1/2 offset).
    if (t >= -lambda && t < lambda) return t;
    double r = 2.0 * lambda * (fractional_part(t / (2.0 * lambda) + 0.5) - 0.5);
    if (r >= lambda) r -= 2.0 * lambda;
    if (r < -lambda) r += 2.0 * lambda;
    return r;
}

SampleSequence centered_modulo(const SampleSequence& a, double lambda) {
    std::vector<double> out;
    out.reserve(a.size());
    for (double v : a) out.push_back(centered_modulo(v, lambda));
    return SampleSequence(std::move(out));
}

SampleSequence finite_diff(const SampleSequence& a, int order) {
    if (order < 1) throw std::invalid_argument("difference order must be at least 1");
    if (static_cast<std::size_t>(order) >= a.size()) {
        throw std::length_error("difference order must be smaller than the sequence length");
    }
    std::vector<double> work(a.begin(), a.end());
    for (int n = 0; n < order; ++n) {
        for (std::size_t k = 0; k + 1 < work.size(); ++k) work[k] = work[k + 1] - work[k];
        work.pop_back();
    }
    return SampleSequence(std::move(work));
}

SampleSequence cumsum(const SampleSequence& a, int times) {
    if (times < 1) throw std::invalid_argument("summation count must be at least 1");
    if (a.empty()) throw std::length_error("cannot sum an empty sequence");
    std::vector<double> work(a.begin(), a.end());
    for (int n = 0; n < times; ++n) {
        std::partial_sum(work.begin(), work.end(), work.begin());
    }
    return SampleSequence(std::move(work));
}

GridScalar round_to_grid(double x, double step) {
    require_positive_finite(step, "grid step");
    if (!std::isfinite(x)) throw std::domain_error("round_to_grid requires a finite input");
    const double k = std::floor(x / step + 0.5);
    return GridScalar(step * k, step);
}

namespace {

SampleSequence combine(const SampleSequence& a, const SampleSequence& b, double sign) {
    if (a.size() != b.size()) {
        throw std::length_error("elementwise combination requires equal lengths");
    }
    std::vector<double> out;
    out.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(a[i] + sign * b[i]);
    return SampleSequence(std::move(out));
}

}  // namespace

SampleSequence add(const SampleSequence& a, const SampleSequence& b) {
    return combine(a, b, 1.0);
}

SampleSequence subtract(const SampleSequence& a, const SampleSequence& b) {
    return combine(a, b, -1.0);
}

}  // namespace modsamp
