#pragma once

#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace modsamp {

/// Raised when a value that must sit on a fixed amplitude grid does not.
class grid_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Finite real-valued sample sequence.
///
/// Construction rejects NaN/inf entries. Storage is 0-based; the file formats
/// and reports emitted by the harness count samples from 1.
class SampleSequence {
public:
    SampleSequence() = default;
    explicit SampleSequence(std::vector<double> values);
    SampleSequence(std::initializer_list<double> values);

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double front() const { return values_.front(); }
    double back() const { return values_.back(); }
    const std::vector<double>& values() const noexcept { return values_; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    /// Sup norm of the sequence; 0 for an empty sequence.
    double max_abs() const noexcept;

private:
    std::vector<double> values_;
};

/// A real value constrained to an integer multiple of a positive grid step.
/// Construction verifies the constraint to `rel_tol` and throws grid_error
/// when it fails.
class GridScalar {
public:
    GridScalar(double value, double grid_step, double rel_tol = 1e-8);

    double value() const noexcept { return value_; }
    double grid_step() const noexcept { return grid_step_; }
    /// value / grid_step as an exact integer.
    long long quotient() const noexcept { return quotient_; }

private:
    double value_ = 0.0;
    double grid_step_ = 1.0;
    long long quotient_ = 0;
};

/// Fractional part t - floor(t), always in [0, 1).
double fractional_part(double t);

/// Centered modulo reduction onto [-lambda, lambda).
///
/// The result is congruent to t modulo 2*lambda. Inputs already inside the
/// range are returned unchanged, so the map is exactly the identity there.
double centered_modulo(double t, double lambda);

/// Elementwise centered_modulo.
SampleSequence centered_modulo(const SampleSequence& a, double lambda);

/// `order`-fold first difference: one application maps a_k to a_{k+1} - a_k
/// and shortens the sequence by one. Requires order < a.size().
SampleSequence finite_diff(const SampleSequence& a, int order);

/// Running prefix sum applied `times` times; length is preserved.
SampleSequence cumsum(const SampleSequence& a, int times = 1);

/// Nearest multiple of `step`, half-way cases rounding up.
GridScalar round_to_grid(double x, double step);

/// Elementwise sum / difference of equally long sequences.
SampleSequence add(const SampleSequence& a, const SampleSequence& b);
SampleSequence subtract(const SampleSequence& a, const SampleSequence& b);

}  // namespace modsamp
