#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "modsamp/adc.hpp"
#include "modsamp/recovery.hpp"
#include "modsamp/signal.hpp"

using namespace modsamp;

namespace {

bool has_issue(const ValidationResult& r, ParamIssue code) {
    return std::any_of(r.issues.begin(), r.issues.end(),
                       [code](const ValidationIssue& i) { return i.code == code; });
}

// Enumeration oracle for the unwrap constants, independent of the recovery
// implementation: at each stage the true lower-order difference must equal
// the summed higher-order one shifted by a unique grid constant.
std::vector<long long> oracle_kappa(const std::vector<double>& eps_true, int order, double lambda,
                                    long long search) {
    auto diff1 = [](std::vector<double> v) {
        for (std::size_t i = 0; i + 1 < v.size(); ++i) v[i] = v[i + 1] - v[i];
        v.pop_back();
        return v;
    };
    auto psum = [](std::vector<double> v) {
        double acc = 0.0;
        for (double& x : v) {
            acc += x;
            x = acc;
        }
        return v;
    };

    std::vector<std::vector<double>> levels(static_cast<std::size_t>(order) + 1);
    levels[0] = eps_true;
    for (int m = 1; m <= order; ++m) levels[m] = diff1(levels[m - 1]);

    std::vector<long long> out;
    for (int n = 1; n <= order - 1; ++n) {
        const int m = order - n + 1;
        const std::vector<double> summed = psum(levels[m]);
        const std::vector<double>& target = levels[m - 1];
        long long found = 0;
        int matches = 0;
        for (long long cand = -search; cand <= search; ++cand) {
            const double shift = 2.0 * lambda * static_cast<double>(cand);
            double worst = std::abs(shift - target[0]);
            for (std::size_t i = 0; i < summed.size(); ++i) {
                worst = std::max(worst, std::abs(summed[i] + shift - target[i + 1]));
            }
            if (worst < lambda) {
                ++matches;
                found = cand;
            }
        }
        REQUIRE(matches == 1);
        out.push_back(found);
    }
    return out;
}

}  // namespace

TEST_CASE("guaranteed period limit") {
    CHECK(max_guaranteed_period() == doctest::Approx(0.058549831524319).epsilon(1e-12));
}

TEST_CASE("order selection tracks the threshold-to-amplitude ratio") {
    const double critical = max_guaranteed_period();
    CHECK(choose_order(0.05, 1.0, critical) == 5);
    CHECK(choose_order(1.0, 2.0, critical) == 1);
    CHECK(choose_order(2.0, 1.0, critical) == 0);
    // Halving the period shrinks differences faster: log(20) / log(4) -> 3.
    CHECK(choose_order(1.0, 20.0, critical / 2.0) == 3);

    CHECK_THROWS_AS(choose_order(0.05, 1.0, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(choose_order(-1.0, 1.0, critical), std::invalid_argument);
    CHECK_THROWS_AS(choose_order(0.05, 0.0, critical), std::invalid_argument);
}

TEST_CASE("span selection keeps the guarantee margin") {
    CHECK(choose_span(0.05, 1.0) == 120);
    CHECK(choose_span(0.5, 1.0) == 12);
    CHECK(choose_span(1.0, 1.0) == 6);
    CHECK(choose_span(2.0, 1.0) == 3);
    CHECK(choose_span(100.0, 1.0) == 1);
    CHECK_THROWS_AS(choose_span(0.0, 1.0), std::invalid_argument);
}

TEST_CASE("unwrap constant estimation on a constructed double sum") {
    // Entries 2*lambda*(2 - 3*(i-1)): the drop across the span encodes the
    // constant 3 exactly.
    const double lambda = 0.5;
    std::vector<double> u;
    for (int i = 1; i <= 5; ++i) u.push_back(2.0 * lambda * (2.0 - 3.0 * (i - 1)));
    const KappaEstimate exact = compute_kappa(SampleSequence{u}, 4, lambda, 1.0);
    CHECK(exact.value == 3);
    CHECK(exact.residual == doctest::Approx(0.0).scale(1.0));
    CHECK(exact.residual_limit == doctest::Approx(3.0 / (2.0 * lambda * 4)).epsilon(1e-12));

    // A bounded perturbation moves the ratio but not the rounded value.
    u[4] += 0.3;
    const KappaEstimate nudged = compute_kappa(SampleSequence{u}, 4, lambda, 1.0);
    CHECK(nudged.value == 3);
    CHECK(nudged.residual == doctest::Approx(-0.075).epsilon(1e-12));

    CHECK_THROWS_AS(compute_kappa(SampleSequence{u}, 5, lambda, 1.0), std::length_error);
    CHECK_THROWS_AS(compute_kappa(SampleSequence{u}, 0, lambda, 1.0), std::invalid_argument);
}

TEST_CASE("validation reports each violated precondition") {
    RecoveryParams good{0.05, max_guaranteed_period(), 1.0, 5, 120, false};
    CHECK(validate(good, 200).ok());
    CHECK(validate(good, 126).ok());

    CHECK(has_issue(validate(good, 100), ParamIssue::TooFewSamples));

    RecoveryParams slow = good;
    slow.period = max_guaranteed_period() * 1.01;
    CHECK(has_issue(validate(slow, 200), ParamIssue::PeriodAboveGuarantee));
    slow.relax_sufficiency = true;
    CHECK(validate(slow, 200).ok());

    RecoveryParams shallow = good;
    shallow.order = 3;
    CHECK(has_issue(validate(shallow, 200), ParamIssue::InsufficientShrink));
    shallow.relax_sufficiency = true;
    CHECK(validate(shallow, 200).ok());

    RecoveryParams narrow = good;
    narrow.span = 50;
    CHECK(has_issue(validate(narrow, 200), ParamIssue::SpanBelowGuarantee));

    RecoveryParams passthrough = good;
    passthrough.order = 0;
    CHECK(has_issue(validate(passthrough, 200), ParamIssue::InsufficientShrink));
    passthrough.beta = 0.04;
    CHECK(validate(passthrough, 200).ok());

    RecoveryParams broken = good;
    broken.lambda = -1.0;
    broken.order = -2;
    const ValidationResult r = validate(broken, 200);
    CHECK(has_issue(r, ParamIssue::NonPositiveLambda));
    CHECK(has_issue(r, ParamIssue::NegativeOrder));
    CHECK(!r.summary().empty());
}

TEST_CASE("unfolding recovers a known two-term signal exactly") {
    const double lambda = 0.1;
    const double period = max_guaranteed_period();
    const BandlimitedSignal g({0.9, 0.7});
    const SamplingGrid grid{period, 400, 0.0};
    const SampleSequence gamma = sample(g, grid);
    REQUIRE(gamma.max_abs() <= 1.2);
    REQUIRE(gamma.max_abs() > 3.0 * lambda);  // folding genuinely happens

    const SampleSequence y = fold_samples(gamma, SrAdcConfig{lambda});
    RecoveryParams params;
    params.lambda = lambda;
    params.period = period;
    params.beta = 1.2;
    params.order = choose_order(lambda, 1.2, period);
    params.span = choose_span(lambda, 1.2);
    REQUIRE(params.order == 4);
    REQUIRE(params.span == 72);

    const RecoveryReport rep = unfold(y, params);
    REQUIRE(rep.recovered.size() == gamma.size());
    REQUIRE(rep.kappa.size() == 3);

    // The first sample is within the folding range, so the zero anchor is
    // the true one and recovery matches without any constant shift.
    REQUIRE(std::abs(gamma[0]) < lambda);
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        CHECK(rep.recovered[i] == doctest::Approx(gamma[i]).epsilon(1e-11).scale(1.0));
    }

    const ResidualSequence eps = residual(gamma, y, lambda);
    const std::vector<long long> expected =
        oracle_kappa(eps.values(), params.order, lambda, 40);
    CHECK(rep.kappa == expected);
    CHECK(rep.diagnostics.margins_ok);
    CHECK(rep.diagnostics.max_kappa_residual <= rep.diagnostics.kappa_residual_limit);
    CHECK(rep.diagnostics.max_grid_correction <= 1e-6);

    // The reported residual sits on the folding grid and reproduces y + eps.
    for (std::size_t i = 0; i < rep.residual.size(); ++i) {
        const double q = rep.residual[i] / (2.0 * lambda);
        CHECK(std::abs(q - std::round(q)) <= 1e-9);
        CHECK(rep.recovered[i] ==
              doctest::Approx(y[i] + rep.residual[i]).epsilon(1e-12).scale(1.0));
    }
}

TEST_CASE("unfolding with order zero is a passthrough") {
    const SampleSequence y{0.02, -0.01, 0.04, 0.0, -0.03};
    RecoveryParams params;
    params.lambda = 0.05;
    params.period = max_guaranteed_period();
    params.beta = 0.05;
    params.order = 0;
    params.span = choose_span(0.05, 0.05);
    const RecoveryReport rep = unfold(y, params);
    CHECK(rep.recovered.values() == y.values());
    CHECK(rep.kappa.empty());
    for (double r : rep.residual) CHECK(r == 0.0);
    CHECK(rep.diagnostics.margins_ok);
}

TEST_CASE("unfolding with order one needs no unwrap constants") {
    const double lambda = 0.5;
    const double period = max_guaranteed_period();
    const BandlimitedSignal g = generate_random(12, 16, 1.0);
    const SampleSequence gamma = sample(g, SamplingGrid{period, 64, 0.0});
    const SampleSequence y = fold_samples(gamma, SrAdcConfig{lambda});

    RecoveryParams params{lambda, period, 1.0, choose_order(lambda, 1.0, period),
                          choose_span(lambda, 1.0), false};
    REQUIRE(params.order == 1);
    const RecoveryReport rep = unfold(y, params);
    CHECK(rep.kappa.empty());

    // Up to one common grid constant the truth is recovered.
    const double shift = rep.recovered[0] - gamma[0];
    const double q = shift / (2.0 * lambda);
    CHECK(std::abs(q - std::round(q)) <= 1e-9);
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        CHECK(rep.recovered[i] - shift == doctest::Approx(gamma[i]).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("an insufficient order is not silently trusted") {
    const double lambda = 0.05;
    const double period = max_guaranteed_period();
    const BandlimitedSignal g = generate_random(2, 32, 1.0);
    const SampleSequence gamma = sample(g, SamplingGrid{period, 512, 0.0});
    const SampleSequence y = fold_samples(gamma, SrAdcConfig{lambda});

    RecoveryParams params{lambda, period, 1.0, 1, choose_span(lambda, 1.0), true};
    const RecoveryReport rep = unfold(y, params);

    double worst = 0.0;
    const double shift = rep.recovered[0] - gamma[0];
    for (std::size_t i = 0; i < gamma.size(); ++i) {
        worst = std::max(worst, std::abs(rep.recovered[i] - shift - gamma[i]));
    }
    // This configuration folds the first difference, so recovery must fail,
    // and the report has to disclose the lost guarantee.
    CHECK(worst > lambda);
    CHECK(!rep.diagnostics.flags.empty());

    CHECK_THROWS_AS(unfold(SampleSequence{0.01, -0.01}, params), std::invalid_argument);
}
