#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "emdr/emd.hpp"
#include "helpers.hpp"

using namespace emdr;

namespace {

TimeSeries make_series(std::vector<double> v) {
    TimeSeries ts;
    ts.values = std::move(v);
    return ts;
}

double range_of(const std::vector<double>& v) {
    auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

} // namespace

TEST_CASE("sift_once: pure sine is already symmetric") {
    auto x = oracle::sine(200, 20.0);
    auto [next, m] = sift_once(x, BoundaryPolicy::Mirror);
    for (std::size_t t = 20; t < 180; ++t) {
        CHECK(std::abs(m[t]) < 0.05);
        CHECK(std::abs(next[t] - x[t]) < 0.05);
    }
}

TEST_CASE("sift_once: removes a constant offset") {
    auto x = oracle::sine(200, 20.0, 1.0, 0.0, 1.0);
    auto pure = oracle::sine(200, 20.0);
    auto [next, m] = sift_once(x, BoundaryPolicy::Mirror);
    for (std::size_t t = 20; t < 180; ++t) {
        CHECK(std::abs(m[t] - 1.0) < 0.05);
        CHECK(std::abs(next[t] - pure[t]) < 0.05);
    }
}

TEST_CASE("sift_once: monotone ramp is a residue") {
    std::vector<double> ramp(100);
    for (std::size_t t = 0; t < 100; ++t) ramp[t] = static_cast<double>(t) / 100.0;
    CHECK_THROWS_AS(sift_once(ramp, BoundaryPolicy::Mirror), InsufficientExtrema);
}

TEST_CASE("rilling_stop: perfect symmetry stops") {
    SiftParams params;
    const std::size_t n = 100;
    Envelope env{std::vector<double>(n, 1.0), std::vector<double>(n, -1.0)};
    std::vector<double> h(n, 0.0);
    CHECK(rilling_stop(h, env, params));
}

TEST_CASE("rilling_stop: hard threshold violated everywhere") {
    SiftParams params; // theta2 = 0.5
    const std::size_t n = 100;
    const double sigma = params.theta2 + 0.1;
    Envelope env{std::vector<double>(n, sigma + 1.0),
                 std::vector<double>(n, sigma - 1.0)}; // a = 1, m = sigma
    std::vector<double> h(n, 0.0);
    CHECK_FALSE(rilling_stop(h, env, params));
}

TEST_CASE("rilling_stop: two-threshold rule with 4% excursions") {
    SiftParams params; // theta1 = 0.05, theta2 = 0.5, alpha = 0.05
    const std::size_t n = 100;
    Envelope env;
    env.upper.resize(n);
    env.lower.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double sigma = i < 96 ? params.theta1 / 2.0 : params.theta2 / 2.0;
        env.upper[i] = sigma + 1.0; // a = 1, m = sigma
        env.lower[i] = sigma - 1.0;
    }
    std::vector<double> h(n, 0.0);
    CHECK(rilling_stop(h, env, params));
}

TEST_CASE("emd_decompose: single tone gives one dominant IMF") {
    auto x = make_series(oracle::sine(512, 32.0));
    auto dec = emd_decompose(x, SiftParams{});
    REQUIRE(dec.imfs.size() >= 1);
    CHECK(oracle::pearson(dec.imfs[0].values, x.values) > 0.99);
    double worst = 0.0;
    for (double v : dec.residue) worst = std::max(worst, std::abs(v));
    CHECK(worst < 0.1);
}

TEST_CASE("emd_decompose: completeness on random inputs") {
    for (std::uint64_t seed : {1u, 2u, 3u, 4u, 5u}) {
        auto x = make_series(oracle::white_noise(777, seed));
        auto dec = emd_decompose(x, SiftParams{});
        CHECK(dec.reconstruction_error(x.values) <= 1e-10 * range_of(x.values));
    }
}

TEST_CASE("emd_decompose: two well-separated tones are split") {
    const std::size_t n = 1024;
    auto fast = oracle::sine(n, 8.0);
    auto slow = oracle::sine(n, 64.0);
    std::vector<double> x(n);
    for (std::size_t t = 0; t < n; ++t) x[t] = fast[t] + slow[t];
    auto dec = emd_decompose(make_series(x), SiftParams{});
    REQUIRE(dec.imfs.size() >= 2);
    const std::size_t margin = n / 20;
    const std::size_t m = n - 2 * margin;
    CHECK(oracle::pearson({dec.imfs[0].values.data() + margin, m},
                          {fast.data() + margin, m}) > 0.95);
    CHECK(oracle::pearson({dec.imfs[1].values.data() + margin, m},
                          {slow.data() + margin, m}) > 0.95);
}

TEST_CASE("emd_decompose: rejects short or non-finite input") {
    CHECK_THROWS_AS(emd_decompose(make_series({1, 2, 3}), SiftParams{}),
                    SeriesTooShort);
    auto bad = oracle::sine(64, 8.0);
    bad[10] = std::nan("");
    CHECK_THROWS_AS(emd_decompose(make_series(bad), SiftParams{}),
                    NonFiniteInput);
}

TEST_CASE("emd invariants: IMFs oscillate around zero with balanced counts") {
    // Rates measured across an ensemble: the per-component property holds up
    // to rare single-extremum excursions past zero (the residual asymmetry
    // the Rilling alpha tolerance admits) and mean offsets on sparse-extrema
    // slow components. The library flags per-run violations as warnings.
    std::size_t candidates = 0, zc_violations = 0, mean_violations = 0;
    for (std::uint64_t seed = 101; seed <= 110; ++seed) {
        auto x = make_series(oracle::white_noise(2048, seed));
        auto dec = emd_decompose(x, SiftParams{});

        std::size_t run_violations = 0;
        for (const auto& imf : dec.imfs) {
            auto ex = find_extrema(imf.values);
            std::size_t zc = 0;
            for (std::size_t t = 1; t < imf.values.size(); ++t)
                if ((imf.values[t - 1] < 0) != (imf.values[t] < 0)) ++zc;
            const long diff =
                static_cast<long>(zc) - static_cast<long>(ex.total());
            if (std::labs(diff) > 1) ++run_violations;

            if (ex.total() < 8) continue; // trend-transition tail components
            ++candidates;
            if (std::labs(diff) > 1) ++zc_violations;
            // mean taken on the interior: boundary windows carry the usual
            // mirror-extension edge swings
            const std::size_t margin = imf.values.size() / 10;
            const double mu =
                std::accumulate(imf.values.begin() + static_cast<long>(margin),
                                imf.values.end() - static_cast<long>(margin),
                                0.0) /
                static_cast<double>(imf.values.size() - 2 * margin);
            if (std::abs(mu) > 0.1 * peak_to_peak_amplitude(imf))
                ++mean_violations;
        }

        // the post-hoc flag fires exactly when > 1% of components violate
        const bool flagged =
            std::any_of(dec.warnings.begin(), dec.warnings.end(),
                        [](const std::string& w) {
                            return w.find("zero-crossing") != std::string::npos;
                        });
        CHECK(flagged == (static_cast<double>(run_violations) >
                          0.01 * static_cast<double>(dec.imfs.size())));
    }
    REQUIRE(candidates >= 50);
    CHECK(static_cast<double>(zc_violations) <=
          0.10 * static_cast<double>(candidates));
    CHECK(static_cast<double>(mean_violations) <=
          0.05 * static_cast<double>(candidates));
}

TEST_CASE("emd invariants: frequency ordering of mean periods") {
    auto x = make_series(oracle::white_noise(2048, 4242));
    auto dec = emd_decompose(x, SiftParams{});
    std::vector<double> periods;
    for (const auto& imf : dec.imfs) {
        try {
            periods.push_back(mean_period(imf));
        } catch (const TooFewPeaks&) {
            break;
        }
    }
    REQUIRE(periods.size() >= 3);
    std::size_t inversions = 0;
    for (std::size_t k = 1; k < periods.size(); ++k)
        if (periods[k] < periods[k - 1]) ++inversions;
    CHECK(inversions <= 1);
}

TEST_CASE("emd invariants: positive homogeneity of the decomposition") {
    auto x = oracle::white_noise(1024, 31);
    auto scaled = x;
    const double c = 3.7;
    for (auto& v : scaled) v *= c;
    auto d1 = emd_decompose(make_series(x), SiftParams{});
    auto d2 = emd_decompose(make_series(scaled), SiftParams{});
    REQUIRE(d1.imfs.size() == d2.imfs.size());
    const double scale = range_of(scaled);
    for (std::size_t k = 0; k < d1.imfs.size(); ++k)
        for (std::size_t t = 0; t < x.size(); ++t)
            CHECK(std::abs(d2.imfs[k].values[t] - c * d1.imfs[k].values[t]) <=
                  1e-8 * scale);
}

TEST_CASE("mean_period: sampled sine") {
    Imf imf;
    imf.values = oracle::sine(200, 20.0);
    CHECK(std::abs(mean_period(imf) - 20.0) <= 0.5);
}

TEST_CASE("mean_period: exact uniform peak spacing") {
    Imf imf;
    imf.values.resize(60);
    for (std::size_t t = 0; t < 60; ++t)
        imf.values[t] =
            std::cos(2.0 * M_PI * (static_cast<double>(t) - 10.0) / 20.0);
    // peaks at t = 10, 30, 50 exactly
    CHECK(mean_period(imf) == 20.0);
}

TEST_CASE("mean_period: monotone array has no peaks") {
    Imf imf;
    imf.values.resize(32);
    std::iota(imf.values.begin(), imf.values.end(), 0.0);
    CHECK_THROWS_AS(mean_period(imf), TooFewPeaks);
}

TEST_CASE("peak_to_peak_amplitude: scaled sine") {
    Imf imf;
    imf.values = oracle::sine(200, 20.0, 1.5);
    CHECK(peak_to_peak_amplitude(imf) == doctest::Approx(3.0).epsilon(0.02));
}

TEST_CASE("peak_to_peak_amplitude: alternating unit extrema") {
    Imf imf;
    imf.values = {0, 1, 0, -1, 0, 1, 0, -1, 0};
    CHECK(peak_to_peak_amplitude(imf) == 2.0);
}

TEST_CASE("peak_to_peak_amplitude: flat array has no extrema") {
    Imf imf;
    imf.values.assign(32, 0.0);
    CHECK_THROWS_AS(peak_to_peak_amplitude(imf), TooFewExtrema);
}

TEST_CASE("instantaneous_amplitude: pure tone magnitude") {
    Imf imf;
    imf.values = oracle::sine(1000, 20.0, 2.0);
    auto amp = instantaneous_amplitude(imf);
    for (std::size_t t = 50; t < 950; ++t)
        CHECK(std::abs(amp[t] - 2.0) <= 0.1); // 5% of 2.0
}

TEST_CASE("instantaneous_amplitude: positive homogeneity") {
    Imf imf;
    imf.values = oracle::white_noise(256, 8);
    auto amp = instantaneous_amplitude(imf);

    Imf doubled;
    doubled.values = imf.values;
    for (auto& v : doubled.values) v *= 2.0; // power of two: exact scaling
    auto amp2 = instantaneous_amplitude(doubled);
    for (std::size_t t = 0; t < amp.size(); ++t) CHECK(amp2[t] == 2.0 * amp[t]);

    Imf zero;
    zero.values.assign(64, 0.0);
    for (double v : instantaneous_amplitude(zero)) CHECK(v == 0.0);
}

TEST_CASE("amplitude_by_day_of_year: constant tone is flat") {
    // 40 years so the Hilbert edge ripple is diluted across each day bin
    Imf imf;
    imf.values = oracle::sine(14610, 8.0);
    auto prof = amplitude_by_day_of_year(imf, CivilDate{2000, 1, 1});
    double lo = 1e300, hi = -1e300;
    for (int d = 0; d < 366; ++d) {
        REQUIRE(prof.count[d] > 0);
        lo = std::min(lo, prof.mean[d]);
        hi = std::max(hi, prof.mean[d]);
    }
    CHECK(hi / lo < 1.05);
}

TEST_CASE("amplitude_by_day_of_year: planted seasonal modulation") {
    const std::size_t n = 3653; // ten years
    Imf imf;
    imf.values.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        const double mod =
            1.0 + 0.5 * std::sin(2.0 * M_PI * static_cast<double>(t) / 365.25);
        imf.values[t] = mod * std::sin(2.0 * M_PI * static_cast<double>(t) / 8.0);
    }
    auto prof = amplitude_by_day_of_year(imf, CivilDate{2001, 1, 1});
    std::vector<double> got, expected;
    for (int d = 1; d <= 365; ++d) {
        if (prof.count[d - 1] == 0) continue;
        got.push_back(prof.mean[d - 1]);
        expected.push_back(
            1.0 + 0.5 * std::sin(2.0 * M_PI * static_cast<double>(d - 1) / 365.25));
    }
    CHECK(oracle::pearson(got, expected) > 0.9);
}

TEST_CASE("amplitude_by_day_of_year: single non-leap year counts") {
    Imf imf;
    imf.values = oracle::sine(365, 16.0);
    auto prof = amplitude_by_day_of_year(imf, CivilDate{2001, 1, 1});
    for (int d = 1; d <= 365; ++d) CHECK(prof.count[d - 1] == 1);
    CHECK(prof.count[365] == 0);
    CHECK(std::isnan(prof.mean[365]));
}
