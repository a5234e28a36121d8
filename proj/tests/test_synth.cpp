#include <doctest.h>

#include <cmath>

#include "sidechan/errors.hpp"
#include "sidechan/signal.hpp"
#include "sidechan/synth.hpp"
#include "test_util.hpp"

using namespace sidechan;

TEST_CASE("synth_distribution: moments, peak, determinism") {
    Axis grid(-6.0, 12.0 / 4095, 4096, Unit::Dimensionless);
    auto d = synth_distribution(0.0, 1.0, grid);
    auto [mean, stdev] = mean_std(d);
    CHECK(std::abs(mean) < 1e-3);
    CHECK(stdev == doctest::Approx(1.0).epsilon(1e-3));

    Axis wl(794.1, 3.0 / 4095, 4096, Unit::Nanometre);
    auto spectrum = synth_distribution(795.6, 0.2, wl);
    CHECK(std::abs(peak_location(spectrum) - 795.6) <= wl.step());

    auto again = synth_distribution(795.6, 0.2, wl);
    CHECK(again.density() == spectrum.density());  // bitwise
}

TEST_CASE("synth_distribution: narrow grid is rejected") {
    Axis grid(-2.0, 4.0 / 63, 64, Unit::Dimensionless);
    try {
        synth_distribution(0.0, 1.0, grid);  // needs +-4 sigma
        FAIL("expected GridTooNarrow");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::GridTooNarrow);
    }
}

TEST_CASE("preset lookup") {
    CHECK(preset_names().size() == 3);
    CHECK_THROWS_AS(preset_config("nope"), Error);
    try {
        preset_config("nope");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownPreset);
    }
}

TEST_CASE("synth_ensemble: determinism and structure") {
    auto a = synth_ensemble(preset_config("paper", 42));
    auto b = synth_ensemble(preset_config("paper", 42));
    for (Pol p : kAllPols) {
        const auto& da = std::get<SampledDistribution1D>(a.diode(p).parameters.at("wavelength"));
        const auto& db = std::get<SampledDistribution1D>(b.diode(p).parameters.at("wavelength"));
        CHECK(da.density() == db.density());
    }
    CHECK(a.common_parameters() ==
          std::vector<std::string>{"arrival", "pulse", "spatial", "wavelength"});
    CHECK(a.clock_period_ns() == 200.0);
}

TEST_CASE("paper preset matches the published source statistics") {
    auto ensemble = synth_ensemble(preset_config("paper"));
    for (Pol p : kAllPols) {
        const auto& pulse =
            std::get<SampledDistribution1D>(ensemble.diode(p).parameters.at("pulse"));
        const double width = fwhm(pulse);
        CHECK(width >= 627.0 - 75.0);
        CHECK(width <= 627.0 + 75.0);

        const auto& arrival =
            std::get<SampledDistribution1D>(ensemble.diode(p).parameters.at("arrival"));
        auto [mean, stdev] = mean_std(arrival);
        CHECK(mean == doctest::Approx(41.34).epsilon(0.05));
        CHECK(stdev == doctest::Approx(0.075).epsilon(0.05));
    }
}

TEST_CASE("mc oracle: identical sources") {
    auto d = testutil::gaussian_dist(0.0, 1.0, -6.0, 6.0, 4096);
    BasisPair pair(Basis::HV, d, d);
    auto r = mc_mutual_information(pair, 1'000'000, 99);
    CHECK(std::abs(r.bits_per_pulse) <
          3.0 * r.diagnostics.at("stderr") + r.diagnostics.at("null_bias"));
    CHECK(std::abs(r.bits_per_pulse) < 2e-3);
    // the exported offset really is the first-order plug-in bias scale
    CHECK(r.diagnostics.at("null_bias") ==
          doctest::Approx(63.0 / (2e6 * std::log(2.0))).epsilon(1e-9));
}

TEST_CASE("mc oracle: disjoint supports saturate at one bit") {
    std::vector<double> va(256, 0.0), vb(256, 0.0);
    for (std::size_t i = 10; i < 60; ++i) va[i] = 1.0;
    for (std::size_t i = 150; i < 200; ++i) vb[i] = 1.0;
    BasisPair pair(Basis::HV, normalize(testutil::make_dist(va)),
                   normalize(testutil::make_dist(vb)));
    auto r = mc_mutual_information(pair, 1'000'000, 5);
    CHECK(r.bits_per_pulse == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("mc oracle: seeded determinism and sample-size guard") {
    auto d0 = testutil::gaussian_dist(-0.5, 1.0, -7.0, 7.0, 2048);
    auto d1 = testutil::gaussian_dist(+0.5, 1.0, -7.0, 7.0, 2048);
    BasisPair pair(Basis::HV, d0, d1);
    auto a = mc_mutual_information(pair, 50'000, 7);
    auto b = mc_mutual_information(pair, 50'000, 7);
    CHECK(a.bits_per_pulse == b.bits_per_pulse);
    CHECK(a.diagnostics.at("stderr") == b.diagnostics.at("stderr"));

    CHECK_THROWS_AS(mc_mutual_information(pair, 9'999, 7), Error);
}

TEST_CASE("mc oracle: stderr shrinks with more samples") {
    auto d0 = testutil::gaussian_dist(-1.0, 1.0, -8.0, 8.0, 2048);
    auto d1 = testutil::gaussian_dist(+1.0, 1.0, -8.0, 8.0, 2048);
    BasisPair pair(Basis::HV, d0, d1);
    const double small = mc_mutual_information(pair, 10'000, 31).diagnostics.at("stderr");
    const double large = mc_mutual_information(pair, 1'000'000, 31).diagnostics.at("stderr");
    CHECK(large < small);
}

TEST_CASE("sample_timetags: deterministic, folded into the clock window") {
    auto tags = sample_timetags({41.34, 0.075}, 200.0, 10'000, 2024);
    auto again = sample_timetags({41.34, 0.075}, 200.0, 10'000, 2024);
    CHECK(tags == again);
    for (double t : tags) {
        CHECK(t >= 0.0);
        CHECK(t < 200.0);
    }
}

TEST_CASE("folded histogram recovers the arrival statistics at 1e6 tags") {
    const std::size_t n = 1'000'000;
    auto tags = sample_timetags({41.34, 0.075}, 200.0, n, 8);
    auto hist = histogram_from_timetags(tags, 200.0, 65536);
    auto [mean, stdev] = mean_std(hist);
    const double se_mean = 0.075 / std::sqrt(static_cast<double>(n));
    const double se_std = 0.075 / std::sqrt(2.0 * static_cast<double>(n));
    // binning at ~3 ps against a 75 ps jitter adds negligible width
    CHECK(std::abs(mean - 41.34) < 3.0 * se_mean + hist.axis().step());
    CHECK(std::abs(stdev - 0.075) < 3.0 * se_std + hist.axis().step());
}

TEST_CASE("worst-case preset leaks orders of magnitude more than paper") {
    auto worst = synth_ensemble(preset_config("worst-case"));
    auto report = basis_report(worst, "wavelength", Method::Exact);
    CHECK(report.max_bits_per_pulse > 0.1);
    CHECK(polarization_leakage(worst.polarization_errors()).delta_e ==
          doctest::Approx(0.04).epsilon(1e-12));
}
