#include <doctest.h>

#include <cmath>
#include <random>

#include "sidechan/errors.hpp"
#include "sidechan/numeric.hpp"
#include "sidechan/signal.hpp"
#include "test_util.hpp"

using namespace sidechan;
using testutil::gaussian_dist;
using testutil::make_dist;

TEST_CASE("normalize: uniform and single-bin cases") {
    auto d = normalize(make_dist({2, 2, 2, 2}, 0.0, 0.25));
    for (double v : d.density()) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.normalized());

    auto s = normalize(make_dist({0, 4, 0}, 0.0, 0.5));
    CHECK(s.density()[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(s.density()[0] == 0.0);

    try {
        normalize(make_dist({0, 0, 0}));
        FAIL("expected AllZeroSignal");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::AllZeroSignal);
    }
}

TEST_CASE("distribution construction rejects bad values") {
    CHECK_THROWS_AS(make_dist({1.0, -0.5, 2.0}), Error);
    try {
        make_dist({1.0, -0.5, 2.0});
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeValue);
    }
    CHECK_THROWS_AS(make_dist({1.0, std::nan(""), 2.0}), Error);
}

TEST_CASE("normalize is idempotent and scale invariant") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> value(0.0, 10.0);
    std::uniform_int_distribution<std::size_t> size(2, 200);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> v(size(rng));
        for (auto& x : v) x = value(rng);
        v[0] += 1e-3;  // keep the integral positive
        const double alpha = value(rng) + 0.1;
        auto base = make_dist(v, -3.0, 0.37);
        std::vector<double> scaled_values = v;
        for (auto& x : scaled_values) x *= alpha;

        auto n1 = normalize(base);
        auto n2 = normalize(n1);
        auto n3 = normalize(make_dist(scaled_values, -3.0, 0.37));
        for (std::size_t i = 0; i < v.size(); ++i) {
            CHECK(n2.density()[i] == doctest::Approx(n1.density()[i]).epsilon(1e-12));
            CHECK(n3.density()[i] == doctest::Approx(n1.density()[i]).epsilon(1e-12));
        }
    }
}

TEST_CASE("resample_common: identical axes pass through") {
    auto a = gaussian_dist(0.0, 1.0, -5.0, 5.0, 101);
    auto b = gaussian_dist(0.5, 1.0, -5.0, 5.0, 101);
    auto [ra, rb] = resample_common(a, b);
    REQUIRE(ra.size() == a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(ra.density()[i] == doctest::Approx(a.density()[i]).epsilon(1e-12));
        CHECK(rb.density()[i] == doctest::Approx(b.density()[i]).epsilon(1e-12));
    }
}

TEST_CASE("resample_common: range intersection") {
    auto a = normalize(make_dist(std::vector<double>(11, 1.0), 0.0, 1.0));
    auto b = normalize(make_dist(std::vector<double>(11, 1.0), 5.0, 1.0));
    auto [ra, rb] = resample_common(a, b);
    CHECK(ra.axis().start() == doctest::Approx(5.0));
    CHECK(ra.axis().stop() == doctest::Approx(10.0));
    CHECK(ra.axis().step() == doctest::Approx(1.0));
    CHECK(ra.size() == 6);
    CHECK(rb.axis().same_grid(ra.axis()));
}

TEST_CASE("resample_common: finer step matches the interpolation oracle") {
    auto a = gaussian_dist(1.0, 2.0, -8.0, 8.0, 17);  // step 1
    auto b = gaussian_dist(0.0, 2.0, -8.0, 8.0, 33);  // step 0.5
    auto [ra, rb] = resample_common(a, b);
    CHECK(ra.axis().step() == doctest::Approx(0.5));
    // before renormalization the resampled values are pointwise linear
    // interpolations; compare shapes through ratios against the oracle
    const double scale = ra.density()[16] / testutil::interp_oracle(a, ra.axis().value(16));
    for (std::size_t i = 0; i < ra.size(); ++i) {
        const double expect = testutil::interp_oracle(a, ra.axis().value(i)) * scale;
        CHECK(ra.density()[i] == doctest::Approx(expect).epsilon(1e-9));
    }
}

TEST_CASE("resample_common: errors") {
    auto a = gaussian_dist(0.0, 1.0, -5.0, 5.0, 11, Unit::Nanometre);
    auto b = gaussian_dist(0.0, 1.0, -5.0, 5.0, 11, Unit::Picosecond);
    CHECK_THROWS_AS(resample_common(a, b), Error);
    auto c = gaussian_dist(0.0, 1.0, -5.0, 5.0, 11, Unit::Nanometre);
    auto d = gaussian_dist(20.0, 1.0, 15.0, 25.0, 11, Unit::Nanometre);
    try {
        resample_common(c, d);
        FAIL("expected NoOverlap");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoOverlap);
    }
}

TEST_CASE("resample_common preserves unit mass") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> value(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> va(64), vb(48);
        for (auto& x : va) x = value(rng) + 1e-6;
        for (auto& x : vb) x = value(rng) + 1e-6;
        auto a = normalize(make_dist(va, 0.0, 0.5));
        auto b = normalize(make_dist(vb, 3.1, 0.7));
        auto [ra, rb] = resample_common(a, b);
        CHECK(std::abs(ra.integral() - 1.0) < 1e-9);
        CHECK(std::abs(rb.integral() - 1.0) < 1e-9);
    }
}

TEST_CASE("fwhm: Gaussian closed form") {
    auto d = gaussian_dist(0.0, 10.0, -80.0, 80.0, 4001, Unit::Picosecond);
    const double expect = testutil::fwhm_of_sigma(10.0);  // 23.548 ps
    CHECK(fwhm(d) == doctest::Approx(expect).epsilon(5e-3));
    CHECK(expect == doctest::Approx(23.548).epsilon(1e-4));
}

TEST_CASE("fwhm: top-hat width") {
    // rectangular pulse of width 4 ns on a 0.1 ns grid
    std::vector<double> v(101, 0.0);
    for (std::size_t i = 30; i < 70; ++i) v[i] = 1.0;
    auto d = normalize(make_dist(v, 0.0, 0.1, Unit::Nanosecond));
    CHECK(fwhm(d) == doctest::Approx(4.0).epsilon(0.03));  // within one step
}

TEST_CASE("fwhm: monotone ramp has no crossing") {
    std::vector<double> v(50);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i + 1);
    try {
        fwhm(normalize(make_dist(v)));
        FAIL("expected NoCrossing");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoCrossing);
    }
}

TEST_CASE("fwhm error shrinks under grid refinement") {
    const double expect = testutil::fwhm_of_sigma(1.0);
    auto coarse = gaussian_dist(0.013, 1.0, -8.0, 8.0, 101);
    auto fine = gaussian_dist(0.013, 1.0, -8.0, 8.0, 201);
    const double err_coarse = std::abs(fwhm(coarse) - expect);
    const double err_fine = std::abs(fwhm(fine) - expect);
    CHECK(err_fine <= 0.6 * err_coarse + 1e-12);
}

TEST_CASE("peak_location: Gaussian peak and tie-breaks") {
    auto d = gaussian_dist(795.6, 0.2, 794.0, 797.0, 601, Unit::Nanometre);
    CHECK(peak_location(d) == doctest::Approx(795.6).epsilon(1e-5));

    // symmetric two-bump: report the smaller-axis peak
    std::vector<double> two{0, 1, 5, 1, 0, 1, 5, 1, 0};
    CHECK(peak_location(normalize(make_dist(two, 0.0, 1.0))) == doctest::Approx(2.0));

    // delta-like single bin lands exactly on the grid point
    std::vector<double> delta(21, 0.0);
    delta[13] = 3.0;
    CHECK(peak_location(normalize(make_dist(delta, -1.0, 0.5))) == -1.0 + 13 * 0.5);
}

TEST_CASE("mean_std: uniform density moments") {
    const std::size_t n = 2001;
    auto d = normalize(make_dist(std::vector<double>(n, 1.0), 0.0, 1.0 / (n - 1)));
    auto [mean, stdev] = mean_std(d);
    CHECK(mean == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(stdev == doctest::Approx(1.0 / std::sqrt(12.0)).epsilon(1e-3));
}

TEST_CASE("mean_std: single occupied bin and error path") {
    std::vector<double> v(11, 0.0);
    v[4] = 1.0;
    auto d = normalize(make_dist(v, 40.0, 0.25, Unit::Nanosecond));
    auto [mean, stdev] = mean_std(d);
    CHECK(mean == doctest::Approx(41.0).epsilon(1e-12));
    CHECK(stdev == doctest::Approx(0.0));

    auto raw = make_dist({1.0, 2.0, 3.0});
    try {
        mean_std(raw);
        FAIL("expected NotNormalized");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotNormalized);
    }
}

TEST_CASE("mean_std recovers the arrival statistics") {
    auto d = gaussian_dist(41.34, 0.075, 40.84, 41.84, 4096, Unit::Nanosecond);
    auto [mean, stdev] = mean_std(d);
    CHECK(mean == doctest::Approx(41.34).epsilon(0.01));
    CHECK(stdev == doctest::Approx(0.075).epsilon(0.01));
}

TEST_CASE("histogram_from_timetags: folding and conservation") {
    std::vector<double> same(5, 50.0);
    auto h = histogram_from_timetags(same, 200.0, 100);
    const std::size_t bin50 = 25;  // 50 ns / 2 ns bins
    CHECK(h.density()[bin50] > 0.0);
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (i != bin50) CHECK(h.density()[i] == 0.0);
    }

    std::vector<double> folded{10.0, 210.0, 410.0};
    auto hf = histogram_from_timetags(folded, 200.0, 200);
    CHECK(hf.density()[10] > 0.0);
    double total = 0.0;
    for (double v : hf.density()) total += v;
    CHECK(total == doctest::Approx(1.0 / hf.axis().step()).epsilon(1e-12));
}

TEST_CASE("timetag counts are conserved exactly") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> tag(0.0, 1000.0);
    std::vector<double> tags(4321);
    for (auto& t : tags) t = tag(rng);
    auto counts = timetag_counts(tags, 200.0, 64);
    double total = 0.0;
    for (double c : counts) total += c;
    CHECK(total == static_cast<double>(tags.size()));
}

TEST_CASE("histogram errors") {
    std::vector<double> empty;
    CHECK_THROWS_AS(histogram_from_timetags(empty, 200.0, 10), Error);
    std::vector<double> one{1.0};
    try {
        histogram_from_timetags(one, -5.0, 10);
        FAIL("expected NonPositivePeriod");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPositivePeriod);
    }
}

TEST_CASE("coarsen merges bins and conserves mass") {
    auto d = gaussian_dist(0.0, 1.0, -6.0, 6.0, 1024);
    for (std::size_t factor : {2ul, 4ul, 8ul, 7ul}) {
        auto c = coarsen(d, factor);
        CHECK(c.size() == (d.size() + factor - 1) / factor);
        CHECK(std::abs(c.integral() - 1.0) < 1e-9);
        CHECK(c.axis().step() == doctest::Approx(d.axis().step() * factor));
    }
}
