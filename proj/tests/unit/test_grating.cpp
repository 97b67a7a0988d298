#include <doctest.h>

#include <cmath>
#include <random>

#include "avdm/grating.hpp"

using namespace avdm;

namespace {

GratingSpec spec(double lambda, double omega, double contrast,
                 Waveform waveform = Waveform::sine) {
    GratingSpec s;
    s.spatial_period = lambda;
    s.angular_velocity = omega;
    s.contrast = contrast;
    s.inter_receptor_angle = 2.0;
    s.waveform = waveform;
    return s;
}

double frame_michelson(const Frame& f) {
    double lo = 1e300, hi = -1e300;
    for (double v : f.luminance) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return (hi - lo) / (hi + lo);
}

} // namespace

TEST_CASE("first receptor at t=0 sits at the midpoint for C=1") {
    const Frame f = generate_grating_frame(spec(38.0, 300.0, 1.0), 2, 46, 0.0);
    CHECK(f.at(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("closed-form extremes: I_max = 1, I_min = (1-C)/(1+C)") {
    // lambda = 8 deg at phi = 2 deg puts receptors exactly on the sine
    // extremes, so the sampled extremes match the continuous ones.
    for (double contrast : {0.2, 0.5, 1.0}) {
        const Frame f = generate_grating_frame(spec(8.0, 300.0, contrast), 1, 46, 0.0);
        double lo = 1e300, hi = -1e300;
        for (double v : f.luminance) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(lo == doctest::Approx((1.0 - contrast) / (1.0 + contrast)).epsilon(1e-12));
    }
    const Frame f = generate_grating_frame(spec(8.0, 100.0, 0.5), 1, 46, 0.0);
    CHECK(frame_michelson(f) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("neighbour column equals the same column one transit earlier") {
    // Phase-shift identity of the grating: I(x, y+1, t) = I(x, y, t - phi/omega).
    const auto s = spec(38.0, 300.0, 1.0);
    const double transit = s.inter_receptor_angle / s.angular_velocity;
    std::mt19937 rng(42);
    std::uniform_real_distribution<double> pick_t(transit, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const double t = pick_t(rng);
        const Frame now = generate_grating_frame(s, 1, 46, t);
        const Frame earlier = generate_grating_frame(s, 1, 46, t - transit);
        for (int j = 0; j + 1 < 46; ++j)
            CHECK(now.at(0, j + 1) == doctest::Approx(earlier.at(0, j)).epsilon(1e-9));
    }
}

TEST_CASE("translation identity: time shift equals phase advance") {
    const auto s = spec(54.0, 240.0, 0.7);
    const double dt = 0.0137;
    const Frame shifted = generate_grating_frame(s, 1, 46, 0.31 + dt);
    const double inv_c = 1.0 / s.contrast;
    for (int j = 0; j < 46; ++j) {
        const double base_phase =
            2.0 * M_PI * (s.angular_velocity * 0.31 - s.inter_receptor_angle * j) /
            s.spatial_period;
        const double advance = 2.0 * M_PI * s.angular_velocity * dt / s.spatial_period;
        const double expected = (std::sin(base_phase + advance) + inv_c) / (inv_c + 1.0);
        CHECK(shifted.at(0, j) == doctest::Approx(expected).epsilon(1e-9));
    }
}

TEST_CASE("omega = 0 produces a stationary, finite grating") {
    const auto s = spec(38.0, 0.0, 1.0);
    const Frame a = generate_grating_frame(s, 1, 46, 0.0);
    const Frame b = generate_grating_frame(s, 1, 46, 7.5);
    for (int j = 0; j < 46; ++j) {
        CHECK(std::isfinite(a.at(0, j)));
        CHECK(a.at(0, j) == doctest::Approx(b.at(0, j)).epsilon(1e-12));
    }
}

TEST_CASE("square waveform is two-valued with Michelson contrast C") {
    const Frame f = generate_grating_frame(spec(24.0, 100.0, 0.5, Waveform::square), 1, 46,
                                           0.013);
    const double low = (1.0 - 0.5) / (1.0 + 0.5);
    for (double v : f.luminance) {
        const bool is_level = std::abs(v - 1.0) < 1e-12 || std::abs(v - low) < 1e-12 ||
                              std::abs(v - (0.5 * (1.0 + low))) < 1e-12;
        CHECK(is_level);
    }
    CHECK(frame_michelson(f) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("samples stay in [0,1] across random specs") {
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> lambda(5.0, 100.0);
    std::uniform_real_distribution<double> omega(-900.0, 900.0);
    std::uniform_real_distribution<double> contrast(0.05, 1.0);
    std::uniform_real_distribution<double> t(0.0, 3.0);
    for (int i = 0; i < 200; ++i) {
        const auto s = spec(lambda(rng), omega(rng), contrast(rng),
                            i % 2 ? Waveform::square : Waveform::sine);
        const Frame f = generate_grating_frame(s, 2, 30, t(rng));
        CHECK_NOTHROW(f.validate());
    }
}

TEST_CASE("invalid grating specs are rejected") {
    CHECK_THROWS_AS(generate_grating_frame(spec(38.0, 300.0, 0.0), 1, 46, 0.0), Error);
    CHECK_THROWS_AS(generate_grating_frame(spec(38.0, 300.0, 1.5), 1, 46, 0.0), Error);
    CHECK_THROWS_AS(generate_grating_frame(spec(0.0, 300.0, 1.0), 1, 46, 0.0), Error);
    CHECK_THROWS_AS(generate_grating_frame(spec(38.0, 300.0, 1.0), 1, 1, 0.0), Error);
    CHECK_THROWS_AS(generate_grating_frame(spec(38.0, 300.0, 1.0), 0, 46, 0.0), Error);
    CHECK_THROWS_AS(generate_grating_frame(spec(38.0, 300.0, 1.0), 1, 46, -0.1), Error);
}
