#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "avdm/calibration.hpp"
#include "avdm/pipeline.hpp"
#include "avdm/trials.hpp"

using namespace avdm;

namespace {

TextureEstimate texture(double contrast, double period) {
    TextureEstimate t;
    t.contrast = contrast;
    t.boundary_count = 4.0;
    t.spatial_period = period;
    return t;
}

GratingSpec grating(double lambda, double omega, double contrast = 1.0) {
    GratingSpec s;
    s.spatial_period = lambda;
    s.angular_velocity = omega;
    s.contrast = contrast;
    s.inter_receptor_angle = 2.0;
    return s;
}

} // namespace

TEST_CASE("decode: zero response decodes to zero") {
    ModelParams params;
    const auto d = decode_angular_velocity(0.0, texture(1.0, 38.0), params);
    CHECK(d.magnitude == 0.0);
    CHECK(d.direction == 0);
}

TEST_CASE("decode: table arithmetic") {
    ModelParams params; // a* = 48.84, b* = 1
    const auto d = decode_angular_velocity(0.25, texture(1.0, 38.0), params);
    CHECK(d.magnitude == doctest::Approx(927.96).epsilon(1e-12));
    CHECK(d.direction == 1);
}

TEST_CASE("decode: negative response clamps to zero with reverse flag") {
    ModelParams params;
    const auto d = decode_angular_velocity(-0.1, texture(1.0, 38.0), params);
    CHECK(d.magnitude == 0.0);
    CHECK(d.direction == -1);
}

TEST_CASE("decode: unusable texture raises decode_unavailable") {
    ModelParams params;
    CHECK_THROWS_AS(decode_angular_velocity(0.2, texture(0.0, 38.0), params), Error);
    TextureEstimate no_period;
    no_period.contrast = 0.5;
    CHECK_THROWS_AS(decode_angular_velocity(0.2, no_period, params), Error);
}

TEST_CASE("decode monotonicity in R and contrast") {
    ModelParams params;
    double prev = -1.0;
    for (double r : {0.0, 0.01, 0.05, 0.1, 0.4, 1.0}) {
        const double w = decode_angular_velocity(r, texture(0.6, 38.0), params).magnitude;
        CHECK(w > prev);
        prev = w;
    }
    prev = 1e300;
    for (double c : {0.1, 0.3, 0.5, 0.8, 1.0}) {
        const double w = decode_angular_velocity(0.2, texture(c, 38.0), params).magnitude;
        CHECK(w < prev);
        prev = w;
    }
}

TEST_CASE("warm-up safety: first decode exactly when all buffers fill") {
    ModelParams params;
    params.dt = 0.001;
    Pipeline pipeline(params, 1, 46);
    const long expected = params.warmup_frames() + params.window_steps();
    const auto spec = grating(38.0, 300.0);
    for (long n = 1; n <= expected + 5; ++n) {
        const auto out = pipeline.process(
            generate_grating_frame(spec, 1, 46, (n - 1) * params.dt));
        if (n < expected) {
            CHECK_FALSE(out.decode_valid);
            CHECK_FALSE(out.response_valid);
        } else {
            CHECK(out.decode_valid);
            CHECK(out.response_valid);
        }
    }
}

TEST_CASE("stationary grating decodes to zero") {
    ModelParams params;
    Pipeline pipeline(params, 2, 46);
    const auto spec = grating(38.0, 0.0);
    PipelineOutput out;
    for (long n = 0; n < 600; ++n)
        out = pipeline.process(generate_grating_frame(spec, 2, 46, n * params.dt));
    REQUIRE(out.decode_valid);
    CHECK(std::abs(out.omega_hat) < 5.0);
    CHECK(out.response == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("uniform stream keeps emitting decode-unavailable") {
    ModelParams params;
    Pipeline pipeline(params, 1, 46);
    Frame f(1, 46);
    for (auto& v : f.luminance) v = 0.4;
    for (long n = 0; n < 500; ++n) {
        const auto out = pipeline.process(f);
        CHECK_FALSE(out.decode_valid);
    }
}

TEST_CASE("dimension change mid-stream is a hard error") {
    ModelParams params;
    Pipeline pipeline(params, 1, 46);
    pipeline.process(generate_grating_frame(grating(38.0, 300.0), 1, 46, 0.0));
    CHECK_THROWS_AS(pipeline.process(generate_grating_frame(grating(38.0, 300.0), 2, 46,
                                                            0.001)),
                    Error);
}

TEST_CASE("mirror antisymmetry of the field response at alpha = 1") {
    ModelParams params;
    params.alpha = 1.0;
    const int cols = 24;
    Pipeline forward(params, 1, cols);
    Pipeline mirrored(params, 1, cols);

    std::mt19937 rng(19);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double fwd = 0.0, mir = 0.0;
    std::vector<double> row(cols);
    // Smooth random stimulus: random walk per column, clamped to [0,1].
    for (double& v : row) v = dist(rng);
    for (long n = 0; n < 500; ++n) {
        for (double& v : row)
            v = std::clamp(v + 0.05 * (dist(rng) - 0.5), 0.0, 1.0);
        Frame f(1, cols), g(1, cols);
        for (int j = 0; j < cols; ++j) {
            f.at(0, j) = row[j];
            g.at(0, j) = row[cols - 1 - j];
        }
        fwd = forward.process(f).response;
        mir = mirrored.process(g).response;
    }
    CHECK(mir == doctest::Approx(-fwd).epsilon(1e-9));
}

TEST_CASE("windowed response is stationary across disjoint windows") {
    ModelParams params;
    Pipeline pipeline(params, 1, 46);
    const auto spec = grating(38.0, 300.0);
    std::vector<double> window_means;
    const long warmup = params.warmup_frames() + params.window_steps();
    const long settle = std::lround(3.0 * params.pathway_smooth_tau / params.dt);
    for (long n = 0; n < warmup + settle + 10 * params.window_steps(); ++n) {
        const auto out = pipeline.process(
            generate_grating_frame(spec, 1, 46, n * params.dt));
        const long k = n - (warmup + settle);
        if (k >= 0 && k % params.window_steps() == 0)
            window_means.push_back(out.response);
    }
    REQUIRE(window_means.size() == 10);
    double mean = 0.0;
    for (double v : window_means) mean += v;
    mean /= window_means.size();
    double var = 0.0;
    for (double v : window_means) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / window_means.size());
    CHECK(sd < 0.10 * mean);
}

TEST_CASE("end-to-end decode lands near truth after a small calibration") {
    ModelParams params;
    CalibrationGrid grid;
    grid.omegas = {100.0, 200.0, 300.0, 400.0, 500.0, 600.0};
    grid.lambdas = {19.0, 38.0, 72.0};
    grid.contrasts = {1.0};
    const auto samples = generate_calibration_set(grid, params, {}, 4);
    const auto fit = fit_decoder(samples);
    ModelParams fitted = params;
    fitted.a_star = fit.a_star;
    fitted.b_star = fit.b_star;
    const auto trial = run_grating_trial(fitted, grating(38.0, 300.0), {});
    CHECK(trial.omega_hat > 255.0);
    CHECK(trial.omega_hat < 345.0);
}

TEST_CASE("HR reference: stationary stimulus gives zero") {
    ModelParams params;
    HrReference hr(params.tau, params.dt, 1, 46, params.window_duration);
    const auto spec = grating(38.0, 0.0);
    std::optional<double> response;
    for (long n = 0; n < 400; ++n)
        response = hr.process(generate_grating_frame(spec, 1, 46, n * params.dt));
    REQUIRE(response.has_value());
    CHECK(std::abs(*response) < 1e-12);
}

TEST_CASE("HR reference: unimodal interior peak, scaling with lambda") {
    ModelParams params;
    TrialConfig config;
    config.rows = 1;
    config.duration = 5.0;
    config.discard = 1.0;
    auto peak = [&](double lambda) {
        double best_w = 0.0, best_r = -1e300;
        std::vector<double> curve;
        for (double w = 10.0; w <= 300.0 + 1e-9; w += 10.0) {
            const double r = run_hr_trial(params, grating(lambda, w), config);
            curve.push_back(r);
            if (r > best_r) {
                best_r = r;
                best_w = w;
            }
        }
        // Unimodal with an interior peak: rises then falls, modulo the small
        // ripple left by averaging a finite number of grating periods.
        const size_t peak_idx = static_cast<size_t>(best_w / 10.0) - 1;
        const double ripple = 1e-3 * best_r;
        CHECK(peak_idx > 0);
        CHECK(peak_idx + 1 < curve.size());
        for (size_t i = 0; i + 1 < curve.size(); ++i) {
            if (i + 1 <= peak_idx)
                CHECK(curve[i + 1] >= curve[i] - ripple);
            else
                CHECK(curve[i + 1] <= curve[i] + ripple);
        }
        return best_w;
    };
    const double p19 = peak(19.0);
    const double p38 = peak(38.0);
    // Constant temporal-frequency ridge: peaks scale with lambda.
    CHECK(std::abs(p38 - 2.0 * p19) <= 10.0 + 1e-9);
}
