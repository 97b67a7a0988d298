#include <doctest.h>

#include <cmath>
#include <numbers>

#include "avdm/camera.hpp"

using namespace avdm;

TEST_CASE("nadir ray samples the texture directly below") {
    const auto terrain = make_flat_terrain();
    VentralCamera camera;
    camera.rows = 1;
    camera.cols = 3;
    camera.inter_receptor_angle = 2.0;
    const auto result = render_ventral_frame(camera, terrain, 5.0, 10.0);
    CHECK(result.hit_x[1] == doctest::Approx(5.0).epsilon(1e-6)); // center column
    CHECK(result.clamped_rays == 0);
}

TEST_CASE("45 degree ray lands one altitude ahead") {
    const auto terrain = make_flat_terrain();
    VentralCamera camera;
    camera.rows = 1;
    camera.cols = 3;
    camera.inter_receptor_angle = 45.0;
    const auto result = render_ventral_frame(camera, terrain, 0.0, 3.0);
    CHECK(result.hit_x[0] == doctest::Approx(3.0).epsilon(1e-4));  // forward 45 deg
    CHECK(result.hit_x[2] == doctest::Approx(-3.0).epsilon(1e-4)); // rearward 45 deg
}

TEST_CASE("column index grows rearward so forward flight is preferred motion") {
    const auto terrain = make_flat_terrain();
    VentralCamera camera;
    const auto result = render_ventral_frame(camera, terrain, 0.0, 6.0);
    for (int j = 0; j + 1 < camera.cols; ++j)
        CHECK(result.hit_x[j] > result.hit_x[j + 1]);
}

TEST_CASE("apparent angular period near nadir is Lambda/d radians") {
    auto terrain = make_flat_terrain();
    GratingTexture tex;
    tex.period = 1.0; // meters
    terrain.set_texture(tex);
    VentralCamera camera; // 46 columns, 2 deg spacing
    const double altitude = 2.0;
    const auto result = render_ventral_frame(camera, terrain, 5.0, altitude);
    // Ground distance swept per receptor step, for the 3 receptors around nadir.
    const double phi_rad = 2.0 * std::numbers::pi / 180.0;
    const int center = camera.cols / 2;
    for (int j = center - 2; j < center + 1; ++j) {
        const double ground_per_receptor = std::abs(result.hit_x[j] - result.hit_x[j + 1]);
        const double apparent_period_deg =
            tex.period / (ground_per_receptor / phi_rad) * 180.0 / std::numbers::pi;
        const double expected = tex.period / altitude * 180.0 / std::numbers::pi; // 28.65
        CHECK(apparent_period_deg == doctest::Approx(expected).epsilon(0.05));
    }
}

TEST_CASE("rows are identical over any terrain slice") {
    const auto terrain = terrain_library("mountain", 3);
    VentralCamera camera;
    const auto result = render_ventral_frame(camera, terrain, 12.0, 8.0);
    for (int r = 1; r < camera.rows; ++r)
        for (int c = 0; c < camera.cols; ++c)
            CHECK(result.frame.at(r, c) == result.frame.at(0, c));
    CHECK_NOTHROW(result.frame.validate());
}

TEST_CASE("rays leaving the terrain domain clamp and are flagged") {
    const TerrainProfile short_terrain({-1.0, 1.0}, {0.0, 0.0}, GratingTexture{});
    VentralCamera camera;
    const auto result = render_ventral_frame(camera, short_terrain, 0.0, 5.0);
    CHECK(result.clamped_rays > 0);
    // Clamped rays sample the edge texture value.
    CHECK(result.frame.at(0, 0) ==
          doctest::Approx(short_terrain.texture_at(1.0)).epsilon(1e-12));
}

TEST_CASE("pose below the terrain is an error") {
    const auto terrain = terrain_library("mountain", 1);
    VentralCamera camera;
    CHECK_THROWS_AS(render_ventral_frame(camera, terrain, 30.0, 0.0), Error);
}

TEST_CASE("ray march finds slopes, not just flat ground") {
    // A ramp rising toward the bee: forward rays must intersect early.
    const TerrainProfile ramp({-50.0, 0.0, 20.0}, {0.0, 0.0, 10.0}, GratingTexture{});
    VentralCamera camera;
    const auto result = render_ventral_frame(camera, ramp, 0.0, 4.0);
    // Forward-most ray at +45 deg: intersection of z = 4 - s/sqrt(2) with the
    // ramp h = x/2 -> ground_x = 8/1.5 = 5.333.
    CHECK(result.hit_x[0] == doctest::Approx(8.0 / 1.5).epsilon(1e-3));
    CHECK_NOTHROW(result.frame.validate());
}

TEST_CASE("camera validation") {
    VentralCamera camera;
    camera.cols = 1;
    CHECK_THROWS_AS(camera.validate(), Error);
    camera.cols = 46;
    camera.inter_receptor_angle = 0.0;
    CHECK_THROWS_AS(camera.validate(), Error);
    camera.inter_receptor_angle = 5.0; // 225 deg field
    CHECK_THROWS_AS(camera.validate(), Error);
}
