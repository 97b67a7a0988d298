#include "avdm/camera.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace avdm {

void VentralCamera::validate() const {
    if (rows < 1 || cols < 2)
        fail(ErrorCode::invalid_argument, "camera needs rows >= 1 and cols >= 2");
    if (!(inter_receptor_angle > 0.0))
        fail(ErrorCode::invalid_argument, "inter_receptor_angle must be > 0");
    if (field_extent() >= 180.0)
        fail(ErrorCode::invalid_argument, "ventral field must stay below 180 degrees");
}

namespace {

constexpr double kMarchStep = 0.01; // meters along the ray

// Signed clearance of the ray point at distance s: positive while above
// ground. sin_t/cos_t are the ray direction components.
double ray_clearance(const TerrainProfile& terrain, double x, double z, double sin_t,
                     double cos_t, double s) {
    return (z - s * cos_t) - terrain.height(x + s * sin_t);
}

} // namespace

RenderResult render_ventral_frame(const VentralCamera& camera, const TerrainProfile& terrain,
                                  double x, double z, double timestamp) {
    camera.validate();
    if (z <= terrain.height(x))
        fail(ErrorCode::below_terrain, "camera pose is below the terrain surface");

    RenderResult result;
    result.frame = Frame(camera.rows, camera.cols, timestamp);
    result.hit_x.resize(camera.cols);

    for (int j = 0; j < camera.cols; ++j) {
        const double theta = camera.view_angle_deg(j) * std::numbers::pi / 180.0;
        const double sin_t = std::sin(theta);
        const double cos_t = std::cos(theta);
        // The ray cannot hit before it descends to the highest terrain point.
        double s = std::max(0.0, (z - terrain.max_height()) / cos_t - kMarchStep);
        double prev_s = s;
        double prev_c = ray_clearance(terrain, x, z, sin_t, cos_t, s);
        double hit_s;
        while (true) {
            s += kMarchStep;
            const double c = ray_clearance(terrain, x, z, sin_t, cos_t, s);
            if (c <= 0.0) {
                // Linear refinement between the bracketing march points.
                const double frac = prev_c / (prev_c - c);
                hit_s = prev_s + frac * kMarchStep;
                break;
            }
            prev_s = s;
            prev_c = c;
        }
        const double ground_x = x + hit_s * sin_t;
        result.hit_x[j] = ground_x;
        if (!terrain.in_domain(ground_x))
            ++result.clamped_rays;
        const double value = terrain.texture_at(ground_x);
        for (int r = 0; r < camera.rows; ++r)
            result.frame.at(r, j) = value;
    }
    return result;
}

} // namespace avdm
