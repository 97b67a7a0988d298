#pragma once

#include <vector>

#include "avdm/frame.hpp"
#include "avdm/terrain.hpp"

namespace avdm {

// Downward-looking receptor fan in the flight (x-z) plane. Column index grows
// rearward: column 0 looks furthest ahead, so forward flight moves the image
// toward higher columns (the detectors' preferred direction). Cross-axis rows
// are replicated.
struct VentralCamera {
    int rows = 4;
    int cols = 46;
    double inter_receptor_angle = 2.0; // deg, matches the model's phi

    double field_extent() const { return (cols - 1) * inter_receptor_angle; }
    // Viewing angle from nadir of column j, positive toward flight direction.
    double view_angle_deg(int col) const {
        return (0.5 * (cols - 1) - col) * inter_receptor_angle;
    }

    void validate() const;
};

struct RenderResult {
    Frame frame;
    std::vector<double> hit_x; // ground intersection per column
    int clamped_rays = 0;      // rays whose hit fell outside the texture domain
};

// Casts one ray per column from pose (x, z), marching the piecewise-linear
// terrain at 0.01 m with a final linear refinement. Throws below_terrain when
// z <= terrain height at the pose.
RenderResult render_ventral_frame(const VentralCamera& camera, const TerrainProfile& terrain,
                                  double x, double z, double timestamp = 0.0);

} // namespace avdm
