#include "avdm/grating.hpp"

#include <cmath>
#include <numbers>

namespace avdm {

void GratingSpec::validate() const {
    if (!(spatial_period > 0.0))
        fail(ErrorCode::invalid_argument, "grating spatial_period must be > 0");
    if (!(contrast > 0.0 && contrast <= 1.0))
        fail(ErrorCode::invalid_argument, "grating contrast must lie in (0,1]");
    if (!(inter_receptor_angle > 0.0))
        fail(ErrorCode::invalid_argument, "inter_receptor_angle must be > 0");
    if (!std::isfinite(angular_velocity))
        fail(ErrorCode::invalid_argument, "angular_velocity must be finite");
}

Frame generate_grating_frame(const GratingSpec& spec, int rows, int cols, double t) {
    spec.validate();
    if (rows < 1 || cols < 2)
        fail(ErrorCode::invalid_argument, "grating grid needs rows >= 1 and cols >= 2");
    if (t < 0.0)
        fail(ErrorCode::invalid_argument, "grating time must be >= 0");

    Frame frame(rows, cols, t);
    const double inv_c = 1.0 / spec.contrast;
    const double norm = inv_c + 1.0;
    for (int j = 0; j < cols; ++j) {
        // Column j corresponds to receptor y = j+1; the phase form
        // 2*pi*(omega*t - phi*j)/lambda has no omega in a denominator.
        const double phase = 2.0 * std::numbers::pi *
                             (spec.angular_velocity * t - spec.inter_receptor_angle * j) /
                             spec.spatial_period;
        double s = std::sin(phase);
        if (spec.waveform == Waveform::square)
            s = (s > 0.0) ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
        const double value = (s + inv_c) / norm;
        for (int r = 0; r < rows; ++r)
            frame.at(r, j) = value;
    }
    return frame;
}

} // namespace avdm
