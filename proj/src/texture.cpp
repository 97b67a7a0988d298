#include "avdm/texture.hpp"

#include <algorithm>

namespace avdm {

TextureEstimate estimate_texture(const Frame& frame, double phi_deg) {
    frame.validate();
    if (!(phi_deg > 0.0))
        fail(ErrorCode::invalid_argument, "phi must be > 0");

    const auto [min_it, max_it] =
        std::minmax_element(frame.luminance.begin(), frame.luminance.end());
    const double i_min = *min_it;
    const double i_max = *max_it;

    TextureEstimate estimate;
    if (!(i_max > i_min)) {
        // Uniform frame: zero contrast, no period.
        return estimate;
    }
    estimate.contrast = (i_max - i_min) / (i_max + i_min);

    // Binarize at the midpoint and count interior transitions along the
    // motion axis, averaged over rows.
    const double threshold = 0.5 * (i_max + i_min);
    long transitions = 0;
    for (int r = 0; r < frame.rows; ++r) {
        bool prev = frame.at(r, 0) > threshold;
        for (int c = 1; c < frame.cols; ++c) {
            const bool cur = frame.at(r, c) > threshold;
            if (cur != prev) ++transitions;
            prev = cur;
        }
    }
    estimate.boundary_count = static_cast<double>(transitions) / frame.rows;

    if (estimate.boundary_count >= 1.0) {
        // Two boundaries per cycle over the angular field extent.
        const double field = (frame.cols - 1) * phi_deg;
        estimate.spatial_period = 2.0 * field / estimate.boundary_count;
    }
    return estimate;
}

} // namespace avdm
