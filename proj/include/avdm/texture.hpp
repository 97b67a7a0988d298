#pragma once

#include <optional>

#include "avdm/frame.hpp"

namespace avdm {

// Output of the texture estimation layer: Michelson contrast of the frame,
// mean per-row count of binary transitions along the motion axis, and the
// spatial period implied by that count (two boundaries per cycle).
struct TextureEstimate {
    double contrast = 0.0;
    double boundary_count = 0.0;
    std::optional<double> spatial_period; // deg/cycle; empty when undefined

    bool zero_contrast() const { return contrast <= 0.0; }
    bool usable() const { return !zero_contrast() && spatial_period.has_value(); }
};

// Binarizes the frame at (I_max + I_min)/2 and counts interior transitions
// per row. I_max == I_min yields the zero-contrast estimate with no period.
TextureEstimate estimate_texture(const Frame& frame, double phi_deg);

} // namespace avdm
