#pragma once

#include "avdm/frame.hpp"

namespace avdm {

enum class Waveform { sine, square };

// Moving-grating stimulus description. spatial_period and phi are in degrees,
// angular_velocity in degrees/second, contrast in (0,1].
struct GratingSpec {
    double spatial_period = 38.0;
    double angular_velocity = 300.0;
    double contrast = 1.0;
    double inter_receptor_angle = 2.0;
    Waveform waveform = Waveform::sine;

    void validate() const;
};

// Samples the grating at time t on a rows x cols receptor grid. All rows are
// identical; column j sees phase 2*pi*(omega*t - phi*j)/lambda, which stays
// finite at omega = 0.
Frame generate_grating_frame(const GratingSpec& spec, int rows, int cols, double t);

} // namespace avdm
