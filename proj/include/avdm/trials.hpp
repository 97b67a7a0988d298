#pragma once

#include "avdm/grating.hpp"
#include "avdm/params.hpp"
#include "avdm/pipeline.hpp"

namespace avdm {

// Steady-state statistics of one pipeline run over a moving grating. Values
// are means over the frames after `discard` seconds (which covers warm-up and
// the envelope-filter transient).
struct TrialResult {
    double omega_hat = 0.0;      // mean decoded magnitude (deg/s)
    double response = 0.0;       // mean windowed detector response
    double contrast = 0.0;       // mean estimated contrast
    double spatial_period = 0.0; // mean estimated spatial period (deg)
    int valid_frames = 0;        // frames with a valid decode in the average
};

struct TrialConfig {
    int rows = 4;
    int cols = 46;
    double duration = 4.0; // seconds
    double discard = 2.0;  // seconds dropped before averaging
};

TrialResult run_grating_trial(const ModelParams& params, const GratingSpec& spec,
                              const TrialConfig& config = {});

// Same stimulus protocol for the HR reference; returns the steady mean of the
// windowed response.
double run_hr_trial(const ModelParams& params, const GratingSpec& spec,
                    const TrialConfig& config = {});

} // namespace avdm
