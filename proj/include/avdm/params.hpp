#pragma once

#include <cmath>
#include <string>

namespace avdm {

// Model parameters. Defaults are the published table values; dt and
// window_duration are simulation choices.
struct ModelParams {
    double tau = 0.08;   // detector delay (s)
    double alpha = 0.25; // balance weight of the mirrored half-detector
    double phi = 2.0;    // inter-receptor angle (deg)
    int m = 10;          // persistence depth (frames)
    double mu = 1.0;     // persistence decay rate
    double a_star = 48.84;
    double b_star = 1.0;
    double dt = 0.001;            // frame interval (s)
    double window_duration = 0.2; // response averaging window (s)

    // Envelope smoothing time constant applied to the rectified pathways
    // before the delay stage. Structural constant, not part of the key=value
    // parameter file.
    double pathway_smooth_tau = 0.5;

    int tau_steps() const { return static_cast<int>(std::lround(tau / dt)); }
    int window_steps() const { return static_cast<int>(std::lround(window_duration / dt)); }
    int warmup_frames() const { return m + tau_steps(); }

    void validate() const;
};

// Writes/reads the flat key=value file with keys
// tau, alpha, phi, m, mu, a_star, b_star, dt, window_duration.
void save_params(const ModelParams& p, const std::string& path);
ModelParams load_params(const std::string& path);

// Appends fitted coefficients (a_star, b_star lines plus an rms comment) to an
// existing parameter file; load_params keeps the last value of repeated keys.
void append_fit(const std::string& path, double a_star, double b_star, double rms_error);

// Control-loop constants. rho, k and g default to the published values; the
// bee mass and release state are simulation choices.
struct ControlParams {
    double rho = 0.04;  // lift gain (N per deg/s of error)
    double k = 0.1;     // linear air resistance (N s/m)
    double g = 9.81;    // gravity (m/s^2)
    double mass = 0.01; // bee mass (kg)
    double lift_floor = 0.0;       // no downward thrust
    bool literal_lift_law = false; // T = rho*eps instead of m*g + rho*eps
    double omega_set = std::nan(""); // deg/s, measured by the preset phase

    void validate() const;
};

} // namespace avdm
