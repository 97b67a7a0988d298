#pragma once

#include <span>
#include <string>
#include <vector>

#include "avdm/params.hpp"
#include "avdm/trials.hpp"

namespace avdm {

struct CalibrationSample {
    double omega = 0.0;    // true angular velocity (deg/s)
    double lambda = 0.0;   // true spatial period (deg)
    double contrast = 0.0; // true grating contrast
    double response = 0.0; // steady-state pipeline response R
};

struct CalibrationResult {
    double a_star = 0.0;
    double b_star = 1.0;
    double rms_error = 0.0; // deg/s over the fitted samples
    int iterations = 0;
    bool converged = false;
};

struct CalibrationGrid {
    std::vector<double> omegas;    // default 50..700 step 50
    std::vector<double> lambdas;   // default {19, 38, 54, 72}
    std::vector<double> contrasts; // default {0.5, 1.0}

    static CalibrationGrid defaults();
};

struct SkippedSample {
    double omega, lambda, contrast;
    std::string reason;
};

// Runs the pipeline on a grating for every grid point and records the steady
// response. Grid points whose steady state never decodes are skipped and
// reported. Points are independent; `threads` > 1 evaluates them in parallel
// with deterministic output order.
std::vector<CalibrationSample> generate_calibration_set(
    const CalibrationGrid& grid, const ModelParams& params, const TrialConfig& trial = {},
    int threads = 1, std::vector<SkippedSample>* skipped = nullptr);

// Alternate iteration for (a*, b*): closed-form least squares for a at fixed
// b, golden-section over b in [0.25, 4] on the profiled residual. Requires at
// least two distinct lambda values.
CalibrationResult fit_decoder(std::span<const CalibrationSample> samples);

struct FitEvaluation {
    std::vector<double> rel_errors; // |omega_hat - omega| / omega per sample
    double max_rel = 0.0;
    double rms_rel = 0.0;
};

FitEvaluation evaluate_fit(const CalibrationResult& result,
                           std::span<const CalibrationSample> samples);

// Decoded estimate for one sample under fitted coefficients.
double predict_omega(const CalibrationResult& result, const CalibrationSample& sample);

} // namespace avdm
