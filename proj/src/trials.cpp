#include "avdm/trials.hpp"

namespace avdm {

TrialResult run_grating_trial(const ModelParams& params, const GratingSpec& spec,
                              const TrialConfig& config) {
    if (config.duration <= config.discard)
        fail(ErrorCode::invalid_argument, "trial duration must exceed the discard time");

    Pipeline pipeline(params, config.rows, config.cols);
    const long n_frames = std::lround(config.duration / params.dt);
    const long first_kept = std::lround(config.discard / params.dt);

    TrialResult result;
    double sum_omega = 0.0, sum_r = 0.0, sum_c = 0.0, sum_lambda = 0.0;
    long r_frames = 0;
    for (long n = 0; n < n_frames; ++n) {
        const double t = static_cast<double>(n) * params.dt;
        const PipelineOutput out = pipeline.process(
            generate_grating_frame(spec, config.rows, config.cols, t));
        if (n < first_kept) continue;
        if (out.response_valid) {
            sum_r += out.response;
            ++r_frames;
        }
        if (out.decode_valid) {
            sum_omega += out.omega_hat;
            sum_c += out.texture.contrast;
            sum_lambda += *out.texture.spatial_period;
            ++result.valid_frames;
        }
    }
    if (r_frames > 0) result.response = sum_r / static_cast<double>(r_frames);
    if (result.valid_frames > 0) {
        const double n = static_cast<double>(result.valid_frames);
        result.omega_hat = sum_omega / n;
        result.contrast = sum_c / n;
        result.spatial_period = sum_lambda / n;
    }
    return result;
}

double run_hr_trial(const ModelParams& params, const GratingSpec& spec,
                    const TrialConfig& config) {
    if (config.duration <= config.discard)
        fail(ErrorCode::invalid_argument, "trial duration must exceed the discard time");

    HrReference hr(params.tau, params.dt, config.rows, config.cols, params.window_duration);
    const long n_frames = std::lround(config.duration / params.dt);
    const long first_kept = std::lround(config.discard / params.dt);

    double sum = 0.0;
    long count = 0;
    for (long n = 0; n < n_frames; ++n) {
        const double t = static_cast<double>(n) * params.dt;
        const auto response =
            hr.process(generate_grating_frame(spec, config.rows, config.cols, t));
        if (n < first_kept || !response) continue;
        sum += *response;
        ++count;
    }
    if (count == 0)
        fail(ErrorCode::decode_unavailable, "HR trial produced no windowed response");
    return sum / static_cast<double>(count);
}

} // namespace avdm
