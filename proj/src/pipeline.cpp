#include "avdm/pipeline.hpp"

#include <cmath>

namespace avdm {

void ModelParams::validate() const {
    if (!(tau > 0.0) || !(dt > 0.0))
        fail(ErrorCode::invalid_argument, "tau and dt must be > 0");
    if (tau_steps() < 1)
        fail(ErrorCode::invalid_argument, "tau must be at least one frame interval");
    if (window_steps() < 1)
        fail(ErrorCode::invalid_argument, "window_duration must be at least one frame");
    if (m < 0)
        fail(ErrorCode::invalid_argument, "persistence depth m must be >= 0");
    if (!(phi > 0.0))
        fail(ErrorCode::invalid_argument, "phi must be > 0");
    if (!(alpha >= 0.0))
        fail(ErrorCode::invalid_argument, "alpha must be >= 0");
}

DecodedVelocity decode_angular_velocity(double response, const TextureEstimate& texture,
                                        const ModelParams& params) {
    if (texture.zero_contrast())
        fail(ErrorCode::decode_unavailable, "texture has zero contrast");
    if (!texture.spatial_period.has_value())
        fail(ErrorCode::decode_unavailable, "texture period undefined");

    DecodedVelocity decoded;
    decoded.direction = response > 0.0 ? 1 : (response < 0.0 ? -1 : 0);
    const double c_hat = texture.contrast;
    const double contrast_factor = (1.0 + c_hat) / (2.0 * c_hat);
    decoded.magnitude = params.a_star * std::pow(*texture.spatial_period, params.b_star) *
                        contrast_factor * std::sqrt(std::max(response, 0.0));
    return decoded;
}

Pipeline::Pipeline(const ModelParams& params, int rows, int cols)
    : params_(params),
      rows_(rows),
      cols_(cols),
      lamina_(rows, cols, params.m, params.mu),
      on_envelope_(params.pathway_smooth_tau, params.dt),
      off_envelope_(params.pathway_smooth_tau, params.dt),
      buffers_(params.tau_steps(), params.alpha),
      accumulator_(params.window_steps()),
      contrast_window_(params.window_steps()),
      boundary_window_(params.window_steps()) {
    params_.validate();
}

PipelineOutput Pipeline::process(const Frame& frame) {
    if (frame.rows != rows_ || frame.cols != cols_)
        fail(ErrorCode::dimension_mismatch, "frame dimensions changed mid-stream");
    ++frames_seen_;

    PipelineOutput out;
    out.frame_texture = estimate_texture(frame, params_.phi);
    contrast_window_.push(out.frame_texture.contrast);
    boundary_window_.push(out.frame_texture.boundary_count);

    // Windowed texture: period recomputed from the windowed boundary count,
    // which smooths the per-frame quantization of moving patterns.
    out.texture.contrast = contrast_window_.mean();
    out.texture.boundary_count = boundary_window_.mean();
    if (out.texture.boundary_count >= 1.0 && out.texture.contrast > 0.0) {
        const double field = (cols_ - 1) * params_.phi;
        out.texture.spatial_period = 2.0 * field / out.texture.boundary_count;
    }

    const Field p = lamina_.step(frame);
    auto [p_on, p_off] = split_on_off(p);
    buffers_.push(on_envelope_.apply(p_on), off_envelope_.apply(p_off));

    // First m + tau_steps frames are warm-up: persistence and delay buffers
    // must both be full before detector output counts.
    if (frames_seen_ > params_.warmup_frames() && buffers_.ready()) {
        out.detector_valid = true;
        accumulator_.push(buffers_.detector_field());
    }

    if (accumulator_.has_response()) {
        out.response_valid = true;
        out.response = accumulator_.response();
        if (out.texture.usable()) {
            const DecodedVelocity decoded =
                decode_angular_velocity(out.response, out.texture, params_);
            out.omega_hat = decoded.magnitude;
            out.direction = decoded.direction;
            out.decode_valid = true;
        }
    }
    return out;
}

void Pipeline::reset() {
    frames_seen_ = 0;
    lamina_.reset();
    on_envelope_.reset();
    off_envelope_.reset();
    buffers_.reset();
    accumulator_.reset();
    contrast_window_.reset();
    boundary_window_.reset();
}

HrReference::HrReference(double tau, double dt, int rows, int cols, double window_duration)
    : beta_(1.0 - std::exp(-dt / tau)),
      rows_(rows),
      cols_(cols),
      window_(static_cast<int>(std::lround(window_duration / dt))) {
    if (!(tau > 0.0) || !(dt > 0.0))
        fail(ErrorCode::invalid_argument, "HR reference needs tau > 0 and dt > 0");
}

std::optional<double> HrReference::process(const Frame& frame) {
    if (frame.rows != rows_ || frame.cols != cols_)
        fail(ErrorCode::dimension_mismatch, "frame dimensions changed mid-stream");
    if (!primed_) {
        lowpass_ = Field(rows_, cols_, 0.0);
        for (size_t i = 0; i < lowpass_.values.size(); ++i)
            lowpass_.values[i] = frame.luminance[i];
        primed_ = true;
    } else {
        for (size_t i = 0; i < lowpass_.values.size(); ++i)
            lowpass_.values[i] += beta_ * (frame.luminance[i] - lowpass_.values[i]);
    }

    // Fully balanced correlation of the low-pass (delayed) copy against the
    // live signal; preferred direction is toward increasing column index.
    double sum = 0.0;
    long count = 0;
    for (int r = 0; r < rows_; ++r) {
        for (int c = 0; c + 1 < cols_; ++c) {
            const double live_l = frame.at(r, c);
            const double live_r = frame.at(r, c + 1);
            const double del_l = lowpass_.at(r, c);
            const double del_r = lowpass_.at(r, c + 1);
            sum += del_l * live_r - live_l * del_r;
            ++count;
        }
    }
    instantaneous_ = sum / static_cast<double>(count);
    window_.push(instantaneous_);
    if (!window_.full()) return std::nullopt;
    return window_.mean();
}

void HrReference::reset() {
    primed_ = false;
    window_.reset();
    instantaneous_ = 0.0;
}

} // namespace avdm
