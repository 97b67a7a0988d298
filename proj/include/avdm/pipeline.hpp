#pragma once

#include <optional>

#include "avdm/frame.hpp"
#include "avdm/motion.hpp"
#include "avdm/params.hpp"
#include "avdm/texture.hpp"

namespace avdm {

struct DecodedVelocity {
    double magnitude = 0.0; // deg/s, >= 0
    int direction = 0;      // sign of R: +1 preferred, -1 reverse, 0 none
};

// omega_hat = a* lambda^b* (1+C)/(2C) sqrt(max(R,0)); sign(R) is reported
// separately. Throws decode_unavailable when the texture has no contrast or
// no defined period.
DecodedVelocity decode_angular_velocity(double response, const TextureEstimate& texture,
                                        const ModelParams& params);

struct PipelineOutput {
    bool detector_valid = false; // false while delay/persistence buffers fill
    bool response_valid = false; // true once the averaging window is full
    bool decode_valid = false;   // false until R window is full and texture usable
    double response = 0.0;       // windowed mean detector response R
    double omega_hat = 0.0;      // deg/s, magnitude
    int direction = 0;
    TextureEstimate texture;     // window-averaged estimates fed to the decoder
    TextureEstimate frame_texture; // instantaneous per-frame estimate
};

// Full three-layer pipeline over a uniformly sampled frame stream. Texture
// estimates are averaged over the same window as the detector response, which
// irons out the boundary-count quantization of moving patterns. One instance
// per stream; instances are independent.
class Pipeline {
public:
    Pipeline(const ModelParams& params, int rows, int cols);

    PipelineOutput process(const Frame& frame);
    void reset();

    const ModelParams& params() const { return params_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    long frames_seen() const { return frames_seen_; }

private:
    ModelParams params_;
    int rows_;
    int cols_;
    long frames_seen_ = 0;
    LaminaFilter lamina_;
    EnvelopeFilter on_envelope_;
    EnvelopeFilter off_envelope_;
    PathwayBuffers buffers_;
    ResponseAccumulator accumulator_;
    SlidingMean contrast_window_;
    SlidingMean boundary_window_;
};

// Classic Hassenstein-Reichardt reference: fully balanced correlation of raw
// luminance against its low-pass-filtered copy (time constant tau), no
// ON/OFF split. Tuned to temporal frequency, the defect the decoding model
// removes.
class HrReference {
public:
    HrReference(double tau, double dt, int rows, int cols, double window_duration = 0.2);

    std::optional<double> process(const Frame& frame); // windowed response once full
    double last_instantaneous() const { return instantaneous_; }
    void reset();

private:
    double beta_;
    int rows_;
    int cols_;
    bool primed_ = false;
    Field lowpass_;
    SlidingMean window_;
    double instantaneous_ = 0.0;
};

} // namespace avdm
