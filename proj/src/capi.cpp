#include "avdm.h"

#include <cstring>
#include <string>

#include "avdm/calibration.hpp"
#include "avdm/camera.hpp"
#include "avdm/flight.hpp"
#include "avdm/grating.hpp"
#include "avdm/params.hpp"
#include "avdm/pipeline.hpp"
#include "avdm/terrain.hpp"
#include "avdm/trials.hpp"

using namespace avdm;

struct avdm_params {
    ModelParams model;
};

struct avdm_pipeline {
    Pipeline pipeline;
};

struct avdm_terrain {
    TerrainProfile terrain;
};

struct avdm_trajectory {
    TrajectoryLog log;
};

namespace {

thread_local std::string g_last_error;

avdm_status to_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::invalid_argument: return AVDM_ERR_INVALID_ARGUMENT;
        case ErrorCode::dimension_mismatch: return AVDM_ERR_DIMENSION_MISMATCH;
        case ErrorCode::decode_unavailable: return AVDM_ERR_DECODE_UNAVAILABLE;
        case ErrorCode::degenerate_data: return AVDM_ERR_DEGENERATE_DATA;
        case ErrorCode::preset_failure: return AVDM_ERR_PRESET_FAILURE;
        case ErrorCode::io: return AVDM_ERR_IO;
        case ErrorCode::unknown_name: return AVDM_ERR_UNKNOWN_NAME;
        case ErrorCode::below_terrain: return AVDM_ERR_BELOW_TERRAIN;
    }
    return AVDM_ERR_INTERNAL;
}

template <typename Fn>
avdm_status guarded(Fn&& fn) {
    try {
        fn();
        return AVDM_OK;
    } catch (const Error& e) {
        g_last_error = e.what();
        return to_status(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return AVDM_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return AVDM_ERR_INTERNAL;
    }
}

avdm_status fail_arg(const char* message) {
    g_last_error = message;
    return AVDM_ERR_INVALID_ARGUMENT;
}

} // namespace

extern "C" {

const char* avdm_status_name(avdm_status status) {
    switch (status) {
        case AVDM_OK: return "ok";
        case AVDM_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case AVDM_ERR_DIMENSION_MISMATCH: return "dimension_mismatch";
        case AVDM_ERR_DECODE_UNAVAILABLE: return "decode_unavailable";
        case AVDM_ERR_DEGENERATE_DATA: return "degenerate_data";
        case AVDM_ERR_PRESET_FAILURE: return "preset_failure";
        case AVDM_ERR_IO: return "io";
        case AVDM_ERR_UNKNOWN_NAME: return "unknown_name";
        case AVDM_ERR_BELOW_TERRAIN: return "below_terrain";
        case AVDM_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* avdm_last_error(void) {
    return g_last_error.c_str();
}

/* ---------------------------------------------------------------- params */

avdm_params* avdm_params_create(void) {
    return new avdm_params{};
}

avdm_params* avdm_params_clone(const avdm_params* p) {
    return p ? new avdm_params{p->model} : nullptr;
}

void avdm_params_destroy(avdm_params* p) {
    delete p;
}

avdm_status avdm_params_get(const avdm_params* p, const char* key, double* out) {
    if (!p || !key || !out) return fail_arg("null argument");
    const std::string k = key;
    if (k == "tau") *out = p->model.tau;
    else if (k == "alpha") *out = p->model.alpha;
    else if (k == "phi") *out = p->model.phi;
    else if (k == "m") *out = p->model.m;
    else if (k == "mu") *out = p->model.mu;
    else if (k == "a_star") *out = p->model.a_star;
    else if (k == "b_star") *out = p->model.b_star;
    else if (k == "dt") *out = p->model.dt;
    else if (k == "window_duration") *out = p->model.window_duration;
    else {
        g_last_error = "unknown parameter key: " + k;
        return AVDM_ERR_UNKNOWN_NAME;
    }
    return AVDM_OK;
}

avdm_status avdm_params_set(avdm_params* p, const char* key, double value) {
    if (!p || !key) return fail_arg("null argument");
    const std::string k = key;
    if (k == "tau") p->model.tau = value;
    else if (k == "alpha") p->model.alpha = value;
    else if (k == "phi") p->model.phi = value;
    else if (k == "m") p->model.m = static_cast<int>(value);
    else if (k == "mu") p->model.mu = value;
    else if (k == "a_star") p->model.a_star = value;
    else if (k == "b_star") p->model.b_star = value;
    else if (k == "dt") p->model.dt = value;
    else if (k == "window_duration") p->model.window_duration = value;
    else {
        g_last_error = "unknown parameter key: " + k;
        return AVDM_ERR_UNKNOWN_NAME;
    }
    return AVDM_OK;
}

avdm_status avdm_params_load(const char* path, avdm_params** out) {
    if (!path || !out) return fail_arg("null argument");
    return guarded([&] { *out = new avdm_params{load_params(path)}; });
}

avdm_status avdm_params_save(const avdm_params* p, const char* path) {
    if (!p || !path) return fail_arg("null argument");
    return guarded([&] { save_params(p->model, path); });
}

avdm_status avdm_params_append_fit(const char* path, double a_star, double b_star,
                                   double rms_error) {
    if (!path) return fail_arg("null argument");
    return guarded([&] { append_fit(path, a_star, b_star, rms_error); });
}

/* -------------------------------------------------------------- stimulus */

avdm_status avdm_grating_frame(double lambda_deg, double omega_dps, double contrast,
                               double phi_deg, int square, int rows, int cols, double t,
                               double* luminance) {
    if (!luminance) return fail_arg("null luminance buffer");
    return guarded([&] {
        GratingSpec spec;
        spec.spatial_period = lambda_deg;
        spec.angular_velocity = omega_dps;
        spec.contrast = contrast;
        spec.inter_receptor_angle = phi_deg;
        spec.waveform = square ? Waveform::square : Waveform::sine;
        const Frame frame = generate_grating_frame(spec, rows, cols, t);
        std::memcpy(luminance, frame.luminance.data(),
                    frame.luminance.size() * sizeof(double));
    });
}

/* -------------------------------------------------------------- pipeline */

avdm_status avdm_pipeline_create(const avdm_params* p, int rows, int cols,
                                 avdm_pipeline** out) {
    if (!p || !out) return fail_arg("null argument");
    return guarded([&] { *out = new avdm_pipeline{Pipeline(p->model, rows, cols)}; });
}

void avdm_pipeline_destroy(avdm_pipeline* pl) {
    delete pl;
}

void avdm_pipeline_reset(avdm_pipeline* pl) {
    if (pl) pl->pipeline.reset();
}

avdm_status avdm_pipeline_process(avdm_pipeline* pl, const double* luminance, int rows,
                                  int cols, avdm_pipeline_output* out) {
    if (!pl || !luminance || !out) return fail_arg("null argument");
    return guarded([&] {
        Frame frame(rows, cols);
        std::memcpy(frame.luminance.data(), luminance,
                    frame.luminance.size() * sizeof(double));
        frame.validate();
        const PipelineOutput result = pl->pipeline.process(frame);
        out->detector_valid = result.detector_valid;
        out->response_valid = result.response_valid;
        out->decode_valid = result.decode_valid;
        out->response = result.response;
        out->omega_hat = result.omega_hat;
        out->direction = result.direction;
        out->contrast = result.texture.contrast;
        out->spatial_period = result.texture.spatial_period.value_or(std::nan(""));
        out->boundary_count = result.texture.boundary_count;
    });
}

/* ---------------------------------------------------------------- trials */

avdm_status avdm_grating_trial(const avdm_params* p, int rows, int cols,
                               double lambda_deg, double omega_dps, double contrast,
                               int square, double duration_s, double discard_s,
                               avdm_trial_result* out) {
    if (!p || !out) return fail_arg("null argument");
    return guarded([&] {
        GratingSpec spec;
        spec.spatial_period = lambda_deg;
        spec.angular_velocity = omega_dps;
        spec.contrast = contrast;
        spec.inter_receptor_angle = p->model.phi;
        spec.waveform = square ? Waveform::square : Waveform::sine;
        TrialConfig config;
        config.rows = rows;
        config.cols = cols;
        config.duration = duration_s;
        config.discard = discard_s;
        const TrialResult r = run_grating_trial(p->model, spec, config);
        out->omega_hat = r.omega_hat;
        out->response = r.response;
        out->contrast = r.contrast;
        out->spatial_period = r.spatial_period;
        out->valid_frames = r.valid_frames;
    });
}

avdm_status avdm_hr_trial(const avdm_params* p, int rows, int cols, double lambda_deg,
                          double omega_dps, double contrast, int square,
                          double duration_s, double discard_s, double* response_out) {
    if (!p || !response_out) return fail_arg("null argument");
    return guarded([&] {
        GratingSpec spec;
        spec.spatial_period = lambda_deg;
        spec.angular_velocity = omega_dps;
        spec.contrast = contrast;
        spec.inter_receptor_angle = p->model.phi;
        spec.waveform = square ? Waveform::square : Waveform::sine;
        TrialConfig config;
        config.rows = rows;
        config.cols = cols;
        config.duration = duration_s;
        config.discard = discard_s;
        *response_out = run_hr_trial(p->model, spec, config);
    });
}

/* ----------------------------------------------------------- calibration */

avdm_status avdm_generate_calibration_set(const avdm_params* p, int rows, int cols,
                                          const double* omegas, size_t n_omega,
                                          const double* lambdas, size_t n_lambda,
                                          const double* contrasts, size_t n_contrast,
                                          double duration_s, double discard_s, int threads,
                                          avdm_calib_sample* samples, size_t* n_out) {
    if (!p || !omegas || !lambdas || !contrasts || !samples || !n_out)
        return fail_arg("null argument");
    return guarded([&] {
        CalibrationGrid grid;
        grid.omegas.assign(omegas, omegas + n_omega);
        grid.lambdas.assign(lambdas, lambdas + n_lambda);
        grid.contrasts.assign(contrasts, contrasts + n_contrast);
        TrialConfig trial;
        trial.rows = rows;
        trial.cols = cols;
        trial.duration = duration_s;
        trial.discard = discard_s;
        const auto set = generate_calibration_set(grid, p->model, trial, threads);
        for (size_t i = 0; i < set.size(); ++i)
            samples[i] = {set[i].omega, set[i].lambda, set[i].contrast, set[i].response};
        *n_out = set.size();
    });
}

avdm_status avdm_fit_decoder(const avdm_calib_sample* samples, size_t n,
                             avdm_fit_report* out) {
    if (!samples || !out) return fail_arg("null argument");
    return guarded([&] {
        std::vector<CalibrationSample> set(n);
        for (size_t i = 0; i < n; ++i)
            set[i] = {samples[i].omega, samples[i].lambda, samples[i].contrast,
                      samples[i].response};
        const CalibrationResult r = fit_decoder(set);
        out->a_star = r.a_star;
        out->b_star = r.b_star;
        out->rms_error = r.rms_error;
        out->iterations = r.iterations;
        out->converged = r.converged;
    });
}

double avdm_fit_predict(const avdm_fit_report* fit, const avdm_calib_sample* sample) {
    if (!fit || !sample) return std::nan("");
    CalibrationResult r;
    r.a_star = fit->a_star;
    r.b_star = fit->b_star;
    return predict_omega(r, {sample->omega, sample->lambda, sample->contrast,
                             sample->response});
}

avdm_status avdm_apply_fit(avdm_params* p, const avdm_fit_report* fit) {
    if (!p || !fit) return fail_arg("null argument");
    p->model.a_star = fit->a_star;
    p->model.b_star = fit->b_star;
    return AVDM_OK;
}

/* --------------------------------------------------------------- terrain */

avdm_status avdm_terrain_library(const char* name, uint64_t seed, avdm_terrain** out) {
    if (!name || !out) return fail_arg("null argument");
    return guarded([&] { *out = new avdm_terrain{terrain_library(name, seed)}; });
}

avdm_status avdm_terrain_load(const char* path, avdm_terrain** out) {
    if (!path || !out) return fail_arg("null argument");
    return guarded([&] { *out = new avdm_terrain{load_terrain(path)}; });
}

avdm_status avdm_terrain_sine_hills(double amplitude_m, double wavelength_m,
                                    avdm_terrain** out) {
    if (!out) return fail_arg("null argument");
    return guarded([&] {
        SineHillsSpec spec;
        spec.amplitude = amplitude_m;
        spec.wavelength = wavelength_m;
        *out = new avdm_terrain{make_sine_hills_terrain(spec)};
    });
}

avdm_status avdm_terrain_set_grating_texture(avdm_terrain* t, double period_m,
                                             double contrast, int square) {
    if (!t) return fail_arg("null terrain");
    return guarded([&] {
        GratingTexture tex;
        tex.period = period_m;
        tex.contrast = contrast;
        tex.waveform = square ? Waveform::square : Waveform::sine;
        t->terrain.set_texture(tex);
    });
}

avdm_status avdm_terrain_set_patchy_texture(avdm_terrain* t, uint64_t seed,
                                            double patch_scale_m, double bright,
                                            double dark) {
    if (!t) return fail_arg("null terrain");
    return guarded([&] {
        t->terrain.set_texture(PatchyTexture(seed, patch_scale_m, bright, dark,
                                             t->terrain.x_min() - 20.0,
                                             t->terrain.x_max() + 20.0));
    });
}

double avdm_terrain_height(const avdm_terrain* t, double ground_x) {
    return t ? t->terrain.height(ground_x) : std::nan("");
}

double avdm_terrain_texture(const avdm_terrain* t, double ground_x) {
    return t ? t->terrain.texture_at(ground_x) : std::nan("");
}

void avdm_terrain_destroy(avdm_terrain* t) {
    delete t;
}

/* ---------------------------------------------------------------- flight */

void avdm_flight_config_defaults(avdm_flight_config* config) {
    if (!config) return;
    const FlightConfig fc;
    const ControlParams cp;
    config->v_x = fc.v_x;
    config->z0 = fc.z0;
    config->x0 = fc.x0;
    config->duration = fc.duration;
    config->preset_duration = fc.preset_duration;
    config->preset_discard = fc.preset_discard;
    config->rows = fc.rows;
    config->cols = fc.cols;
    config->rho = cp.rho;
    config->k = cp.k;
    config->g = cp.g;
    config->mass = cp.mass;
    config->lift_floor = cp.lift_floor;
    config->literal_lift_law = cp.literal_lift_law ? 1 : 0;
}

avdm_status avdm_fly(const avdm_params* p, const avdm_terrain* t,
                     const avdm_flight_config* config, avdm_trajectory** out) {
    if (!p || !t || !config || !out) return fail_arg("null argument");
    return guarded([&] {
        FlightConfig fc;
        fc.v_x = config->v_x;
        fc.z0 = config->z0;
        fc.x0 = config->x0;
        fc.duration = config->duration;
        fc.preset_duration = config->preset_duration;
        fc.preset_discard = config->preset_discard;
        fc.rows = config->rows;
        fc.cols = config->cols;
        ControlParams cp;
        cp.rho = config->rho;
        cp.k = config->k;
        cp.g = config->g;
        cp.mass = config->mass;
        cp.lift_floor = config->lift_floor;
        cp.literal_lift_law = config->literal_lift_law != 0;
        *out = new avdm_trajectory{run_episode(p->model, cp, t->terrain, fc)};
    });
}

size_t avdm_trajectory_size(const avdm_trajectory* tr) {
    return tr ? tr->log.records.size() : 0;
}

avdm_status avdm_trajectory_get_row(const avdm_trajectory* tr, size_t index,
                                    avdm_trajectory_row* out) {
    if (!tr || !out) return fail_arg("null argument");
    if (index >= tr->log.records.size()) return fail_arg("trajectory row out of range");
    const TrajectoryRecord& r = tr->log.records[index];
    out->t = r.t;
    out->x = r.x;
    out->z = r.z;
    out->terrain_h = r.terrain_h;
    out->v_z = r.v_z;
    out->omega_est = r.omega_est;
    out->omega_gt = r.omega_gt;
    out->thrust = r.thrust;
    out->epsilon = r.epsilon;
    return AVDM_OK;
}

double avdm_trajectory_omega_set(const avdm_trajectory* tr) {
    return tr ? tr->log.omega_set : std::nan("");
}

int avdm_trajectory_crash(const avdm_trajectory* tr, double* t_out, double* x_out) {
    if (!tr || !tr->log.crash) return 0;
    if (t_out) *t_out = tr->log.crash->t;
    if (x_out) *x_out = tr->log.crash->x;
    return 1;
}

avdm_status avdm_trajectory_save(const avdm_trajectory* tr, const char* path) {
    if (!tr || !path) return fail_arg("null argument");
    return guarded([&] { save_trajectory(tr->log, path); });
}

void avdm_trajectory_destroy(avdm_trajectory* tr) {
    delete tr;
}

} /* extern "C" */
