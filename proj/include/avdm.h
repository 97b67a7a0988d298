/*
 * C interface to the angular velocity decoding model library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return AVDM_OK on success or an error code; avdm_last_error()
 * gives a thread-local message for the most recent failure on the calling
 * thread. Handles are not thread-safe individually, but distinct handles may
 * be used from different threads concurrently.
 */
#ifndef AVDM_H
#define AVDM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum avdm_status {
    AVDM_OK = 0,
    AVDM_ERR_INVALID_ARGUMENT = 1,
    AVDM_ERR_DIMENSION_MISMATCH = 2,
    AVDM_ERR_DECODE_UNAVAILABLE = 3,
    AVDM_ERR_DEGENERATE_DATA = 4,
    AVDM_ERR_PRESET_FAILURE = 5,
    AVDM_ERR_IO = 6,
    AVDM_ERR_UNKNOWN_NAME = 7,
    AVDM_ERR_BELOW_TERRAIN = 8,
    AVDM_ERR_INTERNAL = 99
} avdm_status;

const char* avdm_status_name(avdm_status status);
const char* avdm_last_error(void);

/* ---------------------------------------------------------------- params */

typedef struct avdm_params avdm_params;

avdm_params* avdm_params_create(void); /* table defaults */
avdm_params* avdm_params_clone(const avdm_params* p);
void avdm_params_destroy(avdm_params* p);

/* Keys: tau, alpha, phi, m, mu, a_star, b_star, dt, window_duration. */
avdm_status avdm_params_get(const avdm_params* p, const char* key, double* out);
avdm_status avdm_params_set(avdm_params* p, const char* key, double value);
avdm_status avdm_params_load(const char* path, avdm_params** out);
avdm_status avdm_params_save(const avdm_params* p, const char* path);
avdm_status avdm_params_append_fit(const char* path, double a_star, double b_star,
                                   double rms_error);

/* -------------------------------------------------------------- stimulus */

/* Fills luminance (rows*cols doubles, row-major, motion along columns) with a
 * moving grating sampled at time t. square != 0 selects the square waveform. */
avdm_status avdm_grating_frame(double lambda_deg, double omega_dps, double contrast,
                               double phi_deg, int square, int rows, int cols, double t,
                               double* luminance);

/* -------------------------------------------------------------- pipeline */

typedef struct avdm_pipeline avdm_pipeline;

typedef struct avdm_pipeline_output {
    int detector_valid;    /* detector buffers warmed up this frame */
    int response_valid;    /* averaging window full */
    int decode_valid;      /* omega_hat usable */
    double response;       /* windowed detector response R */
    double omega_hat;      /* decoded magnitude, deg/s */
    int direction;         /* sign of R: +1 preferred, -1 reverse, 0 none */
    double contrast;       /* windowed contrast estimate */
    double spatial_period; /* windowed period estimate, deg (NaN if undefined) */
    double boundary_count; /* windowed boundary count */
} avdm_pipeline_output;

avdm_status avdm_pipeline_create(const avdm_params* p, int rows, int cols,
                                 avdm_pipeline** out);
void avdm_pipeline_destroy(avdm_pipeline* pl);
void avdm_pipeline_reset(avdm_pipeline* pl);
avdm_status avdm_pipeline_process(avdm_pipeline* pl, const double* luminance, int rows,
                                  int cols, avdm_pipeline_output* out);

/* ---------------------------------------------------------------- trials */

typedef struct avdm_trial_result {
    double omega_hat;      /* steady mean decoded magnitude, deg/s */
    double response;       /* steady mean windowed response */
    double contrast;       /* steady mean contrast estimate */
    double spatial_period; /* steady mean period estimate, deg */
    int valid_frames;      /* decoded frames in the average */
} avdm_trial_result;

/* Runs the pipeline (or the HR reference) on a synthetic moving grating and
 * averages the outputs after `discard_s` seconds. */
avdm_status avdm_grating_trial(const avdm_params* p, int rows, int cols,
                               double lambda_deg, double omega_dps, double contrast,
                               int square, double duration_s, double discard_s,
                               avdm_trial_result* out);
avdm_status avdm_hr_trial(const avdm_params* p, int rows, int cols, double lambda_deg,
                          double omega_dps, double contrast, int square,
                          double duration_s, double discard_s, double* response_out);

/* ----------------------------------------------------------- calibration */

typedef struct avdm_calib_sample {
    double omega;    /* true angular velocity, deg/s */
    double lambda;   /* true spatial period, deg */
    double contrast; /* true contrast */
    double response; /* steady pipeline response */
} avdm_calib_sample;

typedef struct avdm_fit_report {
    double a_star;
    double b_star;
    double rms_error; /* deg/s over the samples */
    int iterations;
    int converged;
} avdm_fit_report;

/* Runs one pipeline per grid point (omegas x lambdas x contrasts) and writes
 * up to n_omega*n_lambda*n_contrast samples; *n_out receives the count kept
 * (grid points that never decode are dropped). threads <= 1 is sequential;
 * output order is deterministic either way. */
avdm_status avdm_generate_calibration_set(const avdm_params* p, int rows, int cols,
                                          const double* omegas, size_t n_omega,
                                          const double* lambdas, size_t n_lambda,
                                          const double* contrasts, size_t n_contrast,
                                          double duration_s, double discard_s, int threads,
                                          avdm_calib_sample* samples, size_t* n_out);
avdm_status avdm_fit_decoder(const avdm_calib_sample* samples, size_t n,
                             avdm_fit_report* out);
/* Decoded estimate for one sample under a fitted report. */
double avdm_fit_predict(const avdm_fit_report* fit, const avdm_calib_sample* sample);
avdm_status avdm_apply_fit(avdm_params* p, const avdm_fit_report* fit);

/* --------------------------------------------------------------- terrain */

typedef struct avdm_terrain avdm_terrain;

/* name: flat, sine_hills, mountain or snow_rock. */
avdm_status avdm_terrain_library(const char* name, uint64_t seed, avdm_terrain** out);
avdm_status avdm_terrain_load(const char* path, avdm_terrain** out);
avdm_status avdm_terrain_sine_hills(double amplitude_m, double wavelength_m,
                                    avdm_terrain** out);
avdm_status avdm_terrain_set_grating_texture(avdm_terrain* t, double period_m,
                                             double contrast, int square);
avdm_status avdm_terrain_set_patchy_texture(avdm_terrain* t, uint64_t seed,
                                            double patch_scale_m, double bright,
                                            double dark);
double avdm_terrain_height(const avdm_terrain* t, double ground_x);
double avdm_terrain_texture(const avdm_terrain* t, double ground_x);
void avdm_terrain_destroy(avdm_terrain* t);

/* ---------------------------------------------------------------- flight */

typedef struct avdm_flight_config {
    double v_x;             /* m/s */
    double z0;              /* m */
    double x0;              /* m */
    double duration;        /* s of controlled flight */
    double preset_duration; /* s of gravity-compensated lead-in */
    double preset_discard;  /* s of the preset ignored while filters settle */
    int rows, cols;         /* ventral eye grid */
    double rho;             /* N per deg/s */
    double k;               /* N s/m */
    double g;               /* m/s^2 */
    double mass;            /* kg */
    double lift_floor;      /* N */
    int literal_lift_law;   /* T = rho*eps instead of m*g + rho*eps */
} avdm_flight_config;

void avdm_flight_config_defaults(avdm_flight_config* config);

typedef struct avdm_trajectory avdm_trajectory;

typedef struct avdm_trajectory_row {
    double t, x, z, terrain_h, v_z;
    double omega_est; /* NaN before the first valid decode */
    double omega_gt;
    double thrust;
    double epsilon; /* NaN during the preset phase */
} avdm_trajectory_row;

avdm_status avdm_fly(const avdm_params* p, const avdm_terrain* t,
                     const avdm_flight_config* config, avdm_trajectory** out);
size_t avdm_trajectory_size(const avdm_trajectory* tr);
avdm_status avdm_trajectory_get_row(const avdm_trajectory* tr, size_t index,
                                    avdm_trajectory_row* out);
double avdm_trajectory_omega_set(const avdm_trajectory* tr);
/* Returns 1 and fills t/x when the episode crashed, else 0. */
int avdm_trajectory_crash(const avdm_trajectory* tr, double* t_out, double* x_out);
avdm_status avdm_trajectory_save(const avdm_trajectory* tr, const char* path);
void avdm_trajectory_destroy(avdm_trajectory* tr);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* AVDM_H */
