// Experiment driver for the angular velocity decoding model: grating sweeps,
// decoder calibration, tuning-surface comparison against the classic HR
// detector, and closed-loop terrain-following episodes. Links the C API only.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "avdm.h"
#include "config.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMissingInput = 2;
constexpr int kExitCalibrationFailure = 3;
constexpr int kExitPresetFailure = 4;

struct ParamsDeleter {
    void operator()(avdm_params* p) const { avdm_params_destroy(p); }
};
struct TerrainDeleter {
    void operator()(avdm_terrain* t) const { avdm_terrain_destroy(t); }
};
struct TrajectoryDeleter {
    void operator()(avdm_trajectory* t) const { avdm_trajectory_destroy(t); }
};

using ParamsPtr = std::unique_ptr<avdm_params, ParamsDeleter>;
using TerrainPtr = std::unique_ptr<avdm_terrain, TerrainDeleter>;
using TrajectoryPtr = std::unique_ptr<avdm_trajectory, TrajectoryDeleter>;

[[noreturn]] void die(int code, const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    std::exit(code);
}

int worker_count(size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("AVDM_THREADS")) {
        const long cap = std::strtol(env, nullptr, 10);
        if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    }
    return static_cast<int>(std::min<size_t>(n, std::max<size_t>(jobs, 1)));
}

// Runs fn(i) for i in [0, jobs) across the worker pool; results must be
// written into preallocated slots so the output order is deterministic.
void parallel_for(size_t jobs, const std::function<void(size_t)>& fn) {
    const int threads = worker_count(jobs);
    if (threads <= 1) {
        for (size_t i = 0; i < jobs; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    const size_t chunk = (jobs + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        const size_t begin = static_cast<size_t>(t) * chunk;
        const size_t end = std::min(jobs, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] {
            for (size_t i = begin; i < end; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

ParamsPtr params_from_config(const cli::Config& config) {
    ParamsPtr params(avdm_params_create());
    for (const char* key :
         {"tau", "alpha", "phi", "m", "mu", "a_star", "b_star", "dt", "window_duration"}) {
        if (config.has("model", key))
            avdm_params_set(params.get(), key, config.get_double("model", key, 0.0));
    }
    return params;
}

ParamsPtr load_params_or_die(const std::string& path) {
    avdm_params* raw = nullptr;
    const avdm_status status = avdm_params_load(path.c_str(), &raw);
    if (status != AVDM_OK)
        die(kExitMissingInput, std::string("cannot load params: ") + avdm_last_error());
    return ParamsPtr(raw);
}

TerrainPtr terrain_from_config(const cli::Config& config, uint64_t seed_override,
                               bool has_seed_override) {
    const uint64_t seed = has_seed_override
                              ? seed_override
                              : static_cast<uint64_t>(config.get_long("terrain", "seed", 1));
    avdm_terrain* raw = nullptr;
    avdm_status status;
    if (config.has("terrain", "file")) {
        const std::string path = config.get_string("terrain", "file", "");
        status = avdm_terrain_load(path.c_str(), &raw);
    } else {
        const std::string name = config.get_string("terrain", "name", "sine_hills");
        if (name == "sine_hills" &&
            (config.has("terrain", "amplitude") || config.has("terrain", "wavelength"))) {
            status = avdm_terrain_sine_hills(config.get_double("terrain", "amplitude", 1.0),
                                             config.get_double("terrain", "wavelength", 50.0),
                                             &raw);
        } else {
            status = avdm_terrain_library(name.c_str(), seed, &raw);
        }
    }
    if (status != AVDM_OK)
        die(kExitMissingInput, std::string("cannot build terrain: ") + avdm_last_error());
    TerrainPtr terrain(raw);

    const std::string texture = config.get_string("terrain", "texture", "");
    if (texture == "grating") {
        avdm_terrain_set_grating_texture(
            terrain.get(), config.get_double("terrain", "period", 2.0),
            config.get_double("terrain", "contrast", 1.0),
            config.get_string("terrain", "waveform", "sine") == "square" ? 1 : 0);
    } else if (texture == "patchy") {
        avdm_terrain_set_patchy_texture(terrain.get(), seed,
                                        config.get_double("terrain", "patch_scale", 2.0),
                                        config.get_double("terrain", "bright", 0.9),
                                        config.get_double("terrain", "dark", 0.1));
    } else if (!texture.empty()) {
        die(kExitMissingInput, "unknown terrain texture: " + texture);
    }
    return terrain;
}

struct TrialSetup {
    int rows = 4;
    int cols = 46;
    double duration = 4.0;
    double discard = 2.0;
};

TrialSetup trial_setup(const cli::Config& config) {
    TrialSetup setup;
    setup.rows = static_cast<int>(config.get_long("sim", "rows", 4));
    setup.cols = static_cast<int>(config.get_long("sim", "cols", 46));
    setup.duration = config.get_double("sim", "trial_duration", 4.0);
    setup.discard = config.get_double("sim", "trial_discard", 2.0);
    return setup;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) die(kExitMissingInput, "cannot write output file: " + path);
    return out;
}

/* ------------------------------------------------------------------ sweep */

int cmd_sweep(const cli::Config& config, const std::string& params_path,
              const std::string& out_path) {
    ParamsPtr params = load_params_or_die(params_path);
    const TrialSetup setup = trial_setup(config);

    const std::vector<double> lambdas =
        config.get_list("grid", "lambdas", {12.0, 19.0, 38.0, 54.0, 72.0});
    std::vector<double> omegas_default;
    for (double w = 50.0; w <= 800.0 + 1e-9; w += 50.0) omegas_default.push_back(w);
    const std::vector<double> omegas = config.get_list("grid", "omegas", omegas_default);
    const double contrast = config.get_list("grid", "contrasts", {1.0}).front();

    struct Row {
        double lambda, omega, omega_hat, rel_err;
    };
    std::vector<Row> rows(lambdas.size() * omegas.size());
    parallel_for(rows.size(), [&](size_t i) {
        const double lambda = lambdas[i / omegas.size()];
        const double omega = omegas[i % omegas.size()];
        avdm_trial_result trial{};
        const avdm_status status =
            avdm_grating_trial(params.get(), setup.rows, setup.cols, lambda, omega, contrast,
                               0, setup.duration, setup.discard, &trial);
        const double omega_hat = status == AVDM_OK ? trial.omega_hat : 0.0;
        rows[i] = {lambda, omega, omega_hat, std::abs(omega_hat - omega) / omega};
    });

    auto out = open_output(out_path);
    out << "# units: lambda[deg/cycle] omega_true[deg/s] omega_hat[deg/s] rel_err[1]\n";
    out << "lambda,omega_true,omega_hat,rel_err\n";
    for (const auto& r : rows)
        out << format_double(r.lambda) << "," << format_double(r.omega) << ","
            << format_double(r.omega_hat) << "," << format_double(r.rel_err) << "\n";
    std::printf("sweep: %zu rows -> %s\n", rows.size(), out_path.c_str());
    return kExitOk;
}

/* -------------------------------------------------------------- calibrate */

int cmd_calibrate(const cli::Config& config, const std::string& params_path,
                  const std::string& out_path) {
    ParamsPtr params = params_from_config(config);
    const TrialSetup setup = trial_setup(config);

    std::vector<double> omegas_default;
    for (double w = 50.0; w <= 700.0 + 1e-9; w += 50.0) omegas_default.push_back(w);
    const std::vector<double> omegas = config.get_list("grid", "omegas", omegas_default);
    const std::vector<double> lambdas =
        config.get_list("grid", "lambdas", {19.0, 38.0, 54.0, 72.0});
    const std::vector<double> contrasts = config.get_list("grid", "contrasts", {0.5, 1.0});

    std::vector<avdm_calib_sample> samples(omegas.size() * lambdas.size() * contrasts.size());
    size_t n_samples = 0;
    avdm_status status = avdm_generate_calibration_set(
        params.get(), setup.rows, setup.cols, omegas.data(), omegas.size(), lambdas.data(),
        lambdas.size(), contrasts.data(), contrasts.size(), setup.duration, setup.discard,
        worker_count(samples.size()), samples.data(), &n_samples);
    if (status != AVDM_OK)
        die(kExitCalibrationFailure,
            std::string("calibration set generation failed: ") + avdm_last_error());
    samples.resize(n_samples);

    avdm_fit_report fit{};
    status = avdm_fit_decoder(samples.data(), samples.size(), &fit);
    if (status != AVDM_OK)
        die(kExitCalibrationFailure, std::string("decoder fit failed: ") + avdm_last_error());

    // Base parameters plus the appended fitted coefficients.
    if (avdm_params_save(params.get(), params_path.c_str()) != AVDM_OK ||
        avdm_params_append_fit(params_path.c_str(), fit.a_star, fit.b_star,
                               fit.rms_error) != AVDM_OK)
        die(kExitMissingInput, std::string("cannot write params: ") + avdm_last_error());

    auto out = open_output(out_path);
    out << "# units: omega[deg/s] lambda[deg/cycle] contrast[1] R[1]\n";
    out << "omega,lambda,contrast,R\n";
    for (const auto& s : samples)
        out << format_double(s.omega) << "," << format_double(s.lambda) << ","
            << format_double(s.contrast) << "," << format_double(s.response) << "\n";

    const std::filesystem::path errors_path =
        std::filesystem::path(out_path).parent_path() /
        (std::filesystem::path(out_path).stem().string() + "_errors.csv");
    auto err_out = open_output(errors_path.string());
    err_out << "# units: omega[deg/s] lambda[deg/cycle] contrast[1] omega_hat[deg/s] "
               "rel_err[1]\n";
    err_out << "omega,lambda,contrast,omega_hat,rel_err\n";
    double rms_rel = 0.0, max_rel = 0.0;
    for (const auto& s : samples) {
        const double omega_hat = avdm_fit_predict(&fit, &s);
        const double rel = std::abs(omega_hat - s.omega) / s.omega;
        rms_rel += rel * rel;
        max_rel = std::max(max_rel, rel);
        err_out << format_double(s.omega) << "," << format_double(s.lambda) << ","
                << format_double(s.contrast) << "," << format_double(omega_hat) << ","
                << format_double(rel) << "\n";
    }
    rms_rel = std::sqrt(rms_rel / static_cast<double>(samples.size()));

    std::printf("calibrate: %zu samples, a*=%.4f b*=%.4f rms=%.3f deg/s "
                "rms_rel=%.2f%% max_rel=%.2f%% iters=%d converged=%d -> %s\n",
                samples.size(), fit.a_star, fit.b_star, fit.rms_error, 100 * rms_rel,
                100 * max_rel, fit.iterations, fit.converged, params_path.c_str());
    return kExitOk;
}

/* -------------------------------------------------------------------- fly */

int cmd_fly(const cli::Config& config, const std::string& params_path,
            const std::string& out_path, uint64_t seed_override, bool has_seed_override) {
    ParamsPtr params = load_params_or_die(params_path);
    TerrainPtr terrain = terrain_from_config(config, seed_override, has_seed_override);

    avdm_flight_config flight{};
    avdm_flight_config_defaults(&flight);
    flight.v_x = config.get_double("sim", "v_x", flight.v_x);
    flight.z0 = config.get_double("sim", "z0", flight.z0);
    flight.x0 = config.get_double("sim", "x0", flight.x0);
    flight.duration = config.get_double("sim", "duration", flight.duration);
    flight.preset_duration =
        config.get_double("sim", "preset_duration", flight.preset_duration);
    flight.preset_discard = config.get_double("sim", "preset_discard", flight.preset_discard);
    flight.rows = static_cast<int>(config.get_long("sim", "rows", flight.rows));
    flight.cols = static_cast<int>(config.get_long("sim", "cols", flight.cols));
    flight.rho = config.get_double("control", "rho", flight.rho);
    flight.k = config.get_double("control", "k", flight.k);
    flight.g = config.get_double("control", "g", flight.g);
    flight.mass = config.get_double("control", "mass", flight.mass);
    flight.lift_floor = config.get_double("control", "lift_floor", flight.lift_floor);
    flight.literal_lift_law = config.get_bool("control", "literal_lift_law", false) ? 1 : 0;

    avdm_trajectory* raw = nullptr;
    const avdm_status status = avdm_fly(params.get(), terrain.get(), &flight, &raw);
    if (status == AVDM_ERR_PRESET_FAILURE)
        die(kExitPresetFailure, std::string("preset phase failed: ") + avdm_last_error());
    if (status != AVDM_OK)
        die(kExitMissingInput, std::string("episode failed: ") + avdm_last_error());
    TrajectoryPtr trajectory(raw);

    if (avdm_trajectory_save(trajectory.get(), out_path.c_str()) != AVDM_OK)
        die(kExitMissingInput, std::string("cannot write trajectory: ") + avdm_last_error());

    const size_t n = avdm_trajectory_size(trajectory.get());
    double min_clear = 1e300, sum_abs_eps = 0.0;
    size_t eps_count = 0;
    for (size_t i = 0; i < n; ++i) {
        avdm_trajectory_row row{};
        avdm_trajectory_get_row(trajectory.get(), i, &row);
        min_clear = std::min(min_clear, row.z - row.terrain_h);
        if (std::isfinite(row.epsilon)) {
            sum_abs_eps += std::abs(row.epsilon);
            ++eps_count;
        }
    }
    double crash_t = 0, crash_x = 0;
    const int crashed = avdm_trajectory_crash(trajectory.get(), &crash_t, &crash_x);
    std::printf("fly: omega_set=%.2f deg/s, %zu records, min_clearance=%.3f m, "
                "mean|eps|=%.2f deg/s, crash=%s -> %s\n",
                avdm_trajectory_omega_set(trajectory.get()), n, min_clear,
                eps_count ? sum_abs_eps / eps_count : 0.0,
                crashed ? "yes" : "no", out_path.c_str());
    if (crashed)
        std::printf("fly: crash at t=%.3f s x=%.3f m\n", crash_t, crash_x);
    return kExitOk;
}

/* ----------------------------------------------------------------- tuning */

int cmd_tuning(const cli::Config& config, const std::string& params_path,
               const std::string& out_path) {
    ParamsPtr params = load_params_or_die(params_path);
    const TrialSetup setup = trial_setup(config);

    const std::vector<double> lambdas =
        config.get_list("grid", "lambdas", {12.0, 19.0, 38.0, 54.0, 72.0});
    std::vector<double> omegas_default;
    for (double w = 50.0; w <= 800.0 + 1e-9; w += 50.0) omegas_default.push_back(w);
    const std::vector<double> omegas = config.get_list("grid", "omegas", omegas_default);
    const double contrast = config.get_list("grid", "contrasts", {1.0}).front();

    const size_t grid_size = lambdas.size() * omegas.size();
    std::vector<double> hr(grid_size), model(grid_size);
    parallel_for(grid_size, [&](size_t i) {
        const double lambda = lambdas[i / omegas.size()];
        const double omega = omegas[i % omegas.size()];
        double hr_response = 0.0;
        avdm_hr_trial(params.get(), setup.rows, setup.cols, lambda, omega, contrast, 0,
                      setup.duration, setup.discard, &hr_response);
        hr[i] = hr_response;
        avdm_trial_result trial{};
        avdm_grating_trial(params.get(), setup.rows, setup.cols, lambda, omega, contrast, 0,
                           setup.duration, setup.discard, &trial);
        model[i] = trial.omega_hat;
    });

    auto out = open_output(out_path);
    out << "# units: lambda[deg/cycle] omega[deg/s]; HR response is the windowed "
           "correlator output, AVDM response is the decoded estimate [deg/s]\n";
    out << "model,lambda,omega,response\n";
    for (size_t i = 0; i < grid_size; ++i)
        out << "HR," << format_double(lambdas[i / omegas.size()]) << ","
            << format_double(omegas[i % omegas.size()]) << "," << format_double(hr[i])
            << "\n";
    for (size_t i = 0; i < grid_size; ++i)
        out << "AVDM," << format_double(lambdas[i / omegas.size()]) << ","
            << format_double(omegas[i % omegas.size()]) << "," << format_double(model[i])
            << "\n";
    std::printf("tuning: %zu rows -> %s\n", 2 * grid_size, out_path.c_str());
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"angular velocity decoding model experiments"};
    app.require_subcommand(1);

    std::string config_path, params_path = "avdm_params.txt", out_path;
    uint64_t seed = 0;
    bool has_seed = false;

    app.add_option("--config", config_path, "experiment config file (sectioned key=value)");
    app.add_option("--params", params_path, "model parameter file");
    app.add_option("--out", out_path, "output file");
    auto* seed_opt = app.add_option("--seed", seed, "terrain seed override");

    auto* sweep = app.add_subcommand("sweep", "decode moving gratings over a grid");
    auto* calibrate = app.add_subcommand("calibrate", "fit decoder coefficients");
    auto* fly = app.add_subcommand("fly", "closed-loop terrain following episode");
    auto* tuning = app.add_subcommand("tuning", "HR vs decoder response surfaces");
    for (auto* sub : {sweep, calibrate, fly, tuning})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitMissingInput;
    }
    has_seed = seed_opt->count() > 0;

    cli::Config config;
    if (!config_path.empty()) {
        try {
            config = cli::Config::from_file(config_path);
        } catch (const std::exception& e) {
            die(kExitMissingInput, e.what());
        }
    }

    try {
        if (sweep->parsed())
            return cmd_sweep(config, params_path, out_path.empty() ? "sweep.csv" : out_path);
        if (calibrate->parsed())
            return cmd_calibrate(config, params_path,
                                 out_path.empty() ? "calibration_samples.csv" : out_path);
        if (fly->parsed())
            return cmd_fly(config, params_path,
                           out_path.empty() ? "trajectory.csv" : out_path, seed, has_seed);
        if (tuning->parsed())
            return cmd_tuning(config, params_path, out_path.empty() ? "tuning.csv" : out_path);
    } catch (const std::exception& e) {
        die(kExitMissingInput, e.what());
    }
    return kExitMissingInput;
}
