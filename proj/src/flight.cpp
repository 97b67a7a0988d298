#include "avdm/flight.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

namespace avdm {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double ground_truth_omega(const BeeState& state, const TerrainProfile& terrain) {
    const double clearance = state.z - terrain.height(state.x);
    if (clearance <= 0.0) return std::nan("");
    return kRadToDeg * state.v_x / clearance;
}

double lift(double omega_est, double omega_set, const ControlParams& params) {
    const double eps = omega_est - omega_set;
    const double base = params.literal_lift_law ? 0.0 : params.mass * params.g;
    return std::max(params.lift_floor, base + params.rho * eps);
}

} // namespace

ControlStepResult control_step(const BeeState& state, double omega_est,
                               double previous_thrust, const ControlParams& params,
                               double dt) {
    params.validate();
    if (!(dt > 0.0))
        fail(ErrorCode::invalid_argument, "control_step needs dt > 0");
    if (!std::isfinite(params.omega_set))
        fail(ErrorCode::invalid_argument, "control_step needs a finite omega_set");

    ControlStepResult result;
    if (std::isfinite(omega_est)) {
        result.epsilon = omega_est - params.omega_set;
        result.thrust = lift(omega_est, params.omega_set, params);
    } else {
        // Decode unavailable: hold the previous lift.
        result.epsilon = std::nan("");
        result.thrust = previous_thrust;
    }

    BeeState next = state;
    next.v_z = state.v_z +
               dt * (result.thrust - params.k * state.v_z - params.mass * params.g) /
                   params.mass;
    next.z = state.z + dt * next.v_z;
    next.x = state.x + dt * state.v_x;
    next.t = state.t + dt;
    result.state = next;
    return result;
}

double preset_phase(BeeState& state, Pipeline& pipeline, const VentralCamera& camera,
                    const TerrainProfile& terrain, const ControlParams& control,
                    const FlightConfig& config) {
    const double dt = pipeline.params().dt;
    const long n_frames = std::lround(config.preset_duration / dt);
    const long first_kept = std::lround(config.preset_discard / dt);
    const double hover_thrust = control.mass * control.g;

    double sum = 0.0;
    long count = 0;
    for (long n = 0; n < n_frames; ++n) {
        const RenderResult view = render_ventral_frame(camera, terrain, state.x, state.z,
                                                       state.t);
        const PipelineOutput out = pipeline.process(view.frame);
        if (n >= first_kept && out.decode_valid) {
            sum += out.omega_hat;
            ++count;
        }
        // Lift balances gravity exactly; drag keeps v_z at 0 once it is 0.
        state.v_z += dt * (hover_thrust - control.k * state.v_z - hover_thrust) /
                     control.mass;
        state.z += dt * state.v_z;
        state.x += dt * state.v_x;
        state.t += dt;
    }
    if (count == 0)
        fail(ErrorCode::preset_failure,
             "no valid angular velocity estimate during the preset phase");
    return sum / static_cast<double>(count);
}

TrajectoryLog run_episode(const ModelParams& model, const ControlParams& control,
                          const TerrainProfile& terrain, const FlightConfig& config) {
    model.validate();
    control.validate();
    if (config.duration < 0.0)
        fail(ErrorCode::invalid_argument, "episode duration must be >= 0");

    VentralCamera camera;
    camera.rows = config.rows;
    camera.cols = config.cols;
    camera.inter_receptor_angle = model.phi;

    // The preset phase runs over t in [-preset_duration, 0); the controlled
    // flight starts at t = 0 and is what the log records.
    BeeState state;
    state.x = config.x0;
    state.z = config.z0;
    state.v_x = config.v_x;
    state.t = -config.preset_duration;

    Pipeline pipeline(model, camera.rows, camera.cols);
    TrajectoryLog log;

    ControlParams engaged = control;
    engaged.omega_set = preset_phase(state, pipeline, camera, terrain, engaged, config);
    log.omega_set = engaged.omega_set;
    state.t = 0.0;

    const double dt = model.dt;
    const long n_frames = std::lround(config.duration / dt);
    double omega_est = engaged.omega_set; // last valid estimate
    double thrust = engaged.mass * engaged.g;

    for (long n = 0; n < n_frames; ++n) {
        const RenderResult view = render_ventral_frame(camera, terrain, state.x, state.z,
                                                       state.t);
        const PipelineOutput out = pipeline.process(view.frame);
        if (out.decode_valid) omega_est = out.omega_hat;

        const ControlStepResult step = control_step(state, omega_est, thrust, engaged, dt);
        thrust = step.thrust;

        const double h = terrain.height(state.x);
        log.records.push_back({state.t, state.x, state.z, h, state.v_z,
                               out.decode_valid ? out.omega_hat : std::nan(""),
                               ground_truth_omega(state, terrain), step.thrust,
                               step.epsilon});

        state = step.state;
        const double h_next = terrain.height(state.x);
        if (state.z <= h_next) {
            log.records.push_back({state.t, state.x, state.z, h_next, state.v_z,
                                   out.decode_valid ? out.omega_hat : std::nan(""),
                                   std::nan(""), step.thrust, step.epsilon});
            log.crash = CrashEvent{state.t, state.x};
            break;
        }
    }
    return log;
}

void save_trajectory(const TrajectoryLog& log, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        fail(ErrorCode::io, "cannot write trajectory file: " + path);
    out << "# units: t[s] x[m] z[m] terrain_h[m] v_z[m/s] omega_est[deg/s] "
           "omega_gt[deg/s] thrust[N] epsilon[deg/s]; omega_set="
        << log.omega_set << " deg/s\n";
    out << "t,x,z,terrain_h,v_z,omega_est,omega_gt,thrust,epsilon\n";
    char buf[320];
    for (const auto& r : log.records) {
        std::snprintf(buf, sizeof(buf),
                      "%.6f,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", r.t, r.x, r.z,
                      r.terrain_h, r.v_z, r.omega_est, r.omega_gt, r.thrust, r.epsilon);
        out << buf;
    }
    if (log.crash)
        out << "# crash t=" << log.crash->t << " x=" << log.crash->x << "\n";
}

} // namespace avdm
