#pragma once

#include <optional>
#include <string>
#include <vector>

#include "avdm/camera.hpp"
#include "avdm/params.hpp"
#include "avdm/pipeline.hpp"
#include "avdm/terrain.hpp"

namespace avdm {

struct BeeState {
    double x = 0.0;   // meters
    double z = 0.0;   // meters
    double v_x = 4.0; // constant forward speed (m/s)
    double v_z = 0.0; // vertical speed (m/s)
    double t = 0.0;   // seconds
};

struct ControlStepResult {
    BeeState state;
    double thrust = 0.0;  // N, after the lift floor
    double epsilon = 0.0; // deg/s, omega_est - omega_set
};

// One semi-implicit Euler step of the vertical dynamics:
//   T = max(lift_floor, m*g + rho*eps)   (or rho*eps under the literal law)
//   v_z += dt*(T - k*v_z - m*g)/m, then z += dt*v_z, x += dt*v_x.
// A non-finite omega_est holds previous_thrust.
ControlStepResult control_step(const BeeState& state, double omega_est,
                               double previous_thrust, const ControlParams& params,
                               double dt);

struct FlightConfig {
    double v_x = 4.0;
    double z0 = 6.0;
    double x0 = -10.0;
    double duration = 25.0;       // controlled flight (s)
    double preset_duration = 2.0; // gravity-compensated lead-in (s)
    double preset_discard = 1.5;  // part of the preset ignored while filters settle
    int rows = 4;
    int cols = 46;
};

struct TrajectoryRecord {
    double t, x, z, terrain_h, v_z;
    double omega_est; // deg/s; NaN before the first valid decode
    double omega_gt;  // v_x/(z - h) in deg/s
    double thrust;    // N
    double epsilon;   // deg/s; NaN during the preset phase
};

struct CrashEvent {
    double t, x;
};

struct TrajectoryLog {
    double omega_set = 0.0;
    std::vector<TrajectoryRecord> records;
    std::optional<CrashEvent> crash;
};

// Gravity-compensated flight over the terrain measuring omega_set. Advances
// state and pipeline in place. Throws preset_failure when no valid estimate
// appears after preset_discard.
double preset_phase(BeeState& state, Pipeline& pipeline, const VentralCamera& camera,
                    const TerrainProfile& terrain, const ControlParams& control,
                    const FlightConfig& config);

// Preset phase (t in [-preset_duration, 0), unlogged) followed by the
// closed-loop episode from t = 0, which fills the log. Decode-unavailable
// frames reuse the last valid estimate. Ends at the configured duration or on
// crash (z <= terrain height), which is recorded, not thrown.
TrajectoryLog run_episode(const ModelParams& model, const ControlParams& control,
                          const TerrainProfile& terrain, const FlightConfig& config);

// Writes the trajectory CSV (header + units comment, one row per record, and
// a trailing "# crash t=.. x=.." line when the episode crashed).
void save_trajectory(const TrajectoryLog& log, const std::string& path);

} // namespace avdm
