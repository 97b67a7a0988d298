#include "avdm/params.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "avdm/error.hpp"

namespace avdm {

void ControlParams::validate() const {
    if (!(mass > 0.0))
        fail(ErrorCode::invalid_argument, "mass must be > 0");
    if (!(rho >= 0.0) || !(k >= 0.0))
        fail(ErrorCode::invalid_argument, "rho and k must be >= 0");
    if (!(lift_floor >= 0.0))
        fail(ErrorCode::invalid_argument, "lift_floor must be >= 0");
}

namespace {

std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void save_params(const ModelParams& p, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        fail(ErrorCode::io, "cannot write params file: " + path);
    out << "# angular velocity decoding model parameters\n";
    out << "tau=" << format_value(p.tau) << "\n";
    out << "alpha=" << format_value(p.alpha) << "\n";
    out << "phi=" << format_value(p.phi) << "\n";
    out << "m=" << p.m << "\n";
    out << "mu=" << format_value(p.mu) << "\n";
    out << "a_star=" << format_value(p.a_star) << "\n";
    out << "b_star=" << format_value(p.b_star) << "\n";
    out << "dt=" << format_value(p.dt) << "\n";
    out << "window_duration=" << format_value(p.window_duration) << "\n";
}

ModelParams load_params(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::io, "cannot open params file: " + path);
    ModelParams p;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        // Trim whitespace.
        const auto begin = line.find_first_not_of(" \t\r");
        if (begin == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r");
        line = line.substr(begin, end - begin + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            fail(ErrorCode::io, path + ":" + std::to_string(line_no) + ": expected key=value");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 1);
        std::istringstream ss(value);
        double v;
        if (!(ss >> v))
            fail(ErrorCode::io, path + ":" + std::to_string(line_no) + ": bad value for " + key);
        if (key == "tau") p.tau = v;
        else if (key == "alpha") p.alpha = v;
        else if (key == "phi") p.phi = v;
        else if (key == "m") p.m = static_cast<int>(v);
        else if (key == "mu") p.mu = v;
        else if (key == "a_star") p.a_star = v;
        else if (key == "b_star") p.b_star = v;
        else if (key == "dt") p.dt = v;
        else if (key == "window_duration") p.window_duration = v;
        else
            fail(ErrorCode::io,
                 path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
    p.validate();
    return p;
}

void append_fit(const std::string& path, double a_star, double b_star, double rms_error) {
    std::ofstream out(path, std::ios::app);
    if (!out)
        fail(ErrorCode::io, "cannot append to params file: " + path);
    out << "# fitted by alternate iteration, rms_error=" << format_value(rms_error)
        << " deg/s\n";
    out << "a_star=" << format_value(a_star) << "\n";
    out << "b_star=" << format_value(b_star) << "\n";
}

} // namespace avdm
