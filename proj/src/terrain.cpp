#include "avdm/terrain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "avdm/error.hpp"

namespace avdm {

double GratingTexture::value(double ground_x) const {
    const double inv_c = 1.0 / contrast;
    double s = std::sin(2.0 * std::numbers::pi * ground_x / period);
    if (waveform == Waveform::square)
        s = (s > 0.0) ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
    return (s + inv_c) / (inv_c + 1.0);
}

PatchyTexture::PatchyTexture(uint64_t seed, double patch_scale, double bright, double dark,
                             double domain_min, double domain_max)
    : seed_(seed), bright_(bright), dark_(dark), domain_min_(domain_min) {
    if (!(patch_scale > 0.0))
        fail(ErrorCode::invalid_argument, "patch_scale must be > 0");
    if (!(dark >= 0.0 && dark <= bright && bright <= 1.0))
        fail(ErrorCode::invalid_argument, "patchy texture needs 0 <= dark <= bright <= 1");
    if (!(domain_max > domain_min))
        fail(ErrorCode::invalid_argument, "patchy texture domain is empty");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> width_jitter(0.6, 1.6);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> long_run(2.5, 5.0);

    double x = domain_min;
    bool is_bright = unit(rng) < 0.5;
    boundaries_.push_back(x);
    while (x < domain_max) {
        double width = patch_scale * width_jitter(rng);
        // Occasional long snow fields: stretches of low-contrast bright ground.
        if (is_bright && unit(rng) < 0.18)
            width *= long_run(rng);
        levels_.push_back(is_bright ? bright_ : dark_);
        x += width;
        boundaries_.push_back(x);
        is_bright = !is_bright;
    }
}

double PatchyTexture::value(double ground_x) const {
    if (ground_x <= boundaries_.front()) return levels_.front();
    if (ground_x >= boundaries_.back()) return levels_.back();
    const auto it = std::upper_bound(boundaries_.begin(), boundaries_.end(), ground_x);
    const size_t idx = static_cast<size_t>(it - boundaries_.begin()) - 1;
    return levels_[std::min(idx, levels_.size() - 1)];
}

TerrainProfile::TerrainProfile(std::vector<double> xs, std::vector<double> hs,
                               TerrainTexture texture)
    : xs_(std::move(xs)), hs_(std::move(hs)), texture_(std::move(texture)) {
    if (xs_.size() != hs_.size() || xs_.size() < 2)
        fail(ErrorCode::invalid_argument, "terrain needs >= 2 (x, h) samples");
    for (size_t i = 0; i < xs_.size(); ++i) {
        if (!std::isfinite(xs_[i]) || !std::isfinite(hs_[i]))
            fail(ErrorCode::invalid_argument, "terrain samples must be finite");
        if (i > 0 && !(xs_[i] > xs_[i - 1]))
            fail(ErrorCode::invalid_argument, "terrain ground_x must be strictly increasing");
    }
    max_height_ = *std::max_element(hs_.begin(), hs_.end());
}

double TerrainProfile::height(double ground_x) const {
    if (ground_x <= xs_.front()) return hs_.front();
    if (ground_x >= xs_.back()) return hs_.back();
    const auto it = std::upper_bound(xs_.begin(), xs_.end(), ground_x);
    const size_t i = static_cast<size_t>(it - xs_.begin());
    const double t = (ground_x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
    return hs_[i - 1] + t * (hs_[i] - hs_[i - 1]);
}

double TerrainProfile::texture_at(double ground_x) const {
    const double clamped = std::clamp(ground_x, xs_.front(), xs_.back());
    return std::visit([&](const auto& tex) { return tex.value(clamped); }, texture_);
}

bool TerrainProfile::in_domain(double ground_x) const {
    return ground_x >= xs_.front() && ground_x <= xs_.back();
}

namespace {

constexpr double kSampleStep = 0.05; // meters

std::vector<double> sample_axis(double x_min, double x_max) {
    std::vector<double> xs;
    const int n = static_cast<int>(std::ceil((x_max - x_min) / kSampleStep));
    xs.reserve(n + 1);
    for (int i = 0; i <= n; ++i)
        xs.push_back(x_min + i * kSampleStep);
    return xs;
}

// Seeded sum of incommensurate sine octaves, zero for x < 0 and blended in
// over the first 10 m.
double mountain_height(double x, const std::array<double, 5>& phases) {
    if (x <= 0.0) return 0.0;
    const double base_wavelength = 60.0;
    const double base_amplitude = 1.1;
    double h = 0.0;
    double amp = base_amplitude;
    double wl = base_wavelength;
    for (int o = 0; o < 5; ++o) {
        h += amp * std::sin(2.0 * std::numbers::pi * x / wl + phases[o]);
        amp *= 0.5;
        wl *= 0.45;
    }
    const double ramp = std::clamp(x / 10.0, 0.0, 1.0);
    return h * ramp * ramp * (3.0 - 2.0 * ramp);
}

std::array<double, 5> mountain_phases(uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::array<double, 5> phases{};
    for (auto& p : phases) p = phase(rng);
    return phases;
}

} // namespace

TerrainProfile make_flat_terrain(double x_min, double x_max) {
    return TerrainProfile({x_min, x_max}, {0.0, 0.0}, GratingTexture{});
}

TerrainProfile make_sine_hills_terrain(const SineHillsSpec& spec, double x_min, double x_max) {
    auto xs = sample_axis(x_min, x_max);
    std::vector<double> hs(xs.size());
    for (size_t i = 0; i < xs.size(); ++i)
        hs[i] = xs[i] >= 0.0
                    ? spec.amplitude * std::sin(2.0 * std::numbers::pi * xs[i] / spec.wavelength)
                    : 0.0;
    return TerrainProfile(std::move(xs), std::move(hs), GratingTexture{});
}

TerrainProfile make_mountain_terrain(uint64_t seed, double x_min, double x_max) {
    const auto phases = mountain_phases(seed);
    auto xs = sample_axis(x_min, x_max);
    std::vector<double> hs(xs.size());
    for (size_t i = 0; i < xs.size(); ++i)
        hs[i] = mountain_height(xs[i], phases);
    return TerrainProfile(std::move(xs), std::move(hs), GratingTexture{});
}

TerrainProfile make_snow_rock_terrain(uint64_t seed, double x_min, double x_max) {
    TerrainProfile terrain = make_mountain_terrain(seed, x_min, x_max);
    // Texture seed decorrelated from the ridge seed.
    const uint64_t tex_seed = seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL;
    terrain.set_texture(PatchyTexture(tex_seed, 2.0, 0.9, 0.1, x_min - 20.0, x_max + 20.0));
    return terrain;
}

TerrainProfile terrain_library(const std::string& name, uint64_t seed) {
    if (name == "flat") return make_flat_terrain();
    if (name == "sine_hills") return make_sine_hills_terrain();
    if (name == "mountain") return make_mountain_terrain(seed);
    if (name == "snow_rock") return make_snow_rock_terrain(seed);
    fail(ErrorCode::unknown_name, "unknown terrain '" + name +
                                      "' (expected flat, sine_hills, mountain or snow_rock)");
}

TerrainProfile load_terrain(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        fail(ErrorCode::io, "cannot open terrain file: " + path);
    std::vector<double> xs, hs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double x, h;
        if (!(ss >> x)) continue; // blank or comment-only line
        if (!(ss >> h))
            fail(ErrorCode::io, path + ":" + std::to_string(line_no) +
                                    ": expected 'ground_x height'");
        xs.push_back(x);
        hs.push_back(h);
    }
    return TerrainProfile(std::move(xs), std::move(hs), GratingTexture{});
}

void save_terrain(const TerrainProfile& terrain, const std::string& path) {
    std::ofstream out(path);
    if (!out)
        fail(ErrorCode::io, "cannot write terrain file: " + path);
    out << "# ground_x[m] height[m]\n";
    const auto& xs = terrain.sample_xs();
    const auto& hs = terrain.sample_hs();
    char buf[80];
    for (size_t i = 0; i < xs.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.17g %.17g\n", xs[i], hs[i]);
        out << buf;
    }
}

} // namespace avdm
