#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "avdm/grating.hpp"

namespace avdm {

// Periodic ground texture, intensity in [0,1] as a function of ground x.
struct GratingTexture {
    double period = 2.0; // meters per cycle
    double contrast = 1.0;
    Waveform waveform = Waveform::sine;

    double value(double ground_x) const;
};

// Irregular bright/dark patches (snow and rock). Patch widths are drawn
// around patch_scale from a seeded generator; bright patches occasionally run
// several times longer, giving stretches of nearly uniform ground.
class PatchyTexture {
public:
    PatchyTexture(uint64_t seed, double patch_scale, double bright, double dark,
                  double domain_min, double domain_max);

    double value(double ground_x) const;

    uint64_t seed() const { return seed_; }
    double bright() const { return bright_; }
    double dark() const { return dark_; }

private:
    uint64_t seed_;
    double bright_;
    double dark_;
    double domain_min_;
    std::vector<double> boundaries_; // ascending patch edges from domain_min
    std::vector<double> levels_;     // levels_[i] covers [boundaries_[i], boundaries_[i+1])
};

using TerrainTexture = std::variant<GratingTexture, PatchyTexture>;

// 1-D terrain: piecewise-linear height over ground x plus a texture. Heights
// and textures clamp to the nearest sample outside the sampled domain.
class TerrainProfile {
public:
    TerrainProfile(std::vector<double> xs, std::vector<double> hs, TerrainTexture texture);

    double height(double ground_x) const;
    double texture_at(double ground_x) const; // clamps ground_x into the domain
    bool in_domain(double ground_x) const;

    double x_min() const { return xs_.front(); }
    double x_max() const { return xs_.back(); }
    double max_height() const { return max_height_; }

    const std::vector<double>& sample_xs() const { return xs_; }
    const std::vector<double>& sample_hs() const { return hs_; }

    void set_texture(TerrainTexture texture) { texture_ = std::move(texture); }

private:
    std::vector<double> xs_;
    std::vector<double> hs_;
    double max_height_ = 0.0;
    TerrainTexture texture_;
};

// Named profiles used by the flight experiments: flat, sine_hills, mountain,
// snow_rock. The first 20 m (x < 0) are always flat so the preset phase runs
// over level ground.
TerrainProfile terrain_library(const std::string& name, uint64_t seed = 1);

struct SineHillsSpec {
    double amplitude = 1.0;  // meters
    double wavelength = 50.0; // meters
};

TerrainProfile make_flat_terrain(double x_min = -20.0, double x_max = 200.0);
TerrainProfile make_sine_hills_terrain(const SineHillsSpec& spec = {},
                                       double x_min = -20.0, double x_max = 200.0);
TerrainProfile make_mountain_terrain(uint64_t seed, double x_min = -20.0,
                                     double x_max = 200.0);
TerrainProfile make_snow_rock_terrain(uint64_t seed, double x_min = -20.0,
                                      double x_max = 200.0);

// Loads "ground_x height" pairs from a plain text file; '#' starts a comment.
// The returned profile carries the default grating texture until replaced.
TerrainProfile load_terrain(const std::string& path);
void save_terrain(const TerrainProfile& terrain, const std::string& path);

} // namespace avdm
