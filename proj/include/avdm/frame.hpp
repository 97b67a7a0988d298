#pragma once

#include <vector>

#include "avdm/error.hpp"

namespace avdm {

// Rectangular grid of doubles, row-major. The second axis (columns) is the
// motion axis throughout.
struct Field {
    int rows = 0;
    int cols = 0;
    std::vector<double> values;

    Field() = default;
    Field(int r, int c, double fill = 0.0)
        : rows(r), cols(c), values(static_cast<size_t>(r) * c, fill) {}

    double& at(int r, int c) { return values[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return values[static_cast<size_t>(r) * cols + c]; }

    bool same_shape(const Field& other) const {
        return rows == other.rows && cols == other.cols;
    }

    double mean() const {
        if (values.empty()) return 0.0;
        double s = 0.0;
        for (double v : values) s += v;
        return s / static_cast<double>(values.size());
    }
};

// One ommatidial luminance image. Samples lie in [0,1], one per receptor.
struct Frame {
    int rows = 0;
    int cols = 0;
    double timestamp = 0.0; // seconds
    std::vector<double> luminance;

    Frame() = default;
    Frame(int r, int c, double t = 0.0)
        : rows(r), cols(c), timestamp(t), luminance(static_cast<size_t>(r) * c, 0.0) {}

    double& at(int r, int c) { return luminance[static_cast<size_t>(r) * cols + c]; }
    double at(int r, int c) const { return luminance[static_cast<size_t>(r) * cols + c]; }

    void validate() const {
        if (rows < 1 || cols < 2)
            fail(ErrorCode::invalid_argument, "frame needs rows >= 1 and cols >= 2");
        if (luminance.size() != static_cast<size_t>(rows) * cols)
            fail(ErrorCode::dimension_mismatch, "frame buffer size does not match rows*cols");
        for (double s : luminance)
            if (!(s >= 0.0 && s <= 1.0))
                fail(ErrorCode::invalid_argument, "luminance sample outside [0,1]");
    }
};

} // namespace avdm
