#pragma once

#include <deque>
#include <utility>
#include <vector>

#include "avdm/frame.hpp"

namespace avdm {

// p_i = (1 + e^(mu*i))^-1 for i = 1..m; strictly decreasing for mu > 0.
std::vector<double> persistence_coefficients(int m, double mu);

// Lamina layer: temporal luminance change with persistence,
// P(t) = I(t) - I(t-1) + sum_i p_i * P(t-i). The first frame yields P = 0.
class LaminaFilter {
public:
    LaminaFilter(int rows, int cols, int m, double mu);

    Field step(const Frame& frame);
    void reset();

    int rows() const { return rows_; }
    int cols() const { return cols_; }

private:
    int rows_;
    int cols_;
    std::vector<double> coef_;
    bool have_previous_ = false;
    Field previous_;
    std::deque<Field> history_; // most recent output at the back
};

// ON keeps increments, OFF keeps decrements; their sum restores the input.
std::pair<Field, Field> split_on_off(const Field& p);

// First-order low-pass, y += beta*(x - y), used to extract the pathway
// activity envelope before the delay stage.
class EnvelopeFilter {
public:
    EnvelopeFilter(double time_constant, double dt);

    Field apply(const Field& input);
    void reset();

    bool enabled() const { return beta_ < 1.0; }

private:
    double beta_;
    bool primed_ = false;
    Field state_;
};

// HR-balanced correlation of a delayed and a current field. Output column y
// pairs receptor y with its motion-axis neighbour y+1:
//   D(y) = delayed(y)*current(y+1) - alpha*current(y)*delayed(y+1)
Field hr_balanced_field(const Field& delayed, const Field& current, double alpha);

// Delay lines for both pathways plus the balance weight. ready() once
// tau_steps+1 fields are buffered; detector_field() sums ON and OFF outputs.
class PathwayBuffers {
public:
    PathwayBuffers(int tau_steps, double alpha);

    void push(Field p_on, Field p_off);
    bool ready() const;
    Field detector_field() const;
    void reset();

    int tau_steps() const { return tau_steps_; }
    double alpha() const { return alpha_; }

private:
    int tau_steps_;
    double alpha_;
    std::deque<Field> on_;  // front = t - tau, back = t
    std::deque<Field> off_;
};

// Sliding mean over a fixed number of steps (the response window).
class SlidingMean {
public:
    explicit SlidingMean(int capacity);

    void push(double value);
    bool full() const { return static_cast<int>(window_.size()) == capacity_; }
    bool empty() const { return window_.empty(); }
    double mean() const;
    void reset();

    int capacity() const { return capacity_; }

private:
    int capacity_;
    std::deque<double> window_;
};

// Time-and-space averaged detector response R.
class ResponseAccumulator {
public:
    explicit ResponseAccumulator(int window_steps) : window_(window_steps) {}

    void push(const Field& detector) { window_.push(detector.mean()); }
    bool has_response() const { return window_.full(); }
    double response() const; // throws decode_unavailable when the window is not full
    void reset() { window_.reset(); }

private:
    SlidingMean window_;
};

} // namespace avdm
