#include "avdm/motion.hpp"

#include <cmath>

namespace avdm {

std::vector<double> persistence_coefficients(int m, double mu) {
    if (m < 0)
        fail(ErrorCode::invalid_argument, "persistence depth m must be >= 0");
    std::vector<double> coef(static_cast<size_t>(m));
    for (int i = 1; i <= m; ++i)
        coef[i - 1] = 1.0 / (1.0 + std::exp(mu * i));
    return coef;
}

LaminaFilter::LaminaFilter(int rows, int cols, int m, double mu)
    : rows_(rows), cols_(cols), coef_(persistence_coefficients(m, mu)) {
    if (rows < 1 || cols < 2)
        fail(ErrorCode::invalid_argument, "lamina needs rows >= 1 and cols >= 2");
}

Field LaminaFilter::step(const Frame& frame) {
    if (frame.rows != rows_ || frame.cols != cols_)
        fail(ErrorCode::dimension_mismatch, "frame dimensions changed mid-stream");

    Field p(rows_, cols_);
    if (have_previous_) {
        for (size_t i = 0; i < p.values.size(); ++i)
            p.values[i] = frame.luminance[i] - previous_.values[i];
        // Persistence: history_.back() is P(t-1).
        for (size_t k = 0; k < coef_.size() && k < history_.size(); ++k) {
            const Field& past = history_[history_.size() - 1 - k];
            const double pk = coef_[k];
            for (size_t i = 0; i < p.values.size(); ++i)
                p.values[i] += pk * past.values[i];
        }
    }
    previous_.rows = rows_;
    previous_.cols = cols_;
    previous_.values.assign(frame.luminance.begin(), frame.luminance.end());
    have_previous_ = true;

    history_.push_back(p);
    if (history_.size() > coef_.size() && !history_.empty())
        history_.pop_front();
    return p;
}

void LaminaFilter::reset() {
    have_previous_ = false;
    history_.clear();
}

std::pair<Field, Field> split_on_off(const Field& p) {
    Field on(p.rows, p.cols);
    Field off(p.rows, p.cols);
    for (size_t i = 0; i < p.values.size(); ++i) {
        const double v = p.values[i];
        on.values[i] = v > 0.0 ? v : 0.0;
        off.values[i] = v < 0.0 ? v : 0.0;
    }
    return {std::move(on), std::move(off)};
}

EnvelopeFilter::EnvelopeFilter(double time_constant, double dt) {
    if (time_constant <= 0.0) {
        beta_ = 1.0; // pass-through
    } else {
        beta_ = 1.0 - std::exp(-dt / time_constant);
    }
}

Field EnvelopeFilter::apply(const Field& input) {
    if (beta_ >= 1.0) return input;
    if (!primed_) {
        state_ = Field(input.rows, input.cols, 0.0);
        primed_ = true;
    }
    for (size_t i = 0; i < input.values.size(); ++i)
        state_.values[i] += beta_ * (input.values[i] - state_.values[i]);
    return state_;
}

void EnvelopeFilter::reset() {
    primed_ = false;
}

Field hr_balanced_field(const Field& delayed, const Field& current, double alpha) {
    if (!delayed.same_shape(current))
        fail(ErrorCode::dimension_mismatch, "delayed/current field shapes differ");
    Field d(current.rows, current.cols - 1);
    for (int r = 0; r < current.rows; ++r)
        for (int c = 0; c + 1 < current.cols; ++c)
            d.at(r, c) = delayed.at(r, c) * current.at(r, c + 1) -
                         alpha * current.at(r, c) * delayed.at(r, c + 1);
    return d;
}

PathwayBuffers::PathwayBuffers(int tau_steps, double alpha)
    : tau_steps_(tau_steps), alpha_(alpha) {
    if (tau_steps < 1)
        fail(ErrorCode::invalid_argument, "tau_steps must be >= 1");
}

void PathwayBuffers::push(Field p_on, Field p_off) {
    on_.push_back(std::move(p_on));
    off_.push_back(std::move(p_off));
    const size_t cap = static_cast<size_t>(tau_steps_) + 1;
    while (on_.size() > cap) on_.pop_front();
    while (off_.size() > cap) off_.pop_front();
}

bool PathwayBuffers::ready() const {
    return on_.size() == static_cast<size_t>(tau_steps_) + 1;
}

Field PathwayBuffers::detector_field() const {
    if (!ready())
        fail(ErrorCode::decode_unavailable, "pathway buffers still warming up");
    Field d = hr_balanced_field(on_.front(), on_.back(), alpha_);
    const Field off = hr_balanced_field(off_.front(), off_.back(), alpha_);
    for (size_t i = 0; i < d.values.size(); ++i)
        d.values[i] += off.values[i];
    return d;
}

void PathwayBuffers::reset() {
    on_.clear();
    off_.clear();
}

SlidingMean::SlidingMean(int capacity) : capacity_(capacity) {
    if (capacity < 1)
        fail(ErrorCode::invalid_argument, "sliding window capacity must be >= 1");
}

void SlidingMean::push(double value) {
    window_.push_back(value);
    if (static_cast<int>(window_.size()) > capacity_)
        window_.pop_front();
}

double SlidingMean::mean() const {
    if (window_.empty())
        fail(ErrorCode::decode_unavailable, "empty averaging window");
    double s = 0.0;
    for (double v : window_) s += v;
    return s / static_cast<double>(window_.size());
}

void SlidingMean::reset() {
    window_.clear();
}

double ResponseAccumulator::response() const {
    if (!window_.full())
        fail(ErrorCode::decode_unavailable, "response window not yet full");
    return window_.mean();
}

} // namespace avdm
