#include "avdm/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

namespace avdm {

CalibrationGrid CalibrationGrid::defaults() {
    CalibrationGrid grid;
    for (double w = 50.0; w <= 700.0 + 1e-9; w += 50.0)
        grid.omegas.push_back(w);
    grid.lambdas = {19.0, 38.0, 54.0, 72.0};
    grid.contrasts = {0.5, 1.0};
    return grid;
}

std::vector<CalibrationSample> generate_calibration_set(
    const CalibrationGrid& grid, const ModelParams& params, const TrialConfig& trial,
    int threads, std::vector<SkippedSample>* skipped) {
    if (grid.omegas.empty() || grid.lambdas.empty() || grid.contrasts.empty())
        fail(ErrorCode::invalid_argument, "calibration grids must be non-empty");
    for (double w : grid.omegas)
        if (!(w > 0.0))
            fail(ErrorCode::invalid_argument, "calibration omega values must be > 0");

    struct Point {
        double omega, lambda, contrast;
    };
    std::vector<Point> points;
    points.reserve(grid.omegas.size() * grid.lambdas.size() * grid.contrasts.size());
    for (double lambda : grid.lambdas)
        for (double omega : grid.omegas)
            for (double contrast : grid.contrasts)
                points.push_back({omega, lambda, contrast});

    std::vector<TrialResult> results(points.size());
    auto worker = [&](size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) {
            GratingSpec spec;
            spec.spatial_period = points[i].lambda;
            spec.angular_velocity = points[i].omega;
            spec.contrast = points[i].contrast;
            spec.inter_receptor_angle = params.phi;
            results[i] = run_grating_trial(params, spec, trial);
        }
    };

    const int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(points.size())));
    if (n_threads == 1) {
        worker(0, points.size());
    } else {
        std::vector<std::thread> pool;
        const size_t chunk = (points.size() + n_threads - 1) / n_threads;
        for (int t = 0; t < n_threads; ++t) {
            const size_t begin = static_cast<size_t>(t) * chunk;
            const size_t end = std::min(points.size(), begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    std::vector<CalibrationSample> samples;
    samples.reserve(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        if (results[i].valid_frames == 0) {
            if (skipped)
                skipped->push_back({points[i].omega, points[i].lambda, points[i].contrast,
                                    "steady state never decoded"});
            continue;
        }
        samples.push_back({points[i].omega, points[i].lambda, points[i].contrast,
                           results[i].response});
    }
    return samples;
}

namespace {

// Basis value multiplying `a` in the decoder for one sample at exponent b.
double basis(const CalibrationSample& s, double b) {
    const double contrast_factor = (1.0 + s.contrast) / (2.0 * s.contrast);
    return std::pow(s.lambda, b) * contrast_factor * std::sqrt(std::max(s.response, 0.0));
}

struct ProfiledFit {
    double a = 0.0;
    double rss = 0.0;
};

// Closed-form least squares for a at fixed b over omega ~ a * u(b).
ProfiledFit profile_a(std::span<const CalibrationSample> samples, double b) {
    double uu = 0.0, uw = 0.0;
    for (const auto& s : samples) {
        const double u = basis(s, b);
        uu += u * u;
        uw += u * s.omega;
    }
    ProfiledFit fit;
    fit.a = uu > 0.0 ? uw / uu : 0.0;
    for (const auto& s : samples) {
        const double r = s.omega - fit.a * basis(s, b);
        fit.rss += r * r;
    }
    return fit;
}

double golden_section_b(std::span<const CalibrationSample> samples, double lo, double hi) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = profile_a(samples, c).rss;
    double fd = profile_a(samples, d).rss;
    while (hi - lo > 1e-10) {
        if (fc < fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = profile_a(samples, c).rss;
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = profile_a(samples, d).rss;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

CalibrationResult fit_decoder(std::span<const CalibrationSample> samples) {
    if (samples.size() < 2)
        fail(ErrorCode::degenerate_data, "need at least two calibration samples");
    std::set<double> lambdas;
    for (const auto& s : samples) lambdas.insert(s.lambda);
    if (lambdas.size() < 2)
        fail(ErrorCode::degenerate_data,
             "need samples at >= 2 distinct spatial periods to identify b");
    bool any_u = false;
    for (const auto& s : samples)
        if (basis(s, 1.0) > 0.0) any_u = true;
    if (!any_u)
        fail(ErrorCode::degenerate_data, "all basis values are zero (no usable responses)");

    constexpr double kBLo = 0.25, kBHi = 4.0;
    constexpr double kTol = 1e-6;
    constexpr int kMaxIterations = 100;

    CalibrationResult result;
    double b = 1.0; // initial guess
    double a = profile_a(samples, b).a;
    double rss = profile_a(samples, b).rss;

    for (int iter = 1; iter <= kMaxIterations; ++iter) {
        result.iterations = iter;
        const double b_new = golden_section_b(samples, kBLo, kBHi);
        const ProfiledFit fit = profile_a(samples, b_new);
        if (fit.rss > rss) {
            // Residual must not increase; keep the current point.
            result.converged = true;
            break;
        }
        const double da = std::abs(fit.a - a) / std::max(std::abs(fit.a), 1e-300);
        const double db = std::abs(b_new - b);
        a = fit.a;
        b = b_new;
        rss = fit.rss;
        if (da < kTol && db < kTol) {
            result.converged = true;
            break;
        }
    }

    result.a_star = a;
    result.b_star = b;
    result.rms_error = std::sqrt(rss / static_cast<double>(samples.size()));
    return result;
}

double predict_omega(const CalibrationResult& result, const CalibrationSample& sample) {
    return result.a_star * basis(sample, result.b_star);
}

FitEvaluation evaluate_fit(const CalibrationResult& result,
                           std::span<const CalibrationSample> samples) {
    FitEvaluation eval;
    eval.rel_errors.reserve(samples.size());
    double sum_sq = 0.0;
    for (const auto& s : samples) {
        const double rel = std::abs(predict_omega(result, s) - s.omega) / s.omega;
        eval.rel_errors.push_back(rel);
        eval.max_rel = std::max(eval.max_rel, rel);
        sum_sq += rel * rel;
    }
    if (!samples.empty())
        eval.rms_rel = std::sqrt(sum_sq / static_cast<double>(samples.size()));
    return eval;
}

} // namespace avdm
