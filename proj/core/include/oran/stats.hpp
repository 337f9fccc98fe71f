#pragma once

#include <optional>
#include <span>
#include <vector>

namespace oran::stats {

/// Trailing mean over min(window, i + 1) points ending at i.
std::vector<double> trailing_moving_average(std::span<const double> series, int window);

struct ConvergenceReport {
    std::optional<int> episode;  // empty: not converged
    double plateau_mean = 0.0;   // mean of the final `window` points
};

/// First episode e from which the trailing moving average stays within
/// +-band_frac * |plateau| of the plateau mean until the end of the series.
/// The stable stretch must last at least `window` episodes, otherwise the
/// series is reported as not converged. Throws when series.size() < window.
ConvergenceReport detect_convergence(std::span<const double> series, int window = 100, double band_frac = 0.05);

struct Summary {
    double mean = 0.0;
    double stddev = 0.0;  // sample (n - 1) standard deviation
    int n = 0;
};

Summary summarize(std::span<const double> values);

struct WelchResult {
    double t = 0.0;  // (mean_a - mean_b) / standard error
    double df = 0.0;
    double p_two_sided = 1.0;
};

/// Welch two-sample t-test with Satterthwaite degrees of freedom.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);
WelchResult welch_from_summary(const Summary& a, const Summary& b);

}  // namespace oran::stats
