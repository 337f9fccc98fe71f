#include "oran/stats.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace oran::stats {

std::vector<double> trailing_moving_average(std::span<const double> series, int window) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    std::vector<double> out(series.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < series.size(); ++i) {
        sum += series[i];
        if (i >= static_cast<std::size_t>(window)) sum -= series[i - static_cast<std::size_t>(window)];
        const auto n = std::min<std::size_t>(i + 1, static_cast<std::size_t>(window));
        out[i] = sum / static_cast<double>(n);
    }
    return out;
}

ConvergenceReport detect_convergence(std::span<const double> series, int window, double band_frac) {
    if (window < 1) throw std::invalid_argument("window must be >= 1");
    if (band_frac < 0.0) throw std::invalid_argument("band must be >= 0");
    if (series.size() < static_cast<std::size_t>(window)) {
        throw std::invalid_argument("series of length " + std::to_string(series.size()) +
                                    " is shorter than the window " + std::to_string(window));
    }
    const auto tail = series.last(static_cast<std::size_t>(window));
    ConvergenceReport rep;
    rep.plateau_mean = std::accumulate(tail.begin(), tail.end(), 0.0) / window;
    const double band = band_frac * std::abs(rep.plateau_mean);

    // Moving averages recomputed directly per point keep the check free of
    // running-sum drift on long series.
    const auto n = static_cast<long>(series.size());
    long first_stable = n;
    for (long e = n - 1; e >= 0; --e) {
        const long lo = std::max(0L, e - window + 1);
        double s = 0.0;
        for (long i = lo; i <= e; ++i) s += series[static_cast<std::size_t>(i)];
        const double ma = s / static_cast<double>(e - lo + 1);
        if (std::abs(ma - rep.plateau_mean) > band) break;
        first_stable = e;
    }
    if (n - first_stable >= window) rep.episode = static_cast<int>(first_stable);
    return rep;
}

Summary summarize(std::span<const double> values) {
    Summary s;
    s.n = static_cast<int>(values.size());
    if (s.n == 0) return s;
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / s.n;
    if (s.n > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / (s.n - 1));
    }
    return s;
}

WelchResult welch_from_summary(const Summary& a, const Summary& b) {
    if (a.n < 2 || b.n < 2) throw std::invalid_argument("Welch test needs at least two samples per group");
    const double va = a.stddev * a.stddev / a.n;
    const double vb = b.stddev * b.stddev / b.n;
    WelchResult r;
    if (va + vb == 0.0) {
        if (a.mean != b.mean) {
            throw std::invalid_argument("Welch test undefined: both samples are constant with different means");
        }
        r.t = 0.0;
        r.df = a.n + b.n - 2;
        r.p_two_sided = 1.0;
        return r;
    }
    r.t = (a.mean - b.mean) / std::sqrt(va + vb);
    r.df = (va + vb) * (va + vb) / (va * va / (a.n - 1) + vb * vb / (b.n - 1));
    const boost::math::students_t dist(r.df);
    r.p_two_sided = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
    return r;
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    return welch_from_summary(summarize(a), summarize(b));
}

}  // namespace oran::stats
