#include "fgs/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fgs/error.hpp"

namespace fgs {

SpotSet detect_spots(const Field& field, const Domain2D& domain, double threshold) {
    if (!field.finite()) throw Error("detect_spots: field contains non-finite values");
    if (!(threshold > 0.0)) throw Error("detect_spots: threshold must be positive");
    const std::size_t rows = field.rows;
    const std::size_t cols = field.cols;

    SpotSet spots;
    spots.threshold = threshold;
    std::vector<int> label(rows * cols, -1);
    std::vector<std::size_t> stack;

    for (std::size_t start = 0; start < rows * cols; ++start) {
        if (label[start] >= 0 || !(field.data[start] > threshold)) continue;
        const int id = static_cast<int>(spots.centroids.size());
        double mass = 0.0, mx = 0.0, my = 0.0;
        stack.assign(1, start);
        label[start] = id;
        while (!stack.empty()) {
            const std::size_t m = stack.back();
            stack.pop_back();
            const std::size_t i = m / cols;
            const std::size_t j = m % cols;
            const double w = field.data[m];
            mass += w;
            mx += w * domain.x(i + 1);
            my += w * domain.y(j + 1);
            const long di[4] = {-1, 1, 0, 0};
            const long dj[4] = {0, 0, -1, 1};
            for (int k = 0; k < 4; ++k) {
                const long ni = static_cast<long>(i) + di[k];
                const long nj = static_cast<long>(j) + dj[k];
                if (ni < 0 || nj < 0 || ni >= static_cast<long>(rows) ||
                    nj >= static_cast<long>(cols))
                    continue;
                const std::size_t q = static_cast<std::size_t>(ni) * cols +
                                      static_cast<std::size_t>(nj);
                if (label[q] < 0 && field.data[q] > threshold) {
                    label[q] = id;
                    stack.push_back(q);
                }
            }
        }
        spots.centroids.emplace_back(mx / mass, my / mass);
    }
    return spots;
}

SpotSet detect_spots_frac(const Field& field, const Domain2D& domain, double fraction) {
    const double peak = *std::max_element(field.data.begin(), field.data.end());
    if (!(peak > 0.0)) return SpotSet{{}, 0.0};
    return detect_spots(field, domain, fraction * peak);
}

namespace {

/// Prominence of the local maximum at p: height above the higher of the two
/// valley floors encountered before reaching taller bins (or the edges).
double prominence(const std::vector<double>& g, std::size_t p) {
    double left_floor = g[p];
    for (std::size_t i = p; i-- > 0;) {
        left_floor = std::min(left_floor, g[i]);
        if (g[i] > g[p]) break;
    }
    double right_floor = g[p];
    for (std::size_t i = p + 1; i < g.size(); ++i) {
        right_floor = std::min(right_floor, g[i]);
        if (g[i] > g[p]) break;
    }
    return g[p] - std::max(left_floor, right_floor);
}

} // namespace

RdfProfile rdf(const SpotSet& spots, double bin_width, double r_max) {
    if (spots.count() < 2) throw Error("rdf: need at least two spots, got " +
                                       std::to_string(spots.count()));
    if (!(bin_width > 0.0)) throw Error("rdf: bin width must be positive");
    if (!(r_max > bin_width)) throw Error("rdf: r_max must exceed the bin width");

    RdfProfile prof;
    prof.spot_count = spots.count();
    const std::size_t n_bins = static_cast<std::size_t>(std::ceil(r_max / bin_width));
    prof.bin_edges.resize(n_bins + 1);
    for (std::size_t b = 0; b <= n_bins; ++b) prof.bin_edges[b] = bin_width * static_cast<double>(b);
    std::vector<std::size_t> counts(n_bins, 0);

    const auto& c = spots.centroids;
    for (std::size_t a = 0; a < c.size(); ++a) {
        for (std::size_t b = a + 1; b < c.size(); ++b) {
            const double r = std::hypot(c[a].first - c[b].first, c[a].second - c[b].second);
            if (r > r_max) continue;
            const std::size_t bin =
                std::min(static_cast<std::size_t>(r / bin_width), n_bins - 1);
            ++counts[bin];
        }
    }
    prof.g.resize(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b)
        prof.g[b] = static_cast<double>(counts[b]) / static_cast<double>(prof.spot_count);

    // 3-bin moving average before peak picking; binned g is noisy.
    std::vector<double> smooth(n_bins);
    for (std::size_t b = 0; b < n_bins; ++b) {
        double s = prof.g[b];
        double w = 1.0;
        if (b > 0) { s += prof.g[b - 1]; w += 1.0; }
        if (b + 1 < n_bins) { s += prof.g[b + 1]; w += 1.0; }
        smooth[b] = s / w;
    }
    const double peak_floor = 0.1 * *std::max_element(smooth.begin(), smooth.end());
    std::vector<std::size_t> peaks;
    // plateau-aware local maxima: a run of equal smoothed values flanked by
    // lower bins counts once, anchored at its largest raw bin
    std::size_t b = 0;
    while (b < n_bins) {
        std::size_t e = b;
        while (e + 1 < n_bins && smooth[e + 1] == smooth[b]) ++e;
        const bool rises = b == 0 ? smooth[b] > 0.0 : smooth[b] > smooth[b - 1];
        const bool falls = e + 1 >= n_bins || smooth[b] > smooth[e + 1];
        if (b > 0 && e + 1 < n_bins && rises && falls) {
            std::size_t anchor = b;
            for (std::size_t c = b; c <= e; ++c)
                if (prof.g[c] > prof.g[anchor]) anchor = c;
            if (prominence(smooth, anchor) >= peak_floor) peaks.push_back(anchor);
        }
        b = e + 1;
    }
    if (!peaks.empty()) prof.r1 = prof.bin_center(peaks[0]);
    if (peaks.size() > 1) prof.r2 = prof.bin_center(peaks[1]);
    return prof;
}

ScalingFit fit_scaling(std::span<const std::pair<double, double>> samples) {
    if (samples.size() < 3) throw Error("fit_scaling: need at least three (alpha, r) samples");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& [alpha, r] : samples) {
        if (!(alpha > 1.0 && alpha <= 2.0))
            throw Error("fit_scaling: alpha = " + std::to_string(alpha) +
                        " outside (1, 2]");
        if (!(r > 0.0)) throw Error("fit_scaling: spot distances must be positive");
        const double x = 1.0 / alpha;
        const double y = std::log(r);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(samples.size());
    const double denom = n * sxx - sx * sx;
    if (std::abs(denom) < 1e-30)
        throw Error("fit_scaling: degenerate abscissae (all alpha equal)");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;

    ScalingFit fit;
    fit.beta = -slope;
    fit.log_prefactor = intercept;
    fit.samples.assign(samples.begin(), samples.end());
    double ss = 0.0;
    for (const auto& [alpha, r] : samples) {
        const double resid = std::log(r) - (intercept + slope / alpha);
        ss += resid * resid;
    }
    fit.residual = std::sqrt(ss / n);
    return fit;
}

} // namespace fgs
