#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fgs/model.hpp"

namespace fgs {

/// Connected spot blobs of a thresholded field, reduced to intensity-weighted
/// centroids in physical coordinates. Components touching the domain boundary
/// are kept.
struct SpotSet {
    std::vector<std::pair<double, double>> centroids;
    double threshold = 0.0;
    std::size_t count() const { return centroids.size(); }
};

/// Binarize field > threshold, 4-connected labeling, one centroid per
/// component. An empty result (nothing above threshold) is not an error.
SpotSet detect_spots(const Field& field, const Domain2D& domain, double threshold);

/// Threshold given as a fraction of the field maximum.
SpotSet detect_spots_frac(const Field& field, const Domain2D& domain, double fraction = 0.3);

/// Pair-distance histogram normalized by the total spot count, in the raw
/// per-spot convention (no shell-area correction). r1, r2 are the bin centers
/// of the first two prominent maxima in increasing r.
struct RdfProfile {
    std::vector<double> bin_edges;   // size g.size() + 1
    std::vector<double> g;
    std::optional<double> r1, r2;
    std::size_t spot_count = 0;

    double bin_width() const { return bin_edges.size() > 1 ? bin_edges[1] - bin_edges[0] : 0.0; }
    double bin_center(std::size_t b) const { return 0.5 * (bin_edges[b] + bin_edges[b + 1]); }
};

RdfProfile rdf(const SpotSet& spots, double bin_width, double r_max);

/// Exponential scaling fit r ~ A exp(-beta / alpha) by least squares of
/// ln r against 1/alpha.
struct ScalingFit {
    double beta;
    double log_prefactor;
    double residual;   // rms residual in log space
    std::vector<std::pair<double, double>> samples;
};

ScalingFit fit_scaling(std::span<const std::pair<double, double>> samples);

} // namespace fgs
