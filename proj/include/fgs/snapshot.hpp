#pragma once

#include <string>

#include "fgs/model.hpp"

namespace fgs {

/// On-disk state: magic "FGS1", little-endian u32 N_x, u32 N_y, then f64
/// a, b, c, d, alpha, t, then the (N_x-1)(N_y-1) interior U values row-major
/// and the V values in the same layout. Round trips are bit exact.
struct Snapshot {
    FieldPair state;
    Domain2D domain;
    double alpha;
    double t;
};

void write_snapshot(const std::string& path, const FieldPair& state, const Domain2D& domain,
                    double alpha, double t);

Snapshot read_snapshot(const std::string& path);

} // namespace fgs
