#pragma once

#include <cmath>

#include "drdf/error.hpp"

namespace drdf {

struct AcquisitionParams {
    /// Weight on the posterior standard deviation.
    double k_weight = 2.0;
};

/// Lower confidence bound, mean - k * sqrt(variance). Lower is better.
inline double lcb(double mean, double variance, const AcquisitionParams& params) {
    if (variance < 0.0 || std::isnan(variance)) throw InvalidArgument("lcb: negative variance");
    if (params.k_weight < 0.0) throw InvalidArgument("lcb: k_weight must be nonnegative");
    if (variance == 0.0) return mean;
    return mean - params.k_weight * std::sqrt(variance);
}

}  // namespace drdf
