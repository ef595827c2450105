#pragma once

#include <span>
#include <vector>

namespace logcave {

//! Left-hand slopes of the least concave majorant of the cumulative cloud
//! (sum_{h<=l} weights_h, sum_{h<=l} values_h). Equivalently the
//! weighted antitonic regression of values_h / weights_h:
//!
//!   out_i = min_{j<=i} max_{k>=i} sum_{h=j..k} values_h / sum_{h=j..k} weights_h
//!
//! Computed by pooling adjacent violators on a block stack in O(n). The
//! result is nonincreasing. Throws Error(non_positive_weight) if a weight is
//! not strictly positive and Error(length_mismatch) on size disagreement.
std::vector<double> concave_majorant_slopes(std::span<const double> weights,
                                            std::span<const double> values);

} // namespace logcave
