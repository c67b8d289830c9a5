#pragma once

#include <vector>

namespace trackref {

/// Maximum-total-weight one-to-one assignment between rows and columns of a
/// rectangular weight matrix (weights >= 0). Returns, per row, the assigned
/// column or -1. Every row on the smaller side is assigned; rows whose best
/// use is a zero-weight pairing are still reported, so callers that treat
/// zero weight as "no match" must filter those pairs themselves.
std::vector<int> max_weight_assignment(const std::vector<std::vector<double>>& weights);

}  // namespace trackref
