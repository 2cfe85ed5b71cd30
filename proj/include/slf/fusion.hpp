#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "slf/ccl.hpp"
#include "slf/volume.hpp"

namespace slf {

// Double-threshold fusion parameters. tau1 is the strict "voter" threshold
// that seeds components; tau2 is the lower candidate threshold. Both are
// compared strictly (count > tau).
struct FusionParams {
    std::int32_t tau1 = 18;
    std::int32_t tau2 = 8;
    std::int32_t n_views = 24;
    Connectivity connectivity = Connectivity::c26;
};

// Enforces 0 <= tau2 <= tau1 < n_views and n_views > 0.
void validate(const FusionParams& params);

// Voxelwise sum of the masks: the per-voxel count of agreeing voters.
// All masks must share dims and spacing; a mismatch names the offending index.
ConfidenceMap confidence_map(std::span<const BinaryMask> masks);

// Voxel is set iff its count strictly exceeds tau. Requires 0 <= tau <= n_views.
BinaryMask threshold(const ConfidenceMap& conf, std::int32_t tau);

// Hysteresis: the union of all connectivity-connected components of the
// candidate mask threshold(conf, tau2) that contain at least one voxel of the
// seed mask threshold(conf, tau1). Consequently
//   threshold(conf, tau1)  ⊆  result  ⊆  threshold(conf, tau2).
BinaryMask connected_union(const ConfidenceMap& conf, const FusionParams& params);

// Full pipeline over already-aligned voter masks: accumulate, then fuse.
// Returns the fused mask together with the confidence map for inspection.
std::pair<BinaryMask, ConfidenceMap> self_fuse(std::span<const BinaryMask> masks,
                                               const FusionParams& params);

}  // namespace slf
