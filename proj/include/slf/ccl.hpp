#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "slf/volume.hpp"

namespace slf {

// 3D voxel adjacency: faces only, faces+edges, or faces+edges+corners.
enum class Connectivity : std::uint8_t { c6 = 6, c18 = 18, c26 = 26 };

Connectivity connectivity_from_int(int n);  // throws InvalidArgument

struct Offset3 {
    int dx, dy, dz;
};

// The full neighbor set of a connectivity (6, 18 or 26 offsets, zero excluded).
std::vector<Offset3> neighbor_offsets(Connectivity conn);

struct ComponentStats {
    std::int32_t label = 0;
    std::int64_t voxel_count = 0;
    double volume_mm3 = 0.0;
    std::array<std::int64_t, 3> bbox_min{};
    std::array<std::int64_t, 3> bbox_max{};
};

// Two-pass union-find labeling over the canonical scan order. Two foreground
// voxels share a label iff a path of conn-neighboring foreground voxels joins
// them. Labels are canonical: 1..n_components in ascending order of each
// component's minimal linear index; background stays 0. Deterministic.
LabelMap label_components(const BinaryMask& mask, Connectivity conn = Connectivity::c26);

// One entry per label, ordered by label. Voxel counts sum to the foreground
// total of the labeled mask.
std::vector<ComponentStats> component_stats(const LabelMap& labels);

}  // namespace slf
