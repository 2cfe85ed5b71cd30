#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "slf/rng.hpp"
#include "slf/volume.hpp"

namespace slf {

// Synthetic ground truth: seeded ellipsoidal lesions inside an empty volume.
// Placement keeps lesions mutually separated so the generated mask has
// exactly lesion_count 26-connected components.
struct PhantomSpec {
    Dims dims{48, 48, 48};
    Spacing spacing{1.0, 1.0, 1.0};
    int lesion_count = 3;
    double lesion_radius_min = 2.0;
    double lesion_radius_max = 4.0;
    std::uint64_t seed = 0;
};

// Controlled voter noise around a ground-truth mask.
//
// Per 26-connected lesion, a subset of core_support views (drawn from the
// child stream of that lesion) votes for the whole lesion. Voxels of the
// 26-neighborhood-eroded interior ("core") are then left untouched, so every
// core voxel collects exactly core_support votes. Boundary voxels (lesion
// minus core) flip independently per view with boundary_flip_prob, using one
// child stream per view over canonical voxel order. Each false-positive blob
// is placed disjoint from the ground truth dilated by 2 voxels and appears in
// exactly fp_blob_support views, so its voxels collect exactly that many
// votes.
struct VoterNoiseModel {
    int core_support = 20;
    double boundary_flip_prob = 0.3;
    int fp_blob_count = 2;
    int fp_blob_support = 8;
    double fp_radius_min = 2.0;
    double fp_radius_max = 3.0;
    std::uint64_t seed = 0;
};

// Ground truth plus a cosmetic image (lesion intensity + Gaussian noise).
// Deterministic in spec.seed. Throws GenerationError when lesions cannot be
// placed within the retry budget.
std::pair<BinaryMask, Volume> generate_phantom(const PhantomSpec& spec);

// Deterministic noisy voter ensemble as described on VoterNoiseModel.
std::vector<BinaryMask> simulate_views(const BinaryMask& gt, const VoterNoiseModel& model,
                                       int n_views = 24);

// gt eroded by one voxel with the full 3x3x3 neighborhood; volume borders
// erode.
BinaryMask erode1(const BinaryMask& mask);

// Chebyshev dilation by the given radius in voxels.
BinaryMask dilate(const BinaryMask& mask, int radius);

}  // namespace slf
