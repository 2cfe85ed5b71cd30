#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "slf/volume.hpp"

namespace slf {

enum class Plane : std::uint8_t { axial, sagittal, coronal };
enum class Rotation : std::uint8_t { r0, r90, r180, r270 };
enum class Flip : std::uint8_t { none, flip };

// Which pair of transforms the flip component of a ViewKey selects.
//   identity_first : {no flip, reversal of the first in-plane axis} (default)
//   vertical_horizontal : {reversal of the second axis, reversal of the first}
// Both keep the view count at planes x rotations x 2.
enum class FlipConvention : std::uint8_t { identity_first, vertical_horizontal };

// One of the 24 ensemble views: slicing plane for the 2D predictor plus the
// in-plane rotation/flip applied to the whole stack.
struct ViewKey {
    Plane plane = Plane::axial;
    Rotation rotation = Rotation::r0;
    Flip flip = Flip::none;

    bool operator==(const ViewKey&) const = default;
};

int rotation_degrees(Rotation r);
const char* plane_name(Plane p);

// "plane:rotation:flip", e.g. "axial:90:none". Used in manifests, file names
// and error messages.
std::string encode_view_key(const ViewKey& key);
ViewKey decode_view_key(const std::string& text);  // throws InvalidArgument

// An exact right-angle rotation/flip of a 3D grid, encoded as a signed axis
// permutation: output axis i reads input axis perm[i], reversed when neg[i].
// For an input of dims d, output coordinate q maps to input coordinate p with
//   p[perm[i]] = neg[i] ? d[perm[i]] - 1 - q[i] : q[i]
// and output dims/spacing are the permuted input dims/spacing. The 48 signed
// permutations form a group under compose/invert; view transforms use the
// rotation subsets closed within each slicing plane.
struct GridTransform {
    std::array<int, 3> perm{0, 1, 2};
    std::array<bool, 3> neg{false, false, false};

    bool is_identity() const {
        return perm == std::array<int, 3>{0, 1, 2} && neg == std::array<bool, 3>{false, false, false};
    }
    bool operator==(const GridTransform&) const = default;
};

// Deterministic order: planes axial, sagittal, coronal; rotations ascending;
// flip none before flip. Always 24 keys.
std::vector<ViewKey> enumerate_views();

// The grid transform of a view: in-plane flip first, then in-plane rotation
// (counterclockwise in the plane's (first, second) axis order). Slices of the
// key's plane all move identically; the slice axis is untouched.
GridTransform view_transform(const ViewKey& key,
                             FlipConvention convention = FlipConvention::identity_first);

// first = a ∘ b (apply b, then a).
GridTransform compose(const GridTransform& a, const GridTransform& b);
GridTransform invert(const GridTransform& t);

// Rearranges voxels; no interpolation, no value change. Output dims and
// spacing are the permuted input dims and spacing.
Volume apply(const GridTransform& t, const Volume& v);

Dims permute_dims(const GridTransform& t, const Dims& d);
Spacing permute_spacing(const GridTransform& t, const Spacing& s);

// All 48 signed axis permutations, for exhaustive group checks.
std::vector<GridTransform> all_signed_permutations();

}  // namespace slf
