#include "slf/xform.hpp"

#include <algorithm>

namespace slf {

namespace {

// In-plane axes (first, second) per slicing plane; the remaining axis is the
// stack direction. axial = (x,y) slices along z, sagittal = (y,z) along x,
// coronal = (x,z) along y.
struct PlaneAxes {
    int first;
    int second;
};

PlaneAxes plane_axes(Plane p) {
    switch (p) {
        case Plane::axial: return {0, 1};
        case Plane::sagittal: return {1, 2};
        case Plane::coronal: return {0, 2};
    }
    return {0, 1};
}

GridTransform axis_reversal(int axis) {
    GridTransform t;
    t.neg[axis] = true;
    return t;
}

// Counterclockwise quarter turns in (first, second) coordinates:
// 90 degrees maps (u, v) -> (H-1-v, u).
GridTransform rotation_transform(Rotation r, PlaneAxes ax) {
    GridTransform t;
    switch (r) {
        case Rotation::r0:
            break;
        case Rotation::r90:
            t.perm[ax.first] = ax.second;
            t.neg[ax.first] = true;
            t.perm[ax.second] = ax.first;
            break;
        case Rotation::r180:
            t.neg[ax.first] = true;
            t.neg[ax.second] = true;
            break;
        case Rotation::r270:
            t.perm[ax.first] = ax.second;
            t.perm[ax.second] = ax.first;
            t.neg[ax.second] = true;
            break;
    }
    return t;
}

}  // namespace

int rotation_degrees(Rotation r) {
    switch (r) {
        case Rotation::r0: return 0;
        case Rotation::r90: return 90;
        case Rotation::r180: return 180;
        case Rotation::r270: return 270;
    }
    return 0;
}

const char* plane_name(Plane p) {
    switch (p) {
        case Plane::axial: return "axial";
        case Plane::sagittal: return "sagittal";
        case Plane::coronal: return "coronal";
    }
    return "?";
}

std::string encode_view_key(const ViewKey& key) {
    return std::string(plane_name(key.plane)) + ":" + std::to_string(rotation_degrees(key.rotation)) +
           ":" + (key.flip == Flip::none ? "none" : "flip");
}

ViewKey decode_view_key(const std::string& text) {
    auto c1 = text.find(':');
    auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw InvalidArgument("bad view key '" + text + "', expected plane:rotation:flip");
    }
    const std::string plane = text.substr(0, c1);
    const std::string rot = text.substr(c1 + 1, c2 - c1 - 1);
    const std::string flip = text.substr(c2 + 1);

    ViewKey key;
    if (plane == "axial") key.plane = Plane::axial;
    else if (plane == "sagittal") key.plane = Plane::sagittal;
    else if (plane == "coronal") key.plane = Plane::coronal;
    else throw InvalidArgument("bad view key plane '" + plane + "'");

    if (rot == "0") key.rotation = Rotation::r0;
    else if (rot == "90") key.rotation = Rotation::r90;
    else if (rot == "180") key.rotation = Rotation::r180;
    else if (rot == "270") key.rotation = Rotation::r270;
    else throw InvalidArgument("bad view key rotation '" + rot + "'");

    if (flip == "none") key.flip = Flip::none;
    else if (flip == "flip") key.flip = Flip::flip;
    else throw InvalidArgument("bad view key flip '" + flip + "'");

    return key;
}

std::vector<ViewKey> enumerate_views() {
    std::vector<ViewKey> keys;
    keys.reserve(24);
    for (Plane p : {Plane::axial, Plane::sagittal, Plane::coronal}) {
        for (Rotation r : {Rotation::r0, Rotation::r90, Rotation::r180, Rotation::r270}) {
            for (Flip f : {Flip::none, Flip::flip}) {
                keys.push_back(ViewKey{p, r, f});
            }
        }
    }
    return keys;
}

GridTransform view_transform(const ViewKey& key, FlipConvention convention) {
    const PlaneAxes ax = plane_axes(key.plane);

    GridTransform flip;  // identity
    if (convention == FlipConvention::identity_first) {
        if (key.flip == Flip::flip) flip = axis_reversal(ax.first);
    } else {
        // vertical flip mirrors along the second in-plane axis, horizontal
        // along the first; neither choice is the identity.
        flip = axis_reversal(key.flip == Flip::none ? ax.second : ax.first);
    }
    return compose(rotation_transform(key.rotation, ax), flip);
}

GridTransform compose(const GridTransform& a, const GridTransform& b) {
    GridTransform t;
    for (int i = 0; i < 3; ++i) {
        t.perm[i] = b.perm[a.perm[i]];
        t.neg[i] = a.neg[i] != b.neg[a.perm[i]];
    }
    return t;
}

GridTransform invert(const GridTransform& t) {
    GridTransform inv;
    for (int i = 0; i < 3; ++i) {
        inv.perm[t.perm[i]] = i;
        inv.neg[t.perm[i]] = t.neg[i];
    }
    return inv;
}

Dims permute_dims(const GridTransform& t, const Dims& d) {
    return Dims{d[t.perm[0]], d[t.perm[1]], d[t.perm[2]]};
}

Spacing permute_spacing(const GridTransform& t, const Spacing& s) {
    return Spacing{s[t.perm[0]], s[t.perm[1]], s[t.perm[2]]};
}

namespace {

// Value-agnostic element copy; T is picked by element size only.
template <typename T>
void gather(const GridTransform& t, const Volume& in, Volume& out) {
    const Dims id = in.dims();
    const Dims od = out.dims();
    const std::int64_t stride[3] = {1, id.nx, id.nx * id.ny};

    // Input linear index is affine in the output coordinate: base plus a
    // signed stride per output axis.
    std::int64_t base = 0;
    std::int64_t step[3];
    for (int i = 0; i < 3; ++i) {
        const std::int64_t s = stride[t.perm[i]];
        if (t.neg[i]) {
            base += (od[i] - 1) * s;
            step[i] = -s;
        } else {
            step[i] = s;
        }
    }

    const T* src = reinterpret_cast<const T*>(in.raw().data());
    T* dst = reinterpret_cast<T*>(out.raw().data());
    std::int64_t o = 0;
    for (std::int64_t z = 0; z < od.nz; ++z) {
        const std::int64_t rz = base + z * step[2];
        for (std::int64_t y = 0; y < od.ny; ++y) {
            std::int64_t src_idx = rz + y * step[1];
            for (std::int64_t x = 0; x < od.nx; ++x, src_idx += step[0]) {
                dst[o++] = src[src_idx];
            }
        }
    }
}

}  // namespace

Volume apply(const GridTransform& t, const Volume& v) {
    Volume out(permute_dims(t, v.dims()), permute_spacing(t, v.spacing()), v.dtype());
    if (dtype_size(v.dtype()) == 1) {
        gather<std::uint8_t>(t, v, out);
    } else {
        gather<std::uint32_t>(t, v, out);
    }
    return out;
}

std::vector<GridTransform> all_signed_permutations() {
    std::vector<GridTransform> all;
    all.reserve(48);
    std::array<int, 3> p{0, 1, 2};
    std::sort(p.begin(), p.end());
    do {
        for (int bits = 0; bits < 8; ++bits) {
            GridTransform t;
            t.perm = p;
            t.neg = {(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0};
            all.push_back(t);
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return all;
}

}  // namespace slf
