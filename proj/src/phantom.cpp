#include "slf/phantom.hpp"

#include <algorithm>
#include <cmath>

namespace slf {

namespace {

constexpr int kPlacementRetries = 1000;

// Child-stream identifiers. Fixed constants are part of the reproducibility
// contract: fixtures regenerate bit-identically from a seed alone.
constexpr std::uint64_t kStreamLesion = 1;
constexpr std::uint64_t kStreamImage = 2;
constexpr std::uint64_t kStreamCoreViews = 3;
constexpr std::uint64_t kStreamBoundaryFlips = 4;
constexpr std::uint64_t kStreamFpBlob = 5;

struct Ellipsoid {
    double cx, cy, cz;
    double rx, ry, rz;

    double max_radius() const { return std::max({rx, ry, rz}); }
};

void rasterize(const Ellipsoid& e, Volume& vol) {
    const Dims d = vol.dims();
    auto data = vol.as<std::uint8_t>();
    const std::int64_t x0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(e.cx - e.rx)));
    const std::int64_t x1 = std::min<std::int64_t>(d.nx - 1, static_cast<std::int64_t>(std::ceil(e.cx + e.rx)));
    const std::int64_t y0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(e.cy - e.ry)));
    const std::int64_t y1 = std::min<std::int64_t>(d.ny - 1, static_cast<std::int64_t>(std::ceil(e.cy + e.ry)));
    const std::int64_t z0 = std::max<std::int64_t>(0, static_cast<std::int64_t>(std::floor(e.cz - e.rz)));
    const std::int64_t z1 = std::min<std::int64_t>(d.nz - 1, static_cast<std::int64_t>(std::ceil(e.cz + e.rz)));
    for (std::int64_t z = z0; z <= z1; ++z) {
        for (std::int64_t y = y0; y <= y1; ++y) {
            for (std::int64_t x = x0; x <= x1; ++x) {
                const double u = (static_cast<double>(x) - e.cx) / e.rx;
                const double v = (static_cast<double>(y) - e.cy) / e.ry;
                const double w = (static_cast<double>(z) - e.cz) / e.rz;
                if (u * u + v * v + w * w <= 1.0) {
                    data[vol.index(x, y, z)] = 1;
                }
            }
        }
    }
}

Ellipsoid sample_ellipsoid(Rng& rng, const Dims& dims, double rmin, double rmax, double margin) {
    Ellipsoid e;
    e.rx = rng.next_real(rmin, rmax);
    e.ry = rng.next_real(rmin, rmax);
    e.rz = rng.next_real(rmin, rmax);
    const double m = e.max_radius() + margin;
    if (2.0 * m >= static_cast<double>(std::min({dims.nx, dims.ny, dims.nz}))) {
        throw GenerationError("phantom lesions do not fit: radius " +
                              std::to_string(e.max_radius()) + " in dims " + to_string(dims));
    }
    e.cx = rng.next_real(m, static_cast<double>(dims.nx) - m);
    e.cy = rng.next_real(m, static_cast<double>(dims.ny) - m);
    e.cz = rng.next_real(m, static_cast<double>(dims.nz) - m);
    return e;
}

bool well_separated(const Ellipsoid& a, const Ellipsoid& b, double gap) {
    const double dx = a.cx - b.cx, dy = a.cy - b.cy, dz = a.cz - b.cz;
    const double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
    return dist >= a.max_radius() + b.max_radius() + gap;
}

// Sample `count` distinct view indices by partial Fisher-Yates.
std::vector<int> sample_views(Rng& rng, int count, int n_views) {
    std::vector<int> all(n_views);
    for (int i = 0; i < n_views; ++i) all[i] = i;
    for (int i = 0; i < count; ++i) {
        const int j = i + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(n_views - i)));
        std::swap(all[i], all[j]);
    }
    all.resize(count);
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace

BinaryMask erode1(const BinaryMask& mask) {
    const Dims d = mask.vol.dims();
    auto in = mask.vol.as<std::uint8_t>();
    Volume out(d, mask.vol.spacing(), DType::u8);
    auto dst = out.as<std::uint8_t>();
    std::int64_t idx = 0;
    for (std::int64_t z = 0; z < d.nz; ++z) {
        for (std::int64_t y = 0; y < d.ny; ++y) {
            for (std::int64_t x = 0; x < d.nx; ++x, ++idx) {
                if (!in[idx]) continue;
                bool interior = x > 0 && y > 0 && z > 0 && x < d.nx - 1 && y < d.ny - 1 && z < d.nz - 1;
                for (int dz = -1; dz <= 1 && interior; ++dz) {
                    for (int dy = -1; dy <= 1 && interior; ++dy) {
                        for (int dx = -1; dx <= 1 && interior; ++dx) {
                            if (!in[idx + dx + d.nx * (dy + d.ny * static_cast<std::int64_t>(dz))]) {
                                interior = false;
                            }
                        }
                    }
                }
                dst[idx] = interior;
            }
        }
    }
    return BinaryMask{std::move(out)};
}

BinaryMask dilate(const BinaryMask& mask, int radius) {
    const Dims d = mask.vol.dims();
    auto in = mask.vol.as<std::uint8_t>();
    Volume out(d, mask.vol.spacing(), DType::u8);
    auto dst = out.as<std::uint8_t>();
    std::int64_t idx = 0;
    for (std::int64_t z = 0; z < d.nz; ++z) {
        for (std::int64_t y = 0; y < d.ny; ++y) {
            for (std::int64_t x = 0; x < d.nx; ++x, ++idx) {
                bool hit = false;
                for (std::int64_t dz = -radius; dz <= radius && !hit; ++dz) {
                    const std::int64_t zz = z + dz;
                    if (zz < 0 || zz >= d.nz) continue;
                    for (std::int64_t dy = -radius; dy <= radius && !hit; ++dy) {
                        const std::int64_t yy = y + dy;
                        if (yy < 0 || yy >= d.ny) continue;
                        for (std::int64_t dx = -radius; dx <= radius && !hit; ++dx) {
                            const std::int64_t xx = x + dx;
                            if (xx < 0 || xx >= d.nx) continue;
                            hit = in[mask.vol.index(xx, yy, zz)] != 0;
                        }
                    }
                }
                dst[idx] = hit;
            }
        }
    }
    return BinaryMask{std::move(out)};
}

std::pair<BinaryMask, Volume> generate_phantom(const PhantomSpec& spec) {
    if (spec.lesion_count < 0 || spec.lesion_radius_min <= 0.0 ||
        spec.lesion_radius_max < spec.lesion_radius_min) {
        throw InvalidArgument("bad phantom spec: lesion_count >= 0 and 0 < radius_min <= radius_max");
    }
    Volume gt_vol(spec.dims, spec.spacing, DType::u8);
    const Rng root(spec.seed);

    // Surface gap of 3 voxels keeps lesions 26-disconnected and leaves room
    // for the dilate-by-2 exclusion zone around the ground truth.
    std::vector<Ellipsoid> placed;
    for (int i = 0; i < spec.lesion_count; ++i) {
        Rng stream = root.child(kStreamLesion).child(static_cast<std::uint64_t>(i));
        bool ok = false;
        for (int attempt = 0; attempt < kPlacementRetries && !ok; ++attempt) {
            const Ellipsoid e = sample_ellipsoid(stream, spec.dims, spec.lesion_radius_min,
                                                 spec.lesion_radius_max, 3.0);
            ok = std::all_of(placed.begin(), placed.end(),
                             [&e](const Ellipsoid& other) { return well_separated(e, other, 3.0); });
            if (ok) placed.push_back(e);
        }
        if (!ok) {
            throw GenerationError("could not place lesion " + std::to_string(i) + " after " +
                                  std::to_string(kPlacementRetries) + " attempts");
        }
    }
    for (const Ellipsoid& e : placed) rasterize(e, gt_vol);

    Volume image(spec.dims, spec.spacing, DType::f32);
    {
        Rng stream = root.child(kStreamImage);
        auto img = image.as<float>();
        auto g = gt_vol.as<std::uint8_t>();
        for (std::int64_t i = 0; i < spec.dims.voxels(); ++i) {
            img[i] = static_cast<float>(g[i]) + 0.1f * static_cast<float>(stream.next_gauss());
        }
    }
    return {BinaryMask{std::move(gt_vol)}, std::move(image)};
}

std::vector<BinaryMask> simulate_views(const BinaryMask& gt, const VoterNoiseModel& model,
                                       int n_views) {
    if (n_views <= 0) throw InvalidArgument("n_views must be positive");
    if (model.core_support < 0 || model.core_support > n_views || model.fp_blob_support < 0 ||
        model.fp_blob_support > n_views) {
        throw InvalidArgument("voter support counts must lie in [0, n_views]");
    }
    if (model.boundary_flip_prob < 0.0 || model.boundary_flip_prob > 1.0) {
        throw InvalidArgument("boundary_flip_prob must lie in [0, 1]");
    }

    const Dims d = gt.vol.dims();
    const Rng root(model.seed);

    // Decompose the ground truth into lesions; each lesion gets its own voter
    // subset from its child stream.
    const LabelMap lesions = label_components(gt, Connectivity::c26);
    auto lesion_of = lesions.vol.as<std::int32_t>();
    std::vector<std::vector<int>> lesion_views(lesions.n_components);
    for (std::int32_t c = 0; c < lesions.n_components; ++c) {
        Rng stream = root.child(kStreamCoreViews).child(static_cast<std::uint64_t>(c));
        lesion_views[c] = sample_views(stream, model.core_support, n_views);
    }

    // False-positive blobs, rejected until clear of the dilated ground truth
    // and of each other.
    const BinaryMask exclusion = dilate(gt, 2);
    auto excl = exclusion.vol.as<std::uint8_t>();
    std::vector<Volume> fp_blobs;
    std::vector<std::vector<int>> fp_views;
    std::vector<Ellipsoid> fp_placed;
    for (int b = 0; b < model.fp_blob_count; ++b) {
        Rng stream = root.child(kStreamFpBlob).child(static_cast<std::uint64_t>(b));
        bool ok = false;
        for (int attempt = 0; attempt < kPlacementRetries && !ok; ++attempt) {
            const Ellipsoid e =
                sample_ellipsoid(stream, d, model.fp_radius_min, model.fp_radius_max, 3.0);
            if (!std::all_of(fp_placed.begin(), fp_placed.end(),
                             [&e](const Ellipsoid& o) { return well_separated(e, o, 3.0); })) {
                continue;
            }
            Volume blob(d, gt.vol.spacing(), DType::u8);
            rasterize(e, blob);
            auto bv = blob.as<std::uint8_t>();
            bool clear = true;
            for (std::int64_t i = 0; i < d.voxels() && clear; ++i) {
                clear = !(bv[i] && excl[i]);
            }
            if (!clear) continue;
            fp_placed.push_back(e);
            fp_blobs.push_back(std::move(blob));
            fp_views.push_back(sample_views(stream, model.fp_blob_support, n_views));
            ok = true;
        }
        if (!ok) {
            throw GenerationError("could not place false-positive blob " + std::to_string(b) +
                                  " after " + std::to_string(kPlacementRetries) + " attempts");
        }
    }

    const BinaryMask core = erode1(gt);
    auto core_v = core.vol.as<std::uint8_t>();
    auto gt_v = gt.vol.as<std::uint8_t>();
    const std::int64_t n = d.voxels();

    std::vector<BinaryMask> views;
    views.reserve(static_cast<std::size_t>(n_views));
    for (int view = 0; view < n_views; ++view) {
        Volume mv(d, gt.vol.spacing(), DType::u8);
        auto out = mv.as<std::uint8_t>();

        for (std::int64_t i = 0; i < n; ++i) {
            if (gt_v[i]) out[i] = std::binary_search(lesion_views[lesion_of[i] - 1].begin(),
                                                     lesion_views[lesion_of[i] - 1].end(), view);
        }
        for (std::size_t b = 0; b < fp_blobs.size(); ++b) {
            if (!std::binary_search(fp_views[b].begin(), fp_views[b].end(), view)) continue;
            auto bv = fp_blobs[b].as<std::uint8_t>();
            for (std::int64_t i = 0; i < n; ++i) out[i] |= bv[i];
        }

        // Boundary flips: one stream per view, one draw per boundary voxel in
        // canonical order regardless of outcome.
        Rng flips = root.child(kStreamBoundaryFlips).child(static_cast<std::uint64_t>(view));
        for (std::int64_t i = 0; i < n; ++i) {
            if (gt_v[i] && !core_v[i]) {
                if (flips.next_unit() < model.boundary_flip_prob) out[i] ^= 1;
            }
        }
        views.push_back(BinaryMask{std::move(mv)});
    }
    return views;
}

}  // namespace slf
