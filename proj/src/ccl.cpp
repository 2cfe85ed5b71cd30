#include "slf/ccl.hpp"

#include <algorithm>

namespace slf {

Connectivity connectivity_from_int(int n) {
    switch (n) {
        case 6: return Connectivity::c6;
        case 18: return Connectivity::c18;
        case 26: return Connectivity::c26;
    }
    throw InvalidArgument("connectivity must be 6, 18 or 26, got " + std::to_string(n));
}

std::vector<Offset3> neighbor_offsets(Connectivity conn) {
    const int max_l1 = conn == Connectivity::c6 ? 1 : conn == Connectivity::c18 ? 2 : 3;
    std::vector<Offset3> offs;
    for (int dz = -1; dz <= 1; ++dz) {
        for (int dy = -1; dy <= 1; ++dy) {
            for (int dx = -1; dx <= 1; ++dx) {
                const int l1 = std::abs(dx) + std::abs(dy) + std::abs(dz);
                if (l1 >= 1 && l1 <= max_l1) offs.push_back({dx, dy, dz});
            }
        }
    }
    return offs;
}

namespace {

// Offsets with a smaller canonical linear index than the center voxel
// (dz < 0, or dz == 0 and dy < 0, or dz == dy == 0 and dx < 0).
std::vector<Offset3> prior_offsets(Connectivity conn) {
    std::vector<Offset3> prior;
    for (const Offset3& o : neighbor_offsets(conn)) {
        if (o.dz < 0 || (o.dz == 0 && (o.dy < 0 || (o.dy == 0 && o.dx < 0)))) prior.push_back(o);
    }
    return prior;
}

// Union-find with path halving, label 0 reserved for background.
class DisjointSet {
public:
    explicit DisjointSet(std::size_t capacity) { parent_.reserve(capacity); parent_.push_back(0); }

    std::int32_t make_set() {
        parent_.push_back(static_cast<std::int32_t>(parent_.size()));
        return parent_.back();
    }

    std::int32_t find(std::int32_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::int32_t a, std::int32_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        // Attach the larger root to the smaller so roots keep the smallest
        // provisional label of their component.
        if (a < b) parent_[b] = a;
        else parent_[a] = b;
    }

    std::size_t size() const { return parent_.size(); }

private:
    std::vector<std::int32_t> parent_;
};

}  // namespace

LabelMap label_components(const BinaryMask& mask, Connectivity conn) {
    const Volume& mv = mask.vol;
    const Dims d = mv.dims();
    auto in = mv.as<std::uint8_t>();

    LabelMap result;
    result.vol = Volume(d, mv.spacing(), DType::i32);
    auto out = result.vol.as<std::int32_t>();

    const std::vector<Offset3> prior = prior_offsets(conn);
    DisjointSet ds(1024);

    // First pass: provisional labels in scan order, unions across prior
    // neighbors. A component's first-encountered voxel always receives a
    // fresh label, which stays the smallest provisional label of the
    // component; canonical renumbering below relies on that.
    std::int64_t idx = 0;
    for (std::int64_t z = 0; z < d.nz; ++z) {
        for (std::int64_t y = 0; y < d.ny; ++y) {
            for (std::int64_t x = 0; x < d.nx; ++x, ++idx) {
                if (!in[idx]) {
                    out[idx] = 0;
                    continue;
                }
                std::int32_t label = 0;
                for (const Offset3& o : prior) {
                    const std::int64_t nx = x + o.dx, ny = y + o.dy, nz = z + o.dz;
                    if (nx < 0 || ny < 0 || nz < 0 || nx >= d.nx || ny >= d.ny) continue;
                    const std::int64_t nidx = idx + o.dx + d.nx * (o.dy + d.ny * static_cast<std::int64_t>(o.dz));
                    const std::int32_t nl = out[nidx];
                    if (nl == 0) continue;
                    if (label == 0) label = nl;
                    else ds.unite(label, nl);
                }
                if (label == 0) label = ds.make_set();
                out[idx] = label;
            }
        }
    }

    // Second pass: map roots to 1..n in order of first appearance, which is
    // ascending minimal-linear-index order of the components.
    std::vector<std::int32_t> canonical(ds.size(), 0);
    std::int32_t next = 0;
    for (std::int32_t l = 1; l < static_cast<std::int32_t>(ds.size()); ++l) {
        const std::int32_t root = ds.find(l);
        if (canonical[root] == 0 && root == l) canonical[root] = ++next;
    }
    // Roots always carry the smallest label of their set, so every root was
    // assigned above; now resolve non-roots.
    const std::int64_t n = d.voxels();
    for (std::int64_t i = 0; i < n; ++i) {
        if (out[i]) out[i] = canonical[ds.find(out[i])];
    }

    result.n_components = next;
    return result;
}

std::vector<ComponentStats> component_stats(const LabelMap& labels) {
    const Volume& lv = labels.vol;
    const Dims d = lv.dims();
    auto in = lv.as<std::int32_t>();

    std::vector<ComponentStats> stats(static_cast<std::size_t>(labels.n_components));
    for (std::int32_t l = 1; l <= labels.n_components; ++l) {
        ComponentStats& s = stats[l - 1];
        s.label = l;
        s.bbox_min = {d.nx, d.ny, d.nz};
        s.bbox_max = {-1, -1, -1};
    }

    std::int64_t idx = 0;
    for (std::int64_t z = 0; z < d.nz; ++z) {
        for (std::int64_t y = 0; y < d.ny; ++y) {
            for (std::int64_t x = 0; x < d.nx; ++x, ++idx) {
                const std::int32_t l = in[idx];
                if (!l) continue;
                if (l < 1 || l > labels.n_components) {
                    throw InvalidArgument("label map voxel " + std::to_string(l) +
                                          " outside [0, n_components]");
                }
                ComponentStats& s = stats[l - 1];
                ++s.voxel_count;
                const std::int64_t c[3] = {x, y, z};
                for (int a = 0; a < 3; ++a) {
                    s.bbox_min[a] = std::min(s.bbox_min[a], c[a]);
                    s.bbox_max[a] = std::max(s.bbox_max[a], c[a]);
                }
            }
        }
    }
    const double voxel_mm3 = lv.spacing().voxel_mm3();
    for (ComponentStats& s : stats) {
        s.volume_mm3 = static_cast<double>(s.voxel_count) * voxel_mm3;
        if (s.voxel_count == 0) {
            throw InvalidArgument("label " + std::to_string(s.label) + " has no voxels");
        }
    }
    return stats;
}

}  // namespace slf
