#include "slf/fusion.hpp"

namespace slf {

void validate(const FusionParams& params) {
    if (params.n_views <= 0) {
        throw InvalidArgument("n_views must be positive, got " + std::to_string(params.n_views));
    }
    if (params.tau2 < 0 || params.tau2 > params.tau1 || params.tau1 >= params.n_views) {
        throw InvalidArgument("fusion thresholds must satisfy 0 <= tau2 <= tau1 < n_views, got tau1=" +
                              std::to_string(params.tau1) + " tau2=" + std::to_string(params.tau2) +
                              " n_views=" + std::to_string(params.n_views));
    }
}

ConfidenceMap confidence_map(std::span<const BinaryMask> masks) {
    if (masks.empty()) throw InvalidArgument("confidence_map needs at least one mask");
    const Volume& first = masks[0].vol;
    for (std::size_t i = 1; i < masks.size(); ++i) {
        if (masks[i].vol.dims() != first.dims()) {
            throw InvalidArgument("mask " + std::to_string(i) + " dims " +
                                  to_string(masks[i].vol.dims()) + " differ from mask 0 dims " +
                                  to_string(first.dims()));
        }
        if (masks[i].vol.spacing() != first.spacing()) {
            throw InvalidArgument("mask " + std::to_string(i) + " spacing differs from mask 0");
        }
    }

    ConfidenceMap conf;
    conf.vol = Volume(first.dims(), first.spacing(), DType::i32);
    conf.n_views = static_cast<std::int32_t>(masks.size());
    auto sum = conf.vol.as<std::int32_t>();
    const std::int64_t n = first.num_voxels();
    for (const BinaryMask& m : masks) {
        auto src = m.vol.as<std::uint8_t>();
        for (std::int64_t i = 0; i < n; ++i) sum[i] += src[i];
    }
    return conf;
}

BinaryMask threshold(const ConfidenceMap& conf, std::int32_t tau) {
    if (tau < 0 || tau > conf.n_views) {
        throw InvalidArgument("threshold " + std::to_string(tau) + " outside [0, n_views=" +
                              std::to_string(conf.n_views) + "]");
    }
    Volume out(conf.vol.dims(), conf.vol.spacing(), DType::u8);
    auto dst = out.as<std::uint8_t>();
    auto src = conf.vol.as<std::int32_t>();
    const std::int64_t n = conf.vol.num_voxels();
    for (std::int64_t i = 0; i < n; ++i) dst[i] = src[i] > tau;
    return BinaryMask{std::move(out)};
}

BinaryMask connected_union(const ConfidenceMap& conf, const FusionParams& params) {
    validate(params);
    if (conf.n_views != params.n_views) {
        throw InvalidArgument("confidence map has n_views=" + std::to_string(conf.n_views) +
                              ", params expect " + std::to_string(params.n_views));
    }

    const BinaryMask candidates = threshold(conf, params.tau2);
    const LabelMap labels = label_components(candidates, params.connectivity);

    // Components of the candidate mask survive iff they contain a seed voxel,
    // i.e. one whose count also clears tau1. Seeds are always candidates
    // (tau2 <= tau1), so scanning counts against the label map suffices.
    std::vector<std::uint8_t> keep(static_cast<std::size_t>(labels.n_components) + 1, 0);
    auto counts = conf.vol.as<std::int32_t>();
    auto lab = labels.vol.as<std::int32_t>();
    const std::int64_t n = conf.vol.num_voxels();
    for (std::int64_t i = 0; i < n; ++i) {
        if (counts[i] > params.tau1) keep[lab[i]] = 1;
    }
    keep[0] = 0;

    Volume out(conf.vol.dims(), conf.vol.spacing(), DType::u8);
    auto dst = out.as<std::uint8_t>();
    for (std::int64_t i = 0; i < n; ++i) dst[i] = keep[lab[i]];
    return BinaryMask{std::move(out)};
}

std::pair<BinaryMask, ConfidenceMap> self_fuse(std::span<const BinaryMask> masks,
                                               const FusionParams& params) {
    ConfidenceMap conf = confidence_map(masks);
    BinaryMask fused = connected_union(conf, params);
    return {std::move(fused), std::move(conf)};
}

}  // namespace slf
