#include "slf/metrics.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "slf/format.hpp"

namespace slf {

void validate(const ScoreWeights& w) {
    const double ws[] = {w.w_dsc, w.w_ppv, w.w_ltpr, w.w_lfpr_complement, w.w_vc};
    double sum = 0.0;
    for (double x : ws) {
        if (x < 0.0) throw InvalidArgument("score weights must be non-negative");
        sum += x;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
        throw InvalidArgument("score weights must sum to 1, got " + shortest_double(sum));
    }
}

ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt) {
    if (pred.vol.dims() != gt.vol.dims()) {
        throw InvalidArgument("confusion: pred dims " + to_string(pred.vol.dims()) +
                              " != gt dims " + to_string(gt.vol.dims()));
    }
    auto p = pred.vol.as<std::uint8_t>();
    auto g = gt.vol.as<std::uint8_t>();
    ConfusionCounts c;
    const std::int64_t n = pred.vol.num_voxels();
    for (std::int64_t i = 0; i < n; ++i) {
        if (p[i]) {
            if (g[i]) ++c.tp;
            else ++c.fp;
        } else {
            if (g[i]) ++c.fn;
            else ++c.tn;
        }
    }
    return c;
}

VoxelMetrics voxel_metrics(const ConfusionCounts& c) {
    VoxelMetrics m;
    if (c.tp == 0 && c.fp == 0 && c.fn == 0) {
        // Both masks empty: perfect agreement by convention.
        return {1.0, 1.0, 1.0};
    }
    const double tp = static_cast<double>(c.tp);
    m.dsc = 2.0 * tp / static_cast<double>(2 * c.tp + c.fp + c.fn);
    m.ppv = c.tp + c.fp > 0 ? tp / static_cast<double>(c.tp + c.fp) : 0.0;
    m.tpr = c.tp + c.fn > 0 ? tp / static_cast<double>(c.tp + c.fn) : 0.0;
    return m;
}

LesionMatch lesion_match(const LabelMap& pred_labels, const LabelMap& gt_labels,
                         const OverlapRule& rule) {
    if (pred_labels.vol.dims() != gt_labels.vol.dims()) {
        throw InvalidArgument("lesion_match: pred dims " + to_string(pred_labels.vol.dims()) +
                              " != gt dims " + to_string(gt_labels.vol.dims()));
    }
    auto p = pred_labels.vol.as<std::int32_t>();
    auto g = gt_labels.vol.as<std::int32_t>();
    const std::int64_t n = pred_labels.vol.num_voxels();

    std::vector<std::int64_t> gt_size(gt_labels.n_components + 1, 0);
    std::vector<std::int64_t> gt_overlap(gt_labels.n_components + 1, 0);
    std::vector<std::int64_t> pred_size(pred_labels.n_components + 1, 0);
    std::vector<std::int64_t> pred_overlap(pred_labels.n_components + 1, 0);
    for (std::int64_t i = 0; i < n; ++i) {
        if (g[i]) {
            ++gt_size[g[i]];
            if (p[i]) ++gt_overlap[g[i]];
        }
        if (p[i]) {
            ++pred_size[p[i]];
            if (g[i]) ++pred_overlap[p[i]];
        }
    }

    const auto matched = [&rule](std::int64_t overlap, std::int64_t size) {
        return overlap > 0 &&
               static_cast<double>(overlap) >= rule.min_overlap_fraction * static_cast<double>(size);
    };

    LesionMatch m;
    m.gt_total = gt_labels.n_components;
    m.pred_total = pred_labels.n_components;
    for (std::int32_t l = 1; l <= gt_labels.n_components; ++l) {
        if (matched(gt_overlap[l], gt_size[l])) ++m.gt_detected;
    }
    for (std::int32_t l = 1; l <= pred_labels.n_components; ++l) {
        if (!matched(pred_overlap[l], pred_size[l])) ++m.pred_false;
    }
    return m;
}

LesionMetrics lesion_metrics(const LesionMatch& m) {
    LesionMetrics r;
    r.ltpr = m.gt_total > 0 ? static_cast<double>(m.gt_detected) / static_cast<double>(m.gt_total)
                            : 1.0;
    r.lfpr = m.pred_total > 0 ? static_cast<double>(m.pred_false) / static_cast<double>(m.pred_total)
                              : 0.0;
    return r;
}

double volume_correlation(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 2) {
        throw UndefinedCorrelation("volume correlation needs at least two scans, got " +
                                   std::to_string(pairs.size()));
    }
    // Single-pass Welford update of the centered second moments.
    double mean_x = 0.0, mean_y = 0.0, m2x = 0.0, m2y = 0.0, cxy = 0.0;
    std::int64_t n = 0;
    for (const auto& [x, y] : pairs) {
        ++n;
        const double dx = x - mean_x;
        mean_x += dx / static_cast<double>(n);
        const double dy = y - mean_y;
        mean_y += dy / static_cast<double>(n);
        m2x += dx * (x - mean_x);
        m2y += dy * (y - mean_y);
        cxy += dx * (y - mean_y);
    }
    if (!(m2x > 0.0) || !(m2y > 0.0)) {
        throw UndefinedCorrelation("volume correlation undefined: zero variance in lesion volumes");
    }
    return cxy / std::sqrt(m2x * m2y);
}

double challenge_score(const ScoreInputs& in, const ScoreWeights& w) {
    validate(w);
    return 100.0 * (w.w_dsc * in.dsc + w.w_ppv * in.ppv + w.w_ltpr * in.ltpr +
                    w.w_lfpr_complement * (1.0 - in.lfpr) + w.w_vc * in.vc);
}

ScanMetrics evaluate_scan(const BinaryMask& pred, const BinaryMask& gt, Connectivity conn,
                          const OverlapRule& rule) {
    const VoxelMetrics vm = voxel_metrics(confusion(pred, gt));
    const LesionMetrics lm =
        lesion_metrics(lesion_match(label_components(pred, conn), label_components(gt, conn), rule));
    return ScanMetrics{vm.dsc, vm.ppv, vm.tpr, lm.ltpr, lm.lfpr};
}

MetricReport evaluate_dataset(std::span<const std::tuple<std::string, BinaryMask, BinaryMask>> scans,
                              Connectivity conn, const OverlapRule& rule,
                              const ScoreWeights& weights) {
    validate(weights);
    if (scans.empty()) throw InvalidArgument("evaluate_dataset: no scans given");
    MetricReport report;
    std::vector<std::pair<double, double>> volumes;
    for (const auto& [id, pred, gt] : scans) {
        ScanEntry entry;
        entry.id = id;
        entry.metrics = evaluate_scan(pred, gt, conn, rule);
        entry.pred_volume_mm3 =
            static_cast<double>(pred.foreground_count()) * pred.vol.spacing().voxel_mm3();
        entry.gt_volume_mm3 =
            static_cast<double>(gt.foreground_count()) * gt.vol.spacing().voxel_mm3();
        volumes.emplace_back(entry.pred_volume_mm3, entry.gt_volume_mm3);
        report.scans.push_back(std::move(entry));
    }

    const double count = static_cast<double>(report.scans.size());
    for (const ScanEntry& e : report.scans) {
        report.means.dsc += e.metrics.dsc;
        report.means.ppv += e.metrics.ppv;
        report.means.tpr += e.metrics.tpr;
        report.means.ltpr += e.metrics.ltpr;
        report.means.lfpr += e.metrics.lfpr;
    }
    report.means.dsc /= count;
    report.means.ppv /= count;
    report.means.tpr /= count;
    report.means.ltpr /= count;
    report.means.lfpr /= count;

    if (volumes.size() >= 2) {
        report.vc = volume_correlation(volumes);
        report.score = challenge_score(ScoreInputs{report.means.dsc, report.means.ppv,
                                                   report.means.ltpr, report.means.lfpr, *report.vc},
                                       weights);
    }
    return report;
}

std::string report_to_json(const MetricReport& report) {
    nlohmann::json scans = nlohmann::json::array();
    for (const ScanEntry& e : report.scans) {
        scans.push_back({
            {"id", e.id},
            {"dsc", e.metrics.dsc},
            {"ppv", e.metrics.ppv},
            {"tpr", e.metrics.tpr},
            {"ltpr", e.metrics.ltpr},
            {"lfpr", e.metrics.lfpr},
            {"pred_volume_mm3", e.pred_volume_mm3},
            {"gt_volume_mm3", e.gt_volume_mm3},
        });
    }
    nlohmann::json dataset{
        {"dsc", report.means.dsc}, {"ppv", report.means.ppv},   {"tpr", report.means.tpr},
        {"ltpr", report.means.ltpr}, {"lfpr", report.means.lfpr},
    };
    dataset["vc"] = report.vc ? nlohmann::json(*report.vc) : nlohmann::json(nullptr);
    dataset["score"] = report.score ? nlohmann::json(*report.score) : nlohmann::json(nullptr);

    nlohmann::json j{{"schema", "slf-metrics-1"}, {"scans", scans}, {"dataset", dataset}};
    return j.dump(2) + "\n";
}

std::string report_to_csv(const MetricReport& report) {
    std::string out = "id,dsc,ppv,tpr,ltpr,lfpr,vc,score\n";
    const auto row = [&out](const std::string& id, const ScanMetrics& m, const std::string& vc,
                            const std::string& score) {
        out += id + ',' + shortest_double(m.dsc) + ',' + shortest_double(m.ppv) + ',' +
               shortest_double(m.tpr) + ',' + shortest_double(m.ltpr) + ',' +
               shortest_double(m.lfpr) + ',' + vc + ',' + score + '\n';
    };
    for (const ScanEntry& e : report.scans) row(e.id, e.metrics, "", "");
    row("dataset", report.means, report.vc ? shortest_double(*report.vc) : "",
        report.score ? shortest_double(*report.score) : "");
    return out;
}

}  // namespace slf
