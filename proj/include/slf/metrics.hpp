#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "slf/ccl.hpp"
#include "slf/volume.hpp"

namespace slf {

struct ConfusionCounts {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t tn = 0;

    std::int64_t total() const { return tp + fp + fn + tn; }
};

struct VoxelMetrics {
    double dsc = 0.0;
    double ppv = 0.0;
    double tpr = 0.0;
};

struct LesionMatch {
    std::int64_t gt_detected = 0;
    std::int64_t gt_total = 0;
    std::int64_t pred_false = 0;
    std::int64_t pred_total = 0;
};

struct LesionMetrics {
    double ltpr = 0.0;
    double lfpr = 0.0;
};

// A ground-truth component is detected iff it overlaps predicted foreground
// by at least one voxel and by at least min_overlap_fraction of the
// component's size; the default fraction 0 reduces to the one-voxel rule.
// Symmetrically for predicted components being non-false.
struct OverlapRule {
    double min_overlap_fraction = 0.0;
};

struct ScanMetrics {
    double dsc = 0.0;
    double ppv = 0.0;
    double tpr = 0.0;
    double ltpr = 0.0;
    double lfpr = 0.0;
};

// Weighted-average challenge score components; weights must sum to 1.
struct ScoreWeights {
    double w_dsc = 1.0 / 8.0;
    double w_ppv = 1.0 / 8.0;
    double w_ltpr = 1.0 / 4.0;
    double w_lfpr_complement = 1.0 / 4.0;
    double w_vc = 1.0 / 4.0;
};

void validate(const ScoreWeights& w);

// Metric values averaged across scans, fed to the challenge score.
struct ScoreInputs {
    double dsc = 0.0;
    double ppv = 0.0;
    double ltpr = 0.0;
    double lfpr = 0.0;
    double vc = 0.0;
};

struct ScanEntry {
    std::string id;
    ScanMetrics metrics;
    double pred_volume_mm3 = 0.0;
    double gt_volume_mm3 = 0.0;
};

// Per-scan metrics plus, when two or more scans are present, the dataset
// volume correlation and weighted score.
struct MetricReport {
    std::vector<ScanEntry> scans;
    ScanMetrics means;
    std::optional<double> vc;
    std::optional<double> score;
};

// Exact voxel counts; masks must share dims.
ConfusionCounts confusion(const BinaryMask& pred, const BinaryMask& gt);

// dsc = 2tp/(2tp+fp+fn), ppv = tp/(tp+fp), tpr = tp/(tp+fn).
// Degenerate cases: pred and gt both empty gives (1,1,1); when exactly one is
// empty dsc is 0 and the undefined ratio is 0.
VoxelMetrics voxel_metrics(const ConfusionCounts& c);

LesionMatch lesion_match(const LabelMap& pred_labels, const LabelMap& gt_labels,
                         const OverlapRule& rule = {});

// ltpr = detected/total (1 when no ground-truth lesions exist),
// lfpr = false/total (0 when nothing was predicted).
LesionMetrics lesion_metrics(const LesionMatch& m);

// Sample Pearson correlation over (predicted, reference) total lesion volume
// pairs, one pair per scan. Throws UndefinedCorrelation for fewer than two
// pairs or zero variance on either side.
double volume_correlation(std::span<const std::pair<double, double>> pairs);

// 100 * (w_dsc*dsc + w_ppv*ppv + w_ltpr*ltpr + w_lfpr_complement*(1-lfpr) + w_vc*vc).
double challenge_score(const ScoreInputs& in, const ScoreWeights& w = {});

// Convenience: confusion + CCL + lesion matching for one pred/gt pair.
ScanMetrics evaluate_scan(const BinaryMask& pred, const BinaryMask& gt,
                          Connectivity conn = Connectivity::c26, const OverlapRule& rule = {});

// Evaluates every pair, averages, and fills vc/score when >= 2 scans.
MetricReport evaluate_dataset(std::span<const std::tuple<std::string, BinaryMask, BinaryMask>> scans,
                              Connectivity conn = Connectivity::c26, const OverlapRule& rule = {},
                              const ScoreWeights& weights = {});

// Fixed-field serializations (dsc, ppv, tpr, ltpr, lfpr, vc, score). VC and
// score are null / empty when undefined. Floats use shortest round-trip form.
std::string report_to_json(const MetricReport& report);
std::string report_to_csv(const MetricReport& report);

}  // namespace slf
