#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "wia/image.hpp"
#include "wia/metrics.hpp"

namespace wia {

// Full quality report for one ref/test pair: PSNR, SSIM, radial NPS of the
// residual and the per-subband decomposition of the error.
metrics::MetricsReport evaluate_pair(const Image& ref, const Image& test, double peak,
                                     int nps_patch);

nlohmann::json report_to_json(const metrics::MetricsReport& r);

struct CorpusSummary {
    int count = 0;
    double mean_psnr_db = 0.0;
    double mean_ssim = 0.0;
    double peak = 0.0;
    int nps_patch = 0;
};

CorpusSummary summarize(const std::vector<metrics::MetricsReport>& reports, double peak,
                        int nps_patch);

// One JSON document: per-image rows plus the corpus summary.
void write_report(const std::string& path, const std::vector<metrics::MetricsReport>& reports,
                  const CorpusSummary& summary);

}  // namespace wia
