#include "wia/report.hpp"

#include <fstream>

#include "wia/error.hpp"

namespace wia {

metrics::MetricsReport evaluate_pair(const Image& ref, const Image& test, double peak,
                                     int nps_patch) {
    if (!ref.same_shape(test)) {
        throw Error(ErrorKind::ShapeMismatch, "evaluate: ref/test shapes disagree for id '" +
                                                  ref.id + "' / '" + test.id + "'");
    }
    metrics::MetricsReport r;
    r.id = test.id;
    r.psnr_db = metrics::psnr(ref, test, peak);
    r.ssim = metrics::ssim(ref, test, peak);
    Image residual(ref.height, ref.width, ref.range_min, ref.range_max, ref.id);
    for (size_t i = 0; i < residual.data.size(); ++i) {
        residual.data[i] = test.data[i] - ref.data[i];
    }
    r.nps_radial = metrics::nps(residual, nps_patch);
    r.subband_mse = metrics::subband_difference(ref, test);
    return r;
}

nlohmann::json report_to_json(const metrics::MetricsReport& r) {
    nlohmann::json bins = nlohmann::json::array();
    for (const auto& b : r.nps_radial) {
        bins.push_back({{"freq", b.freq}, {"power", b.power}, {"cells", b.cells}});
    }
    return {{"id", r.id},
            {"psnr_db", r.psnr_db},
            {"ssim", r.ssim},
            {"ssim_x100", 100.0 * r.ssim},
            {"subband_mse",
             {{"ll", r.subband_mse.ll},
              {"lh", r.subband_mse.lh},
              {"hl", r.subband_mse.hl},
              {"hh", r.subband_mse.hh}}},
            {"nps", bins}};
}

CorpusSummary summarize(const std::vector<metrics::MetricsReport>& reports, double peak,
                        int nps_patch) {
    CorpusSummary s;
    s.count = static_cast<int>(reports.size());
    s.peak = peak;
    s.nps_patch = nps_patch;
    for (const auto& r : reports) {
        s.mean_psnr_db += r.psnr_db;
        s.mean_ssim += r.ssim;
    }
    if (s.count > 0) {
        s.mean_psnr_db /= s.count;
        s.mean_ssim /= s.count;
    }
    return s;
}

void write_report(const std::string& path, const std::vector<metrics::MetricsReport>& reports,
                  const CorpusSummary& summary) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : reports) rows.push_back(report_to_json(r));
    nlohmann::json doc = {{"images", rows},
                          {"summary",
                           {{"count", summary.count},
                            {"mean_psnr_db", summary.mean_psnr_db},
                            {"mean_ssim", summary.mean_ssim},
                            {"mean_ssim_x100", 100.0 * summary.mean_ssim},
                            {"peak", summary.peak},
                            {"nps_patch", summary.nps_patch}}}};
    std::ofstream f(path);
    if (!f) throw Error(ErrorKind::IoError, "cannot write report: " + path);
    f << doc.dump(2) << "\n";
}

}  // namespace wia
