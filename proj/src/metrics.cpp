#include "specmark/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "specmark/errors.hpp"

namespace specmark {

namespace {

void check_pair(const Image& a, const Image& b) {
    if (!a.same_shape(b)) throw config_error("metric inputs must have equal dimensions");
    if (a.sample_count() == 0) throw config_error("metric inputs are empty");
}

}  // namespace

double mean_squared_error(const Image& a, const Image& b) {
    check_pair(a, b);
    double acc = 0.0;
    for (size_t i = 0; i < a.samples.size(); ++i) {
        const double d = (a.samples[i] - b.samples[i]) / 255.0;
        acc += d * d;
    }
    return acc / static_cast<double>(a.samples.size());
}

double peak_signal_to_noise(const Image& a, const Image& b) {
    check_pair(a, b);
    double acc = 0.0;
    for (size_t i = 0; i < a.samples.size(); ++i) {
        const double d = a.samples[i] - b.samples[i];
        acc += d * d;
    }
    const double mse = acc / static_cast<double>(a.samples.size());
    if (mse == 0.0) return std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double structural_similarity(const Image& a, const Image& b) {
    check_pair(a, b);
    constexpr int kWin = 11;
    if (a.height < kWin || a.width < kWin)
        throw config_error("structural_similarity needs images at least 11x11");

    // fixed window weights
    double taps[kWin];
    double wsum = 0.0;
    for (int i = 0; i < kWin; ++i) {
        const double d = i - (kWin - 1) / 2.0;
        taps[i] = std::exp(-d * d / (2.0 * 1.5 * 1.5));
        wsum += taps[i];
    }
    for (double& t : taps) t /= wsum;

    const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
    const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
    const int h = a.height, w = a.width;
    const int oh = h - kWin + 1, ow = w - kWin + 1;

    auto filter_valid = [&](const std::vector<double>& src, std::vector<double>& dst) {
        // horizontal pass on full rows, vertical pass on the valid strip
        std::vector<double> tmp(static_cast<size_t>(h) * ow);
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < ow; ++x) {
                double s = 0.0;
                for (int t = 0; t < kWin; ++t) s += taps[t] * src[static_cast<size_t>(y) * w + x + t];
                tmp[static_cast<size_t>(y) * ow + x] = s;
            }
        dst.assign(static_cast<size_t>(oh) * ow, 0.0);
        for (int y = 0; y < oh; ++y)
            for (int x = 0; x < ow; ++x) {
                double s = 0.0;
                for (int t = 0; t < kWin; ++t) s += taps[t] * tmp[static_cast<size_t>(y + t) * ow + x];
                dst[static_cast<size_t>(y) * ow + x] = s;
            }
    };

    double total = 0.0;
    std::vector<double> pa(static_cast<size_t>(h) * w), pb(pa.size()), paa(pa.size()),
        pbb(pa.size()), pab(pa.size());
    std::vector<double> ma, mb, maa, mbb, mab;
    for (int c = 0; c < a.channels; ++c) {
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                const double va = a.at(c, y, x), vb = b.at(c, y, x);
                const size_t i = static_cast<size_t>(y) * w + x;
                pa[i] = va;
                pb[i] = vb;
                paa[i] = va * va;
                pbb[i] = vb * vb;
                pab[i] = va * vb;
            }
        filter_valid(pa, ma);
        filter_valid(pb, mb);
        filter_valid(paa, maa);
        filter_valid(pbb, mbb);
        filter_valid(pab, mab);

        double acc = 0.0;
        for (size_t i = 0; i < ma.size(); ++i) {
            const double mu1 = ma[i], mu2 = mb[i];
            const double var1 = maa[i] - mu1 * mu1;
            const double var2 = mbb[i] - mu2 * mu2;
            const double cov = mab[i] - mu1 * mu2;
            acc += ((2.0 * mu1 * mu2 + c1) * (2.0 * cov + c2)) /
                   ((mu1 * mu1 + mu2 * mu2 + c1) * (var1 + var2 + c2));
        }
        total += acc / static_cast<double>(ma.size());
    }
    return total / a.channels;
}

double bit_recovery_accuracy(const std::vector<int>& got, const std::vector<int>& expected) {
    if (got.size() != expected.size() || got.empty())
        throw config_error("bit_recovery_accuracy needs equal nonzero lengths");
    size_t same = 0;
    for (size_t i = 0; i < got.size(); ++i)
        if (got[i] == expected[i]) ++same;
    return static_cast<double>(same) / static_cast<double>(got.size());
}

double q_at_level(const std::vector<CurvePoint>& pts, double level) {
    if (pts.empty()) throw config_error("q_at_level: empty curve");
    if (pts.front().p < level) return -std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < pts.size(); ++i) {
        if (pts[i].p < level) {
            const double dp = pts[i - 1].p - pts[i].p;
            const double t = dp == 0.0 ? 1.0 : (pts[i - 1].p - level) / dp;
            return pts[i - 1].q + t * (pts[i].q - pts[i - 1].q);
        }
    }
    return std::numeric_limits<double>::infinity();
}

CurveSummary summarize_curve(std::vector<CurvePoint> pts) {
    if (pts.empty()) throw config_error("summarize_curve: empty curve");
    std::stable_sort(pts.begin(), pts.end(),
                     [](const CurvePoint& a, const CurvePoint& b) { return a.strength < b.strength; });
    CurveSummary s;
    for (const CurvePoint& p : pts) {
        s.avg_p += p.p;
        s.avg_q += p.q;
    }
    s.avg_p /= static_cast<double>(pts.size());
    s.avg_q /= static_cast<double>(pts.size());
    s.q_at_095p = q_at_level(pts, 0.95);
    s.q_at_07p = q_at_level(pts, 0.7);
    return s;
}

}  // namespace specmark
