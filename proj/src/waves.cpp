#include "avi/waves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "avi/ingest.hpp"
#include "avi/stats.hpp"

namespace avi {

namespace {

std::vector<double> moving_average(const std::vector<double>& v, unsigned window) {
    const auto h = static_cast<long>(window / 2);
    const auto n = static_cast<long>(v.size());
    std::vector<double> out(v.size());
    for (long i = 0; i < n; ++i) {
        const long lo = std::max<long>(0, i - h);
        const long hi = std::min(n - 1, i + h);
        double acc = 0.0;
        for (long j = lo; j <= hi; ++j) acc += v[static_cast<std::size_t>(j)];
        out[static_cast<std::size_t>(i)] = acc / static_cast<double>(hi - lo + 1);
    }
    return out;
}

}  // namespace

std::vector<WaveSegment> detect_waves(const WeeklySeries& cases, double min_prominence,
                                      unsigned smoothing_window) {
    if (smoothing_window % 2 == 0) {
        throw std::invalid_argument("detect_waves: smoothing window must be odd");
    }
    if (cases.size() < smoothing_window) {
        throw std::invalid_argument("detect_waves: series shorter than the smoothing window");
    }
    const auto smoothed = moving_average(cases.values, smoothing_window);
    const double global_max = *std::max_element(smoothed.begin(), smoothed.end());
    if (global_max <= 0.0) return {};

    const auto n = smoothed.size();
    struct Interval {
        std::size_t lo, hi, peak;
    };
    std::vector<Interval> intervals;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const bool rising_edge = i == 0 || smoothed[i] >= smoothed[i - 1];
        if (!rising_edge || smoothed[i] <= smoothed[i + 1]) continue;  // needs a decline after
        if (smoothed[i] < min_prominence * global_max) continue;
        const double floor_level = 0.1 * smoothed[i];
        std::size_t lo = i;
        while (lo > 0 && smoothed[lo - 1] >= floor_level) --lo;
        std::size_t hi = i;
        while (hi + 1 < n && smoothed[hi + 1] >= floor_level) ++hi;
        intervals.push_back({lo, hi, i});
    }

    // merge overlaps, keeping the taller peak
    std::vector<Interval> merged;
    for (const auto& iv : intervals) {
        if (!merged.empty() && iv.lo <= merged.back().hi) {
            merged.back().hi = std::max(merged.back().hi, iv.hi);
            if (smoothed[iv.peak] > smoothed[merged.back().peak]) merged.back().peak = iv.peak;
        } else {
            merged.push_back(iv);
        }
    }

    std::vector<WaveSegment> waves;
    for (std::size_t k = 0; k < merged.size(); ++k) {
        const auto& iv = merged[k];
        WaveSegment w;
        w.label = "wave-" + std::to_string(k + 1);
        w.start_week = cases.week_at(iv.lo);
        w.end_week = cases.week_at(iv.hi);
        w.peak_week = cases.week_at(iv.peak);
        w.source = WaveSource::Detected;
        for (std::size_t i = iv.lo; i <= iv.hi; ++i) w.total_cases += cases.values[i];
        waves.push_back(std::move(w));
    }
    return waves;
}

std::vector<WaveSegment> load_official_waves(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ParseError("waves file is empty");
    std::vector<WaveSegment> waves;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto c1 = line.find(',');
        const auto c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
        if (c2 == std::string::npos) throw ParseError("expected 'label,start,end'", lineno);
        WaveSegment w;
        w.label = line.substr(0, c1);
        try {
            w.start_week = week_floor(parse_date(line.substr(c1 + 1, c2 - c1 - 1)));
            w.end_week = week_floor(parse_date(line.substr(c2 + 1)));
        } catch (const std::invalid_argument& e) {
            throw ParseError(e.what(), lineno);
        }
        if (w.start_week > w.end_week) {
            throw ParseError("wave '" + w.label + "' starts after it ends", lineno);
        }
        w.source = WaveSource::Official;
        waves.push_back(std::move(w));
    }
    return waves;
}

TimelinessReport evaluate_timeliness(const WeeklySeries& signal,
                                     const std::vector<WaveSegment>& waves, double z_threshold,
                                     unsigned baseline_window) {
    if (baseline_window < 4) {
        throw std::invalid_argument("evaluate_timeliness: baseline window must be >= 4 weeks");
    }
    TimelinessReport report;
    report.z_threshold = z_threshold;
    report.baseline_window = baseline_window;

    const auto n = static_cast<long>(signal.size());
    for (const auto& wave : waves) {
        WaveTimeliness wt;
        wt.wave_label = wave.label;
        const long start_idx = weeks_between(signal.start_week, wave.start_week);
        const long end_idx = weeks_between(signal.start_week, wave.end_week);
        const long from = start_idx - 3;  // figure convention: 3 weeks before start
        for (long t = std::max<long>(from, baseline_window); t <= std::min(end_idx, n - 1); ++t) {
            std::span<const double> base(signal.values.data() + (t - baseline_window),
                                         baseline_window);
            const Summary s = summarize(base);
            if (s.stddev == 0.0) continue;  // uninformative baseline week, skipped
            const double z = (signal.values[static_cast<std::size_t>(t)] - s.mean) / s.stddev;
            if (z > z_threshold) {
                wt.first_fire = signal.week_at(static_cast<std::size_t>(t));
                break;
            }
        }
        if (wt.first_fire && *wt.first_fire <= wave.start_week) {
            wt.lead_weeks = static_cast<int>(weeks_between(*wt.first_fire, wave.start_week));
            wt.within_window = *wt.lead_weeks >= 0 && *wt.lead_weeks <= 3;
        }
        report.waves.push_back(std::move(wt));
    }
    return report;
}

}  // namespace avi
