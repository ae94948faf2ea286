#pragma once

#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "avi/weekly.hpp"

namespace avi {

enum class WaveSource { Official, Detected };

struct WaveSegment {
    std::string label;
    Date start_week{};
    Date end_week{};
    std::optional<Date> peak_week;  // unset allowed for official rows
    double total_cases = 0.0;
    WaveSource source = WaveSource::Detected;
};

/// Smooths with a centered moving average, keeps local peaks reaching
/// min_prominence of the global smoothed maximum, and extends each wave
/// outward while the smoothed value stays >= 10% of its peak. Overlapping
/// intervals merge. A monotone rise with no decline yields no wave.
std::vector<WaveSegment> detect_waves(const WeeklySeries& cases, double min_prominence = 0.1,
                                      unsigned smoothing_window = 3);

/// Rows `label,start,end` (ISO dates).
std::vector<WaveSegment> load_official_waves(std::istream& in);

struct WaveTimeliness {
    std::string wave_label;
    std::optional<Date> first_fire;
    std::optional<int> lead_weeks;  // wave start - first fire, when fire <= start
    bool within_window = false;     // 0 <= lead <= 3
};

struct TimelinessReport {
    std::vector<WaveTimeliness> waves;
    double z_threshold = 2.0;
    unsigned baseline_window = 8;
};

/// A fire at week t means (signal[t] - trailing mean) / trailing std over the
/// prior baseline_window weeks exceeds z_threshold. The first fire is
/// searched from 3 weeks before the official start through the wave end.
TimelinessReport evaluate_timeliness(const WeeklySeries& signal,
                                     const std::vector<WaveSegment>& waves,
                                     double z_threshold = 2.0, unsigned baseline_window = 8);

}  // namespace avi
