#pragma once

#include <map>
#include <string>
#include <vector>

#include "msc/metrics.hpp"
#include "msc/opcount.hpp"

namespace msc {

enum class NumericType { Integer, Float };

struct Stage {
    Op op;
    std::uint64_t count; // per pixel, function of N
    NumericType result;
    bool parallel;
};

struct OpProfile {
    std::vector<Stage> stages;
    OpCounts totals() const;
};

// Per-module clock frequencies (MHz). Processing runs the metrics.
struct ClockModel {
    double f_control_mhz = 150.0;
    double f_acquisition_mhz = 77.0;
    double f_storage_mhz = 100.0;
    double f_processing_mhz = 50.0;
};

enum class CostSource { PublishedTable, DerivedCounter };

struct CostReport {
    Metric algorithm;
    int bands;
    OpProfile projection_ops;
    OpProfile distance_ops;
    CostSource source;
    // filled by estimate_latency
    std::uint64_t cycles = 0;
    double latency_us = 0.0;
    int sqrt_cycles = 0;
    int cbrt_cycles = 0;
    double clock_mhz = 0.0;

    OpCounts totals() const;
};

// Published per-algorithm operation-count table with the reference band
// count substituted by N. Counts are per pixel.
CostReport published_profile(Metric algorithm, int bands);

// Runs the metric on the image pair through the counting scalar and
// reports exact per-pixel op totals. Single-threaded by contract; counts
// are a function of N only, never of pixel data.
CostReport measured_profile(Metric algorithm, const SpectralImage& img1,
                            const SpectralImage& img2, const MetricConfig& cfg);

struct LatencyParams {
    int sqrt_cycles = 16; // model parameter, not a published value
    int cbrt_cycles = 32; // model parameter, not a published value
};

// Cycle model: a parallel stage issues in 1 cycle, a serial stage in
// `count` cycles; SQRT/CBRT stages add a pipeline-fill surcharge of
// sqrt_cycles/cbrt_cycles once per stage. latency_us = cycles / f_processing.
CostReport estimate_latency(CostReport profile, const ClockModel& clocks,
                            const LatencyParams& params = {});

std::uint64_t stage_cycles(const Stage& s, const LatencyParams& params);

// Published adaptability order plus a computed ranking from a weighted
// op-cost score (division and cube root heavily penalized). The two can
// disagree in the middle; head and tail coincide.
struct AdaptabilityRank {
    std::vector<Metric> published;
    std::vector<Metric> computed;
    std::map<Metric, double> scores;
};
AdaptabilityRank adaptability_rank();
double adaptability_score(const CostReport& report);

// Hardware reference constants echoed verbatim in reports (informational
// only; nothing in this library derives them).
struct HardwareReference {
    int rgb_projection_slices = 63;
    int rgb_projection_dsp48 = 4;
    int sqrt_slices = 161;
    int sqrt_luts = 292;
    int processing_logic_cells = 364;
    int system_logic_cells = 1237;
    int system_utilization_pct = 20;
    double synthesis_mhz = 186.0;
    ClockModel clocks{};
};
const HardwareReference& hardware_reference();

} // namespace msc
