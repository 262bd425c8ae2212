#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msc/projection.hpp"

namespace msc {

enum class Metric { Rms, Wrms, Gfc, DeRgb, DeLab, Mv };

const char* metric_name(Metric m);
Metric metric_from_name(const std::string& name);

// DISTANCE: 0 means identical. SIMILARITY: 1 means identical (GFC).
enum class Polarity { Distance, Similarity };
Polarity metric_polarity(Metric m);

// Normalized nonnegative weights for WRMS.
class WeightVector {
public:
    explicit WeightVector(std::vector<double> w);
    const std::vector<double>& values() const { return w_; }

private:
    std::vector<double> w_;
};

WeightVector uniform_weights(int n);

struct DistanceResult {
    Metric metric;
    int width = 0;
    int height = 0;
    std::vector<double> per_pixel; // row-major W x H
    double aggregate = 0.0;        // arithmetic mean over pixels
    Polarity polarity = Polarity::Distance;
};

// Scalar forms on real-lifted spectra.
double rms(std::span<const double> s1, std::span<const double> s2);
double wrms(std::span<const double> s1, std::span<const double> s2, const WeightVector& w);
double gfc(std::span<const double> s1, std::span<const double> s2);

// Deterministic fixed-order pairwise summation; the reduction order is a
// function of the element count only, so worker partitioning of the
// per-pixel stage cannot change the aggregate bit pattern.
double tree_sum(std::span<const double> v);

// Runs fn(i) for i in [0, n) across `workers` threads.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

struct MetricConfig {
    std::optional<WeightVector> weights;            // WRMS
    std::optional<SensitivitySet> rgb_sens;         // DE_RGB
    std::optional<SensitivitySet> cmf;              // DE_LAB, MV
    std::optional<std::vector<double>> white_spectrum; // XYZ normalization
    int workers = 1;
};

DistanceResult de_rgb(const SpectralImage& img1, const SpectralImage& img2,
                      const SensitivitySet& sens, int workers = 1);
DistanceResult de_lab(const SpectralImage& img1, const SpectralImage& img2,
                      const SensitivitySet& cmf,
                      const std::optional<std::vector<double>>& white = std::nullopt,
                      int workers = 1);
DistanceResult mv_metric(const SpectralImage& oi, const SpectralImage& ci,
                         const SensitivitySet& cmf,
                         const std::optional<std::vector<double>>& white = std::nullopt,
                         int workers = 1);

// Dispatch on metric tag. RMS/WRMS/GFC run on raw spectra with no
// projection; the colour metrics project implicitly.
DistanceResult image_metric(Metric metric, const SpectralImage& img1,
                            const SpectralImage& img2, const MetricConfig& cfg);

// Analytic per-band Lab sensitivity weights for one OI pixel (double form
// of the kernel; used by the finite-difference validation and exposed for
// inspection).
struct MvWeights {
    std::vector<double> wl, wa, wb;
};
MvWeights mv_pixel_weights(std::span<const double> oi_spectrum, const SensitivitySet& cmf,
                           double k, const ReferenceWhite& white);

} // namespace msc
