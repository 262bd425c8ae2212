#include "msc/metrics.hpp"

#include <cmath>
#include <thread>

#include "msc/kernels.hpp"

namespace msc {

const char* metric_name(Metric m) {
    switch (m) {
    case Metric::Rms: return "rms";
    case Metric::Wrms: return "wrms";
    case Metric::Gfc: return "gfc";
    case Metric::DeRgb: return "de-rgb";
    case Metric::DeLab: return "de-lab";
    case Metric::Mv: return "mv";
    }
    return "?";
}

Metric metric_from_name(const std::string& name) {
    for (Metric m : {Metric::Rms, Metric::Wrms, Metric::Gfc, Metric::DeRgb,
                     Metric::DeLab, Metric::Mv})
        if (name == metric_name(m))
            return m;
    fail("UnknownAlgorithm", "no metric named '" + name + "'");
}

Polarity metric_polarity(Metric m) {
    return m == Metric::Gfc ? Polarity::Similarity : Polarity::Distance;
}

WeightVector::WeightVector(std::vector<double> w) : w_(std::move(w)) {
    if (w_.empty())
        fail("InvariantViolation", "weight vector must be nonempty");
    double sum = 0.0;
    for (double v : w_) {
        if (!(v >= 0.0) || !std::isfinite(v))
            fail("InvariantViolation", "weights must be finite and nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-12)
        fail("InvariantViolation", "weights must sum to 1");
}

WeightVector uniform_weights(int n) {
    return WeightVector(std::vector<double>(n, 1.0 / n));
}

double rms(std::span<const double> s1, std::span<const double> s2) {
    if (s1.size() != s2.size() || s1.empty())
        fail("DimensionMismatch", "rms needs two equal-length nonempty spectra");
    return kern::rms<double>(s1, s2);
}

double wrms(std::span<const double> s1, std::span<const double> s2, const WeightVector& w) {
    if (s1.size() != s2.size() || s1.empty())
        fail("DimensionMismatch", "wrms needs two equal-length nonempty spectra");
    if (w.values().size() != s1.size())
        fail("WeightLengthMismatch", "weight vector length does not match spectrum length");
    return kern::wrms<double>(s1, s2, w.values());
}

double gfc(std::span<const double> s1, std::span<const double> s2) {
    if (s1.size() != s2.size() || s1.empty())
        fail("DimensionMismatch", "gfc needs two equal-length nonempty spectra");
    return kern::gfc<double>(s1, s2);
}

double tree_sum(std::span<const double> v) {
    if (v.empty())
        return 0.0;
    if (v.size() == 1)
        return v[0];
    const std::size_t half = v.size() / 2;
    return tree_sum(v.first(half)) + tree_sum(v.subspan(half));
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i)
            fn(i);
        return;
    }
    const std::size_t w = std::min<std::size_t>(workers, n);
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (std::size_t t = 0; t < w; ++t)
        threads.emplace_back([&, t] {
            for (std::size_t i = t; i < n; i += w)
                fn(i);
        });
    for (auto& th : threads)
        th.join();
}

namespace {

void require_compatible(const SpectralImage& a, const SpectralImage& b) {
    if (a.width() != b.width() || a.height() != b.height())
        fail("DimensionMismatch", "image dimensions differ");
    if (!(a.axis() == b.axis()))
        fail("AxisMismatch", "image wavelength axes differ");
}

DistanceResult finalize(Metric m, const SpectralImage& img, std::vector<double> per_pixel) {
    DistanceResult r;
    r.metric = m;
    r.width = img.width();
    r.height = img.height();
    r.aggregate = tree_sum(per_pixel) / static_cast<double>(per_pixel.size());
    r.per_pixel = std::move(per_pixel);
    r.polarity = metric_polarity(m);
    return r;
}

// Per-pixel map via a spectrum-pair kernel, partitioned across workers.
template <class Fn>
std::vector<double> per_pixel_map(const SpectralImage& a, const SpectralImage& b,
                                  int workers, Fn&& fn) {
    const std::size_t pixels = static_cast<std::size_t>(a.width()) * a.height();
    std::vector<double> out(pixels);
    const int n = a.bands();
    parallel_for(pixels, workers, [&](std::size_t p) {
        thread_local std::vector<double> s1, s2;
        s1.resize(n);
        s2.resize(n);
        const int x = static_cast<int>(p % a.width());
        const int y = static_cast<int>(p / a.width());
        a.spectrum(x, y, s1);
        b.spectrum(x, y, s2);
        out[p] = fn(s1, s2);
    });
    return out;
}

} // namespace

DistanceResult de_rgb(const SpectralImage& img1, const SpectralImage& img2,
                      const SensitivitySet& sens, int workers) {
    require_compatible(img1, img2);
    sens.require_axis(img1.axis());
    auto pp = per_pixel_map(img1, img2, workers,
                            [&](std::span<const double> s1, std::span<const double> s2) {
                                auto p = kern::project3<double>(s1, sens);
                                auto q = kern::project3<double>(s2, sens);
                                return kern::de3<double>(p, q);
                            });
    return finalize(Metric::DeRgb, img1, std::move(pp));
}

DistanceResult de_lab(const SpectralImage& img1, const SpectralImage& img2,
                      const SensitivitySet& cmf,
                      const std::optional<std::vector<double>>& white, int workers) {
    require_compatible(img1, img2);
    cmf.require_axis(img1.axis());
    const ReferenceWhite rw = make_reference_white(cmf, white);
    const double kn = xyz_normalization_k(cmf, white);
    auto pp = per_pixel_map(img1, img2, workers,
                            [&](std::span<const double> s1, std::span<const double> s2) {
                                auto l1 = kern::lab_from_spectrum<double>(s1, cmf, kn, rw);
                                auto l2 = kern::lab_from_spectrum<double>(s2, cmf, kn, rw);
                                return kern::de3<double>(l1, l2);
                            });
    return finalize(Metric::DeLab, img1, std::move(pp));
}

DistanceResult mv_metric(const SpectralImage& oi, const SpectralImage& ci,
                         const SensitivitySet& cmf,
                         const std::optional<std::vector<double>>& white, int workers) {
    require_compatible(oi, ci);
    cmf.require_axis(oi.axis());
    const ReferenceWhite rw = make_reference_white(cmf, white);
    const double k = xyz_normalization_k(cmf, white);
    const int n = oi.bands();
    auto pp = per_pixel_map(oi, ci, workers,
                            [&](std::span<const double> s1, std::span<const double> s2) {
                                thread_local std::vector<double> wl, wa, wb;
                                wl.resize(n);
                                wa.resize(n);
                                wb.resize(n);
                                return kern::mv<double>(s1, s2, cmf, k, rw, wl, wa, wb);
                            });
    return finalize(Metric::Mv, oi, std::move(pp));
}

DistanceResult image_metric(Metric metric, const SpectralImage& img1,
                            const SpectralImage& img2, const MetricConfig& cfg) {
    require_compatible(img1, img2);
    switch (metric) {
    case Metric::Rms:
        return finalize(metric, img1,
                        per_pixel_map(img1, img2, cfg.workers,
                                      [](std::span<const double> a, std::span<const double> b) {
                                          return kern::rms<double>(a, b);
                                      }));
    case Metric::Wrms: {
        if (!cfg.weights)
            fail("MissingConfig", "wrms requires weights");
        if (cfg.weights->values().size() != static_cast<std::size_t>(img1.bands()))
            fail("WeightLengthMismatch", "weight vector length does not match band count");
        const auto& w = cfg.weights->values();
        return finalize(metric, img1,
                        per_pixel_map(img1, img2, cfg.workers,
                                      [&](std::span<const double> a, std::span<const double> b) {
                                          return kern::wrms<double>(a, b, w);
                                      }));
    }
    case Metric::Gfc:
        return finalize(metric, img1,
                        per_pixel_map(img1, img2, cfg.workers,
                                      [](std::span<const double> a, std::span<const double> b) {
                                          return kern::gfc<double>(a, b);
                                      }));
    case Metric::DeRgb:
        if (!cfg.rgb_sens)
            fail("MissingConfig", "de-rgb requires camera RGB sensitivities");
        return de_rgb(img1, img2, *cfg.rgb_sens, cfg.workers);
    case Metric::DeLab:
        if (!cfg.cmf)
            fail("MissingConfig", "de-lab requires a CMF sensitivity set");
        return de_lab(img1, img2, *cfg.cmf, cfg.white_spectrum, cfg.workers);
    case Metric::Mv:
        if (!cfg.cmf)
            fail("MissingConfig", "mv requires a CMF sensitivity set");
        return mv_metric(img1, img2, *cfg.cmf, cfg.white_spectrum, cfg.workers);
    }
    fail("UnknownAlgorithm", "unhandled metric tag");
}

MvWeights mv_pixel_weights(std::span<const double> oi_spectrum, const SensitivitySet& cmf,
                           double k, const ReferenceWhite& white) {
    const std::size_t n = oi_spectrum.size();
    MvWeights w{std::vector<double>(n), std::vector<double>(n), std::vector<double>(n)};
    kern::mv_weights<double>(oi_spectrum, cmf, k, white, w.wl, w.wa, w.wb);
    return w;
}

} // namespace msc
