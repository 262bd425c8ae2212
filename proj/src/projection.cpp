#include "msc/projection.hpp"

#include <cmath>

#include "msc/kernels.hpp"

namespace msc {

namespace lab {

namespace {

// libm cbrt can be a ulp off even on exact cubes (cbrt(1/8) != 0.5 with
// glibc); one Newton step lands exact cubes on their exact roots without
// hurting accuracy anywhere else.
double cube_root(double t) {
    double r = std::cbrt(t);
    if (r > 0.0) {
        const double r2 = r * r;
        r -= (r2 * r - t) / (3.0 * r2);
    }
    return r;
}

} // namespace

double f(double t) {
    if (t > kDelta3)
        return cube_root(t);
    return t / (3.0 * kDelta * kDelta) + 4.0 / 29.0;
}

double fprime(double t) {
    if (t > kDelta3) {
        const double r = cube_root(t);
        return 1.0 / (3.0 * r * r);
    }
    return 1.0 / (3.0 * kDelta * kDelta);
}

} // namespace lab

TriImage::TriImage(int width, int height, ColorSpace space, std::vector<double> values)
    : width_(width), height_(height), space_(space), values_(std::move(values)) {
    if (width_ < 1 || height_ < 1)
        fail("InvariantViolation", "image dimensions must be positive");
    if (values_.size() != static_cast<std::size_t>(width_) * height_ * 3)
        fail("InvariantViolation", "value count does not equal width*height*3");
    for (double v : values_)
        if (!std::isfinite(v))
            fail("InvariantViolation", "non-finite value in projected image");
}

TriImage project_rgb(const SpectralImage& img, const SensitivitySet& sens) {
    sens.require_axis(img.axis());
    const int n = img.bands();
    std::vector<double> values(static_cast<std::size_t>(img.width()) * img.height() * 3);
    std::vector<double> s(n);
    std::size_t out = 0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            img.spectrum(x, y, s);
            auto rgb = kern::project3<double>(s, sens);
            values[out++] = rgb[0];
            values[out++] = rgb[1];
            values[out++] = rgb[2];
        }
    return TriImage(img.width(), img.height(), ColorSpace::Rgb, std::move(values));
}

namespace {

double white_normalization(const SensitivitySet& cmf,
                           const std::optional<std::vector<double>>& white) {
    const auto& ybar = cmf.row(1);
    double denom = 0.0;
    if (white) {
        if (white->size() != ybar.size())
            fail("AxisMismatch", "white spectrum length does not match CMF axis");
        for (std::size_t i = 0; i < ybar.size(); ++i) {
            if ((*white)[i] < 0.0)
                fail("DegenerateWhite", "white spectrum entries must be nonnegative");
            denom += ybar[i] * (*white)[i];
        }
    } else {
        for (double y : ybar)
            denom += y * 255.0;
    }
    if (denom <= 0.0)
        fail("DegenerateWhite", "ybar . white is zero");
    return 100.0 / denom;
}

} // namespace

double xyz_normalization_k(const SensitivitySet& cmf,
                           const std::optional<std::vector<double>>& white) {
    return white_normalization(cmf, white);
}

std::pair<TriImage, XyzNormalization>
project_xyz(const SpectralImage& img, const SensitivitySet& cmf,
            const std::optional<std::vector<double>>& white) {
    cmf.require_axis(img.axis());
    const double k = white_normalization(cmf, white);
    const int n = img.bands();
    std::vector<double> values(static_cast<std::size_t>(img.width()) * img.height() * 3);
    std::vector<double> s(n);
    std::size_t out = 0;
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x) {
            img.spectrum(x, y, s);
            auto xyz = kern::project3<double>(s, cmf);
            values[out++] = k * xyz[0];
            values[out++] = k * xyz[1];
            values[out++] = k * xyz[2];
        }
    return {TriImage(img.width(), img.height(), ColorSpace::Xyz, std::move(values)),
            XyzNormalization{k}};
}

ReferenceWhite make_reference_white(const SensitivitySet& cmf,
                                    const std::optional<std::vector<double>>& white) {
    const double k = white_normalization(cmf, white);
    const int n = cmf.axis().count;
    std::vector<double> w = white ? *white : std::vector<double>(n, 255.0);
    double sums[3] = {0.0, 0.0, 0.0};
    for (int c = 0; c < 3; ++c)
        for (int i = 0; i < n; ++i)
            sums[c] += cmf.row(c)[i] * w[i];
    ReferenceWhite rw{k * sums[0], k * sums[1], k * sums[2], std::move(w)};
    rw.validate();
    return rw;
}

TriImage xyz_to_lab(const TriImage& img, const ReferenceWhite& white) {
    if (img.space() != ColorSpace::Xyz)
        fail("InvariantViolation", "xyz_to_lab needs an XYZ image");
    white.validate();
    std::vector<double> values(img.values().size());
    const std::size_t pixels = static_cast<std::size_t>(img.width()) * img.height();
    for (std::size_t p = 0; p < pixels; ++p) {
        const double fx = lab::f(img.values()[p * 3 + 0] / white.Xn);
        const double fy = lab::f(img.values()[p * 3 + 1] / white.Yn);
        const double fz = lab::f(img.values()[p * 3 + 2] / white.Zn);
        values[p * 3 + 0] = 116.0 * fy - 16.0;
        values[p * 3 + 1] = 500.0 * (fx - fy);
        values[p * 3 + 2] = 200.0 * (fy - fz);
    }
    return TriImage(img.width(), img.height(), ColorSpace::Lab, std::move(values));
}

} // namespace msc
