#pragma once

#include <optional>
#include <vector>

#include "msc/sensitivity.hpp"
#include "msc/spectral_image.hpp"

namespace msc {

enum class ColorSpace { Rgb, Xyz, Lab };

// W x H x 3 real-valued image in one of the three projection spaces.
class TriImage {
public:
    TriImage(int width, int height, ColorSpace space, std::vector<double> values);

    int width() const { return width_; }
    int height() const { return height_; }
    ColorSpace space() const { return space_; }

    double at(int x, int y, int c) const {
        return values_[(static_cast<std::size_t>(y) * width_ + x) * 3 + c];
    }
    const std::vector<double>& values() const { return values_; }

private:
    int width_;
    int height_;
    ColorSpace space_;
    std::vector<double> values_;
};

// Scaling constant applied to raw XYZ sums so the reference white gets Y = 100.
struct XyzNormalization {
    double k = 1.0;
};

// Per pixel, channel c = sum over bands of sens[c][b] * sample(b).
// Linear, no gamma.
TriImage project_rgb(const SpectralImage& img, const SensitivitySet& sens);

// Raw tristimulus sums scaled by k = 100 / (ybar . white). Without a
// measured white spectrum the fallback is a flat spectrum at 255.
std::pair<TriImage, XyzNormalization>
project_xyz(const SpectralImage& img, const SensitivitySet& cmf,
            const std::optional<std::vector<double>>& white = std::nullopt);

// The scaling constant project_xyz applies for a given CMF/white pair.
double xyz_normalization_k(const SensitivitySet& cmf,
                           const std::optional<std::vector<double>>& white = std::nullopt);

// Reference white implied by a CMF set and (optional) white spectrum,
// consistent with project_xyz's normalization: Yn = 100.
ReferenceWhite make_reference_white(const SensitivitySet& cmf,
                                    const std::optional<std::vector<double>>& white = std::nullopt);

// CIE L*a*b* with the standard two-branch transfer function
// f(t) = t^(1/3) above (6/29)^3, linear segment below.
TriImage xyz_to_lab(const TriImage& img, const ReferenceWhite& white);

namespace lab {
inline constexpr double kDelta = 6.0 / 29.0;
inline constexpr double kDelta3 = kDelta * kDelta * kDelta;
double f(double t);
double fprime(double t);
} // namespace lab

} // namespace msc
