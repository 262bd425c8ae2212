#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <vector>

#include "msc/spectral_image.hpp"

namespace msc {

enum class SensitivityKind { CmfXyz, CameraRgb };

// 3 x N per-wavelength weights: CIE colour matching functions for XYZ,
// or camera channel sensitivities for RGB.
class SensitivitySet {
public:
    SensitivitySet(WavelengthAxis axis, std::array<std::vector<double>, 3> rows,
                   SensitivityKind kind);

    const WavelengthAxis& axis() const { return axis_; }
    SensitivityKind kind() const { return kind_; }
    const std::vector<double>& row(int c) const { return rows_[c]; }

    void require_axis(const WavelengthAxis& other) const;

    // Restricts the set to the bands a subsampled image kept.
    SensitivitySet subsample(int target) const;

private:
    WavelengthAxis axis_;
    std::array<std::vector<double>, 3> rows_;
    SensitivityKind kind_;
};

// CSV "wavelength,c1,c2,c3", one row per axis sample, no interpolation.
SensitivitySet load_sensitivities(const std::filesystem::path& path,
                                  const WavelengthAxis& axis,
                                  SensitivityKind kind);

// White point for the Lab transform. When built from a source spectrum,
// (Xn, Yn, Zn) is that spectrum's XYZ projection with Yn = 100.
struct ReferenceWhite {
    double Xn = 0.0;
    double Yn = 0.0;
    double Zn = 0.0;
    std::optional<std::vector<double>> source_spectrum;

    void validate() const {
        if (!(Yn > 0.0) || !(Xn > 0.0) || !(Zn > 0.0))
            fail("DegenerateWhite", "reference white must have positive X, Y, Z");
    }
};

// One real per line; must match axis.count lines.
std::vector<double> load_spectrum(const std::filesystem::path& path,
                                  const WavelengthAxis& axis);

} // namespace msc
