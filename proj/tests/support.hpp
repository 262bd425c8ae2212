#pragma once

#include <array>
#include <filesystem>
#include <random>
#include <string>

#include "msc/metrics.hpp"
#include "msc/projection.hpp"
#include "msc/sensitivity.hpp"
#include "msc/spectral_image.hpp"

namespace test {

inline std::filesystem::path data_dir() { return MSC_DATA_DIR; }
inline std::filesystem::path golden_dir() { return MSC_GOLDEN_DIR; }

// The 41-band 10 nm fixture axis (380-780 nm).
msc::WavelengthAxis fixture_axis();
msc::SensitivitySet fixture_cmf();
msc::SensitivitySet fixture_rgb();

// Valid axis for an arbitrary band count (spreads over 380-780 nm).
msc::WavelengthAxis axis_for(int bands);

msc::SpectralImage random_cube(int width, int height, int bands, std::mt19937& rng,
                               int max_value = 255);

// Analytic Lab inverse, test-only: recovers XYZ from L*a*b*.
std::array<double, 3> lab_inverse(const std::array<double, 3>& lab,
                                  const msc::ReferenceWhite& white);

// Scratch directory unique per test run.
class TempDir {
public:
    TempDir();
    ~TempDir();
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace test
