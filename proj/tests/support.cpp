#include "support.hpp"

#include <atomic>
#include <unistd.h>

namespace test {

msc::WavelengthAxis fixture_axis() { return msc::WavelengthAxis(380, 10, 41); }

msc::SensitivitySet fixture_cmf() {
    return msc::load_sensitivities(data_dir() / "cmf_10nm.csv", fixture_axis(),
                                   msc::SensitivityKind::CmfXyz);
}

msc::SensitivitySet fixture_rgb() {
    return msc::load_sensitivities(data_dir() / "rgb_sens.csv", fixture_axis(),
                                   msc::SensitivityKind::CameraRgb);
}

msc::WavelengthAxis axis_for(int bands) {
    if (bands == 1)
        return msc::WavelengthAxis(380, 1, 1);
    const int step = std::min(400 / (bands - 1), 10);
    return msc::WavelengthAxis(380, std::max(step, 1), bands);
}

msc::SpectralImage random_cube(int width, int height, int bands, std::mt19937& rng,
                               int max_value) {
    std::uniform_int_distribution<int> dist(0, max_value);
    std::vector<std::uint8_t> samples(static_cast<std::size_t>(width) * height * bands);
    for (auto& s : samples)
        s = static_cast<std::uint8_t>(dist(rng));
    return msc::SpectralImage(width, height, axis_for(bands), std::move(samples));
}

std::array<double, 3> lab_inverse(const std::array<double, 3>& lab,
                                  const msc::ReferenceWhite& white) {
    const double fy = (lab[0] + 16.0) / 116.0;
    const double fx = fy + lab[1] / 500.0;
    const double fz = fy - lab[2] / 200.0;
    auto finv = [](double u) {
        const double d = msc::lab::kDelta;
        if (u > d)
            return u * u * u;
        return 3.0 * d * d * (u - 4.0 / 29.0);
    };
    return {white.Xn * finv(fx), white.Yn * finv(fy), white.Zn * finv(fz)};
}

TempDir::TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("msc_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

} // namespace test
