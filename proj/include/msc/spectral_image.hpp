#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "msc/errors.hpp"

namespace msc {

// Wavelength sampling grid. The acquisition range is 380-780 nm with
// 1 nm granularity and at most 400 bands.
struct WavelengthAxis {
    int start_nm = 380;
    int step_nm = 1;
    int count = 1;

    WavelengthAxis() = default;
    WavelengthAxis(int start, int step, int n);

    // Nominal axis for a derived band subset whose modal stride would
    // overshoot the acquisition range; the band index map is
    // authoritative there, so only count/step positivity is enforced.
    static WavelengthAxis nominal(int start, int step, int n);

    int wavelength(int i) const { return start_nm + i * step_nm; }
    bool operator==(const WavelengthAxis&) const = default;
};

// W x H x N cube of 8-bit band samples, band-sequential in memory
// (band-major, matching the on-disk layout). Immutable after construction.
class SpectralImage {
public:
    SpectralImage(int width, int height, WavelengthAxis axis,
                  std::vector<std::uint8_t> samples,
                  std::vector<std::uint32_t> band_indices = {});

    int width() const { return width_; }
    int height() const { return height_; }
    int bands() const { return axis_.count; }
    const WavelengthAxis& axis() const { return axis_; }

    std::uint8_t at(int x, int y, int band) const {
        return samples_[(static_cast<std::size_t>(band) * height_ + y) * width_ + x];
    }

    // Copies the spectrum of one pixel into out (length >= bands()).
    void spectrum(int x, int y, std::span<double> out) const;

    std::span<const std::uint8_t> samples() const { return samples_; }

    // When the image was produced by subsample_bands with a non-uniform
    // stride, this maps each band to its index in the parent cube.
    // Empty for native cubes and uniform-stride subsets.
    const std::vector<std::uint32_t>& band_indices() const { return band_indices_; }

    bool same_shape(const SpectralImage& o) const {
        return width_ == o.width_ && height_ == o.height_ && axis_ == o.axis_;
    }

private:
    int width_;
    int height_;
    WavelengthAxis axis_;
    std::vector<std::uint8_t> samples_;
    std::vector<std::uint32_t> band_indices_;
};

// Binary cube format: magic "MSC1", little-endian u32 width/height/count,
// u16 start_nm/step_nm, then band-sequential u8 payload. Bit-exact
// round-trip with save_cube.
SpectralImage load_cube(const std::filesystem::path& path);
void save_cube(const SpectralImage& img, const std::filesystem::path& path);

// Band indices selected when reducing a cube from `count` to `target`
// bands: floor(i * count / target) for i = 0..target-1.
std::vector<std::uint32_t> subsample_indices(int count, int target);

// Keeps pixel values unchanged, selecting bands by index stride.
// No interpolation or averaging anywhere.
SpectralImage subsample_bands(const SpectralImage& img, int target);

} // namespace msc
