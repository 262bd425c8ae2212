#include "msc/spectral_image.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <map>

namespace msc {

namespace {

constexpr char kMagic[4] = {'M', 'S', 'C', '1'};
constexpr int kMinWavelength = 380;
constexpr int kMaxWavelength = 780;
constexpr int kMaxBands = 400;

void put_u32(std::ostream& os, std::uint32_t v) {
    char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                 static_cast<char>((v >> 16) & 0xff), static_cast<char>((v >> 24) & 0xff)};
    os.write(b, 4);
}

void put_u16(std::ostream& os, std::uint16_t v) {
    char b[2] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff)};
    os.write(b, 2);
}

std::uint32_t get_u32(const unsigned char* p) {
    return p[0] | (p[1] << 8) | (p[2] << 16) | (std::uint32_t(p[3]) << 24);
}

std::uint16_t get_u16(const unsigned char* p) {
    return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

} // namespace

WavelengthAxis::WavelengthAxis(int start, int step, int n)
    : start_nm(start), step_nm(step), count(n) {
    if (count < 1 || step_nm < 1)
        fail("AxisOutOfRange", "axis needs a positive step and at least one band");
    if (count > kMaxBands)
        fail("AxisOutOfRange", "band count " + std::to_string(count) + " exceeds 400");
    if (start_nm < kMinWavelength || start_nm + (count - 1) * step_nm > kMaxWavelength)
        fail("AxisOutOfRange", "axis leaves the 380-780 nm acquisition range");
}

WavelengthAxis WavelengthAxis::nominal(int start, int step, int n) {
    if (n < 1 || n > kMaxBands || step < 1)
        fail("AxisOutOfRange", "nominal axis needs 1..400 bands and a positive step");
    WavelengthAxis a;
    a.start_nm = start;
    a.step_nm = step;
    a.count = n;
    return a;
}

SpectralImage::SpectralImage(int width, int height, WavelengthAxis axis,
                             std::vector<std::uint8_t> samples,
                             std::vector<std::uint32_t> band_indices)
    : width_(width), height_(height), axis_(axis), samples_(std::move(samples)),
      band_indices_(std::move(band_indices)) {
    if (width_ < 1 || height_ < 1)
        fail("InvariantViolation", "image dimensions must be positive");
    const std::size_t expected =
        static_cast<std::size_t>(width_) * height_ * axis_.count;
    if (samples_.size() != expected)
        fail("InvariantViolation", "sample count does not equal width*height*bands");
    if (!band_indices_.empty() && band_indices_.size() != static_cast<std::size_t>(axis_.count))
        fail("InvariantViolation", "band index map length does not match band count");
}

void SpectralImage::spectrum(int x, int y, std::span<double> out) const {
    const std::size_t plane = static_cast<std::size_t>(width_) * height_;
    const std::size_t base = static_cast<std::size_t>(y) * width_ + x;
    for (int b = 0; b < axis_.count; ++b)
        out[b] = samples_[b * plane + base];
}

SpectralImage load_cube(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail("IoFailure", "cannot open " + path.string());
    unsigned char header[20];
    in.read(reinterpret_cast<char*>(header), sizeof(header));
    if (in.gcount() != sizeof(header) || std::memcmp(header, kMagic, 4) != 0)
        fail("MalformedHeader", "missing MSC1 magic in " + path.string());
    const std::uint32_t width = get_u32(header + 4);
    const std::uint32_t height = get_u32(header + 8);
    const std::uint32_t count = get_u32(header + 12);
    const std::uint16_t start = get_u16(header + 16);
    const std::uint16_t step = get_u16(header + 18);
    if (width == 0 || height == 0 || count == 0)
        fail("MalformedHeader", "zero dimension in cube header");
    if (count > kMaxBands)
        fail("AxisOutOfRange", "cube header declares more than 400 bands");
    WavelengthAxis axis(start, step, static_cast<int>(count));
    const std::size_t payload = static_cast<std::size_t>(width) * height * count;
    std::vector<std::uint8_t> samples(payload);
    in.read(reinterpret_cast<char*>(samples.data()), static_cast<std::streamsize>(payload));
    if (static_cast<std::size_t>(in.gcount()) != payload)
        fail("TruncatedData", "payload shorter than width*height*bands");
    return SpectralImage(static_cast<int>(width), static_cast<int>(height), axis,
                         std::move(samples));
}

void save_cube(const SpectralImage& img, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        fail("IoFailure", "cannot open " + path.string() + " for writing");
    out.write(kMagic, 4);
    put_u32(out, static_cast<std::uint32_t>(img.width()));
    put_u32(out, static_cast<std::uint32_t>(img.height()));
    put_u32(out, static_cast<std::uint32_t>(img.bands()));
    put_u16(out, static_cast<std::uint16_t>(img.axis().start_nm));
    put_u16(out, static_cast<std::uint16_t>(img.axis().step_nm));
    out.write(reinterpret_cast<const char*>(img.samples().data()),
              static_cast<std::streamsize>(img.samples().size()));
    if (!out)
        fail("IoFailure", "write failed for " + path.string());
}

std::vector<std::uint32_t> subsample_indices(int count, int target) {
    std::vector<std::uint32_t> idx(target);
    for (int i = 0; i < target; ++i)
        idx[i] = static_cast<std::uint32_t>(
            (static_cast<std::int64_t>(i) * count) / target);
    return idx;
}

SpectralImage subsample_bands(const SpectralImage& img, int target) {
    const int count = img.bands();
    if (target < 1 || target > count)
        fail("TargetOutOfRange", "target band count must be in [1, bands]");
    if (target == count)
        return img;
    const auto idx = subsample_indices(count, target);

    // Step of the derived axis: the modal stride between selected
    // indices, in original-step units. Non-uniform strides keep an
    // explicit index map.
    bool uniform = true;
    std::map<std::uint32_t, int> stride_freq;
    for (int i = 1; i < target; ++i) {
        const std::uint32_t s = idx[i] - idx[i - 1];
        stride_freq[s]++;
        if (s != idx[1] - idx[0])
            uniform = false;
    }
    std::uint32_t modal = target > 1 ? idx[1] - idx[0] : 1;
    int best = -1;
    for (const auto& [s, freq] : stride_freq)
        if (freq > best) { best = freq; modal = s; }

    const int step = static_cast<int>(modal) * img.axis().step_nm;
    const int extent = img.axis().start_nm + (target - 1) * step;
    WavelengthAxis axis = (uniform && extent <= kMaxWavelength)
                              ? WavelengthAxis(img.axis().start_nm, step, target)
                              : WavelengthAxis::nominal(img.axis().start_nm, step, target);
    const std::size_t plane = static_cast<std::size_t>(img.width()) * img.height();
    std::vector<std::uint8_t> samples(plane * target);
    for (int b = 0; b < target; ++b)
        std::copy_n(img.samples().data() + idx[b] * plane, plane,
                    samples.data() + static_cast<std::size_t>(b) * plane);
    return SpectralImage(img.width(), img.height(), axis, std::move(samples),
                         uniform ? std::vector<std::uint32_t>{} : idx);
}

} // namespace msc
