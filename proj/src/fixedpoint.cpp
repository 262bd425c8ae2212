#include "msc/fixedpoint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>

namespace msc::fx {

namespace {

std::int32_t saturate64(std::int64_t v) {
    if (v > kFxMax)
        return kFxMax;
    if (v < kFxMin)
        return kFxMin;
    return static_cast<std::int32_t>(v);
}

SqrtTable build_table() {
    SqrtTable t{};
    t.newton_iters = 2;
    // entries[i] estimates sqrt for radicands whose top byte is i after
    // normalization into [2^30, 2^32); estimate at the bucket floor so
    // estimate^2 never exceeds the bucket's lower bound.
    for (int i = 0; i < 256; ++i) {
        const std::uint64_t lo = static_cast<std::uint64_t>(i) << 24;
        t.entries[i] = static_cast<std::uint16_t>(
            std::min<std::uint64_t>(65535, static_cast<std::uint64_t>(std::sqrt(static_cast<double>(lo)))));
    }
    return t;
}

} // namespace

const SqrtTable& sqrt_table() {
    static const SqrtTable t = build_table();
    return t;
}

FxVal fx_from_u8(std::uint8_t v) {
    return FxVal{static_cast<std::int32_t>(v) << 16};
}

FxVal fx_from_real(double v) {
    const double scaled = v * 65536.0;
    if (scaled >= static_cast<double>(kFxMax))
        return FxVal{kFxMax};
    if (scaled <= static_cast<double>(kFxMin))
        return FxVal{kFxMin};
    return FxVal{static_cast<std::int32_t>(std::llround(scaled))};
}

FxVal fx_add(FxVal a, FxVal b) {
    return FxVal{saturate64(static_cast<std::int64_t>(a.raw) + b.raw)};
}

FxVal fx_sub(FxVal a, FxVal b) {
    return FxVal{saturate64(static_cast<std::int64_t>(a.raw) - b.raw)};
}

FxVal fx_mul(FxVal a, FxVal b) {
    return FxVal{saturate64((static_cast<std::int64_t>(a.raw) * b.raw) >> 16)};
}

FxVal fx_div_pow2(FxVal v, int m) {
    if (m < 0 || m > 31)
        fail("ShiftOutOfRange", "shift amount must be in [0, 31]");
    if (m == 0)
        return v;
    const std::int64_t x = v.raw;
    std::int64_t q = x >> m;
    const std::int64_t rem = x - (q << m);          // in [0, 2^m)
    const std::int64_t half = std::int64_t{1} << (m - 1);
    if (rem > half || (rem == half && (q & 1)))      // round to nearest, ties to even
        ++q;
    return FxVal{saturate64(q)};
}

std::uint16_t fx_isqrt(std::uint32_t v) {
    if (v == 0)
        return 0;
    // Normalize into [2^30, 2^32) by an even left shift.
    int shift = 0;
    std::uint32_t b = v;
    while (b < (1u << 30)) {
        b <<= 2;
        shift += 2;
    }
    std::uint32_t x = sqrt_table().entries[b >> 24];
    if (x == 0)
        x = 1;
    for (int i = 0; i < sqrt_table().newton_iters; ++i)
        x = static_cast<std::uint32_t>((static_cast<std::uint64_t>(x) + b / x) / 2);
    std::uint32_t r = x >> (shift / 2);
    // Floor correction: Newton from above can overshoot by one.
    while (static_cast<std::uint64_t>(r) * r > v)
        --r;
    while (static_cast<std::uint64_t>(r + 1) * (r + 1) <= v)
        ++r;
    return static_cast<std::uint16_t>(r);
}

namespace {

// Approximate sqrt(a * 2^scale_pow2) using the 32-bit isqrt on a
// normalized window; relative error ~2^-15 once a is nonzero.
std::uint64_t scaled_sqrt(std::uint64_t a, int scale_pow2) {
    if (a == 0)
        return 0;
    int e = scale_pow2;
    while (a >= (std::uint64_t{1} << 32)) {
        a >>= 2;
        e += 2;
    }
    while (a < (std::uint64_t{1} << 30)) {
        a <<= 2;
        e -= 2;
    }
    if (e & 1) { // keep the remaining exponent even
        a >>= 1;
        e += 1;
    }
    const std::uint64_t q = fx_isqrt(static_cast<std::uint32_t>(a));
    const int h = e / 2;
    return h >= 0 ? (q << h) : (q >> (-h));
}

} // namespace

FxVal fx_rms(std::span<const std::uint8_t> s1, std::span<const std::uint8_t> s2) {
    const std::size_t n = s1.size();
    if (n != s2.size())
        fail("DimensionMismatch", "fx_rms needs equal-length vectors");
    if (n == 0 || n > 512 || (n & (n - 1)) != 0)
        fail("NotPowerOfTwo", "band count must be 2^m, m <= 9");
    std::uint32_t sum = 0; // max 512 * 255^2 < 2^26, no overflow
    for (std::size_t i = 0; i < n; ++i) {
        const std::int32_t d = static_cast<std::int32_t>(s1[i]) - s2[i];
        sum += static_cast<std::uint32_t>(d * d);
    }
    const int m = std::countr_zero(n);
    // rms * 2^16 = sqrt(sum * 2^(32 - m))
    const std::uint64_t raw = scaled_sqrt(sum, 32 - m);
    return FxVal{saturate64(static_cast<std::int64_t>(raw))};
}

FxVal fx_de_rgb(const std::int32_t rgb1[3], const std::int32_t rgb2[3]) {
    constexpr std::int64_t kMag = std::int64_t{1} << 23;
    std::uint64_t acc = 0; // <= 3 * 2^46 < 2^48
    for (int c = 0; c < 3; ++c) {
        if (std::abs(static_cast<std::int64_t>(rgb1[c])) >= kMag ||
            std::abs(static_cast<std::int64_t>(rgb2[c])) >= kMag)
            fail("MagnitudeOverflow", "channel magnitude must fit 23 bits");
        const std::int64_t d = static_cast<std::int64_t>(rgb1[c]) - rgb2[c];
        acc += static_cast<std::uint64_t>(d * d);
    }
    const std::uint64_t raw = scaled_sqrt(acc, 32);
    return FxVal{saturate64(static_cast<std::int64_t>(std::min<std::uint64_t>(
        raw, static_cast<std::uint64_t>(kFxMax))))};
}

} // namespace msc::fx
