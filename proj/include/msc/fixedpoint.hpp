#pragma once

#include <cstdint>
#include <span>

#include "msc/errors.hpp"

namespace msc::fx {

// Q16.16 fixed-point scalar. All arithmetic saturates at the int32
// bounds; nothing in this module ever wraps.
struct FxVal {
    std::int32_t raw = 0;

    static FxVal from_raw(std::int32_t r) { return FxVal{r}; }
    double to_real() const { return raw / 65536.0; }
    bool operator==(const FxVal&) const = default;
};

inline constexpr std::int32_t kFxMax = INT32_MAX;
inline constexpr std::int32_t kFxMin = INT32_MIN;

FxVal fx_from_u8(std::uint8_t v);
FxVal fx_from_real(double v); // test/CLI convenience, saturating

FxVal fx_add(FxVal a, FxVal b);
FxVal fx_sub(FxVal a, FxVal b);
FxVal fx_mul(FxVal a, FxVal b);

// Division restricted to powers of two: an arithmetic right shift with
// round-to-nearest-even on the discarded bits. General division does not
// exist in this module.
FxVal fx_div_pow2(FxVal v, int m);

// floor(sqrt(v)), exact for every 32-bit input. 256-entry initial
// estimate table on the normalized radicand, two Newton steps, then a
// one-step floor correction.
std::uint16_t fx_isqrt(std::uint32_t v);

struct SqrtTable {
    std::uint16_t entries[256];
    int newton_iters;
};
const SqrtTable& sqrt_table();

// RMS over 8-bit vectors with N = 2^m (m <= 9): integer sum of squared
// differences, shift division, square root through fx_isqrt on a
// normalized radicand. Within 2^-8 relative of the real-valued RMS.
FxVal fx_rms(std::span<const std::uint8_t> s1, std::span<const std::uint8_t> s2);

// Euclidean distance of two integer triples; channel magnitudes must fit
// 23 bits so the squared sum stays inside a 48-bit accumulator.
FxVal fx_de_rgb(const std::int32_t rgb1[3], const std::int32_t rgb2[3]);

} // namespace msc::fx
