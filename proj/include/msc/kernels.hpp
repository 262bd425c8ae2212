#pragma once

#include <algorithm>
#include <array>
#include <span>

#include "msc/opcount.hpp"
#include "msc/projection.hpp"

// Per-pixel metric kernels. Templated on the scalar so the instrumented
// build (ops::Cd) measures exactly the arithmetic the double build runs.
namespace msc::kern {

using ops::op_cbrt;
using ops::op_div_n;
using ops::op_sqrt;
using ops::value_of;

template <class T>
T rms(std::span<const double> a, std::span<const double> b) {
    T d = T(a[0]) - T(b[0]);
    T acc = d * d;
    for (std::size_t i = 1; i < a.size(); ++i) {
        d = T(a[i]) - T(b[i]);
        acc = acc + d * d;
    }
    return op_sqrt(op_div_n(acc, a.size()));
}

template <class T>
T wrms(std::span<const double> a, std::span<const double> b, std::span<const double> w) {
    T acc{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        T d = T(a[i]) - T(b[i]);
        acc = acc + T(w[i]) * (d * d);
    }
    return op_sqrt(acc);
}

// |<a,b>| / sqrt(|a|^2 |b|^2). The single-sqrt form makes gfc(s, s)
// evaluate to exactly 1 on exact integer-valued sums.
template <class T>
T gfc(std::span<const double> a, std::span<const double> b) {
    T dot{};
    T na{};
    T nb{};
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot = dot + T(a[i]) * T(b[i]);
        na = na + T(a[i]) * T(a[i]);
        nb = nb + T(b[i]) * T(b[i]);
    }
    if (value_of(na) == 0.0 || value_of(nb) == 0.0)
        fail("ZeroSpectrum", "gfc is undefined for an all-zero spectrum");
    T r = dot / op_sqrt(na * nb);
    double rv = std::abs(value_of(r));
    if (rv > 1.0 + 1e-12)
        fail("InvariantViolation", "gfc overshoot beyond round-off budget");
    return T(std::clamp(rv, 0.0, 1.0));
}

// 3-channel linear projection of one pixel spectrum.
template <class T>
std::array<T, 3> project3(std::span<const double> s, const SensitivitySet& sens) {
    std::array<T, 3> out{};
    for (int c = 0; c < 3; ++c) {
        T acc{};
        const auto& row = sens.row(c);
        for (std::size_t i = 0; i < s.size(); ++i)
            acc = acc + T(row[i]) * T(s[i]);
        out[c] = acc;
    }
    return out;
}

// Euclidean distance between two 3-vectors.
template <class T>
T de3(const std::array<T, 3>& p, const std::array<T, 3>& q) {
    T d0 = p[0] - q[0];
    T d1 = p[1] - q[1];
    T d2 = p[2] - q[2];
    return op_sqrt(d0 * d0 + d1 * d1 + d2 * d2);
}

// Lab transfer function. The instrumented form charges one cube root
// regardless of branch so op counts stay data-independent.
inline double lab_f_op(double t) { return lab::f(t); }
inline ops::Cd lab_f_op(ops::Cd t) {
    ops::bump(Op::Cbrt);
    return ops::Cd{lab::f(t.v)};
}

inline double lab_fprime_op(double t) { return lab::fprime(t); }
inline ops::Cd lab_fprime_op(ops::Cd t) {
    ops::bump(Op::Cbrt);
    ops::bump(Op::Div);
    return ops::Cd{lab::fprime(t.v)};
}

// spectrum -> XYZ (with normalization k) -> L*a*b* for one pixel.
template <class T>
std::array<T, 3> lab_from_spectrum(std::span<const double> s, const SensitivitySet& cmf,
                                   double k, const ReferenceWhite& white) {
    std::array<T, 3> xyz = project3<T>(s, cmf);
    T tx = (T(k) * xyz[0]) / T(white.Xn);
    T ty = (T(k) * xyz[1]) / T(white.Yn);
    T tz = (T(k) * xyz[2]) / T(white.Zn);
    T fx = lab_f_op(tx);
    T fy = lab_f_op(ty);
    T fz = lab_f_op(tz);
    return {T(116.0) * fy - T(16.0), T(500.0) * (fx - fy), T(200.0) * (fy - fz)};
}

// Per-wavelength Lab sensitivity weights of one OI pixel: the partial
// derivatives of L*, a*, b* with respect to the spectral value at each
// band, taken through the XYZ projection and the Lab transform.
template <class T>
void mv_weights(std::span<const double> s, const SensitivitySet& cmf, double k,
                const ReferenceWhite& white, std::span<T> wl, std::span<T> wa,
                std::span<T> wb) {
    std::array<T, 3> xyz = project3<T>(s, cmf);
    T gx = lab_fprime_op((T(k) * xyz[0]) / T(white.Xn)) * T(k) / T(white.Xn);
    T gy = lab_fprime_op((T(k) * xyz[1]) / T(white.Yn)) * T(k) / T(white.Yn);
    T gz = lab_fprime_op((T(k) * xyz[2]) / T(white.Zn)) * T(k) / T(white.Zn);
    for (std::size_t i = 0; i < s.size(); ++i) {
        T dx = gx * T(cmf.row(0)[i]);
        T dy = gy * T(cmf.row(1)[i]);
        T dz = gz * T(cmf.row(2)[i]);
        wl[i] = T(116.0) * dy;
        wa[i] = T(500.0) * (dx - dy);
        wb[i] = T(200.0) * (dy - dz);
    }
}

// Perception-referenced radiance-ratio index for one pixel pair.
// Anchored on the OI spectrum: ratios and weights both come from it.
template <class T>
T mv(std::span<const double> oi, std::span<const double> ci, const SensitivitySet& cmf,
     double k, const ReferenceWhite& white, std::span<T> wl, std::span<T> wa,
     std::span<T> wb) {
    mv_weights<T>(oi, cmf, k, white, wl, wa, wb);
    T acc{};
    for (std::size_t i = 0; i < oi.size(); ++i) {
        // epsilon guard of one 8-bit count against dark-pixel division
        T delta = T(ci[i]) / T(std::max(oi[i], 1.0)) - T(1.0);
        T sd = T(oi[i]) * delta;
        T el = wl[i] * sd;
        T ea = wa[i] * sd;
        T eb = wb[i] * sd;
        acc = acc + (el * el + ea * ea + eb * eb);
    }
    return op_sqrt(op_div_n(acc, oi.size()));
}

} // namespace msc::kern
