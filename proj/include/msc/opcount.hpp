#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>

namespace msc {

enum class Op { Add, Sub, Mul, Div, ShiftDiv, Sqrt, Cbrt };
inline constexpr int kOpCount = 7;

const char* op_name(Op op);

struct OpCounts {
    std::array<std::uint64_t, kOpCount> n{};

    std::uint64_t& operator[](Op op) { return n[static_cast<int>(op)]; }
    std::uint64_t operator[](Op op) const { return n[static_cast<int>(op)]; }

    OpCounts& operator+=(const OpCounts& o) {
        for (int i = 0; i < kOpCount; ++i) n[i] += o.n[i];
        return *this;
    }
    bool operator==(const OpCounts&) const = default;
};

namespace ops {

// Counter collecting ops executed by the Cd scalar below. Thread-local;
// the instrumented path is single-threaded by contract.
OpCounts* exchange_counter(OpCounts* c);
void bump(Op op, std::uint64_t k = 1);

// Counting double: every arithmetic operation is recorded in the active
// counter. Metric kernels are templated on the scalar type, so the same
// code path produces values (double) and measured op profiles (Cd).
struct Cd {
    double v;
    Cd() : v(0.0) {}
    explicit Cd(double x) : v(x) {}
    double val() const { return v; }
};

inline Cd operator+(Cd a, Cd b) { bump(Op::Add); return Cd{a.v + b.v}; }
inline Cd operator-(Cd a, Cd b) { bump(Op::Sub); return Cd{a.v - b.v}; }
inline Cd operator*(Cd a, Cd b) { bump(Op::Mul); return Cd{a.v * b.v}; }
inline Cd operator/(Cd a, Cd b) { bump(Op::Div); return Cd{a.v / b.v}; }
inline bool operator<(Cd a, Cd b) { return a.v < b.v; }
inline bool operator>(Cd a, Cd b) { return a.v > b.v; }

inline double value_of(double x) { return x; }
inline double value_of(Cd x) { return x.v; }

inline double op_sqrt(double x) { return std::sqrt(x); }
inline Cd op_sqrt(Cd x) { bump(Op::Sqrt); return Cd{std::sqrt(x.v)}; }

inline double op_cbrt(double x) { return std::cbrt(x); }
inline Cd op_cbrt(Cd x) { bump(Op::Cbrt); return Cd{std::cbrt(x.v)}; }

inline bool is_pow2(std::uint64_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Division by a compile-time-unknown positive integer; a power of two
// is a bit shift on the target hardware, anything else a full divide.
inline double op_div_n(double x, std::size_t n) { return x / static_cast<double>(n); }
inline Cd op_div_n(Cd x, std::size_t n) {
    bump(is_pow2(n) ? Op::ShiftDiv : Op::Div);
    return Cd{x.v / static_cast<double>(n)};
}

} // namespace ops
} // namespace msc
