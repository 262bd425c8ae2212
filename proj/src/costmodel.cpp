#include "msc/costmodel.hpp"

#include <algorithm>
#include <cmath>

#include "msc/kernels.hpp"

namespace msc {

const char* op_name(Op op) {
    switch (op) {
    case Op::Add: return "ADD";
    case Op::Sub: return "SUB";
    case Op::Mul: return "MUL";
    case Op::Div: return "DIV";
    case Op::ShiftDiv: return "SHIFT_DIV";
    case Op::Sqrt: return "SQRT";
    case Op::Cbrt: return "CBRT";
    }
    return "?";
}

namespace ops {

namespace {
thread_local OpCounts* g_counter = nullptr;
}

OpCounts* exchange_counter(OpCounts* c) {
    OpCounts* old = g_counter;
    g_counter = c;
    return old;
}

void bump(Op op, std::uint64_t k) {
    if (g_counter)
        (*g_counter)[op] += k;
}

} // namespace ops

OpCounts OpProfile::totals() const {
    OpCounts t;
    for (const auto& s : stages)
        t[s.op] += s.count;
    return t;
}

OpCounts CostReport::totals() const {
    OpCounts t = projection_ops.totals();
    t += distance_ops.totals();
    return t;
}

namespace {

Stage st(Op op, std::uint64_t count, NumericType r, bool parallel) {
    return Stage{op, count, r, parallel};
}

constexpr auto I = NumericType::Integer;
constexpr auto F = NumericType::Float;

} // namespace

CostReport published_profile(Metric algorithm, int bands) {
    if (bands < 1 || bands > 400)
        fail("UnknownAlgorithm", "band count must be in [1, 400] for the published table");
    const std::uint64_t n = static_cast<std::uint64_t>(bands);
    CostReport r;
    r.algorithm = algorithm;
    r.bands = bands;
    r.source = CostSource::PublishedTable;
    auto& proj = r.projection_ops.stages;
    auto& dist = r.distance_ops.stages;
    switch (algorithm) {
    case Metric::Rms:
        dist = {st(Op::Sub, n, I, true), st(Op::Add, n, I, false), st(Op::Mul, 1, F, false)};
        break;
    case Metric::Wrms:
        dist = {st(Op::Sub, n, I, true),  st(Op::Mul, n, F, true),
                st(Op::Mul, n, F, true),  st(Op::Add, n, F, false),
                st(Op::Mul, 1, F, false), st(Op::Sqrt, 1, F, false)};
        break;
    case Metric::Gfc:
        dist = {st(Op::Mul, n, I, true),      st(Op::Add, n, I, false),
                st(Op::Mul, 2 * n, I, true),  st(Op::Add, 2 * n, I, true),
                st(Op::Sqrt, 2, F, true),     st(Op::Mul, 1, F, false)};
        break;
    case Metric::DeRgb:
        proj = {st(Op::Mul, 3 * n, I, true), st(Op::Add, 3 * n, I, true)};
        dist = {st(Op::Sub, 3 * n, I, true), st(Op::Mul, 3 * n, I, true),
                st(Op::Add, 2 * n, I, true), st(Op::Sqrt, n, F, true)};
        break;
    case Metric::DeLab:
        proj = {st(Op::Mul, 3 * n, F, true), st(Op::Add, 3 * n, F, true),
                st(Op::Div, 3, F, true),     st(Op::Cbrt, 3, F, true)};
        dist = {st(Op::Sub, 3 * n, F, true), st(Op::Mul, 3 * n, F, true),
                st(Op::Add, 2 * n, F, true), st(Op::Sqrt, n, F, true)};
        break;
    case Metric::Mv:
        proj = {st(Op::Mul, 3 * n, F, true), st(Op::Add, 3 * n, F, true),
                st(Op::Div, 3, F, true),     st(Op::Cbrt, 3, F, true)};
        dist = {st(Op::Sub, n, I, true),     st(Op::Div, 3 * n, F, true),
                st(Op::Mul, 3 * n, F, true), st(Op::Add, 2 * n, F, true),
                st(Op::Sqrt, n, F, true),    st(Op::Mul, n, F, true),
                st(Op::Add, n, F, false)};
        break;
    }
    return r;
}

namespace {

// Counter scope guard for the instrumented kernels.
class CountScope {
public:
    explicit CountScope(OpCounts* c) : prev_(ops::exchange_counter(c)) {}
    ~CountScope() { ops::exchange_counter(prev_); }

private:
    OpCounts* prev_;
};

OpProfile profile_from_counts(const OpCounts& c) {
    OpProfile p;
    // Fixed tag order; measured stages carry no hardware parallelism info.
    for (Op op : {Op::Sub, Op::Mul, Op::Add, Op::Div, Op::ShiftDiv, Op::Sqrt, Op::Cbrt})
        if (c[op] > 0)
            p.stages.push_back(Stage{op, c[op], NumericType::Float, false});
    return p;
}

} // namespace

CostReport measured_profile(Metric algorithm, const SpectralImage& img1,
                            const SpectralImage& img2, const MetricConfig& cfg) {
    using ops::Cd;
    if (!img1.same_shape(img2))
        fail("DimensionMismatch", "image shapes differ");
    const int n = img1.bands();
    const std::uint64_t pixels =
        static_cast<std::uint64_t>(img1.width()) * img1.height();

    OpCounts proj_counts;
    OpCounts dist_counts;
    std::vector<double> s1(n), s2(n);

    std::optional<ReferenceWhite> rw;
    double k = 0.0;
    if (algorithm == Metric::DeLab || algorithm == Metric::Mv) {
        if (!cfg.cmf)
            fail("MissingConfig", "metric requires a CMF sensitivity set");
        cfg.cmf->require_axis(img1.axis());
        rw = make_reference_white(*cfg.cmf, cfg.white_spectrum);
        k = xyz_normalization_k(*cfg.cmf, cfg.white_spectrum);
    }
    if (algorithm == Metric::DeRgb) {
        if (!cfg.rgb_sens)
            fail("MissingConfig", "de-rgb requires camera RGB sensitivities");
        cfg.rgb_sens->require_axis(img1.axis());
    }
    if (algorithm == Metric::Wrms) {
        if (!cfg.weights)
            fail("MissingConfig", "wrms requires weights");
        if (cfg.weights->values().size() != static_cast<std::size_t>(n))
            fail("WeightLengthMismatch", "weight vector length does not match band count");
    }

    std::vector<Cd> wl(n), wa(n), wb(n);
    for (std::uint64_t p = 0; p < pixels; ++p) {
        const int x = static_cast<int>(p % img1.width());
        const int y = static_cast<int>(p / img1.width());
        img1.spectrum(x, y, s1);
        img2.spectrum(x, y, s2);
        switch (algorithm) {
        case Metric::Rms: {
            CountScope scope(&dist_counts);
            kern::rms<Cd>(s1, s2);
            break;
        }
        case Metric::Wrms: {
            CountScope scope(&dist_counts);
            kern::wrms<Cd>(s1, s2, cfg.weights->values());
            break;
        }
        case Metric::Gfc: {
            CountScope scope(&dist_counts);
            kern::gfc<Cd>(s1, s2);
            break;
        }
        case Metric::DeRgb: {
            std::array<Cd, 3> a, b;
            {
                CountScope scope(&proj_counts);
                a = kern::project3<Cd>(s1, *cfg.rgb_sens);
                b = kern::project3<Cd>(s2, *cfg.rgb_sens);
            }
            CountScope scope(&dist_counts);
            kern::de3<Cd>(a, b);
            break;
        }
        case Metric::DeLab: {
            std::array<Cd, 3> a, b;
            {
                CountScope scope(&proj_counts);
                a = kern::lab_from_spectrum<Cd>(s1, *cfg.cmf, k, *rw);
                b = kern::lab_from_spectrum<Cd>(s2, *cfg.cmf, k, *rw);
            }
            CountScope scope(&dist_counts);
            kern::de3<Cd>(a, b);
            break;
        }
        case Metric::Mv: {
            {
                CountScope scope(&proj_counts);
                kern::mv_weights<Cd>(s1, *cfg.cmf, k, *rw, wl, wa, wb);
            }
            CountScope scope(&dist_counts);
            Cd acc{};
            for (int i = 0; i < n; ++i) {
                Cd delta = Cd(s2[i]) / Cd(std::max(s1[i], 1.0)) - Cd(1.0);
                Cd sd = Cd(s1[i]) * delta;
                Cd el = wl[i] * sd;
                Cd ea = wa[i] * sd;
                Cd eb = wb[i] * sd;
                acc = acc + (el * el + ea * ea + eb * eb);
            }
            kern::op_sqrt(kern::op_div_n(acc, static_cast<std::size_t>(n)));
            break;
        }
        }
    }

    for (OpCounts* c : {&proj_counts, &dist_counts})
        for (auto& v : c->n) {
            if (v % pixels != 0)
                fail("InvariantViolation", "op totals not divisible by pixel count");
            v /= pixels;
        }

    CostReport r;
    r.algorithm = algorithm;
    r.bands = n;
    r.source = CostSource::DerivedCounter;
    r.projection_ops = profile_from_counts(proj_counts);
    r.distance_ops = profile_from_counts(dist_counts);
    return r;
}

std::uint64_t stage_cycles(const Stage& s, const LatencyParams& params) {
    std::uint64_t c = s.parallel ? 1 : s.count;
    if (s.op == Op::Sqrt)
        c += static_cast<std::uint64_t>(params.sqrt_cycles);
    else if (s.op == Op::Cbrt)
        c += static_cast<std::uint64_t>(params.cbrt_cycles);
    return c;
}

CostReport estimate_latency(CostReport profile, const ClockModel& clocks,
                            const LatencyParams& params) {
    std::uint64_t cycles = 0;
    for (const auto& s : profile.projection_ops.stages)
        cycles += stage_cycles(s, params);
    for (const auto& s : profile.distance_ops.stages)
        cycles += stage_cycles(s, params);
    profile.cycles = cycles;
    profile.sqrt_cycles = params.sqrt_cycles;
    profile.cbrt_cycles = params.cbrt_cycles;
    profile.clock_mhz = clocks.f_processing_mhz;
    profile.latency_us = static_cast<double>(cycles) / clocks.f_processing_mhz;
    return profile;
}

double adaptability_score(const CostReport& report) {
    // Digital-design cost weights: plain adders are cheap, general
    // division and the cube root dominate resource and cycle budgets.
    const OpCounts t = report.totals();
    return 1.0 * (t[Op::Add] + t[Op::Sub] + t[Op::ShiftDiv]) + 2.0 * t[Op::Mul] +
           20.0 * t[Op::Sqrt] + 60.0 * t[Op::Div] + 120.0 * t[Op::Cbrt];
}

AdaptabilityRank adaptability_rank() {
    AdaptabilityRank r;
    r.published = {Metric::Rms, Metric::DeRgb, Metric::Wrms,
                   Metric::Gfc, Metric::DeLab, Metric::Mv};
    for (Metric m : r.published)
        r.scores[m] = adaptability_score(published_profile(m, 400));
    r.computed = r.published;
    std::stable_sort(r.computed.begin(), r.computed.end(),
                     [&](Metric a, Metric b) { return r.scores[a] < r.scores[b]; });
    return r;
}

const HardwareReference& hardware_reference() {
    static const HardwareReference h{};
    return h;
}

} // namespace msc
