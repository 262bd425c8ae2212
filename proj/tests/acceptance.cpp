// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Each check is written against an independent oracle or a
// golden fixture, never against the implementation under test.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "msc/costmodel.hpp"
#include "msc/fixedpoint.hpp"
#include "msc/kernels.hpp"
#include "msc/pipeline.hpp"
#include "support.hpp"

using namespace msc;

namespace {

int g_failures = 0;
std::vector<std::string> g_notes;

void note(const std::string& s) { g_notes.push_back(s); }

void run(int index, const char* title, const std::function<bool()>& body) {
    g_notes.clear();
    bool ok = false;
    std::string err;
    try {
        ok = body();
    } catch (const std::exception& e) {
        err = e.what();
    }
    std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", index, title);
    if (!ok) {
        ++g_failures;
        for (const auto& n : g_notes)
            std::printf("       %s\n", n.c_str());
        if (!err.empty())
            std::printf("       exception: %s\n", err.c_str());
    }
    std::fflush(stdout);
}

bool expect(bool cond, const std::string& what) {
    if (!cond)
        note(what);
    return cond;
}

const std::vector<Metric> kAllMetrics{Metric::Rms,   Metric::Wrms,  Metric::Gfc,
                                      Metric::DeRgb, Metric::DeLab, Metric::Mv};

// ---- criterion 1: golden table ------------------------------------------

bool stages_match(const OpProfile& got, const nlohmann::json& want, const std::string& tag) {
    if (got.stages.size() != want.size())
        return expect(false, tag + ": stage count " + std::to_string(got.stages.size()) +
                                 " != " + std::to_string(want.size()));
    bool ok = true;
    for (std::size_t i = 0; i < got.stages.size(); ++i) {
        const Stage& s = got.stages[i];
        const auto& w = want[i];
        ok &= expect(op_name(s.op) == w.at("op").get<std::string>(),
                     tag + " stage " + std::to_string(i) + ": op mismatch");
        ok &= expect(s.count == w.at("count").get<std::uint64_t>(),
                     tag + " stage " + std::to_string(i) + ": count mismatch");
        ok &= expect((s.result == NumericType::Integer) == (w.at("result") == "INTEGER"),
                     tag + " stage " + std::to_string(i) + ": numeric type mismatch");
        ok &= expect(s.parallel == w.at("parallel").get<bool>(),
                     tag + " stage " + std::to_string(i) + ": parallel flag mismatch");
    }
    return ok;
}

bool criterion_golden_table() {
    std::ifstream in(test::golden_dir() / "published_ops.json");
    if (!in.good())
        return expect(false, "cannot open golden table");
    const auto golden = nlohmann::json::parse(in);
    bool ok = true;
    for (Metric m : kAllMetrics) {
        const CostReport r = published_profile(m, 400);
        const auto& g = golden.at(metric_name(m));
        ok &= stages_match(r.projection_ops, g.at("projection"),
                           std::string(metric_name(m)) + " projection");
        ok &= stages_match(r.distance_ops, g.at("distance"),
                           std::string(metric_name(m)) + " distance");
    }
    return ok;
}

// ---- criterion 2: metric axioms -----------------------------------------

bool criterion_metric_axioms() {
    std::mt19937 rng(0xA2);
    std::uniform_int_distribution<int> val(0, 255);
    const int kN[] = {4, 16, 64, 256};
    bool ok = true;
    int trials = 0;
    while (trials < 10000 && ok) {
        const int n = kN[trials % 4];
        std::vector<double> a(n), b(n);
        for (int i = 0; i < n; ++i) {
            a[i] = val(rng);
            b[i] = val(rng);
        }
        if (std::accumulate(a.begin(), a.end(), 0.0) == 0.0)
            a[0] = 1;
        if (std::accumulate(b.begin(), b.end(), 0.0) == 0.0)
            b[0] = 1;
        const WeightVector uw = uniform_weights(n);

        ok &= expect(rms(a, a) == 0.0, "rms identity not exact 0");
        ok &= expect(wrms(a, a, uw) == 0.0, "wrms identity not exact 0");
        ok &= expect(gfc(a, a) == 1.0, "gfc identity not exact 1");

        ok &= expect(std::abs(rms(a, b) - rms(b, a)) <= 1e-12, "rms asymmetric");
        ok &= expect(std::abs(wrms(a, b, uw) - wrms(b, a, uw)) <= 1e-12, "wrms asymmetric");
        ok &= expect(std::abs(gfc(a, b) - gfc(b, a)) <= 1e-12, "gfc asymmetric");

        const double g = gfc(a, b);
        ok &= expect(g >= 0.0 && g <= 1.0, "gfc out of [0,1]");
        ok &= expect(std::abs(wrms(a, b, uw) - rms(a, b)) <= 1e-12,
                     "wrms(uniform) != rms");
        ++trials;
    }
    // symmetry of the colour-projection metrics on small random images
    std::mt19937 rng2(0xA3);
    auto cmf = test::fixture_cmf();
    auto rgb = test::fixture_rgb();
    MetricConfig cfg;
    cfg.rgb_sens = rgb;
    cfg.cmf = cmf;
    for (int t = 0; t < 5 && ok; ++t) {
        SpectralImage i1 = test::random_cube(4, 4, 41, rng2);
        SpectralImage i2 = test::random_cube(4, 4, 41, rng2);
        for (Metric m : {Metric::DeRgb, Metric::DeLab}) {
            const double fwd = image_metric(m, i1, i2, cfg).aggregate;
            const double rev = image_metric(m, i2, i1, cfg).aggregate;
            ok &= expect(std::abs(fwd - rev) <= 1e-12,
                         std::string(metric_name(m)) + " asymmetric");
            ok &= expect(image_metric(m, i1, i1, cfg).aggregate == 0.0,
                         std::string(metric_name(m)) + " identity not exact 0");
        }
        ok &= expect(mv_metric(i1, i1, cmf).aggregate == 0.0, "mv identity not exact 0");
    }
    return ok;
}

// ---- criterion 3: fixed-point oracles -----------------------------------

std::uint32_t isqrt_oracle(std::uint32_t v) {
    std::uint32_t r = static_cast<std::uint32_t>(std::sqrt(static_cast<double>(v)));
    while (static_cast<std::uint64_t>(r) * r > v)
        --r;
    while (static_cast<std::uint64_t>(r + 1) * (r + 1) <= v)
        ++r;
    return r;
}

bool criterion_fixed_point() {
    bool ok = true;
    for (std::uint32_t v = 0; v <= (1u << 20) && ok; ++v)
        ok &= expect(fx::fx_isqrt(v) == isqrt_oracle(v),
                     "fx_isqrt mismatch at " + std::to_string(v));
    std::mt19937 rng(0xF1);
    std::uniform_int_distribution<std::uint32_t> any;
    for (int i = 0; i < 1000000 && ok; ++i) {
        const std::uint32_t v = any(rng);
        ok &= expect(fx::fx_isqrt(v) == isqrt_oracle(v),
                     "fx_isqrt mismatch at " + std::to_string(v));
    }

    std::uniform_int_distribution<int> val(0, 255);
    std::uniform_int_distribution<int> mdist(0, 9);
    for (int t = 0; t < 10000 && ok; ++t) {
        const int n = 1 << mdist(rng);
        std::vector<std::uint8_t> a(n), b(n);
        std::vector<double> ra(n), rb(n);
        for (int i = 0; i < n; ++i) {
            a[i] = static_cast<std::uint8_t>(val(rng));
            b[i] = static_cast<std::uint8_t>(val(rng));
            ra[i] = a[i];
            rb[i] = b[i];
        }
        const double exact = rms(ra, rb);
        const double approx = fx::fx_rms(a, b).to_real();
        if (exact == 0.0)
            ok &= expect(approx == 0.0, "fx_rms nonzero on identical input");
        else
            ok &= expect(std::abs(approx - exact) / exact <= 1.0 / 256,
                         "fx_rms outside 2^-8 budget (rel " +
                             std::to_string(std::abs(approx - exact) / exact) + ")");
    }

    std::uniform_int_distribution<std::int32_t> ch(0, 16000);
    for (int t = 0; t < 10000 && ok; ++t) {
        std::int32_t u[3], v[3];
        double acc = 0;
        for (int c = 0; c < 3; ++c) {
            u[c] = ch(rng);
            v[c] = ch(rng);
            const double d = u[c] - v[c];
            acc += d * d;
        }
        const double exact = std::sqrt(acc);
        const double approx = fx::fx_de_rgb(u, v).to_real();
        if (exact == 0.0)
            ok &= expect(approx == 0.0, "fx_de_rgb nonzero on identical input");
        else
            ok &= expect(std::abs(approx - exact) / exact <= 1.0 / 256,
                         "fx_de_rgb outside 2^-8 budget");
    }
    return ok;
}

// ---- criterion 4: derived-count linearity -------------------------------

bool criterion_count_linearity() {
    std::mt19937 rng(0xC4);
    auto counts_for = [&](Metric m, int n, std::uint32_t) {
        MetricConfig cfg;
        cfg.weights = uniform_weights(n);
        SpectralImage i1 = test::random_cube(2, 2, n, rng);
        SpectralImage i2 = test::random_cube(2, 2, n, rng);
        return measured_profile(m, i1, i2, cfg).totals();
    };
    bool ok = true;
    for (Metric m : {Metric::Rms, Metric::Wrms, Metric::Gfc}) {
        OpCounts c[4];
        const int ns[4] = {4, 8, 16, 32};
        for (int i = 0; i < 4; ++i)
            c[i] = counts_for(m, ns[i], 0);
        for (int i = 0; i < kOpCount; ++i) {
            const Op op = static_cast<Op>(i);
            // per-band classes are affine in N: successive deltas double
            const std::int64_t d1 = static_cast<std::int64_t>(c[1][op]) - c[0][op];
            const std::int64_t d2 = static_cast<std::int64_t>(c[2][op]) - c[1][op];
            const std::int64_t d3 = static_cast<std::int64_t>(c[3][op]) - c[2][op];
            ok &= expect(d2 == 2 * d1 && d3 == 2 * d2,
                         std::string(metric_name(m)) + " " + op_name(op) +
                             ": counts not affine in N");
        }
        // data invariance at fixed N
        ok &= expect(counts_for(m, 16, 0) == counts_for(m, 16, 1),
                     std::string(metric_name(m)) + ": counts depend on pixel data");
    }
    return ok;
}

// ---- criterion 5: projection checks -------------------------------------

bool criterion_projection() {
    bool ok = true;
    auto cmf = test::fixture_cmf();
    const ReferenceWhite white = make_reference_white(cmf, std::nullopt);

    // the reference white itself must land on Lab (100, 0, 0)
    TriImage w(1, 1, ColorSpace::Xyz, {white.Xn, white.Yn, white.Zn});
    TriImage lw = xyz_to_lab(w, white);
    ok &= expect(std::abs(lw.at(0, 0, 0) - 100.0) <= 1e-6, "white L* != 100");
    ok &= expect(std::abs(lw.at(0, 0, 1)) <= 1e-6, "white a* != 0");
    ok &= expect(std::abs(lw.at(0, 0, 2)) <= 1e-6, "white b* != 0");

    // 1/8 grey: cbrt(1/8) = 1/2 exactly, so L* = 116/2 - 16 = 42 exactly
    TriImage g(1, 1, ColorSpace::Xyz, {white.Xn / 8, white.Yn / 8, white.Zn / 8});
    TriImage lg = xyz_to_lab(g, white);
    ok &= expect(lg.at(0, 0, 0) == 42.0, "1/8 grey L* not exactly 42");

    // linearity of the XYZ projection on real-lifted spectra
    std::mt19937 rng(0xB5);
    std::uniform_real_distribution<double> dist(0.0, 255.0);
    std::vector<double> s1(41), s2(41), lifted(41);
    for (int t = 0; t < 100 && ok; ++t) {
        for (int i = 0; i < 41; ++i) {
            s1[i] = dist(rng);
            s2[i] = dist(rng);
        }
        const double alpha = dist(rng) / 128.0;
        for (int i = 0; i < 41; ++i)
            lifted[i] = alpha * s1[i] + s2[i];
        const auto p1 = kern::project3<double>(s1, cmf);
        const auto p2 = kern::project3<double>(s2, cmf);
        const auto pl = kern::project3<double>(lifted, cmf);
        for (int c = 0; c < 3; ++c) {
            const double want = alpha * p1[c] + p2[c];
            const double scale = std::max(1.0, std::abs(want));
            ok &= expect(std::abs(pl[c] - want) / scale <= 1e-9, "projection not linear");
        }
    }
    return ok;
}

// ---- criterion 6: mv gradient -------------------------------------------

bool criterion_mv_gradient() {
    auto cmf = test::fixture_cmf();
    const ReferenceWhite white = make_reference_white(cmf, std::nullopt);
    const double k = xyz_normalization_k(cmf, std::nullopt);
    std::mt19937 rng(0xD6);
    std::uniform_real_distribution<double> dist(20.0, 230.0);
    const double h = 1e-3;
    bool ok = true;
    for (int pixel = 0; pixel < 100 && ok; ++pixel) {
        std::vector<double> s(41);
        for (auto& v : s)
            v = dist(rng);
        const MvWeights w = mv_pixel_weights(s, cmf, k, white);
        for (int i = 0; i < 41 && ok; ++i) {
            std::vector<double> up = s, dn = s;
            up[i] += h;
            dn[i] -= h;
            const auto lu = kern::lab_from_spectrum<double>(up, cmf, k, white);
            const auto ld = kern::lab_from_spectrum<double>(dn, cmf, k, white);
            const double fd[3] = {(lu[0] - ld[0]) / (2 * h), (lu[1] - ld[1]) / (2 * h),
                                  (lu[2] - ld[2]) / (2 * h)};
            const double an[3] = {w.wl[i], w.wa[i], w.wb[i]};
            for (int c = 0; c < 3; ++c) {
                // relative 1e-4 with an absolute floor covering the
                // cancellation noise of the finite-difference oracle
                // (eps * |Lab| / 2h ~ 3e-11)
                const double tol =
                    1e-4 * std::max(std::abs(fd[c]), std::abs(an[c])) + 1e-9;
                ok &= expect(std::abs(fd[c] - an[c]) <= tol,
                             "mv weight " + std::to_string(c) + " off at band " +
                                 std::to_string(i));
            }
        }
    }
    return ok;
}

// ---- criterion 7: pipeline behavior -------------------------------------

bool criterion_pipeline() {
    bool ok = true;
    test::TempDir tmp;
    std::mt19937 rng(0xE7);
    ReferenceStore store(tmp.path() / "store");

    SpectralImage ref = test::random_cube(6, 4, 64, rng, 100);
    save_cube(ref, tmp.path() / "ref.msc");
    store.add_reference("ref", tmp.path() / "ref.msc");

    // self-authentication: authentic after exactly one iteration
    AuthConfig self;
    self.metric = Metric::Rms;
    self.precision = 1.0;
    AuthVerdict v = authenticate(store, "ref", ref, self);
    ok &= expect(v.decision == Decision::Authentic, "self-auth not authentic");
    ok &= expect(v.iterations.size() == 1, "self-auth used more than one iteration");

    // margin-straddling fixture: escalate exactly once, then decide
    SpectralImage small = test::random_cube(5, 5, 4, rng, 100);
    save_cube(small, tmp.path() / "small.msc");
    store.add_reference("small", tmp.path() / "small.msc");
    std::vector<std::uint8_t> samples(small.samples().begin(), small.samples().end());
    const std::size_t pixels = 25;
    for (int b : {0, 2})
        for (std::size_t p = 0; p < pixels; ++p)
            samples[static_cast<std::size_t>(b) * pixels + p] = static_cast<std::uint8_t>(
                std::min(255, samples[static_cast<std::size_t>(b) * pixels + p] + 10));
    SpectralImage cand(5, 5, small.axis(), std::move(samples));
    AuthConfig straddle;
    straddle.metric = Metric::Rms;
    straddle.band_schedule = {2, 4};
    straddle.precision = 9.0;
    straddle.margin = 1.5; // r=10 at k=2 sits inside (7.5, 10.5); r at k=4 does not
    v = authenticate(store, "small", cand, straddle);
    ok &= expect(v.iterations.size() == 2, "straddle fixture did not escalate exactly once");
    ok &= expect(v.decision == Decision::Authentic, "straddle fixture wrong final decision");

    // iterations never exceed the schedule length
    for (int t = 0; t < 10 && ok; ++t) {
        SpectralImage other = test::random_cube(6, 4, 64, rng, 100);
        AuthConfig any;
        any.metric = Metric::Gfc;
        any.precision = 0.999;
        any.margin = 0.5;
        const auto schedule = resolve_schedule(any, 64);
        AuthVerdict r = authenticate(store, "ref", other, any);
        ok &= expect(r.iterations.size() <= schedule.size(), "iterations exceed schedule");
    }

    // RMS schedules with non-powers-of-two rejected before any computation
    AuthConfig bad;
    bad.metric = Metric::Rms;
    bad.band_schedule = {12, 64};
    bool threw = false;
    try {
        authenticate(store, "ref", ref, bad);
    } catch (const Error& e) {
        threw = std::string(e.what()).find("ScheduleInvalid") != std::string::npos;
    }
    ok &= expect(threw, "non-power-of-two RMS schedule accepted");
    return ok;
}

// ---- criterion 8: determinism across workers ----------------------------

bool criterion_determinism() {
    std::mt19937 rng(0xD8);
    SpectralImage i1 = test::random_cube(128, 128, 64, rng);
    SpectralImage i2 = test::random_cube(128, 128, 64, rng);
    bool ok = true;
    for (Metric m : {Metric::Rms, Metric::Gfc}) {
        MetricConfig cfg;
        cfg.workers = 1;
        const double base = image_metric(m, i1, i2, cfg).aggregate;
        for (int workers : {2, 8}) {
            cfg.workers = workers;
            const double r = image_metric(m, i1, i2, cfg).aggregate;
            ok &= expect(r == base, std::string(metric_name(m)) + ": aggregate differs at " +
                                        std::to_string(workers) + " workers");
        }
    }
    return ok;
}

// ---- criterion 9: latency model sanity ----------------------------------

bool criterion_latency() {
    bool ok = true;
    CostReport serial;
    serial.algorithm = Metric::Rms;
    serial.bands = 400;
    serial.distance_ops.stages = {{Op::Add, 400, NumericType::Integer, false}};
    const CostReport out = estimate_latency(serial, ClockModel{});
    ok &= expect(out.cycles == 400, "serial 400-op stage is not 400 cycles");
    ok &= expect(out.latency_us == 8.0, "serial 400-op stage at 50 MHz is not exactly 8 us");

    const AdaptabilityRank rank = adaptability_rank();
    ok &= expect(rank.published.front() == Metric::Rms && rank.computed.front() == Metric::Rms,
                 "ranking head is not rms");
    ok &= expect(rank.published.back() == Metric::Mv && rank.computed.back() == Metric::Mv,
                 "ranking tail is not mv");
    return ok;
}

} // namespace

int main() {
    run(1, "published op table reproduced stage-by-stage at N=400", criterion_golden_table);
    run(2, "metric axioms on random spectrum pairs", criterion_metric_axioms);
    run(3, "fixed-point kernels match float oracles", criterion_fixed_point);
    run(4, "measured op counts affine in N and data-invariant", criterion_count_linearity);
    run(5, "colour projection: white point, exact grey, linearity", criterion_projection);
    run(6, "mv weights match finite-difference gradients", criterion_mv_gradient);
    run(7, "adaptive authentication behavior", criterion_pipeline);
    run(8, "bit-identical aggregates across worker counts", criterion_determinism);
    run(9, "latency model and adaptability ranking", criterion_latency);
    if (g_failures) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 9 criteria passed\n");
    return 0;
}
