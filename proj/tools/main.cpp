#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "msc/costmodel.hpp"
#include "msc/fixedpoint.hpp"
#include "msc/metrics.hpp"
#include "msc/pipeline.hpp"
#include "msc/projection.hpp"

using json = nlohmann::json;

namespace {

constexpr const char* kToolVersion = "1.0.0";
constexpr int kSchemaVersion = 1;

// FNV-1a over file bytes; reports embed these so a run can be tied to
// its exact inputs.
std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        msc::fail("IoFailure", "cannot open " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[8192];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ull;
        }
    }
    std::ostringstream ss;
    ss << std::hex << h;
    return ss.str();
}

json base_report(const std::string& command) {
    json r;
    r["schema_version"] = kSchemaVersion;
    r["tool_version"] = kToolVersion;
    r["command"] = command;
    r["inputs"] = json::object();
    return r;
}

void write_report(const json& r, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        msc::fail("IoFailure", "cannot write " + path);
    out << r.dump(2) << '\n';
}


std::vector<double> load_weights_file(const std::string& path, int n) {
    msc::WavelengthAxis probe = msc::WavelengthAxis::nominal(380, 1, n);
    return msc::load_spectrum(path, probe);
}

struct MetricFlags {
    std::string weights_path;
    std::string sens_path;
    std::string cmf_path;
    std::string white_path;
    bool flat_white = false;
    int workers = 1;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--weights", weights_path, "weight file for wrms (one weight per line)");
        cmd->add_option("--sens", sens_path, "camera RGB sensitivity CSV for de-rgb");
        cmd->add_option("--cmf", cmf_path, "CMF CSV for de-lab / mv");
        cmd->add_option("--white", white_path, "white spectrum file (one value per line)");
        cmd->add_flag("--flat-white", flat_white, "accept the flat-255 white fallback");
        cmd->add_option("--workers", workers, "worker threads (results are identical for any count)");
    }

    msc::MetricConfig build(msc::Metric metric, const msc::WavelengthAxis& axis) const {
        msc::MetricConfig cfg;
        cfg.workers = workers;
        if (metric == msc::Metric::Wrms) {
            if (weights_path.empty())
                msc::fail("MissingConfig", "--weights");
            cfg.weights = msc::WeightVector(load_weights_file(weights_path, axis.count));
        }
        if (metric == msc::Metric::DeRgb) {
            if (sens_path.empty())
                msc::fail("MissingConfig", "--sens");
            cfg.rgb_sens = msc::load_sensitivities(sens_path, axis, msc::SensitivityKind::CameraRgb);
        }
        if (metric == msc::Metric::DeLab || metric == msc::Metric::Mv) {
            if (cmf_path.empty())
                msc::fail("MissingConfig", "--cmf");
            cfg.cmf = msc::load_sensitivities(cmf_path, axis, msc::SensitivityKind::CmfXyz);
            if (!white_path.empty())
                cfg.white_spectrum = msc::load_spectrum(white_path, axis);
            else if (!flat_white)
                msc::fail("MissingConfig", "--white (or pass --flat-white to accept the fallback)");
        }
        return cfg;
    }
};

json profile_json(const msc::OpProfile& p) {
    json stages = json::array();
    for (const auto& s : p.stages)
        stages.push_back({{"op", msc::op_name(s.op)},
                          {"count", s.count},
                          {"result", s.result == msc::NumericType::Integer ? "INTEGER" : "FLOAT"},
                          {"parallel", s.parallel}});
    return stages;
}

json totals_json(const msc::OpCounts& t) {
    json out = json::object();
    for (int i = 0; i < msc::kOpCount; ++i)
        if (t.n[i])
            out[msc::op_name(static_cast<msc::Op>(i))] = t.n[i];
    return out;
}

json hardware_reference_json() {
    const auto& h = msc::hardware_reference();
    return {{"rgb_projection_slices", h.rgb_projection_slices},
            {"rgb_projection_dsp48", h.rgb_projection_dsp48},
            {"sqrt_slices", h.sqrt_slices},
            {"sqrt_luts", h.sqrt_luts},
            {"processing_logic_cells", h.processing_logic_cells},
            {"system_logic_cells", h.system_logic_cells},
            {"system_utilization_pct", h.system_utilization_pct},
            {"synthesis_mhz", h.synthesis_mhz},
            {"module_frequencies_mhz",
             {{"control", h.clocks.f_control_mhz},
              {"acquisition", h.clocks.f_acquisition_mhz},
              {"storage", h.clocks.f_storage_mhz},
              {"processing", h.clocks.f_processing_mhz}}}};
}

int run_project(const std::string& in_path, const std::string& space,
                const std::string& sens_path, const MetricFlags& mf,
                const std::string& out_path, const std::string& report_path) {
    msc::SpectralImage img = msc::load_cube(in_path);
    json report = base_report("project");
    report["inputs"][in_path] = file_digest(in_path);
    report["params"] = {{"space", space}};

    std::optional<msc::TriImage> tri;
    if (space == "rgb") {
        auto sens = msc::load_sensitivities(sens_path, img.axis(), msc::SensitivityKind::CameraRgb);
        tri = msc::project_rgb(img, sens);
    } else {
        auto cmf = msc::load_sensitivities(sens_path, img.axis(), msc::SensitivityKind::CmfXyz);
        std::optional<std::vector<double>> white;
        if (!mf.white_path.empty())
            white = msc::load_spectrum(mf.white_path, img.axis());
        if (space == "xyz") {
            auto [xyz, norm] = msc::project_xyz(img, cmf, white);
            tri = std::move(xyz);
            report["params"]["k"] = norm.k;
        } else if (space == "lab") {
            if (!white && !mf.flat_white)
                msc::fail("MissingConfig", "--white (or pass --flat-white to accept the fallback)");
            auto [xyz, norm] = msc::project_xyz(img, cmf, white);
            tri = msc::xyz_to_lab(xyz, msc::make_reference_white(cmf, white));
            report["params"]["k"] = norm.k;
        } else {
            msc::fail("UnknownAlgorithm", "space must be rgb, xyz or lab");
        }
    }
    if (!sens_path.empty())
        report["inputs"][sens_path] = file_digest(sens_path);

    std::ofstream out(out_path, std::ios::trunc);
    if (!out)
        msc::fail("IoFailure", "cannot write " + out_path);
    out << "x,y,c1,c2,c3\n";
    out.precision(9);
    for (int y = 0; y < tri->height(); ++y)
        for (int x = 0; x < tri->width(); ++x)
            out << x << ',' << y << ',' << tri->at(x, y, 0) << ',' << tri->at(x, y, 1)
                << ',' << tri->at(x, y, 2) << '\n';

    report["results"] = {{"width", tri->width()}, {"height", tri->height()}, {"csv", out_path}};
    if (!report_path.empty())
        write_report(report, report_path);
    std::cout << "projected " << tri->width() << "x" << tri->height() << " cube to " << space
              << " -> " << out_path << "\n";
    return 0;
}

int run_distance(const std::string& ref_path, const std::string& cand_path,
                 const std::string& metric_name, const MetricFlags& mf,
                 const std::string& pixels_path, const std::string& out_path) {
    msc::SpectralImage ref = msc::load_cube(ref_path);
    msc::SpectralImage cand = msc::load_cube(cand_path);
    const msc::Metric metric = msc::metric_from_name(metric_name);
    const msc::MetricConfig cfg = mf.build(metric, ref.axis());
    const msc::DistanceResult res = msc::image_metric(metric, ref, cand, cfg);

    json report = base_report("distance");
    report["inputs"][ref_path] = file_digest(ref_path);
    report["inputs"][cand_path] = file_digest(cand_path);
    report["params"] = {{"metric", metric_name}, {"workers", mf.workers}};
    report["results"] = {
        {"aggregate", res.aggregate},
        {"polarity", res.polarity == msc::Polarity::Distance ? "DISTANCE" : "SIMILARITY"},
        {"pixels", static_cast<std::uint64_t>(res.per_pixel.size())}};

    if (!pixels_path.empty()) {
        std::ofstream out(pixels_path, std::ios::trunc);
        if (!out)
            msc::fail("IoFailure", "cannot write " + pixels_path);
        out << "x,y,value\n";
        out.precision(17);
        for (int y = 0; y < res.height; ++y)
            for (int x = 0; x < res.width; ++x)
                out << x << ',' << y << ',' << res.per_pixel[static_cast<std::size_t>(y) * res.width + x]
                    << '\n';
    }
    if (!out_path.empty())
        write_report(report, out_path);
    std::cout.precision(17);
    std::cout << metric_name << " aggregate = " << res.aggregate << "\n";
    return 0;
}

int run_authenticate(const std::string& store_dir, const std::string& ref_id,
                     const std::string& cand_path, const std::string& metric_name,
                     double precision, double margin, const std::string& schedule_csv,
                     const MetricFlags& mf, const std::string& out_path) {
    msc::ReferenceStore store(store_dir);
    msc::SpectralImage cand = msc::load_cube(cand_path);

    msc::AuthConfig cfg;
    cfg.metric = msc::metric_from_name(metric_name);
    cfg.precision = precision;
    cfg.margin = margin;
    if (!schedule_csv.empty()) {
        std::istringstream ss(schedule_csv);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cfg.band_schedule.push_back(std::stoi(cell));
    }
    // Config flags are resolved against the full reference axis; the
    // pipeline derives per-level subsets itself.
    const msc::SpectralImage ref = store.load_reference(ref_id);
    cfg.metric_config = mf.build(cfg.metric, ref.axis());
    if ((cfg.metric == msc::Metric::DeLab || cfg.metric == msc::Metric::Mv) &&
        !cfg.metric_config.white_spectrum)
        cfg.metric_config.white_spectrum = store.load_white(ref_id, ref.axis());

    const msc::AuthVerdict verdict = msc::authenticate(store, ref_id, cand, cfg);

    json report = base_report("authenticate");
    report["inputs"][cand_path] = file_digest(cand_path);
    report["params"] = {{"metric", metric_name}, {"precision", precision},
                        {"margin", margin},     {"ref_id", ref_id}};
    json iters = json::array();
    for (const auto& it : verdict.iterations)
        iters.push_back({{"bands", it.bands}, {"r", it.r}});
    report["results"] = {{"decision", msc::decision_name(verdict.decision)},
                         {"iterations", iters},
                         {"final_r", verdict.final_r},
                         {"bands_final", verdict.bands_final}};
    if (!out_path.empty())
        write_report(report, out_path);
    std::cout << msc::decision_name(verdict.decision) << " after "
              << verdict.iterations.size() << " iteration(s), R = " << verdict.final_r << "\n";
    switch (verdict.decision) {
    case msc::Decision::Authentic: return 0;
    case msc::Decision::Rejected: return 3;
    case msc::Decision::Undecided: return 4;
    }
    return 2;
}

int run_cost(const std::string& metric_name, int bands, const std::string& source,
             int sqrt_cycles, int cbrt_cycles, unsigned seed, const std::string& out_path) {
    const msc::Metric metric = msc::metric_from_name(metric_name);
    msc::CostReport profile;
    if (source == "published") {
        profile = msc::published_profile(metric, bands);
    } else if (source == "measured") {
        // Any pixel contents produce the same counts; a 2x2 random pair
        // keeps the instrumented run cheap.
        msc::WavelengthAxis axis = bands == 1 ? msc::WavelengthAxis(380, 1, 1)
                                              : msc::WavelengthAxis(380, 400 / bands, bands);
        std::mt19937 rng(seed);
        std::uniform_int_distribution<int> dist(0, 255);
        auto make = [&] {
            std::vector<std::uint8_t> s(static_cast<std::size_t>(4) * bands);
            for (auto& v : s)
                v = static_cast<std::uint8_t>(dist(rng));
            return msc::SpectralImage(2, 2, axis, std::move(s));
        };
        msc::SpectralImage a = make();
        msc::SpectralImage b = make();
        msc::MetricConfig cfg;
        if (metric == msc::Metric::Wrms)
            cfg.weights = msc::uniform_weights(bands);
        if (metric == msc::Metric::DeRgb || metric == msc::Metric::DeLab ||
            metric == msc::Metric::Mv) {
            // Synthetic flat sensitivities; counts do not depend on values.
            std::array<std::vector<double>, 3> rows;
            for (auto& r : rows)
                r.assign(bands, 1.0);
            cfg.rgb_sens = msc::SensitivitySet(axis, rows, msc::SensitivityKind::CameraRgb);
            cfg.cmf = msc::SensitivitySet(axis, rows, msc::SensitivityKind::CmfXyz);
        }
        profile = msc::measured_profile(metric, a, b, cfg);
    } else {
        msc::fail("UnknownAlgorithm", "--source must be published or measured");
    }

    msc::LatencyParams params;
    params.sqrt_cycles = sqrt_cycles;
    params.cbrt_cycles = cbrt_cycles;
    profile = msc::estimate_latency(profile, msc::hardware_reference().clocks, params);

    json report = base_report("cost");
    report["params"] = {{"metric", metric_name},
                        {"bands", bands},
                        {"source", source},
                        {"sqrt_cycles", sqrt_cycles},
                        {"cbrt_cycles", cbrt_cycles},
                        {"clock_mhz", profile.clock_mhz}};
    report["results"] = {{"projection_stages", profile_json(profile.projection_ops)},
                         {"distance_stages", profile_json(profile.distance_ops)},
                         {"totals", totals_json(profile.totals())},
                         {"cycles", profile.cycles},
                         {"latency_us", profile.latency_us}};
    const auto rank = msc::adaptability_rank();
    json pub = json::array(), comp = json::array();
    for (auto m : rank.published)
        pub.push_back(msc::metric_name(m));
    for (auto m : rank.computed)
        comp.push_back(msc::metric_name(m));
    report["results"]["adaptability"] = {{"published", pub}, {"computed", comp}};
    report["hardware_reference"] = hardware_reference_json();
    if (!out_path.empty())
        write_report(report, out_path);

    std::cout << metric_name << " N=" << bands << " (" << source << "): " << profile.cycles
              << " cycles, " << profile.latency_us << " us at " << profile.clock_mhz
              << " MHz\n";
    for (const auto& stages : {profile.projection_ops.stages, profile.distance_ops.stages})
        for (const auto& s : stages)
            std::cout << "  " << s.count << " " << msc::op_name(s.op)
                      << (s.parallel ? " (parallel)" : "") << "\n";
    return 0;
}

int run_fxp_compare(const std::string& metric_name, int trials, unsigned seed,
                    const std::string& out_path) {
    if (metric_name != "rms" && metric_name != "de-rgb")
        msc::fail("MissingConfig", "no fixed-point variant for metric '" + metric_name + "'");
    std::mt19937 rng(seed);
    double max_rel = 0.0;
    double sum_rel = 0.0;
    std::uint64_t compared = 0;
    constexpr double kTol = 1.0 / 256.0;

    for (int t = 0; t < trials; ++t) {
        double real = 0.0;
        double fixed = 0.0;
        if (metric_name == "rms") {
            const int m = std::uniform_int_distribution<int>(1, 9)(rng);
            const std::size_t n = std::size_t{1} << m;
            std::vector<std::uint8_t> a(n), b(n);
            std::uniform_int_distribution<int> dist(0, 255);
            for (std::size_t i = 0; i < n; ++i) {
                a[i] = static_cast<std::uint8_t>(dist(rng));
                b[i] = static_cast<std::uint8_t>(dist(rng));
            }
            std::vector<double> ar(a.begin(), a.end()), br(b.begin(), b.end());
            real = msc::rms(ar, br);
            fixed = msc::fx::fx_rms(a, b).to_real();
        } else {
            // Range keeps the true distance inside the Q16.16 window.
            std::uniform_int_distribution<std::int32_t> dist(0, 16000);
            std::int32_t p[3], q[3];
            for (int c = 0; c < 3; ++c) {
                p[c] = dist(rng);
                q[c] = dist(rng);
            }
            double acc = 0.0;
            for (int c = 0; c < 3; ++c)
                acc += static_cast<double>(p[c] - q[c]) * (p[c] - q[c]);
            real = std::sqrt(acc);
            fixed = msc::fx::fx_de_rgb(p, q).to_real();
        }
        if (real == 0.0) {
            if (fixed != 0.0)
                max_rel = std::max(max_rel, 1.0);
            continue;
        }
        const double rel = std::abs(fixed - real) / real;
        max_rel = std::max(max_rel, rel);
        sum_rel += rel;
        ++compared;
    }

    const bool pass = max_rel <= kTol;
    json report = base_report("fxp-compare");
    report["params"] = {{"metric", metric_name}, {"trials", trials}, {"seed", seed}};
    report["results"] = {{"max_rel_error", max_rel},
                         {"mean_rel_error", compared ? sum_rel / compared : 0.0},
                         {"tolerance", kTol},
                         {"pass", pass}};
    if (!out_path.empty())
        write_report(report, out_path);
    std::cout << metric_name << " fixed vs float over " << trials
              << " trials: max rel = " << max_rel << ", mean rel = "
              << (compared ? sum_rel / compared : 0.0) << (pass ? " (ok)" : " (breach)")
              << "\n";
    return pass ? 0 : 5;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"multispectral image correlation tool"};
    app.require_subcommand(1);

    // project
    auto* project = app.add_subcommand("project", "project a spectral cube into rgb/xyz/lab");
    std::string p_in, p_space, p_sens, p_out, p_report;
    MetricFlags p_mf;
    project->add_option("--in", p_in, "input cube (MSC1)")->required();
    project->add_option("--space", p_space, "target space: rgb, xyz or lab")->required();
    project->add_option("--sens", p_sens, "sensitivity CSV (camera RGB or CMF)")->required();
    project->add_option("--white", p_mf.white_path, "white spectrum file (one value per line)");
    project->add_flag("--flat-white", p_mf.flat_white, "accept the flat-255 white fallback");
    project->add_option("--out", p_out, "output CSV (x,y,c1,c2,c3)")->required();
    project->add_option("--report", p_report, "machine-readable run report (JSON)");

    // distance
    auto* distance = app.add_subcommand("distance", "compute a spectral distance between two cubes");
    std::string d_ref, d_cand, d_metric, d_pixels, d_out;
    MetricFlags d_mf;
    distance->add_option("--ref", d_ref, "reference cube")->required();
    distance->add_option("--cand", d_cand, "candidate cube")->required();
    distance->add_option("--metric", d_metric, "rms, wrms, gfc, de-rgb, de-lab or mv")->required();
    d_mf.add_to(distance);
    distance->add_option("--pixels", d_pixels, "optional per-pixel CSV output");
    distance->add_option("--out", d_out, "machine-readable run report (JSON)");

    // authenticate
    auto* auth = app.add_subcommand("authenticate", "adaptive authentication against a stored reference");
    std::string a_store, a_ref_id, a_cand, a_metric, a_schedule, a_out;
    double a_precision = 1.0, a_margin = 0.0;
    MetricFlags a_mf;
    auth->add_option("--store", a_store, "reference store directory")->required();
    auth->add_option("--ref-id", a_ref_id, "reference id")->required();
    auth->add_option("--cand", a_cand, "candidate cube")->required();
    auth->add_option("--metric", a_metric, "rms, wrms, gfc, de-rgb, de-lab or mv")->required();
    auth->add_option("--precision", a_precision, "decision threshold P")->required();
    auth->add_option("--margin", a_margin, "undecided band half-width around P");
    auth->add_option("--schedule", a_schedule, "comma-separated ascending band counts");
    a_mf.add_to(auth);
    auth->add_option("--out", a_out, "machine-readable run report (JSON)");

    // cost
    auto* cost = app.add_subcommand("cost", "operation counts, cycles and latency for a metric");
    std::string c_metric, c_source = "published", c_out;
    int c_bands = 400, c_sqrt = 16, c_cbrt = 32;
    unsigned c_seed = 1;
    cost->add_option("--metric", c_metric, "rms, wrms, gfc, de-rgb, de-lab or mv")->required();
    cost->add_option("--bands", c_bands, "band count N")->required();
    cost->add_option("--source", c_source, "published (reference op table) or measured (instrumented)");
    cost->add_option("--sqrt-cycles", c_sqrt, "model cycles per square root stage");
    cost->add_option("--cbrt-cycles", c_cbrt, "model cycles per cube root stage");
    cost->add_option("--seed", c_seed, "seed for the measured-source image pair");
    cost->add_option("--out", c_out, "machine-readable run report (JSON)");

    // fxp-compare
    auto* fxp = app.add_subcommand("fxp-compare", "fixed-point vs float oracle comparison");
    std::string f_metric, f_out;
    int f_trials = 1000;
    unsigned f_seed = 1;
    fxp->add_option("--metric", f_metric, "rms or de-rgb (the fixed-point paths)")->required();
    fxp->add_option("--trials", f_trials, "number of random trials");
    fxp->add_option("--seed", f_seed, "RNG seed");
    fxp->add_option("--out", f_out, "machine-readable run report (JSON)");

    // store management
    auto* store_cmd = app.add_subcommand("store", "reference store management");
    auto* store_add = store_cmd->add_subcommand("add", "add a reference cube");
    std::string s_dir, s_id, s_cube, s_white, s_meta;
    store_add->add_option("--store", s_dir, "store directory")->required();
    store_add->add_option("--id", s_id, "reference id")->required();
    store_add->add_option("--cube", s_cube, "cube path")->required();
    store_add->add_option("--white", s_white, "white spectrum file");
    store_add->add_option("--meta", s_meta, "free-form metadata");
    auto* store_list = store_cmd->add_subcommand("list", "list stored references");
    std::string l_dir;
    store_list->add_option("--store", l_dir, "store directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*project)
            return run_project(p_in, p_space, p_sens, p_mf, p_out, p_report);
        if (*distance)
            return run_distance(d_ref, d_cand, d_metric, d_mf, d_pixels, d_out);
        if (*auth)
            return run_authenticate(a_store, a_ref_id, a_cand, a_metric, a_precision,
                                    a_margin, a_schedule, a_mf, a_out);
        if (*cost)
            return run_cost(c_metric, c_bands, c_source, c_sqrt, c_cbrt, c_seed, c_out);
        if (*fxp)
            return run_fxp_compare(f_metric, f_trials, f_seed, f_out);
        if (*store_add) {
            msc::ReferenceStore store(s_dir);
            store.add_reference(s_id, s_cube,
                                s_white.empty() ? std::nullopt
                                                : std::optional<std::filesystem::path>(s_white),
                                s_meta);
            std::cout << "added '" << s_id << "'\n";
            return 0;
        }
        if (*store_list) {
            msc::ReferenceStore store(l_dir);
            for (const auto& e : store.list_references())
                std::cout << e.id << '\t' << e.width << 'x' << e.height << 'x' << e.bands
                          << '\t' << e.metadata << '\n';
            return 0;
        }
    } catch (const msc::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "InternalError: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
