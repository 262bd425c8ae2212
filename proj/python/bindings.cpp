#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "msc/costmodel.hpp"
#include "msc/fixedpoint.hpp"
#include "msc/pipeline.hpp"

namespace py = pybind11;
using namespace msc;

namespace {

// numpy (height, width, bands) uint8 -> band-major SpectralImage
SpectralImage image_from_array(const py::array_t<std::uint8_t>& arr, int start_nm,
                               int step_nm) {
    if (arr.ndim() != 3)
        fail("InvariantViolation", "cube array must have shape (height, width, bands)");
    const int height = static_cast<int>(arr.shape(0));
    const int width = static_cast<int>(arr.shape(1));
    const int bands = static_cast<int>(arr.shape(2));
    WavelengthAxis axis(start_nm, step_nm, bands);
    std::vector<std::uint8_t> samples(static_cast<std::size_t>(width) * height * bands);
    auto view = arr.unchecked<3>();
    for (int b = 0; b < bands; ++b)
        for (int y = 0; y < height; ++y)
            for (int x = 0; x < width; ++x)
                samples[(static_cast<std::size_t>(b) * height + y) * width + x] =
                    view(y, x, b);
    return SpectralImage(width, height, axis, std::move(samples));
}

py::array_t<std::uint8_t> image_to_array(const SpectralImage& img) {
    py::array_t<std::uint8_t> arr({img.height(), img.width(), img.bands()});
    auto view = arr.mutable_unchecked<3>();
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            for (int b = 0; b < img.bands(); ++b)
                view(y, x, b) = img.at(x, y, b);
    return arr;
}

SensitivitySet sens_from_array(const py::array_t<double>& arr, int start_nm, int step_nm,
                               SensitivityKind kind) {
    if (arr.ndim() != 2 || arr.shape(0) != 3)
        fail("InvariantViolation", "sensitivity array must have shape (3, bands)");
    const int bands = static_cast<int>(arr.shape(1));
    auto view = arr.unchecked<2>();
    std::array<std::vector<double>, 3> rows;
    for (int c = 0; c < 3; ++c) {
        rows[c].resize(bands);
        for (int i = 0; i < bands; ++i)
            rows[c][i] = view(c, i);
    }
    return SensitivitySet(WavelengthAxis(start_nm, step_nm, bands), rows, kind);
}

py::array_t<double> tri_to_array(const TriImage& img) {
    py::array_t<double> arr({img.height(), img.width(), 3});
    auto view = arr.mutable_unchecked<3>();
    for (int y = 0; y < img.height(); ++y)
        for (int x = 0; x < img.width(); ++x)
            for (int c = 0; c < 3; ++c)
                view(y, x, c) = img.at(x, y, c);
    return arr;
}

std::vector<double> vec_from_array(const py::array_t<double>& arr) {
    if (arr.ndim() != 1)
        fail("InvariantViolation", "expected a 1-d array");
    auto view = arr.unchecked<1>();
    std::vector<double> out(static_cast<std::size_t>(arr.shape(0)));
    for (py::ssize_t i = 0; i < arr.shape(0); ++i)
        out[static_cast<std::size_t>(i)] = view(i);
    return out;
}

MetricConfig config_from_kwargs(const std::optional<py::array_t<double>>& weights,
                                const std::optional<py::array_t<double>>& rgb_sens,
                                const std::optional<py::array_t<double>>& cmf,
                                const std::optional<py::array_t<double>>& white,
                                int start_nm, int step_nm, int workers) {
    MetricConfig cfg;
    cfg.workers = workers;
    if (weights)
        cfg.weights = WeightVector(vec_from_array(*weights));
    if (rgb_sens)
        cfg.rgb_sens = sens_from_array(*rgb_sens, start_nm, step_nm,
                                       SensitivityKind::CameraRgb);
    if (cmf)
        cfg.cmf = sens_from_array(*cmf, start_nm, step_nm, SensitivityKind::CmfXyz);
    if (white)
        cfg.white_spectrum = vec_from_array(*white);
    return cfg;
}

py::dict distance_result_dict(const DistanceResult& res) {
    py::array_t<double> per_pixel({res.height, res.width});
    auto view = per_pixel.mutable_unchecked<2>();
    for (int y = 0; y < res.height; ++y)
        for (int x = 0; x < res.width; ++x)
            view(y, x) = res.per_pixel[static_cast<std::size_t>(y) * res.width + x];
    py::dict out;
    out["metric"] = metric_name(res.metric);
    out["aggregate"] = res.aggregate;
    out["per_pixel"] = per_pixel;
    out["polarity"] = res.polarity == Polarity::Distance ? "DISTANCE" : "SIMILARITY";
    return out;
}

py::list profile_list(const OpProfile& p) {
    py::list stages;
    for (const auto& s : p.stages) {
        py::dict d;
        d["op"] = op_name(s.op);
        d["count"] = s.count;
        d["result"] = s.result == NumericType::Integer ? "INTEGER" : "FLOAT";
        d["parallel"] = s.parallel;
        stages.append(d);
    }
    return stages;
}

} // namespace

PYBIND11_MODULE(_mscorr, m) {
    m.doc() = "multispectral image correlation core";

    py::register_exception<Error>(m, "MscError");

    m.def(
        "load_cube",
        [](const std::filesystem::path& path) {
            SpectralImage img = load_cube(path);
            return py::make_tuple(image_to_array(img), img.axis().start_nm,
                                  img.axis().step_nm);
        },
        py::arg("path"),
        "Load an MSC1 cube; returns (array[h, w, bands] uint8, start_nm, step_nm).");

    m.def(
        "save_cube",
        [](const std::filesystem::path& path, const py::array_t<std::uint8_t>& cube,
           int start_nm, int step_nm) {
            save_cube(image_from_array(cube, start_nm, step_nm), path);
        },
        py::arg("path"), py::arg("cube"), py::arg("start_nm"), py::arg("step_nm"),
        "Write an (h, w, bands) uint8 array as an MSC1 cube.");

    m.def(
        "rms",
        [](const py::array_t<double>& a, const py::array_t<double>& b) {
            return rms(vec_from_array(a), vec_from_array(b));
        },
        py::arg("s1"), py::arg("s2"));
    m.def(
        "wrms",
        [](const py::array_t<double>& a, const py::array_t<double>& b,
           const py::array_t<double>& w) {
            return wrms(vec_from_array(a), vec_from_array(b),
                        WeightVector(vec_from_array(w)));
        },
        py::arg("s1"), py::arg("s2"), py::arg("weights"));
    m.def(
        "gfc",
        [](const py::array_t<double>& a, const py::array_t<double>& b) {
            return gfc(vec_from_array(a), vec_from_array(b));
        },
        py::arg("s1"), py::arg("s2"));

    m.def(
        "distance",
        [](const std::string& metric, const py::array_t<std::uint8_t>& ref,
           const py::array_t<std::uint8_t>& cand, int start_nm, int step_nm,
           const std::optional<py::array_t<double>>& weights,
           const std::optional<py::array_t<double>>& rgb_sens,
           const std::optional<py::array_t<double>>& cmf,
           const std::optional<py::array_t<double>>& white, int workers) {
            const SpectralImage i1 = image_from_array(ref, start_nm, step_nm);
            const SpectralImage i2 = image_from_array(cand, start_nm, step_nm);
            const MetricConfig cfg =
                config_from_kwargs(weights, rgb_sens, cmf, white, start_nm, step_nm, workers);
            return distance_result_dict(
                image_metric(metric_from_name(metric), i1, i2, cfg));
        },
        py::arg("metric"), py::arg("ref"), py::arg("cand"), py::arg("start_nm"),
        py::arg("step_nm"), py::arg("weights") = std::nullopt,
        py::arg("rgb_sens") = std::nullopt, py::arg("cmf") = std::nullopt,
        py::arg("white") = std::nullopt, py::arg("workers") = 1,
        "Image-pair distance; sensitivity arrays have shape (3, bands).");

    m.def(
        "project",
        [](const py::array_t<std::uint8_t>& cube, int start_nm, int step_nm,
           const std::string& space, const py::array_t<double>& sens,
           const std::optional<py::array_t<double>>& white) {
            const SpectralImage img = image_from_array(cube, start_nm, step_nm);
            std::optional<std::vector<double>> w;
            if (white)
                w = vec_from_array(*white);
            if (space == "rgb")
                return tri_to_array(project_rgb(
                    img, sens_from_array(sens, start_nm, step_nm,
                                         SensitivityKind::CameraRgb)));
            const SensitivitySet cmf =
                sens_from_array(sens, start_nm, step_nm, SensitivityKind::CmfXyz);
            if (space == "xyz")
                return tri_to_array(project_xyz(img, cmf, w).first);
            if (space == "lab")
                return tri_to_array(
                    xyz_to_lab(project_xyz(img, cmf, w).first, make_reference_white(cmf, w)));
            fail("UnknownAlgorithm", "space must be rgb, xyz or lab");
        },
        py::arg("cube"), py::arg("start_nm"), py::arg("step_nm"), py::arg("space"),
        py::arg("sens"), py::arg("white") = std::nullopt);

    m.def("fx_isqrt", [](std::uint32_t v) { return fx::fx_isqrt(v); }, py::arg("v"));
    m.def(
        "fx_rms",
        [](const py::array_t<std::uint8_t>& a, const py::array_t<std::uint8_t>& b) {
            if (a.ndim() != 1 || b.ndim() != 1)
                fail("InvariantViolation", "expected 1-d uint8 arrays");
            std::vector<std::uint8_t> va(a.data(), a.data() + a.shape(0));
            std::vector<std::uint8_t> vb(b.data(), b.data() + b.shape(0));
            return fx::fx_rms(va, vb).to_real();
        },
        py::arg("s1"), py::arg("s2"));
    m.def(
        "fx_de_rgb",
        [](std::array<std::int32_t, 3> p, std::array<std::int32_t, 3> q) {
            return fx::fx_de_rgb(p.data(), q.data()).to_real();
        },
        py::arg("rgb1"), py::arg("rgb2"));

    m.def(
        "cost_profile",
        [](const std::string& metric, int bands) {
            CostReport r =
                estimate_latency(published_profile(metric_from_name(metric), bands),
                                 hardware_reference().clocks);
            py::dict out;
            out["metric"] = metric_name(r.algorithm);
            out["bands"] = r.bands;
            out["projection"] = profile_list(r.projection_ops);
            out["distance"] = profile_list(r.distance_ops);
            out["cycles"] = r.cycles;
            out["latency_us"] = r.latency_us;
            out["clock_mhz"] = r.clock_mhz;
            return out;
        },
        py::arg("metric"), py::arg("bands"),
        "Published per-pixel op profile with the cycle/latency model applied.");

    m.def("adaptability_rank", [] {
        const AdaptabilityRank r = adaptability_rank();
        py::list pub, comp;
        for (Metric m2 : r.published)
            pub.append(metric_name(m2));
        for (Metric m2 : r.computed)
            comp.append(metric_name(m2));
        py::dict out;
        out["published"] = pub;
        out["computed"] = comp;
        return out;
    });

    m.def(
        "authenticate",
        [](const std::filesystem::path& store_dir, const std::string& ref_id,
           const py::array_t<std::uint8_t>& cand, int start_nm, int step_nm,
           const std::string& metric, double precision, double margin,
           const std::vector<int>& schedule,
           const std::optional<py::array_t<double>>& weights,
           const std::optional<py::array_t<double>>& rgb_sens,
           const std::optional<py::array_t<double>>& cmf,
           const std::optional<py::array_t<double>>& white, int workers) {
            const ReferenceStore store(store_dir);
            AuthConfig cfg;
            cfg.metric = metric_from_name(metric);
            cfg.precision = precision;
            cfg.margin = margin;
            cfg.band_schedule = schedule;
            cfg.metric_config =
                config_from_kwargs(weights, rgb_sens, cmf, white, start_nm, step_nm, workers);
            const AuthVerdict v = authenticate(
                store, ref_id, image_from_array(cand, start_nm, step_nm), cfg);
            py::list iters;
            for (const auto& it : v.iterations) {
                py::dict d;
                d["bands"] = it.bands;
                d["r"] = it.r;
                iters.append(d);
            }
            py::dict out;
            out["decision"] = decision_name(v.decision);
            out["iterations"] = iters;
            out["final_r"] = v.final_r;
            out["bands_final"] = v.bands_final;
            return out;
        },
        py::arg("store_dir"), py::arg("ref_id"), py::arg("cand"), py::arg("start_nm"),
        py::arg("step_nm"), py::arg("metric"), py::arg("precision"),
        py::arg("margin") = 0.0, py::arg("schedule") = std::vector<int>{},
        py::arg("weights") = std::nullopt, py::arg("rgb_sens") = std::nullopt,
        py::arg("cmf") = std::nullopt, py::arg("white") = std::nullopt,
        py::arg("workers") = 1);

    m.def(
        "add_reference",
        [](const std::filesystem::path& store_dir, const std::string& id,
           const std::filesystem::path& cube_path,
           const std::optional<std::filesystem::path>& white_path,
           const std::string& metadata) {
            ReferenceStore store(store_dir);
            store.add_reference(id, cube_path, white_path, metadata);
        },
        py::arg("store_dir"), py::arg("id"), py::arg("cube_path"),
        py::arg("white_path") = std::nullopt, py::arg("metadata") = "");

    m.def("list_references", [](const std::filesystem::path& store_dir) {
        const ReferenceStore store(store_dir);
        py::list out;
        for (const auto& e : store.list_references()) {
            py::dict d;
            d["id"] = e.id;
            d["width"] = e.width;
            d["height"] = e.height;
            d["bands"] = e.bands;
            d["metadata"] = e.metadata;
            out.append(d);
        }
        return out;
    });
}
