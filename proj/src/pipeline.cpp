#include "msc/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "msc/spectral_image.hpp"

namespace msc {

const char* decision_name(Decision d) {
    switch (d) {
    case Decision::Authentic: return "AUTHENTIC";
    case Decision::Rejected: return "REJECTED";
    case Decision::Undecided: return "UNDECIDED";
    }
    return "?";
}

ReferenceStore::ReferenceStore(std::filesystem::path root) : root_(std::move(root)) {
    std::filesystem::create_directories(root_);
}

std::vector<ReferenceStore::Entry> ReferenceStore::read_index() const {
    std::vector<Entry> entries;
    std::ifstream in(index_path());
    if (!in)
        return entries; // empty store
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string id, cube, white, meta;
        if (!std::getline(ss, id, '\t') || !std::getline(ss, cube, '\t') ||
            !std::getline(ss, white, '\t'))
            fail("IndexCorrupt", "malformed index line " + std::to_string(lineno));
        std::getline(ss, meta, '\t');
        Entry e;
        e.id = id;
        e.cube_path = cube;
        if (white != "-")
            e.white_path = white;
        e.metadata = meta;
        entries.push_back(std::move(e));
    }
    return entries;
}

void ReferenceStore::write_index(const std::vector<Entry>& entries) const {
    const auto tmp = index_path().string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            fail("IoFailure", "cannot write " + tmp);
        for (const auto& e : entries)
            out << e.id << '\t' << e.cube_path.string() << '\t'
                << (e.white_path ? e.white_path->string() : "-") << '\t' << e.metadata
                << '\n';
        out.flush();
        if (!out)
            fail("IoFailure", "write failed for " + tmp);
    }
    std::filesystem::rename(tmp, index_path());
}

void ReferenceStore::add_reference(const std::string& id, const std::filesystem::path& cube_path,
                                   const std::optional<std::filesystem::path>& white_path,
                                   const std::string& metadata) {
    auto entries = read_index();
    for (const auto& e : entries)
        if (e.id == id)
            fail("DuplicateId", "reference '" + id + "' already exists");
    try {
        load_cube(cube_path); // must be loadable before it is indexed
    } catch (const Error& e) {
        fail("LoadFailure", "cannot load cube for '" + id + "': " + e.what());
    }
    Entry e;
    e.id = id;
    e.cube_path = cube_path;
    e.white_path = white_path;
    e.metadata = metadata;
    entries.push_back(std::move(e));
    write_index(entries);
}

std::vector<ReferenceStore::Listing> ReferenceStore::list_references() const {
    auto entries = read_index();
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.id < b.id; });
    std::vector<Listing> out;
    for (const auto& e : entries) {
        if (!std::filesystem::exists(e.cube_path))
            fail("IndexCorrupt", "reference '" + e.id + "' points to a missing cube");
        SpectralImage img = load_cube(e.cube_path);
        out.push_back(Listing{e.id, img.width(), img.height(), img.bands(), e.metadata});
    }
    return out;
}

ReferenceStore::Entry ReferenceStore::find(const std::string& id) const {
    for (auto& e : read_index())
        if (e.id == id)
            return e;
    fail("UnknownReference", "no reference with id '" + id + "'");
}

SpectralImage ReferenceStore::load_reference(const std::string& id) const {
    return load_cube(find(id).cube_path);
}

std::optional<std::vector<double>> ReferenceStore::load_white(const std::string& id,
                                                              const WavelengthAxis& axis) const {
    const Entry e = find(id);
    if (!e.white_path)
        return std::nullopt;
    return load_spectrum(*e.white_path, axis);
}

std::vector<int> resolve_schedule(const AuthConfig& cfg, int full_bands) {
    std::vector<int> schedule = cfg.band_schedule;
    if (schedule.empty()) {
        for (int k : {16, 64, 256})
            if (k < full_bands)
                schedule.push_back(k);
        schedule.push_back(full_bands);
    }
    int prev = 0;
    for (int k : schedule) {
        if (k <= prev)
            fail("ScheduleInvalid", "band schedule must be strictly ascending");
        if (k > full_bands)
            fail("ScheduleInvalid", "schedule entry exceeds reference band count");
        if ((cfg.metric == Metric::Rms || cfg.metric == Metric::Wrms) && (k & (k - 1)) != 0)
            fail("ScheduleInvalid",
                 "RMS/WRMS band counts must be powers of two, got " + std::to_string(k));
        prev = k;
    }
    return schedule;
}

namespace {

// Metric config restricted to k bands: weights and sensitivities follow
// the same index selection the images use.
MetricConfig config_for_bands(const AuthConfig& cfg, int full_bands, int k) {
    MetricConfig mc = cfg.metric_config;
    if (k == full_bands)
        return mc;
    if (mc.weights) {
        const auto idx = subsample_indices(full_bands, k);
        std::vector<double> w;
        w.reserve(k);
        double sum = 0.0;
        for (auto i : idx) {
            w.push_back(mc.weights->values()[i]);
            sum += w.back();
        }
        if (sum <= 0.0)
            fail("ScheduleInvalid", "subsampled weights are all zero");
        for (auto& v : w)
            v /= sum;
        mc.weights = WeightVector(std::move(w));
    }
    if (mc.rgb_sens)
        mc.rgb_sens = mc.rgb_sens->subsample(k);
    if (mc.cmf)
        mc.cmf = mc.cmf->subsample(k);
    if (mc.white_spectrum) {
        const auto idx = subsample_indices(full_bands, k);
        std::vector<double> w;
        w.reserve(k);
        for (auto i : idx)
            w.push_back((*mc.white_spectrum)[i]);
        mc.white_spectrum = std::move(w);
    }
    return mc;
}

} // namespace

AuthVerdict authenticate(const ReferenceStore& store, const std::string& ref_id,
                         const SpectralImage& candidate, const AuthConfig& cfg) {
    SpectralImage reference = store.load_reference(ref_id);
    if (reference.width() != candidate.width() || reference.height() != candidate.height())
        fail("DimensionMismatch", "candidate dimensions differ from reference");
    if (!(reference.axis() == candidate.axis()))
        fail("AxisMismatch", "candidate axis differs from reference");

    AuthConfig effective = cfg;
    if (!effective.metric_config.white_spectrum)
        effective.metric_config.white_spectrum = store.load_white(ref_id, reference.axis());

    const int full = reference.bands();
    const auto schedule = resolve_schedule(effective, full);

    AuthVerdict verdict;
    for (int k : schedule) {
        SpectralImage ref_k = subsample_bands(reference, k);
        SpectralImage cand_k = subsample_bands(candidate, k);
        const MetricConfig mc = config_for_bands(effective, full, k);
        const DistanceResult res = image_metric(effective.metric, ref_k, cand_k, mc);
        verdict.iterations.push_back(AuthIteration{k, res.aggregate});
        verdict.final_r = res.aggregate;
        verdict.bands_final = k;

        const double lo = effective.precision - effective.margin;
        const double hi = effective.precision + effective.margin;
        if (res.polarity == Polarity::Distance) {
            if (res.aggregate <= lo) {
                verdict.decision = Decision::Authentic;
                return verdict;
            }
            if (res.aggregate >= hi) {
                verdict.decision = Decision::Rejected;
                return verdict;
            }
        } else {
            if (res.aggregate >= hi) {
                verdict.decision = Decision::Authentic;
                return verdict;
            }
            if (res.aggregate <= lo) {
                verdict.decision = Decision::Rejected;
                return verdict;
            }
        }
    }
    verdict.decision = Decision::Undecided;
    return verdict;
}

} // namespace msc
