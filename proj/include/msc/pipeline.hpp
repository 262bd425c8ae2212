#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "msc/metrics.hpp"

namespace msc {

// Directory-backed store of reference cubes: <root>/index.tsv with
// columns id, cube path, white path ("-" if absent), metadata. Updates
// go through a temp file and an atomic rename.
class ReferenceStore {
public:
    explicit ReferenceStore(std::filesystem::path root);

    struct Entry {
        std::string id;
        std::filesystem::path cube_path;
        std::optional<std::filesystem::path> white_path;
        std::string metadata;
    };

    void add_reference(const std::string& id, const std::filesystem::path& cube_path,
                       const std::optional<std::filesystem::path>& white_path = std::nullopt,
                       const std::string& metadata = "");

    struct Listing {
        std::string id;
        int width, height, bands;
        std::string metadata;
    };
    std::vector<Listing> list_references() const;

    Entry find(const std::string& id) const;
    SpectralImage load_reference(const std::string& id) const;
    std::optional<std::vector<double>> load_white(const std::string& id,
                                                  const WavelengthAxis& axis) const;

    const std::filesystem::path& root() const { return root_; }

private:
    std::filesystem::path root_;
    std::filesystem::path index_path() const { return root_ / "index.tsv"; }
    std::vector<Entry> read_index() const;
    void write_index(const std::vector<Entry>& entries) const;
};

struct AuthConfig {
    Metric metric = Metric::Rms;
    double precision = 1.0;   // threshold P
    double margin = 0.0;      // symmetric undecided band around P
    std::vector<int> band_schedule; // empty = default [16, 64, 256, N]
    MetricConfig metric_config;
};

enum class Decision { Authentic, Rejected, Undecided };
const char* decision_name(Decision d);

struct AuthIteration {
    int bands;
    double r;
};

struct AuthVerdict {
    Decision decision = Decision::Undecided;
    std::vector<AuthIteration> iterations;
    double final_r = 0.0;
    int bands_final = 0;
};

// Resolves the schedule against the reference band count and enforces
// the power-of-two constraint for RMS/WRMS before any computation.
std::vector<int> resolve_schedule(const AuthConfig& cfg, int full_bands);

// Adaptive comparison: run the metric at each scheduled band count,
// escalating while the result sits inside the margin band around P.
AuthVerdict authenticate(const ReferenceStore& store, const std::string& ref_id,
                         const SpectralImage& candidate, const AuthConfig& cfg);

} // namespace msc
