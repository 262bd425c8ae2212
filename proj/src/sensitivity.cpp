#include "msc/sensitivity.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "msc/spectral_image.hpp"

namespace msc {

SensitivitySet::SensitivitySet(WavelengthAxis axis, std::array<std::vector<double>, 3> rows,
                               SensitivityKind kind)
    : axis_(axis), rows_(std::move(rows)), kind_(kind) {
    for (const auto& row : rows_) {
        if (row.size() != static_cast<std::size_t>(axis_.count))
            fail("AxisMismatch", "sensitivity row length does not match axis count");
        for (double v : row) {
            if (!std::isfinite(v))
                fail("NonNumericCell", "sensitivity entries must be finite");
            if (kind_ == SensitivityKind::CmfXyz && v < 0.0)
                fail("InvariantViolation", "CMF entries must be nonnegative");
        }
    }
}

void SensitivitySet::require_axis(const WavelengthAxis& other) const {
    if (!(axis_ == other))
        fail("AxisMismatch", "sensitivity axis differs from image axis");
}

SensitivitySet SensitivitySet::subsample(int target) const {
    if (target < 1 || target > axis_.count)
        fail("TargetOutOfRange", "target band count must be in [1, bands]");
    if (target == axis_.count)
        return *this;
    const auto idx = subsample_indices(axis_.count, target);
    std::array<std::vector<double>, 3> rows;
    for (int c = 0; c < 3; ++c) {
        rows[c].reserve(target);
        for (auto i : idx)
            rows[c].push_back(rows_[c][i]);
    }
    // Mirror the axis the image subsample derives (stride bookkeeping is
    // the image's job; here only alignment matters).
    bool uniform = true;
    for (int i = 2; i < target; ++i)
        if (idx[i] - idx[i - 1] != idx[1] - idx[0]) { uniform = false; break; }
    const std::uint32_t stride = target > 1 ? idx[1] - idx[0] : 1;
    const int step = static_cast<int>(stride) * axis_.step_nm;
    WavelengthAxis axis = WavelengthAxis::nominal(axis_.start_nm, step, target);
    if (uniform && axis_.start_nm + (target - 1) * step <= 780)
        axis = WavelengthAxis(axis_.start_nm, step, target);
    return SensitivitySet(axis, std::move(rows), kind_);
}

SensitivitySet load_sensitivities(const std::filesystem::path& path,
                                  const WavelengthAxis& axis, SensitivityKind kind) {
    std::ifstream in(path);
    if (!in)
        fail("IoFailure", "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("wavelength,c1,c2,c3", 0) != 0)
        fail("MalformedHeader", "expected header 'wavelength,c1,c2,c3' in " + path.string());
    std::array<std::vector<double>, 3> rows;
    int next = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        std::istringstream ss(line);
        std::string cell;
        double vals[4];
        for (int c = 0; c < 4; ++c) {
            if (!std::getline(ss, cell, ','))
                fail("NonNumericCell", "short row in " + path.string());
            try {
                std::size_t pos = 0;
                vals[c] = std::stod(cell, &pos);
                while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos]))) ++pos;
                if (pos != cell.size())
                    throw std::invalid_argument(cell);
            } catch (const std::exception&) {
                fail("NonNumericCell", "cannot parse '" + cell + "' in " + path.string());
            }
        }
        const int wl = static_cast<int>(vals[0]);
        if (next >= axis.count || wl != axis.wavelength(next))
            fail("AxisMismatch", "row wavelength " + std::to_string(wl) +
                                     " does not match axis sample " + std::to_string(next));
        for (int c = 0; c < 3; ++c)
            rows[c].push_back(vals[c + 1]);
        ++next;
    }
    if (next != axis.count)
        fail("AxisMismatch", "file has " + std::to_string(next) + " rows, axis needs " +
                                 std::to_string(axis.count));
    return SensitivitySet(axis, std::move(rows), kind);
}

std::vector<double> load_spectrum(const std::filesystem::path& path,
                                  const WavelengthAxis& axis) {
    std::ifstream in(path);
    if (!in)
        fail("IoFailure", "cannot open " + path.string());
    std::vector<double> out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        try {
            out.push_back(std::stod(line));
        } catch (const std::exception&) {
            fail("NonNumericCell", "cannot parse '" + line + "' in " + path.string());
        }
    }
    if (out.size() != static_cast<std::size_t>(axis.count))
        fail("AxisMismatch", "white spectrum length does not match axis count");
    return out;
}

} // namespace msc
