#include <doctest.h>

#include "msc/kernels.hpp"
#include "support.hpp"

using namespace msc;

namespace {

SpectralImage single_pixel(const WavelengthAxis& axis, const std::vector<std::uint8_t>& s) {
    return SpectralImage(1, 1, axis, s);
}

} // namespace

TEST_CASE("project_rgb: zero spectrum and forced sums") {
    WavelengthAxis axis(400, 100, 2);
    std::array<std::vector<double>, 3> rows{std::vector<double>{1, 1},
                                            std::vector<double>{1, 1},
                                            std::vector<double>{1, 1}};
    SensitivitySet sens(axis, rows, SensitivityKind::CameraRgb);

    TriImage zero = project_rgb(single_pixel(axis, {0, 0}), sens);
    CHECK(zero.at(0, 0, 0) == 0.0);
    CHECK(zero.at(0, 0, 1) == 0.0);
    CHECK(zero.at(0, 0, 2) == 0.0);

    TriImage out = project_rgb(single_pixel(axis, {10, 20}), sens);
    CHECK(out.at(0, 0, 0) == 30.0);
    CHECK(out.at(0, 0, 1) == 30.0);
    CHECK(out.at(0, 0, 2) == 30.0);
}

TEST_CASE("project_rgb: axis mismatch is an error") {
    WavelengthAxis axis(400, 100, 2);
    std::array<std::vector<double>, 3> rows{std::vector<double>{1, 1, 1},
                                            std::vector<double>{1, 1, 1},
                                            std::vector<double>{1, 1, 1}};
    SensitivitySet sens(WavelengthAxis(400, 100, 3), rows, SensitivityKind::CameraRgb);
    CHECK_THROWS_WITH_AS(project_rgb(single_pixel(axis, {1, 2}), sens),
                         doctest::Contains("AxisMismatch"), Error);
}

TEST_CASE("project_xyz: identity-like CMF with flat white") {
    WavelengthAxis axis(400, 100, 4);
    std::array<std::vector<double>, 3> rows{std::vector<double>{1, 0, 0, 0},
                                            std::vector<double>{0, 1, 0, 0},
                                            std::vector<double>{0, 0, 1, 0}};
    SensitivitySet cmf(axis, rows, SensitivityKind::CmfXyz);
    auto [img, norm] = project_xyz(single_pixel(axis, {51, 102, 153, 204}), cmf);
    CHECK(norm.k == doctest::Approx(100.0 / 255.0).epsilon(1e-15));
    CHECK(img.at(0, 0, 0) == doctest::Approx(20.0).epsilon(1e-12));
    CHECK(img.at(0, 0, 1) == doctest::Approx(40.0).epsilon(1e-12));
    CHECK(img.at(0, 0, 2) == doctest::Approx(60.0).epsilon(1e-12));
}

TEST_CASE("project_xyz: the white spectrum itself projects to Y = 100") {
    auto cmf = test::fixture_cmf();
    std::vector<double> white(41);
    for (int i = 0; i < 41; ++i)
        white[i] = 40.0 + 5.0 * (i % 7);
    // quantized white as a cube pixel needs integer samples; use them as the white too
    std::vector<std::uint8_t> wq(41);
    for (int i = 0; i < 41; ++i)
        wq[i] = static_cast<std::uint8_t>(white[i]);
    auto [img, norm] = project_xyz(single_pixel(test::fixture_axis(), wq), cmf, white);
    CHECK(img.at(0, 0, 1) == doctest::Approx(100.0).epsilon(1e-12));

    auto zero = project_xyz(single_pixel(test::fixture_axis(), std::vector<std::uint8_t>(41, 0)),
                            cmf, white);
    CHECK(zero.first.at(0, 0, 0) == 0.0);
    CHECK(zero.first.at(0, 0, 1) == 0.0);
    CHECK(zero.first.at(0, 0, 2) == 0.0);
}

TEST_CASE("project_xyz: degenerate white rejected") {
    auto cmf = test::fixture_cmf();
    std::vector<double> white(41, 0.0);
    CHECK_THROWS_WITH_AS(project_xyz(single_pixel(test::fixture_axis(),
                                                  std::vector<std::uint8_t>(41, 1)),
                                     cmf, white),
                         doctest::Contains("DegenerateWhite"), Error);
}

TEST_CASE("lab transfer function: continuity and branch algebra") {
    const double t0 = lab::kDelta3;
    CHECK(std::abs(std::cbrt(t0) - (t0 / (3.0 * lab::kDelta * lab::kDelta) + 4.0 / 29.0)) < 1e-12);
    // zero maps to L* = 0 exactly through the linear segment
    CHECK(116.0 * lab::f(0.0) - 16.0 == 0.0);
}

TEST_CASE("xyz_to_lab: white, black and 1/8 grey") {
    ReferenceWhite white{95.0, 100.0, 108.0, std::nullopt};

    TriImage w(1, 1, ColorSpace::Xyz, {95.0, 100.0, 108.0});
    TriImage lw = xyz_to_lab(w, white);
    CHECK(lw.at(0, 0, 0) == doctest::Approx(100.0).epsilon(1e-13));
    CHECK(lw.at(0, 0, 1) == 0.0);
    CHECK(lw.at(0, 0, 2) == 0.0);

    TriImage black(1, 1, ColorSpace::Xyz, {0.0, 0.0, 0.0});
    TriImage lb = xyz_to_lab(black, white);
    CHECK(lb.at(0, 0, 0) == 0.0);
    CHECK(lb.at(0, 0, 1) == 0.0);
    CHECK(lb.at(0, 0, 2) == 0.0);

    TriImage grey(1, 1, ColorSpace::Xyz, {95.0 / 8, 100.0 / 8, 108.0 / 8});
    TriImage lg = xyz_to_lab(grey, white);
    CHECK(lg.at(0, 0, 0) == 42.0); // cbrt(1/8) is exact
    CHECK(lg.at(0, 0, 1) == 0.0);
    CHECK(lg.at(0, 0, 2) == 0.0);
}

TEST_CASE("xyz_to_lab: equal ratios give a* = b* = 0") {
    ReferenceWhite white{90.0, 100.0, 110.0, std::nullopt};
    for (double r : {0.002, 0.01, 0.3, 0.9}) {
        TriImage img(1, 1, ColorSpace::Xyz, {90.0 * r, 100.0 * r, 110.0 * r});
        TriImage lab_img = xyz_to_lab(img, white);
        CHECK(lab_img.at(0, 0, 1) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(std::abs(lab_img.at(0, 0, 2)) < 1e-10);
    }
}

TEST_CASE("lab inverse recovers XYZ above the knee") {
    ReferenceWhite white{95.0, 100.0, 108.0, std::nullopt};
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(0.05, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double X = white.Xn * dist(rng);
        const double Y = white.Yn * dist(rng);
        const double Z = white.Zn * dist(rng);
        TriImage img(1, 1, ColorSpace::Xyz, {X, Y, Z});
        TriImage lab_img = xyz_to_lab(img, white);
        auto xyz = test::lab_inverse({lab_img.at(0, 0, 0), lab_img.at(0, 0, 1),
                                      lab_img.at(0, 0, 2)}, white);
        CHECK(xyz[0] == doctest::Approx(X).epsilon(1e-9));
        CHECK(xyz[1] == doctest::Approx(Y).epsilon(1e-9));
        CHECK(xyz[2] == doctest::Approx(Z).epsilon(1e-9));
    }
}

TEST_CASE("projection kernels are linear on real-lifted spectra") {
    auto cmf = test::fixture_cmf();
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dist(0.0, 255.0);
    std::vector<double> s1(41), s2(41), lifted(41);
    for (int trial = 0; trial < 50; ++trial) {
        for (int i = 0; i < 41; ++i) {
            s1[i] = dist(rng);
            s2[i] = dist(rng);
        }
        const double alpha = dist(rng) / 64.0;
        for (int i = 0; i < 41; ++i)
            lifted[i] = alpha * s1[i] + s2[i];
        auto p1 = kern::project3<double>(s1, cmf);
        auto p2 = kern::project3<double>(s2, cmf);
        auto pl = kern::project3<double>(lifted, cmf);
        for (int c = 0; c < 3; ++c)
            CHECK(pl[c] == doctest::Approx(alpha * p1[c] + p2[c]).epsilon(1e-9));
    }
}
