#include "doctest.h"

#include "sewald/specfun.h"
#include "sewald/window.h"

#include <cmath>
#include <random>

using namespace sewald;

namespace {

doctest::Approx near(double v, double eps = 1e-13) {
    return doctest::Approx(v).epsilon(eps);
}

// 8-point Gauss-Legendre nodes and weights on [-1, 1].
constexpr double kGlNodes[4] = {0.18343464249564980494, 0.52553240991632898582,
                                0.79666647741362673959, 0.96028985649753623168};
constexpr double kGlWeights[4] = {0.36268378337836198297, 0.31370664587788728734,
                                  0.22238103445337447054, 0.10122853629037625915};

double window_transform_quadrature(const WindowSpec& spec, double k, int panels) {
    const double aw = spec.half_width();
    const double hp = aw / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double mid = (p + 0.5) * hp;
        for (int j = 0; j < 4; ++j) {
            for (double sgn : {-1.0, 1.0}) {
                const double r = mid + sgn * 0.5 * hp * kGlNodes[j];
                total += 0.5 * hp * kGlWeights[j] * kb_eval(spec, r) * std::cos(k * r);
            }
        }
    }
    return 2.0 * total;
}

double pkb_max_deviation(const WindowSpec& spec, int samples_per_cell = 400) {
    const PiecewisePolyWindow win = pkb_build(spec);
    const double aw = spec.half_width();
    double worst = 0.0;
    const int total = spec.P * samples_per_cell;
    for (int i = 0; i <= total; ++i) {
        const double r = -aw + 2.0 * aw * i / total;
        worst = std::max(worst, std::fabs(pkb_eval(win, r) - kb_eval(spec, r)));
    }
    return worst;
}

} // namespace

TEST_CASE("default shape parameters follow the window size") {
    auto s8 = WindowSpec::make(WindowKind::pkb, 8, 0.25);
    CHECK(s8.beta == near(20.0));
    CHECK(s8.nu == 6);
    CHECK(s8.half_width() == near(1.0));

    auto s16 = WindowSpec::make(WindowKind::pkb, 16, 0.25);
    CHECK(s16.beta == near(40.0));
    CHECK(s16.nu == 10);

    auto s10 = WindowSpec::make(WindowKind::tg, 10, 0.2);
    CHECK(s10.alpha == near(14.294246573833559235));

    CHECK_THROWS_AS(WindowSpec::make(WindowKind::kb, 7, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(WindowSpec::make(WindowKind::kb, 0, 0.25), std::invalid_argument);
    CHECK_THROWS_AS(WindowSpec::make(WindowKind::kb, 8, -1.0), std::invalid_argument);
}

TEST_CASE("window shapes at landmark points") {
    auto spec = WindowSpec::make(WindowKind::kb, 8, 0.25);
    const double aw = spec.half_width();

    CHECK(kb_eval(spec, 0.0) == near(1.0));
    CHECK(kb_eval(spec, aw) == near(2.29577462938945100104e-8));
    CHECK(kb_eval(spec, -aw) == near(2.29577462938945100104e-8));
    CHECK(kb_eval(spec, aw * 1.0000001) == 0.0);
    CHECK(kb_eval(spec, -2.0 * aw) == 0.0);

    auto tg = WindowSpec::make(WindowKind::tg, 10, 0.2);
    CHECK(tg_eval(tg, 0.0) == near(1.0));
    CHECK(tg_eval(tg, tg.half_width()) == near(std::exp(-tg.alpha)));
    CHECK(tg_eval(tg, 0.5 * tg.half_width()) == near(0.0280557509391802733111));
    CHECK(tg_eval(tg, 1.1 * tg.half_width()) == 0.0);
}

TEST_CASE("window transforms") {
    auto spec = WindowSpec::make(WindowKind::kb, 8, 0.25);

    SUBCASE("landmark values") {
        CHECK(kb_hat(spec, 0.0) == near(0.556914973342285922332));
        CHECK(kb_hat(spec, 10.0) == near(0.0441133160930842218999));
        CHECK(kb_hat(spec, 30.0) == near(-7.4164473114582936041e-10, 1e-11));
        CHECK(kb_hat(spec, spec.beta) == near(4.59154925877890200209e-8));
    }

    SUBCASE("continuity across the branch point") {
        const double k0 = spec.beta / spec.half_width();
        const double vc = kb_hat(spec, k0);
        for (double dk : {-1e-5, -1e-8, 1e-8, 1e-5}) {
            const double v = kb_hat(spec, k0 + dk);
            CHECK(std::fabs(v - vc) < 1e-4 * std::fabs(vc));
        }
    }

    SUBCASE("matches quadrature of the real-space window") {
        const double scale = kb_hat(spec, 0.0);
        for (double kaw : {0.0, 3.7, 10.0, 19.7, 20.0, 20.5, 30.0, 40.0}) {
            const double k = kaw / spec.half_width();
            CHECK(std::fabs(kb_hat(spec, k) - window_transform_quadrature(spec, k, 128)) <
                  1e-10 * scale);
        }
    }

    SUBCASE("untruncated Gaussian transform") {
        auto tg = WindowSpec::make(WindowKind::tg, 10, 0.2);
        CHECK(ug_hat(tg, 0.0) == near(0.468807230938495423096));
        CHECK(ug_hat(tg, 5.0) == near(0.302763752858098309567));
    }
}

TEST_CASE("piecewise polynomial window") {
    SUBCASE("tracks the exact window closely") {
        CHECK(pkb_max_deviation(WindowSpec::make(WindowKind::pkb, 10, 0.25)) < 1e-7);
        CHECK(pkb_max_deviation(WindowSpec::make(WindowKind::pkb, 16, 0.25)) < 1e-11);
    }

    SUBCASE("deviation decreases monotonically with the degree") {
        auto spec = WindowSpec::make(WindowKind::pkb, 10, 0.25);
        double prev = 1e300;
        for (int nu = 2; nu <= 10; ++nu) {
            spec.nu = nu;
            const double dev = pkb_max_deviation(spec, 200);
            CHECK(dev < prev);
            prev = dev;
        }
    }

    SUBCASE("interpolates the exact window at subinterval endpoints") {
        auto spec = WindowSpec::make(WindowKind::pkb, 8, 0.25);
        const PiecewisePolyWindow win = pkb_build(spec);
        for (int l = -4; l <= 4; ++l) {
            const double r = l * spec.h;
            CHECK(std::fabs(pkb_eval(win, r) - kb_eval(spec, r)) < 1e-13);
        }
    }

    SUBCASE("zero outside the support") {
        auto spec = WindowSpec::make(WindowKind::pkb, 8, 0.25);
        const PiecewisePolyWindow win = pkb_build(spec);
        CHECK(pkb_eval(win, spec.half_width() * 1.000001) == 0.0);
        CHECK(pkb_eval(win, -5.0) == 0.0);
    }
}

TEST_CASE("even symmetry of all window kinds") {
    std::mt19937 rng(20260816);
    std::uniform_real_distribution<double> uni(0.0, 1.1);
    const Window wkb(WindowSpec::make(WindowKind::kb, 8, 0.25));
    const Window wpkb(WindowSpec::make(WindowKind::pkb, 8, 0.25));
    const Window wtg(WindowSpec::make(WindowKind::tg, 8, 0.25));
    for (int i = 0; i < 50; ++i) {
        const double r = uni(rng);
        CHECK(wkb.eval1d(-r) == near(wkb.eval1d(r), 1e-15));
        CHECK(wpkb.eval1d(-r) == doctest::Approx(wpkb.eval1d(r)).epsilon(1e-11));
        CHECK(wtg.eval1d(-r) == near(wtg.eval1d(r), 1e-15));
    }
}

TEST_CASE("tensor-product evaluation") {
    const Window win(WindowSpec::make(WindowKind::pkb, 8, 0.25));
    CHECK(tensor_window_eval(win, {0.0, 0.0, 0.0}) == near(1.0, 1e-11));
    CHECK(tensor_window_eval(win, {0.3, 0.1, -0.2}) ==
          near(win.eval1d(0.3) * win.eval1d(0.1) * win.eval1d(-0.2)));
    CHECK(tensor_window_eval(win, {1.5, 0.0, 0.0}) == 0.0);
    CHECK(tensor_window_eval(win, {0.1, -1.2, 0.0}) == 0.0);
}

TEST_CASE("constructed window dispatches by kind") {
    auto spec = WindowSpec::make(WindowKind::kb, 8, 0.25);
    const Window wkb(spec);
    CHECK(wkb.eval1d(0.37) == near(kb_eval(spec, 0.37)));
    CHECK(wkb.hat1d(4.0) == near(kb_hat(spec, 4.0)));

    spec.kind = WindowKind::pkb;
    const Window wpkb(spec);
    const PiecewisePolyWindow table = pkb_build(spec);
    CHECK(wpkb.eval1d(0.37) == near(pkb_eval(table, 0.37)));
    CHECK(wpkb.hat1d(4.0) == near(kb_hat(spec, 4.0)));

    auto tg = WindowSpec::make(WindowKind::tg, 8, 0.25);
    const Window wtg(tg);
    CHECK(wtg.eval1d(0.37) == near(tg_eval(tg, 0.37)));
    CHECK(wtg.hat1d(4.0) == near(ug_hat(tg, 4.0)));

    CHECK(window_kind_from_name("pkb") == WindowKind::pkb);
    CHECK(window_kind_name(WindowKind::tg) == "tg");
    CHECK_THROWS_AS(window_kind_from_name("hann"), std::invalid_argument);
}
