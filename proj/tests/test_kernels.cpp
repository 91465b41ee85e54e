#include "doctest.h"

#include "sewald/kernels.h"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace sewald;

namespace {

double rel_diff(double a, double b) {
    const double scale = std::max({std::fabs(a), std::fabs(b), 1e-300});
    return std::fabs(a - b) / scale;
}

std::mt19937 rng(20260816);

Vec3 random_vec(double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    return {d(rng), d(rng), d(rng)};
}

} // namespace

TEST_CASE("bare kernel spot values") {
    const auto S = bare_kernel(Kernel::stokeslet, {1.0, 0.0, 0.0});
    CHECK(S.m[0][0] == doctest::Approx(2.0));
    CHECK(S.m[1][1] == doctest::Approx(1.0));
    CHECK(S.m[2][2] == doctest::Approx(1.0));
    CHECK(S.m[0][1] == doctest::Approx(0.0));

    const auto W = bare_kernel(Kernel::rotlet, {0.0, 0.0, 2.0});
    CHECK(W.m[0][1] == doctest::Approx(0.25));
    CHECK(W.m[1][0] == doctest::Approx(-0.25));
    CHECK(W.m[0][0] == 0.0);
    CHECK(W.m[0][2] == 0.0);
    CHECK(W.m[2][1] == 0.0);

    const auto T = bare_kernel(Kernel::stresslet, {0.0, 0.0, 1.0});
    CHECK(T.t[2][2][2] == doctest::Approx(-6.0));
    CHECK(T.t[0][0][0] == 0.0);
    CHECK(T.t[0][1][2] == 0.0);
    CHECK(T.t[2][2][0] == 0.0);
}

TEST_CASE("bare kernel symmetries") {
    for (int trial = 0; trial < 20; ++trial) {
        const Vec3 r = random_vec(-2.0, 2.0);
        if (norm2(r) < 1e-6) continue;
        const auto S = bare_kernel(Kernel::stokeslet, r);
        const auto W = bare_kernel(Kernel::rotlet, r);
        const auto T = bare_kernel(Kernel::stresslet, r);
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) {
                CHECK(S.m[j][l] == doctest::Approx(S.m[l][j]).epsilon(1e-14));
                CHECK(W.m[j][l] == doctest::Approx(-W.m[l][j]).epsilon(1e-14));
                for (int m = 0; m < 3; ++m) {
                    CHECK(T.t[j][l][m] == doctest::Approx(T.t[l][j][m]).epsilon(1e-14));
                    CHECK(T.t[j][l][m] == doctest::Approx(T.t[j][m][l]).epsilon(1e-14));
                }
            }
    }
    CHECK_THROWS_AS(bare_kernel(Kernel::stokeslet, {0.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("screening factors") {
    CHECK(screening_hat(Screening::ewald, {0, 0, 0}, 1.7) == doctest::Approx(1.0));
    CHECK(screening_hat(Screening::hasimoto, {0, 0, 0}, 1.7) == doctest::Approx(1.0));
    const double xi = 0.8;
    const Vec3 k{2.0 * xi, 0.0, 0.0};
    CHECK(screening_hat(Screening::hasimoto, k, xi) ==
          doctest::Approx(2.0 / std::exp(1.0)).epsilon(1e-14));
    const Vec3 k20{0.0, 20.0 * xi, 0.0};
    CHECK(screening_hat(Screening::ewald, k20, xi) /
              screening_hat(Screening::hasimoto, k20, xi) ==
          doctest::Approx(1.0 / 101.0).epsilon(1e-12));
}

TEST_CASE("real-space kernels approach bare kernels as the split parameter vanishes") {
    const Vec3 r{1.0, 0.0, 0.0};
    const auto S = realspace_kernel(Kernel::stokeslet, r, 1e-8);
    CHECK(S.m[0][0] == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(S.m[1][1] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(S.m[2][2] == doctest::Approx(1.0).epsilon(1e-6));

    for (int trial = 0; trial < 10; ++trial) {
        const Vec3 x = random_vec(0.3, 1.5);
        const double xi = 1e-4;
        for (Kernel kind : {Kernel::stokeslet, Kernel::rotlet, Kernel::stresslet}) {
            const auto near = realspace_kernel(kind, x, xi);
            const auto bare = bare_kernel(kind, x);
            const double bound = 10.0 * xi * std::sqrt(norm2(x));
            if (kind == Kernel::stresslet) {
                for (int j = 0; j < 3; ++j)
                    for (int l = 0; l < 3; ++l)
                        for (int m = 0; m < 3; ++m)
                            if (std::fabs(bare.t[j][l][m]) > 1e-10)
                                CHECK(rel_diff(near.t[j][l][m], bare.t[j][l][m]) < bound);
            } else {
                for (int j = 0; j < 3; ++j)
                    for (int l = 0; l < 3; ++l)
                        if (std::fabs(bare.m[j][l]) > 1e-10)
                            CHECK(rel_diff(near.m[j][l], bare.m[j][l]) < bound);
            }
        }
    }
}

TEST_CASE("real-space kernels decay exponentially") {
    const auto W = realspace_kernel(Kernel::rotlet, {0.0, 0.0, 2.0}, 3.0);
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l) CHECK(std::fabs(W.m[j][l]) < 1e-14);
}

TEST_CASE("real-space stresslet frozen entries") {
    const double s = 1.0 / std::sqrt(2.0);
    const auto T = realspace_kernel(Kernel::stresslet, {s, s, 0.0}, 1.0);
    CHECK(T.t[0][0][0] == doctest::Approx(-0.0401566815940904048).epsilon(1e-13));
    CHECK(T.t[0][0][1] == doctest::Approx(-1.21425798698400960398).epsilon(1e-13));
    CHECK(T.t[0][1][2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(T.t[2][2][0] == doctest::Approx(0.58705065269495959958).epsilon(1e-13));
    CHECK(T.t[1][1][1] == doctest::Approx(-0.0401566815940904048).epsilon(1e-13));
    CHECK(T.t[2][2][2] == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(T.t[0][2][2] == doctest::Approx(0.58705065269495959958).epsilon(1e-13));
}

TEST_CASE("real-space kernel symmetries") {
    for (int trial = 0; trial < 10; ++trial) {
        const Vec3 r = random_vec(0.1, 1.0);
        const double xi = 0.5 + trial * 0.3;
        const auto S = realspace_kernel(Kernel::stokeslet, r, xi);
        const auto W = realspace_kernel(Kernel::rotlet, r, xi);
        const auto T = realspace_kernel(Kernel::stresslet, r, xi);
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) {
                CHECK(S.m[j][l] == doctest::Approx(S.m[l][j]).epsilon(1e-14));
                CHECK(W.m[j][l] == doctest::Approx(-W.m[l][j]).epsilon(1e-14));
                for (int m = 0; m < 3; ++m) {
                    CHECK(T.t[j][l][m] == doctest::Approx(T.t[l][j][m]).epsilon(1e-14));
                    CHECK(T.t[j][l][m] == doctest::Approx(T.t[j][m][l]).epsilon(1e-14));
                }
            }
    }
}

TEST_CASE("differential operator spot values") {
    const auto S = diffop_hat(Kernel::stokeslet, {1.0, 0.0, 0.0});
    CHECK(S.m[0][0] == cplx(0.0, 0.0));
    CHECK(S.m[1][1] == cplx(-1.0, 0.0));
    CHECK(S.m[2][2] == cplx(-1.0, 0.0));
    CHECK(S.m[0][1] == cplx(0.0, 0.0));

    const auto W = diffop_hat(Kernel::rotlet, {0.0, 0.0, 1.0});
    CHECK(W.m[0][1] == cplx(0.0, -1.0));
    CHECK(W.m[1][0] == cplx(0.0, 1.0));

    const auto T = diffop_hat(Kernel::stresslet, {1.0, 2.0, 3.0});
    for (int j = 0; j < 3; ++j)
        for (int l = 0; l < 3; ++l)
            for (int m = 0; m < 3; ++m) {
                CHECK(T.t[j][l][m] == T.t[l][j][m]);
                CHECK(T.t[j][l][m] == T.t[j][m][l]);
            }
}

TEST_CASE("long-range kernel spot values") {
    const auto W = fourier_kernel_hat(Kernel::rotlet, {1.0, 0.0, 0.0}, 1.0);
    const double expect = 4.0 * M_PI * std::exp(-0.25);
    CHECK(W.m[1][2].imag() == doctest::Approx(-expect).epsilon(1e-14));
    CHECK(W.m[2][1].imag() == doctest::Approx(expect).epsilon(1e-14));
    CHECK(W.m[1][2].real() == 0.0);

    const auto T = fourier_kernel_hat(Kernel::stresslet, {0.0, 0.0, 1.0}, 1e8);
    CHECK(T.t[2][2][2].imag() == doctest::Approx(8.0 * M_PI).epsilon(1e-12));
    CHECK(T.t[2][2][2].real() == 0.0);

    CHECK_THROWS_AS(fourier_kernel_hat(Kernel::stokeslet, {0.0, 0.0, 0.0}, 1.0),
                    std::domain_error);
}

TEST_CASE("long-range kernels are divergence free") {
    for (int trial = 0; trial < 100; ++trial) {
        const Vec3 k = random_vec(-5.0, 5.0);
        if (norm2(k) < 1e-4) continue;
        std::uniform_real_distribution<double> dxi(0.5, 4.0);
        const double xi = dxi(rng);
        const auto S = fourier_kernel_hat(Kernel::stokeslet, k, xi);
        const auto T = fourier_kernel_hat(Kernel::stresslet, k, xi);
        double smax = 0.0, tmax = 0.0;
        for (int j = 0; j < 3; ++j)
            for (int l = 0; l < 3; ++l) {
                smax = std::max(smax, std::abs(S.m[j][l]));
                for (int m = 0; m < 3; ++m) tmax = std::max(tmax, std::abs(T.t[j][l][m]));
            }
        // The stresslet symbol carries a constant diagonal piece (a point
        // pressure source); contracting k into it leaves exactly that part.
        const cplx trace_part = cplx(0.0, 8.0 * M_PI) * screening_hat(Screening::hasimoto, k, xi);
        for (int l = 0; l < 3; ++l) {
            cplx div_s = 0.0;
            for (int j = 0; j < 3; ++j) div_s += k[j] * S.m[j][l];
            CHECK(std::abs(div_s) <= 1e-13 * std::max(smax, 1e-300) * norm2(k));
            for (int m = 0; m < 3; ++m) {
                cplx div_t = 0.0;
                for (int j = 0; j < 3; ++j) div_t += k[j] * T.t[j][l][m];
                const cplx expect = (l == m) ? trace_part : cplx(0.0, 0.0);
                CHECK(std::abs(div_t - expect) <=
                      1e-12 * std::max(tmax, 1e-300) * std::max(norm2(k), 1.0));
            }
        }
    }
}

TEST_CASE("long-range kernel equals operator times scalar kernel times screening") {
    for (int trial = 0; trial < 25; ++trial) {
        const Vec3 k = random_vec(-4.0, 4.0);
        const double k2 = norm2(k);
        if (k2 < 1e-4) continue;
        const double xi = 1.3;
        for (Kernel kind : {Kernel::stokeslet, Kernel::rotlet, Kernel::stresslet}) {
            const Screening sk = screening_of(kind);
            const double base = sk == Screening::hasimoto ? -8.0 * M_PI / (k2 * k2)
                                                          : 4.0 * M_PI / k2;
            const cplx scale = base * screening_hat(sk, k, xi);
            const auto full = fourier_kernel_hat(kind, k, xi);
            const auto op = diffop_hat(kind, k);
            if (full.rank == 2) {
                for (int j = 0; j < 3; ++j)
                    for (int l = 0; l < 3; ++l)
                        CHECK(std::abs(full.m[j][l] - scale * op.m[j][l]) <=
                              1e-15 * std::max(std::abs(full.m[j][l]), 1.0));
            } else {
                for (int j = 0; j < 3; ++j)
                    for (int l = 0; l < 3; ++l)
                        for (int m = 0; m < 3; ++m)
                            CHECK(std::abs(full.t[j][l][m] - scale * op.t[j][l][m]) <=
                                  1e-15 * std::max(std::abs(full.t[j][l][m]), 1.0));
            }
        }
    }
}

TEST_CASE("self interaction") {
    const double xi = std::sqrt(M_PI) / 4.0;
    const Vec3 u = self_term(Kernel::stokeslet, xi, {1.0, 2.0, 3.0});
    CHECK(u[0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(u[1] == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(u[2] == doctest::Approx(-3.0).epsilon(1e-14));
    for (Kernel kind : {Kernel::rotlet, Kernel::stresslet}) {
        const Vec3 z = self_term(kind, 2.0, {4.0, 5.0, 6.0});
        CHECK(z[0] == 0.0);
        CHECK(z[1] == 0.0);
        CHECK(z[2] == 0.0);
    }
}

TEST_CASE("fully periodic stresslet mean flow") {
    SourceSystem sys;
    sys.kind = Kernel::stresslet;
    sys.d = 3;

    SUBCASE("single source at the origin") {
        sys.x = {{0.0, 0.0, 0.0}};
        sys.f = {{1.0, 0.0, 0.0}};
        sys.nu = {{1.0, 0.0, 0.0}};
        TargetSet t;
        t.x = {{1.0, 0.0, 0.0}};
        const auto u = stresslet_zero_mode_3p(t, sys);
        CHECK(u[0][0] == doctest::Approx(-8.0 * M_PI).epsilon(1e-14));
        CHECK(u[0][1] == 0.0);
        CHECK(u[0][2] == 0.0);
    }

    SUBCASE("balanced system gives zero field") {
        // Opposite q.nu at the same position: both weighted sums vanish.
        sys.x = {{0.25, 0.5, 0.5}, {0.25, 0.5, 0.5}};
        sys.f = {{1.0, 1.0, 0.0}, {1.0, 1.0, 0.0}};
        sys.nu = {{1.0, 0.0, 0.0}, {-1.0, 0.0, 0.0}};
        TargetSet t;
        t.x = {{0.9, 0.9, 0.9}, {0.1, 0.2, 0.3}};
        const auto u = stresslet_zero_mode_3p(t, sys);
        for (const Vec3& v : u)
            for (double c : v) CHECK(c == doctest::Approx(0.0).scale(1.0).epsilon(1e-14));
    }

    SUBCASE("matches the direct sum") {
        std::uniform_real_distribution<double> d01(0.0, 1.0);
        sys.cell.L = {1.5, 1.0, 2.0};
        for (int n = 0; n < 7; ++n) {
            sys.x.push_back({1.5 * d01(rng), d01(rng), 2.0 * d01(rng)});
            sys.f.push_back(random_vec(-1.0, 1.0));
            sys.nu.push_back(random_vec(-1.0, 1.0));
        }
        TargetSet t;
        for (int m = 0; m < 5; ++m) t.x.push_back({1.5 * d01(rng), d01(rng), 2.0 * d01(rng)});
        const auto fast = stresslet_zero_mode_3p(t, sys);
        const double scale = -8.0 * M_PI / sys.cell.volume();
        for (std::size_t m = 0; m < t.x.size(); ++m) {
            Vec3 direct{};
            for (std::size_t n = 0; n < sys.size(); ++n)
                direct += (scale * dot(sys.f[n], sys.nu[n])) * (t.x[m] - sys.x[n]);
            for (int c = 0; c < 3; ++c)
                CHECK(fast[m][c] == doctest::Approx(direct[c]).epsilon(1e-12));
        }
    }
}

TEST_CASE("tensor application helpers") {
    const Vec3 r{0.4, -0.7, 1.1};
    const auto S = bare_kernel(Kernel::stokeslet, r);
    const Vec3 f{1.0, -2.0, 0.5};
    const Vec3 u = apply(S, f);
    for (int j = 0; j < 3; ++j) {
        double expect = 0.0;
        for (int l = 0; l < 3; ++l) expect += S.m[j][l] * f[l];
        CHECK(u[j] == doctest::Approx(expect));
    }
    const auto T = bare_kernel(Kernel::stresslet, r);
    const Vec3 q{0.3, 0.6, -0.2}, nu{1.0, 0.0, 1.0};
    const Vec3 v = apply(T, q, nu);
    for (int j = 0; j < 3; ++j) {
        double expect = 0.0;
        for (int l = 0; l < 3; ++l)
            for (int m = 0; m < 3; ++m) expect += T.t[j][l][m] * q[l] * nu[m];
        CHECK(v[j] == doctest::Approx(expect));
    }
}
