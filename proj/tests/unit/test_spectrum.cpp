#include <doctest.h>

#include <algorithm>
#include <random>
#include <vector>

#include "../support/oracles.hpp"
#include "microshell/error.hpp"
#include "microshell/spectrum.hpp"

using namespace microshell;

namespace {

ErrorKind kind_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected microshell::Error");
    return ErrorKind::InvalidInput;
}

const EnergySpectrum k058 = make_spectrum({0, 5, 8});

std::vector<double> free_block(const OccupationVector& p)
{
    return {p.values().begin(), p.values().end() - 2};
}

// Random strictly increasing spectrum with N levels in roughly [-5, 15].
EnergySpectrum random_levels(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> gap(0.05, 3.0);
    std::uniform_real_distribution<double> start(-5.0, 5.0);
    std::vector<double> e{start(rng)};
    while (e.size() < n) e.push_back(e.back() + gap(rng));
    return make_spectrum(e);
}

}  // namespace

TEST_CASE("make_spectrum validates its levels")
{
    CHECK(make_spectrum({0, 5, 8}).size() == 3);
    CHECK(kind_of([] { make_spectrum({0, 0, 5}); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([] { make_spectrum({3}); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([] { make_spectrum({0, 2, 1}); }) == ErrorKind::InvalidInput);
    CHECK(kind_of([] { make_spectrum({0, std::numeric_limits<double>::infinity()}); }) ==
          ErrorKind::InvalidInput);
    CHECK(kind_of([] { make_spectrum({0, std::nan("")}); }) == ErrorKind::InvalidInput);
}

TEST_CASE("energy_bounds")
{
    CHECK(energy_bounds(k058) == std::pair{0.0, 8.0});
    CHECK(energy_bounds(make_spectrum({-2, 2})) == std::pair{-2.0, 2.0});
    CHECK(energy_bounds(make_spectrum({0, 1, 2, 3})) == std::pair{0.0, 3.0});
}

TEST_CASE("make_shell flags boundary energies and rejects outside ones")
{
    CHECK_FALSE(make_shell(k058, 2).degenerate());
    CHECK(make_shell(k058, 0).degenerate());
    CHECK(make_shell(k058, 8).degenerate());
    CHECK(kind_of([] { make_shell(k058, 9); }) == ErrorKind::InfeasibleEnergy);
    CHECK(kind_of([] { make_shell(k058, -0.1); }) == ErrorKind::InfeasibleEnergy);
}

TEST_CASE("occupation_from_free completes the dependent pair")
{
    const auto shell = make_shell(k058, 2);

    SUBCASE("near the published mean point")
    {
        const double free[] = {0.673604};
        const auto p = occupation_from_free(shell, free);
        CHECK(p[0] == 0.673604);
        CHECK(p[1] == doctest::Approx(0.203722).epsilon(1e-5));
        CHECK(p[2] == doctest::Approx(0.122674).epsilon(1e-5));
    }
    SUBCASE("interval endpoint zeroes p_2")
    {
        const double free[] = {0.75};
        const auto p = occupation_from_free(shell, free);
        CHECK(p[0] == 0.75);
        CHECK(p[1] == doctest::Approx(0.0));
        CHECK(p[2] == doctest::Approx(0.25));
    }
    SUBCASE("below the interval")
    {
        // Direct solve at p_1 = 0.5 gives p_3 = (2 - 5 * 0.5) / 3 < 0.
        const auto [p2, p3] = oracle::solve_pair(5, 8, 0.5, 2.0);
        CHECK(p3 < 0.0);
        CHECK(p2 > 0.0);
        const double free[] = {0.5};
        CHECK(kind_of([&] { occupation_from_free(shell, free); }) == ErrorKind::InfeasiblePoint);
    }
    SUBCASE("wrong free length")
    {
        const double free[] = {0.6, 0.1};
        CHECK(kind_of([&] { occupation_from_free(shell, free); }) == ErrorKind::LengthMismatch);
    }
    SUBCASE("free coordinate outside [0, 1]")
    {
        const double free[] = {-0.1};
        CHECK(kind_of([&] { occupation_from_free(shell, free); }) == ErrorKind::InfeasiblePoint);
    }
}

TEST_CASE("feasible_interval_3")
{
    SUBCASE("E = 2 gives (3/5, 3/4)")
    {
        const auto iv = feasible_interval_3(make_shell(k058, 2));
        CHECK(iv.lo == doctest::Approx(0.6).epsilon(1e-14));
        CHECK(iv.hi == doctest::Approx(0.75).epsilon(1e-14));
    }
    SUBCASE("E = 3 against a brute-force scan")
    {
        const auto [lo, hi] = oracle::scan_interval_3({0, 5, 8}, 3.0, 80001);
        CHECK(lo == doctest::Approx(0.4).epsilon(1e-4));
        CHECK(hi == doctest::Approx(0.625).epsilon(1e-4));
        const auto iv = feasible_interval_3(make_shell(k058, 3));
        CHECK(iv.lo == doctest::Approx(0.4).epsilon(1e-14));
        CHECK(iv.hi == doctest::Approx(0.625).epsilon(1e-14));
    }
    SUBCASE("boundary energy collapses the interval")
    {
        const auto iv = feasible_interval_3(make_shell(k058, 0));
        CHECK(iv.lo == 1.0);
        CHECK(iv.hi == 1.0);
    }
    SUBCASE("energy equal to the middle level")
    {
        // p_1 may go to zero (all weight on E_2 = 5) and up to 3/8 (mix of E_1, E_3).
        const auto iv = feasible_interval_3(make_shell(k058, 5));
        CHECK(iv.lo == doctest::Approx(0.0));
        CHECK(iv.hi == doctest::Approx(3.0 / 8.0));
    }
    SUBCASE("requires three levels")
    {
        CHECK(kind_of([] { feasible_interval_3(make_shell(make_spectrum({0, 1, 2, 3}), 1)); }) ==
              ErrorKind::InvalidInput);
    }
}

TEST_CASE("shell_vertices")
{
    SUBCASE("E = 2: pairs (1,2) and (1,3) only")
    {
        const auto v = shell_vertices(make_shell(k058, 2));
        REQUIRE(v.size() == 2);
        CHECK(v[0][0] == doctest::Approx(0.6));
        CHECK(v[0][1] == doctest::Approx(0.4));
        CHECK(v[0][2] == 0.0);
        CHECK(v[1][0] == doctest::Approx(0.75));
        CHECK(v[1][1] == 0.0);
        CHECK(v[1][2] == doctest::Approx(0.25));
    }
    SUBCASE("degenerate shell has one vertex")
    {
        const auto v = shell_vertices(make_shell(k058, 0));
        REQUIRE(v.size() == 1);
        CHECK(v[0] == OccupationVector({1, 0, 0}));
    }
    SUBCASE("two-level shell is a point")
    {
        const auto v = shell_vertices(make_shell(make_spectrum({0, 1}), 0.5));
        REQUIRE(v.size() == 1);
        CHECK(v[0][0] == doctest::Approx(0.5));
        CHECK(v[0][1] == doctest::Approx(0.5));
    }
}

TEST_CASE("is_member")
{
    const auto shell = make_shell(k058, 2);
    CHECK(is_member(shell, OccupationVector({0.75, 0, 0.25}), 1e-9));
    CHECK_FALSE(is_member(shell, OccupationVector({1, 0, 0}), 1e-9));
    // Published point carries six decimals, so its energy is off by ~2e-6.
    CHECK(is_member(shell, OccupationVector({0.673604, 0.203722, 0.122674}), 1e-5));
    CHECK_FALSE(is_member(shell, OccupationVector({0.5, 0.5}), 1e-9));
    CHECK_FALSE(is_member(shell, OccupationVector({0.8, -0.05, 0.25}), 1e-9));
}

TEST_CASE("property: generated points are shell members")
{
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + trial % 6;
        const auto spectrum = random_levels(rng, n);
        const double q = std::uniform_real_distribution<double>(0.01, 0.99)(rng);
        const auto shell = make_shell(spectrum, spectrum.lowest() + q * (spectrum.highest() - spectrum.lowest()));

        const auto vertices = shell_vertices(shell);
        REQUIRE_FALSE(vertices.empty());
        for (const auto& v : vertices) CHECK(is_member(shell, v, 1e-9));

        // Random convex combination of vertices is inside; its free block must
        // complete back to the same point.
        std::vector<double> w(vertices.size());
        double wsum = 0.0;
        for (double& x : w) wsum += (x = std::exponential_distribution<double>(1.0)(rng));
        std::vector<double> mix(n, 0.0);
        for (std::size_t i = 0; i < vertices.size(); ++i)
            for (std::size_t k = 0; k < n; ++k) mix[k] += w[i] / wsum * vertices[i][k];
        const auto p = occupation_from_free(shell, std::vector<double>(mix.begin(), mix.end() - 2));
        CHECK(is_member(shell, p, 1e-9));
        for (std::size_t k = 0; k < n; ++k) CHECK(p[k] == doctest::Approx(mix[k]).epsilon(1e-9));
    }
}

TEST_CASE("property: occupation_from_free succeeds exactly on the feasible interval")
{
    for (double energy : {0.5, 2.0, 3.0, 4.5, 5.0, 7.9}) {
        const auto shell = make_shell(k058, energy);
        const auto iv = feasible_interval_3(shell);
        for (int i = 0; i <= 20000; ++i) {
            const double x = i / 20000.0;
            const double free[] = {x};
            bool ok = true;
            OccupationVector p;
            try {
                p = occupation_from_free(shell, free);
            } catch (const Error&) {
                ok = false;
            }
            if (ok) CHECK(is_member(shell, p, 1e-9));
            if (x >= iv.lo && x <= iv.hi)
                CHECK(ok);
            else if (x < iv.lo - 1e-9 || x > iv.hi + 1e-9)
                CHECK_FALSE(ok);
        }
    }
}

TEST_CASE("property: shift and scale invariance of p-space geometry")
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 3 + trial % 4;
        const auto base = random_levels(rng, n);
        const double energy = base.lowest() + 0.3 * (base.highest() - base.lowest());
        const double shift = std::uniform_real_distribution<double>(-50, 50)(rng);
        const double scale = std::uniform_real_distribution<double>(0.1, 20)(rng);

        std::vector<double> moved;
        for (double e : base.levels()) moved.push_back(scale * (e + shift));
        const auto a = make_shell(base, energy);
        const auto b = make_shell(make_spectrum(moved), scale * (energy + shift));

        const auto va = shell_vertices(a);
        const auto vb = shell_vertices(b);
        REQUIRE(va.size() == vb.size());
        for (std::size_t i = 0; i < va.size(); ++i)
            for (std::size_t k = 0; k < n; ++k) CHECK(va[i][k] == doctest::Approx(vb[i][k]).epsilon(1e-9));

        const auto centre = vertex_centroid(a);
        const auto pa = occupation_from_free(a, free_block(centre));
        const auto pb = occupation_from_free(b, free_block(centre));
        for (std::size_t k = 0; k < n; ++k) CHECK(pa[k] == doctest::Approx(pb[k]).epsilon(1e-9));

        if (n == 3) {
            const auto ia = feasible_interval_3(a);
            const auto ib = feasible_interval_3(b);
            CHECK(ia.lo == doctest::Approx(ib.lo).epsilon(1e-9));
            CHECK(ia.hi == doctest::Approx(ib.hi).epsilon(1e-9));
        }
    }
}

TEST_CASE("property: two-level shell is the single point p_1 = (E_2 - E)/(E_2 - E_1)")
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 100; ++trial) {
        const auto s = random_levels(rng, 2);
        const double e = std::uniform_real_distribution<double>(s.lowest(), s.highest())(rng);
        const auto shell = make_shell(s, e);
        const auto p = occupation_from_free(shell, {});
        CHECK(p[0] == doctest::Approx((s[1] - e) / (s[1] - s[0])));
        const auto v = shell_vertices(shell);
        REQUIRE(v.size() == 1);
        CHECK(v[0][0] == doctest::Approx(p[0]));
    }
}
