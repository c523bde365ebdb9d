#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "microshell/error.hpp"
#include "microshell/walk.hpp"

using namespace microshell;

namespace {

const EnergySpectrum k058 = make_spectrum({0, 5, 8});
constexpr MeasureSpec kAmplitude{MeasureKind::AmplitudeCoordinate};
constexpr MeasureSpec kFlat{MeasureKind::FlatOccupation};

OccupationVector at(const EnergyShell& shell, double p1)
{
    const double free[] = {p1};
    return occupation_from_free(shell, free);
}

}  // namespace

TEST_CASE("walk_step keeps the state on the shell")
{
    const auto shell = make_shell(k058, 2);
    WalkConfig config;
    config.step_scale = 0.05;

    SUBCASE("proposals off the facet are rejected in place")
    {
        // At the upper edge roughly half of all proposals leave the interval.
        const auto edge = at(shell, 0.75);
        Rng rng(1);
        int rejected = 0;
        for (int i = 0; i < 2000; ++i) {
            const auto r = walk_step(shell, edge, kFlat, config, rng);
            CHECK(is_member(shell, r.state, 1e-9));
            if (!r.accepted) {
                ++rejected;
                CHECK(r.state == edge);
            } else {
                CHECK(r.state[0] <= 0.75);
            }
        }
        CHECK(rejected == doctest::Approx(1000).epsilon(0.1));
    }
    SUBCASE("state off the shell is refused")
    {
        Rng rng(1);
        CHECK_THROWS_AS(walk_step(shell, OccupationVector({1, 0, 0}), kFlat, config, rng), Error);
    }
    SUBCASE("degenerate shell is refused")
    {
        Rng rng(1);
        const auto corner = make_shell(k058, 0);
        try {
            walk_step(corner, OccupationVector({1, 0, 0}), kFlat, config, rng);
            FAIL("expected degenerate shell");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::DegenerateShell);
        }
    }
}

TEST_CASE("ShellWalker acceptance")
{
    const auto shell = make_shell(k058, 2);

    SUBCASE("flat measure accepts exactly the feasible proposals")
    {
        ShellWalker w(shell, kFlat, 0.05, vertex_centroid(shell));
        Rng rng(5);
        for (int i = 0; i < 20000; ++i) {
            const bool accepted = w.step(rng);
            CHECK(accepted == w.last_proposal_feasible());
        }
    }
    SUBCASE("amplitude measure never accepts an infeasible proposal")
    {
        ShellWalker w(shell, kAmplitude, 0.05, vertex_centroid(shell));
        Rng rng(6);
        int feasible = 0;
        int accepted = 0;
        for (int i = 0; i < 20000; ++i) {
            const bool a = w.step(rng);
            if (a) CHECK(w.last_proposal_feasible());
            feasible += w.last_proposal_feasible();
            accepted += a;
        }
        CHECK(accepted <= feasible);
        CHECK(accepted > 0.9 * feasible);
    }
    SUBCASE("proposal increments are symmetric and bounded")
    {
        // A wide shell keeps the walker away from facets over a short run.
        const auto wide = make_shell(make_spectrum({0, 1, 2, 3, 4, 5}), 2.5);
        ShellWalker w(wide, kFlat, 0.01, vertex_centroid(wide));
        Rng rng(7);
        std::vector<double> sum(wide.free_dimension(), 0.0);
        int moves = 0;
        for (int i = 0; i < 20000; ++i) {
            const std::vector<double> before(w.free().begin(), w.free().end());
            if (!w.step(rng)) continue;
            ++moves;
            for (std::size_t k = 0; k < before.size(); ++k) {
                const double d = w.free()[k] - before[k];
                CHECK(std::abs(d) <= 0.01);
                sum[k] += d;
            }
        }
        // Uniform increments on [-h, h] have sd h / sqrt(3).
        for (double s : sum) CHECK(std::abs(s / moves) < 4 * 0.01 / std::sqrt(3.0 * moves));
    }
}

TEST_CASE("acceptance ratio")
{
    const auto shell = make_shell(k058, 2);
    WalkConfig config;
    config.steps = 1'000'000;
    config.record_every = 10;
    config.seed = 3;

    SUBCASE("flat walk matches the interval overshoot probability")
    {
        // Stationary uniform on an interval of width L with cube half-width h:
        // a proposal leaves with probability h / (2L) = 1/6.
        config.step_scale = 0.05;
        const auto stats = time_average(shell, kFlat, config);
        CHECK(stats.acceptance_ratio == doctest::Approx(5.0 / 6.0).epsilon(0.005));
    }
    SUBCASE("flat walk matches a brute-force proposal audit")
    {
        config.step_scale = 0.05;
        config.steps = 1'000'000;
        std::vector<double> states;
        const auto stats = time_average(shell, kFlat, config, [&](std::uint64_t, const OccupationVector& p) {
            states.push_back(p[0]);
        });
        // One proposal from each equilibrated state, drawn independently of the walk.
        Rng audit(101);
        std::uniform_real_distribution<double> step(-0.05, 0.05);
        int feasible = 0;
        for (double p1 : states) {
            const double free[] = {p1 + step(audit)};
            try {
                occupation_from_free(shell, free);
                ++feasible;
            } catch (const Error&) {
            }
        }
        REQUIRE(states.size() == 100'000);
        const double fraction = feasible / 1e5;
        // Binomial se at 1e5 proposals is about 1.2e-3.
        CHECK(std::abs(stats.acceptance_ratio - fraction) < 4e-3);
    }
    SUBCASE("acceptance falls as the step grows")
    {
        config.steps = 100'000;
        double previous = 1.0;
        for (double h : {0.001, 0.01, 0.05, 0.1, 0.5}) {
            config.step_scale = h;
            const double a = time_average(shell, kAmplitude, config).acceptance_ratio;
            CHECK(a < previous);
            previous = a;
        }
    }
}

TEST_CASE("time averages converge to the ensemble mean")
{
    const auto shell = make_shell(k058, 2);
    WalkConfig config;
    config.steps = 1'000'000;
    config.seed = 11;

    SUBCASE("amplitude")
    {
        const auto stats = time_average(shell, kAmplitude, config);
        const auto exact = exact_mean_3(shell);
        CHECK(stats.recorded_points == 100'000);
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(stats.std_error[k] > 0.0);
            CHECK(std::abs(stats.time_mean[k] - exact[k]) < 3 * stats.std_error[k]);
        }
        CHECK(std::abs(stats.time_mean[0] - 0.6736) < 0.002);
    }
    SUBCASE("flat")
    {
        const auto stats = time_average(shell, kFlat, config);
        CHECK(std::abs(stats.time_mean[0] - 0.675) < 3 * stats.std_error[0]);
    }
    SUBCASE("same seed, same trajectory")
    {
        config.steps = 50'000;
        std::vector<OccupationVector> a, b;
        const auto sa = time_average(shell, kAmplitude, config, [&](std::uint64_t, const OccupationVector& p) { a.push_back(p); });
        const auto sb = time_average(shell, kAmplitude, config, [&](std::uint64_t, const OccupationVector& p) { b.push_back(p); });
        CHECK(a == b);
        CHECK(sa.time_mean == sb.time_mean);
    }
}

TEST_CASE("property: every step of a long walk is a member")
{
    for (std::size_t n : {3u, 5u, 8u}) {
        std::vector<double> levels;
        for (std::size_t k = 0; k < n; ++k) levels.push_back(static_cast<double>(k * k));
        const auto spectrum = make_spectrum(levels);
        const auto shell = make_shell(spectrum, 0.3 * spectrum.highest());
        WalkConfig config;
        config.steps = 20'000;
        config.burn_in = 0;
        config.record_every = 1;
        config.step_scale = 0.1;
        std::uint64_t seen = 0;
        bool all_members = true;
        time_average(shell, kAmplitude, config, [&](std::uint64_t step, const OccupationVector& p) {
            ++seen;
            if (step != seen || !is_member(shell, p, 1e-9)) all_members = false;
        });
        CHECK(seen == 20'000);
        CHECK(all_members);
    }
}

TEST_CASE("ergodicity_check")
{
    WalkConfig walk;
    walk.steps = 1'000'000;
    SamplerConfig sampler;
    for (double energy : {2.0, 3.0}) {
        const auto shell = make_shell(k058, energy);
        const auto r = ergodicity_check(shell, kAmplitude, walk, sampler);
        CAPTURE(energy);
        CHECK(r.pass);
        CHECK(r.ensemble.exact);
        CHECK(r.max_abs_diff < 3 * *std::max_element(r.combined_std_error.begin(), r.combined_std_error.end()));
        CHECK(r.discrepancy.max_rel_diff < 0.02);
    }
    CHECK_THROWS_AS(ergodicity_check(make_shell(k058, 8), kAmplitude, walk, sampler), Error);
}

TEST_CASE("WalkConfig validation")
{
    const auto shell = make_shell(k058, 2);
    auto expect_config_error = [&](WalkConfig c) {
        try {
            time_average(shell, kFlat, c);
            FAIL("expected config error");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Config);
        }
    };
    WalkConfig c;
    c.steps = 0;
    expect_config_error(c);
    c = WalkConfig{};
    c.step_scale = 0.0;
    expect_config_error(c);
    c = WalkConfig{};
    c.step_scale = -1.0;
    expect_config_error(c);
    c = WalkConfig{};
    c.record_every = 0;
    expect_config_error(c);
    c = WalkConfig{};
    c.steps = 5;
    c.record_every = 10;
    expect_config_error(c);
}
