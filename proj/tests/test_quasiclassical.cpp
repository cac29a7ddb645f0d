#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oscar/errors.hpp"
#include "oscar/quasiclassical.hpp"

using namespace oscar;
constexpr double pi = std::numbers::pi;

TEST_CASE("frequency shift on the experimental set") {
    const ModelParams m = to_model(PhysicalParams{});
    const double dw0 = delta_omega0(m);
    CHECK(dw0 == doctest::Approx(4.7e-7).epsilon(0.02));
    CHECK(dw0 == doctest::Approx(4.6824079722589294e-07).epsilon(1e-12));  // frozen
}

TEST_CASE("frequency shift on the simulation set") {
    const ModelParams m{10.0, 0.3, 13.0, 0.0, 0.0, 0.5};
    const double dw0 = delta_omega0(m);
    CHECK(dw0 == doctest::Approx(7.9e-3).epsilon(0.02));
    CHECK(dw0 == doctest::Approx(0.007880801913367092).epsilon(1e-12));  // frozen
    // per-half-period deviation pi * dw0 is the quoted 0.025
    CHECK(pi * dw0 == doctest::Approx(0.025).epsilon(0.02));
}

TEST_CASE("shift vanishes without coupling and grows monotonically with it") {
    ModelParams m{10.0, 0.0, 13.0, 0.0, 0.0, 0.5};
    CHECK(delta_omega0(m) == 0.0);
    double prev = 0.0;
    for (double eta = 0.05; eta < 1.0; eta += 0.05) {
        m.eta = eta;
        const double v = delta_omega0(m);
        CHECK(v > prev);
        prev = v;
    }
}

TEST_CASE("thermal amplitude and Rabi frequency") {
    const PhysicalParams p;
    const ThermalAmplitude t = thermal_amplitude(p);
    CHECK(t.omega_R == doctest::Approx(p.gamma * p.B1).epsilon(1e-15));
    CHECK(t.a_T == doctest::Approx(38e-15).epsilon(0.03));
    CHECK(t.a_T == doctest::Approx(3.7656849608991127e-14).epsilon(1e-12));  // frozen

    PhysicalParams cold = p;
    cold.T_K = 1e-30;
    CHECK(thermal_amplitude(cold).a_T < 1e-20);

    PhysicalParams hot = p;
    hot.T_K = 4.0 * p.T_K;
    CHECK(thermal_amplitude(hot).a_T == doctest::Approx(2.0 * t.a_T).epsilon(1e-12));
}

TEST_CASE("single-reversal spin deviation") {
    const PhysicalParams p;
    const double aT = thermal_amplitude(p).a_T;
    const double d2 = spin_deviation_sq(p, aT);
    CHECK(d2 == doctest::Approx(9e-7).epsilon(0.10));
    CHECK(d2 == doctest::Approx(8.803109783140009e-07).epsilon(1e-11));  // frozen
    CHECK(spin_deviation_sq(p, 0.0) == 0.0);
    CHECK(spin_deviation_sq(p, 2.0 * aT) == doctest::Approx(4.0 * d2).epsilon(1e-12));
}

TEST_CASE("smallest root of tau sin tau = r") {
    // r = 4.4 lies beyond the first branch maximum (~1.82), so the root
    // falls in the second positive branch (2pi, 3pi)
    const double root = solve_tau_sin_tau(4.4);
    CHECK(root == doctest::Approx(6.96676219626934).epsilon(1e-10));  // frozen
    CHECK(root > 2.0 * pi);
    CHECK(root < 4.0 * pi);
    CHECK(std::abs(root * std::sin(root) - 4.4) <= 1e-9 * 4.4);

    CHECK(solve_tau_sin_tau(1.0) ==
          doctest::Approx(1.1141571408719301).epsilon(1e-10));  // frozen

    // small-r limit: tau ~ sqrt(r)
    CHECK(solve_tau_sin_tau(1e-8) == doctest::Approx(1e-4).epsilon(1e-4));

    CHECK_THROWS_AS(solve_tau_sin_tau(-1.0), ValidationError);
    CHECK_THROWS_AS(solve_tau_sin_tau(1.0, 0), ValidationError);
    // unreachable r within a few branches
    CHECK_THROWS_AS(solve_tau_sin_tau(1e9, 4), ValidationError);
}

TEST_CASE("root is stable across solver restarts") {
    const double a = solve_tau_sin_tau(4.4, 8);
    const double b = solve_tau_sin_tau(4.4, 64);
    CHECK(std::abs(a - b) <= 1e-8);
    const auto roots = tau_sin_tau_roots(4.4, 40.0);
    REQUIRE(!roots.empty());
    CHECK(std::abs(roots.front() - a) <= 1e-8);
    for (double r : roots) CHECK(std::abs(r * std::sin(r) - 4.4) <= 1e-8);
    for (std::size_t i = 1; i < roots.size(); ++i) CHECK(roots[i] > roots[i - 1]);
}

TEST_CASE("collapse-time root from the simulation shift") {
    // r = 1/(4 x_m dw0) with the rounded reference values is ~4.4
    const double r = 1.0 / (4.0 * 1.2e5 * 4.7e-7);
    CHECK(r == doctest::Approx(4.4).epsilon(0.01));
    const double root = collapse_time_root(1.2e5, 4.7e-7);
    CHECK(root > 2.0 * pi);
    CHECK(root < 4.0 * pi);
    CHECK_THROWS_AS(collapse_time_root(0.0, 1.0), ValidationError);
}

TEST_CASE("branch-probability shift reduction") {
    CHECK(shift_reduction(0.0, 7.9e-3) == doctest::Approx(7.9e-3));
    CHECK(shift_reduction(9e-7, 1.0) == doctest::Approx(1.0 - 1.8e-6).epsilon(1e-12));
    // strong-noise extreme: flipped probability 5e-3 reduces the shift by 1%
    CHECK(shift_reduction(5e-3, 4.7e-7) ==
          doctest::Approx(4.7e-7 * 0.99).epsilon(1e-12));
    CHECK_THROWS_AS(shift_reduction(0.6, 1.0), ValidationError);
    CHECK_THROWS_AS(shift_reduction(-0.1, 1.0), ValidationError);

    // affine in the probability
    const double d1 = shift_reduction(0.1, 2.0);
    const double d2 = shift_reduction(0.2, 2.0);
    const double d3 = shift_reduction(0.3, 2.0);
    CHECK(d1 - d2 == doctest::Approx(d2 - d3).epsilon(1e-12));
}

TEST_CASE("thermal-separation extreme case") {
    const PhysicalParams p;
    const ModelParams m = to_model(p);
    const ThermalSeparation s = thermal_separation_case(p, m);
    // sqrt(k_B T / k_c) with T = 200 mK and k_c = 600 uN/m
    CHECK(s.separation_m == doctest::Approx(6.7839246261536053e-11).epsilon(1e-12));
    CHECK(s.separation_dimensionless == doctest::Approx(794.61481303445055).epsilon(1e-12));
    CHECK(s.tau_envelope ==
          doctest::Approx(s.separation_dimensionless /
                          (2.0 * m.x_m * delta_omega0(m))).epsilon(1e-12));
    CHECK(s.periods == doctest::Approx(s.tau_envelope / (2.0 * pi)).epsilon(1e-12));

    PhysicalParams cold = p;
    cold.T_K = 1e-30;
    CHECK(thermal_separation_case(cold, to_model(cold)).separation_m < 1e-15);

    // dimensionless-only parameters carry no length unit
    const ModelParams bare{10.0, 0.3, 13.0, 0.0, 0.0, 0.5};
    CHECK_THROWS_AS(thermal_separation_case(p, bare), ValidationError);
}

TEST_CASE("estimate report is internally consistent") {
    const EstimateReport r = estimate_all(PhysicalParams{});
    CHECK(r.delta_omega0 == doctest::Approx(4.6824079722589294e-07).epsilon(1e-12));
    CHECK(r.delta_tau0 == doctest::Approx(pi * r.delta_omega0).epsilon(1e-12));
    CHECK(r.collapse_rhs ==
          doctest::Approx(1.0 / (4.0 * r.model.x_m * r.delta_omega0)).epsilon(1e-12));
    CHECK(r.tau_coll_root * std::sin(r.tau_coll_root) ==
          doctest::Approx(r.collapse_rhs).epsilon(1e-9));
    CHECK(r.tau_coll_root == doctest::Approx(6.99).epsilon(0.01));
    CHECK(r.mean_shift_reduction ==
          doctest::Approx(r.delta_omega0 * (1.0 - 2.0 * r.dtheta1_sq)).epsilon(1e-12));
}
