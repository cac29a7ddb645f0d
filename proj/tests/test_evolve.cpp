#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "oscar/evolve.hpp"
#include "oscar/rng.hpp"
#include "oracles.hpp"

using namespace oscar;
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;

namespace {

JointState coherent_up(double x0, double p0, const BasisSpec& b) {
    const Eigen::Vector2cd up = (Eigen::Vector2cd() << 1.0, 0.0).finished();
    return product_state(coherent_state(x0, p0, b), up, b);
}

} // namespace

TEST_CASE("free spectrum is doubly degenerate n + 1/2") {
    const BasisSpec b{10};
    const SpectralPropagator prop = diagonalize({0.0, 0.0, 0.0}, b);
    for (int n = 0; n < b.n_osc; ++n) {
        CHECK(prop.eigenvalues(2 * n) == doctest::Approx(n + 0.5).epsilon(1e-13));
        CHECK(prop.eigenvalues(2 * n + 1) == doctest::Approx(n + 0.5).epsilon(1e-13));
    }
}

TEST_CASE("rf-only spectrum splits by eps/2") {
    const BasisSpec b{10};
    const SpectralPropagator prop = diagonalize({10.0, 0.0, 0.0}, b);
    std::vector<double> expected;
    for (int n = 0; n < b.n_osc; ++n) {
        expected.push_back(n + 0.5 - 5.0);
        expected.push_back(n + 0.5 + 5.0);
    }
    std::sort(expected.begin(), expected.end());
    for (int i = 0; i < b.dim(); ++i)
        CHECK(prop.eigenvalues(i) == doctest::Approx(expected[i]).epsilon(1e-12));
}

TEST_CASE("coupled spectrum matches the naive construction oracle") {
    const BasisSpec b{6};
    const SpectralPropagator prop = diagonalize({10.0, 0.3, 0.0}, b);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(
        oracles::naive_hamiltonian(10.0, 0.3, 0.0, b.n_osc));
    for (int i = 0; i < b.dim(); ++i)
        CHECK(prop.eigenvalues(i) == doctest::Approx(ref.eigenvalues()(i)).epsilon(1e-12));
}

TEST_CASE("decomposition residuals at the production size") {
    const BasisSpec b{400};
    const SpectralPropagator prop = diagonalize({10.0, 0.3, 0.3}, b);
    const Eigen::MatrixXd h = build_hamiltonian({10.0, 0.3, 0.3}, b);
    const Eigen::MatrixXd recon = prop.eigenvectors *
                                  prop.eigenvalues.asDiagonal() *
                                  prop.eigenvectors.transpose();
    CHECK((recon - h).cwiseAbs().maxCoeff() <= 1e-9);
    const Eigen::MatrixXd gram =
        prop.eigenvectors.transpose() * prop.eigenvectors;
    CHECK((gram - Eigen::MatrixXd::Identity(b.dim(), b.dim())).cwiseAbs().maxCoeff() <=
          1e-10);
}

TEST_CASE("zero-duration step is the identity") {
    const BasisSpec b{32};
    const SpectralPropagator prop = diagonalize({3.0, 0.2, 0.1}, b);
    const JointState s = coherent_up(2.0, 0.0, b);
    const JointState out = step(s, prop, 0.0);
    CHECK((out.amplitudes - s.amplitudes).norm() < 1e-12);
}

TEST_CASE("free evolution is 2pi periodic for a coherent state") {
    const BasisSpec b{200};
    const SpectralPropagator prop = diagonalize({0.0, 0.0, 0.0}, b);
    const JointState s = coherent_up(13.0, 0.0, b);
    const JointState out = step(s, prop, 2.0 * pi);
    CHECK(std::abs(std::abs(s.amplitudes.dot(out.amplitudes)) - 1.0) < 1e-8);
}

TEST_CASE("quarter-period free rotation maps x onto -p") {
    const BasisSpec b{400};
    const SpectralPropagator prop = diagonalize({0.0, 0.0, 0.0}, b);
    const JointState out = step(coherent_up(13.0, 0.0, b), prop, pi / 2.0);
    const Observables o = expectations(out, ObservableCache(b));
    CHECK(std::abs(o.x) < 1e-8);
    CHECK(o.p == doctest::Approx(-13.0).epsilon(1e-8));
}

TEST_CASE("spectral step agrees with a Taylor matrix exponential") {
    const BasisSpec b{8};
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> par(-1.0, 1.0);
    std::normal_distribution<double> amp;
    for (int trial = 0; trial < 20; ++trial) {
        const HamiltonianSpec spec{6.0 * std::abs(par(gen)), 0.5 * par(gen), 0.5 * par(gen)};
        const SpectralPropagator prop = diagonalize(spec, b);
        JointState s;
        s.basis = b;
        s.amplitudes.resize(b.dim());
        for (int i = 0; i < b.dim(); ++i) s.amplitudes(i) = cd(amp(gen), amp(gen));
        s.amplitudes.normalize();
        const double dt = 2.0 * std::abs(par(gen));
        const JointState ours = step(s, prop, dt);
        const Eigen::VectorXcd ref = oracles::taylor_expm_apply(
            build_hamiltonian(spec, b).cast<cd>(), s.amplitudes, dt);
        CHECK((ours.amplitudes - ref).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("steps compose and reverse") {
    const BasisSpec b{64};
    const SpectralPropagator prop = diagonalize({5.0, 0.4, -0.2}, b);
    const JointState s = coherent_up(4.0, -1.0, b);
    const JointState two = step(step(s, prop, 0.7), prop, 0.9);
    const JointState one = step(s, prop, 1.6);
    CHECK((two.amplitudes - one.amplitudes).norm() < 1e-10);

    const JointState back = step(step(s, prop, 1.3), prop, -1.3);
    CHECK(std::abs(std::abs(back.amplitudes.dot(s.amplitudes)) - 1.0) < 1e-9);
    CHECK(norm_error(back) < 1e-10);
}

TEST_CASE("step rejects a basis mismatch") {
    const SpectralPropagator prop = diagonalize({1.0, 0.1, 0.0}, BasisSpec{16});
    const JointState s = coherent_up(1.0, 0.0, BasisSpec{32});
    CHECK_THROWS_AS(step(s, prop, 0.1), ValidationError);
}

TEST_CASE("noise realizations are reproducible and alternate from +1") {
    const double tau_R = 2.0 * pi / 10.0;
    const NoiseRealization a = sample_noise(42, 0.3, tau_R, 60.0);
    const NoiseRealization b = sample_noise(42, 0.3, tau_R, 60.0);
    CHECK(a.kick_times == b.kick_times);
    CHECK(a.signs == b.signs);
    CHECK(a.signs.size() == a.kick_times.size() + 1);
    for (std::size_t k = 0; k < a.signs.size(); ++k)
        CHECK(a.signs[k] == ((k % 2 == 0) ? 1 : -1));
    for (std::size_t k = 1; k < a.kick_times.size(); ++k)
        CHECK(a.kick_times[k] > a.kick_times[k - 1]);
    CHECK(a.kick_times.front() > 0.0);
    CHECK(a.kick_times.back() < 60.0);

    const NoiseRealization c = sample_noise(43, 0.3, tau_R, 60.0);
    CHECK(a.kick_times != c.kick_times);

    CHECK(a.value_at(0.0) == doctest::Approx(0.3));
    CHECK(a.value_at(0.5 * (a.kick_times[0] + a.kick_times[1])) == doctest::Approx(-0.3));
}

TEST_CASE("rejected-interval sampler has the truncated-uniform mean") {
    // uniform on (-3/4, 5/4)*tau_R conditioned positive is uniform on
    // (0, 5/4)*tau_R with mean 5/8*tau_R
    const double tau_R = 0.6283185307179586;
    std::mt19937_64 gen(2024);
    const int n = 1'000'000;
    double acc = 0.0;
    double mx = 0.0;
    for (int i = 0; i < n; ++i) {
        const double u = draw_kick_interval(gen, tau_R);
        CHECK(u > 0.0);
        acc += u;
        mx = std::max(mx, u);
    }
    const double mean = acc / n;
    // 4 sigma of the sample mean
    const double tol = 4.0 * (1.25 * tau_R / std::sqrt(12.0)) / std::sqrt(double(n));
    CHECK(std::abs(mean - 0.625 * tau_R) < tol);
    CHECK(mx <= 1.25 * tau_R);
}

TEST_CASE("zero-amplitude noise reproduces the noiseless schedule") {
    const double tau_R = 2.0 * pi / 10.0;
    const NoiseRealization noisy0 = sample_noise(7, 0.0, tau_R, 10.0);
    const Schedule a = make_schedule(noisy0, 10.0, 0.3, 10.0);
    // all segments coalesce: the schedule is one constant segment,
    // identical to the one built with no kicks at all
    CHECK(a.segments.size() == 1);
    CHECK(a.segments.front().spec == HamiltonianSpec{10.0, 0.3, 0.0});
}

TEST_CASE("schedules slice cleanly") {
    const double tau_R = 2.0 * pi / 10.0;
    const NoiseRealization noise = sample_noise(3, 0.2, tau_R, 20.0);
    const Schedule full = make_schedule(noise, 10.0, 0.3, 20.0,
                                        {{2.0, 2.5}, {11.0, 11.5}});
    full.validate();
    const Schedule part = full.slice(2.2, 12.3);
    part.validate();
    CHECK(part.begin() == doctest::Approx(2.2));
    CHECK(part.end() == doctest::Approx(12.3));
    // rf-off windows survive the slice
    bool saw_rf_off = false;
    for (const auto& seg : part.segments)
        if (seg.spec.eps_active == 0.0) saw_rf_off = true;
    CHECK(saw_rf_off);
}

TEST_CASE("decoupled run keeps the classical trajectory and spin precession") {
    const BasisSpec b{400};
    PropagatorCache cache(b);
    const NoiseRealization quiet = sample_noise(1, 0.0, 1.0, 2.0 * pi);
    const Schedule sched = make_schedule(quiet, 10.0, 0.0, 2.0 * pi);
    RunOptions opts;
    opts.sample_dtau = pi / 100.0;
    const RunResult rr = run(coherent_up(13.0, 0.0, b), sched, opts, cache);
    for (const auto& smp : rr.samples) {
        CHECK(smp.x == doctest::Approx(13.0 * std::cos(smp.tau)).epsilon(1e-6));
        // spin precesses about x at rate eps: S_z = cos(eps tau)/2
        CHECK(smp.spin_z ==
              doctest::Approx(0.5 * std::cos(10.0 * smp.tau)).epsilon(1e-6));
        CHECK(smp.spin_y ==
              doctest::Approx(-0.5 * std::sin(10.0 * smp.tau)).epsilon(1e-6));
    }
    CHECK(rr.diagnostics.max_norm_error <= 1e-10);
}

TEST_CASE("noisy run conserves norm and in-segment energy") {
    const BasisSpec b{200};
    PropagatorCache cache(b);
    const double tau_R = 2.0 * pi / 10.0;
    const NoiseRealization noise = sample_noise(11, 0.3, tau_R, 4.0 * pi);
    const Schedule sched = make_schedule(noise, 10.0, 0.3, 4.0 * pi);
    RunOptions opts;
    const RunResult rr = run(coherent_up(8.0, 0.0, b), sched, opts, cache);
    CHECK(rr.diagnostics.max_norm_error <= 1e-10);
    CHECK(rr.diagnostics.max_energy_drift <= 1e-9);
    CHECK(rr.diagnostics.max_top_band <= 1e-8);
    CHECK(!rr.diagnostics.truncation_warning);
    // samples lie on the global grid
    for (std::size_t i = 1; i + 1 < rr.samples.size(); ++i)
        CHECK(rr.samples[i].tau - rr.samples[i - 1].tau ==
              doctest::Approx(opts.sample_dtau).epsilon(1e-9));
    // propagators are cached per distinct Hamiltonian: +/- delta0 only
    CHECK(cache.size() == 2);
}

TEST_CASE("truncation escalation aborts the run") {
    const BasisSpec b{32};
    PropagatorCache cache(b);
    const NoiseRealization quiet = sample_noise(1, 0.0, 1.0, 4.0);
    const Schedule sched = make_schedule(quiet, 0.0, 3.0, 4.0);
    RunOptions opts;
    // strong coupling displaces the packet into the top of a small basis
    JointState s = coherent_up(3.5, 0.0, b);
    CHECK_THROWS_AS(run(s, sched, opts, cache), TruncationError);
}

TEST_CASE("seed derivation separates streams") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(123, 7) == derive_seed(123, 7));
}
