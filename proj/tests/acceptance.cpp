// Acceptance suite: one pass/fail line per criterion, nonzero exit on
// any failure. Criteria marked "instant" run closed-form checks; the
// dynamical ones run the full 400-level simulator.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "oscar/protocols.hpp"
#include "oscar/quasiclassical.hpp"
#include "oscar/rng.hpp"
#include "oracles.hpp"

using namespace oscar;
constexpr double pi = std::numbers::pi;

namespace {

struct Harness {
    int failures = 0;

    void report(int id, const std::string& name, bool pass, const std::string& detail,
                double seconds) {
        std::printf("[%s] %2d. %-28s %s (%.1f s)\n", pass ? "PASS" : "FAIL", id,
                    name.c_str(), detail.c_str(), seconds);
        std::fflush(stdout);
        if (!pass) ++failures;
    }
};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

bool near(double value, double reference, double rel) {
    return std::abs(value - reference) <= rel * std::abs(reference);
}

} // namespace

int main() {
    Harness h;

    // shared by every 400-level run below (eta = 0.3 throughout)
    const BasisSpec basis400{400};
    PropagatorCache cache(basis400);

    // 1. unit conversion reproduces the reference table (2 s.f.) within 2%
    {
        Timer t;
        const ModelParams m = to_model(PhysicalParams{});
        const bool pass = near(oracles::round_sig(m.X0, 2), 85e-15, 0.02) &&
                          near(oracles::round_sig(m.P0, 2), 1.2e-21, 0.02) &&
                          near(oracles::round_sig(m.eta, 2), 0.078, 0.02) &&
                          near(oracles::round_sig(m.x_m, 2), 1.2e5, 0.02);
        h.report(1, "unit conversion", pass,
                 fmt("X0=%.3g m P0=%.3g Ns eta=%.4f x_m=%.4g", m.X0, m.P0, m.eta, m.x_m),
                 t.seconds());
    }

    // 2. quasiclassical shift on both parameter sets within 2%
    {
        Timer t;
        const double dw_exp = delta_omega0(to_model(PhysicalParams{}));
        const double dw_sim = delta_omega0(ModelParams{10.0, 0.3, 13.0, 0.0, 0.0, 0.5});
        const bool pass = near(dw_exp, 4.7e-7, 0.02) && near(dw_sim, 7.9e-3, 0.02);
        h.report(2, "quasiclassical shift", pass,
                 fmt("experimental %.4g (ref 4.7e-7), simulation %.4g (ref 7.9e-3)",
                     dw_exp, dw_sim),
                 t.seconds());
    }

    // 3. noiseless dynamics: flat deviation series at ~0.025
    RunDiagnostics noiseless_diag;
    {
        Timer t;
        OscarSettings s;
        s.n_osc = 400;
        s.half_periods = 21;
        const OscarResult r = run_oscar(s, &cache);
        noiseless_diag = r.run.diagnostics;
        double mean_dev = 0.0;
        for (double d : r.crossings.deviations) mean_dev += d;
        mean_dev /= static_cast<double>(r.crossings.deviations.size());
        const bool pass = r.crossings.intervals() >= 20 &&
                          std::abs(r.deviation_fit.slope) <= 5e-4 &&
                          near(mean_dev, 0.025, 0.10);
        h.report(3, "noiseless dynamics", pass,
                 fmt("mean dev %.5f (ref 0.025 +/-10%%), |slope| %.2e (<= 5e-4), %zu intervals",
                     mean_dev, std::abs(r.deviation_fit.slope),
                     r.crossings.intervals()),
                 t.seconds());
    }

    // 4. noisy trend: negative slopes, magnitude non-decreasing in delta0
    RunDiagnostics noisy_diag;
    {
        Timer t;
        const std::vector<double> amplitudes{0.2, 0.3};
        const std::vector<std::uint64_t> seeds{101, 102, 103};
        bool all_negative = true;
        std::vector<double> mean_abs_slopes;
        std::ostringstream detail;
        for (double d0 : amplitudes) {
            double acc = 0.0;
            for (std::uint64_t seed : seeds) {
                OscarSettings s;
                s.n_osc = 400;
                s.half_periods = 21;
                s.delta0 = d0;
                s.seed = derive_seed(seed, 0);
                const OscarResult r = run_oscar(s, &cache);
                noisy_diag = r.run.diagnostics;
                if (!(r.deviation_fit.slope < 0.0)) all_negative = false;
                acc += std::abs(r.deviation_fit.slope);
            }
            mean_abs_slopes.push_back(acc / seeds.size());
            detail << fmt("d0=%.1f mean|slope|=%.2e  ", d0, mean_abs_slopes.back());
        }
        const bool monotone = mean_abs_slopes[1] >= mean_abs_slopes[0];
        h.report(4, "noisy deviation trend", all_negative && monotone,
                 detail.str() + (all_negative ? "(all slopes negative)" : "(slope >= 0 seen)"),
                 t.seconds());
    }

    // 5. thermal estimates; the separation reference values correspond to
    // T = 1 K rather than the configured 200 mK, so the faithful
    // evaluation is expected to miss them
    {
        Timer t;
        const PhysicalParams p;
        const ThermalAmplitude th = thermal_amplitude(p);
        const double d2 = spin_deviation_sq(p, th.a_T);
        const ThermalSeparation sep = thermal_separation_case(p, to_model(p));
        const bool pass_aT = near(th.a_T, 38e-15, 0.03);
        const bool pass_d2 = near(d2, 9e-7, 0.10);
        const bool pass_sep = near(sep.separation_m, 150e-12, 0.03) &&
                              near(sep.separation_dimensionless, 1760.0, 0.03);
        h.report(5, "thermal estimates", pass_aT && pass_d2 && pass_sep,
                 fmt("a_T %.3g m [%s], dtheta^2 %.3g [%s], separation %.3g m / %.0f [%s: refs"
                     " 1.5e-10 m / 1760]",
                     th.a_T, pass_aT ? "ok" : "off", d2, pass_d2 ? "ok" : "off",
                     sep.separation_m, sep.separation_dimensionless,
                     pass_sep ? "ok" : "off"),
                 t.seconds());
    }

    // 6. collapse-time root in the second vibration period
    {
        Timer t;
        const double root = solve_tau_sin_tau(4.4);
        const double again = solve_tau_sin_tau(4.4, 8);
        const double residual = std::abs(root * std::sin(root) - 4.4);
        const bool pass = root > 2.0 * pi && root < 4.0 * pi && residual <= 1e-9 &&
                          std::abs(root - again) <= 1e-8;
        h.report(6, "collapse-time root", pass,
                 fmt("root %.8f in (2pi, 4pi), residual %.1e, restart drift %.1e", root,
                     residual, std::abs(root - again)),
                 t.seconds());
    }

    // 7. interrupted-OSCAR closure: recover the programmed tau_coll
    {
        Timer t;
        bool pass = true;
        std::ostringstream detail;
        for (double tau_p : {8.0 * pi, 16.0 * pi}) {
            for (double tau_coll : {2.0 * pi, 4.0 * pi}) {
                InterruptedSettings is;
                is.base.n_osc = 400;
                is.base.seed = 1;
                is.pulses = PulseSequence{tau_p, pi / 2.0, tau_p > 10.0 * pi ? 5 : 6};
                is.policy.mode = CollapseMode::fixed_interval;
                is.policy.tau_coll = tau_coll;
                const InterruptedResult r = run_interrupted_oscar(is, &cache);
                const CollapseInversion inv = invert_collapse_time(
                    r.mean_abs_shift, r.steady_shift, r.measured_tau_p);
                const double err = (inv.tau_coll - tau_coll) / tau_coll;
                if (std::abs(err) > 0.15) pass = false;
                detail << fmt("(%.0fpi,%.0fpi): %+.1f%%  ", tau_p / pi, tau_coll / pi,
                              100.0 * err);
            }
        }
        h.report(7, "collapse-time closure", pass, detail.str() + "(tolerance 15%)",
                 t.seconds());
    }

    // 8. propagator against an independent Taylor matrix exponential
    {
        Timer t;
        const BasisSpec b{8};
        std::mt19937_64 gen(0xACCE57);
        std::uniform_real_distribution<double> par(-1.0, 1.0);
        std::normal_distribution<double> amp;
        double worst = 0.0;
        for (int trial = 0; trial < 100; ++trial) {
            const HamiltonianSpec spec{6.0 * std::abs(par(gen)), 0.5 * par(gen),
                                       0.5 * par(gen)};
            const SpectralPropagator prop = diagonalize(spec, b);
            JointState s;
            s.basis = b;
            s.amplitudes.resize(b.dim());
            for (int i = 0; i < b.dim(); ++i)
                s.amplitudes(i) = std::complex<double>(amp(gen), amp(gen));
            s.amplitudes.normalize();
            const double dt = 2.0 * std::abs(par(gen));
            const JointState ours = step(s, prop, dt);
            const Eigen::VectorXcd ref = oracles::taylor_expm_apply(
                build_hamiltonian(spec, b).cast<std::complex<double>>(), s.amplitudes, dt);
            worst = std::max(worst, (ours.amplitudes - ref).cwiseAbs().maxCoeff());
        }
        h.report(8, "propagator oracle", worst <= 1e-8,
                 fmt("max elementwise difference %.2e over 100 random segments (<= 1e-8)",
                     worst),
                 t.seconds());
    }

    // 9. invariant bundle
    {
        Timer t;
        const double norm_err =
            std::max(noiseless_diag.max_norm_error, noisy_diag.max_norm_error);
        const double drift =
            std::max(noiseless_diag.max_energy_drift, noisy_diag.max_energy_drift);

        const Eigen::Vector2cd up = (Eigen::Vector2cd() << 1.0, 0.0).finished();
        const JointState coh = product_state(coherent_state(13.0, 0.0, basis400), up,
                                             basis400);
        const ObservableCache obsc(basis400);
        const Observables o = expectations(coh, obsc);
        const Eigen::MatrixXd xo = build_x(basis400);
        const Eigen::VectorXcd osc = coherent_state(13.0, 0.0, basis400);
        const Eigen::VectorXcd xpsi = xo.cast<std::complex<double>>() * osc;
        const double var = xpsi.squaredNorm() - std::pow((osc.adjoint() * xpsi)(0).real(), 2);

        const EffectiveField f = effective_field(10.0, 0.3, 13.0);
        const SpinPurity purity = spin_purity(
            product_state(osc, spin_state_along(f, SpinSense::anti_aligned), basis400));

        const Eigen::Vector2cd perp =
            ((spin_state_along(f, SpinSense::aligned) +
              spin_state_along(f, SpinSense::anti_aligned)) / std::sqrt(2.0)).eval();
        std::mt19937_64 gen(5);
        const auto [post, ev] =
            apply_collapse(product_state(osc, perp, basis400), f, SpinSense::aligned, gen);

        const bool pass = norm_err <= 1e-10 && drift <= 1e-9 &&
                          std::abs(o.x - 13.0) <= 1e-8 && std::abs(o.p) <= 1e-8 &&
                          std::abs(var - 0.5) <= 1e-8 &&
                          std::abs(purity.spin_norm - 0.5) <= 1e-8 &&
                          std::abs(ev.p_aligned - 0.5) <= 1e-3 &&
                          std::abs(ev.p_anti - 0.5) <= 1e-3;
        h.report(9, "invariant bundle", pass,
                 fmt("norm %.1e, drift %.1e, <x> err %.1e, var err %.1e, |<S>| err %.1e, "
                     "branch probs (%.4f, %.4f)",
                     norm_err, drift, std::abs(o.x - 13.0), std::abs(var - 0.5),
                     std::abs(purity.spin_norm - 0.5), ev.p_aligned, ev.p_anti),
                 t.seconds());
    }

    // 10. Born-rule statistics over 1e4 seeded trials
    {
        Timer t;
        const BasisSpec b{64};
        const EffectiveField f = effective_field(10.0, 0.3, 4.0);
        const double w = 0.3;
        const Eigen::Vector2cd mix =
            (std::sqrt(w) * spin_state_along(f, SpinSense::aligned) +
             std::sqrt(1.0 - w) * spin_state_along(f, SpinSense::anti_aligned)).eval();
        const JointState s = product_state(coherent_state(4.0, 0.0, b), mix, b);
        std::mt19937_64 gen(0xB0A2);
        const int n = 10000;
        int aligned = 0;
        for (int i = 0; i < n; ++i) {
            const auto [post, ev] = apply_collapse(s, f, SpinSense::aligned, gen);
            if (ev.selected == SpinSense::aligned) ++aligned;
        }
        const double freq = static_cast<double>(aligned) / n;
        const double sigma = std::sqrt(w * (1.0 - w) / n);
        const bool pass = std::abs(freq - w) <= 3.0 * sigma;
        h.report(10, "Born-rule statistics", pass,
                 fmt("frequency %.4f vs weight %.4f (3 sigma = %.4f)", freq, w, 3.0 * sigma),
                 t.seconds());
    }

    if (h.failures == 0) {
        std::printf("acceptance: all criteria passed\n");
    } else {
        std::printf("acceptance: %d criterion(s) failed\n", h.failures);
    }
    return h.failures;
}
