#include "oscar/analysis.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "oscar/errors.hpp"
#include "oscar/quasiclassical.hpp"

namespace oscar {

namespace {

constexpr double pi = std::numbers::pi;

// cubic Lagrange interpolant through 4 consecutive samples
double cubic_eval(const std::array<double, 4>& ts, const std::array<double, 4>& ys, double t) {
    double acc = 0.0;
    for (int i = 0; i < 4; ++i) {
        double term = ys[i];
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            term *= (t - ts[j]) / (ts[i] - ts[j]);
        }
        acc += term;
    }
    return acc;
}

double refine_crossing(const std::vector<double>& tau, const std::vector<double>& x,
                       std::size_t i) {
    const std::size_t n = tau.size();
    // stencil i-1..i+2 clamped to the array
    std::size_t lo = (i == 0) ? 0 : i - 1;
    if (lo + 3 >= n) lo = n - 4;
    std::array<double, 4> ts{}, ys{};
    for (int k = 0; k < 4; ++k) {
        ts[k] = tau[lo + k];
        ys[k] = x[lo + k];
    }
    double a = tau[i];
    double b = tau[i + 1];
    double fa = cubic_eval(ts, ys, a);
    double fb = cubic_eval(ts, ys, b);
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    if (fa * fb > 0.0) {
        // interpolant disagrees with the raw bracket near a grazing touch;
        // fall back to the linear estimate
        return a + (b - a) * x[i] / (x[i] - x[i + 1]);
    }
    for (int it = 0; it < 80; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = cubic_eval(ts, ys, m);
        if (fm == 0.0) return m;
        if (fa * fm < 0.0) {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    return 0.5 * (a + b);
}

} // namespace

CrossingSeries find_crossings(const std::vector<double>& tau, const std::vector<double>& x) {
    if (tau.size() != x.size())
        throw AnalysisError("find_crossings: tau and x lengths differ");
    if (tau.size() < 4) throw AnalysisError("find_crossings: need at least 4 samples");
    const double h = tau[1] - tau[0];
    if (!(h > 0.0)) throw AnalysisError("find_crossings: tau must be increasing");
    for (std::size_t i = 1; i < tau.size(); ++i) {
        if (std::abs((tau[i] - tau[i - 1]) - h) > 1e-6 * h)
            throw AnalysisError("find_crossings: sampling must be uniform");
    }

    CrossingSeries out;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        double t;
        if (x[i] == 0.0) {
            t = tau[i];
        } else if (x[i] * x[i + 1] < 0.0) {
            t = refine_crossing(tau, x, i);
        } else {
            continue;
        }
        if (!out.crossings.empty() && t - out.crossings.back() < h) {
            out.crossings.back() = 0.5 * (out.crossings.back() + t);  // grazing merge
        } else {
            out.crossings.push_back(t);
        }
    }
    if (out.crossings.empty()) throw AnalysisError("find_crossings: no zero crossings found");

    for (std::size_t j = 1; j < out.crossings.size(); ++j) {
        const double d = out.crossings[j] - out.crossings[j - 1];
        out.dtau.push_back(d);
        out.deviations.push_back(std::abs(d - pi));
        out.omega.push_back(pi / d);
    }
    return out;
}

std::vector<double> effective_shift_series(const CrossingSeries& c) {
    std::vector<double> s;
    s.reserve(c.dtau.size());
    for (double d : c.dtau) s.push_back((pi - d) / pi);
    return s;
}

FitResult linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw AnalysisError("linear_fit: size mismatch");
    const std::size_t n = x.size();
    if (n < 2) throw AnalysisError("linear_fit: need at least 2 points");
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n;
    const double my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw AnalysisError("linear_fit: degenerate abscissa (all x equal)");
    FitResult f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        ss += r * r;
    }
    f.residual_rms = std::sqrt(ss / n);
    return f;
}

FitResult fit_deviations(const CrossingSeries& c, std::size_t first, std::size_t last) {
    if (last == 0) last = c.deviations.size();
    if (first >= last || last > c.deviations.size())
        throw AnalysisError("fit_deviations: bad window");
    std::vector<double> js, ys;
    for (std::size_t j = first; j < last; ++j) {
        js.push_back(static_cast<double>(j + 1));
        ys.push_back(c.deviations[j]);
    }
    return linear_fit(js, ys);
}

double mean_shift(const std::vector<double>& shifts, std::size_t first, std::size_t last) {
    if (first >= last || last > shifts.size()) throw AnalysisError("mean_shift: empty window");
    double acc = 0.0;
    for (std::size_t i = first; i < last; ++i) acc += shifts[i];
    return acc / static_cast<double>(last - first);
}

double mean_abs_shift(const CrossingSeries& c) {
    if (c.deviations.empty()) throw AnalysisError("mean_abs_shift: empty series");
    double acc = 0.0;
    for (double d : c.deviations) acc += d;
    return acc / (pi * static_cast<double>(c.deviations.size()));
}

double effective_spin_decrease(double mean_shift_value, const ModelParams& m) {
    m.validate();
    if (m.eta == 0.0)
        throw ValidationError("effective_spin_decrease: eta must be nonzero");
    const double root = std::sqrt(2.0 * m.eta * m.eta * m.x_m * m.x_m + m.eps * m.eps);
    return (mean_shift_value - delta_omega0(m)) * root / (2.0 * m.eta * m.eta);
}

} // namespace oscar
