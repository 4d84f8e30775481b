#include "neurowf/diffusion_kde.hpp"

#include <algorithm>
#include <cmath>

#include "neurowf/error.hpp"

namespace neurowf {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr int kInitialOrder = 7;  // initial derivative order l of the descent

// sum_{k>=1} k^(2j) * a[k-1] * exp(-k^2*pi^2*t). Terms are nonnegative; once
// past the summand's peak at k ~ sqrt(j/(pi^2 t)) the envelope decays like a
// Gaussian, so summation stops after a run of negligible increments. The
// exponential factors follow the recurrence exp(-(k+1)^2 c) =
// exp(-k^2 c) * exp(-(2k+1) c), which avoids an exp() call per term.
double spectral_sum(std::span<const double> a, int j, double t) {
    const double c = kPi * kPi * t;
    const double peak = std::sqrt(static_cast<double>(j) / std::max(c, 1e-300));
    const double q = std::exp(-2.0 * c);
    double e = std::exp(-c);        // exp(-k^2 c) at k = 1
    double r = std::exp(-3.0 * c);  // ratio to the next k
    double sum = 0.0;
    int negligible = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double k = static_cast<double>(i + 1);
        const double k2 = k * k;
        double kpow = 1.0;
        for (int p = 0; p < j; ++p) kpow *= k2;
        const double term = kpow * a[i] * e;
        sum += term;
        if (k > peak && term < sum * 1e-18) {
            if (++negligible >= 8) break;
        } else {
            negligible = 0;
        }
        e *= r;
        r *= q;
    }
    return sum;
}

double derivative_norm(std::span<const double> a, int j, double t) {
    return 2.0 * std::pow(kPi, 2 * j) * spectral_sum(a, j, t);
}

struct FixedPointEval {
    double value = 0.0;  // t - (2*n*sqrt(pi)*f)^(-2/5)
    std::vector<std::pair<int, double>> stages;
};

// One evaluation of the fixed-point function: staged descent from order l to
// the curvature norm f = |f''|^2, then the stationarity residual.
FixedPointEval fixed_point(double t, double n, std::span<const double> a) {
    FixedPointEval ev;
    double f = derivative_norm(a, kInitialOrder, t);
    for (int s = kInitialOrder - 1; s >= 2; --s) {
        double odd_factorial = 1.0;
        for (int j = 1; j <= s; ++j) odd_factorial *= 2.0 * j - 1.0;
        const double m0 = odd_factorial / std::sqrt(2.0 * kPi);
        const double c = (1.0 + std::pow(0.5, s + 0.5)) / 3.0;
        const double t_s = std::pow(2.0 * c * m0 / (n * f), 2.0 / (3.0 + 2.0 * s));
        f = derivative_norm(a, s, t_s);
        ev.stages.emplace_back(s, t_s);
    }
    ev.value = t - std::pow(2.0 * n * std::sqrt(kPi) * f, -0.4);
    return ev;
}

}  // namespace

double l2_norm_derivative_spectral(std::span<const double> a, int j, double t_j, double R) {
    if (j < 1) throw InvalidInput("l2_norm_derivative_spectral: derivative order must be >= 1");
    if (!(t_j > 0.0)) throw InvalidInput("l2_norm_derivative_spectral: bandwidth must be > 0");
    if (!(R > 0.0)) throw InvalidInput("l2_norm_derivative_spectral: range must be > 0");
    return derivative_norm(a, j, t_j);
}

BandwidthResult select_bandwidth(const BinnedData& binned) {
    if (binned.n_samples < 10) {
        throw InvalidInput("select_bandwidth: need at least 10 samples");
    }
    const auto a = squared_dct_coefficients(dct_coefficients(binned));
    const double n = static_cast<double>(binned.n_samples);

    double lo = 1.0 / (n * n);
    double hi = 0.1;
    double g_lo = fixed_point(lo, n, a).value;
    double g_hi = fixed_point(hi, n, a).value;

    BandwidthResult result;
    if (std::isfinite(g_lo) && std::isfinite(g_hi) && g_lo * g_hi <= 0.0) {
        for (int iter = 0; iter < 200 && hi - lo > 1e-12; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double g_mid = fixed_point(mid, n, a).value;
            if ((g_lo <= 0.0) == (g_mid <= 0.0)) {
                lo = mid;
                g_lo = g_mid;
            } else {
                hi = mid;
            }
        }
        result.t_star = 0.5 * (lo + hi);
        result.converged = true;
    } else {
        result.t_star = 0.28 * std::pow(n, -0.4);
        result.converged = false;
    }
    result.stages = fixed_point(result.t_star, n, a).stages;

    const double norm_f1 = derivative_norm(a, 1, result.t_star);
    result.t_cdf = std::pow(std::sqrt(kPi) * n * norm_f1, -2.0 / 3.0);
    if (!std::isfinite(result.t_cdf) || result.t_cdf <= 0.0) {
        // degenerate spectrum (e.g. uniform counts); any bandwidth smooths it
        result.t_cdf = result.t_star;
        result.converged = false;
    }
    return result;
}

DensityEstimate estimate_density(const BinnedData& binned, const BandwidthResult& bw) {
    const std::size_t n_grid = binned.n_grid;
    auto v = dct2(binned.counts);
    for (std::size_t k = 0; k < n_grid; ++k) {
        const double kk = static_cast<double>(k);
        v[k] *= std::exp(-bw.t_star * kPi * kPi * kk * kk * 0.5);
    }
    auto density = dct3(v);

    DensityEstimate out;
    out.grid = binned.grid();
    out.bandwidth = bw;

    const double scale = static_cast<double>(n_grid) / binned.range();
    for (double& d : density) d = std::max(d * scale, 0.0);

    // renormalize to unit trapezoidal integral over the bin-center grid
    const double dx = binned.bin_width();
    double integral = 0.0;
    for (std::size_t j = 0; j + 1 < n_grid; ++j) {
        integral += 0.5 * (density[j] + density[j + 1]) * dx;
    }
    if (integral > 0.0) {
        for (double& d : density) d /= integral;
    }
    out.density = std::move(density);
    out.cdf = estimate_cdf(binned, bw);
    return out;
}

std::vector<double> estimate_cdf(const BinnedData& binned, const BandwidthResult& bw) {
    const std::size_t n_grid = binned.n_grid;
    auto v = dct2(binned.counts);
    for (std::size_t k = 0; k < n_grid; ++k) {
        const double kk = static_cast<double>(k);
        v[k] *= std::exp(-kk * kk * kPi * kPi * bw.t_cdf * 0.5);
    }
    auto smoothed = dct3(v);

    std::vector<double> cdf(n_grid);
    double running = 0.0;
    const double step = 1.0 / static_cast<double>(n_grid - 1);
    for (std::size_t j = 0; j < n_grid; ++j) {
        running += smoothed[j] * step;
        cdf[j] = running;
    }
    const double last = cdf.back();
    if (!(last > 0.0)) throw InvalidInput("estimate_cdf: smoothed mass is not positive");
    for (double& p : cdf) p = std::clamp(p / last, 0.0, 1.0);

    // running maximum: the spectral cumulative sum is not exactly monotone
    double peak = 0.0;
    for (double& p : cdf) {
        peak = std::max(peak, p);
        p = peak;
    }
    return cdf;
}

}  // namespace neurowf
