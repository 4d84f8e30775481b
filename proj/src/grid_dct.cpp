#include "neurowf/grid_dct.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "neurowf/error.hpp"

namespace neurowf {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Butterfly factors 2*cos((i+0.5)*pi/m) for every power-of-two level m <= N,
// cached per transform size. Tables are immutable once published.
class CosTables {
public:
    static std::shared_ptr<const CosTables> get(std::size_t n) {
        static std::mutex mutex;
        static std::unordered_map<std::size_t, std::shared_ptr<const CosTables>> cache;
        std::lock_guard<std::mutex> lock(mutex);
        auto it = cache.find(n);
        if (it != cache.end()) return it->second;
        auto tables = std::shared_ptr<const CosTables>(new CosTables(n));
        cache.emplace(n, tables);
        return tables;
    }

    const double* level(std::size_t m) const { return levels_[log2_size(m)].data(); }

private:
    explicit CosTables(std::size_t n) {
        levels_.resize(log2_size(n) + 1);
        for (std::size_t m = 2; m <= n; m *= 2) {
            auto& tab = levels_[log2_size(m)];
            tab.resize(m / 2);
            for (std::size_t i = 0; i < m / 2; ++i) {
                tab[i] = 2.0 * std::cos((static_cast<double>(i) + 0.5) * kPi /
                                        static_cast<double>(m));
            }
        }
    }

    static std::size_t log2_size(std::size_t m) {
        std::size_t k = 0;
        while ((std::size_t{1} << k) < m) ++k;
        return k;
    }

    std::vector<std::vector<double>> levels_;
};

// Lee's recursive factorization of the unscaled DCT-II,
// y_k = sum_j x_j cos(pi*k*(2j+1)/(2N)). `tmp` is scratch of the same length.
void fdct_rec(double* x, std::size_t n, double* tmp, const CosTables& ct) {
    if (n == 1) return;
    const std::size_t h = n / 2;
    const double* c = ct.level(n);
    for (std::size_t i = 0; i < h; ++i) {
        const double a = x[i];
        const double b = x[n - 1 - i];
        tmp[i] = a + b;
        tmp[h + i] = (a - b) / c[i];
    }
    fdct_rec(tmp, h, x, ct);
    fdct_rec(tmp + h, h, x, ct);
    for (std::size_t i = 0; i + 1 < h; ++i) {
        x[2 * i] = tmp[i];
        x[2 * i + 1] = tmp[h + i] + tmp[h + i + 1];
    }
    x[n - 2] = tmp[h - 1];
    x[n - 1] = tmp[n - 1];
}

// Inverse of fdct_rec (unscaled DCT-III); expects x[0] pre-halved at the root.
void idct_rec(double* x, std::size_t n, double* tmp, const CosTables& ct) {
    if (n == 1) return;
    const std::size_t h = n / 2;
    for (std::size_t i = 0; i < h; ++i) tmp[i] = x[2 * i];
    tmp[h] = x[1];
    for (std::size_t i = 1; i < h; ++i) tmp[h + i] = x[2 * i - 1] + x[2 * i + 1];
    idct_rec(tmp, h, x, ct);
    idct_rec(tmp + h, h, x, ct);
    const double* c = ct.level(n);
    for (std::size_t i = 0; i < h; ++i) {
        const double a = tmp[i];
        const double b = tmp[h + i] / c[i];
        x[i] = a + b;
        x[n - 1 - i] = a - b;
    }
}

void check_length(std::size_t n, const char* op) {
    if (!is_power_of_two(n)) {
        throw InvalidInput(std::string(op) + ": length must be a power of two, got " +
                           std::to_string(n));
    }
}

}  // namespace

std::vector<double> BinnedData::grid() const {
    std::vector<double> g(n_grid);
    const double w = bin_width();
    for (std::size_t j = 0; j < n_grid; ++j) g[j] = lo + (static_cast<double>(j) + 0.5) * w;
    return g;
}

BinnedData bin_samples(std::span<const double> samples, std::size_t n_grid, double pad_fraction) {
    if (samples.empty()) throw InvalidInput("bin_samples: empty sample");
    if (!is_power_of_two(n_grid) || n_grid < 64) {
        throw InvalidInput("bin_samples: n_grid must be a power of two >= 64");
    }
    if (!(pad_fraction >= 0.0)) throw InvalidInput("bin_samples: pad_fraction must be >= 0");

    double mn = samples[0];
    double mx = samples[0];
    for (double s : samples) {
        if (!std::isfinite(s)) throw InvalidInput("bin_samples: non-finite sample value");
        mn = std::min(mn, s);
        mx = std::max(mx, s);
    }
    double range = mx - mn;
    if (range == 0.0) range = 1.0;

    BinnedData out;
    out.lo = mn - pad_fraction * range;
    out.hi = mx + pad_fraction * range;
    out.n_grid = n_grid;
    out.n_samples = samples.size();
    out.counts.assign(n_grid, 0.0);

    const double width = out.range() / static_cast<double>(n_grid);
    const double inc = 1.0 / static_cast<double>(samples.size());
    for (double s : samples) {
        auto idx = static_cast<std::ptrdiff_t>((s - out.lo) / width);
        idx = std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(n_grid) - 1);
        out.counts[static_cast<std::size_t>(idx)] += inc;
    }
    return out;
}

std::vector<double> dct2(std::span<const double> x) {
    check_length(x.size(), "dct2");
    const std::size_t n = x.size();
    std::vector<double> out(x.begin(), x.end());
    if (n > 1) {
        std::vector<double> tmp(n);
        auto tables = CosTables::get(n);
        fdct_rec(out.data(), n, tmp.data(), *tables);
    }
    for (double& v : out) v *= 2.0;
    return out;
}

std::vector<double> dct3(std::span<const double> y) {
    check_length(y.size(), "dct3");
    const std::size_t n = y.size();
    std::vector<double> out(y.begin(), y.end());
    out[0] *= 0.5;
    if (n > 1) {
        std::vector<double> tmp(n);
        auto tables = CosTables::get(n);
        idct_rec(out.data(), n, tmp.data(), *tables);
    }
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) v *= scale;
    return out;
}

std::vector<double> squared_dct_coefficients(const DctCoefficients& dct) {
    const std::size_t n = dct.values.size();
    std::vector<double> a(n > 0 ? n - 1 : 0);
    for (std::size_t k = 1; k < n; ++k) {
        const double half = dct.values[k] * 0.5;
        a[k - 1] = half * half;
    }
    return a;
}

}  // namespace neurowf
