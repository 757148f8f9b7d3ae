#include "connectgraph/draws.hpp"

#include <algorithm>
#include <array>

namespace connectgraph::draws {

namespace {

constexpr double kMinGap = 1e-3;

// Four values sorted descending with every adjacent gap >= kMinGap.
std::array<double, 4> sorted_four(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> u(lo, hi);
    for (;;) {
        std::array<double, 4> v{u(rng), u(rng), u(rng), u(rng)};
        std::sort(v.begin(), v.end(), std::greater<>());
        bool ok = true;
        for (int i = 0; i < 3; ++i) ok = ok && v[i] - v[i + 1] >= kMinGap;
        if (ok) return v;
    }
}

bool coin(std::mt19937_64& rng) { return std::uniform_int_distribution<int>(0, 1)(rng) == 1; }

}  // namespace

ToyKernelParams favorable_toy(std::mt19937_64& rng) {
    for (;;) {
        auto v = sorted_four(rng, 0.0, 1.0);
        const double s = v[0] + v[1] + v[2] + v[3];
        for (double& x : v) x /= s;
        ToyKernelParams p{v[0], v[1], v[2], v[3]};
        if (coin(rng)) std::swap(p.alpha_p, p.beta_p);
        // renormalize so the sum is 1 to the last bit where possible
        p.rho_p = 1.0 - (p.alpha_p + p.beta_p + p.gamma_p);
        if (p.strictly_ordered() && p.rho_p - std::max(p.alpha_p, p.beta_p) >= kMinGap) return p;
    }
}

ToyKernelParams flipped_toy(std::mt19937_64& rng) {
    ToyKernelParams p = favorable_toy(rng);
    std::swap(p.alpha_p, p.gamma_p);
    return p;
}

SeparationKernelParams separation_zero_beta_gamma(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.01, 0.32);
    const double a = u(rng);
    return {1.0 - 2.0 * a, a, 0.0, 0.0};
}

SeparationKernelParams separation_ordered(std::mt19937_64& rng) {
    for (;;) {
        auto v = sorted_four(rng, 0.0, 1.0);
        SeparationKernelParams p{v[0], v[1], v[2], v[3]};
        if (coin(rng)) std::swap(p.alpha_p, p.beta_p);
        const double s = p.rho_p + 2.0 * p.alpha_p + p.beta_p + 2.0 * p.gamma_p;
        p.alpha_p /= s;
        p.beta_p /= s;
        p.gamma_p /= s;
        p.rho_p = 1.0 - (2.0 * p.alpha_p + p.beta_p + 2.0 * p.gamma_p);
        if (p.strictly_ordered()) return p;
    }
}

SbmParams ordered_sbm(std::mt19937_64& rng, int r, int m, int n) {
    const auto v = sorted_four(rng, 0.02, 0.98);
    SbmParams p{r, m, n, v[0], v[1], v[2], v[3]};
    if (coin(rng)) std::swap(p.alpha, p.beta);
    return p;
}

}  // namespace connectgraph::draws
