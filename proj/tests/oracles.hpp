#pragma once

// Test-only oracles. Each one re-derives a quantity through a different
// route than the library: finite differences for analytic derivatives, the
// diag + rank-one eigenvalue reduction for the cubic solver, and a dense
// scan of the cleared form f1^2 - C R f2 for root counting (the cleared form
// is finite and positive at f2 = 0, so it needs no pole bookkeeping).

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "mixlayer/closures.hpp"

namespace oracle {

inline double central_diff(const std::function<double(double)>& f, double x,
                           double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Deterministic uniform double in [lo, hi) from splitmix64 bits.
class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : s_(seed ? seed : 1) {}
    double operator()(double lo, double hi) {
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

private:
    std::uint64_t s_;
};

/// Quadratic-reduction coefficients of the perturbation matrix spectrum:
/// lambda = nu1 plus the roots of lambda^2 - S lambda + P with
/// S = nu1 + nu2 + a + b, P = nu1 nu2 + a nu2 + b nu1,
/// a = -2 R f1'(R), b = R f2'(R).
struct RankOneSpectrum {
    double nu1, nu2, a, b, sum, prod;
};

inline RankOneSpectrum rank_one_spectrum(const mixlayer::ClosureModel& m,
                                         double re) {
    RankOneSpectrum s{};
    s.nu1 = m.f1(re);
    s.nu2 = m.f2(re);
    s.a = -2.0 * re * m.df1(re);
    s.b = re * m.df2(re);
    s.sum = s.nu1 + s.nu2 + s.a + s.b;
    s.prod = s.nu1 * s.nu2 + s.a * s.nu2 + s.b * s.nu1;
    return s;
}

inline std::array<std::complex<double>, 3> rank_one_eigs(
    const mixlayer::ClosureModel& m, double re) {
    const RankOneSpectrum s = rank_one_spectrum(m, re);
    const double disc = s.sum * s.sum - 4.0 * s.prod;
    std::array<std::complex<double>, 3> out;
    out[0] = s.nu1;
    if (disc >= 0.0) {
        const double rt = std::sqrt(disc);
        out[1] = 0.5 * (s.sum + rt);
        out[2] = 0.5 * (s.sum - rt);
    } else {
        const double im = 0.5 * std::sqrt(-disc);
        out[1] = {0.5 * s.sum, im};
        out[2] = {0.5 * s.sum, -im};
    }
    return out;
}

/// Linear stability through the quadratic route: all eigenvalue real parts
/// positive iff S > 0 and P > 0 (nu1 = f1 > 0 always).
inline bool rank_one_stable(const mixlayer::ClosureModel& m, double re) {
    const RankOneSpectrum s = rank_one_spectrum(m, re);
    return s.sum > 0.0 && s.prod > 0.0;
}

/// Roots of k(R) = C R by dense sign-change scan of f1^2 - C R f2 refined by
/// bisection. Samples inside the pole guard are nudged off it.
inline std::vector<double> scan_roots(const mixlayer::ClosureModel& m, double c,
                                      double lo, double hi, int n = 200000) {
    auto cleared = [&](double r) {
        if (std::abs(1.0 + m.rate() * r) < 2e-9) r += 4e-9;
        const double f1 = m.f1(r);
        return f1 * f1 - c * r * m.f2(r);
    };
    std::vector<double> roots;
    const double h = (hi - lo) / n;
    double xp = lo, gp = cleared(lo);
    for (int i = 1; i <= n; ++i) {
        const double x = lo + i * h;
        const double gx = cleared(x);
        if ((gp < 0.0 && gx > 0.0) || (gp > 0.0 && gx < 0.0)) {
            double a = xp, b = x, ga = gp;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (a + b);
                const double gm = cleared(mid);
                if ((ga < 0.0) == (gm < 0.0)) {
                    a = mid;
                    ga = gm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(0.5 * (a + b));
        }
        xp = x;
        gp = gx;
    }
    return roots;
}

}  // namespace oracle
