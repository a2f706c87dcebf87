#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace mixlayer {

/// Roots of lambda^3 + b lambda^2 + c lambda + d, closed form.
///
/// The depressed cubic t^3 + p t + q is classified by the sign of the
/// discriminant -4p^3 - 27q^2, normalized by s^6 with
/// s = max(sqrt|p|, cbrt|q|); |disc| <= 1e-13 s^6 selects the repeated-root
/// branch, whose formulas (t = 3q/p simple, t = -3q/2p double) stay first
/// order in coefficient perturbations where the generic formulas lose half
/// the digits. Real roots from the generic branches get two Newton steps.
/// Sorted by real part descending, then imaginary part descending.
inline std::array<std::complex<double>, 3> cubic_roots(double b, double c,
                                                       double d) {
    const double shift = b / 3.0;
    const double p = c - b * b / 3.0;
    const double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    const double s = std::max(std::sqrt(std::abs(p)), std::cbrt(std::abs(q)));
    std::array<std::complex<double>, 3> t;

    auto polish = [&](double x) {
        for (int i = 0; i < 2; ++i) {
            const double f = (x * x + p) * x + q;
            const double fp = 3.0 * x * x + p;
            if (fp == 0.0) break;
            const double xn = x - f / fp;
            const double fn = (xn * xn + p) * xn + q;
            if (std::abs(fn) >= std::abs(f)) break;
            x = xn;
        }
        return x;
    };

    if (s == 0.0) {
        t = {0.0, 0.0, 0.0};  // triple root
    } else {
        const double disc = -4.0 * p * p * p - 27.0 * q * q;
        const double tol = 1e-13 * s * s * s * s * s * s;
        if (std::abs(disc) <= tol) {
            // repeated root; here p ~ -s^2 is bounded away from zero
            const double td = -3.0 * q / (2.0 * p);
            const double t1 = 3.0 * q / p;
            t = {t1, td, td};
        } else if (disc > 0.0) {
            // three distinct real roots, trigonometric form
            const double mcoef = 2.0 * std::sqrt(-p / 3.0);
            const double arg = std::clamp(3.0 * q / (p * mcoef), -1.0, 1.0);
            const double phi = std::acos(arg);
            for (int k = 0; k < 3; ++k) {
                const double tk =
                    mcoef * std::cos(phi / 3.0 - 2.0 * M_PI * k / 3.0);
                t[k] = polish(tk);
            }
        } else {
            // one real root and a complex pair (Cardano, cancellation-safe
            // cube root choice)
            const double big = q * q / 4.0 + p * p * p / 27.0;  // > 0 here
            const double sq = std::sqrt(big);
            const double u3 = -q / 2.0 - std::copysign(sq, q);
            const double u = std::cbrt(u3);
            const double v = (u != 0.0) ? -p / (3.0 * u) : 0.0;
            const double tr = polish(u + v);
            // deflate: pair solves t^2 + tr t + (tr^2 + p) = 0
            const double half = -tr / 2.0;
            const double im2 = (tr * tr + p) - half * half;
            const double im = std::sqrt(std::max(im2, 0.0));
            t = {tr, {half, im}, {half, -im}};
        }
    }

    std::array<std::complex<double>, 3> out;
    for (int i = 0; i < 3; ++i) out[i] = t[i] - shift;
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& bb) {
        if (a.real() != bb.real()) return a.real() > bb.real();
        return a.imag() > bb.imag();
    });
    return out;
}

}  // namespace mixlayer
