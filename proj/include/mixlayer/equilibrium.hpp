#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "mixlayer/closures.hpp"
#include "mixlayer/errors.hpp"

namespace mixlayer {

/// Surface fluxes driving the column.
struct Forcing {
    double vx = 0.0;  ///< zonal wind-stress forcing (m^2/s^2)
    double vy = 0.0;  ///< meridional wind-stress forcing (m^2/s^2)
    double q = 0.0;   ///< surface density flux, nu2 drho/dz = q at z = 0
    PhysicalConstants constants;

    double wind2() const { return vx * vx + vy * vy; }
};

/// Wind-stress from air velocity: V = C_D |u_a|^2, componentwise.
inline Forcing forcing_from_wind(double ua, double va, double cd, double q,
                                 const PhysicalConstants& k) {
    return Forcing{cd * ua * ua, cd * va * va, q, k};
}

/// Slope C of the line h(R) = CR intersecting k(R) = f1^2/f2:
/// C = -rho_a^2 (Vx^2+Vy^2) / (g Q rho0). Sign(C) = -sign(Q).
inline double fixed_point_constant(const Forcing& f) {
    if (f.q == 0.0) throw ZeroFluxError();
    if (f.wind2() == 0.0) throw ZeroWindError();
    const auto& k = f.constants;
    return -k.rho_a * k.rho_a * f.wind2() / (k.g * f.q * k.rho0);
}

/// k(R) = f1(R)^2 / f2(R).
inline double k_curve(const ClosureModel& m, double r) {
    const double nu1 = m.f1(r);
    const double nu2 = m.f2(r);
    if (std::abs(nu2) < 1e-30) throw DiffusivityZeroError(r);
    return nu1 * nu1 / nu2;
}

/// Scalar fixed-point problem k(R) = C R for one model.
struct FixedPointProblem {
    ClosureModel model;
    double c;  ///< line slope (m^2/s)
};

/// Scan window and resolution for the root search.
struct RangeSpec {
    double lo = -10.0;
    double hi = 10.0;
    int samples_per_interval = 20000;
};

struct Root {
    double r;         ///< equilibrium Richardson number
    double nu1;       ///< f1(r)
    double nu2;       ///< f2(r)
    bool valid;       ///< f2(r) > 0
    double residual;  ///< |f1^2 - C R f2| / max(1, |C R f2|)
};

struct RootScan {
    std::vector<Root> roots;    ///< bracketed sign changes, ascending in R
    std::vector<Root> grazing;  ///< |k - CR| < 1e-12 without a sign change
};

namespace detail {

inline Root make_root(const ClosureModel& m, double c, double r) {
    const double nu1 = m.f1(r);
    const double nu2 = m.f2(r);
    const double rhs = c * r * nu2;
    const double res = std::abs(nu1 * nu1 - rhs) / std::max(1.0, std::abs(rhs));
    return Root{r, nu1, nu2, nu2 > 0.0, res};
}

}  // namespace detail

/// All solutions of k(R) = C R inside the window.
///
/// The window is split at the formula pole and at the f2 zero (when present),
/// each open sub-interval is sampled uniformly, sign changes of k(R) - CR are
/// refined by bisection (60 doublings reach the floating-point resolution of
/// the bracket), and roots closer than 1e-7 are merged. Samples where
/// |k - CR| dips below 1e-12 without a sign change are reported separately as
/// grazing (tangency) candidates, never merged into the root list.
inline RootScan solve_fixed_points(const FixedPointProblem& p,
                                   const RangeSpec& range = {}) {
    const ClosureModel& m = p.model;
    const double c = p.c;

    std::vector<double> cuts = {range.lo, range.hi};
    const double pole = m.pole();
    if (range.lo < pole && pole < range.hi) cuts.push_back(pole);
    if (auto band = invalid_interval(m)) {
        if (range.lo < band->first && band->first < range.hi)
            cuts.push_back(band->first);
    }
    std::sort(cuts.begin(), cuts.end());

    auto g = [&](double r) { return k_curve(m, r) - c * r; };

    RootScan out;
    const int n = std::max(range.samples_per_interval, 16);
    for (std::size_t seg = 0; seg + 1 < cuts.size(); ++seg) {
        const double a0 = cuts[seg], b0 = cuts[seg + 1];
        const double margin = std::max(1e-8, (b0 - a0) * 1e-12);
        const double a = a0 + margin, b = b0 - margin;
        if (!(a < b)) continue;
        const double h = (b - a) / (n - 1);

        double xp = a, gp = g(a);
        for (int i = 1; i < n; ++i) {
            const double x = (i == n - 1) ? b : a + i * h;
            const double gx = g(x);
            if ((gp < 0.0 && gx > 0.0) || (gp > 0.0 && gx < 0.0)) {
                double lo = xp, hi = x, glo = gp;
                for (int it = 0; it < 60; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double gm = g(mid);
                    if ((glo < 0.0) == (gm < 0.0)) {
                        lo = mid;
                        glo = gm;
                    } else {
                        hi = mid;
                    }
                }
                out.roots.push_back(detail::make_root(m, c, 0.5 * (lo + hi)));
            } else if (gx == 0.0) {
                out.roots.push_back(detail::make_root(m, c, x));
            } else if (std::abs(gx) < 1e-12 && std::abs(gp) >= 1e-12) {
                out.grazing.push_back(detail::make_root(m, c, x));
            }
            xp = x;
            gp = gx;
        }
    }

    std::sort(out.roots.begin(), out.roots.end(),
              [](const Root& x, const Root& y) { return x.r < y.r; });
    std::vector<Root> dedup;
    for (const Root& r : out.roots) {
        if (dedup.empty() || r.r - dedup.back().r > 1e-7) dedup.push_back(r);
    }
    out.roots = std::move(dedup);

    // drop grazing entries that duplicate a bracketed root
    std::erase_if(out.grazing, [&](const Root& gr) {
        return std::any_of(out.roots.begin(), out.roots.end(), [&](const Root& r) {
            return std::abs(r.r - gr.r) <= 1e-7;
        });
    });
    return out;
}

/// Dirichlet data at the bottom of the layer.
struct BoundaryValues {
    double ub = 0.0;       ///< u at z = -h (m/s)
    double vb = 0.0;       ///< v at z = -h (m/s)
    double rhob = 1025.0;  ///< rho at z = -h (kg/m^3)
    double h = 50.0;       ///< layer depth (m)
};

/// Steady state: constant viscosities and profiles affine in z.
struct Equilibrium {
    double re;       ///< equilibrium Richardson number
    double nu1e;     ///< f1(re)
    double nu2e;     ///< f2(re)
    double theta_e;  ///< du/dz = Vx rho_a / (rho0 nu1e)
    double beta_e;   ///< dv/dz = Vy rho_a / (rho0 nu1e)
    double psi_e;    ///< drho/dz = Q / nu2e
    BoundaryValues boundary;

    double u_at(double z) const { return boundary.ub + theta_e * (z + boundary.h); }
    double v_at(double z) const { return boundary.vb + beta_e * (z + boundary.h); }
    double rho_at(double z) const {
        return boundary.rhob + psi_e * (z + boundary.h);
    }
    /// Surface density flux consistent with the profile.
    double q() const { return nu2e * psi_e; }
};

/// Profiles through a fixed-point root R*. Throws InvalidEquilibriumError when
/// f2(R*) <= 0 (the steady problem is ill-posed there).
inline Equilibrium build_equilibrium(const ClosureModel& m, const Forcing& f,
                                     double r_star,
                                     const BoundaryValues& boundary) {
    const double nu2 = m.f2(r_star);
    if (nu2 <= 0.0) throw InvalidEquilibriumError(r_star);
    const double nu1 = m.f1(r_star);
    const auto& k = f.constants;
    return Equilibrium{r_star,
                       nu1,
                       nu2,
                       f.vx * k.rho_a / (k.rho0 * nu1),
                       f.vy * k.rho_a / (k.rho0 * nu1),
                       f.q / nu2,
                       boundary};
}

/// Equilibrium state with a prescribed Richardson number: holds (Vx, Vy),
/// chooses psi_e so that R(theta_e, beta_e, psi_e) = re exactly, which is the
/// steady state of the forcing Q = f2(re) psi_e. Used by sweeps; does not
/// reject f2 <= 0 so invalid zones can still be tabulated.
inline Equilibrium equilibrium_for_richardson(const ClosureModel& m, double re,
                                              double vx, double vy,
                                              const PhysicalConstants& k,
                                              const BoundaryValues& boundary) {
    if (vx * vx + vy * vy == 0.0) throw ZeroWindError();
    const double nu1 = m.f1(re);
    const double nu2 = m.f2(re);
    const double theta_e = vx * k.rho_a / (k.rho0 * nu1);
    const double beta_e = vy * k.rho_a / (k.rho0 * nu1);
    const double shear2 = theta_e * theta_e + beta_e * beta_e;
    const double psi_e = -re * shear2 * k.rho0 / k.g;
    return Equilibrium{re, nu1, nu2, theta_e, beta_e, psi_e, boundary};
}

}  // namespace mixlayer
