#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "mixlayer/closures.hpp"
#include "mixlayer/cubic.hpp"
#include "mixlayer/equilibrium.hpp"

namespace mixlayer {

/// Pointwise deviation from the equilibrium profiles.
struct PerturbationState {
    double u_prime = 0.0;    ///< m/s
    double v_prime = 0.0;    ///< m/s
    double rho_prime = 0.0;  ///< kg/m^3
};

/// Linearized diffusion matrix of the perturbation system, with the
/// equilibrium data and closure partials it was assembled from.
struct PerturbationMatrix {
    std::array<std::array<double, 3>, 3> a{};
    double theta_e = 0, beta_e = 0, psi_e = 0, nu1e = 0, nu2e = 0;
    std::array<double, 3> dnu1{};  ///< (dnu1/dtheta, dnu1/dbeta, dnu1/dpsi)
    std::array<double, 3> dnu2{};

    double frobenius() const {
        double s = 0;
        for (const auto& row : a)
            for (double x : row) s += x * x;
        return std::sqrt(s);
    }
};

/// A = diag(nu1e, nu1e, nu2e) + u w^T with
///   u = (theta_e f1'(Re), beta_e f1'(Re), psi_e f2'(Re)),
///   w = grad R at the equilibrium;
/// entrywise this is the first-order coefficient matrix of the perturbation
/// equations, e.g. A11 = nu1e + theta_e (dnu1/dtheta)^e. The closure partials
/// come from the chain rule (dnu_k/dx)^e = f_k'(Re) (dR/dx)^e.
inline PerturbationMatrix assemble_matrix(const Equilibrium& eq,
                                          const ClosureModel& m,
                                          const PhysicalConstants& k) {
    PerturbationMatrix pm;
    pm.theta_e = eq.theta_e;
    pm.beta_e = eq.beta_e;
    pm.psi_e = eq.psi_e;
    pm.nu1e = eq.nu1e;
    pm.nu2e = eq.nu2e;

    const ShearState s{eq.theta_e, eq.beta_e, eq.psi_e};
    const auto grad = richardson_gradient(s, k);  // throws ZeroShearError
    const double d1 = m.df1(eq.re);
    const double d2 = m.df2(eq.re);
    for (int j = 0; j < 3; ++j) {
        pm.dnu1[j] = d1 * grad[j];
        pm.dnu2[j] = d2 * grad[j];
    }

    const std::array<double, 3> scale{eq.theta_e, eq.beta_e, eq.psi_e};
    for (int i = 0; i < 3; ++i) {
        const auto& dnu = (i < 2) ? pm.dnu1 : pm.dnu2;
        for (int j = 0; j < 3; ++j) pm.a[i][j] = scale[i] * dnu[j];
    }
    pm.a[0][0] += eq.nu1e;
    pm.a[1][1] += eq.nu1e;
    pm.a[2][2] += eq.nu2e;
    return pm;
}

inline double trace_of(const PerturbationMatrix& pm) {
    return pm.a[0][0] + pm.a[1][1] + pm.a[2][2];
}

/// Sum of the three principal 2x2 minors (= trace of the adjugate).
inline double trace_adjugate_of(const PerturbationMatrix& pm) {
    const auto& a = pm.a;
    return (a[1][1] * a[2][2] - a[1][2] * a[2][1]) +
           (a[0][0] * a[2][2] - a[0][2] * a[2][0]) +
           (a[0][0] * a[1][1] - a[0][1] * a[1][0]);
}

inline double det_of(const PerturbationMatrix& pm) {
    const auto& a = pm.a;
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
}

/// Roots of the characteristic cubic
/// lambda^3 - tr lambda^2 + trAdj lambda - det, real part descending.
inline std::array<std::complex<double>, 3> eigenvalues(
    const PerturbationMatrix& pm) {
    return cubic_roots(-trace_of(pm), trace_adjugate_of(pm), -det_of(pm));
}

enum class Classification { Stable, Unstable, PhysicallyInvalid, Marginal };

inline std::string classification_name(Classification c) {
    switch (c) {
        case Classification::Stable: return "Stable";
        case Classification::Unstable: return "Unstable";
        case Classification::PhysicallyInvalid: return "PhysicallyInvalid";
        case Classification::Marginal: return "Marginal";
    }
    return "?";
}

struct StabilityReport {
    std::array<std::complex<double>, 3> eigs{};
    double det = 0, trace = 0, trace_adj = 0;
    Classification classification = Classification::Marginal;
    bool triple_pass = false;         ///< det > 0 and tr > 0 and tr(Adj) > 0
    bool routh_hurwitz_pass = false;  ///< triple plus tr * tr(Adj) > det
    bool criteria_agree = false;      ///< triple vs sign of eigenvalue real parts
};

/// Ground truth is the sign of the eigenvalue real parts with a margin of
/// eps_scale * ||A||_F separating Stable/Unstable from Marginal. The
/// (det, tr, trAdj) sign triple and the full Routh-Hurwitz set are evaluated
/// from the matrix entries and recorded, not trusted: for a real 3x3 matrix
/// the triple alone is necessary but not sufficient when a complex pair is
/// present.
inline StabilityReport classify(const PerturbationMatrix& pm, double f2_at_re,
                                double eps_scale = 1e-12) {
    StabilityReport rep;
    rep.eigs = eigenvalues(pm);
    rep.det = det_of(pm);
    rep.trace = trace_of(pm);
    rep.trace_adj = trace_adjugate_of(pm);
    rep.triple_pass = rep.det > 0.0 && rep.trace > 0.0 && rep.trace_adj > 0.0;
    rep.routh_hurwitz_pass =
        rep.triple_pass && rep.trace * rep.trace_adj > rep.det;

    double min_re = rep.eigs[0].real();
    for (const auto& l : rep.eigs) min_re = std::min(min_re, l.real());
    rep.criteria_agree = rep.triple_pass == (min_re > 0.0);

    const double eps = eps_scale * pm.frobenius();
    if (f2_at_re <= 0.0) {
        rep.classification = Classification::PhysicallyInvalid;
    } else if (min_re > eps) {
        rep.classification = Classification::Stable;
    } else if (min_re < -eps) {
        rep.classification = Classification::Unstable;
    } else {
        rep.classification = Classification::Marginal;
    }
    return rep;
}

/// One sweep entry; when ok is false the solver failed at this point (e.g. a
/// grid point on the formula pole) and error holds the reason.
struct MapRow {
    ClosureKind kind;
    double re = 0;  ///< equilibrium Richardson number of the row
    double q = 0;   ///< consistent surface flux
    double c = 0;   ///< line slope (nan where undefined, i.e. re = 0)
    bool ok = false;
    std::string error;
    StabilityReport report;
};

/// Classify prescribed equilibrium Richardson numbers. (Vx, Vy) are held
/// fixed and Q is chosen per point so each re is a genuine steady state of
/// its forcing; the classification itself depends only on re.
inline std::vector<MapRow> stability_map_over_r(
    const ClosureModel& m, const std::vector<double>& r_grid, double vx,
    double vy, const PhysicalConstants& k, const BoundaryValues& boundary) {
    std::vector<MapRow> rows;
    rows.reserve(r_grid.size());
    for (double re : r_grid) {
        MapRow row;
        row.kind = m.kind();
        row.re = re;
        try {
            const Equilibrium eq =
                equilibrium_for_richardson(m, re, vx, vy, k, boundary);
            row.q = eq.q();
            row.c = (re != 0.0) ? k_curve(m, re) / re
                                : std::numeric_limits<double>::quiet_NaN();
            row.report = classify(assemble_matrix(eq, m, k), eq.nu2e);
            row.ok = true;
        } catch (const std::exception& e) {
            row.error = e.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

/// Solve the fixed-point problem per C and classify every root. (Vx, Vy) set
/// the wind magnitude; Q follows from C. Emits one row per root.
inline std::vector<MapRow> stability_map_over_c(
    const ClosureModel& m, const std::vector<double>& c_grid, double vx,
    double vy, const PhysicalConstants& k, const BoundaryValues& boundary,
    const RangeSpec& range = {}) {
    std::vector<MapRow> rows;
    for (double c : c_grid) {
        MapRow proto;
        proto.kind = m.kind();
        proto.c = c;
        if (c == 0.0) {
            proto.error = "C = 0 has no fixed-point line";
            rows.push_back(std::move(proto));
            continue;
        }
        const double wind2 = vx * vx + vy * vy;
        const double q = -k.rho_a * k.rho_a * wind2 / (k.g * k.rho0 * c);
        try {
            const RootScan scan = solve_fixed_points({m, c}, range);
            if (scan.roots.empty()) {
                proto.error = "no root in scan window";
                rows.push_back(std::move(proto));
                continue;
            }
            for (const Root& root : scan.roots) {
                MapRow row = proto;
                row.re = root.r;
                row.q = q;
                const Equilibrium eq = equilibrium_for_richardson(
                    m, root.r, vx, vy, k, boundary);
                row.report = classify(assemble_matrix(eq, m, k), eq.nu2e);
                row.ok = true;
                rows.push_back(std::move(row));
            }
        } catch (const std::exception& e) {
            proto.error = e.what();
            rows.push_back(std::move(proto));
        }
    }
    return rows;
}

}  // namespace mixlayer
