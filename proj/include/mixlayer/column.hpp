#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "mixlayer/closures.hpp"
#include "mixlayer/equilibrium.hpp"
#include "mixlayer/errors.hpp"
#include "mixlayer/stability.hpp"
#include "mixlayer/tridiagonal.hpp"

namespace mixlayer {

/// Uniform node grid on [-h, 0]: z_k = -h + k dz, k = 0..n.
struct Grid {
    double h = 50.0;  ///< layer depth (m)
    int n = 200;      ///< number of cells (n+1 nodes), n >= 8

    double dz() const { return h / n; }
    double z(int k) const { return -h + k * dz(); }
    int nodes() const { return n + 1; }
};

/// Nodal fields at one time level; node 0 is the bottom Dirichlet row.
struct ColumnState {
    std::vector<double> u, v, rho;
    double t = 0.0;
};

struct SimConfig {
    Grid grid{};
    BoundaryValues boundary{};
    ClosureModel model{ClosureKind::R224, kPP81};
    Forcing forcing{};
    double dt = 30.0;
    double t_end = 864000.0;     ///< 10 days
    double theta_scheme = 1.0;   ///< 1 = backward Euler on diffusion
    double r_max = 1e6;          ///< Richardson clamp; nu tends to its floors
    double shear_eps = 1e-14;    ///< faces with theta^2+beta^2 below use r_max
};

/// Face-centered viscosity/diffusivity and Richardson diagnostics.
struct FaceCoefficients {
    std::vector<double> nu1, nu2, r;
    double r_min = 0, r_max = 0, r_surface = 0;
};

/// Centered-difference Richardson number per face, clamped to +-r_max; a face
/// with vanishing shear takes the clamp value itself (the closures have finite
/// limits there). Throws NegativeDiffusivityError on any face with f2 < 0.
inline FaceCoefficients face_coefficients(const ColumnState& s,
                                          const SimConfig& cfg) {
    const int n = cfg.grid.n;
    const double dz = cfg.grid.dz();
    const auto& k = cfg.forcing.constants;
    FaceCoefficients f;
    f.nu1.resize(n);
    f.nu2.resize(n);
    f.r.resize(n);
    for (int i = 0; i < n; ++i) {
        const double th = (s.u[i + 1] - s.u[i]) / dz;
        const double be = (s.v[i + 1] - s.v[i]) / dz;
        const double ps = (s.rho[i + 1] - s.rho[i]) / dz;
        const double shear2 = th * th + be * be;
        double r;
        if (shear2 < cfg.shear_eps) {
            r = ps > 0.0 ? -cfg.r_max : cfg.r_max;
        } else {
            r = std::clamp(-(k.g / k.rho0) * ps / shear2, -cfg.r_max, cfg.r_max);
        }
        f.r[i] = r;
        f.nu1[i] = cfg.model.f1(r);
        f.nu2[i] = cfg.model.f2(r);
        if (f.nu2[i] < 0.0) {
            throw NegativeDiffusivityError(-cfg.grid.h + (i + 0.5) * dz, r,
                                           f.nu2[i]);
        }
    }
    f.r_min = *std::min_element(f.r.begin(), f.r.end());
    f.r_max = *std::max_element(f.r.begin(), f.r.end());
    f.r_surface = f.r[n - 1];
    return f;
}

/// Nodal sampling of the equilibrium profiles (bottom node is exactly the
/// boundary data).
inline ColumnState equilibrium_state(const Equilibrium& eq, const Grid& grid) {
    ColumnState s;
    const int nn = grid.nodes();
    s.u.resize(nn);
    s.v.resize(nn);
    s.rho.resize(nn);
    const double dz = grid.dz();
    for (int i = 0; i < nn; ++i) {
        const double above = i * dz;  // z + h without cancellation
        s.u[i] = eq.boundary.ub + eq.theta_e * above;
        s.v[i] = eq.boundary.vb + eq.beta_e * above;
        s.rho[i] = eq.boundary.rhob + eq.psi_e * above;
    }
    return s;
}

namespace detail {

/// One theta-implicit diffusion solve: Dirichlet bottom row, surface flux row
/// by second-order ghost elimination
///   d phi_n/dt = 2 kappa (phi_{n-1}-phi_n)/dz^2 + 2 F/dz
/// with kappa the topmost interior face value, which makes affine steady
/// profiles exact fixed points.
inline void advance_field(std::vector<double>& phi,
                          const std::vector<double>& face_nu, double flux,
                          double bottom, double dt, double dz, double theta,
                          std::vector<double>& sub, std::vector<double>& diag,
                          std::vector<double>& sup, std::vector<double>& rhs,
                          std::vector<double>& scratch) {
    const int n = static_cast<int>(face_nu.size());  // nodes 0..n
    const double mu = dt / (dz * dz);

    sub[0] = 0.0;
    diag[0] = 1.0;
    sup[0] = 0.0;
    rhs[0] = bottom;
    for (int i = 1; i < n; ++i) {
        const double kl = face_nu[i - 1], kr = face_nu[i];
        sub[i] = -theta * mu * kl;
        diag[i] = 1.0 + theta * mu * (kl + kr);
        sup[i] = -theta * mu * kr;
        rhs[i] = phi[i] + (1.0 - theta) * mu *
                              (kl * phi[i - 1] - (kl + kr) * phi[i] +
                               kr * phi[i + 1]);
    }
    const double kt = face_nu[n - 1];
    sub[n] = -theta * 2.0 * mu * kt;
    diag[n] = 1.0 + theta * 2.0 * mu * kt;
    sup[n] = 0.0;
    rhs[n] = phi[n] + (1.0 - theta) * 2.0 * mu * kt * (phi[n - 1] - phi[n]) +
             2.0 * dt * flux / dz;

    thomas_solve(sub, diag, sup, rhs, scratch);
    phi = rhs;
}

}  // namespace detail

/// Advance one time step with coefficients lagged at the current state.
inline ColumnState step(const ColumnState& s, const SimConfig& cfg) {
    const FaceCoefficients fc = face_coefficients(s, cfg);
    const auto& k = cfg.forcing.constants;
    const double dz = cfg.grid.dz();
    const int nn = cfg.grid.nodes();

    ColumnState out = s;
    std::vector<double> sub(nn), diag(nn), sup(nn), rhs(nn), scratch(nn);
    const auto& b = cfg.boundary;
    detail::advance_field(out.u, fc.nu1, k.rho_a * cfg.forcing.vx / k.rho0, b.ub,
                          cfg.dt, dz, cfg.theta_scheme, sub, diag, sup, rhs,
                          scratch);
    detail::advance_field(out.v, fc.nu1, k.rho_a * cfg.forcing.vy / k.rho0, b.vb,
                          cfg.dt, dz, cfg.theta_scheme, sub, diag, sup, rhs,
                          scratch);
    detail::advance_field(out.rho, fc.nu2, cfg.forcing.q, b.rhob, cfg.dt, dz,
                          cfg.theta_scheme, sub, diag, sup, rhs, scratch);
    out.t = s.t + cfg.dt;
    return out;
}

/// Trapezoid L2 norm of a nodal field.
inline double l2_norm(const std::vector<double>& x, double dz) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double w = (i == 0 || i + 1 == x.size()) ? 0.5 : 1.0;
        s += w * x[i] * x[i];
    }
    return std::sqrt(dz * s);
}

struct SampleRow {
    double t = 0;
    double norm_u = 0, norm_v = 0, norm_rho = 0;  ///< L2 deviation from reference
    double r_surface = 0, r_min = 0, r_max = 0;
    bool valid = true;
};

struct RunResult {
    std::vector<SampleRow> samples;
    ColumnState final_state;
    bool zone_exit = false;
    double zone_exit_t = 0, zone_exit_r = 0, zone_exit_z = 0;
    bool growth_stop = false;
};

namespace detail {

inline SampleRow sample_row(const ColumnState& s, const ColumnState& ref,
                            const SimConfig& cfg) {
    SampleRow row;
    row.t = s.t;
    const double dz = cfg.grid.dz();
    std::vector<double> d(s.u.size());
    auto dev_norm = [&](const std::vector<double>& a,
                        const std::vector<double>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
        return l2_norm(d, dz);
    };
    row.norm_u = dev_norm(s.u, ref.u);
    row.norm_v = dev_norm(s.v, ref.v);
    row.norm_rho = dev_norm(s.rho, ref.rho);
    try {
        const FaceCoefficients fc = face_coefficients(s, cfg);
        row.r_surface = fc.r_surface;
        row.r_min = fc.r_min;
        row.r_max = fc.r_max;
    } catch (const NegativeDiffusivityError& e) {
        row.valid = false;
        row.r_surface = row.r_min = row.r_max = e.richardson;
    }
    return row;
}

}  // namespace detail

/// March the column to cfg.t_end, sampling deviation norms against a
/// reference state. A NegativeDiffusivityError halts the run and is recorded
/// on the result instead of propagating. When growth_stop > 0 the run also
/// halts once the scale-normalized total deviation exceeds growth_stop times
/// its initial value (u_scale, rho_scale nondimensionalize the three fields).
inline RunResult run_column(ColumnState state, const SimConfig& cfg,
                            const ColumnState& reference, int max_samples = 200,
                            double growth_stop = 0.0, double u_scale = 1.0,
                            double rho_scale = 1.0) {
    RunResult res;
    const long steps = std::lround(std::ceil(cfg.t_end / cfg.dt));
    const long every = std::max(1L, steps / std::max(1, max_samples));

    auto total = [&](const SampleRow& r) {
        const double a = r.norm_u / u_scale;
        const double b = r.norm_v / u_scale;
        const double c = r.norm_rho / rho_scale;
        return std::sqrt(a * a + b * b + c * c);
    };

    SampleRow first = detail::sample_row(state, reference, cfg);
    res.samples.push_back(first);
    const double total0 = total(first);

    for (long i = 0; i < steps; ++i) {
        try {
            state = step(state, cfg);
        } catch (const NegativeDiffusivityError& e) {
            res.zone_exit = true;
            res.zone_exit_t = state.t;
            res.zone_exit_r = e.richardson;
            res.zone_exit_z = e.z;
            SampleRow row = detail::sample_row(state, reference, cfg);
            row.valid = false;
            res.samples.push_back(row);
            break;
        }
        if ((i + 1) % every == 0 || i + 1 == steps) {
            res.samples.push_back(detail::sample_row(state, reference, cfg));
            if (growth_stop > 0.0 && total0 > 0.0 &&
                total(res.samples.back()) >= growth_stop * total0) {
                res.growth_stop = true;
                break;
            }
        }
    }
    res.final_state = std::move(state);
    return res;
}

enum class PerturbationShape { LowestMode, Random };
enum class DecayVerdict { Decay, Growth, ZoneExit, Stationary };

inline std::string verdict_name(DecayVerdict v) {
    switch (v) {
        case DecayVerdict::Decay: return "decay";
        case DecayVerdict::Growth: return "growth";
        case DecayVerdict::ZoneExit: return "zone-exit";
        case DecayVerdict::Stationary: return "stationary";
    }
    return "?";
}

struct ExperimentConfig {
    double amplitude = 1e-3;  ///< relative to each field's bottom-to-surface contrast
    PerturbationShape shape = PerturbationShape::Random;
    std::uint64_t seed = 0;
    double growth_threshold = 10.0;  ///< total-norm factor that ends the run early
    double late_window = 0.2;        ///< fraction of the run used for the verdict
    int max_samples = 200;
};

struct ExperimentResult {
    RunResult run;
    DecayVerdict verdict = DecayVerdict::Stationary;
    double late_ratio = 0.0;    ///< final norm / norm at start of late window
    double growth_factor = 0.0; ///< max norm / initial norm
    double decay_rate = 0.0;    ///< -d(ln norm)/dt over the late window
    double u_scale = 1.0, rho_scale = 1.0;
};

namespace detail {

/// splitmix64-based uniform in [-1, 1); reproducible from the seed alone,
/// independent of any library distribution implementation.
class UniformPm1 {
public:
    explicit UniformPm1(std::uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    double operator()() {
        // splitmix64
        std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        z = z ^ (z >> 31);
        return 2.0 * (static_cast<double>(z >> 11) * 0x1.0p-53) - 1.0;
    }

private:
    std::uint64_t s_;
};

}  // namespace detail

/// Per-field perturbation scaled by amplitude times the field's
/// bottom-to-surface contrast; zero at the bottom node so the Dirichlet row
/// stays exact.
inline std::vector<PerturbationState> perturbation_field(
    const Equilibrium& eq, const Grid& grid, const ExperimentConfig& ec) {
    const double cu = ec.amplitude * std::abs(eq.theta_e) * grid.h;
    const double cv = ec.amplitude * std::abs(eq.beta_e) * grid.h;
    const double crho = ec.amplitude * std::abs(eq.psi_e) * grid.h;
    std::vector<PerturbationState> dp(grid.nodes());
    if (ec.shape == PerturbationShape::LowestMode) {
        const double kz = M_PI / (2.0 * grid.h);
        for (int i = 1; i < grid.nodes(); ++i) {
            const double mode = std::cos(kz * grid.z(i));
            dp[i] = {cu * mode, cv * mode, crho * mode};
        }
    } else {
        detail::UniformPm1 rnd(ec.seed);
        for (int i = 1; i < grid.nodes(); ++i) {
            dp[i] = {cu * rnd(), cv * rnd(), crho * rnd()};
        }
    }
    return dp;
}

/// Evolve a perturbed equilibrium and judge the perturbation's fate. The
/// verdict compares the late-time norm ratio against 1; zone exits and early
/// growth stops override it.
inline ExperimentResult run_perturbation_experiment(const Equilibrium& eq,
                                                    const SimConfig& cfg,
                                                    const ExperimentConfig& ec) {
    const Grid& grid = cfg.grid;
    ColumnState ref = equilibrium_state(eq, grid);
    ColumnState state = ref;

    ExperimentResult out;
    out.u_scale = std::max(
        std::max(std::abs(eq.theta_e), std::abs(eq.beta_e)) * grid.h, 1e-300);
    out.rho_scale = std::max(std::abs(eq.psi_e) * grid.h, 1e-300);

    const auto dp = perturbation_field(eq, grid, ec);
    for (int i = 0; i < grid.nodes(); ++i) {
        state.u[i] += dp[i].u_prime;
        state.v[i] += dp[i].v_prime;
        state.rho[i] += dp[i].rho_prime;
    }

    out.run = run_column(std::move(state), cfg, ref, ec.max_samples,
                         ec.growth_threshold, out.u_scale, out.rho_scale);

    auto total = [&](const SampleRow& r) {
        const double a = r.norm_u / out.u_scale;
        const double b = r.norm_v / out.u_scale;
        const double cq = r.norm_rho / out.rho_scale;
        return std::sqrt(a * a + b * b + cq * cq);
    };
    const auto& ss = out.run.samples;
    const double n0 = total(ss.front());
    double peak = 0.0;
    for (const auto& r : ss) peak = std::max(peak, total(r));
    out.growth_factor = (n0 > 0.0) ? peak / n0 : 0.0;

    const double t_end = ss.back().t;
    const double t_late = ss.front().t + (1.0 - ec.late_window) *
                                             (t_end - ss.front().t);
    const SampleRow* late = &ss.front();
    for (const auto& r : ss) {
        if (r.t <= t_late) late = &r;
    }
    const double nl = total(*late), nf = total(ss.back());
    out.late_ratio = (nl > 0.0) ? nf / nl : 0.0;
    if (t_end > late->t && nl > 0.0 && nf > 0.0) {
        out.decay_rate = -std::log(nf / nl) / (t_end - late->t);
    }

    if (out.run.zone_exit) {
        out.verdict = DecayVerdict::ZoneExit;
    } else if (n0 <= 1e-14) {
        out.verdict = DecayVerdict::Stationary;
    } else if (out.run.growth_stop || out.late_ratio > 1.0) {
        out.verdict = DecayVerdict::Growth;
    } else {
        out.verdict = DecayVerdict::Decay;
    }
    return out;
}

}  // namespace mixlayer
