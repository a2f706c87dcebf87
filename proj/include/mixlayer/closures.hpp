#pragma once

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "mixlayer/errors.hpp"

namespace mixlayer {

/// Guard on |1 + cR| below which closure evaluation throws PoleError.
inline constexpr double kPoleEps = 1e-9;

/// Coefficient set for the eddy viscosity/diffusivity formulas (all m^2/s).
/// beta2 is used only by R-2-3 and R-2-2; leave it at 0 to pick up the
/// model-specific default on construction.
struct Coefficients {
    double alpha1 = 1e-4;  ///< viscosity floor
    double beta1 = 1e-2;   ///< viscosity amplitude
    double alpha2 = 1e-5;  ///< diffusivity floor
    double beta2 = 0.0;    ///< diffusivity amplitude (R-2-3, R-2-2 only)
};

/// Pacanowski-Philander tropical calibration.
inline constexpr Coefficients kPP81{1e-4, 1e-2, 1e-5, 0.0};
/// Calibration used by the OPA circulation code.
inline constexpr Coefficients kOPA{1e-6, 1e-2, 1e-7, 0.0};

inline std::optional<Coefficients> preset_by_name(std::string_view name) {
    if (name == "PP81") return kPP81;
    if (name == "OPA") return kOPA;
    return std::nullopt;
}

enum class ClosureKind { R213, R23, R224, R22 };

inline constexpr std::array<ClosureKind, 4> kAllKinds = {
    ClosureKind::R213, ClosureKind::R23, ClosureKind::R224, ClosureKind::R22};

inline std::string kind_name(ClosureKind k) {
    switch (k) {
        case ClosureKind::R213: return "R-2-1-3";
        case ClosureKind::R23: return "R-2-3";
        case ClosureKind::R224: return "R-2-2-4";
        case ClosureKind::R22: return "R-2-2";
    }
    return "?";
}

inline std::optional<ClosureKind> kind_by_name(std::string_view name) {
    if (name == "R-2-1-3") return ClosureKind::R213;
    if (name == "R-2-3") return ClosureKind::R23;
    if (name == "R-2-2-4") return ClosureKind::R224;
    if (name == "R-2-2") return ClosureKind::R22;
    return std::nullopt;
}

/// Default beta2 for R-2-3 is alpha2 * 21.5^3, which puts the f2 sign change
/// at R = -2.25 (x = 1 + 10R = -21.5). R-2-2 mirrors beta1.
inline double default_beta2(ClosureKind kind, const Coefficients& c) {
    if (kind == ClosureKind::R23) return c.alpha2 * 21.5 * 21.5 * 21.5;
    if (kind == ClosureKind::R22) return c.beta1;
    return 0.0;
}

/// One of the four Richardson-number parametrizations
///   f1(R) = alpha1 + beta1 / (1 + cR)^2        (c = 10 for R-2-3, else 5)
///   R-2-1-3: f2 = alpha2 + alpha1/(1+5R)  + beta1/(1+5R)^3
///   R-2-3:   f2 = alpha2 + beta2/(1+10R)^3
///   R-2-2-4: f2 = alpha2 + alpha1/(1+5R)^2 + beta1/(1+5R)^4
///   R-2-2:   f2 = alpha2 + beta2/(1+5R)^2
class ClosureModel {
public:
    ClosureModel(ClosureKind kind, Coefficients coeffs) : kind_(kind), c_(coeffs) {
        if (c_.beta2 == 0.0) c_.beta2 = default_beta2(kind, c_);
    }

    ClosureKind kind() const { return kind_; }
    const Coefficients& coeffs() const { return c_; }
    std::string name() const { return kind_name(kind_); }

    /// 5 or 10, the factor multiplying R inside the formulas.
    double rate() const { return kind_ == ClosureKind::R23 ? 10.0 : 5.0; }
    /// Location of the formula singularity, R = -1/rate.
    double pole() const { return -1.0 / rate(); }

    /// Eddy viscosity f1(R). Throws PoleError within kPoleEps of the pole.
    double f1(double r) const {
        const double x = denom(r);
        return c_.alpha1 + c_.beta1 / (x * x);
    }

    /// Eddy diffusivity f2(R).
    double f2(double r) const {
        const double x = denom(r);
        switch (kind_) {
            case ClosureKind::R213:
                return c_.alpha2 + c_.alpha1 / x + c_.beta1 / (x * x * x);
            case ClosureKind::R23:
                return c_.alpha2 + c_.beta2 / (x * x * x);
            case ClosureKind::R224:
                return c_.alpha2 + c_.alpha1 / (x * x) + c_.beta1 / (x * x * x * x);
            case ClosureKind::R22:
                return c_.alpha2 + c_.beta2 / (x * x);
        }
        return 0.0;
    }

    /// d f1 / dR = -2 c beta1 / (1 + cR)^3.
    double df1(double r) const {
        const double x = denom(r);
        return -2.0 * rate() * c_.beta1 / (x * x * x);
    }

    /// d f2 / dR, closed form per model.
    double df2(double r) const {
        const double x = denom(r);
        const double x2 = x * x;
        switch (kind_) {
            case ClosureKind::R213:
                return -5.0 * c_.alpha1 / x2 - 15.0 * c_.beta1 / (x2 * x2);
            case ClosureKind::R23:
                return -30.0 * c_.beta2 / (x2 * x2);
            case ClosureKind::R224:
                return -10.0 * c_.alpha1 / (x2 * x) - 20.0 * c_.beta1 / (x2 * x2 * x);
            case ClosureKind::R22:
                return -10.0 * c_.beta2 / (x2 * x);
        }
        return 0.0;
    }

private:
    double denom(double r) const {
        const double x = 1.0 + rate() * r;
        if (std::abs(x) < kPoleEps) throw PoleError(r);
        return x;
    }

    ClosureKind kind_;
    Coefficients c_;
};

struct PhysicalConstants {
    double g = 9.81;       ///< gravitational acceleration (m/s^2)
    double rho0 = 1025.0;  ///< reference water density (kg/m^3)
    double rho_a = 1.2;    ///< air density (kg/m^3)
};

/// Vertical gradients of the resolved state.
struct ShearState {
    double theta = 0.0;  ///< du/dz (1/s)
    double beta = 0.0;   ///< dv/dz (1/s)
    double psi = 0.0;    ///< drho/dz (kg/m^4)
};

/// R = -(g/rho0) psi / (theta^2 + beta^2). Throws ZeroShearError when the
/// shear vanishes.
inline double richardson(const ShearState& s, const PhysicalConstants& k) {
    const double shear2 = s.theta * s.theta + s.beta * s.beta;
    if (shear2 == 0.0) throw ZeroShearError();
    return -(k.g / k.rho0) * s.psi / shear2;
}

/// (dR/dtheta, dR/dbeta, dR/dpsi) at the given state.
inline std::array<double, 3> richardson_gradient(const ShearState& s,
                                                 const PhysicalConstants& k) {
    const double shear2 = s.theta * s.theta + s.beta * s.beta;
    if (shear2 == 0.0) throw ZeroShearError();
    const double r = -(k.g / k.rho0) * s.psi / shear2;
    return {-2.0 * s.theta * r / shear2, -2.0 * s.beta * r / shear2,
            -(k.g / k.rho0) / shear2};
}

/// Open interval (R_lo, pole) on which f2 < 0, or nullopt when f2 stays
/// positive (R-2-2-4 and R-2-2 with beta2 > 0). The left endpoint is located
/// by a sign-change scan (1e4 points per unit R) refined by bisection.
inline std::optional<std::pair<double, double>> invalid_interval(
    const ClosureModel& m) {
    const double pole = m.pole();
    const double near = pole - 1e-7;
    if (m.f2(near) >= 0.0) return std::nullopt;

    // walk left until f2 turns positive again (alpha2 wins as R -> -inf)
    double lo = pole - 1.0;
    while (m.f2(lo) < 0.0) {
        lo = pole - 2.0 * (pole - lo);
        if (pole - lo > 1e7) return std::nullopt;  // unreachable for valid coeffs
    }

    // scan toward the pole for the bracket, then bisect
    const double step = 1e-4;
    double a = lo, b = near;
    for (double r = lo; r < near; r += step) {
        const double rn = std::min(r + step, near);
        if (m.f2(r) > 0.0 && m.f2(rn) <= 0.0) {
            a = r;
            b = rn;
            break;
        }
    }
    for (int i = 0; i < 100 && (b - a) > 1e-13; ++i) {
        const double mid = 0.5 * (a + b);
        (m.f2(mid) > 0.0 ? a : b) = mid;
    }
    return std::make_pair(0.5 * (a + b), pole);
}

}  // namespace mixlayer
