#pragma once

#include <stdexcept>
#include <string>

namespace mixlayer {

/// A closure formula was evaluated at its singularity, |1 + cR| below the
/// pole guard.
struct PoleError : std::runtime_error {
    double richardson;
    explicit PoleError(double r)
        : std::runtime_error("eddy coefficient evaluated at its pole, R = " +
                             std::to_string(r)),
          richardson(r) {}
};

/// Richardson number requested with vanishing shear (theta^2 + beta^2 = 0).
struct ZeroShearError : std::runtime_error {
    ZeroShearError()
        : std::runtime_error(
              "Richardson number undefined: zero shear (theta^2 + beta^2 = 0)") {}
};

/// Q = 0 makes the fixed-point constant infinite.
struct ZeroFluxError : std::runtime_error {
    ZeroFluxError()
        : std::runtime_error("surface density flux Q = 0: fixed-point constant "
                             "is undefined") {}
};

/// Vx^2 + Vy^2 = 0 leaves the equilibrium shear undefined.
struct ZeroWindError : std::runtime_error {
    ZeroWindError()
        : std::runtime_error("zero wind stress: equilibrium shear undefined") {}
};

/// f2(R) vanished where a finite k(R) = f1^2/f2 was required.
struct DiffusivityZeroError : std::runtime_error {
    double richardson;
    explicit DiffusivityZeroError(double r)
        : std::runtime_error("diffusivity f2(R) = 0 at R = " + std::to_string(r)),
          richardson(r) {}
};

/// Equilibrium requested at a root with f2(R*) <= 0.
struct InvalidEquilibriumError : std::runtime_error {
    double richardson;
    explicit InvalidEquilibriumError(double r)
        : std::runtime_error("equilibrium not physically valid: f2(R) <= 0 at "
                             "R = " + std::to_string(r)),
          richardson(r) {}
};

/// A column face entered the f2 < 0 zone; the diffusion problem is ill-posed
/// there and the run must halt.
struct NegativeDiffusivityError : std::runtime_error {
    double z;           ///< face depth (m)
    double richardson;  ///< offending face Richardson number
    double f2_value;
    NegativeDiffusivityError(double z_, double r, double f2v)
        : std::runtime_error("negative diffusivity f2 = " + std::to_string(f2v) +
                             " at z = " + std::to_string(z_) +
                             ", R = " + std::to_string(r)),
          z(z_), richardson(r), f2_value(f2v) {}
};

/// Configuration file problem; carries the line number (0 when not tied to a
/// specific line) and the offending key.
struct ConfigError : std::runtime_error {
    int line;
    std::string key;
    ConfigError(const std::string& what, int line_ = 0, std::string key_ = "")
        : std::runtime_error(what), line(line_), key(std::move(key_)) {}
};

}  // namespace mixlayer
