#pragma once

#include <cstddef>
#include <vector>

namespace mixlayer {

/// Thomas algorithm for a tridiagonal system. sub[i] multiplies x[i-1]
/// (sub[0] unused), sup[i] multiplies x[i+1] (sup[n-1] unused). rhs is
/// overwritten with the solution; scratch must have the same size. No
/// pivoting: rows here are diagonally dominant by construction.
inline void thomas_solve(const std::vector<double>& sub,
                         const std::vector<double>& diag,
                         const std::vector<double>& sup,
                         std::vector<double>& rhs,
                         std::vector<double>& scratch) {
    const std::size_t n = diag.size();
    scratch[0] = sup[0] / diag[0];
    rhs[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < n; ++i) {
        const double m = 1.0 / (diag[i] - sub[i] * scratch[i - 1]);
        scratch[i] = sup[i] * m;
        rhs[i] = (rhs[i] - sub[i] * rhs[i - 1]) * m;
    }
    for (std::size_t i = n - 1; i-- > 0;) {
        rhs[i] -= scratch[i] * rhs[i + 1];
    }
}

}  // namespace mixlayer
