#pragma once

// Smooth potential well
//
//          { -V0 exp((x - x0)/a)   x < x0
//   V(x) = { -V0                   x0 <= x <= 0
//          { -V0 exp(-x/a)         x > 0
//
// and the per-energy constants of the region solutions. Natural units
// (hbar = c = m = 1).

#include "kgwell/error.hpp"
#include "kgwell/specfun.hpp"

#include <cmath>
#include <string>

namespace kgwell {

struct PotentialParams {
    double v0 = 1.0; ///< well depth, > 0
    double a = 0.5;  ///< smoothness length, > 0
    double x0 = 0.0; ///< left edge of the flat bottom, <= 0

    void validate() const
    {
        if (!(v0 > 0.0) || !std::isfinite(v0))
            throw InvalidParameter("v0 must be finite and > 0");
        if (!(a > 0.0) || !std::isfinite(a))
            throw InvalidParameter("a must be finite and > 0");
        if (!(x0 <= 0.0) || !std::isfinite(x0))
            throw InvalidParameter("x0 must be finite and <= 0");
    }
};

enum class Region { I, II, III };

inline const char* to_string(Region r)
{
    switch (r) {
    case Region::I: return "I";
    case Region::II: return "II";
    case Region::III: return "III";
    }
    return "?";
}

inline double potential_value(const PotentialParams& p, double x)
{
    if (x < p.x0)
        return -p.v0 * std::exp((x - p.x0) / p.a);
    if (x <= 0.0)
        return -p.v0;
    return -p.v0 * std::exp(-x / p.a);
}

/// The shared points x0 and 0 belong to the closed middle interval.
inline Region region_of(const PotentialParams& p, double x)
{
    if (x < p.x0)
        return Region::I;
    if (x <= 0.0)
        return Region::II;
    return Region::III;
}

struct EnergyQuantities {
    double e = 0.0;
    Complex kappa;      ///< -i a E
    double mu = 0.0;    ///< a sqrt(1 - E^2)
    Complex q;          ///< principal sqrt((E + V0)^2 - 1)
    double lambda = 0.0; ///< sqrt(1 - E^2), asymptotic decay rate
};

inline void check_window(double e)
{
    if (!(std::abs(e) < 1.0))
        throw OutOfWindow("energy must satisfy |E| < 1, got " + std::to_string(e));
}

inline EnergyQuantities energy_quantities(const PotentialParams& p, double e)
{
    check_window(e);
    EnergyQuantities out;
    out.e = e;
    out.lambda = std::sqrt((1.0 - e) * (1.0 + e));
    out.mu = p.a * out.lambda;
    out.kappa = Complex(0.0, -p.a * e);
    const double s = e + p.v0;
    out.q = std::sqrt(Complex((s - 1.0) * (s + 1.0), 0.0));
    return out;
}

} // namespace kgwell
