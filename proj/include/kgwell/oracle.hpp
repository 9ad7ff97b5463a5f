#pragma once

// Independent checks of the analytic spectrum: direct integration of
//
//   phi'' + ((E - V(x))^2 - 1) phi = 0
//
// inward from both asymptotic regions (shooting), and the closed-form
// square-well condition that the smooth well approaches as a -> 0.
//
// Nothing here touches the special-function layer.

#include "kgwell/error.hpp"
#include "kgwell/matching.hpp"
#include "kgwell/potential.hpp"
#include "kgwell/spectrum.hpp"

#include <boost/numeric/odeint.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace kgwell {

struct IntegratorConfig {
    double rel_tol = 1e-10;
    double abs_tol = 1e-12;
    double span_lambdas = 40.0; ///< integration starts span_lambdas / lambda from the well
    long max_steps = 200000;

    void validate() const
    {
        if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
            throw InvalidParameter("IntegratorConfig tolerances must be > 0");
        if (!(span_lambdas > 0.0))
            throw InvalidParameter("IntegratorConfig span must be > 0");
        if (max_steps < 1)
            throw InvalidParameter("IntegratorConfig max_steps must be >= 1");
    }
};

/// (phi, phi') of an integrated solution.
using ShootState = std::array<double, 2>;

namespace detail {

inline void integrate_segment(const PotentialParams& p, double e, ShootState& y, double from,
                              double to, const IntegratorConfig& cfg, long& steps)
{
    namespace odeint = boost::numeric::odeint;
    if (from == to)
        return;
    auto rhs = [&](const ShootState& s, ShootState& ds, double x) {
        const double w = e - potential_value(p, x);
        ds[0] = s[1];
        ds[1] = -(w * w - 1.0) * s[0];
    };
    auto stepper = odeint::make_controlled(cfg.abs_tol, cfg.rel_tol,
                                           odeint::runge_kutta_dopri5<ShootState>());
    const double dir = to > from ? 1.0 : -1.0;
    double x = from;
    double dx = dir * std::min(0.01, std::abs(to - from));
    while (dir * (to - x) > 0.0) {
        if (dir * (x + dx - to) > 0.0)
            dx = to - x;
        if (++steps > cfg.max_steps)
            throw IntegrationFailure("shooting: step budget exhausted");
        const double before = x;
        if (stepper.try_step(rhs, y, x, dx) == odeint::success && x == before)
            throw IntegrationFailure("shooting: step size underflow");
    }
}

} // namespace detail

/// Integrates from the far left (x0 - span, pure decaying exponential start)
/// to `x_end` (>= that start), stepping exactly onto the kinks at x0 and 0.
inline ShootState shoot_from_left(double e, const PotentialParams& p, double x_end,
                                  const IntegratorConfig& cfg = {})
{
    const double lambda = std::sqrt((1.0 - e) * (1.0 + e));
    const double start = p.x0 - cfg.span_lambdas / lambda;
    ShootState y{1.0, lambda};
    long steps = 0;
    double x = start;
    for (double stop : {p.x0, 0.0, x_end}) {
        const double target = std::min(stop, x_end);
        if (target > x) {
            detail::integrate_segment(p, e, y, x, target, cfg, steps);
            x = target;
        }
    }
    return y;
}

/// Integrates from the far right (+span) leftward to `x_end`.
inline ShootState shoot_from_right(double e, const PotentialParams& p, double x_end,
                                   const IntegratorConfig& cfg = {})
{
    const double lambda = std::sqrt((1.0 - e) * (1.0 + e));
    const double start = cfg.span_lambdas / lambda;
    ShootState y{1.0, -lambda};
    long steps = 0;
    double x = start;
    for (double stop : {0.0, p.x0, x_end}) {
        const double target = std::max(stop, x_end);
        if (target < x) {
            detail::integrate_segment(p, e, y, x, target, cfg, steps);
            x = target;
        }
    }
    return y;
}

/// Normalized Wronskian of the left- and right-decaying solutions at x = 0:
///
///   (phi_L phi_R' - phi_L' phi_R) / (|(phi_L, phi_L')| |(phi_R, phi_R')|)
///
/// Zero exactly at a bound-state energy.
inline double shooting_mismatch(double e, const PotentialParams& params, const IntegratorConfig& cfg = {})
{
    params.validate();
    cfg.validate();
    check_window(e);
    const auto l = shoot_from_left(e, params, 0.0, cfg);
    const auto r = shoot_from_right(e, params, 0.0, cfg);
    const double w = l[0] * r[1] - l[1] * r[0];
    return w / (std::hypot(l[0], l[1]) * std::hypot(r[0], r[1]));
}

namespace detail {

template <class F>
std::vector<double> bracket_and_bisect(F&& f, const std::vector<double>& grid, double tol)
{
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        values[i] = f(grid[i]);
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        double lo = grid[i], hi = grid[i + 1];
        double flo = values[i], fhi = values[i + 1];
        if (flo == 0.0) {
            roots.push_back(lo);
            continue;
        }
        if (flo * fhi > 0.0 || fhi == 0.0)
            continue;
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            const double fm = f(mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            if ((fm < 0.0) == (flo < 0.0)) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        roots.push_back(0.5 * (lo + hi));
    }
    if (!values.empty() && values.back() == 0.0)
        roots.push_back(grid.back());
    return roots;
}

} // namespace detail

inline constexpr double kShootingBisectionTol = 1e-12;

/// Bound-state energies from sign changes of shooting_mismatch on the scan grid.
inline std::vector<double> shooting_eigenvalues(const PotentialParams& params, const ScanConfig& scan = {},
                                                const IntegratorConfig& cfg = {})
{
    params.validate();
    scan.validate();
    cfg.validate();
    return detail::bracket_and_bisect([&](double e) { return shooting_mismatch(e, params, cfg); },
                                      scan.grid(), kShootingBisectionTol);
}

/// Square well of depth v0 and the given width:
///
///   (q^2 - lambda^2) sin(q w)/q - 2 lambda cos(q w),
///
/// i.e. tan(q w)(q^2 - lambda^2) - 2 lambda q multiplied by cos(q w)/q, which
/// removes the poles of tan and the spurious zero at q = 0. For
/// (e + v0)^2 < 1 the trigonometric functions continue to hyperbolic ones.
inline double square_well_condition(double e, double v0, double width)
{
    check_window(e);
    if (!(width > 0.0))
        throw InvalidParameter("square well width must be > 0");
    const double lambda = std::sqrt((1.0 - e) * (1.0 + e));
    const double s = e + v0;
    const double qq = (s - 1.0) * (s + 1.0);
    const auto [c, sn] = detail::flat_propagator(qq, width);
    return (qq - lambda * lambda) * sn - 2.0 * lambda * c;
}

inline std::vector<double> square_well_eigenvalues(double v0, double width, const ScanConfig& scan = {})
{
    scan.validate();
    return detail::bracket_and_bisect([&](double e) { return square_well_condition(e, v0, width); },
                                      scan.grid(), kShootingBisectionTol);
}

/// Eigenvalues of the cusp well (x0 = 0) from the analytic two-region match.
inline std::vector<double> cusp_limit_check(double v0, double a, const ScanConfig& scan = {})
{
    return find_eigenvalues({v0, a, 0.0}, scan);
}

/// Largest pointwise deviation between two ascending eigenvalue lists;
/// +inf when their lengths differ, 0 for two empty lists.
inline double max_deviation(const std::vector<double>& lhs, const std::vector<double>& rhs)
{
    if (lhs.size() != rhs.size())
        return std::numeric_limits<double>::infinity();
    double worst = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i)
        worst = std::max(worst, std::abs(lhs[i] - rhs[i]));
    return worst;
}

} // namespace kgwell
