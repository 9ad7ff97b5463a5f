#pragma once

// Regular region solutions of
//
//   phi'' + ((E - V(x))^2 - 1) phi = 0
//
// for the smooth well, their matching at x = x0 and x = 0, and the
// eigenvalue condition whose zeros in (-1, 1) are the bound states.
//
// Regions I and III share one analytic form. With t the distance into a
// tail (t = x for region III, t = x0 - x for region I) and
// z = 2 i a V0 exp(-t/a),
//
//   phi(t) = z^{-1/2} M_{kappa,mu}(z) = e^{-z/2} z^mu M(mu - kappa + 1/2, 1 + 2 mu, z),
//
// which decays as exp(-lambda t). Region II is b3 exp(-iqx) + b4 exp(iqx).

#include "kgwell/error.hpp"
#include "kgwell/potential.hpp"
#include "kgwell/specfun.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <complex>
#include <numbers>

namespace kgwell {

struct WaveValue {
    Complex phi;
    Complex dphi; ///< d phi / dx
};

struct MatchedWavefunction {
    double e = 0.0;
    PotentialParams params;
    Complex b1;
    Complex b3;
    Complex b4{1.0, 0.0};
    Complex b5;
};

struct EigenvalueResidual {
    Complex value;
    double scale = 1.0; ///< largest |squared bracket|, for relative zero tests
};

inline constexpr double kEigenTolerance = 1e-8;

namespace detail {

// phi and d phi / dt of the decaying tail solution at distance t >= 0 into the tail.
inline WaveValue tail_solution(const PotentialParams& p, const EnergyQuantities& eq, double t)
{
    const Complex log_z(std::log(2.0 * p.a * p.v0) - t / p.a, 0.5 * std::numbers::pi);
    const Complex z = std::exp(log_z);
    const Complex ka = eq.mu - eq.kappa + 0.5;
    const Complex kb = 1.0 + 2.0 * eq.mu;
    const Complex m = kummer_m(ka, kb, z);
    const Complex dm = kummer_m_derivative(ka, kb, z);
    const Complex front = std::exp(-0.5 * z + eq.mu * log_z);
    WaveValue out;
    out.phi = front * m;
    out.dphi = -front * ((eq.mu - 0.5 * z) * m + z * dm) / p.a;
    return out;
}

// cos(k x) and sin(k x)/k for k^2 = qq, entire in qq.
inline std::pair<double, double> flat_propagator(double qq, double x)
{
    if (qq >= 0.0) {
        const double k = std::sqrt(qq);
        const double kx = k * x;
        const double s = std::abs(kx) < 1e-4 ? x * (1.0 - kx * kx / 6.0) : std::sin(kx) / k;
        return {std::cos(kx), s};
    }
    const double k = std::sqrt(-qq);
    const double kx = k * x;
    const double s = std::abs(kx) < 1e-4 ? x * (1.0 + kx * kx / 6.0) : std::sinh(kx) / k;
    return {std::cosh(kx), s};
}

inline double q_squared(const PotentialParams& p, double e)
{
    const double s = e + p.v0;
    return (s - 1.0) * (s + 1.0);
}

} // namespace detail

/// Region-I regular solution with b1 = 1, valid for x <= x0.
inline WaveValue phi_region1(double e, const PotentialParams& params, double x)
{
    const auto eq = energy_quantities(params, e);
    auto w = detail::tail_solution(params, eq, params.x0 - x);
    w.dphi = -w.dphi;
    return w;
}

inline WaveValue phi_region2(double e, const PotentialParams& params, double x, Complex b3, Complex b4)
{
    const auto eq = energy_quantities(params, e);
    const Complex iq(-eq.q.imag(), eq.q.real());
    const Complex ep = std::exp(iq * x);
    const Complex em = std::exp(-iq * x);
    return {b3 * em + b4 * ep, iq * (b4 * ep - b3 * em)};
}

/// Region-III regular solution with b5 = 1, valid for x >= 0.
inline WaveValue phi_region3(double e, const PotentialParams& params, double x)
{
    const auto eq = energy_quantities(params, e);
    return detail::tail_solution(params, eq, x);
}

/// Matching determinant from continuity of (phi, phi') at x0 and 0,
///
///   D = (iq phi + phi')^2 - e^{-2 i q x0} (iq phi - phi')^2,
///
/// with phi, phi' the region-III solution at x = 0 (region I at x0 is its
/// mirror image). D carries a factor q, so it also vanishes at
/// (E + V0)^2 = 1 where no bound state exists; use matching_wronskian to
/// locate roots.
inline EigenvalueResidual eigenvalue_function(double e, const PotentialParams& params)
{
    params.validate();
    const auto eq = energy_quantities(params, e);
    const auto w = detail::tail_solution(params, eq, 0.0);
    const Complex iq(-eq.q.imag(), eq.q.real());
    const Complex plus = iq * w.phi + w.dphi;
    const Complex minus = iq * w.phi - w.dphi;
    const Complex t1 = plus * plus;
    const Complex t2 = std::exp(-2.0 * iq * params.x0) * minus * minus;
    return {t1 - t2, std::max({std::abs(t1), std::abs(t2), DBL_MIN})};
}

/// Closed form of the eigenvalue condition in terms of M_{kappa,mu}(2iaV0)
/// and M_{1+kappa,mu}(2iaV0):
///
///   (1/4a^2) { [1 + 2k + 2ia(q - V0)] M_{k,mu} - (1 + 2k + 2mu) M_{1+k,mu} }^2
///   - (e^{-2 i x0 q}/4a^2) { [1 + 2k - 2ia(q + V0)] M_{k,mu} - (1 + 2k + 2mu) M_{1+k,mu} }^2
///
/// Equals 2 i a V0 times eigenvalue_function(e).value.
inline Complex eigenvalue_condition_closed_form(double e, const PotentialParams& params)
{
    params.validate();
    const auto eq = energy_quantities(params, e);
    const double a = params.a;
    const Complex z0(0.0, 2.0 * a * params.v0);
    const Complex i(0.0, 1.0);
    const Complex m0 = whittaker_m(eq.kappa, eq.mu, z0);
    const Complex m1 = whittaker_m(1.0 + eq.kappa, eq.mu, z0);
    const Complex c = 1.0 + 2.0 * eq.kappa + 2.0 * eq.mu;
    const Complex first = (1.0 + 2.0 * eq.kappa + 2.0 * i * a * (eq.q - params.v0)) * m0 - c * m1;
    const Complex second = (1.0 + 2.0 * eq.kappa - 2.0 * i * a * (eq.q + params.v0)) * m0 - c * m1;
    return (first * first - std::exp(-2.0 * i * params.x0 * eq.q) * second * second) / (4.0 * a * a);
}

/// Wronskian of the region-I solution and the region-III solution carried
/// across the flat bottom, taken at x = x0:
///
///   W = -2 phi phi' cos(q x0) - (phi'^2 - q^2 phi^2) sin(q x0)/q.
///
/// Entire in q^2, related to the determinant by D = -2iq e^{-iq x0} W. The
/// phase of the (real-up-to-a-constant) tail solution is removed and the
/// result divided by |phi|^2 + |phi'|^2, so for real E the value is real
/// and O(1); the imaginary part is roundoff.
inline Complex matching_wronskian(double e, const PotentialParams& params)
{
    params.validate();
    const auto eq = energy_quantities(params, e);
    const auto w = detail::tail_solution(params, eq, 0.0);
    const double qq = detail::q_squared(params, e);
    const auto [c, s] = detail::flat_propagator(qq, params.x0);
    const Complex p = w.phi;
    const Complex d = w.dphi;
    const Complex wr = -2.0 * p * d * c - (d * d - qq * p * p) * s;
    const Complex ref = std::abs(p) >= std::abs(d) ? p : d;
    const Complex unit = ref / std::abs(ref);
    const Complex unit_conj_sq = std::conj(unit * unit);
    return wr * unit_conj_sq / (std::norm(p) + std::norm(d));
}

/// Region coefficients of the eigenstate at energy e, with b4 = 1.
///
/// b3 and b5 come from continuity at x = 0, b1 from continuity at x0. The
/// x0 condition is overdetermined; a relative mismatch above tol means e is
/// not an eigenvalue. For x0 = 0 the flat region is a single point and I
/// matches III directly: b1 = b5 (even state) or b1 = -b5 (odd state).
inline MatchedWavefunction match_coefficients(double e, const PotentialParams& params,
                                              double tol = kEigenTolerance)
{
    params.validate();
    const auto eq = energy_quantities(params, e);
    const auto w = detail::tail_solution(params, eq, 0.0);
    const Complex p = w.phi;
    const Complex d = w.dphi;
    const Complex iq(-eq.q.imag(), eq.q.real());

    MatchedWavefunction out;
    out.e = e;
    out.params = params;
    out.b4 = 1.0;
    const Complex den = iq * p + d;
    if (std::abs(den) <= 1e-14 * (std::abs(iq * p) + std::abs(d)) || std::abs(den) == 0.0)
        throw NotAnEigenvalue("plane-wave basis degenerates at (E + V0)^2 = 1");
    out.b3 = (iq * p - d) / den;
    out.b5 = 2.0 * iq / den;

    double mismatch = 0.0;
    if (params.x0 == 0.0) {
        const double ap = std::abs(p);
        const double ad = std::abs(d);
        out.b1 = ap >= ad ? out.b5 : -out.b5;
        mismatch = std::abs(out.b5) * std::min(ap, ad) /
                   std::max({1.0, std::abs(out.b5) * ap, std::abs(out.b5) * ad});
    } else {
        const auto mid = phi_region2(e, params, params.x0, out.b3, out.b4);
        const Complex left = p;   // region I at x0, b1 = 1
        const Complex dleft = -d;
        out.b1 = (mid.phi * std::conj(left) + mid.dphi * std::conj(dleft)) /
                 (std::norm(left) + std::norm(dleft));
        const double r0 = std::abs(mid.phi - out.b1 * left);
        const double r1 = std::abs(mid.dphi - out.b1 * dleft);
        mismatch = std::max(r0, r1) / std::max({1.0, std::abs(mid.phi), std::abs(mid.dphi)});
    }
    if (!(mismatch <= tol))
        throw NotAnEigenvalue("continuity mismatch " + std::to_string(mismatch) +
                              " exceeds tolerance at E = " + std::to_string(e));
    return out;
}

inline WaveValue evaluate(const MatchedWavefunction& state, double x)
{
    const auto& p = state.params;
    switch (region_of(p, x)) {
    case Region::I: {
        auto w = phi_region1(state.e, p, x);
        return {state.b1 * w.phi, state.b1 * w.dphi};
    }
    case Region::II:
        return phi_region2(state.e, p, x, state.b3, state.b4);
    case Region::III: {
        auto w = phi_region3(state.e, p, x);
        return {state.b5 * w.phi, state.b5 * w.dphi};
    }
    }
    return {};
}

inline Complex wavefunction_eval(const MatchedWavefunction& state, double x)
{
    return evaluate(state, x).phi;
}

} // namespace kgwell
