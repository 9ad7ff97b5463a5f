#pragma once

// Bound-state search over energy, the Klein-Gordon norm
//
//   N = 2 * integral (E - V(x)) |phi(x)|^2 dx,
//
// particle/antiparticle classification by the sign of N, sweeps in V0 and
// x0, and location of the critical depth where the nodeless particle state
// and its antiparticle partner coalesce.

#include "kgwell/error.hpp"
#include "kgwell/matching.hpp"
#include "kgwell/potential.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <thread>
#include <vector>

namespace kgwell {

enum class StateKind { Particle, Antiparticle, Critical };

inline const char* to_string(StateKind k)
{
    switch (k) {
    case StateKind::Particle: return "particle";
    case StateKind::Antiparticle: return "antiparticle";
    case StateKind::Critical: return "critical";
    }
    return "?";
}

inline constexpr double kNormTolerance = 1e-3;

inline StateKind classify(double norm, double tol = kNormTolerance)
{
    if (norm > tol)
        return StateKind::Particle;
    if (norm < -tol)
        return StateKind::Antiparticle;
    return StateKind::Critical;
}

struct BoundState {
    double e = 0.0;
    double norm = 0.0;
    StateKind kind = StateKind::Critical;
    int nodes = 0; ///< zeros of the (real) wavefunction
};

/// Energy scan. Grid points are uniform in theta with E = -cos(theta), which
/// clusters them toward the continuum edges where bound states crowd.
struct ScanConfig {
    double e_min = -1.0 + 1e-6;
    double e_max = 1.0 - 1e-6;
    int grid_points = 2000;
    double refine_tol = 1e-10;

    void validate() const
    {
        if (!(e_min < e_max) || e_min <= -1.0 || e_max >= 1.0)
            throw InvalidParameter("ScanConfig requires -1 < e_min < e_max < 1");
        if (grid_points < 2)
            throw InvalidParameter("ScanConfig requires grid_points >= 2");
        if (!(refine_tol > 0.0))
            throw InvalidParameter("ScanConfig requires refine_tol > 0");
    }

    std::vector<double> grid() const
    {
        const double t0 = std::acos(-e_min);
        const double t1 = std::acos(-e_max);
        std::vector<double> out(static_cast<std::size_t>(grid_points));
        for (int i = 0; i < grid_points; ++i)
            out[static_cast<std::size_t>(i)] = -std::cos(t0 + (t1 - t0) * i / (grid_points - 1));
        out.front() = e_min;
        out.back() = e_max;
        return out;
    }
};

// ---------------------------------------------------------------------------
// Norm

struct NormResult {
    double value = 0.0;
    double error = 0.0; ///< quadrature estimate plus truncated tails
};

namespace detail {

inline constexpr double kTailLengths = 40.0; // domain half-width in units of 1/lambda

// Integral of (E - V)|phi|^2 over one tail, t measured from the interface
// outward, with geometric breakpoints so the adaptive rule sees both the
// oscillating core and the long exponential decay.
template <class F>
NormResult integrate_tail(F&& integrand, double length)
{
    using boost::math::quadrature::gauss_kronrod;
    NormResult out;
    double lo = 0.0;
    double hi = std::min(1.0, length);
    while (lo < length) {
        double err = 0.0;
        out.value += gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 12, 1e-13, &err);
        out.error += err;
        lo = hi;
        hi = std::min(2.0 * hi, length);
    }
    return out;
}

} // namespace detail

/// Klein-Gordon norm of a matched state, with its error certificate.
inline NormResult kg_norm_detailed(const MatchedWavefunction& state)
{
    const auto& p = state.params;
    const auto eq = energy_quantities(p, state.e);
    const double e = state.e;
    const double length = detail::kTailLengths / eq.lambda;

    auto density = [&](double x) {
        return (e - potential_value(p, x)) * std::norm(wavefunction_eval(state, x));
    };

    const auto left = detail::integrate_tail([&](double t) { return density(p.x0 - t); }, length);
    const auto right = detail::integrate_tail([&](double t) { return density(t); }, length);
    double middle = 0.0;
    double middle_err = 0.0;
    if (p.x0 < 0.0) {
        using boost::math::quadrature::gauss_kronrod;
        middle = gauss_kronrod<double, 31>::integrate(density, p.x0, 0.0, 12, 1e-13, &middle_err);
    }

    // Beyond the domain |phi|^2 decays like exp(-2 lambda t).
    const double tail_left = density(p.x0 - length) / (2.0 * eq.lambda);
    const double tail_right = density(length) / (2.0 * eq.lambda);

    NormResult out;
    out.value = 2.0 * (left.value + middle + right.value + tail_left + tail_right);
    out.error = 2.0 * (left.error + middle_err + right.error + std::abs(tail_left) + std::abs(tail_right));
    if (!std::isfinite(out.value))
        throw QuadratureFailure("non-finite norm integral");
    return out;
}

/// N = 2 * integral (E - V)|phi|^2 dx over the whole line, under the
/// coefficients stored in the state (b4 = 1 when produced by match_coefficients).
/// Throws QuadratureFailure when the error certificate exceeds 1e-8 |N|
/// (or a roundoff floor relative to the integrated density).
inline double kg_norm(const MatchedWavefunction& state)
{
    const auto r = kg_norm_detailed(state);
    const double scale = std::abs(std::norm(state.b1)) + std::norm(state.b3) +
                         std::norm(state.b4) + std::norm(state.b5);
    const double floor = 1e-13 * scale;
    if (r.error > std::max(1e-8 * std::abs(r.value), floor))
        throw QuadratureFailure("norm quadrature error " + std::to_string(r.error) +
                                " exceeds tolerance for N = " + std::to_string(r.value));
    return r.value;
}

// ---------------------------------------------------------------------------
// Nodes

/// Number of sign changes of the phase-stripped wavefunction. Only the
/// classically allowed zone (E - V)^2 > 1 can hold nodes, so the count is
/// taken there.
inline int count_nodes(const MatchedWavefunction& state)
{
    const auto& p = state.params;
    const double e = state.e;
    // E - V > 1 for x in [x0 - reach, reach]; E - V < -1 never happens for E > -1.
    const double ratio = p.v0 / (1.0 - e);
    if (ratio <= 1.0)
        return 0;
    const double reach = p.a * std::log(ratio);
    const double lo = p.x0 - reach;
    const double hi = reach;
    const double k_max = std::sqrt(std::max(0.0, (e + p.v0) * (e + p.v0) - 1.0));
    const int n = std::max(2001, static_cast<int>(40.0 * (k_max + 1.0) * (hi - lo)));

    std::vector<Complex> values(static_cast<std::size_t>(n));
    double peak = 0.0;
    Complex ref{1.0, 0.0};
    for (int i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * i / (n - 1);
        values[static_cast<std::size_t>(i)] = wavefunction_eval(state, x);
        const double mag = std::abs(values[static_cast<std::size_t>(i)]);
        if (mag > peak) {
            peak = mag;
            ref = values[static_cast<std::size_t>(i)] / mag;
        }
    }
    int nodes = 0;
    int last_sign = 0;
    for (const auto& v : values) {
        const double re = (v * std::conj(ref)).real();
        if (std::abs(re) <= 1e-12 * peak)
            continue;
        const int sign = re > 0.0 ? 1 : -1;
        if (last_sign != 0 && sign != last_sign)
            ++nodes;
        last_sign = sign;
    }
    return nodes;
}

// ---------------------------------------------------------------------------
// Root search

namespace detail {

inline double reduced_residual(double e, const PotentialParams& p)
{
    return matching_wronskian(e, p).real();
}

inline double polish_root(const PotentialParams& p, double lo, double hi, double flo, double fhi,
                          double tol)
{
    if (flo == 0.0)
        return lo;
    if (fhi == 0.0)
        return hi;
    // Polish to machine precision; tol only bounds the accepted bracket.
    std::uintmax_t max_iter = 200;
    const boost::math::tools::eps_tolerance<double> stop(50);
    const auto [a, b] = boost::math::tools::toms748_solve(
        [&](double e) { return reduced_residual(e, p); }, lo, hi, flo, fhi, stop, max_iter);
    if (std::abs(b - a) > tol)
        return std::numeric_limits<double>::quiet_NaN();
    return 0.5 * (a + b);
}

inline bool accepted_root(double e, const PotentialParams& p)
{
    const auto r = eigenvalue_function(e, p);
    return std::abs(r.value) <= kEigenTolerance * r.scale;
}

// Roots of the reduced residual inside [lo, hi] given samples at the ends
// and an interior sample that is a local minimum of |r|. Two close roots
// (near coalescence) show up as a dip that crosses zero between grid points.
inline void roots_in_dip(const PotentialParams& p, double lo, double mid, double hi, double f_mid,
                         double tol, std::vector<double>& out, std::vector<double>& touching)
{
    const double sign = f_mid > 0.0 ? 1.0 : -1.0;
    auto g = [&](double e) { return sign * reduced_residual(e, p); };
    std::uintmax_t max_iter = 200;
    const auto [e_min, g_min] = boost::math::tools::brent_find_minima(g, lo, hi, 52, max_iter);
    (void)mid;
    if (g_min < 0.0) {
        const double flo = reduced_residual(lo, p);
        const double fmin = reduced_residual(e_min, p);
        const double fhi = reduced_residual(hi, p);
        out.push_back(polish_root(p, lo, e_min, flo, fmin, tol));
        out.push_back(polish_root(p, e_min, hi, fmin, fhi, tol));
    } else if (accepted_root(e_min, p)) {
        touching.push_back(e_min); // tangency: the two roots have merged
    }
}

struct ScanRoots {
    std::vector<double> crossings;
    std::vector<double> touching; ///< minima of |r| that reach zero without a sign change
};

inline void scan_roots(const PotentialParams& p, const std::vector<double>& grid, double tol,
                       ScanRoots& out)
{
    std::vector<double> f(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
        f[i] = reduced_residual(grid[i], p);

    auto& roots = out.crossings;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        if (f[i] == 0.0 || f[i] * f[i + 1] < 0.0)
            roots.push_back(polish_root(p, grid[i], grid[i + 1], f[i], f[i + 1], tol));
    }
    if (!grid.empty() && f.back() == 0.0)
        roots.push_back(grid.back());
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        const bool same_sign = f[i - 1] * f[i] > 0.0 && f[i] * f[i + 1] > 0.0;
        if (same_sign && std::abs(f[i]) < std::abs(f[i - 1]) && std::abs(f[i]) < std::abs(f[i + 1]))
            roots_in_dip(p, grid[i - 1], grid[i], grid[i + 1], f[i], tol, roots, out.touching);
    }
}

inline constexpr double kTangencyResolution = 1e-7;

inline std::vector<double> dedupe(std::vector<double> roots, double tol = 1e-9)
{
    std::sort(roots.begin(), roots.end());
    std::vector<double> out;
    for (double r : roots)
        if (out.empty() || r - out.back() > tol)
            out.push_back(r);
    return out;
}

// Local grid around a previously known root: resolves pairs that moved
// closer together than the global grid spacing.
inline std::vector<double> seed_grid(double seed, const ScanConfig& scan)
{
    const double theta = std::acos(-std::clamp(seed, scan.e_min, scan.e_max));
    const double t0 = std::acos(-scan.e_min);
    const double t1 = std::acos(-scan.e_max);
    const double dt = (t1 - t0) / (scan.grid_points - 1);
    std::vector<double> out;
    constexpr int kHalf = 32;
    for (int k = -kHalf; k <= kHalf; ++k) {
        const double t = std::clamp(theta + 4.0 * dt * k / kHalf, t0, t1);
        out.push_back(-std::cos(t));
    }
    out = dedupe(out, 0.0);
    return out;
}

} // namespace detail

/// Builds the state at an accepted eigenvalue: coefficients, norm, node count.
inline BoundState make_bound_state(double e, const PotentialParams& params)
{
    const auto state = match_coefficients(e, params, 1e-6);
    BoundState out;
    out.e = e;
    out.norm = kg_norm(state);
    out.kind = classify(out.norm);
    out.nodes = count_nodes(state);
    return out;
}

/// Energies of all bound states in [scan.e_min, scan.e_max], ascending.
/// `seeds` are energies (typically roots at a neighbouring V0) around which
/// the grid is locally refined.
inline std::vector<double> find_eigenvalues(const PotentialParams& params, const ScanConfig& scan = {},
                                            const std::vector<double>& seeds = {})
{
    params.validate();
    scan.validate();
    detail::ScanRoots found;
    detail::scan_roots(params, scan.grid(), scan.refine_tol, found);
    for (double s : seeds)
        detail::scan_roots(params, detail::seed_grid(s, scan), scan.refine_tol, found);
    auto keep = [&](double r) {
        return std::isfinite(r) && r >= scan.e_min && r <= scan.e_max && detail::accepted_root(r, params);
    };
    std::vector<double> accepted;
    for (double r : found.crossings)
        if (keep(r))
            accepted.push_back(r);
    accepted = detail::dedupe(std::move(accepted));
    // A minimum search locates a flat touching point only to ~sqrt(eps), so
    // overlapping grids report the same tangency a few 1e-9 apart. Keep one,
    // and none next to a resolved crossing.
    std::vector<double> touching;
    for (double r : found.touching)
        if (keep(r))
            touching.push_back(r);
    for (double r : detail::dedupe(std::move(touching), detail::kTangencyResolution)) {
        const bool near_crossing = std::any_of(accepted.begin(), accepted.end(), [&](double c) {
            return std::abs(c - r) <= detail::kTangencyResolution;
        });
        if (!near_crossing)
            accepted.push_back(r);
    }
    std::sort(accepted.begin(), accepted.end());
    return accepted;
}

/// All bound states with norms and classification, sorted ascending in E.
inline std::vector<BoundState> find_bound_states(const PotentialParams& params,
                                                 const ScanConfig& scan = {},
                                                 const std::vector<double>& seeds = {})
{
    std::vector<BoundState> out;
    for (double e : find_eigenvalues(params, scan, seeds))
        out.push_back(make_bound_state(e, params));
    return out;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SpectrumPoint {
    double v0 = 0.0;
    std::vector<BoundState> states;
    std::vector<int> branch_ids; ///< parallel to states
};

struct SpectrumCurve {
    double a = 0.0;
    double x0 = 0.0;
    std::vector<SpectrumPoint> points;
};

struct SweepOptions {
    bool warm_start = true;
    unsigned threads = 1; ///< cold sweeps only; warm sweeps run along the branch
};

namespace detail {

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& body)
{
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::vector<std::exception_ptr> errors(threads);
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    for (std::size_t i = t; i < n; i += threads)
                        body(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

// Greedy nearest-energy matching against the previous point, restricted to
// states with the same sign of N. Unmatched states open new branches.
inline void assign_branches(SpectrumCurve& curve)
{
    int next_id = 0;
    const SpectrumPoint* prev = nullptr;
    for (auto& pt : curve.points) {
        pt.branch_ids.assign(pt.states.size(), -1);
        if (prev) {
            std::vector<bool> used(prev->states.size(), false);
            for (std::size_t i = 0; i < pt.states.size(); ++i) {
                double best = 0.05;
                int best_j = -1;
                for (std::size_t j = 0; j < prev->states.size(); ++j) {
                    if (used[j])
                        continue;
                    if ((pt.states[i].norm > 0.0) != (prev->states[j].norm > 0.0))
                        continue;
                    const double d = std::abs(pt.states[i].e - prev->states[j].e);
                    if (d < best) {
                        best = d;
                        best_j = static_cast<int>(j);
                    }
                }
                if (best_j >= 0) {
                    used[static_cast<std::size_t>(best_j)] = true;
                    pt.branch_ids[i] = prev->branch_ids[static_cast<std::size_t>(best_j)];
                }
            }
        }
        for (auto& id : pt.branch_ids)
            if (id < 0)
                id = next_id++;
        prev = &pt;
    }
}

} // namespace detail

/// Bound states on an evenly spaced V0 grid (steps points, both ends
/// included; steps == 1 evaluates v0_min only).
inline SpectrumCurve sweep_v0(double a, double x0, double v0_min, double v0_max, int steps,
                              const ScanConfig& scan = {}, const SweepOptions& opts = {})
{
    if (steps < 1)
        throw InvalidParameter("sweep_v0 requires steps >= 1");
    if (!(v0_min > 0.0) || (steps > 1 && !(v0_min < v0_max)))
        throw InvalidParameter("sweep_v0 requires 0 < v0_min < v0_max");
    PotentialParams{v0_min, a, x0}.validate();

    SpectrumCurve curve;
    curve.a = a;
    curve.x0 = x0;
    curve.points.resize(static_cast<std::size_t>(steps));
    for (int k = 0; k < steps; ++k)
        curve.points[static_cast<std::size_t>(k)].v0 =
            steps == 1 ? v0_min : v0_min + (v0_max - v0_min) * k / (steps - 1);

    if (opts.warm_start) {
        std::vector<double> seeds;
        for (auto& pt : curve.points) {
            const PotentialParams params{pt.v0, a, x0};
            const auto energies = find_eigenvalues(params, scan, seeds);
            for (double e : energies)
                pt.states.push_back(make_bound_state(e, params));
            seeds = energies;
        }
    } else {
        detail::parallel_for(curve.points.size(), opts.threads, [&](std::size_t k) {
            auto& pt = curve.points[k];
            pt.states = find_bound_states({pt.v0, a, x0}, scan);
        });
    }
    detail::assign_branches(curve);
    return curve;
}

// ---------------------------------------------------------------------------
// Critical depth

struct CriticalPoint {
    double x0 = 0.0;
    double v_cr = 0.0;   ///< depth where the nodeless pair coalesces
    double e_cr = 0.0;   ///< merged energy
    double n_cr = 0.0;   ///< largest |N| of the pair at the last depth where it exists
    double n_branch_max = 0.0; ///< largest |N| seen on the nodeless branch
    /// Depth where the antiparticle partner leaves the lower continuum; NaN
    /// when it is already present at the lower end of the bracket.
    double v_onset = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

struct NodelessProbe {
    std::vector<BoundState> states; // nodeless states only, ascending in E
};

inline NodelessProbe probe_nodeless(const PotentialParams& params, const ScanConfig& scan,
                                    const std::vector<double>& seeds)
{
    NodelessProbe out;
    for (double e : find_eigenvalues(params, scan, seeds)) {
        const auto state = match_coefficients(e, params, 1e-6);
        if (count_nodes(state) != 0)
            continue;
        BoundState b;
        b.e = e;
        b.norm = kg_norm(state);
        b.kind = classify(b.norm);
        b.nodes = 0;
        out.states.push_back(b);
    }
    return out;
}

inline std::vector<double> energies_of(const NodelessProbe& p)
{
    std::vector<double> out;
    for (const auto& s : p.states)
        out.push_back(s.e);
    return out;
}

} // namespace detail

inline constexpr double kCriticalDepthTolerance = 1e-9;

/// Depth at which the nodeless particle state and its antiparticle partner
/// merge into a zero-norm state and leave the real axis.
///
/// Bisects on "a nodeless bound state exists", which holds from weak binding
/// up to the coalescence and fails after it. Requires that predicate to be
/// true at v0_lo and false at v0_hi, otherwise throws BracketInvalid.
inline CriticalPoint critical_potential(double a, double x0, double v0_lo, double v0_hi,
                                        const ScanConfig& scan = {})
{
    if (!(v0_lo > 0.0) || !(v0_lo < v0_hi))
        throw InvalidParameter("critical_potential requires 0 < v0_lo < v0_hi");
    PotentialParams{v0_lo, a, x0}.validate();

    CriticalPoint out;
    out.x0 = x0;
    auto lo_probe = detail::probe_nodeless({v0_lo, a, x0}, scan, {});
    auto hi_probe = detail::probe_nodeless({v0_hi, a, x0}, scan, {});
    if (lo_probe.states.empty() || !hi_probe.states.empty())
        throw BracketInvalid("nodeless-state predicate does not change across [" +
                             std::to_string(v0_lo) + ", " + std::to_string(v0_hi) + "]");

    auto track_max = [&](const detail::NodelessProbe& p) {
        for (const auto& s : p.states)
            out.n_branch_max = std::max(out.n_branch_max, std::abs(s.norm));
    };
    track_max(lo_probe);
    const bool pair_at_lo = lo_probe.states.size() >= 2;

    double lo = v0_lo;
    double hi = v0_hi;
    detail::NodelessProbe last = lo_probe;
    double first_pair_v0 = pair_at_lo ? v0_lo : std::numeric_limits<double>::quiet_NaN();
    while (hi - lo > kCriticalDepthTolerance) {
        const double mid = 0.5 * (lo + hi);
        auto probe = detail::probe_nodeless({mid, a, x0}, scan, detail::energies_of(last));
        if (probe.states.empty()) {
            hi = mid;
        } else {
            track_max(probe);
            if (probe.states.size() >= 2 && !(first_pair_v0 <= mid))
                first_pair_v0 = mid;
            lo = mid;
            last = std::move(probe);
        }
    }
    out.v_cr = 0.5 * (lo + hi);

    const auto& pair = last.states;
    if (pair.size() >= 2) {
        out.e_cr = 0.5 * (pair[0].e + pair[1].e);
        out.n_cr = std::max(std::abs(pair[0].norm), std::abs(pair[1].norm));
    } else {
        out.e_cr = pair.front().e;
        out.n_cr = std::abs(pair.front().norm);
    }

    if (!pair_at_lo && std::isfinite(first_pair_v0)) {
        // Onset: bisect on "two nodeless states" below the coalescence.
        double olo = v0_lo;
        double ohi = first_pair_v0;
        while (ohi - olo > 1e-6) {
            const double mid = 0.5 * (olo + ohi);
            const auto probe = detail::probe_nodeless({mid, a, x0}, scan, {});
            track_max(probe);
            (probe.states.size() >= 2 ? ohi : olo) = mid;
        }
        out.v_onset = 0.5 * (olo + ohi);
    }
    return out;
}

inline constexpr double kDefaultDepthLo = 0.5;
inline constexpr double kDefaultDepthHi = 8.0;

/// critical_potential for each width parameter, in input order.
inline std::vector<CriticalPoint> sweep_x0(double a, const std::vector<double>& x0_values,
                                           double v0_lo = kDefaultDepthLo,
                                           double v0_hi = kDefaultDepthHi,
                                           const ScanConfig& scan = {}, unsigned threads = 1)
{
    for (double x0 : x0_values)
        if (!(x0 <= 0.0))
            throw InvalidParameter("sweep_x0 requires x0 <= 0");
    std::vector<CriticalPoint> out(x0_values.size());
    detail::parallel_for(x0_values.size(), threads, [&](std::size_t i) {
        out[i] = critical_potential(a, x0_values[i], v0_lo, v0_hi, scan);
    });
    return out;
}

} // namespace kgwell
