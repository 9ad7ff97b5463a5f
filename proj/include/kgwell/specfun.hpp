#pragma once

// Confluent hypergeometric (Kummer) M(a, b, z) and Whittaker M_{kappa,mu}(z)
// for complex parameters and argument, evaluated by direct power series.
//
// The series regime is capped at |z| <= 50. Physical arguments in this
// library have |z| = 2 a V0, well inside that range.

#include "kgwell/error.hpp"

#include <cmath>
#include <complex>
#include <string>

namespace kgwell {

using Complex = std::complex<double>;

struct SeriesPolicy {
    double rel_tol = 1e-15;
    int max_terms = 500;
};

inline constexpr double kSeriesMaxAbsZ = 50.0;

namespace detail {

// Neumaier summation, componentwise. Terms of the Kummer series rotate in
// phase for imaginary z, so plain summation drops low-order bits.
template <class T>
class CompensatedSum {
public:
    using Value = std::complex<T>;

    explicit CompensatedSum(Value init = {}) : re_(init.real()), im_(init.imag()) {}

    void add(Value t)
    {
        accumulate(re_, re_c_, t.real());
        accumulate(im_, im_c_, t.imag());
    }

    Value value() const { return {re_ + re_c_, im_ + im_c_}; }

private:
    static void accumulate(T& s, T& c, T x)
    {
        const T t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }

    T re_ = 0, re_c_ = 0;
    T im_ = 0, im_c_ = 0;
};

// Sums the series in working type T. Compensation only protects the sum;
// for Re z < 0 the terms grow to ~e^|z| before cancelling, so their own
// rounding has to be carried with extra bits.
template <class T>
Complex kummer_series(Complex a, Complex b, Complex z, const SeriesPolicy& policy)
{
    using C = std::complex<T>;
    const C la(a), lb(b), lz(z);
    const T tol = policy.rel_tol;
    CompensatedSum<T> sum(C(1));
    C term = 1;
    for (int n = 0; n < policy.max_terms; ++n) {
        const T k = n;
        const C ratio = (la + k) / ((lb + k) * (k + 1)) * lz;
        term *= ratio;
        if (term == C{})
            return Complex(sum.value()); // a is a non-positive integer: polynomial
        sum.add(term);
        if (std::abs(ratio) < 1 && std::abs(term) < tol * std::abs(sum.value()))
            return Complex(sum.value());
    }
    throw NonConvergence("kummer_m: max_terms reached before tolerance");
}

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline bool is_nonpositive_integer(Complex b)
{
    return b.imag() == 0.0 && b.real() <= 0.0 && b.real() == std::round(b.real());
}

inline void check_policy(const SeriesPolicy& p)
{
    if (!(p.rel_tol > 0.0) || p.max_terms < 1)
        throw InvalidParameter("SeriesPolicy requires rel_tol > 0 and max_terms >= 1");
}

} // namespace detail

/// Kummer's function M(a, b, z) = sum_n (a)_n z^n / ((b)_n n!).
///
/// Truncates once a term falls below rel_tol * |partial sum| on the
/// decreasing tail of the series. Throws InvalidParameter for b in
/// {0, -1, -2, ...} and NonConvergence for |z| > 50 or when max_terms is
/// exhausted.
inline Complex kummer_m(Complex a, Complex b, Complex z, const SeriesPolicy& policy = {})
{
    detail::check_policy(policy);
    if (!detail::is_finite(a) || !detail::is_finite(b) || !detail::is_finite(z))
        throw InvalidParameter("kummer_m: non-finite input");
    if (detail::is_nonpositive_integer(b))
        throw InvalidParameter("kummer_m: b must not be zero or a negative integer");
    if (std::abs(z) > kSeriesMaxAbsZ)
        throw NonConvergence("kummer_m: |z| exceeds the series regime (50)");

    // x87 extended precision on x86-64; plain double where nothing cancels.
    const Complex result = z.real() < 0.0 ? detail::kummer_series<long double>(a, b, z, policy)
                                          : detail::kummer_series<double>(a, b, z, policy);
    if (!detail::is_finite(result))
        throw NonConvergence("kummer_m: overflow in series");
    return result;
}

/// dM/dz = (a / b) M(a + 1, b + 1, z).
inline Complex kummer_m_derivative(Complex a, Complex b, Complex z, const SeriesPolicy& policy = {})
{
    if (detail::is_nonpositive_integer(b))
        throw InvalidParameter("kummer_m_derivative: b must not be zero or a negative integer");
    return a / b * kummer_m(a + 1.0, b + 1.0, z, policy);
}

namespace detail {

inline void check_whittaker(Complex mu, Complex z)
{
    if (z == Complex{})
        throw InvalidParameter("whittaker_m: z must be nonzero");
    if (is_nonpositive_integer(1.0 + 2.0 * mu))
        throw InvalidParameter("whittaker_m: 1 + 2 mu must not be zero or a negative integer");
}

} // namespace detail

/// M_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} M(mu - kappa + 1/2, 1 + 2 mu, z),
/// principal branch of z^{mu+1/2}.
inline Complex whittaker_m(Complex kappa, Complex mu, Complex z, const SeriesPolicy& policy = {})
{
    detail::check_whittaker(mu, z);
    const Complex prefactor = std::exp(-0.5 * z + (mu + 0.5) * std::log(z));
    return prefactor * kummer_m(mu - kappa + 0.5, 1.0 + 2.0 * mu, z, policy);
}

/// d/dz M_{kappa,mu}(z), by the product rule on the Kummer representation.
inline Complex whittaker_m_derivative(Complex kappa, Complex mu, Complex z,
                                      const SeriesPolicy& policy = {})
{
    detail::check_whittaker(mu, z);
    const Complex a = mu - kappa + 0.5;
    const Complex b = 1.0 + 2.0 * mu;
    const Complex prefactor = std::exp(-0.5 * z + (mu + 0.5) * std::log(z));
    const Complex m = kummer_m(a, b, z, policy);
    const Complex dm = kummer_m_derivative(a, b, z, policy);
    return prefactor * ((-0.5 + (mu + 0.5) / z) * m + dm);
}

} // namespace kgwell
