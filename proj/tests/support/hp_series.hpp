#pragma once

// Test-only 50-digit Kummer series. Deliberately naive (no compensated
// summation, no early-exit heuristics) so it shares nothing with the
// library path it checks.

#include <boost/multiprecision/cpp_complex.hpp>

#include <complex>

namespace kgwell::test {

using HpComplex = boost::multiprecision::cpp_complex_50;

inline HpComplex to_hp(std::complex<double> z) { return HpComplex(z.real(), z.imag()); }

inline std::complex<double> to_double(const HpComplex& z)
{
    return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

inline HpComplex hp_kummer(const HpComplex& a, const HpComplex& b, const HpComplex& z)
{
    HpComplex sum = 1;
    HpComplex term = 1;
    for (int n = 0; n < 4000; ++n) {
        term *= (a + n) / (b + n) * z / (n + 1);
        sum += term;
        if (n > 10 && abs(term) < 1e-48 * abs(sum))
            break;
    }
    return sum;
}

inline std::complex<double> hp_kummer(std::complex<double> a, std::complex<double> b, std::complex<double> z)
{
    return to_double(hp_kummer(to_hp(a), to_hp(b), to_hp(z)));
}

/// M_{kappa,mu}(z) = e^{-z/2} z^{mu+1/2} M(mu - kappa + 1/2, 1 + 2 mu, z), principal branch.
inline std::complex<double> hp_whittaker(std::complex<double> kappa, std::complex<double> mu,
                                         std::complex<double> z)
{
    const HpComplex k = to_hp(kappa), m = to_hp(mu), zz = to_hp(z);
    const HpComplex half("0.5");
    return to_double(exp(-zz * half + (m + half) * log(zz)) * hp_kummer(m - k + half, 1 + 2 * m, zz));
}

} // namespace kgwell::test
