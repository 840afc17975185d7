#pragma once

// Independent series oracles for the test suites. Everything here sums the
// defining series directly; nothing routes through the library's matrix or
// recurrence constructions.

#include <cmath>
#include <complex>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

// Poisson-weighted sum over photon number: sum_n P_n f(n), P_n Poisson(|alpha|^2).
template <class F>
Complex poisson_sum(Complex alpha, int terms, F&& f) {
    const double lam = std::norm(alpha);
    double p = std::exp(-lam);
    Complex acc = 0.0;
    for (int n = 0; n < terms; ++n) {
        if (n > 0) p *= lam / n;
        acc += p * f(n);
    }
    return acc;
}

inline double coherent_mean_n(Complex alpha, int terms) {
    return poisson_sum(alpha, terms, [](int n) { return Complex(n); }).real();
}

// <alpha|beta> by direct amplitude series.
inline Complex coherent_overlap(Complex alpha, Complex beta, int terms) {
    Complex term = std::exp(-0.5 * (std::norm(alpha) + std::norm(beta)));
    Complex acc = term;
    for (int n = 1; n < terms; ++n) {
        term *= std::conj(alpha) * beta / static_cast<double>(n);
        acc += term;
    }
    return acc;
}

// Photon distribution of S(zeta)|0>: P_0 = sech r, P_{2m} ratio tanh^2 r (2m-1)/(2m).
inline double squeezed_vacuum_mean_n(double r, int terms) {
    if (r == 0.0) return 0.0;
    const double t2 = std::tanh(r) * std::tanh(r);
    double p = 1.0 / std::cosh(r);
    double acc = 0.0;
    for (int m = 1; 2 * m < terms; ++m) {
        p *= t2 * (2.0 * m - 1.0) / (2.0 * m);
        acc += 2.0 * m * p;
    }
    return acc;
}

// Normalization factor of |alpha> + |-alpha>: 1/sqrt(2 (1 + e^{-2|alpha|^2})).
inline double even_cat_norm_factor(Complex alpha) {
    return 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-2.0 * std::norm(alpha))));
}

// sum_n P_n (-1)^n e^{i phi n} for |alpha>.
inline Complex rotated_parity_series(Complex alpha, double phi, int terms) {
    return poisson_sum(alpha, terms, [phi](int n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        return sign * std::exp(Complex(0, 1) * (phi * n));
    });
}

// Normally ordered <a^dag^2 a^2> = sum_n P_n n(n-1).
inline double coherent_pair_moment(Complex alpha, int terms) {
    return poisson_sum(alpha, terms, [](int n) { return Complex(n * (n - 1.0)); }).real();
}

// Geometric (thermal) moments at mean occupation nu.
inline double thermal_pair_moment(double nu, int terms) {
    double w = 1.0 / (1.0 + nu);
    double acc = 0.0;
    for (int n = 0; n < terms; ++n) {
        acc += n * (n - 1.0) * w;
        w *= nu / (1.0 + nu);
    }
    return acc;
}

}  // namespace oracle
