#include "catkit/su11.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

namespace catkit {

Su11Set build_su11(const FockSpace& space) {
    if (space.dim < 8) {
        throw std::invalid_argument("build_su11: need dim >= 8, got " + std::to_string(space.dim));
    }
    const int d = space.dim;
    Mat kp = Mat::Zero(d, d);
    for (int n = 0; n + 2 < d; ++n) kp(n + 2, n) = 0.5 * std::sqrt((n + 1.0) * (n + 2.0));
    Mat km = kp.adjoint();
    Mat k0 = Mat::Zero(d, d);
    for (int n = 0; n < d; ++n) k0(n, n) = 0.5 * (n + 0.5);
    Mat cas = k0 * k0 - k0 - kp * km;
    return Su11Set{OpMatrix{std::move(kp), false, space}, OpMatrix{std::move(km), false, space},
                   OpMatrix{std::move(k0), true, space}, OpMatrix{std::move(cas), true, space}, space};
}

ClosureReport closure_residuals(const Su11Set& set, int guard) {
    const int d = set.space.dim;
    // guard < 2 keeps truncation-polluted boundary rows in view; the report
    // carries the O(dim) residual rather than failing.
    if (guard < 0 || d - guard < 4) {
        throw std::invalid_argument("closure_residuals: need guard >= 0 and dim - guard >= 4");
    }
    const int m = d - guard;
    const Mat& kp = set.k_plus.mat;
    const Mat& km = set.k_minus.mat;
    const Mat& k0 = set.k_zero.mat;

    const Mat c1 = (k0 * kp - kp * k0 - kp).topLeftCorner(m, m);
    const Mat c2 = (k0 * km - km * k0 + km).topLeftCorner(m, m);
    const Mat c3 = (km * kp - kp * km - 2.0 * k0).topLeftCorner(m, m);

    double cas_dev = 0.0;
    for (int n = 0; n < m; ++n) {
        cas_dev = std::max(cas_dev, std::abs(set.casimir.mat(n, n) - Complex(kCasimirConstant)));
    }
    return ClosureReport{guard, c1.cwiseAbs().maxCoeff(), c2.cwiseAbs().maxCoeff(),
                         c3.cwiseAbs().maxCoeff(), cas_dev};
}

OpMatrix phase_rotation(const FockSpace& space, double phi) {
    Mat u = Mat::Zero(space.dim, space.dim);
    // phi*n in long double keeps the argument exact for every n here, so the
    // entries are correctly rounded instead of drifting by n ulps.
    const long double p = phi;
    for (int n = 0; n < space.dim; ++n) {
        const long double t = p * n;
        u(n, n) = Complex(static_cast<double>(std::cos(t)), static_cast<double>(std::sin(t)));
    }
    return OpMatrix{std::move(u), false, space};
}

std::pair<OpMatrix, OpMatrix> parity_projectors(const FockSpace& space) {
    Mat pe = Mat::Zero(space.dim, space.dim);
    Mat po = Mat::Zero(space.dim, space.dim);
    for (int n = 0; n < space.dim; ++n) {
        if (n % 2 == 0) pe(n, n) = 1.0;
        else po(n, n) = 1.0;
    }
    return {OpMatrix{std::move(pe), true, space}, OpMatrix{std::move(po), true, space}};
}

double flux_to_phase(double flux, double flux_quantum) {
    if (!(flux_quantum > 0.0)) {
        throw std::invalid_argument("flux_to_phase: flux_quantum must be > 0");
    }
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double phi = std::fmod(two_pi * flux / flux_quantum, two_pi);
    if (phi < 0.0) phi += two_pi;
    return phi;
}

nlohmann::json to_json(const ClosureReport& report) {
    return nlohmann::json{{"guard", report.guard},
                          {"res_k0_kp", report.res_k0_kp},
                          {"res_k0_km", report.res_k0_km},
                          {"res_km_kp", report.res_km_kp},
                          {"casimir_dev", report.casimir_dev}};
}

}  // namespace catkit
