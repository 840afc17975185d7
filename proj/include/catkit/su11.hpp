#pragma once

#include "catkit/fock.hpp"

#include <nlohmann/json_fwd.hpp>

#include <utility>

namespace catkit {

/// Quadratic su(1,1) realization K+ = a^dag^2/2, K- = a^2/2, K0 = (n+1/2)/2
/// together with the Casimir K0^2 - K0 - K+K- assembled from those matrices.
struct Su11Set {
    OpMatrix k_plus;
    OpMatrix k_minus;
    OpMatrix k_zero;
    OpMatrix casimir;
    FockSpace space;
};

/// The single-mode realization splits into lowest-weight sectors k = 1/4
/// (even) and k = 3/4 (odd); both give Casimir k(k-1) = -3/16, so the
/// diagonal is one representation-fixed constant.
inline constexpr double kCasimirConstant = -3.0 / 16.0;

/// Max-entry commutator residuals on the projector n < dim - guard, plus the
/// deviation of the Casimir diagonal from kCasimirConstant on the same range.
struct ClosureReport {
    int guard = 0;
    double res_k0_kp = 0.0;
    double res_k0_km = 0.0;
    double res_km_kp = 0.0;
    double casimir_dev = 0.0;
};

Su11Set build_su11(const FockSpace& space);
ClosureReport closure_residuals(const Su11Set& set, int guard);

/// Diagonal unitary e^{i phi n}.
OpMatrix phase_rotation(const FockSpace& space, double phi);

/// (P_even, P_odd): complementary idempotent diagonals commuting with K+-.
std::pair<OpMatrix, OpMatrix> parity_projectors(const FockSpace& space);

/// phi = 2 pi flux / flux_quantum reduced to [0, 2 pi).
double flux_to_phase(double flux, double flux_quantum);

nlohmann::json to_json(const ClosureReport& report);

}  // namespace catkit
