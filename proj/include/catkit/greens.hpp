#pragma once

#include "catkit/fock.hpp"

#include <optional>
#include <vector>

namespace catkit {

/// Even-M ring of angles theta_j = 2 pi j / M carrying the discretized field.
struct RingLattice {
    int sites = 0;
    std::vector<double> thetas;
};

RingLattice make_ring(int sites);

/// psi_m(theta_j) = e^{i m theta_j} / sqrt(M).
struct ModeFunction {
    int m = 0;
    Vec values;
};

ModeFunction ring_mode(const RingLattice& ring, int m);

/// Equal-time correlation matrix g[j,k] = <Psi^dag_k Psi_j>; Hermitian PSD.
/// (The textbook i-prefactor of the lesser function is dropped for storage.)
struct LesserGF {
    Mat g;
};

/// Sum of nu * psi_m psi_m^dag over the given (mode, occupation) pairs.
LesserGF lesser_from_modes(const RingLattice& ring,
                           const std::vector<std::pair<int, double>>& occupations);

double mode_occupation(const LesserGF& g, const ModeFunction& psi);

/// (occupation)/2 + 1/4, the K0 expectation recovered through the propagator.
double j0_from_green(const LesserGF& g, const ModeFunction& psi);

/// Dense two-particle tensor G2[j,k,l,p] = g[j,l] g[k,p] + g[j,p] g[k,l]
/// (bosonic symmetrization). Requires M <= 32.
struct WickTensor {
    int sites = 0;
    std::vector<Complex> t;  // index ((j*M + k)*M + l)*M + p

    Complex at(int j, int k, int l, int p) const {
        return t[static_cast<std::size_t>(((j * sites + k) * sites + l)) * sites + p];
    }
};

WickTensor wick_two_particle(const LesserGF& g);

/// <c^dag^2 c^2> in the Wick model: contraction of G2 with the mode function
/// on all four legs. Equals 2 nu^2 for any single-mode marginal of weight nu.
Complex contract_pair_correlator(const WickTensor& g2, const ModeFunction& psi);

enum class MarginalKind { fock_occupation, thermal };

struct ProjectionReport {
    double occupation_dev = 0.0;
    double j0_dev = 0.0;
    /// Compared only for thermal marginals, where Wick factorization is the
    /// exact statistics; a pure number state is not Wick-factorizable.
    std::optional<double> pair_dev;
    double max_dev = 0.0;
};

/// Cross-checks propagator-route expectations against direct Fock-space
/// expectations for the diagonal single-mode state described by `kind`.
/// Throws std::invalid_argument when g is not diagonal in the mode basis or
/// when a fock_occupation marginal has non-integer weight.
ProjectionReport verify_projection(const FockSpace& space, const RingLattice& ring,
                                   const LesserGF& g, const ModeFunction& psi, MarginalKind kind);

/// Truncated geometric-distribution thermal state with mean occupation nu.
DensityOp thermal_density(const FockSpace& space, double nu);

}  // namespace catkit
