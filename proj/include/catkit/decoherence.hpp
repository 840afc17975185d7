#pragma once

#include "catkit/catability.hpp"
#include "catkit/fock.hpp"

#include <string>
#include <vector>

namespace catkit {

/// Pure-loss channel at transmissivity tau. kraus[k] is the k-photon-loss
/// operator sqrt(binom(n,k) tau^{n-k} (1-tau)^k) |n-k><n|; the family is
/// trace preserving on the whole truncated space by the binomial theorem.
struct LossChannel {
    double tau = 1.0;
    std::vector<OpMatrix> kraus;
    FockSpace space;
};

LossChannel loss_channel(const FockSpace& space, double tau);

DensityOp apply_channel(const DensityOp& rho, const LossChannel& ch);

/// Pure-target convention F = <psi|rho|psi>.
double fidelity(const DensityOp& rho, const Ket& target);

struct WignerGrid {
    double beta_max = 4.0;
    double h = 0.1;
};

/// W(beta) = (2/pi) Tr[rho D(beta) Pi D(beta)^dag]; a negative value
/// certifies nonclassicality under this convention.
double wigner_point(const DensityOp& rho, Complex beta);
double wigner_min(const DensityOp& rho, const WignerGrid& grid);

struct RobustnessRow {
    double tau = 1.0;
    double xi_even = 0.0;
    double xi_odd = 0.0;
    double infidelity = 0.0;
    double wigner_min = 0.0;
};

/// Evolves branch-matched cats through the loss channel per tau and gathers
/// xi, infidelity against the ideal cat, and the Wigner floor of the lossy
/// even branch. Rows come back sorted by tau descending.
std::vector<RobustnessRow> robustness_sweep(const FockSpace& space, Complex alpha,
                                            std::vector<double> taus, const OptConfig& cfg,
                                            const WignerGrid& grid = {});

/// Header `tau,xi_even,xi_odd,infidelity,wigner_min`, 12 significant digits.
std::string robustness_csv(const std::vector<RobustnessRow>& rows);

}  // namespace catkit
