#include "catkit/greens.hpp"

#include <cmath>
#include <numbers>

namespace catkit {

RingLattice make_ring(int sites) {
    if (sites < 8 || sites % 2 != 0) {
        throw std::invalid_argument("make_ring: sites must be even and >= 8, got " +
                                    std::to_string(sites));
    }
    RingLattice ring{sites, {}};
    ring.thetas.resize(sites);
    for (int j = 0; j < sites; ++j) ring.thetas[j] = 2.0 * std::numbers::pi * j / sites;
    return ring;
}

ModeFunction ring_mode(const RingLattice& ring, int m) {
    ModeFunction psi{m, Vec(ring.sites)};
    const double norm = 1.0 / std::sqrt(static_cast<double>(ring.sites));
    for (int j = 0; j < ring.sites; ++j) {
        psi.values(j) = norm * std::exp(Complex(0, 1) * (m * ring.thetas[j]));
    }
    return psi;
}

LesserGF lesser_from_modes(const RingLattice& ring,
                           const std::vector<std::pair<int, double>>& occupations) {
    Mat g = Mat::Zero(ring.sites, ring.sites);
    for (const auto& [m, nu] : occupations) {
        if (nu < 0.0) throw std::invalid_argument("lesser_from_modes: occupation must be >= 0");
        const ModeFunction psi = ring_mode(ring, m);
        g += nu * (psi.values * psi.values.adjoint());
    }
    const double hdev = (g - g.adjoint()).cwiseAbs().maxCoeff();
    if (hdev > 1e-12) throw std::invalid_argument("lesser_from_modes: lost Hermiticity");
    return LesserGF{std::move(g)};
}

double mode_occupation(const LesserGF& g, const ModeFunction& psi) {
    if (g.g.rows() != psi.values.size()) {
        throw std::invalid_argument("mode_occupation: dimension mismatch");
    }
    return std::real(psi.values.dot(g.g * psi.values));
}

double j0_from_green(const LesserGF& g, const ModeFunction& psi) {
    return 0.5 * mode_occupation(g, psi) + 0.25;
}

WickTensor wick_two_particle(const LesserGF& g) {
    const int m = static_cast<int>(g.g.rows());
    if (m > 32) throw std::invalid_argument("wick_two_particle: dense tensor limited to M <= 32");
    WickTensor out{m, {}};
    out.t.resize(static_cast<std::size_t>(m) * m * m * m);
    std::size_t idx = 0;
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k)
            for (int l = 0; l < m; ++l)
                for (int p = 0; p < m; ++p) out.t[idx++] = g.g(j, l) * g.g(k, p) + g.g(j, p) * g.g(k, l);
    return out;
}

Complex contract_pair_correlator(const WickTensor& g2, const ModeFunction& psi) {
    const int m = g2.sites;
    if (m != psi.values.size()) {
        throw std::invalid_argument("contract_pair_correlator: dimension mismatch");
    }
    // <c^dag c^dag c c> = sum psi(l) psi(p) conj(psi(j)) conj(psi(k)) G2[j,k,l,p]
    Complex acc = 0.0;
    std::size_t idx = 0;
    for (int j = 0; j < m; ++j)
        for (int k = 0; k < m; ++k) {
            const Complex left = std::conj(psi.values(j) * psi.values(k));
            for (int l = 0; l < m; ++l)
                for (int p = 0; p < m; ++p) acc += left * psi.values(l) * psi.values(p) * g2.t[idx++];
        }
    return acc;
}

DensityOp thermal_density(const FockSpace& space, double nu) {
    if (nu < 0.0) throw std::invalid_argument("thermal_density: nu must be >= 0");
    Mat rho = Mat::Zero(space.dim, space.dim);
    double w = 1.0 / (1.0 + nu);
    double total = 0.0;
    for (int n = 0; n < space.dim; ++n) {
        rho(n, n) = w;
        total += w;
        w *= nu / (1.0 + nu);
    }
    rho /= total;
    return make_density(std::move(rho), space);
}

ProjectionReport verify_projection(const FockSpace& space, const RingLattice& ring,
                                   const LesserGF& g, const ModeFunction& psi, MarginalKind kind) {
    // require g diagonal in the mode basis so the m0 marginal is a diagonal
    // (number-basis) state
    for (int m = -ring.sites / 2 + 1; m <= ring.sites / 2; ++m) {
        const ModeFunction other = ring_mode(ring, m);
        if (m == psi.m) continue;
        const Complex cross = other.values.dot(g.g * psi.values);
        if (std::abs(cross) > 1e-10) {
            throw std::invalid_argument(
                "verify_projection: unsupported state (mode-basis off-diagonal correlation)");
        }
    }

    const double nu = mode_occupation(g, psi);
    ProjectionReport report;

    DensityOp rho = [&] {
        if (kind == MarginalKind::fock_occupation) {
            const double rounded = std::round(nu);
            if (std::abs(nu - rounded) > 1e-9 || rounded < 0 || rounded >= space.dim) {
                throw std::invalid_argument(
                    "verify_projection: unsupported state (non-integer Fock occupation)");
            }
            return pure_density(fock_state(space, static_cast<int>(rounded)));
        }
        return thermal_density(space, nu);
    }();

    const LadderOps lad = ladder_ops(space);
    const double occ_fock = std::real(expectation(lad.n, rho));
    report.occupation_dev = std::abs(nu - occ_fock);
    report.j0_dev = std::abs(j0_from_green(g, psi) - (0.5 * occ_fock + 0.25));

    if (kind == MarginalKind::thermal) {
        const WickTensor g2 = wick_two_particle(g);
        const Complex pair_green = contract_pair_correlator(g2, psi);
        const OpMatrix pair_op{lad.adag.mat * lad.adag.mat * lad.a.mat * lad.a.mat, true, space};
        const Complex pair_fock = expectation(pair_op, rho);
        report.pair_dev = std::abs(pair_green - pair_fock);
    }

    report.max_dev = std::max(report.occupation_dev, report.j0_dev);
    if (report.pair_dev) report.max_dev = std::max(report.max_dev, *report.pair_dev);
    return report;
}

}  // namespace catkit
