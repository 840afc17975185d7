#include "catkit/decoherence.hpp"

#include "catkit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace catkit {

namespace {

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

}  // namespace

LossChannel loss_channel(const FockSpace& space, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) {
        throw std::invalid_argument("loss_channel: tau must lie in [0, 1]");
    }
    const int d = space.dim;
    LossChannel ch{tau, {}, space};
    ch.kraus.reserve(d);
    for (int k = 0; k < d; ++k) {
        Mat kk = Mat::Zero(d, d);
        for (int n = k; n < d; ++n) {
            // sqrt of binom(n,k) tau^{n-k} (1-tau)^k, built multiplicatively
            double logc = 0.0;
            for (int j = 0; j < k; ++j) logc += std::log((n - j) / (1.0 + j));
            double amp;
            if (tau == 0.0) {
                amp = (n == k) ? 1.0 : 0.0;  // 0^0 = 1: everything decays to vacuum
            } else if (tau == 1.0) {
                amp = (k == 0) ? 1.0 : 0.0;
            } else {
                amp = std::exp(0.5 * (logc + (n - k) * std::log(tau) + k * std::log1p(-tau)));
            }
            if (amp != 0.0) kk(n - k, n) = amp;
        }
        ch.kraus.push_back(OpMatrix{std::move(kk), false, space});
    }
    return ch;
}

DensityOp apply_channel(const DensityOp& rho, const LossChannel& ch) {
    if (rho.space.dim != ch.space.dim) {
        throw std::invalid_argument("apply_channel: dimension mismatch");
    }
    const int d = rho.space.dim;
    Mat out = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const Mat& kk = ch.kraus[k].mat;
        // K_k is the k-th superdiagonal; contract without dense products
        for (int i = 0; i + k < d; ++i) {
            const Complex ci = kk(i, i + k);
            if (ci == Complex(0.0)) continue;
            for (int j = 0; j + k < d; ++j) {
                out(i, j) += ci * rho.mat(i + k, j + k) * std::conj(kk(j, j + k));
            }
        }
    }
    return make_density(std::move(out), rho.space);
}

double fidelity(const DensityOp& rho, const Ket& target) {
    if (rho.space.dim != target.space.dim) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    return std::real(target.amps.dot(rho.mat * target.amps));
}

double wigner_point(const DensityOp& rho, Complex beta) {
    const int d = rho.space.dim;
    // D(beta) Pi D(-beta) = D(2 beta) Pi, so one displaced-number matrix per
    // point suffices: W = (2/pi) sum_n (-1)^n (rho D(2 beta))_{nn}.
    const OpMatrix dm = displaced_number_matrix(rho.space, 2.0 * beta);
    Complex tr = 0.0;
    for (int n = 0; n < d; ++n) {
        const Complex diag = rho.mat.row(n) * dm.mat.col(n);
        tr += (n % 2 == 0 ? 1.0 : -1.0) * diag;
    }
    return (2.0 / std::numbers::pi) * std::real(tr);
}

double wigner_min(const DensityOp& rho, const WignerGrid& grid) {
    if (!(grid.h > 0.0) || !(grid.beta_max > 0.0)) {
        throw std::invalid_argument("wigner_min: grid needs beta_max > 0 and h > 0");
    }
    // the kernel exp(-2|beta|^2) underflows past |beta| ~ 13 at the grid
    // corner and every matrix element degenerates to zero
    if (grid.beta_max > 13.0) {
        throw truncation_error("wigner_min: beta_max too large, displaced-parity kernel underflows",
                               rho.space.dim);
    }
    const int side = static_cast<int>(std::floor(2.0 * grid.beta_max / grid.h)) + 1;
    std::vector<double> row_min(side);
    parallel_for(side, [&](int iy) {
        const double y = -grid.beta_max + iy * grid.h;
        double m = std::numeric_limits<double>::infinity();
        for (int ix = 0; ix < side; ++ix) {
            const double x = -grid.beta_max + ix * grid.h;
            m = std::min(m, wigner_point(rho, Complex(x, y)));
        }
        row_min[iy] = m;
    });
    return *std::min_element(row_min.begin(), row_min.end());
}

std::vector<RobustnessRow> robustness_sweep(const FockSpace& space, Complex alpha,
                                            std::vector<double> taus, const OptConfig& cfg,
                                            const WignerGrid& grid) {
    std::sort(taus.begin(), taus.end(), std::greater<>());
    const Ket even = cat_state(space, alpha, Branch::even);
    const Ket odd = cat_state(space, alpha, Branch::odd);

    std::vector<RobustnessRow> rows;
    rows.reserve(taus.size());
    for (double tau : taus) {
        const LossChannel ch = loss_channel(space, tau);
        const DensityOp re = apply_channel(pure_density(even), ch);
        const DensityOp ro = apply_channel(pure_density(odd), ch);
        RobustnessRow row;
        row.tau = tau;
        row.xi_even = xi(space, re, alpha, Branch::even, cfg).xi;
        row.xi_odd = xi(space, ro, alpha, Branch::odd, cfg).xi;
        row.infidelity = std::max(0.0, 1.0 - fidelity(re, even));
        row.wigner_min = wigner_min(re, grid);
        rows.push_back(row);
    }
    return rows;
}

std::string robustness_csv(const std::vector<RobustnessRow>& rows) {
    std::string out = "tau,xi_even,xi_odd,infidelity,wigner_min\n";
    for (const auto& r : rows) {
        out += fmt12(r.tau) + "," + fmt12(r.xi_even) + "," + fmt12(r.xi_odd) + "," +
               fmt12(r.infidelity) + "," + fmt12(r.wigner_min) + "\n";
    }
    return out;
}

}  // namespace catkit
