#include "catkit/fock.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace catkit {

namespace {

void require_same_space(int a, int b, const char* what) {
    if (a != b) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

// Smallest even dim catching the squeezed-vacuum photon distribution up to
// tail_tol: P_0 = sech r, P_{2m} = P_{2m-2} tanh^2 r (2m-1)/(2m).
int min_squeezed_dim(double r, double tail_tol) {
    if (r == 0.0) return 4;
    const double t2 = std::tanh(r) * std::tanh(r);
    double p = 1.0 / std::cosh(r);
    double cum = p;
    int m = 0;
    while (cum < 1.0 - tail_tol) {
        ++m;
        p *= t2 * (2.0 * m - 1.0) / (2.0 * m);
        cum += p;
        if (2 * m > 1 << 20) break;  // tolerance unreachably tight
    }
    return std::max(4, 2 * m + 2);
}

}  // namespace

FockSpace make_space(int dim, double herm_tol, double tail_tol) {
    if (dim < 4) {
        throw std::invalid_argument("make_space: invalid dimension " + std::to_string(dim) +
                                    " (need dim >= 4)");
    }
    if (!(herm_tol > 0.0)) throw std::invalid_argument("make_space: herm_tol must be > 0");
    if (!(tail_tol > 0.0)) throw std::invalid_argument("make_space: tail_tol must be > 0");
    return FockSpace{dim, herm_tol, tail_tol};
}

LadderOps ladder_ops(const FockSpace& space) {
    const int d = space.dim;
    Mat a = Mat::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    Mat adag = a.adjoint();
    Mat num = adag * a;
    return LadderOps{OpMatrix{std::move(a), false, space}, OpMatrix{std::move(adag), false, space},
                     OpMatrix{std::move(num), true, space}};
}

OpMatrix identity_op(const FockSpace& space) {
    return OpMatrix{Mat::Identity(space.dim, space.dim), true, space};
}

OpMatrix parity_op(const FockSpace& space) {
    Mat p = Mat::Zero(space.dim, space.dim);
    for (int n = 0; n < space.dim; ++n) p(n, n) = (n % 2 == 0) ? 1.0 : -1.0;
    return OpMatrix{std::move(p), true, space};
}

Ket fock_state(const FockSpace& space, int n) {
    if (n < 0 || n >= space.dim) {
        throw std::out_of_range("fock_state: n = " + std::to_string(n) + " out of range for dim " +
                                std::to_string(space.dim));
    }
    Vec v = Vec::Zero(space.dim);
    v(n) = 1.0;
    return Ket{std::move(v), space};
}

int min_coherent_dim(Complex alpha, double tail_tol) {
    const double lam = std::norm(alpha);
    if (lam == 0.0) return 4;
    double p = std::exp(-lam);
    double cum = p;
    int n = 0;
    while (cum < 1.0 - tail_tol) {
        ++n;
        p *= lam / n;
        cum += p;
        if (n > (1 << 20)) break;
    }
    return std::max(4, n + 1);
}

Ket coherent_state(const FockSpace& space, Complex alpha) {
    const int need = min_coherent_dim(alpha, space.tail_tol);
    if (need > space.dim) {
        throw truncation_error("coherent_state: |alpha| = " + std::to_string(std::abs(alpha)) +
                                   " needs dim >= " + std::to_string(need),
                               need);
    }
    Vec v(space.dim);
    v(0) = std::exp(-0.5 * std::norm(alpha));
    for (int n = 1; n < space.dim; ++n) v(n) = v(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    v /= v.norm();
    return Ket{std::move(v), space};
}

Ket cat_state(const FockSpace& space, Complex alpha, Branch branch) {
    if (branch == Branch::odd && alpha == Complex(0.0)) {
        throw std::invalid_argument("cat_state: odd branch degenerates at alpha = 0");
    }
    const int need = min_coherent_dim(alpha, space.tail_tol);
    if (need > space.dim) {
        throw truncation_error("cat_state: |alpha| = " + std::to_string(std::abs(alpha)) +
                                   " needs dim >= " + std::to_string(need),
                               need);
    }
    const int want = branch == Branch::even ? 0 : 1;
    Vec v = Vec::Zero(space.dim);
    // fill only the matching-parity chain so the other parity stays bitwise 0
    Complex t = 1.0;
    for (int n = 0; n < space.dim; ++n) {
        if (n > 0) t *= alpha / std::sqrt(static_cast<double>(n));
        if (n % 2 == want) v(n) = t;
    }
    const double nrm = v.norm();
    if (nrm == 0.0) throw std::invalid_argument("cat_state: degenerate amplitude vector");
    v /= nrm;
    return Ket{std::move(v), space};
}

int unitarity_guard(Complex beta, Complex zeta) {
    const double sh = std::sinh(std::abs(zeta));
    return static_cast<int>(std::ceil(4.0 * std::norm(beta) + 4.0 * sh * sh + 8.0));
}

OpMatrix displacement_op(const FockSpace& space, Complex beta) {
    const int need = min_coherent_dim(beta, space.tail_tol);
    if (need > space.dim) {
        throw truncation_error("displacement_op: |beta| = " + std::to_string(std::abs(beta)) +
                                   " needs dim >= " + std::to_string(need),
                               need);
    }
    const int d = space.dim;
    Mat g = Mat::Zero(d, d);
    for (int n = 1; n < d; ++n) {
        const double s = std::sqrt(static_cast<double>(n));
        g(n, n - 1) = beta * s;              // beta a^dag
        g(n - 1, n) = -std::conj(beta) * s;  // -conj(beta) a
    }
    return OpMatrix{g.exp(), false, space};
}

OpMatrix squeeze_op(const FockSpace& space, Complex zeta) {
    const int need = min_squeezed_dim(std::abs(zeta), space.tail_tol);
    if (need > space.dim) {
        throw truncation_error("squeeze_op: r = " + std::to_string(std::abs(zeta)) +
                                   " needs dim >= " + std::to_string(need),
                               need);
    }
    const int d = space.dim;
    Mat g = Mat::Zero(d, d);
    for (int n = 2; n < d; ++n) {
        const double s = std::sqrt(static_cast<double>(n) * (n - 1.0));
        g(n - 2, n) += 0.5 * std::conj(zeta) * s;  // conj(zeta)/2 a^2
        g(n, n - 2) -= 0.5 * zeta * s;             // -zeta/2 a^dag^2
    }
    return OpMatrix{g.exp(), false, space};
}

Ket squeezed_fock(const FockSpace& space, int n, Complex zeta) {
    if (n < 0 || n >= space.dim / 4) {
        throw std::out_of_range("squeezed_fock: need 0 <= n < dim/4, got n = " + std::to_string(n));
    }
    OpMatrix s = squeeze_op(space, zeta);
    Vec v = s.mat.col(n);
    v /= v.norm();
    return Ket{std::move(v), space};
}

Ket squeezed_vacuum_state(const FockSpace& space, Complex zeta) {
    const int d = space.dim;
    const double r = std::abs(zeta);
    Vec v = Vec::Zero(d);
    v(0) = 1.0;
    if (r > 0.0) {
        // c_{2m} = (-e^{i theta} tanh r)^m sqrt((2m)!) / (2^m m!), ratio form
        const Complex step = -std::exp(Complex(0, 1) * std::arg(zeta)) * std::tanh(r);
        for (int m = 1; 2 * m < d; ++m) {
            v(2 * m) = v(2 * m - 2) * step * std::sqrt((2.0 * m - 1.0) * (2.0 * m)) / (2.0 * m);
        }
    }
    v /= v.norm();
    return Ket{std::move(v), space};
}

Ket displaced_squeezed_state(const FockSpace& space, Complex beta, Complex zeta) {
    const int d = space.dim;
    const double r = std::abs(zeta);
    const double mu = std::cosh(r);
    const Complex nu = r > 0.0 ? std::exp(Complex(0, 1) * std::arg(zeta)) * std::sinh(r) : Complex(0.0);
    // (a - beta) mu + (a^dag - conj(beta)) nu annihilates D(beta)S(zeta)|0>
    Vec v(d);
    v(0) = 1.0;
    const Complex drive = beta * mu + std::conj(beta) * nu;
    for (int n = 0; n + 1 < d; ++n) {
        const Complex prev = n >= 1 ? v(n - 1) : Complex(0.0);
        v(n + 1) = (drive * v(n) - nu * std::sqrt(static_cast<double>(n)) * prev) /
                   (mu * std::sqrt(n + 1.0));
    }
    v /= v.norm();
    return Ket{std::move(v), space};
}

OpMatrix displaced_number_matrix(const FockSpace& space, Complex beta) {
    const int d = space.dim;
    const double x = std::norm(beta);
    Mat D = Mat::Zero(d, d);
    // Each fixed k = |m - n| diagonal is e^{-x/2} pref^k / sqrt((n+1)...(n+k))
    // L_n^{(k)}(x), marched in n with the Laguerre recurrence folded into the
    // normalized elements (keeps every intermediate O(1)).
    for (int side = 0; side < 2; ++side) {
        const Complex pref = side == 0 ? beta : -std::conj(beta);
        for (int k = 0; k < d; ++k) {
            if (side == 1 && k == 0) continue;  // main diagonal already done
            Complex t = std::exp(-0.5 * x);
            for (int j = 1; j <= k; ++j) t *= pref / std::sqrt(static_cast<double>(j));
            Complex dm1 = 0.0, dn = t;
            for (int n = 0; n + k < d; ++n) {
                if (side == 0) D(n + k, n) = dn;
                else D(n, n + k) = dn;
                const double r1 = std::sqrt((n + 1.0) / (n + 1.0 + k));
                const double r2 =
                    n >= 1 ? std::sqrt((n + 1.0) * n / ((n + static_cast<double>(k)) * (n + 1.0 + k)))
                           : 0.0;
                const Complex next =
                    ((2.0 * n + 1.0 + k - x) * dn * r1 - (n + static_cast<double>(k)) * dm1 * r2) /
                    (n + 1.0);
                dm1 = dn;
                dn = next;
            }
        }
    }
    return OpMatrix{std::move(D), false, space};
}

Complex expectation(const OpMatrix& op, const Ket& state) {
    require_same_space(op.space.dim, state.space.dim, "expectation");
    return state.amps.dot(op.mat * state.amps);
}

Complex expectation(const OpMatrix& op, const DensityOp& state) {
    require_same_space(op.space.dim, state.space.dim, "expectation");
    // Tr[O rho] = sum_ij O_ij rho_ji
    return (op.mat.array() * state.mat.transpose().array()).sum();
}

double tail_mass(const Ket& state, int k) {
    const int d = state.space.dim;
    if (k < 1 || k >= d) throw std::out_of_range("tail_mass: need 1 <= k < dim");
    return state.amps.tail(k).squaredNorm();
}

DensityOp make_density(Mat rho, const FockSpace& space) {
    require_same_space(static_cast<int>(rho.rows()), space.dim, "make_density");
    require_same_space(static_cast<int>(rho.cols()), space.dim, "make_density");
    const double herm_dev = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > space.herm_tol) {
        throw std::invalid_argument("make_density: not Hermitian (dev " + std::to_string(herm_dev) + ")");
    }
    const double tr_dev = std::abs(rho.trace() - Complex(1.0));
    if (tr_dev > 1e-10) {
        throw std::invalid_argument("make_density: trace deviates from 1 by " + std::to_string(tr_dev));
    }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (rho + rho.adjoint()), Eigen::EigenvaluesOnly);
    const double lam_min = es.eigenvalues().minCoeff();
    if (lam_min < -1e-9) {
        throw std::invalid_argument("make_density: negative eigenvalue " + std::to_string(lam_min));
    }
    return DensityOp{std::move(rho), space};
}

DensityOp pure_density(const Ket& state) {
    Mat rho = state.amps * state.amps.adjoint();
    return DensityOp{std::move(rho), state.space};
}

}  // namespace catkit
