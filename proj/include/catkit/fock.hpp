#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace catkit {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

/// Thrown when a requested state does not fit inside the truncated basis at
/// the configured tail tolerance. min_adequate_dim is exact for coherent
/// states (Poisson tail scan) and a safe bound for squeezed constructions.
class truncation_error : public std::runtime_error {
public:
    truncation_error(const std::string& what, int min_dim)
        : std::runtime_error(what), min_adequate_dim(min_dim) {}
    int min_adequate_dim;
};

/// Truncated single-mode Fock space |0>..|dim-1> plus the numeric tolerances
/// every operator and state constructed from it inherits.
struct FockSpace {
    int dim = 64;
    double herm_tol = 1e-10;
    double tail_tol = 1e-10;
};

FockSpace make_space(int dim, double herm_tol = 1e-10, double tail_tol = 1e-10);

struct Ket {
    Vec amps;
    FockSpace space;
};

struct OpMatrix {
    Mat mat;
    bool hermitian_hint = false;
    FockSpace space;
};

/// Hermitian, trace-one, positive semidefinite matrix; invariants are checked
/// at construction time (see make_density).
struct DensityOp {
    Mat mat;
    FockSpace space;
};

enum class Branch { even, odd };

struct LadderOps {
    OpMatrix a;
    OpMatrix adag;
    OpMatrix n;
};

LadderOps ladder_ops(const FockSpace& space);
OpMatrix identity_op(const FockSpace& space);

/// Photon-number parity (-1)^n as a diagonal matrix. Involutive and unitary
/// bit-exactly: entries are +-1.
OpMatrix parity_op(const FockSpace& space);

Ket fock_state(const FockSpace& space, int n);

/// |alpha> truncated and renormalized. Fails with truncation_error (naming the
/// minimal adequate dim) when the untruncated Poisson tail beyond dim exceeds
/// space.tail_tol.
Ket coherent_state(const FockSpace& space, Complex alpha);

/// Normalized |alpha> + |-alpha> (even) or |alpha> - |-alpha> (odd). The
/// opposite-parity amplitudes are bitwise zero by construction.
Ket cat_state(const FockSpace& space, Complex alpha, Branch branch);

/// exp(beta a^dag - conj(beta) a) on the dense truncated matrix
/// (scaling-and-squaring). Unitary only away from the truncation edge; see
/// unitarity_guard.
OpMatrix displacement_op(const FockSpace& space, Complex beta);

/// exp((conj(zeta) a^2 - zeta a^dag^2)/2), same caveats as displacement_op.
OpMatrix squeeze_op(const FockSpace& space, Complex zeta);

/// S(zeta)|n>, normalized after truncation. Requires n < dim/4.
Ket squeezed_fock(const FockSpace& space, int n, Complex zeta);

/// S(zeta)|0> from the closed even-photon series, renormalized.
Ket squeezed_vacuum_state(const FockSpace& space, Complex zeta);

/// D(beta) S(zeta) |0> through the three-term amplitude recurrence (no matrix
/// exponential). Truncation-tolerant: always renormalizes, never throws for
/// oversized parameters. The far tail carries recurrence dust around 1e-6 of
/// the peak; irrelevant for expectations, so callers needing a loud tail
/// check should go through catability::gaussian_pure_state.
Ket displaced_squeezed_state(const FockSpace& space, Complex beta, Complex zeta);

/// Matrix elements <m|D(beta)|n> from the closed Laguerre form, filled along
/// diagonals with normalized recurrences. Agrees with displacement_op to
/// machine precision away from the truncation edge and stays accurate for
/// |beta| well beyond what the exponential route tolerates.
OpMatrix displaced_number_matrix(const FockSpace& space, Complex beta);

/// Rows/cols that must be excluded before operator identities involving
/// D(beta) / S(zeta) hold at tolerance in the truncated space.
int unitarity_guard(Complex beta, Complex zeta);

Complex expectation(const OpMatrix& op, const Ket& state);
Complex expectation(const OpMatrix& op, const DensityOp& state);

/// Probability mass on the top k basis indices.
double tail_mass(const Ket& state, int k);

/// Validates Hermiticity (herm_tol), unit trace (1e-10) and spectrum
/// (lowest eigenvalue >= -1e-9) before accepting the matrix.
DensityOp make_density(Mat rho, const FockSpace& space);
DensityOp pure_density(const Ket& state);

/// Smallest dim whose untruncated Poisson tail for |alpha> is <= tail_tol.
int min_coherent_dim(Complex alpha, double tail_tol);

}  // namespace catkit
