#pragma once

#include "catkit/fock.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

namespace catkit {

/// Thrown by xi/xi_phi when every gamma on the search grid has a degenerate
/// Gaussian denominator (e.g. alpha = 0 on the even branch, where vacuum is
/// simultaneously the ideal target and a Gaussian state).
class degenerate_witness_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ParityVariant { conjugated, phase_weighted };

struct CatParams {
    Complex alpha;
    Branch branch = Branch::even;
    double phi = 0.0;
    ParityVariant parity_variant = ParityVariant::phase_weighted;
};

struct GaussianParams {
    Complex beta{0.0, 0.0};
    Complex zeta{0.0, 0.0};
};

struct OptConfig {
    double gamma_min = 1e-3;
    double gamma_max = 1e3;
    int gamma_points = 25;
    double gs_tol = 1e-4;  // relative golden-section width on gamma
    int starts = 8;
    double r_max = 2.0;
    std::uint64_t seed = 42;
    int max_iters = 200;  // simplex iterations per start
};

void validate_opt(const OptConfig& cfg);

struct XiResult {
    double xi = 0.0;
    double gamma_star = 0.0;
    GaussianParams gaussian_star;
    double numerator = 0.0;
    double denominator = 0.0;
    std::vector<std::pair<double, double>> optimizer_trace;  // (gamma, ratio)
    std::vector<double> excluded_gammas;                     // degenerate denominators
    bool converged = true;
    double phase_norm = std::numeric_limits<double>::quiet_NaN();  // <O_phi>/|alpha|^4
};

/// (a^dag^2 - conj(alpha)^2)(a^2 - alpha^2) + gamma (1 -+ parity).
/// Positive semidefinite; annihilates the matching ideal cat state.
OpMatrix cat_operator(const FockSpace& space, Complex alpha, double gamma, Branch branch);

/// Phase-dressed variant. The quadratic part displaces by alpha^2 e^{2i phi}.
/// The parity part depends on parity_variant: `conjugated` rotates parity by
/// the commuting diagonal e^{i phi n}, which collapses to plain parity, so it
/// is built as plain parity; `phase_weighted` uses the one-sided weight
/// (-1)^n e^{i phi n} and the assembled operator is Hermitian-symmetrized.
OpMatrix phase_cat_operator(const FockSpace& space, const CatParams& params, double gamma);

/// D(beta) S(zeta) |0> with a loud truncation check.
Ket gaussian_pure_state(const FockSpace& space, const GaussianParams& g);

struct MinResult {
    double value = 0.0;
    GaussianParams argmin;
    bool converged = true;
};

/// Multistart simplex descent of <psi_G|O|psi_G> over pure displaced-squeezed
/// states (Re beta, Im beta, r, theta), r in [0, cfg.r_max]. Pure states
/// suffice: the objective is linear in the density operator and mixed
/// Gaussian states are mixtures of pure ones.
MinResult min_over_gaussians(const FockSpace& space, const OpMatrix& op, const OptConfig& cfg);

/// Catability witness: min over gamma of Tr[O rho] / min_G Tr[O rho_G].
/// xi <= tol certifies an ideal cat, xi < 1 partial cat coherence, xi >= 1
/// uninformative.
XiResult xi(const FockSpace& space, const Ket& state, Complex alpha, Branch branch,
            const OptConfig& cfg = {});
XiResult xi(const FockSpace& space, const DensityOp& state, Complex alpha, Branch branch,
            const OptConfig& cfg = {});

XiResult xi_phi(const FockSpace& space, const Ket& state, const CatParams& params,
                const OptConfig& cfg = {});
XiResult xi_phi(const FockSpace& space, const DensityOp& state, const CatParams& params,
                const OptConfig& cfg = {});

/// Exhaustive-grid reference for xi: gamma grid times a dense Gaussian
/// parameter grid, optionally followed by one local grid refinement around
/// the best cell. No simplex descent, no golden section; this is the
/// brute-force route golden fixtures are generated from.
struct GridOracleConfig {
    double beta_box = 3.0;
    int beta_points = 61;  // per real axis
    double r_max = 1.5;
    int r_points = 16;
    int theta_points = 24;
    double gamma_min = 1e-3;
    double gamma_max = 1e3;
    int gamma_points = 121;
    bool refine = true;
    int refine_points = 61;  // per axis inside the winning cell
};

XiResult xi_grid_oracle(const FockSpace& space, const Ket& state, const CatParams& params,
                        const GridOracleConfig& cfg = {});
XiResult xi_grid_oracle(const FockSpace& space, const DensityOp& state, const CatParams& params,
                        const GridOracleConfig& cfg = {});

/// Numerator pieces at gamma = 1: Tr[O rho] = quadratic + gamma * parity.
/// Exposed for sweep outputs and term-by-term validation.
struct CatMoments {
    double quadratic = 0.0;
    double parity = 0.0;
};
CatMoments cat_moments(const Ket& state, const CatParams& params);
CatMoments cat_moments(const DensityOp& state, const CatParams& params);

nlohmann::json to_json(const XiResult& result);

}  // namespace catkit
