// Acceptance suite: one line per criterion, nonzero exit when any fails.
//
// Criterion 2 and the C9 clause of criterion 8 assert the stated Casimir
// constant 1/16. The operator pipeline yields the representation-fixed value
// k(k-1) = -3/16 (lowest weights 1/4 and 3/4), so those two lines fail by
// exactly 1/4 and are expected to: the suite reports the stated value
// honestly rather than repinning it. See README "Findings".

#include "catkit/catability.hpp"
#include "catkit/claims.hpp"
#include "catkit/decoherence.hpp"
#include "catkit/fock.hpp"
#include "catkit/greens.hpp"
#include "catkit/su11.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace catkit;

namespace {

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %-38s %s\n", pass ? "PASS" : "FAIL", id, name.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

std::vector<GaussianParams> seeded_gaussians(int count, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> mag(0.0, 1.5), r(0.0, 0.8),
        ph(0.0, 2.0 * std::numbers::pi);
    std::vector<GaussianParams> out;
    for (int i = 0; i < count; ++i) {
        const double m = mag(rng), mp = ph(rng), rr = r(rng), rp = ph(rng);
        out.push_back(GaussianParams{std::polar(m, mp), std::polar(rr, rp)});
    }
    return out;
}

// criterion 4/10 payload: xi of the ideal even cats
std::vector<double> cat_xis(const FockSpace& space, const OptConfig& cfg) {
    std::vector<double> out;
    for (double a : {0.8, 1.2, 1.8}) {
        out.push_back(xi(space, cat_state(space, a, Branch::even), a, Branch::even, cfg).xi);
    }
    return out;
}

// criterion 5/10 payload: xi of the seeded Gaussian inputs
std::vector<double> gaussian_xis(const FockSpace& space, const std::vector<GaussianParams>& inputs,
                                 const OptConfig& cfg) {
    // corner inputs carry ~1e-9 true tail mass at dim 64, so construction
    // gets a relaxed tail budget; xi's tolerance is three orders above that
    const FockSpace loose = make_space(space.dim, space.herm_tol, 1e-6);
    std::vector<double> out;
    for (const auto& g : inputs) {
        const Ket state = gaussian_pure_state(loose, g);
        out.push_back(xi(space, Ket{state.amps, space}, 1.2, Branch::even, cfg).xi);
    }
    return out;
}

}  // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    const OptConfig cfg;  // library defaults; seed 42

    // 1. algebra closure
    {
        double worst = 0.0;
        for (int dim : {16, 64, 128}) {
            const ClosureReport rep = closure_residuals(build_su11(make_space(dim, 1e-12, 1e-10)), 4);
            worst = std::max({worst, rep.res_k0_kp, rep.res_k0_km, rep.res_km_kp});
        }
        report(1, "su(1,1) closure residuals", worst <= 1e-12, "max residual " + fmt(worst));
    }

    // 2. Casimir diagonal against the stated constant 1/16
    {
        double worst = 0.0;
        double measured = 0.0;
        for (int dim : {64, 128}) {
            const Su11Set set = build_su11(make_space(dim, 1e-12, 1e-10));
            for (int n = 0; n < dim - 4; ++n) {
                worst = std::max(worst, std::abs(set.casimir.mat(n, n) - Complex(1.0 / 16.0)));
                measured = std::real(set.casimir.mat(0, 0));
            }
        }
        report(2, "Casimir diagonal = 1/16", worst <= 1e-12,
               "dev " + fmt(worst) + " (pipeline constant " + fmt(measured) + " = -3/16)");
    }

    // 3. phase automorphism
    {
        const FockSpace space = make_space(64, 1e-12, 1e-10);
        const Su11Set set = build_su11(space);
        double worst = 0.0;
        for (double phi : {0.1, 1.0, 2.5}) {
            const OpMatrix u = phase_rotation(space, phi);
            const Complex w = std::exp(Complex(0, 2.0 * phi));
            worst = std::max(worst, (u.mat * set.k_plus.mat * u.mat.adjoint() - w * set.k_plus.mat)
                                        .cwiseAbs()
                                        .maxCoeff());
            worst = std::max(worst, (u.mat * set.k_minus.mat * u.mat.adjoint() -
                                     std::conj(w) * set.k_minus.mat)
                                        .cwiseAbs()
                                        .maxCoeff());
        }
        report(3, "phase automorphism on K+-", worst <= 1e-12, "max dev " + fmt(worst));
    }

    const FockSpace s64 = make_space(64, 1e-12, 1e-10);
    const FockSpace s128 = make_space(128, 1e-12, 1e-10);

    // 4. ideal-cat certificate
    std::vector<double> xi_cats_64;
    {
        xi_cats_64 = cat_xis(s64, cfg);
        double worst_xi = 0.0;
        for (double v : xi_cats_64) worst_xi = std::max(worst_xi, v);

        double worst_fid = 1.0;
        for (double a : {0.8, 1.2, 1.8}) {
            const OpMatrix op = cat_operator(s64, a, 1.0, Branch::even);
            Eigen::SelfAdjointEigenSolver<Mat> es(op.mat);
            const Ket cat = cat_state(s64, a, Branch::even);
            worst_fid = std::min(worst_fid, std::norm(Complex(cat.amps.dot(es.eigenvectors().col(0)))));
        }
        report(4, "ideal-cat certificate", worst_xi <= 1e-6 && worst_fid >= 1.0 - 1e-8,
               "max xi " + fmt(worst_xi) + ", min ground fidelity " + fmt(worst_fid));
    }

    // 5. Gaussian floor on 20 seeded inputs
    const std::vector<GaussianParams> inputs = seeded_gaussians(20, cfg.seed);
    std::vector<double> xi_gauss_64;
    {
        xi_gauss_64 = gaussian_xis(s64, inputs, cfg);
        double worst = 2.0;
        for (double v : xi_gauss_64) worst = std::min(worst, v);
        report(5, "Gaussian floor (20 seeded inputs)", worst >= 1.0 - 1e-3, "min xi " + fmt(worst));
    }

    // 6. optimizer vs the committed brute-force fixture
    {
        const char* dir = std::getenv("CATKIT_FIXTURES");
        bool pass = false;
        std::string detail = "CATKIT_FIXTURES unset";
        if (dir) {
            std::ifstream in(std::string(dir) + "/xi_fock1_a0.8_odd.json");
            if (in.good()) {
                const nlohmann::json fixture = nlohmann::json::parse(in);
                const double ref = fixture.at("xi").get<double>();
                const double opt = xi(s64, fock_state(s64, 1), 0.8, Branch::odd, cfg).xi;
                const double rel = std::abs(opt - ref) / ref;
                pass = rel <= 2e-3;
                detail = "relative gap " + fmt(rel);
            } else {
                detail = "fixture missing";
            }
        }
        report(6, "grid-oracle fixture agreement", pass, detail);
    }

    // 7. loss-channel correctness
    {
        double tp = 0.0;
        for (double tau : {0.0, 0.25, 0.5, 0.9, 1.0}) {
            const LossChannel ch = loss_channel(s64, tau);
            Mat sum = Mat::Zero(64, 64);
            for (const auto& k : ch.kraus) sum += k.mat.adjoint() * k.mat;
            tp = std::max(tp, (sum - Mat::Identity(64, 64)).cwiseAbs().maxCoeff());
        }
        const Complex alpha(1.1, -0.4);
        const DensityOp out =
            apply_channel(pure_density(coherent_state(s64, alpha)), loss_channel(s64, 0.7));
        const double deficit = 1.0 - fidelity(out, coherent_state(s64, std::sqrt(0.7) * alpha));
        const DensityOp comp = apply_channel(
            apply_channel(pure_density(coherent_state(s64, alpha)), loss_channel(s64, 0.8)),
            loss_channel(s64, 0.9));
        const double comp_deficit =
            1.0 - fidelity(comp, coherent_state(s64, std::sqrt(0.72) * alpha));
        report(7, "pure-loss channel correctness",
               tp <= 1e-12 && deficit <= 1e-9 && comp_deficit <= 1e-9,
               "trace dev " + fmt(tp) + ", attenuation deficit " + fmt(deficit) +
                   ", composition deficit " + fmt(comp_deficit));
    }

    // 8. claims adjudication at dim 128
    {
        const auto claims = builtin_claims();
        const auto v1 = run_claims(s128, claims);
        const auto v2 = run_claims(s128, claims);
        const std::string r1 = claims_report_json(s128, v1).dump(2);
        const std::string r2 = claims_report_json(s128, v2).dump(2);

        auto verdict_of = [&](const std::string& id) -> const ClaimVerdict& {
            for (const auto& v : v1)
                if (v.id == id) return v;
            throw std::logic_error("missing claim " + id);
        };
        bool quantified = true;
        for (const char* id : {"C3", "C4", "C5", "C6", "C7", "C8", "C11"}) {
            quantified = quantified && !verdict_of(id).skipped;
        }
        const bool musts = verdict_of("C1").verdict == Verdict::consistent &&
                           verdict_of("C9").verdict == Verdict::consistent &&
                           verdict_of("C10").verdict == Verdict::consistent &&
                           verdict_of("C2-phase_weighted").verdict == Verdict::consistent;
        report(8, "claim adjudication at dim 128", musts && quantified && r1 == r2,
               std::string("C1/C10/C2pw consistent, C9 ") +
                   (verdict_of("C9").verdict == Verdict::consistent ? "consistent" : "discrepant") +
                   " (dev " + fmt(verdict_of("C9").max_abs_dev) +
                   "), quantified C3-C8+C11: " + (quantified ? "yes" : "no") +
                   ", byte-identical: " + (r1 == r2 ? "yes" : "no"));
    }

    // 9. propagator-route vs Fock-route expectations
    {
        const RingLattice ring = make_ring(16);
        const ProjectionReport single = verify_projection(
            s64, ring, lesser_from_modes(ring, {{1, 1.0}}), ring_mode(ring, 1),
            MarginalKind::fock_occupation);
        const ProjectionReport thermal = verify_projection(
            s64, ring, lesser_from_modes(ring, {{1, 0.5}}), ring_mode(ring, 1),
            MarginalKind::thermal);
        const double worst = std::max(single.max_dev, thermal.max_dev);
        report(9, "propagator/Fock-route consistency", worst <= 1e-10, "max dev " + fmt(worst));
    }

    // 10. truncation stability 64 -> 128 for criteria 4 and 5
    {
        const std::vector<double> cats128 = cat_xis(s128, cfg);
        double worst = 0.0;
        for (std::size_t i = 0; i < cats128.size(); ++i)
            worst = std::max(worst, std::abs(cats128[i] - xi_cats_64[i]));
        const std::vector<double> gauss128 = gaussian_xis(s128, inputs, cfg);
        for (std::size_t i = 0; i < gauss128.size(); ++i)
            worst = std::max(worst, std::abs(gauss128[i] - xi_gauss_64[i]));
        report(10, "truncation stability of xi", worst <= 2e-3, "max |delta xi| " + fmt(worst));
    }

    // 11. robustness direction (report-grade)
    {
        const auto rows = robustness_sweep(s64, 1.2, {1.0, 0.95, 0.9, 0.8}, cfg, WignerGrid{4.0, 0.1});
        bool direction = true;
        for (const auto& r : rows) direction = direction && (r.xi_odd <= r.xi_even);
        std::ostringstream cross;
        cross << "none";
        for (const auto& r : rows) {
            if (r.wigner_min >= -1e-3 && r.xi_even < 1.0) {
                cross.str("");
                cross << "tau=" << r.tau << " wigner_min=" << fmt(r.wigner_min) << " xi_even=" << fmt(r.xi_even);
                break;
            }
        }
        report(11, "robustness sweep report", rows.size() == 4,
               std::string("CHECKED-CLAIM xi_odd<=xi_even: ") + (direction ? "yes" : "no") +
                   "; wigner/xi crossover: " + cross.str());
    }

    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();
    std::printf("acceptance: %d of 11 criteria failed (%.1f s)\n", g_failures, secs);
    return g_failures == 0 ? 0 : 1;
}
