#include "catkit/catability.hpp"
#include "catkit/claims.hpp"
#include "catkit/decoherence.hpp"
#include "catkit/fock.hpp"
#include "catkit/greens.hpp"
#include "catkit/su11.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <variant>

namespace {

using namespace catkit;

constexpr int kExitUsage = 1;
constexpr int kExitVerification = 2;

std::string fmt12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

struct RunConfig {
    int dim = 64;
    double herm_tol = 1e-10;
    double tail_tol = 1e-10;
    OptConfig opt;
    double beta_max = 4.0;
    double h = 0.1;
    std::string out;
    std::string json;
};

void validate_config(const RunConfig& rc) {
    auto bad = [](const std::string& key) {
        throw std::invalid_argument("config: invalid value for key '" + key + "'");
    };
    if (rc.dim < 4) bad("dim");
    if (!(rc.herm_tol > 0.0)) bad("herm_tol");
    if (!(rc.tail_tol > 0.0)) bad("tail_tol");
    if (!(rc.beta_max > 0.0)) bad("beta_max");
    if (!(rc.h > 0.0)) bad("h");
    try {
        validate_opt(rc.opt);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
}

Complex parse_complex(const std::string& text) {
    std::istringstream in(text);
    double re = 0.0, im = 0.0;
    char comma = 0;
    if (!(in >> re)) throw std::invalid_argument("cannot parse complex number from '" + text + "'");
    if (in >> comma) {
        if (comma != ',' || !(in >> im)) {
            throw std::invalid_argument("cannot parse complex number from '" + text + "'");
        }
    }
    return Complex(re, im);
}

Branch parse_branch(const std::string& text) {
    if (text == "even") return Branch::even;
    if (text == "odd") return Branch::odd;
    throw std::invalid_argument("branch must be 'even' or 'odd', got '" + text + "'");
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    return parts;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    for (const auto& part : split(text, ',')) out.push_back(std::stod(part));
    return out;
}

using StateVariant = std::variant<Ket, DensityOp>;

constexpr const char* kStateGrammar =
    "state grammar: cat:ALPHA:BRANCH | coherent:ALPHA | fock:N | "
    "squeezed_fock:N:R:THETA | lossy_cat:ALPHA:BRANCH:TAU   (ALPHA = re[,im])";

StateVariant parse_state(const FockSpace& space, const std::string& spec) {
    const auto parts = split(spec, ':');
    try {
        if (parts[0] == "cat" && parts.size() == 3) {
            return cat_state(space, parse_complex(parts[1]), parse_branch(parts[2]));
        }
        if (parts[0] == "coherent" && parts.size() == 2) {
            return coherent_state(space, parse_complex(parts[1]));
        }
        if (parts[0] == "fock" && parts.size() == 2) {
            return fock_state(space, std::stoi(parts[1]));
        }
        if (parts[0] == "squeezed_fock" && parts.size() == 4) {
            return squeezed_fock(space, std::stoi(parts[1]),
                                 std::polar(std::stod(parts[2]), std::stod(parts[3])));
        }
        if (parts[0] == "lossy_cat" && parts.size() == 4) {
            const Ket cat = cat_state(space, parse_complex(parts[1]), parse_branch(parts[2]));
            const LossChannel ch = loss_channel(space, std::stod(parts[3]));
            return apply_channel(pure_density(cat), ch);
        }
    } catch (const truncation_error&) {
        throw;
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("unparseable state '") + spec + "'; " +
                                    kStateGrammar);
    }
    throw std::invalid_argument(std::string("unparseable state '") + spec + "'; " + kStateGrammar);
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
    if (!out.good()) throw std::runtime_error("failed writing '" + path + "'");
}

// ---------------------------------------------------------------------------

struct CheckRow {
    std::string name;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

int do_verify(const RunConfig& rc, int guard) {
    const FockSpace space = make_space(rc.dim, rc.herm_tol, rc.tail_tol);
    std::vector<CheckRow> rows;
    auto add = [&](const std::string& name, double measured, double threshold) {
        rows.push_back(CheckRow{name, measured, threshold, measured <= threshold});
    };

    const LadderOps lad = ladder_ops(space);
    const int d = space.dim;
    {
        const Mat comm = lad.a.mat * lad.adag.mat - lad.adag.mat * lad.a.mat - Mat::Identity(d, d);
        add("[a,a^dag] = 1 on n < dim-1", comm.topLeftCorner(d - 1, d - 1).cwiseAbs().maxCoeff(),
            1e-12);
    }
    {
        const OpMatrix pi = parity_op(space);
        add("parity involution Pi^2 = 1",
            (pi.mat * pi.mat - Mat::Identity(d, d)).cwiseAbs().maxCoeff(), 0.0);
        add("parity commutes with n", (pi.mat * lad.n.mat - lad.n.mat * pi.mat).cwiseAbs().maxCoeff(),
            0.0);
    }
    {
        // probe amplitudes sized to the configured dim
        const double a_coh = min_coherent_dim(1.0, space.tail_tol) <= d ? 1.0 : 0.25;
        const double a_cat = min_coherent_dim(1.2, space.tail_tol) <= d ? 1.2 : 0.25;
        const Ket c = coherent_state(space, a_coh);
        // compare against the closed form carrying the same truncated-norm
        // factor the constructor applies
        std::vector<double> ref(d);
        double lgam = 0.0, norm2 = 0.0;
        for (int n = 0; n < d; ++n) {
            if (n > 0) lgam += std::log(static_cast<double>(n));
            ref[n] = std::exp(-0.5 * a_coh * a_coh + n * std::log(a_coh) - 0.5 * lgam);
            norm2 += ref[n] * ref[n];
        }
        double rel = 0.0;
        for (int n = 0; n <= std::min(30, d - 1); ++n) {
            const double r = ref[n] / std::sqrt(norm2);
            rel = std::max(rel, std::abs(std::abs(c.amps(n)) - r) / r);
        }
        add("coherent amplitudes vs series (n<=30)", rel, 1e-14);
        const Ket cat = cat_state(space, a_cat, Branch::even);
        double odd_mass = 0.0;
        for (int n = 1; n < d; n += 2) odd_mass += std::abs(cat.amps(n));
        add("even cat has bitwise-zero odd support", odd_mass, 0.0);
    }
    {
        const Su11Set set = build_su11(space);
        const ClosureReport rep = closure_residuals(set, guard);
        add("su11 closure [K0,K+] - K+", rep.res_k0_kp, 1e-12);
        add("su11 closure [K0,K-] + K-", rep.res_k0_km, 1e-12);
        add("su11 closure [K-,K+] - 2K0", rep.res_km_kp, 1e-12);
        add("casimir diagonal = k(k-1) = -3/16", rep.casimir_dev, 1e-12);

        double kk_dev = 0.0;
        const Mat kpkm = set.k_plus.mat * set.k_minus.mat;
        for (int n = 0; n < d; ++n) {
            kk_dev = std::max(kk_dev, std::abs(4.0 * kpkm(n, n) - Complex(n * (n - 1.0))));
        }
        add("K+K- diagonal = n(n-1)/4", kk_dev, 1e-10);
        add("lowest weights K-|0> = K-|1> = 0",
            set.k_minus.mat.col(0).cwiseAbs().maxCoeff() +
                set.k_minus.mat.col(1).cwiseAbs().maxCoeff(),
            0.0);

        double auto_dev = 0.0;
        for (double phi : {0.1, 1.0, 2.5}) {
            const OpMatrix u = phase_rotation(space, phi);
            const Complex w = std::exp(Complex(0, 2.0 * phi));
            auto_dev = std::max(
                auto_dev,
                (u.mat * set.k_plus.mat * u.mat.adjoint() - w * set.k_plus.mat).cwiseAbs().maxCoeff());
            auto_dev = std::max(auto_dev, (u.mat * set.k_minus.mat * u.mat.adjoint() -
                                           std::conj(w) * set.k_minus.mat)
                                              .cwiseAbs()
                                              .maxCoeff());
        }
        add("phase automorphism U K+- U^dag = e^{+-2i phi} K+-", auto_dev, 1e-12);
    }
    {
        const auto [pe, po] = parity_projectors(space);
        double dev = (pe.mat + po.mat - Mat::Identity(d, d)).cwiseAbs().maxCoeff();
        dev = std::max(dev, (pe.mat * pe.mat - pe.mat).cwiseAbs().maxCoeff());
        const Su11Set set = build_su11(space);
        dev = std::max(dev, (set.k_plus.mat * pe.mat - pe.mat * set.k_plus.mat).cwiseAbs().maxCoeff());
        add("parity projectors: completeness, idempotence, [K+,P]=0", dev, 0.0);
        add("flux map 1.25 flux_quanta -> pi/2",
            std::abs(flux_to_phase(1.25, 1.0) - std::numbers::pi / 2.0), 1e-12);
    }

    bool all = true;
    for (const auto& r : rows) {
        all = all && r.pass;
        std::printf("[%s] %-52s measured=%-12.3e tol=%.1e\n", r.pass ? "PASS" : "FAIL",
                    r.name.c_str(), r.measured, r.threshold);
    }
    std::printf("verify: %zu checks, %s\n", rows.size(), all ? "all passed" : "FAILURES present");
    return all ? 0 : kExitVerification;
}

// ---------------------------------------------------------------------------

int do_xi(const RunConfig& rc, const std::string& state_spec, const std::string& alpha_text,
          const std::string& branch_text, std::optional<double> phi, bool oracle) {
    const FockSpace space = make_space(rc.dim, rc.herm_tol, rc.tail_tol);
    const Complex alpha = parse_complex(alpha_text);
    const Branch branch = parse_branch(branch_text);
    const StateVariant state = parse_state(space, state_spec);

    CatParams params{alpha, branch, phi.value_or(0.0), ParityVariant::phase_weighted};
    XiResult res;
    if (oracle) {
        GridOracleConfig gcfg;
        res = std::visit([&](const auto& s) { return xi_grid_oracle(space, s, params, gcfg); },
                         state);
    } else if (phi) {
        res = std::visit([&](const auto& s) { return xi_phi(space, s, params, rc.opt); }, state);
    } else {
        res = std::visit([&](const auto& s) { return xi(space, s, alpha, branch, rc.opt); }, state);
    }

    std::string csv = "state,alpha_re,alpha_im,branch,phi,xi,gamma_star,beta_re,beta_im,r,theta\n";
    csv += state_spec + "," + fmt12(alpha.real()) + "," + fmt12(alpha.imag()) + "," + branch_text +
           "," + fmt12(params.phi) + "," + fmt12(res.xi) + "," + fmt12(res.gamma_star) + "," +
           fmt12(res.gaussian_star.beta.real()) + "," + fmt12(res.gaussian_star.beta.imag()) + "," +
           fmt12(std::abs(res.gaussian_star.zeta)) + "," +
           fmt12(std::abs(res.gaussian_star.zeta) > 0.0 ? std::arg(res.gaussian_star.zeta) : 0.0) +
           "\n";
    write_file(rc.out.empty() ? "xi.csv" : rc.out, csv);

    nlohmann::json j = to_json(res);
    j["state"] = state_spec;
    j["mode"] = oracle ? "grid-oracle" : "optimizer";
    write_file(rc.json.empty() ? "xi.json" : rc.json, j.dump(2) + "\n");

    std::printf("xi = %s (gamma* = %s)%s\n", fmt12(res.xi).c_str(), fmt12(res.gamma_star).c_str(),
                res.converged ? "" : "  [unconverged]");
    return 0;
}

// ---------------------------------------------------------------------------

int do_sweep_phase(const RunConfig& rc, const std::string& alpha_text,
                   const std::string& branch_text, int n_points, const std::string& flux_list,
                   double flux_quantum) {
    const FockSpace space = make_space(rc.dim, rc.herm_tol, rc.tail_tol);
    const Complex alpha = parse_complex(alpha_text);
    const Branch branch = parse_branch(branch_text);

    std::vector<double> phis;
    if (!flux_list.empty()) {
        for (double f : parse_list(flux_list)) phis.push_back(flux_to_phase(f, flux_quantum));
    } else {
        if (n_points < 2) throw std::invalid_argument("sweep-phase: need --n-points >= 2");
        for (int i = 0; i < n_points; ++i) phis.push_back(2.0 * std::numbers::pi * i / n_points);
    }

    const Ket cat = cat_state(space, alpha, branch);
    std::string csv = "phi,flux_over_flux0,xi_phi,re_parity_term,quadratic_term\n";
    for (double phi : phis) {
        CatParams params{alpha, branch, phi, ParityVariant::phase_weighted};
        // at phi = pi the phase-weighted parity weight is identically +1 and
        // the Gaussian denominator degenerates; the row reports nan
        double value = std::numeric_limits<double>::quiet_NaN();
        try {
            value = xi_phi(space, cat, params, rc.opt).xi;
        } catch (const degenerate_witness_error&) {
        }
        const CatMoments m = cat_moments(cat, params);
        csv += fmt12(phi) + "," + fmt12(phi / (2.0 * std::numbers::pi)) + "," + fmt12(value) +
               "," + fmt12(m.parity) + "," + fmt12(m.quadratic) + "\n";
    }
    write_file(rc.out.empty() ? "sweep_phase.csv" : rc.out, csv);
    std::printf("sweep-phase: %zu points written\n", phis.size());
    return 0;
}

// ---------------------------------------------------------------------------

int do_sweep_loss(const RunConfig& rc, const std::string& alpha_text,
                  const std::string& tau_list) {
    const FockSpace space = make_space(rc.dim, rc.herm_tol, rc.tail_tol);
    const Complex alpha = parse_complex(alpha_text);
    const std::vector<double> taus = parse_list(tau_list);
    for (double t : taus) {
        if (t < 0.0 || t > 1.0) throw std::invalid_argument("sweep-loss: tau must lie in [0,1]");
    }

    const WignerGrid grid{rc.beta_max, rc.h};
    const auto rows = robustness_sweep(space, alpha, taus, rc.opt, grid);
    write_file(rc.out.empty() ? "sweep_loss.csv" : rc.out, robustness_csv(rows));

    bool direction = true;
    for (const auto& r : rows) direction = direction && (r.xi_odd <= r.xi_even);
    std::printf("CHECKED-CLAIM xi_odd<=xi_even at every tau: %s\n", direction ? "yes" : "no");

    bool crossover = false;
    for (const auto& r : rows) {
        if (r.wigner_min >= -1e-3 && r.xi_even < 1.0) {
            std::printf(
                "CHECKED-CLAIM wigner-floor nonnegative while xi informative: tau=%s "
                "wigner_min=%s xi_even=%s\n",
                fmt12(r.tau).c_str(), fmt12(r.wigner_min).c_str(), fmt12(r.xi_even).c_str());
            crossover = true;
            break;
        }
    }
    if (!crossover) {
        std::printf("CHECKED-CLAIM wigner-floor nonnegative while xi informative: none\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------

int do_claims(const RunConfig& rc) {
    const FockSpace space = make_space(rc.dim, rc.herm_tol, rc.tail_tol);
    const auto claims = builtin_claims();
    const auto verdicts = run_claims(space, claims);
    const auto report = claims_report_json(space, verdicts);
    write_file(rc.json.empty() ? "claims.json" : rc.json, report.dump(2) + "\n");

    for (const auto& v : verdicts) {
        if (v.skipped) {
            std::printf("%-18s skipped (needs larger dim)\n", v.id.c_str());
        } else {
            std::printf("%-18s %-11s max_abs_dev=%.3e\n", v.id.c_str(),
                        v.verdict == Verdict::consistent ? "consistent" : "discrepant",
                        v.max_abs_dev);
        }
    }
    if (!must_hold_satisfied(claims, verdicts)) {
        std::printf("claims: must-hold verdict changed; refusing to accept this run\n");
        return kExitVerification;
    }
    return 0;
}

// ---------------------------------------------------------------------------

int do_greens_demo(const RunConfig& rc, int sites, const std::string& occupation) {
    const FockSpace space = make_space(rc.dim, rc.herm_tol, rc.tail_tol);
    const RingLattice ring = make_ring(sites);

    const auto parts = split(occupation, ':');
    MarginalKind kind;
    int m0 = 1;
    double nu = 1.0;
    if (parts[0] == "single" && parts.size() == 2) {
        kind = MarginalKind::fock_occupation;
        m0 = std::stoi(parts[1]);
    } else if (parts[0] == "thermal" && (parts.size() == 2 || parts.size() == 3)) {
        kind = MarginalKind::thermal;
        nu = std::stod(parts[1]);
        if (parts.size() == 3) m0 = std::stoi(parts[2]);
    } else {
        throw std::invalid_argument("occupation grammar: single:M0 | thermal:NU[:M0]");
    }

    const LesserGF g = lesser_from_modes(ring, {{m0, kind == MarginalKind::fock_occupation ? 1.0 : nu}});
    const ModeFunction psi = ring_mode(ring, m0);
    const ProjectionReport rep = verify_projection(space, ring, g, psi, kind);

    std::printf("occupation deviation: %s\n", fmt12(rep.occupation_dev).c_str());
    std::printf("j0 deviation:         %s\n", fmt12(rep.j0_dev).c_str());
    if (rep.pair_dev) std::printf("pair-moment deviation: %s\n", fmt12(*rep.pair_dev).c_str());
    std::printf("max deviation:        %s\n", fmt12(rep.max_dev).c_str());
    return rep.max_dev <= 1e-10 ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"catkit: cat-coherence witness and su(1,1) structure toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global keys remain usable after the subcommand name
    app.set_help_flag("--help", "print usage");  // frees --h for the Wigner spacing key
    app.set_config("--config", "", "flat key=value config file (# comments)");

    RunConfig rc;
    app.add_option("--dim", rc.dim, "Fock-space truncation");
    app.add_option("--herm_tol", rc.herm_tol, "Hermiticity tolerance");
    app.add_option("--tail_tol", rc.tail_tol, "acceptable truncation tail mass");
    app.add_option("--gamma_min", rc.opt.gamma_min, "gamma grid lower bound");
    app.add_option("--gamma_max", rc.opt.gamma_max, "gamma grid upper bound");
    app.add_option("--gamma_points", rc.opt.gamma_points, "gamma grid size");
    app.add_option("--gs_tol", rc.opt.gs_tol, "golden-section relative tolerance");
    app.add_option("--starts", rc.opt.starts, "multistart count");
    app.add_option("--r_max", rc.opt.r_max, "squeezing bound for the Gaussian search");
    app.add_option("--seed", rc.opt.seed, "random-start seed");
    app.add_option("--max_iters", rc.opt.max_iters, "simplex iterations per start");
    app.add_option("--beta_max", rc.beta_max, "Wigner grid half-width");
    app.add_option("--h", rc.h, "Wigner grid spacing");
    app.add_option("--out", rc.out, "CSV output path");
    app.add_option("--json", rc.json, "JSON output path");

    auto* cmd_verify = app.add_subcommand("verify", "run the algebra/operator invariant table");
    int guard = 4;
    cmd_verify->add_option("--guard", guard, "truncation guard band");

    auto* cmd_xi = app.add_subcommand("xi", "compute the catability witness for one state");
    std::string state_spec, alpha_text = "0", branch_text = "even";
    std::optional<double> phi;
    bool oracle = false;
    cmd_xi->add_option("--state", state_spec, kStateGrammar)->required();
    cmd_xi->add_option("--alpha", alpha_text, "witness amplitude, re[,im]")->required();
    cmd_xi->add_option("--branch", branch_text, "even | odd");
    cmd_xi->add_option("--phi", phi, "phase; selects the phase-dependent witness");
    cmd_xi->add_flag("--oracle", oracle, "brute-force grid route (fixture generation)");

    auto* cmd_sweep_phase = app.add_subcommand("sweep-phase", "xi_phi over a phase sweep");
    std::string sp_alpha = "1.2", sp_branch = "even", flux_list;
    int n_points = 9;
    double flux_quantum = 1.0;
    cmd_sweep_phase->add_option("--alpha", sp_alpha, "cat amplitude");
    cmd_sweep_phase->add_option("--branch", sp_branch, "even | odd");
    cmd_sweep_phase->add_option("--n-points", n_points, "uniform phi points in [0, 2pi)");
    cmd_sweep_phase->add_option("--flux", flux_list, "comma list of flux values");
    cmd_sweep_phase->add_option("--flux-quantum", flux_quantum, "flux quantum");

    auto* cmd_sweep_loss = app.add_subcommand("sweep-loss", "robustness rows under photon loss");
    std::string sl_alpha = "1.2", tau_list = "1,0.95,0.9,0.8";
    cmd_sweep_loss->add_option("--alpha", sl_alpha, "cat amplitude");
    cmd_sweep_loss->add_option("--tau", tau_list, "comma list of transmissivities");

    auto* cmd_claims = app.add_subcommand("claims", "adjudicate the closed-form registry");

    auto* cmd_greens = app.add_subcommand("greens-demo", "propagator vs Fock-route consistency");
    int sites = 16;
    std::string occupation = "single:1";
    cmd_greens->add_option("--sites", sites, "ring sites (even, >= 8)");
    cmd_greens->add_option("--occupation", occupation, "single:M0 | thermal:NU[:M0]");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        validate_config(rc);
        if (*cmd_verify) return do_verify(rc, guard);
        if (*cmd_xi) return do_xi(rc, state_spec, alpha_text, branch_text, phi, oracle);
        if (*cmd_sweep_phase)
            return do_sweep_phase(rc, sp_alpha, sp_branch, n_points, flux_list, flux_quantum);
        if (*cmd_sweep_loss) return do_sweep_loss(rc, sl_alpha, tau_list);
        if (*cmd_claims) return do_claims(rc);
        if (*cmd_greens) return do_greens_demo(rc, sites, occupation);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
