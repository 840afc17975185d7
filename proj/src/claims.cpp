#include "catkit/claims.hpp"

#include "catkit/su11.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>

namespace catkit {

namespace {

Complex point_alpha(const ClaimPoint& p) {
    return Complex(p.alpha_re.value_or(0.0), p.alpha_im.value_or(0.0));
}

// Poisson weights accumulated directly; intentionally a different route than
// the coherent-state constructor.
Complex poisson_parity_series(const FockSpace& space, Complex alpha, double phi) {
    const double lam = std::norm(alpha);
    double p = std::exp(-lam);
    Complex acc = 0.0;
    for (int n = 0; n < space.dim; ++n) {
        if (n > 0) p *= lam / n;
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        acc += p * sign * std::exp(Complex(0, 1) * (phi * n));
    }
    return acc;
}

OpMatrix pair_moment_op(const FockSpace& space) {
    const LadderOps lad = ladder_ops(space);
    return OpMatrix{lad.adag.mat * lad.adag.mat * lad.a.mat * lad.a.mat, true, space};
}

// 4 (J+ - conj(z)) (J- - z) + gamma (1 - (-1)^n e^{i phi n}), Hermitian part.
OpMatrix lowering_sector_witness(const FockSpace& space, Complex alpha, double phi, double gamma) {
    const Su11Set set = build_su11(space);
    const Complex z = alpha * alpha * std::exp(Complex(0, 2.0 * phi));
    const int d = space.dim;
    Mat m = 4.0 * (set.k_plus.mat - std::conj(z) * Mat::Identity(d, d)) *
            (set.k_minus.mat - z * Mat::Identity(d, d));
    for (int n = 0; n < d; ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        m(n, n) += gamma * (1.0 - sign * std::exp(Complex(0, 1) * (phi * n)));
    }
    m = 0.5 * (m + m.adjoint()).eval();
    return OpMatrix{std::move(m), true, space};
}

std::vector<ClaimPoint> alpha_domain(std::initializer_list<double> alphas) {
    std::vector<ClaimPoint> out;
    for (double a : alphas) {
        ClaimPoint p;
        p.alpha_re = a;
        out.push_back(p);
    }
    return out;
}

std::vector<ClaimPoint> alpha_phi_domain(std::initializer_list<double> alphas, int phis) {
    std::vector<ClaimPoint> out;
    for (double a : alphas) {
        for (int k = 0; k < phis; ++k) {
            ClaimPoint p;
            p.alpha_re = a;
            p.phi = 2.0 * std::numbers::pi * k / phis;
            out.push_back(p);
        }
    }
    return out;
}

void preflight(const FockSpace& space) {
    auto fail = [](const std::string& what) {
        throw std::logic_error("claims preflight: oracle plumbing broken: " + what);
    };
    const LadderOps lad = ladder_ops(space);
    if (std::abs(expectation(lad.n, fock_state(space, 0))) > 1e-14) fail("<0|n|0>");
    if (std::abs(expectation(lad.n, fock_state(space, 1)) - Complex(1.0)) > 1e-14) fail("<1|n|1>");
    if (std::abs(expectation(parity_op(space), fock_state(space, 1)) + Complex(1.0)) > 1e-14)
        fail("<1|Pi|1>");
    if (std::abs(poisson_parity_series(space, 0.0, 0.7) - Complex(1.0)) > 1e-14)
        fail("vacuum parity series");
    const Su11Set set = build_su11(space);
    if (std::abs(set.k_zero.mat(0, 0) - Complex(0.25)) > 1e-15) fail("<0|K0|0>");
}

}  // namespace

Verdict classify(double max_abs_dev, double max_rel_dev) {
    return (max_abs_dev <= 1e-8 || max_rel_dev <= 1e-6) ? Verdict::consistent : Verdict::discrepant;
}

std::vector<Claim> builtin_claims() {
    std::vector<Claim> claims;

    {
        Claim c;
        c.id = "C1";
        c.description = "Fock-state pair moment";
        c.formula = "<n| c^dag^2 c^2 |n> = n(n-1)";
        for (int n = 0; n <= 10; ++n) {
            ClaimPoint p;
            p.n = n;
            c.domain.push_back(p);
        }
        c.analytic = [](const FockSpace&, const ClaimPoint& p) {
            const double n = *p.n;
            return Complex(n * (n - 1.0));
        };
        c.oracle = [](const FockSpace& s, const ClaimPoint& p) {
            return expectation(pair_moment_op(s), fock_state(s, *p.n));
        };
        c.min_dim = 16;
        c.must_hold = true;
        claims.push_back(std::move(c));
    }

    {
        Claim c;
        c.id = "C2-conjugated";
        c.description = "rotated parity, conjugated reading, against the phase-weighted series";
        c.formula =
            "<e^{i phi n} (-1)^n e^{-i phi n}> over |alpha> = sum_n P_n (-1)^n e^{i phi n}";
        c.domain = alpha_phi_domain({0.5, 1.0, 1.5}, 8);
        c.analytic = [](const FockSpace& s, const ClaimPoint& p) {
            return poisson_parity_series(s, point_alpha(p), *p.phi);
        };
        c.oracle = [](const FockSpace& s, const ClaimPoint& p) {
            const OpMatrix u = phase_rotation(s, *p.phi);
            const OpMatrix ud = phase_rotation(s, -*p.phi);
            const OpMatrix op{u.mat * parity_op(s).mat * ud.mat, false, s};
            return expectation(op, coherent_state(s, point_alpha(p)));
        };
        c.expected = Verdict::discrepant;
        c.min_dim = 28;
        claims.push_back(std::move(c));
    }

    {
        Claim c;
        c.id = "C2-phase_weighted";
        c.description = "rotated parity, phase-weighted reading, against its series";
        c.formula = "<(-1)^n e^{i phi n}> over |alpha> = sum_n P_n (-1)^n e^{i phi n}";
        c.domain = alpha_phi_domain({0.5, 1.0, 1.5}, 8);
        c.analytic = [](const FockSpace& s, const ClaimPoint& p) {
            return poisson_parity_series(s, point_alpha(p), *p.phi);
        };
        c.oracle = [](const FockSpace& s, const ClaimPoint& p) {
            Mat m = Mat::Zero(s.dim, s.dim);
            for (int n = 0; n < s.dim; ++n) {
                const double sign = (n % 2 == 0) ? 1.0 : -1.0;
                m(n, n) = sign * std::exp(Complex(0, 1) * (*p.phi * n));
            }
            return expectation(OpMatrix{std::move(m), false, s}, coherent_state(s, point_alpha(p)));
        };
        c.must_hold = true;
        c.min_dim = 28;
        claims.push_back(std::move(c));
    }

    {
        Claim c;
        c.id = "C3";
        c.description = "coherent rotated-parity closed form";
        c.formula =
            "sum_n P_n (-1)^n e^{i phi n} = exp(-2|a|^2 sin^2(phi/2)) exp(i |a|^2 sin phi)";
        c.domain = alpha_phi_domain({0.5, 1.0, 1.5}, 8);
        c.analytic = [](const FockSpace&, const ClaimPoint& p) {
            const double lam = std::norm(point_alpha(p));
            const double s2 = std::sin(*p.phi / 2.0);
            return std::exp(-2.0 * lam * s2 * s2) *
                   std::exp(Complex(0, 1) * (lam * std::sin(*p.phi)));
        };
        c.oracle = [](const FockSpace& s, const ClaimPoint& p) {
            return poisson_parity_series(s, point_alpha(p), *p.phi);
        };
        c.expected = Verdict::discrepant;
        c.min_dim = 28;
        claims.push_back(std::move(c));
    }

    {
        Claim c;
        c.id = "C4";
        c.description = "coherent pair-moment factorization";
        c.formula = "<c^dag^2 c^2> over |alpha> = 2 |alpha|^4";
        c.domain = alpha_domain({0.5, 1.0, 1.5, 2.0});
        c.analytic = [](const FockSpace&, const ClaimPoint& p) {
            const double lam = std::norm(point_alpha(p));
            return Complex(2.0 * lam * lam);
        };
        c.oracle = [](const FockSpace& s, const ClaimPoint& p) {
            return expectation(pair_moment_op(s), coherent_state(s, point_alpha(p)));
        };
        c.expected = Verdict::discrepant;
        c.min_dim = 32;
        claims.push_back(std::move(c));
    }

    {
        Claim c;
        c.id = "C5";
        c.description = "coherent lowering-sector expectation";
        c.formula = "<J_-> over |alpha> = alpha^2 with J_- = c^2 / 2";
        c.domain = alpha_domain({0.5, 1.0, 1.5, 2.0});
        c.analytic = [](const FockSpace&, const ClaimPoint& p) {
            const Complex a = point_alpha(p);
            return a * a;
        };
        c.oracle = [](const FockSpace& s, const ClaimPoint& p) {
            return expectation(build_su11(s).k_minus, coherent_state(s, point_alpha(p)));
        };
        c.expected = Verdict::discrepant;
        c.min_dim = 32;
        claims.push_back(std::move(c));
    }

    {
        Claim c;
        c.id = "C6";
        c.description = "coherent diagonal-generator expectation";
        c.formula = "<J_0> over |alpha> = |alpha|^2 + 1/4 with J_0 = (n + 1/2) / 2";
        c.domain = alpha_domain({0.5, 1.0, 1.5, 2.0});
        c.analytic = [](const FockSpace&, const ClaimPoint& p) {
            return Complex(std::norm(point_alpha(p)) + 0.25);
        };
        c.oracle = [](const FockSpace& s, const ClaimPoint& p) {
            return expectation(build_su11(s).k_zero, coherent_state(s, point_alpha(p)));
        };
        c.expected = Verdict::discrepant;
        c.min_dim = 32;
        claims.push_back(std::move(c));
    }

    {
        Claim c;
        c.id = "C7";
        c.description = "coherent quadratic-diagonal expectation";
        c.formula = "<J_0^2 - J_0> over |alpha> = |alpha|^4 - |alpha|^2/4 - 3/16";
        c.domain = alpha_domain({0.5, 1.0, 1.5, 2.0});
        c.analytic = [](const FockSpace&, const ClaimPoint& p) {
            const double lam = std::norm(point_alpha(p));
            return Complex(lam * lam - 0.25 * lam - 3.0 / 16.0);
        };
        c.oracle = [](const FockSpace& s, const ClaimPoint& p) {
            const Mat k0 = build_su11(s).k_zero.mat;
            return expectation(OpMatrix{k0 * k0 - k0, true, s}, coherent_state(s, point_alpha(p)));
        };
        c.expected = Verdict::discrepant;
        c.min_dim = 32;
        claims.push_back(std::move(c));
    }

    {
        Claim c;
        c.id = "C8";
        c.description = "phase-dependent witness closed form on a coherent state";
        c.formula =
            "Re<4 (J_- - a^2 e^{2i phi})^dag (J_- - a^2 e^{2i phi}) + gamma (1 - Pi_phi)> = "
            "8|a|^4 (1 - cos 2 phi) + gamma [1 - e^{-2|a|^2 sin^2(phi/2)} cos(|a|^2 sin phi)]";
        for (double a : {1.0, 1.5})
            for (int k = 0; k < 8; ++k)
                for (double g : {0.5, 2.0}) {
                    ClaimPoint p;
                    p.alpha_re = a;
                    p.phi = 2.0 * std::numbers::pi * k / 8;
                    p.gamma = g;
                    c.domain.push_back(p);
                }
        c.analytic = [](const FockSpace&, const ClaimPoint& p) {
            const double lam = std::norm(point_alpha(p));
            const double s2 = std::sin(*p.phi / 2.0);
            return Complex(8.0 * lam * lam * (1.0 - std::cos(2.0 * *p.phi)) +
                           *p.gamma * (1.0 - std::exp(-2.0 * lam * s2 * s2) *
                                                 std::cos(lam * std::sin(*p.phi))));
        };
        c.oracle = [](const FockSpace& s, const ClaimPoint& p) {
            const OpMatrix op = lowering_sector_witness(s, point_alpha(p), *p.phi, *p.gamma);
            return expectation(op, coherent_state(s, point_alpha(p)));
        };
        c.expected = Verdict::discrepant;
        c.min_dim = 28;
        claims.push_back(std::move(c));
    }

    {
        Claim c;
        c.id = "C9";
        c.description = "Casimir diagonal constant";
        c.formula = "K_0^2 - K_0 - K_+ K_- = 1/16";
        for (int n = 0; n <= 124; ++n) {
            ClaimPoint p;
            p.n = n;
            c.domain.push_back(p);
        }
        c.analytic = [](const FockSpace&, const ClaimPoint&) { return Complex(1.0 / 16.0); };
        c.oracle = [](const FockSpace& s, const ClaimPoint& p) {
            return build_su11(s).casimir.mat(*p.n, *p.n);
        };
        // The pipeline value is the representation-fixed k(k-1) = -3/16 on
        // both parity sectors, so the stated 1/16 adjudicates discrepant with
        // deviation exactly 1/4; must_hold pins that finding against oracle
        // tampering.
        c.must_hold = true;
        c.expected = Verdict::discrepant;
        c.min_dim = 8;
        claims.push_back(std::move(c));
    }

    {
        Claim c;
        c.id = "C10";
        c.description = "coherent parity";
        c.formula = "<(-1)^n> over |alpha> = e^{-2 |alpha|^2}";
        c.domain = alpha_domain({0.5, 1.0, 1.5, 2.0});
        c.analytic = [](const FockSpace&, const ClaimPoint& p) {
            return Complex(std::exp(-2.0 * std::norm(point_alpha(p))));
        };
        c.oracle = [](const FockSpace& s, const ClaimPoint& p) {
            return expectation(parity_op(s), coherent_state(s, point_alpha(p)));
        };
        c.must_hold = true;
        c.min_dim = 32;
        claims.push_back(std::move(c));
    }

    {
        Claim c;
        c.id = "C11";
        c.description = "large-amplitude limit of the phase-dependent witness";
        c.formula = "<O_phi> ~ 8 |alpha|^4 (1 - cos 2 phi) at |alpha| = 2.5, gamma = 1";
        for (int k = 0; k < 8; ++k) {
            ClaimPoint p;
            p.alpha_re = 2.5;
            p.phi = 2.0 * std::numbers::pi * k / 8;
            p.gamma = 1.0;
            c.domain.push_back(p);
        }
        c.analytic = [](const FockSpace&, const ClaimPoint& p) {
            const double lam = std::norm(point_alpha(p));
            return Complex(8.0 * lam * lam * (1.0 - std::cos(2.0 * *p.phi)));
        };
        c.oracle = [](const FockSpace& s, const ClaimPoint& p) {
            const OpMatrix op = lowering_sector_witness(s, point_alpha(p), *p.phi, *p.gamma);
            return expectation(op, coherent_state(s, point_alpha(p)));
        };
        c.min_dim = 128;
        c.expected = Verdict::discrepant;
        claims.push_back(std::move(c));
    }

    return claims;
}

std::vector<ClaimVerdict> run_claims(const FockSpace& space, const std::vector<Claim>& claims) {
    preflight(space);

    std::vector<ClaimVerdict> out;
    out.reserve(claims.size());
    for (const auto& c : claims) {
        ClaimVerdict v;
        v.id = c.id;
        v.description = c.description;
        v.formula = c.formula;
        if (space.dim < c.min_dim) {
            v.skipped = true;
            out.push_back(std::move(v));
            continue;
        }
        for (const auto& p : c.domain) {
            if (p.n && *p.n > space.dim - 4) continue;  // domain capped by the space
            const Complex a = c.analytic(space, p);
            const Complex o = c.oracle(space, p);
            const double dev = std::abs(a - o);
            const double scale = std::max(std::abs(a), std::abs(o));
            const double rel = scale > 0.0 ? dev / scale : 0.0;
            if (dev > v.max_abs_dev) {
                v.max_abs_dev = dev;
                v.worst_point = p;
            }
            v.max_rel_dev = std::max(v.max_rel_dev, rel);
        }
        v.verdict = classify(v.max_abs_dev, v.max_rel_dev);
        out.push_back(std::move(v));
    }
    return out;
}

bool must_hold_satisfied(const std::vector<Claim>& claims,
                         const std::vector<ClaimVerdict>& verdicts) {
    for (std::size_t i = 0; i < claims.size() && i < verdicts.size(); ++i) {
        if (!claims[i].must_hold) continue;
        if (verdicts[i].skipped) return false;
        if (verdicts[i].verdict != claims[i].expected) return false;
    }
    return true;
}

nlohmann::ordered_json claims_report_json(const FockSpace& space,
                                          const std::vector<ClaimVerdict>& verdicts) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& v : verdicts) {
        nlohmann::ordered_json e;
        e["id"] = v.id;
        e["description"] = v.description;
        e["paper_ref"] = v.formula;
        if (v.skipped) {
            e["max_abs_dev"] = nullptr;
            e["max_rel_dev"] = nullptr;
            e["verdict"] = nullptr;
            e["worst_point"] = nullptr;
        } else {
            e["max_abs_dev"] = v.max_abs_dev;
            e["max_rel_dev"] = v.max_rel_dev;
            e["verdict"] = v.verdict == Verdict::consistent ? "consistent" : "discrepant";
            nlohmann::ordered_json wp;
            if (v.worst_point.alpha_re) wp["alpha_re"] = *v.worst_point.alpha_re;
            if (v.worst_point.alpha_im) wp["alpha_im"] = *v.worst_point.alpha_im;
            if (v.worst_point.phi) wp["phi"] = *v.worst_point.phi;
            if (v.worst_point.gamma) wp["gamma"] = *v.worst_point.gamma;
            if (v.worst_point.n) wp["n"] = *v.worst_point.n;
            e["worst_point"] = wp;
        }
        e["skipped"] = v.skipped;
        arr.push_back(std::move(e));
    }
    return nlohmann::ordered_json{{"schema", "claimcheck/1"}, {"dim", space.dim}, {"claims", arr}};
}

}  // namespace catkit
