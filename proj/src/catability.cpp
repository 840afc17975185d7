#include "catkit/catability.hpp"

#include "catkit/parallel.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

namespace catkit {

namespace {

constexpr double kBetaBox = 3.0;        // simplex / prescan box for Re,Im beta
constexpr double kDenominatorFloor = 1e-12;
constexpr double kTieTol = 1e-9;

double reduce_phase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double p = std::fmod(phi, two_pi);
    if (p < 0.0) p += two_pi;
    return p;
}

// Parity weights of the Hermitian-symmetrized phase-weighted operator:
// w_n = (-1)^n cos(n phi). The conjugated variant collapses to plain parity.
std::vector<double> parity_weights(int dim, const CatParams& p) {
    std::vector<double> w(dim);
    const bool phase = p.parity_variant == ParityVariant::phase_weighted;
    for (int n = 0; n < dim; ++n) {
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        w[n] = phase ? sign * std::cos(n * p.phi) : sign;
    }
    return w;
}

struct PairMoments {
    double quad = 0.0;
    double par = 0.0;  // Tr[O rho] = quad + gamma * par
};

// <B^dag B> and 1 -+ <Pi_w> for a pure displaced-squeezed state built in
// place; psi buffer is reused across calls on the same thread.
class GaussianPairEvaluator {
public:
    GaussianPairEvaluator(int dim, Complex z, Branch branch, std::vector<double> weights)
        : dim_(dim), z_(z), plus_(branch == Branch::even), w_(std::move(weights)) {
        s_.resize(dim_);
        for (int n = 0; n < dim_; ++n) s_[n] = std::sqrt((n + 1.0) * (n + 2.0));
    }

    PairMoments operator()(const GaussianParams& g) const {
        thread_local std::vector<Complex> psi;
        psi.assign(dim_, Complex(0.0));
        const double r = std::abs(g.zeta);
        const double mu = std::cosh(r);
        const Complex nu =
            r > 0.0 ? std::exp(Complex(0, 1) * std::arg(g.zeta)) * std::sinh(r) : Complex(0.0);
        const Complex drive = g.beta * mu + std::conj(g.beta) * nu;
        psi[0] = 1.0;
        double nrm2 = 1.0;
        for (int n = 0; n + 1 < dim_; ++n) {
            const Complex prev = n >= 1 ? psi[n - 1] : Complex(0.0);
            psi[n + 1] = (drive * psi[n] - nu * std::sqrt(static_cast<double>(n)) * prev) /
                         (mu * std::sqrt(n + 1.0));
            nrm2 += std::norm(psi[n + 1]);
        }
        double quad = 0.0, p = 0.0;
        for (int n = 0; n < dim_; ++n) {
            const Complex bn = (n + 2 < dim_) ? s_[n] * psi[n + 2] - z_ * psi[n] : -z_ * psi[n];
            quad += std::norm(bn);
            p += w_[n] * std::norm(psi[n]);
        }
        quad /= nrm2;
        p /= nrm2;
        return {quad, plus_ ? 1.0 - p : 1.0 + p};
    }

private:
    int dim_;
    Complex z_;
    bool plus_;
    std::vector<double> w_;
    std::vector<double> s_;
};

PairMoments state_moments(const Ket& state, Complex z, Branch branch,
                          const std::vector<double>& w) {
    const int d = state.space.dim;
    double quad = 0.0, p = 0.0;
    for (int n = 0; n < d; ++n) {
        const double s = std::sqrt((n + 1.0) * (n + 2.0));
        const Complex bn =
            (n + 2 < d) ? s * state.amps(n + 2) - z * state.amps(n) : -z * state.amps(n);
        quad += std::norm(bn);
        p += w[n] * std::norm(state.amps(n));
    }
    return {quad, branch == Branch::even ? 1.0 - p : 1.0 + p};
}

PairMoments state_moments(const DensityOp& state, Complex z, Branch branch,
                          const std::vector<double>& w) {
    const int d = state.space.dim;
    double quad = 0.0, p = 0.0;
    for (int n = 0; n < d; ++n) {
        quad += std::norm(z) * std::real(state.mat(n, n));
        if (n + 2 < d) {
            const double s = std::sqrt((n + 1.0) * (n + 2.0));
            quad += s * s * std::real(state.mat(n + 2, n + 2)) -
                    2.0 * s * std::real(std::conj(z) * state.mat(n + 2, n));
        }
        p += w[n] * std::real(state.mat(n, n));
    }
    // PSD quadratic form; shave float dust so xi stays nonnegative
    if (quad < 0.0 && quad > -1e-9) quad = 0.0;
    return {quad, branch == Branch::even ? 1.0 - p : 1.0 + p};
}

// ---------------------------------------------------------------------------
// Nelder-Mead over (Re beta, Im beta, r, theta)

using Point = std::array<double, 4>;

GaussianParams to_params(const Point& x, double r_max) {
    const double r = std::clamp(x[2], 0.0, r_max);
    return GaussianParams{Complex(x[0], x[1]), std::polar(r, x[3])};
}

struct BoxedObjective {
    const std::function<double(const GaussianParams&)>& f;
    double r_max;

    double operator()(const Point& x) const {
        const double r = std::clamp(x[2], 0.0, r_max);
        const double bre = std::clamp(x[0], -1.5 * kBetaBox, 1.5 * kBetaBox);
        const double bim = std::clamp(x[1], -1.5 * kBetaBox, 1.5 * kBetaBox);
        const double base = f(GaussianParams{Complex(bre, bim), std::polar(r, x[3])});
        const double ex = (x[2] - r) * (x[2] - r) + (x[0] - bre) * (x[0] - bre) +
                          (x[1] - bim) * (x[1] - bim);
        return base + ex * (1.0 + std::abs(base));
    }
};

struct NmOutcome {
    Point x{};
    double f = std::numeric_limits<double>::infinity();
    bool converged = false;
};

NmOutcome nelder_mead(const BoxedObjective& obj, const Point& start, int max_iters) {
    constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;
    const std::array<double, 4> step{0.3, 0.3, 0.15, 0.5};

    std::array<Point, 5> xs;
    std::array<double, 5> fs;
    xs[0] = start;
    fs[0] = obj(start);
    for (int i = 0; i < 4; ++i) {
        xs[i + 1] = start;
        xs[i + 1][i] += step[i];
        fs[i + 1] = obj(xs[i + 1]);
    }

    auto order = [&] {
        std::array<int, 5> idx{0, 1, 2, 3, 4};
        std::sort(idx.begin(), idx.end(), [&](int a, int b) { return fs[a] < fs[b]; });
        std::array<Point, 5> x2;
        std::array<double, 5> f2;
        for (int i = 0; i < 5; ++i) {
            x2[i] = xs[idx[i]];
            f2[i] = fs[idx[i]];
        }
        xs = x2;
        fs = f2;
    };
    order();

    bool converged = false;
    for (int it = 0; it < max_iters; ++it) {
        if (fs[4] - fs[0] < 1e-11 * (1.0 + std::abs(fs[0]))) {
            converged = true;
            break;
        }
        Point centroid{};
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 4; ++k) centroid[k] += xs[i][k] / 4.0;
        auto blend = [&](double c) {
            Point p;
            for (int k = 0; k < 4; ++k) p[k] = centroid[k] + c * (centroid[k] - xs[4][k]);
            return p;
        };
        const Point xr = blend(kReflect);
        const double fr = obj(xr);
        if (fr < fs[0]) {
            const Point xe = blend(kExpand);
            const double fe = obj(xe);
            if (fe < fr) {
                xs[4] = xe;
                fs[4] = fe;
            } else {
                xs[4] = xr;
                fs[4] = fr;
            }
        } else if (fr < fs[3]) {
            xs[4] = xr;
            fs[4] = fr;
        } else {
            const Point xc = blend(fr < fs[4] ? kContract : -kContract);
            const double fc = obj(xc);
            if (fc < std::min(fr, fs[4])) {
                xs[4] = xc;
                fs[4] = fc;
            } else {
                for (int i = 1; i < 5; ++i) {
                    for (int k = 0; k < 4; ++k) xs[i][k] = xs[0][k] + kShrink * (xs[i][k] - xs[0][k]);
                    fs[i] = obj(xs[i]);
                }
            }
        }
        order();
    }
    return NmOutcome{xs[0], fs[0], converged};
}

struct GaussianMin {
    double value = std::numeric_limits<double>::infinity();
    Point x{};
    bool converged = false;
};

// Deterministic multistart: the caller supplies the seed list; reduction is
// ordered by (value, start index).
GaussianMin multistart(const std::function<double(const GaussianParams&)>& f, double r_max,
                       const std::vector<Point>& seeds, int max_iters) {
    const BoxedObjective obj{f, r_max};
    std::vector<NmOutcome> runs(seeds.size());
    parallel_for(static_cast<int>(seeds.size()),
                 [&](int i) { runs[i] = nelder_mead(obj, seeds[i], max_iters); });
    GaussianMin best;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        if (runs[i].f < best.value) {
            best.value = runs[i].f;
            best.x = runs[i].x;
            best.converged = runs[i].converged;
        }
    }
    return best;
}

std::vector<Point> random_starts(int count, std::uint64_t seed, double r_max) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ub(-kBetaBox, kBetaBox);
    std::uniform_real_distribution<double> ur(0.0, std::min(r_max, 1.5));
    std::uniform_real_distribution<double> ut(0.0, 2.0 * std::numbers::pi);
    std::vector<Point> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.push_back(Point{ub(rng), ub(rng), ur(rng), ut(rng)});
    return out;
}

// ---------------------------------------------------------------------------
// gamma sweep with cached prescan pairs

struct PrescanCache {
    std::vector<Point> points;
    std::vector<PairMoments> pairs;

    int best_index(double gamma) const {
        int bi = 0;
        double bv = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const double v = pairs[i].quad + gamma * pairs[i].par;
            if (v < bv) {
                bv = v;
                bi = static_cast<int>(i);
            }
        }
        return bi;
    }
};

PrescanCache build_prescan(const GaussianPairEvaluator& eval, double r_max) {
    PrescanCache cache;
    const int nb = 9, nr = 5, nt = 8;
    const double rhi = std::min(r_max, 1.5);
    for (int i = 0; i < nb; ++i)
        for (int j = 0; j < nb; ++j)
            for (int k = 0; k < nr; ++k)
                for (int t = 0; t < nt; ++t) {
                    cache.points.push_back(Point{-kBetaBox + 2.0 * kBetaBox * i / (nb - 1.0),
                                                 -kBetaBox + 2.0 * kBetaBox * j / (nb - 1.0),
                                                 rhi * k / (nr - 1.0),
                                                 2.0 * std::numbers::pi * t / nt});
                }
    cache.pairs.resize(cache.points.size());
    parallel_for(static_cast<int>(cache.points.size()),
                 [&](int i) { cache.pairs[i] = eval(to_params(cache.points[i], r_max)); });
    return cache;
}

struct GammaEval {
    double gamma = 0.0;
    double num = 0.0;
    double den = 0.0;
    Point argmin{};
    bool converged = true;
    bool degenerate = false;
    double ratio() const { return num / den; }
};

class XiSolver {
public:
    XiSolver(const FockSpace& space, PairMoments num, const CatParams& params, const OptConfig& cfg)
        : space_(space),
          num_(num),
          params_(params),
          cfg_(cfg),
          eval_(space.dim, params.alpha * params.alpha * std::exp(Complex(0, 2.0 * params.phi)),
                params.branch, parity_weights(space.dim, params)),
          prescan_(build_prescan(eval_, cfg.r_max)),
          randoms_(random_starts(std::max(0, cfg.starts - 5), cfg.seed, cfg.r_max)) {}

    XiResult solve() {
        validate_opt(cfg_);
        const int np = cfg_.gamma_points;
        std::vector<GammaEval> grid(np);
        const double lmin = std::log(cfg_.gamma_min), lmax = std::log(cfg_.gamma_max);
        for (int i = 0; i < np; ++i) {
            const double g = std::exp(lmin + (lmax - lmin) * i / (np - 1.0));
            grid[i] = eval_gamma(g);
        }
        std::vector<GammaEval> all = grid;

        int best = -1;
        for (int i = 0; i < np; ++i) {
            if (grid[i].degenerate) continue;
            if (best < 0 || grid[i].ratio() < grid[best].ratio()) best = i;
        }
        if (best < 0) {
            throw degenerate_witness_error(
                "xi: Gaussian denominator degenerate on the whole gamma grid");
        }

        // golden-section polish on log(gamma) inside the bracketing grid cells
        double lo = std::log(grid[std::max(0, best - 1)].gamma);
        double hi = std::log(grid[std::min(np - 1, best + 1)].gamma);
        constexpr double invphi = 0.6180339887498949;
        double c = hi - invphi * (hi - lo);
        double d = lo + invphi * (hi - lo);
        GammaEval fc = eval_gamma(std::exp(c));
        GammaEval fd = eval_gamma(std::exp(d));
        all.push_back(fc);
        all.push_back(fd);
        while (hi - lo > cfg_.gs_tol) {
            const double rc = fc.degenerate ? std::numeric_limits<double>::infinity() : fc.ratio();
            const double rd = fd.degenerate ? std::numeric_limits<double>::infinity() : fd.ratio();
            if (rc < rd) {
                hi = d;
                d = c;
                fd = fc;
                c = hi - invphi * (hi - lo);
                fc = eval_gamma(std::exp(c));
                all.push_back(fc);
            } else {
                lo = c;
                c = d;
                fc = fd;
                d = lo + invphi * (hi - lo);
                fd = eval_gamma(std::exp(d));
                all.push_back(fd);
            }
        }

        return assemble(all);
    }

private:
    GammaEval eval_gamma(double gamma) {
        GammaEval out;
        out.gamma = gamma;
        out.num = num_.quad + gamma * num_.par;

        std::vector<Point> seeds;
        seeds.push_back(Point{0.0, 0.0, 0.0, 0.0});
        seeds.push_back(Point{params_.alpha.real(), params_.alpha.imag(), 0.0, 0.0});
        seeds.push_back(Point{-params_.alpha.real(), -params_.alpha.imag(), 0.0, 0.0});
        seeds.push_back(prescan_.points[prescan_.best_index(gamma)]);
        if (warm_) seeds.push_back(*warm_);
        for (const auto& p : randoms_) seeds.push_back(p);
        if (static_cast<int>(seeds.size()) > std::max(cfg_.starts, 3))
            seeds.resize(std::max(cfg_.starts, 3));

        auto f = [&](const GaussianParams& g) {
            const PairMoments m = eval_(g);
            return m.quad + gamma * m.par;
        };
        const GaussianMin m = multistart(f, cfg_.r_max, seeds, cfg_.max_iters);
        out.den = m.value;
        out.argmin = m.x;
        out.converged = m.converged;
        warm_ = m.x;
        if (!(out.den > kDenominatorFloor)) out.degenerate = true;
        return out;
    }

    XiResult assemble(const std::vector<GammaEval>& all) const {
        double best_ratio = std::numeric_limits<double>::infinity();
        for (const auto& e : all) {
            if (!e.degenerate) best_ratio = std::min(best_ratio, e.ratio());
        }
        const GammaEval* winner = nullptr;
        for (const auto& e : all) {
            if (e.degenerate || e.ratio() > best_ratio + kTieTol) continue;
            if (!winner || e.gamma < winner->gamma) winner = &e;
        }
        XiResult res;
        res.xi = std::max(0.0, winner->ratio());
        res.gamma_star = winner->gamma;
        res.gaussian_star = to_params(winner->argmin, cfg_.r_max);
        res.numerator = winner->num;
        res.denominator = winner->den;
        res.converged = winner->converged;
        res.optimizer_trace.reserve(all.size());
        for (const auto& e : all) {
            if (e.degenerate) res.excluded_gammas.push_back(e.gamma);
            else res.optimizer_trace.emplace_back(e.gamma, e.ratio());
        }
        if (std::abs(params_.alpha) > 0.0) {
            res.phase_norm = res.numerator / std::pow(std::abs(params_.alpha), 4);
        }
        return res;
    }

    FockSpace space_;
    PairMoments num_;
    CatParams params_;
    OptConfig cfg_;
    GaussianPairEvaluator eval_;
    PrescanCache prescan_;
    std::vector<Point> randoms_;
    std::optional<Point> warm_;
};

CatParams reduced(const CatParams& p) {
    CatParams q = p;
    q.phi = reduce_phase(p.phi);
    return q;
}

template <class State>
XiResult xi_phi_impl(const FockSpace& space, const State& state, const CatParams& params,
                     const OptConfig& cfg) {
    if (state.space.dim != space.dim) throw std::invalid_argument("xi: state/space dimension mismatch");
    const CatParams p = reduced(params);
    const Complex z = p.alpha * p.alpha * std::exp(Complex(0, 2.0 * p.phi));
    const auto w = parity_weights(space.dim, p);
    const PairMoments num = state_moments(state, z, p.branch, w);
    return XiSolver(space, num, p, cfg).solve();
}

// ---------------------------------------------------------------------------
// grid oracle

template <class State>
XiResult xi_grid_impl(const FockSpace& space, const State& state, const CatParams& params,
                      const GridOracleConfig& cfg) {
    const CatParams p = reduced(params);
    const Complex z = p.alpha * p.alpha * std::exp(Complex(0, 2.0 * p.phi));
    const auto w = parity_weights(space.dim, p);
    const PairMoments num = state_moments(state, z, p.branch, w);
    const GaussianPairEvaluator eval(space.dim, z, p.branch, parity_weights(space.dim, p));

    const int nb = cfg.beta_points, nr = cfg.r_points, nt = cfg.theta_points;
    auto grid_points = [&](double bre0, double bre1, double bim0, double bim1, double r0, double r1,
                           double t0, double t1, int pb, int pr, int pt) {
        std::vector<Point> pts;
        pts.reserve(static_cast<std::size_t>(pb) * pb * pr * pt);
        for (int i = 0; i < pb; ++i)
            for (int j = 0; j < pb; ++j)
                for (int k = 0; k < pr; ++k)
                    for (int t = 0; t < pt; ++t)
                        pts.push_back(Point{bre0 + (bre1 - bre0) * i / (pb - 1.0),
                                            bim0 + (bim1 - bim0) * j / (pb - 1.0),
                                            r0 + (r1 - r0) * k / (pr - 1.0),
                                            t0 + (t1 - t0) * t / pt});
        return pts;
    };

    std::vector<Point> pts = grid_points(-cfg.beta_box, cfg.beta_box, -cfg.beta_box, cfg.beta_box,
                                         0.0, cfg.r_max, 0.0, 2.0 * std::numbers::pi, nb, nr, nt);
    std::vector<PairMoments> pairs(pts.size());
    parallel_for(static_cast<int>(pts.size()),
                 [&](int i) { pairs[i] = eval(to_params(pts[i], cfg.r_max)); });

    auto sweep = [&](const std::vector<Point>& ps, const std::vector<PairMoments>& pr2) {
        struct Row {
            double gamma, num, den;
            int arg;
            bool degenerate;
        };
        std::vector<Row> rows;
        const double lmin = std::log(cfg.gamma_min), lmax = std::log(cfg.gamma_max);
        for (int gi = 0; gi < cfg.gamma_points; ++gi) {
            const double g = std::exp(lmin + (lmax - lmin) * gi / (cfg.gamma_points - 1.0));
            double dv = std::numeric_limits<double>::infinity();
            int ai = 0;
            for (std::size_t i = 0; i < pr2.size(); ++i) {
                const double v = pr2[i].quad + g * pr2[i].par;
                if (v < dv) {
                    dv = v;
                    ai = static_cast<int>(i);
                }
            }
            rows.push_back(Row{g, num.quad + g * num.par, dv, ai, !(dv > kDenominatorFloor)});
        }
        return rows;
    };

    auto rows = sweep(pts, pairs);

    if (cfg.refine) {
        // one local pass around the winning cell, refine_factor x denser
        int best = -1;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].degenerate) continue;
            if (best < 0 || rows[i].num / rows[i].den < rows[best].num / rows[best].den)
                best = static_cast<int>(i);
        }
        if (best >= 0) {
            const Point c = pts[rows[best].arg];
            const double hb = 2.0 * cfg.beta_box / (nb - 1.0);
            const double hr = cfg.r_max / (nr - 1.0);
            const double ht = 2.0 * std::numbers::pi / nt;
            const int pf = cfg.refine_points;
            // theta is degenerate on the r = 0 boundary, so a cell there says
            // nothing about the squeeze direction; sweep the full circle
            const bool r_edge = c[2] <= hr;
            const double t0 = r_edge ? 0.0 : c[3] - ht;
            const double t1 = r_edge ? 2.0 * std::numbers::pi : c[3] + ht;
            std::vector<Point> lpts =
                grid_points(c[0] - hb, c[0] + hb, c[1] - hb, c[1] + hb, std::max(0.0, c[2] - hr),
                            std::min(cfg.r_max, c[2] + hr), t0, t1, pf, pf, pf);
            std::vector<PairMoments> lpairs(lpts.size());
            parallel_for(static_cast<int>(lpts.size()),
                         [&](int i) { lpairs[i] = eval(to_params(lpts[i], cfg.r_max)); });
            auto lrows = sweep(lpts, lpairs);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (lrows[i].den < rows[i].den) {
                    rows[i].den = lrows[i].den;
                    rows[i].arg = -1 - lrows[i].arg;  // index into local grid
                    rows[i].degenerate = !(rows[i].den > kDenominatorFloor);
                }
            }
            pts.insert(pts.end(), lpts.begin(), lpts.end());
            for (auto& r2 : rows) {
                if (r2.arg < 0) r2.arg = static_cast<int>(pts.size() - lpts.size()) + (-1 - r2.arg);
            }
        }
    }

    XiResult res;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (const auto& r2 : rows)
        if (!r2.degenerate) best_ratio = std::min(best_ratio, r2.num / r2.den);
    if (!std::isfinite(best_ratio)) {
        throw degenerate_witness_error("xi_grid_oracle: denominator degenerate for every gamma");
    }
    const auto* win = &rows[0];
    bool found = false;
    for (const auto& r2 : rows) {
        if (r2.degenerate || r2.num / r2.den > best_ratio + kTieTol) continue;
        if (!found || r2.gamma < win->gamma) {
            win = &r2;
            found = true;
        }
    }
    res.xi = std::max(0.0, win->num / win->den);
    res.gamma_star = win->gamma;
    res.gaussian_star = to_params(pts[win->arg], cfg.r_max);
    res.numerator = win->num;
    res.denominator = win->den;
    for (const auto& r2 : rows) {
        if (r2.degenerate) res.excluded_gammas.push_back(r2.gamma);
        else res.optimizer_trace.emplace_back(r2.gamma, r2.num / r2.den);
    }
    if (std::abs(p.alpha) > 0.0) res.phase_norm = res.numerator / std::pow(std::abs(p.alpha), 4);
    return res;
}

}  // namespace

void validate_opt(const OptConfig& cfg) {
    auto bad = [](const std::string& key) {
        throw std::invalid_argument("opt config: invalid value for " + key);
    };
    if (!(cfg.gamma_min > 0.0)) bad("gamma_min");
    if (!(cfg.gamma_max > cfg.gamma_min)) bad("gamma_max");
    if (cfg.gamma_points < 2) bad("gamma_points");
    if (!(cfg.gs_tol > 0.0)) bad("gs_tol");
    if (cfg.starts < 1) bad("starts");
    if (!(cfg.r_max > 0.0)) bad("r_max");
    if (cfg.max_iters < 10) bad("max_iters");
}

OpMatrix cat_operator(const FockSpace& space, Complex alpha, double gamma, Branch branch) {
    return phase_cat_operator(space, CatParams{alpha, branch, 0.0, ParityVariant::phase_weighted},
                              gamma);
}

OpMatrix phase_cat_operator(const FockSpace& space, const CatParams& params, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("phase_cat_operator: gamma must be >= 0");
    const CatParams p = reduced(params);
    const int d = space.dim;
    const Complex z = p.alpha * p.alpha * std::exp(Complex(0, 2.0 * p.phi));

    Mat b = Mat::Zero(d, d);
    for (int n = 0; n + 2 < d; ++n) b(n, n + 2) = std::sqrt((n + 1.0) * (n + 2.0));
    b.diagonal().array() -= z;
    Mat op = b.adjoint() * b;

    const double sgn = p.branch == Branch::even ? -1.0 : 1.0;
    if (p.parity_variant == ParityVariant::conjugated) {
        // e^{i phi n} (-1)^n e^{-i phi n} is plain parity: the factors commute.
        for (int n = 0; n < d; ++n) {
            op(n, n) += gamma * (1.0 + sgn * (n % 2 == 0 ? 1.0 : -1.0));
        }
    } else {
        for (int n = 0; n < d; ++n) {
            const double pw = (n % 2 == 0 ? 1.0 : -1.0);
            op(n, n) += gamma * (1.0 + sgn * pw * std::exp(Complex(0, 1) * (p.phi * n)));
        }
        op = 0.5 * (op + op.adjoint()).eval();
    }
    return OpMatrix{std::move(op), true, space};
}

Ket gaussian_pure_state(const FockSpace& space, const GaussianParams& g) {
    // stable route (Laguerre displacement matrix times the squeezed-vacuum
    // series) so the tail test below sees real mass, not recurrence dust
    Ket state = squeezed_vacuum_state(space, g.zeta);
    if (g.beta != Complex(0.0)) {
        state.amps = (displaced_number_matrix(space, g.beta).mat * state.amps).eval();
        state.amps /= state.amps.norm();
    }
    const int band = std::max(4, space.dim / 16);
    if (tail_mass(state, band) > space.tail_tol) {
        const double sh = std::sinh(std::abs(g.zeta));
        const double mean_n = std::norm(g.beta) + sh * sh;
        const int hint = static_cast<int>(std::ceil(4.0 * mean_n + 8.0 * std::sqrt(mean_n) + 16.0));
        throw truncation_error("gaussian_pure_state: (beta, zeta) does not fit at dim " +
                                   std::to_string(space.dim) + "; try dim >= " + std::to_string(hint),
                               hint);
    }
    return state;
}

MinResult min_over_gaussians(const FockSpace& space, const OpMatrix& op, const OptConfig& cfg) {
    validate_opt(cfg);
    if (op.space.dim != space.dim) throw std::invalid_argument("min_over_gaussians: dimension mismatch");
    const double herm_dev = (op.mat - op.mat.adjoint()).cwiseAbs().maxCoeff();
    if (herm_dev > std::max(space.herm_tol, 1e-12 * op.mat.cwiseAbs().maxCoeff())) {
        throw std::invalid_argument("min_over_gaussians: operator is not Hermitian (dev " +
                                    std::to_string(herm_dev) + ")");
    }

    auto f = [&](const GaussianParams& g) {
        const Ket psi = displaced_squeezed_state(space, g.beta, g.zeta);
        return std::real(psi.amps.dot(op.mat * psi.amps));
    };

    // coarse prescan picks one seed; vacuum plus random draws fill the rest
    std::vector<Point> seeds{Point{0.0, 0.0, 0.0, 0.0}};
    {
        const int nb = 7, nr = 4, nt = 6;
        Point bp{};
        double bv = std::numeric_limits<double>::infinity();
        for (int i = 0; i < nb; ++i)
            for (int j = 0; j < nb; ++j)
                for (int k = 0; k < nr; ++k)
                    for (int t = 0; t < nt; ++t) {
                        const Point x{-kBetaBox + 2.0 * kBetaBox * i / (nb - 1.0),
                                      -kBetaBox + 2.0 * kBetaBox * j / (nb - 1.0),
                                      std::min(cfg.r_max, 1.5) * k / (nr - 1.0),
                                      2.0 * std::numbers::pi * t / nt};
                        const double v = f(to_params(x, cfg.r_max));
                        if (v < bv) {
                            bv = v;
                            bp = x;
                        }
                    }
        seeds.push_back(bp);
    }
    for (const auto& p : random_starts(std::max(0, cfg.starts - 2), cfg.seed, cfg.r_max))
        seeds.push_back(p);

    const GaussianMin m = multistart(f, cfg.r_max, seeds, cfg.max_iters);
    return MinResult{m.value, to_params(m.x, cfg.r_max), m.converged};
}

XiResult xi(const FockSpace& space, const Ket& state, Complex alpha, Branch branch,
            const OptConfig& cfg) {
    return xi_phi_impl(space, state, CatParams{alpha, branch, 0.0, ParityVariant::phase_weighted},
                       cfg);
}

XiResult xi(const FockSpace& space, const DensityOp& state, Complex alpha, Branch branch,
            const OptConfig& cfg) {
    return xi_phi_impl(space, state, CatParams{alpha, branch, 0.0, ParityVariant::phase_weighted},
                       cfg);
}

XiResult xi_phi(const FockSpace& space, const Ket& state, const CatParams& params,
                const OptConfig& cfg) {
    return xi_phi_impl(space, state, params, cfg);
}

XiResult xi_phi(const FockSpace& space, const DensityOp& state, const CatParams& params,
                const OptConfig& cfg) {
    return xi_phi_impl(space, state, params, cfg);
}

XiResult xi_grid_oracle(const FockSpace& space, const Ket& state, const CatParams& params,
                        const GridOracleConfig& cfg) {
    return xi_grid_impl(space, state, params, cfg);
}

XiResult xi_grid_oracle(const FockSpace& space, const DensityOp& state, const CatParams& params,
                        const GridOracleConfig& cfg) {
    return xi_grid_impl(space, state, params, cfg);
}

CatMoments cat_moments(const Ket& state, const CatParams& params) {
    const CatParams p = reduced(params);
    const Complex z = p.alpha * p.alpha * std::exp(Complex(0, 2.0 * p.phi));
    const PairMoments m = state_moments(state, z, p.branch, parity_weights(state.space.dim, p));
    return CatMoments{m.quad, m.par};
}

CatMoments cat_moments(const DensityOp& state, const CatParams& params) {
    const CatParams p = reduced(params);
    const Complex z = p.alpha * p.alpha * std::exp(Complex(0, 2.0 * p.phi));
    const PairMoments m = state_moments(state, z, p.branch, parity_weights(state.space.dim, p));
    return CatMoments{m.quad, m.par};
}

nlohmann::json to_json(const XiResult& r) {
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& [g, v] : r.optimizer_trace) trace.push_back({{"gamma", g}, {"ratio", v}});
    nlohmann::json j{{"xi", r.xi},
                     {"gamma_star", r.gamma_star},
                     {"gaussian_star",
                      {{"beta_re", r.gaussian_star.beta.real()},
                       {"beta_im", r.gaussian_star.beta.imag()},
                       {"r", std::abs(r.gaussian_star.zeta)},
                       {"theta", std::abs(r.gaussian_star.zeta) > 0.0
                                     ? std::arg(r.gaussian_star.zeta)
                                     : 0.0}}},
                     {"numerator", r.numerator},
                     {"denominator", r.denominator},
                     {"converged", r.converged},
                     {"excluded_gammas", r.excluded_gammas},
                     {"optimizer_trace", trace}};
    if (std::isfinite(r.phase_norm)) j["phase_norm"] = r.phase_norm;
    return j;
}

}  // namespace catkit
