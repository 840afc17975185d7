#include "catkit/decoherence.hpp"

#include "oracle_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace catkit;

namespace {
const FockSpace kSpace = make_space(64, 1e-12, 1e-10);

OptConfig sweep_cfg() {
    OptConfig cfg;
    cfg.gamma_points = 15;
    cfg.starts = 6;
    cfg.max_iters = 150;
    return cfg;
}
}  // namespace

TEST_CASE("loss channel construction") {
    CHECK_THROWS_AS(loss_channel(kSpace, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(loss_channel(kSpace, 1.1), std::invalid_argument);

    const LossChannel id = loss_channel(kSpace, 1.0);
    CHECK(static_cast<int>(id.kraus.size()) == kSpace.dim);
    const DensityOp three = pure_density(fock_state(kSpace, 3));
    CHECK((apply_channel(three, id).mat - three.mat).cwiseAbs().maxCoeff() < 1e-13);

    const LossChannel dark = loss_channel(kSpace, 0.0);
    const DensityOp out = apply_channel(pure_density(coherent_state(kSpace, 1.5)), dark);
    CHECK(std::abs(out.mat.trace() - Complex(1.0)) < 1e-12);
    CHECK(std::abs(out.mat(0, 0) - Complex(1.0)) < 1e-12);
}

TEST_CASE("channel is trace preserving") {
    for (double tau : {0.0, 0.25, 0.5, 0.9, 1.0}) {
        const LossChannel ch = loss_channel(kSpace, tau);
        Mat sum = Mat::Zero(kSpace.dim, kSpace.dim);
        for (const auto& k : ch.kraus) sum += k.mat.adjoint() * k.mat;
        CAPTURE(tau);
        CHECK((sum - Mat::Identity(kSpace.dim, kSpace.dim)).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("loss maps coherent states to attenuated coherent states") {
    const Complex alpha(1.1, -0.4);
    const double tau = 0.7;
    const DensityOp out =
        apply_channel(pure_density(coherent_state(kSpace, alpha)), loss_channel(kSpace, tau));
    const Ket target = coherent_state(kSpace, std::sqrt(tau) * alpha);
    CHECK(1.0 - fidelity(out, target) <= 1e-9);
}

TEST_CASE("channel composition law") {
    const Complex alpha(0.9, 0.6);
    const double t1 = 0.8, t2 = 0.65;
    const DensityOp in = pure_density(coherent_state(kSpace, alpha));
    const DensityOp seq =
        apply_channel(apply_channel(in, loss_channel(kSpace, t2)), loss_channel(kSpace, t1));
    const Ket target = coherent_state(kSpace, std::sqrt(t1 * t2) * alpha);
    CHECK(1.0 - fidelity(seq, target) <= 1e-9);
}

TEST_CASE("lossy cat keeps trace and loses branch coherence") {
    const Complex alpha = 1.2;
    const Ket cat = cat_state(kSpace, alpha, Branch::even);
    const double tau = 0.9;
    const DensityOp out = apply_channel(pure_density(cat), loss_channel(kSpace, tau));
    CHECK(std::abs(out.mat.trace() - Complex(1.0)) < 1e-12);

    // interference block <sqrt(tau) a| rho' |-sqrt(tau) a> shrinks
    const Ket p0 = coherent_state(kSpace, alpha);
    const Ket m0 = coherent_state(kSpace, -alpha);
    const Ket p1 = coherent_state(kSpace, std::sqrt(tau) * alpha);
    const Ket m1 = coherent_state(kSpace, -std::sqrt(tau) * alpha);
    const DensityOp in = pure_density(cat);
    const double before = std::abs(Complex(p0.amps.dot(in.mat * m0.amps)));
    const double after = std::abs(Complex(p1.amps.dot(out.mat * m1.amps)));
    CHECK(after < before);
}

TEST_CASE("fidelity conventions") {
    const Ket cat = cat_state(kSpace, 1.2, Branch::even);
    CHECK(fidelity(pure_density(cat), cat) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fidelity(pure_density(fock_state(kSpace, 0)), fock_state(kSpace, 1)) ==
          doctest::Approx(0.0).epsilon(1e-15));

    const DensityOp lossy = apply_channel(pure_density(cat), loss_channel(kSpace, 0.95));
    // explicit quadratic form as the oracle
    Complex acc = 0.0;
    for (int i = 0; i < kSpace.dim; ++i)
        for (int j = 0; j < kSpace.dim; ++j)
            acc += std::conj(cat.amps(i)) * lossy.mat(i, j) * cat.amps(j);
    const double f = fidelity(lossy, cat);
    CHECK(f > 0.0);
    CHECK(f < 1.0);
    CHECK(std::abs(f - std::real(acc)) <= 1e-12);
    CHECK_THROWS_AS(fidelity(lossy, fock_state(make_space(16, 1e-10, 1e-10), 0)),
                    std::invalid_argument);
}

TEST_CASE("wigner values at the origin and displaced") {
    const DensityOp vac = pure_density(fock_state(kSpace, 0));
    CHECK(wigner_point(vac, 0.0) == doctest::Approx(2.0 / std::numbers::pi).epsilon(1e-12));
    CHECK(wigner_point(pure_density(fock_state(kSpace, 1)), 0.0) ==
          doctest::Approx(-2.0 / std::numbers::pi).epsilon(1e-12));

    const Complex beta(1.5, 0.5);
    CHECK(wigner_point(vac, beta) ==
          doctest::Approx((2.0 / std::numbers::pi) * std::exp(-2.0 * std::norm(beta)))
              .epsilon(1e-10));
}

TEST_CASE("wigner quadrature normalizes the vacuum") {
    const DensityOp vac = pure_density(fock_state(kSpace, 0));
    const WignerGrid grid{4.0, 0.1};
    const int side = static_cast<int>(std::floor(2.0 * grid.beta_max / grid.h)) + 1;
    double total = 0.0;
    for (int iy = 0; iy < side; ++iy)
        for (int ix = 0; ix < side; ++ix) {
            const Complex b(-grid.beta_max + ix * grid.h, -grid.beta_max + iy * grid.h);
            total += wigner_point(vac, b) * grid.h * grid.h;
        }
    CHECK(std::abs(total - 1.0) <= 1e-2);
}

TEST_CASE("wigner floor is negative for an ideal cat") {
    const DensityOp cat = pure_density(cat_state(kSpace, 1.5, Branch::even));
    CHECK(wigner_min(cat, WignerGrid{2.5, 0.1}) < 0.0);
    CHECK_THROWS_AS(wigner_min(cat, WignerGrid{40.0, 0.5}), truncation_error);
}

TEST_CASE("robustness sweep endpoints") {
    const OptConfig cfg = sweep_cfg();
    const WignerGrid grid{3.0, 0.15};

    const auto lossless = robustness_sweep(kSpace, 1.2, {1.0}, cfg, grid);
    REQUIRE(lossless.size() == 1);
    CHECK(lossless[0].xi_even <= 1e-6);
    CHECK(lossless[0].infidelity <= 1e-9);
    CHECK(lossless[0].wigner_min < 0.0);

    const auto dark = robustness_sweep(kSpace, 1.2, {0.0}, cfg, grid);
    CHECK(dark[0].xi_even >= 1.0 - 1e-3);
    CHECK(dark[0].xi_odd >= 1.0 - 1e-3);
}

TEST_CASE("xi grows monotonically with loss within the optimizer band") {
    const OptConfig cfg = sweep_cfg();
    const WignerGrid grid{3.0, 0.15};
    const auto rows = robustness_sweep(kSpace, 1.2, {0.9, 1.0, 0.95}, cfg, grid);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0].tau == 1.0);  // sorted descending
    CHECK(rows[1].tau == 0.95);
    CHECK(rows[2].tau == 0.9);
    CHECK(rows[1].xi_even >= rows[0].xi_even - 2e-3);
    CHECK(rows[2].xi_even >= rows[1].xi_even - 2e-3);
}

TEST_CASE("robustness csv format") {
    std::vector<RobustnessRow> rows{{1.0, 1e-7, 2e-7, 1e-9, -0.31830988618},
                                    {0.9, 0.25, 0.125, 0.07, -0.001}};
    const std::string csv = robustness_csv(rows);
    CHECK(csv.rfind("tau,xi_even,xi_odd,infidelity,wigner_min\n", 0) == 0);
    CHECK(csv.find("\n1,") != std::string::npos);
    CHECK(csv.find("-0.31830988618") != std::string::npos);
}
