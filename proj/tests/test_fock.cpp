#include "catkit/fock.hpp"

#include "oracle_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace catkit;

namespace {
const FockSpace kSpace = make_space(64, 1e-12, 1e-10);
}

TEST_CASE("make_space validates its arguments") {
    CHECK(make_space(64, 1e-12, 1e-10).dim == 64);
    CHECK(make_space(256, 1e-12, 1e-12).dim == 256);
    CHECK_THROWS_AS(make_space(3, 1e-12, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(make_space(64, -1e-12, 1e-10), std::invalid_argument);
    CHECK_THROWS_AS(make_space(64, 1e-12, 0.0), std::invalid_argument);
}

TEST_CASE("ladder operators act as expected") {
    const LadderOps lad = ladder_ops(kSpace);
    const Ket one = fock_state(kSpace, 1);
    const Vec lowered = lad.a.mat * one.amps;
    CHECK(std::abs(lowered(0) - Complex(1.0)) < 1e-15);

    const Vec raised = lad.adag.mat * fock_state(kSpace, 0).amps;
    CHECK(std::abs(raised(1) - Complex(1.0)) < 1e-15);

    CHECK(std::abs(expectation(lad.n, fock_state(kSpace, 2)) - Complex(2.0)) < 1e-14);

    // [a, a^dag] = 1 away from the boundary row (product rounding only)
    const Mat comm = lad.a.mat * lad.adag.mat - lad.adag.mat * lad.a.mat;
    const int d = kSpace.dim;
    CHECK((comm.topLeftCorner(d - 1, d - 1) - Mat::Identity(d - 1, d - 1)).cwiseAbs().maxCoeff() <=
          1e-12);
}

TEST_CASE("parity operator") {
    const OpMatrix pi = parity_op(kSpace);
    CHECK(pi.mat(0, 0) == Complex(1.0));
    CHECK(pi.mat(3, 3) == Complex(-1.0));
    CHECK((pi.mat * pi.mat - Mat::Identity(kSpace.dim, kSpace.dim)).cwiseAbs().maxCoeff() == 0.0);

    const LadderOps lad = ladder_ops(kSpace);
    CHECK((pi.mat * lad.n.mat - lad.n.mat * pi.mat).cwiseAbs().maxCoeff() == 0.0);

    const Complex par = expectation(pi, coherent_state(kSpace, 1.0));
    CHECK(std::abs(par - Complex(std::exp(-2.0))) < 1e-13);
}

TEST_CASE("fock_state bounds") {
    CHECK(fock_state(kSpace, 0).amps(0) == Complex(1.0));
    CHECK(fock_state(kSpace, 5).amps(5) == Complex(1.0));
    CHECK_THROWS_AS(fock_state(kSpace, 64), std::out_of_range);
}

TEST_CASE("coherent state matches its defining series") {
    CHECK(coherent_state(kSpace, 0.0).amps(0) == Complex(1.0));

    const Ket c1 = coherent_state(kSpace, 1.0);
    const LadderOps lad = ladder_ops(kSpace);
    CHECK(std::real(expectation(lad.n, c1)) ==
          doctest::Approx(oracle::coherent_mean_n(1.0, 200)).epsilon(1e-10));

    // <alpha|-alpha> = e^{-2|alpha|^2}
    const Ket cm = coherent_state(kSpace, -1.0);
    const Complex overlap = c1.amps.dot(cm.amps);
    CHECK(std::abs(overlap - oracle::coherent_overlap(1.0, -1.0, 200)) < 1e-12);
    CHECK(std::abs(overlap - Complex(std::exp(-2.0))) < 1e-12);

    // eigenstate residual within tail-driven tolerance
    const Vec resid = lad.a.mat * c1.amps - Complex(1.0) * c1.amps;
    CHECK(resid.norm() < 1e-9);
}

TEST_CASE("coherent amplitudes match the closed form to 1e-14 relative") {
    for (const Complex alpha : {Complex(0.7, 0.0), Complex(1.3, -0.8), Complex(0.0, 2.0)}) {
        const Ket c = coherent_state(kSpace, alpha);
        double lgam = 0.0;
        for (int n = 0; n <= 30; ++n) {
            if (n > 0) lgam += std::log(static_cast<double>(n));
            const Complex ref = std::exp(-0.5 * std::norm(alpha)) * std::pow(alpha, n) *
                                std::exp(-0.5 * lgam);
            if (std::abs(ref) < 1e-30) continue;
            CHECK(std::abs(c.amps(n) - ref) / std::abs(ref) < 1e-13);
        }
    }
}

TEST_CASE("coherent truncation failure names the minimal adequate dim") {
    const FockSpace tiny = make_space(8, 1e-12, 1e-10);
    try {
        coherent_state(tiny, 2.0);
        FAIL("expected truncation_error");
    } catch (const truncation_error& e) {
        CHECK(e.min_adequate_dim > 8);
        const FockSpace ok = make_space(e.min_adequate_dim, 1e-12, 1e-10);
        CHECK_NOTHROW(coherent_state(ok, 2.0));
    }
}

TEST_CASE("cat states") {
    CHECK(cat_state(kSpace, 0.0, Branch::even).amps(0) == Complex(1.0));
    CHECK_THROWS_AS(cat_state(kSpace, 0.0, Branch::odd), std::invalid_argument);

    const Ket even = cat_state(kSpace, 1.2, Branch::even);
    const Ket odd = cat_state(kSpace, 1.2, Branch::odd);
    for (int n = 0; n < kSpace.dim; ++n) {
        if (n % 2 == 1) CHECK(even.amps(n) == Complex(0.0));
        if (n % 2 == 0) CHECK(odd.amps(n) == Complex(0.0));
    }

    // annihilated by a^2 - alpha^2
    const LadderOps lad = ladder_ops(kSpace);
    const Mat a2 = lad.a.mat * lad.a.mat;
    CHECK((a2 * even.amps - Complex(1.44) * even.amps).norm() < 1e-9);

    // normalization factor against the series value
    const Ket plus = coherent_state(kSpace, 1.0);
    const Ket minus = coherent_state(kSpace, -1.0);
    const Vec manual = oracle::even_cat_norm_factor(1.0) * (plus.amps + minus.amps);
    CHECK((manual - cat_state(kSpace, 1.0, Branch::even).amps).norm() < 1e-10);
}

TEST_CASE("displacement and squeeze operators") {
    const OpMatrix d0 = displacement_op(kSpace, 0.0);
    CHECK((d0.mat - Mat::Identity(kSpace.dim, kSpace.dim)).cwiseAbs().maxCoeff() < 1e-14);

    const Complex beta(0.9, -0.4);
    const Vec displaced = displacement_op(kSpace, beta).mat * fock_state(kSpace, 0).amps;
    const Ket reference = coherent_state(kSpace, beta);
    CHECK(std::abs(1.0 - std::abs(reference.amps.dot(displaced))) < 1e-9);

    const LadderOps lad = ladder_ops(kSpace);
    const Vec sq = squeeze_op(kSpace, 0.5).mat * fock_state(kSpace, 0).amps;
    const double mean_n = std::real(sq.dot(lad.n.mat * sq));
    CHECK(mean_n == doctest::Approx(oracle::squeezed_vacuum_mean_n(0.5, 200)).epsilon(1e-9));
    CHECK(mean_n == doctest::Approx(std::sinh(0.5) * std::sinh(0.5)).epsilon(1e-9));

    // unitarity on the guarded subspace
    const OpMatrix db = displacement_op(kSpace, beta);
    const int keep = kSpace.dim - unitarity_guard(beta, 0.0);
    const Mat defect = (db.mat.adjoint() * db.mat - Mat::Identity(kSpace.dim, kSpace.dim))
                           .topLeftCorner(keep, keep);
    CHECK(defect.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("squeezed Fock states") {
    CHECK((squeezed_fock(kSpace, 0, 0.0).amps - fock_state(kSpace, 0).amps).norm() < 1e-14);
    CHECK((squeezed_fock(kSpace, 1, 0.0).amps - fock_state(kSpace, 1).amps).norm() < 1e-14);
    CHECK_THROWS_AS(squeezed_fock(kSpace, 16, 0.3), std::out_of_range);

    // squeezing preserves parity
    const Ket s1 = squeezed_fock(kSpace, 1, 0.6);
    CHECK(std::real(expectation(parity_op(kSpace), s1)) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("displaced-squeezed recurrence agrees with the exponential route") {
    for (const auto& [beta, zeta] : std::vector<std::pair<Complex, Complex>>{
             {{1.0, 0.0}, {0.0, 0.0}},
             {{0.0, 0.0}, {0.5, 0.0}},
             {{1.5, -0.7}, {std::polar(0.6, 1.1)}},
         }) {
        const Ket fast = displaced_squeezed_state(kSpace, beta, zeta);
        const Vec slow_raw =
            displacement_op(kSpace, beta).mat * (squeeze_op(kSpace, zeta).mat.col(0));
        const Vec slow = slow_raw / slow_raw.norm();
        CHECK(std::abs(1.0 - std::abs(Complex(fast.amps.dot(slow)))) < 1e-11);
    }
}

TEST_CASE("displaced-number matrix agrees with the exponential route") {
    const FockSpace big = make_space(128, 1e-12, 1e-10);
    for (const Complex beta : {Complex(1.0, 0.0), Complex(2.0, -1.0), Complex(0.1, 0.0)}) {
        const Mat viaExp = displacement_op(big, beta).mat;
        const Mat viaRec = displaced_number_matrix(big, beta).mat;
        // compare on the low block, away from the exponential's edge damage
        CHECK((viaExp - viaRec).topLeftCorner(48, 48).cwiseAbs().maxCoeff() < 1e-11);
    }
}

TEST_CASE("expectation values and symmetry") {
    const LadderOps lad = ladder_ops(kSpace);
    CHECK(std::abs(expectation(lad.n, fock_state(kSpace, 3)) - Complex(3.0)) < 1e-13);

    const Ket cat = cat_state(kSpace, 1.2, Branch::even);
    CHECK(std::real(expectation(parity_op(kSpace), cat)) == doctest::Approx(1.0).epsilon(1e-13));

    const OpMatrix pair{lad.adag.mat * lad.adag.mat * lad.a.mat * lad.a.mat, true, kSpace};
    const Complex moment = expectation(pair, coherent_state(kSpace, 1.0));
    CHECK(std::abs(moment - Complex(oracle::coherent_pair_moment(1.0, 200))) < 1e-10);
    CHECK(std::abs(moment - Complex(1.0)) < 1e-9);

    // conjugate symmetry and linearity in the operator argument
    const Ket probe = coherent_state(kSpace, Complex(0.8, 0.3));
    const OpMatrix op{lad.a.mat + 0.5 * lad.adag.mat * lad.adag.mat, false, kSpace};
    const OpMatrix opd{op.mat.adjoint(), false, kSpace};
    CHECK(std::abs(expectation(opd, probe) - std::conj(expectation(op, probe))) < 1e-13);

    const OpMatrix sum{op.mat + lad.n.mat, false, kSpace};
    CHECK(std::abs(expectation(sum, probe) - expectation(op, probe) - expectation(lad.n, probe)) <
          1e-12);

    CHECK_THROWS_AS(expectation(ladder_ops(make_space(16, 1e-10, 1e-10)).n, probe),
                    std::invalid_argument);
}

TEST_CASE("tail mass") {
    CHECK(tail_mass(fock_state(kSpace, 0), 8) == 0.0);
    CHECK(tail_mass(fock_state(kSpace, kSpace.dim - 1), 1) == 1.0);
    CHECK(tail_mass(coherent_state(kSpace, 1.0), 8) < 1e-12);
    CHECK_THROWS_AS(tail_mass(fock_state(kSpace, 0), 64), std::out_of_range);
}

TEST_CASE("density validation") {
    const Ket cat = cat_state(kSpace, 1.2, Branch::even);
    CHECK_NOTHROW(make_density(cat.amps * cat.amps.adjoint(), kSpace));

    Mat bad = cat.amps * cat.amps.adjoint();
    bad(0, 1) += Complex(0.0, 1e-3);
    CHECK_THROWS_AS(make_density(bad, kSpace), std::invalid_argument);

    Mat scaled = 2.0 * (cat.amps * cat.amps.adjoint());
    CHECK_THROWS_AS(make_density(scaled, kSpace), std::invalid_argument);
}
