#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "projsq/states.hpp"

using namespace projsq;

namespace {
constexpr double kPi = 3.14159265358979323846;
const double kXiSquare = std::sqrt(kPi / 2.0);

Mat number_op(int dim) {
    auto [a, adag] = ladder(dim);
    return adag * a;
}
}  // namespace

TEST_CASE("squeezed coherent basics") {
    const int dim = 96;
    FockState vac = squeezed_coherent(0.0, 0.0, dim);
    CHECK(fidelity(vac, FockState::pure(vacuum(dim))) == doctest::Approx(1.0));

    FockState coh = squeezed_coherent(kXiSquare, 0.0, dim);
    CHECK(expectation_real(coh, number_op(dim)) == doctest::Approx(kPi / 2.0).epsilon(1e-8));
}

TEST_CASE("squeezed coherent momentum-displacement overlap formula") {
    // <xi,z|D(iy)|xi,z> = e^{i 2 xi y} e^{-y^2 e^{-2z}/2}
    const int dim = 200;
    const double xi = 0.9, z = 1.2, y = 0.5;
    FockState s = squeezed_coherent(xi, z, dim);
    Complex got = expectation(s, displacement(Complex(0, y), dim));
    Complex want = std::exp(Complex(0, 2.0 * xi * y)) *
                   std::exp(-0.5 * y * y * std::exp(-2.0 * z));
    CHECK(std::abs(got - want) < 1e-8);
}

TEST_CASE("sc state limits and parity") {
    const int dim = 128;
    FockState cat = sc_state({3.0, 0.0}, 0, dim);
    FockState naive = FockState::pure(
        (squeezed_coherent(3.0, 0.0, dim).psi + squeezed_coherent(-3.0, 0.0, dim).psi) /
        std::sqrt(2.0));
    CHECK(fidelity(cat, naive) == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(sc_state({1e-9, 0.0}, 1, dim), DegenerateInput);

    FockState even = sc_state({0.8, 0.4}, 0, dim);
    CHECK(expectation_real(even, rotation(kPi, dim)) == doctest::Approx(1.0).epsilon(1e-8));
    FockState odd = sc_state({0.8, 0.4}, 1, dim);
    CHECK(expectation_real(odd, rotation(kPi, dim)) == doctest::Approx(-1.0).epsilon(1e-8));
}

TEST_CASE("sc normalization uses the exact branch overlap") {
    const int dim = 128;
    const double xi = 0.4, z = 0.3;
    FockState cat = sc_state({xi, z}, 0, dim);
    // Rebuild without normalization shortcuts: amplitudes of the two branches.
    Vec sq = squeeze(z, dim) * vacuum(dim);
    Vec plus = displacement_apply(xi, sq), minus = displacement_apply(-xi, sq);
    double n2 = (plus + minus).squaredNorm();
    Vec manual = (plus + minus) / std::sqrt(n2);
    CHECK((cat.psi - manual).norm() < 1e-12);
    // At small xi the overlap is large, so N is far from sqrt(2).
    CHECK(std::abs(n2 - 2.0) > 0.5);
}

TEST_CASE("gkp state stabilizers and parity") {
    const int dim = 220;
    GkpParams p;
    p.delta_sq = 0.05;
    FockState g0 = gkp_state(p, 0, dim);

    auto [sx, sz] = gkp_stabilizers(p.xi, dim);
    const double want = std::exp(-2.0 * p.delta_sq * p.xi * p.xi);  // e^{-0.05 pi}
    CHECK(expectation(g0, sx).real() == doctest::Approx(want).epsilon(0.02));
    CHECK(expectation(g0, sz).real() == doctest::Approx(want).epsilon(0.02));
    CHECK(std::abs(expectation(g0, sx).imag()) < 1e-8);

    CHECK(expectation_real(g0, rotation(kPi, dim)) == doctest::Approx(1.0).epsilon(1e-6));

    FockState g1 = gkp_state(p, 1, dim);
    CHECK(std::abs(g0.psi.dot(g1.psi)) < 1e-3);
}

TEST_CASE("gkp closed-form path equals the literal envelope-of-comb path") {
    // Parameters where the pre-envelope comb is itself representable.
    const int dim = 280;
    GkpParams p;
    p.delta_sq = 0.3;
    p.comb_peaks = 4;
    FockState fast = gkp_state(p, 0, dim);
    FockState direct = gkp_state_direct(p, 0, dim);
    CHECK(fidelity(fast, direct) == doctest::Approx(1.0).epsilon(1e-9));

    FockState fast1 = gkp_state(p, 1, dim);
    FockState direct1 = gkp_state_direct(p, 1, dim);
    CHECK(fidelity(fast1, direct1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("gkp validation errors") {
    GkpParams p;
    p.delta_sq = 0.05;
    p.comb_z = 0.3;  // far too weak to emulate the comb
    CHECK_THROWS_AS(gkp_state(p, 0, 200), InvalidArgument);

    GkpParams q;
    q.delta_sq = 0.05;
    q.comb_peaks = 1;  // outermost peak still heavy
    CHECK_THROWS_AS(gkp_state(q, 0, 200), InvalidArgument);
}

TEST_CASE("logical sets") {
    const int dim = 160;
    ScParams sc{0.9, 0.6};
    LogicalSet lsc = logical_set(sc, dim);
    // X^2 = -D(i pi / (2 xi))
    Mat x2 = lsc.x_op * lsc.x_op;
    Mat stab = -displacement(Complex(0, kPi / (2.0 * sc.xi)), dim);
    CHECK((x2 - stab).cwiseAbs().maxCoeff() < 1e-8);
    for (int n = 0; n < 6; ++n)
        CHECK(lsc.z_op(n, n).real() == doctest::Approx(n % 2 == 0 ? 1.0 : -1.0));
    CHECK((lsc.y_op - Complex(0, 1) * lsc.x_op * lsc.z_op).cwiseAbs().maxCoeff() == 0.0);

    GkpParams gkp;
    LogicalSet lg = logical_set(gkp, dim);
    // Square-lattice logicals anticommute.
    CHECK((lg.x_op * lg.z_op + lg.z_op * lg.x_op).topLeftCorner(60, 60).cwiseAbs().maxCoeff() <
          1e-8);
    CHECK((lg.x_op.adjoint() * lg.x_op - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("magic state logical expectations match the decay factors") {
    const int dim = 200;
    ScParams sc{kXiSquare, -0.5 * std::log(0.05)};
    FockState a = magic_state(sc, dim);
    LogicalSet ops = logical_set(sc, dim);
    DecayFactors d = decay_factors(sc);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    CHECK(expectation(a, ops.x_op).real() ==
          doctest::Approx(d.hx * inv_sqrt2).epsilon(0.02));
    CHECK(expectation(a, ops.y_op).real() ==
          doctest::Approx(d.hy * inv_sqrt2).epsilon(0.02));
    // The magic state's ideal <Z> vanishes; the decayed value stays near 0.
    CHECK(std::abs(expectation(a, ops.z_op).real()) < 0.02);

    GkpParams gkp;
    gkp.delta_sq = 0.05;
    FockState ag = magic_state(gkp, dim);
    LogicalSet opsg = logical_set(gkp, dim);
    DecayFactors dg = decay_factors(gkp);
    CHECK(expectation(ag, opsg.x_op).real() ==
          doctest::Approx(dg.hx * inv_sqrt2).epsilon(0.02));
    CHECK(expectation(ag, opsg.y_op).real() ==
          doctest::Approx(dg.hy * inv_sqrt2).epsilon(0.02));
    CHECK(std::abs(expectation(ag, opsg.z_op).real()) < 0.02);
}

TEST_CASE("decay factor formulas") {
    ScParams sc{1.0, 50.0};
    DecayFactors d = decay_factors(sc);
    CHECK(d.hx == doctest::Approx(1.0));
    CHECK(d.hz == doctest::Approx(1.0));

    GkpParams g;
    g.delta_sq = 0.05;
    DecayFactors dg = decay_factors(g);
    CHECK(dg.hx == doctest::Approx(std::exp(-0.05 * kPi / 4.0)).epsilon(1e-12));
    CHECK(dg.hy == doctest::Approx(std::exp(-0.05 * kPi / 2.0)).epsilon(1e-12));
    CHECK(dg.hz == dg.hx);
}

TEST_CASE("sc stabilizer expectation is monotone in z") {
    const int dim = 160;
    double prev = -1.0;
    for (double z : {0.5, 1.0, 1.5}) {
        FockState s = sc_state({0.9, z}, 0, dim);
        double val = expectation(s, sc_stabilizer(0.9, dim)).real();
        CHECK(val > prev);
        prev = val;
    }
    CHECK(prev > 0.9);
}

TEST_CASE("ideal bloch vector") {
    DecayFactors b = ideal_bloch(1.0, std::exp(Complex(0, kPi / 4.0)));
    CHECK(b.hx == doctest::Approx(std::sqrt(0.5)));
    CHECK(b.hy == doctest::Approx(std::sqrt(0.5)));
    CHECK(b.hz == doctest::Approx(0.0));
}
