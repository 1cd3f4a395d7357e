#include "projsq/noise.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

namespace projsq {

namespace {

void check_loss(const LossParams& p) {
    if (!std::isfinite(p.gamma_t) || p.gamma_t < 0.0)
        throw InvalidArgument("photon_loss: gamma_t must be finite and >= 0");
}

void check_noise(const AncillaNoise& n) {
    if (!std::isfinite(n.gamma1) || n.gamma1 < 0.0)
        throw InvalidArgument("ancilla noise: gamma1 must be >= 0");
    if (!std::isfinite(n.gamma2) || n.gamma2 < 0.0)
        throw InvalidArgument("ancilla noise: gamma2 must be >= 0");
    if (!std::isfinite(n.time_per_unit_displacement) ||
        n.time_per_unit_displacement <= 0.0)
        throw InvalidArgument(
            "ancilla noise: time_per_unit_displacement must be > 0");
}

// Generator g/2 (2 a rho a+ - {n, rho}). The shift term only moves weight
// downward, so the truncated generator is exactly trace-free.
Mat lindblad_rhs(const Mat& rho, double g, const std::vector<double>& sq) {
    const int d = int(rho.rows());
    Mat out(d, d);
    for (int n = 0; n < d; ++n) {
        for (int m = 0; m < d; ++m) {
            Complex v = -0.5 * g * double(m + n) * rho(m, n);
            if (m + 1 < d && n + 1 < d)
                v += g * sq[std::size_t(m)] * sq[std::size_t(n)] *
                     rho(m + 1, n + 1);
            out(m, n) = v;
        }
    }
    return out;
}

Mat rk4_evolve(const Mat& rho0, double g, int steps) {
    const int d = int(rho0.rows());
    std::vector<double> sq(static_cast<std::size_t>(d));
    for (int m = 0; m < d; ++m) sq[std::size_t(m)] = std::sqrt(double(m + 1));

    const double h = 1.0 / steps;
    Mat rho = rho0;
    for (int s = 0; s < steps; ++s) {
        const Mat k1 = lindblad_rhs(rho, g, sq);
        const Mat k2 = lindblad_rhs(rho + (0.5 * h) * k1, g, sq);
        const Mat k3 = lindblad_rhs(rho + (0.5 * h) * k2, g, sq);
        const Mat k4 = lindblad_rhs(rho + h * k3, g, sq);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

double herm_trace_distance(const Mat& a, const Mat& b) {
    Mat diff = a - b;
    diff = 0.5 * (diff + diff.adjoint().eval());
    Eigen::SelfAdjointEigenSolver<Mat> es(diff, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

}  // namespace

FockState photon_loss(const FockState& state, const LossParams& p) {
    check_loss(p);
    Mat rho = state.density();
    if (p.gamma_t == 0.0) return FockState::mixed(std::move(rho));

    const int d = int(rho.rows());
    // Start near the explicit stability edge g*(d-1)*h ~ 1, then refine.
    int steps = std::max(32, int(std::ceil(p.gamma_t * d)));
    Mat prev = rk4_evolve(rho, p.gamma_t, steps);
    for (int iter = 0; iter < 10; ++iter) {
        steps *= 2;
        Mat cur = rk4_evolve(rho, p.gamma_t, steps);
        if (herm_trace_distance(prev, cur) < 1e-8) {
            cur = 0.5 * (cur + cur.adjoint().eval());
            return FockState::mixed(std::move(cur));
        }
        prev = std::move(cur);
    }
    throw StepControlFailure(
        "photon_loss: RK4 step halving did not reach 1e-8 trace distance");
}

FockState photon_loss_kraus(const FockState& state, const LossParams& p) {
    check_loss(p);
    Mat rho = state.density();
    const int d = int(rho.rows());
    if (p.gamma_t == 0.0) return FockState::mixed(std::move(rho));

    const double log_eta = -p.gamma_t;
    const double log_1m_eta = std::log(-std::expm1(-p.gamma_t));

    Mat out = Mat::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        // c(i) = <i|K_k|i+k> = sqrt(C(i+k,k) eta^i (1-eta)^k), in log space.
        Eigen::VectorXd c(d - k);
        for (int i = 0; i < d - k; ++i) {
            const double n = double(i + k);
            const double logc =
                0.5 * (std::lgamma(n + 1.0) - std::lgamma(double(k) + 1.0) -
                       std::lgamma(double(i) + 1.0)) +
                0.5 * double(i) * log_eta + 0.5 * double(k) * log_1m_eta;
            c(i) = std::exp(logc);
        }
        out.topLeftCorner(d - k, d - k) +=
            (c * c.transpose()).cast<Complex>().cwiseProduct(
                rho.block(k, k, d - k, d - k));
        if (k > 0 && c.maxCoeff() < 1e-14) break;
    }
    return FockState::mixed(std::move(out));
}

double ancilla_decay(Complex zeta_l, Complex zeta_lp,
                     const AncillaNoise& noise) {
    check_noise(noise);
    const double t =
        noise.time_per_unit_displacement * std::abs(zeta_l - zeta_lp);
    return std::exp(-(0.5 * noise.gamma1 + 2.0 * noise.gamma2) * t);
}

DecayFn make_decay(const AncillaNoise& noise) {
    check_noise(noise);
    return [noise](const ProjectorTerm& a, const ProjectorTerm& b) {
        return ancilla_decay(a.zeta, b.zeta, noise);
    };
}

HadamardResult noisy_hadamard_test(const FockState& state, Complex zeta_l,
                                   Complex zeta_lp, int sign,
                                   const FockOperator* observable,
                                   const AncillaNoise& noise,
                                   const RotationPair* rot) {
    const double e = ancilla_decay(zeta_l, zeta_lp, noise);
    HadamardResult r =
        hadamard_test_exact(state, zeta_l, zeta_lp, sign, observable, rot);
    r.ex_m *= e;
    r.ex_mo *= e;
    return r;
}

}  // namespace projsq
