#include "projsq/circuit.hpp"

#include <cmath>
#include <numbers>

namespace projsq {

namespace {

constexpr double kPi = std::numbers::pi;

void check_p0(double p0) {
    if (!(p0 > 0.0) || p0 > 1.0)
        throw InvalidArgument("lcu: p0 must lie in (0, 1]");
}

Vec rotate_phase(double theta, const Vec& x) {
    Vec out(x.size());
    for (int n = 0; n < x.size(); ++n)
        out[n] = std::polar(1.0, theta * n) * x[n];
    return out;
}

// Step displacements of the code's Q-block, in circuit order.
std::vector<std::pair<Complex, int>> q_block(const LcuConfig& cfg) {
    std::vector<std::pair<Complex, int>> steps;
    if (cfg.code == LcuCode::SC) {
        const Complex u(0.0, kPi / (2.0 * cfg.xi));
        steps.push_back({u, -1});   // Q0 = p0 I - p1 D(u)
        steps.push_back({-u, -1});  // Q0^dag
    } else {
        const Complex u1(2.0 * cfg.xi, 0.0);
        const Complex u2(0.0, kPi / cfg.xi);
        steps.push_back({u1, 1});   // Q1 = p0 I + p1 D(u1)
        steps.push_back({-u1, 1});
        steps.push_back({u2, 1});   // Q2
        steps.push_back({-u2, 1});
    }
    return steps;
}

// Signed ternary convolution: M repetitions of offsets {-1, 0, +1} with
// magnitudes {p0 p1, p0^2 + p1^2, p0 p1}. Returns magnitudes indexed by
// offset + M.
std::vector<double> ternary_conv(double p0, int M) {
    const double p1 = 1.0 - p0;
    std::vector<double> acc{1.0};
    const double w[3] = {p0 * p1, p0 * p0 + p1 * p1, p0 * p1};
    for (int r = 0; r < M; ++r) {
        std::vector<double> next(acc.size() + 2, 0.0);
        for (std::size_t i = 0; i < acc.size(); ++i)
            for (int d = 0; d < 3; ++d) next[i + d] += acc[i] * w[d];
        acc.swap(next);
    }
    return acc;
}

}  // namespace

HybridState HybridState::from_register(const FockState& reg) {
    HybridState h;
    if (reg.kind == StateKind::Pure) {
        h.kind = StateKind::Pure;
        h.amp = Vec::Zero(2 * reg.dim());
        h.amp.head(reg.dim()) = reg.psi;
    } else {
        h.kind = StateKind::Mixed;
        h.rho = Mat::Zero(2 * reg.dim(), 2 * reg.dim());
        h.rho.topLeftCorner(reg.dim(), reg.dim()) = reg.rho;
    }
    return h;
}

std::pair<HybridState, double> lcu_step(const HybridState& state, Complex zeta,
                                        int sign, int postselect, double p0) {
    check_p0(p0);
    if (sign != 1 && sign != -1)
        throw InvalidArgument("lcu_step: sign must be +1 or -1");
    if (postselect != 0 && postselect != 1)
        throw InvalidArgument("lcu_step: postselect must be 0 or 1");
    if (state.kind != StateKind::Pure)
        throw InvalidArgument("lcu_step: pure hybrid state required");

    const int dim = state.dim();
    if (state.amp.tail(dim).norm() > 1e-12)
        throw InvalidArgument("lcu_step: ancilla must be reset to |0>");

    const double a0 = std::sqrt(p0);
    const double a1 = std::sqrt(1.0 - p0) * sign;
    const Vec reg = state.amp.head(dim);

    // Ancilla prep then controlled displacement on the |1> block.
    Vec b0 = a0 * reg;
    Vec b1 = (std::abs(a1) > 0.0) ? Vec(a1 * displacement_apply(zeta, reg))
                                  : Vec(Vec::Zero(dim));

    // Readout rotation with the (sqrt(p0), sqrt(p1)) row placed at the
    // post-selected bit, so the kept branch realizes p0 I + sign p1 D(zeta)
    // at either bit label; the complementary row is (-sqrt(p1), sqrt(p0)).
    const double r0 = std::sqrt(p0);
    const double r1 = std::sqrt(1.0 - p0);
    const Vec kept = r0 * b0 + r1 * b1;

    const double prob = kept.squaredNorm();
    if (prob < 1e-12)
        throw ProjectionAnnihilated("lcu_step: postselect-annihilated");

    HybridState out;
    out.kind = StateKind::Pure;
    out.amp = Vec::Zero(2 * dim);
    out.amp.head(dim) = kept / std::sqrt(prob);
    return {std::move(out), prob};
}

std::pair<FockState, double> lcu_project(const FockState& state,
                                         const LcuConfig& cfg, int dim) {
    check_p0(cfg.p0);
    if (cfg.reps < 0) throw InvalidArgument("lcu_project: reps must be >= 0");
    if (state.kind != StateKind::Pure)
        throw InvalidArgument("lcu_project: pure register state required");
    if (state.dim() != dim)
        throw InvalidArgument("lcu_project: state dimension does not match dim");

    const auto steps = q_block(cfg);
    const int def_bit = (cfg.code == LcuCode::SC) ? 1 : 0;
    const std::size_t per_rep = steps.size();
    if (!cfg.postselect_bits.empty() &&
        cfg.postselect_bits.size() != per_rep * std::size_t(cfg.reps))
        throw InvalidArgument("lcu_project: postselect_bits size mismatch");

    HybridState h = HybridState::from_register(state);
    double total = 1.0;
    for (int r = 0; r < cfg.reps; ++r)
        for (std::size_t s = 0; s < per_rep; ++s) {
            const int bit = cfg.postselect_bits.empty()
                                ? def_bit
                                : cfg.postselect_bits[r * per_rep + s];
            auto [next, prob] =
                lcu_step(h, steps[s].first, steps[s].second, bit, cfg.p0);
            h = std::move(next);
            total *= prob;
        }

    FockState out = FockState::pure(h.amp.head(dim));
    normalize(out);
    return {std::move(out), total};
}

double binomial_width(LcuCode code, double xi, double p0, int M) {
    check_p0(p0);
    if (!(xi > 0.0)) throw InvalidArgument("binomial_width: xi must be > 0");
    if (M < 0) throw InvalidArgument("binomial_width: M must be >= 0");
    const double step = (code == LcuCode::SC) ? kPi / (2.0 * xi) : 2.0 * xi;
    return 4.0 * step * step * M * p0 * (1.0 - p0);
}

int binomial_reps(LcuCode code, double xi, double p0, double target_gamma_sq) {
    check_p0(p0);
    if (target_gamma_sq < 0.0)
        throw InvalidArgument("binomial_reps: target must be >= 0");
    const double unit = binomial_width(code, xi, p0, 1);
    if (unit <= 0.0)
        throw InvalidArgument("binomial_reps: degenerate p0 gives zero width");
    return std::max(1, int(std::ceil(target_gamma_sq / unit - 1e-12)));
}

ProjectorSpec binomial_spec(LcuCode code, double xi, double p0, int M) {
    check_p0(p0);
    if (!(xi > 0.0)) throw InvalidArgument("binomial_spec: xi must be > 0");
    if (M < 0) throw InvalidArgument("binomial_spec: M must be >= 0");

    const std::vector<double> conv = ternary_conv(p0, M);
    ProjectorSpec spec;
    spec.xi = xi;
    spec.gamma1 = std::sqrt(binomial_width(code, xi, p0, M));
    spec.cutoff1 = M;

    if (code == LcuCode::SC) {
        spec.kind = ProjectorKind::SC;
        const double step = kPi / (2.0 * xi);
        for (int k = -M; k <= M; ++k) {
            ProjectorTerm t;
            t.weight = conv[k + M];
            t.sign = (k % 2 != 0) ? -1 : 1;
            t.zeta = Complex(0.0, step * k);
            t.l1 = k;
            spec.terms.push_back(t);
        }
    } else {
        spec.kind = ProjectorKind::GKP;
        spec.gamma2 = spec.gamma1;
        spec.cutoff2 = M;
        const double s1 = 2.0 * xi;
        const double s2 = kPi / xi;
        for (int k1 = -M; k1 <= M; ++k1)
            for (int k2 = -M; k2 <= M; ++k2) {
                ProjectorTerm t;
                t.weight = conv[k1 + M] * conv[k2 + M];
                t.sign = 1;
                t.zeta = Complex(s1 * k1, s2 * k2);
                t.l1 = k1;
                t.l2 = k2;
                spec.terms.push_back(t);
            }
    }
    return spec;
}

HadamardResult hadamard_test_exact(const FockState& state, Complex zeta_l,
                                   Complex zeta_lp, int sign,
                                   const FockOperator* observable,
                                   const RotationPair* rot) {
    if (sign != 1 && sign != -1)
        throw InvalidArgument("hadamard_test_exact: sign must be +1 or -1");
    const int dim = state.dim();
    if (observable && observable->dim() != dim)
        throw InvalidArgument("hadamard_test_exact: observable dim mismatch");

    const Complex dz = zeta_l - zeta_lp;
    HadamardResult res;
    res.phase = std::polar(1.0, (dz * std::conj(zeta_lp)).imag());

    if (state.kind == StateKind::Pure) {
        Vec a = rot ? rotate_phase(rot->theta_l, state.psi) : state.psi;
        Vec b = rot ? rotate_phase(rot->theta_lp, state.psi) : state.psi;
        a = displacement_apply(zeta_l, a);
        b = displacement_apply(zeta_lp, b);
        res.ex_m = sign * b.dot(a).real();
        if (observable) res.ex_mo = sign * b.dot(observable->m * a).real();
        return res;
    }

    // Mixed register: trace form sign * Re Tr[(O) A rho B^dag] with
    // A = D(zeta_l) R(theta_l), B = D(zeta_lp) R(theta_lp).
    const Mat A = rot ? Mat(displacement(zeta_l, dim) * rotation(rot->theta_l, dim))
                      : displacement(zeta_l, dim);
    const Mat B = rot ? Mat(displacement(zeta_lp, dim) * rotation(rot->theta_lp, dim))
                      : displacement(zeta_lp, dim);
    const Mat X = A * state.rho;
    res.ex_m = sign * (X.array() * B.conjugate().array()).sum().real();
    if (observable) {
        const Mat Y = observable->m * X;
        res.ex_mo = sign * (Y.array() * B.conjugate().array()).sum().real();
    }
    return res;
}

}  // namespace projsq
