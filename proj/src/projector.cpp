#include "projsq/projector.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdio>
#include <numbers>

namespace projsq {

namespace {

constexpr double kPi = std::numbers::pi;

// Largest l whose unnormalized Gaussian weight exp(-(step*l)^2/gamma^2)
// still reaches tail_tol. The weights decay superexponentially in l, so
// the dropped (normalized) tail is well below tail_tol itself.
int tail_cutoff(double step, double gamma, double tail_tol) {
    if (gamma <= 0.0) return 0;
    int l = 0;
    while (l < 100000) {
        const double arg = step * (l + 1) / gamma;
        if (std::exp(-arg * arg) < tail_tol) break;
        ++l;
    }
    return l;
}

std::string fmt_line(const char* key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(key) + " = " + buf + "\n";
}

std::string fmt_line(const char* key, int v) {
    return std::string(key) + " = " + std::to_string(v) + "\n";
}

}  // namespace

double gamma_from_dz(double z, double dz) {
    if (!(dz > 0.0)) throw InvalidArgument("gamma_from_dz: dz must be > 0");
    return std::exp(z) * std::sqrt(std::expm1(2.0 * dz));
}

double gamma0_from_s(double delta_sq, double s) {
    if (!(delta_sq > 0.0))
        throw InvalidArgument("gamma0_from_s: delta_sq must be > 0");
    if (!(s > 1.0)) throw InvalidArgument("gamma0_from_s: s must be > 1");
    return std::sqrt((s - 1.0) / delta_sq);
}

ProjectorSpec sc_spec(double xi, double gamma, double tail_tol) {
    if (!(xi > 0.0)) throw InvalidArgument("sc_spec: xi must be > 0");
    if (gamma < 0.0) throw InvalidArgument("sc_spec: gamma must be >= 0");
    if (!(tail_tol > 0.0)) throw InvalidArgument("sc_spec: tail_tol must be > 0");

    const double step = kPi / (2.0 * xi);
    const int L = tail_cutoff(step, gamma, tail_tol);

    ProjectorSpec spec;
    spec.kind = ProjectorKind::SC;
    spec.xi = xi;
    spec.gamma1 = gamma;
    spec.cutoff1 = L;

    double total = 0.0;
    for (int l = -L; l <= L; ++l) {
        const double arg = (gamma > 0.0) ? step * l / gamma : 0.0;
        ProjectorTerm t;
        t.weight = std::exp(-arg * arg);
        t.sign = (l % 2 != 0) ? -1 : 1;
        t.zeta = Complex(0.0, step * l);
        t.l1 = l;
        total += t.weight;
        spec.terms.push_back(t);
    }
    for (auto& t : spec.terms) t.weight /= total;
    return spec;
}

ProjectorSpec gkp_spec(double xi, double gamma1, double gamma2,
                       double tail_tol) {
    if (!(xi > 0.0)) throw InvalidArgument("gkp_spec: xi must be > 0");
    if (gamma1 < 0.0 || gamma2 < 0.0)
        throw InvalidArgument("gkp_spec: widths must be >= 0");
    if (!(tail_tol > 0.0)) throw InvalidArgument("gkp_spec: tail_tol must be > 0");

    const double step1 = 2.0 * xi;        // position comb
    const double step2 = kPi / xi;        // momentum comb
    const int L1 = tail_cutoff(step1, gamma1, tail_tol);
    const int L2 = tail_cutoff(step2, gamma2, tail_tol);

    ProjectorSpec spec;
    spec.kind = ProjectorKind::GKP;
    spec.xi = xi;
    spec.gamma1 = gamma1;
    spec.gamma2 = gamma2;
    spec.cutoff1 = L1;
    spec.cutoff2 = L2;

    double total = 0.0;
    for (int l1 = -L1; l1 <= L1; ++l1) {
        const double a1 = (gamma1 > 0.0) ? step1 * l1 / gamma1 : 0.0;
        const double w1 = std::exp(-a1 * a1);
        for (int l2 = -L2; l2 <= L2; ++l2) {
            const double a2 = (gamma2 > 0.0) ? step2 * l2 / gamma2 : 0.0;
            ProjectorTerm t;
            t.weight = w1 * std::exp(-a2 * a2);
            t.sign = 1;
            t.zeta = Complex(step1 * l1, step2 * l2);
            t.l1 = l1;
            t.l2 = l2;
            total += t.weight;
            spec.terms.push_back(t);
        }
    }
    for (auto& t : spec.terms) t.weight /= total;
    return spec;
}

ProjectorSpec rotation_spec(int order) {
    if (order < 1) throw InvalidArgument("rotation_spec: order must be >= 1");
    ProjectorSpec spec;
    spec.kind = ProjectorKind::ROTATION;
    spec.order = order;
    for (int k = 0; k < order; ++k) {
        ProjectorTerm t;
        t.weight = 1.0 / order;
        t.sign = 1;
        t.angle = 2.0 * kPi * k / order;
        t.l1 = k;
        spec.terms.push_back(t);
    }
    return spec;
}

FockOperator assemble(const ProjectorSpec& spec, int dim) {
    if (dim <= 0) throw InvalidArgument("assemble: dim must be positive");
    if (spec.terms.empty()) throw InvalidArgument("assemble: empty spec");

    Mat P = Mat::Zero(dim, dim);

    if (spec.kind == ProjectorKind::ROTATION) {
        for (const auto& t : spec.terms)
            P += t.weight * double(t.sign) * rotation(t.angle, dim);
    } else {
        // Terms come in +-zeta pairs mirrored around the list center, and the
        // truncated displacement satisfies D(-zeta) = D(zeta)^dagger exactly,
        // so each pair needs a single dense build.
        const std::size_t n = spec.terms.size();
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = n - 1 - i;
            if (j < i) break;
            const auto& ti = spec.terms[i];
            const auto& tj = spec.terms[j];
            const bool mirrored = std::abs(ti.zeta + tj.zeta) < 1e-12 &&
                                  std::abs(ti.weight - tj.weight) < 1e-12 &&
                                  ti.sign == tj.sign;
            if (std::abs(ti.zeta) < 1e-15) {
                P += ti.weight * double(ti.sign) *
                     Mat::Identity(dim, dim);
                if (j != i && !mirrored)
                    P += tj.weight * double(tj.sign) *
                         displacement(tj.zeta, dim);
                continue;
            }
            const Mat D = displacement(ti.zeta, dim);
            P += ti.weight * double(ti.sign) * D;
            if (j == i) continue;
            if (mirrored)
                P += tj.weight * double(tj.sign) * D.adjoint();
            else
                P += tj.weight * double(tj.sign) * displacement(tj.zeta, dim);
        }
    }

    const bool trivial =
        spec.terms.size() == 1 && spec.terms[0].sign == 1 &&
        std::abs(spec.terms[0].zeta) < 1e-15 && spec.terms[0].angle == 0.0;
    FockOperator op;
    op.m = std::move(P);
    op.unitary = trivial;
    op.hermitian = true;
    return op;
}

std::pair<FockState, double> project(const FockState& state,
                                     const ProjectorSpec& spec, int dim) {
    if (state.dim() != dim)
        throw InvalidArgument("project: state dimension does not match dim");
    if (spec.terms.empty()) throw InvalidArgument("project: empty spec");

    FockState out;
    double q = 0.0;
    if (state.kind == StateKind::Pure) {
        // Per-term application, O(terms * dim^2). Large-dim sweeps (and their
        // doubled-dim truncation diagnostics) cannot afford the dense
        // operator assembly, which costs O(terms * dim^3).
        Vec phi = Vec::Zero(dim);
        for (const auto& t : spec.terms) {
            const double w = t.weight * double(t.sign);
            if (spec.kind == ProjectorKind::ROTATION)
                phi += w * (rotation(t.angle, dim) * state.psi);
            else
                phi += w * displacement_apply(t.zeta, state.psi);
        }
        q = phi.squaredNorm();
        if (q < 1e-12)
            throw ProjectionAnnihilated("project: state annihilated (q < 1e-12)");
        out = FockState::pure(std::move(phi));
    } else {
        const FockOperator P = assemble(spec, dim);
        Mat r = P.m * state.rho * P.m.adjoint();
        q = r.trace().real();
        if (q < 1e-12)
            throw ProjectionAnnihilated("project: state annihilated (q < 1e-12)");
        out = FockState::mixed(std::move(r));
    }
    normalize(out);
    return {std::move(out), q};
}

double q_analytic_sc(double dz) {
    if (dz < 0.0) throw InvalidArgument("q_analytic_sc: dz must be >= 0");
    return std::exp(-dz);
}

double q_analytic_gkp(double s) {
    if (!(s >= 1.0)) throw InvalidArgument("q_analytic_gkp: s must be >= 1");
    return 1.0 / s;
}

double q_sum_sc(double xi, double gamma, double z, int cutoff) {
    if (!(xi > 0.0)) throw InvalidArgument("q_sum_sc: xi must be > 0");
    if (cutoff < 0) throw InvalidArgument("q_sum_sc: cutoff must be >= 0");

    const double step = kPi / (2.0 * xi);
    const int n = 2 * cutoff + 1;
    std::vector<double> p(n);
    double total = 0.0;
    for (int l = -cutoff; l <= cutoff; ++l) {
        const double arg = (gamma > 0.0) ? step * l / gamma : 0.0;
        p[l + cutoff] = (l == 0 || gamma > 0.0) ? std::exp(-arg * arg) : 0.0;
        total += p[l + cutoff];
    }
    // Overlap of the ideal code state with the net displacement of a term
    // pair: the parity signs cancel against the stabilizer phases, leaving
    // a Gaussian in the summed index.
    const double c = 0.5 * std::exp(-2.0 * z) * step * step;
    double q = 0.0;
    for (int l = -cutoff; l <= cutoff; ++l)
        for (int lp = -cutoff; lp <= cutoff; ++lp) {
            const double m = double(l) + double(lp);
            q += p[l + cutoff] * p[lp + cutoff] * std::exp(-c * m * m);
        }
    return q / (total * total);
}

double q_sum_gkp(double xi, double gamma0, double delta_sq, int cutoff) {
    if (!(xi > 0.0)) throw InvalidArgument("q_sum_gkp: xi must be > 0");
    if (!(delta_sq > 0.0))
        throw InvalidArgument("q_sum_gkp: delta_sq must be > 0");
    if (cutoff < 0) throw InvalidArgument("q_sum_gkp: cutoff must be >= 0");

    const double step = 2.0 * xi;  // square lattice: same factor per quadrature
    const int n = 2 * cutoff + 1;
    std::vector<double> p(n);
    double total = 0.0;
    for (int l = -cutoff; l <= cutoff; ++l) {
        const double arg = (gamma0 > 0.0) ? step * l / gamma0 : 0.0;
        p[l + cutoff] = (l == 0 || gamma0 > 0.0) ? std::exp(-arg * arg) : 0.0;
        total += p[l + cutoff];
    }
    const double c = 0.5 * delta_sq * step * step;
    double f = 0.0;
    for (int l = -cutoff; l <= cutoff; ++l)
        for (int lp = -cutoff; lp <= cutoff; ++lp) {
            const double m = double(l) + double(lp);
            f += p[l + cutoff] * p[lp + cutoff] * std::exp(-c * m * m);
        }
    f /= total * total;
    return f * f;
}

ValidityReport validity(double xi, double z, double dz) {
    if (!(xi > 0.0)) throw InvalidArgument("validity: xi must be > 0");
    const double r = (kPi / (2.0 * xi)) * (kPi / (2.0 * xi));
    ValidityReport rep;
    rep.margin_resolved = std::exp(2.0 * z) / r;
    rep.smearing_resolved = rep.margin_resolved >= 1.0;
    const double rhs = 0.5 * std::exp(-2.0 * z) * r;
    rep.margin_step = dz / rhs;
    rep.step_fine_enough = rep.margin_step >= 1.0;
    return rep;
}

std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n) {
    if (n < 1) throw InvalidArgument("gauss_hermite: n must be >= 1");
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 1);
    for (int k = 1; k < n; ++k) sub[k - 1] = std::sqrt(0.5 * k);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub.head(std::max(n - 1, 1)),
                              Eigen::ComputeEigenvectors);
    std::vector<double> nodes(n), weights(n);
    const double sqrt_pi = std::sqrt(kPi);
    for (int i = 0; i < n; ++i) {
        nodes[i] = es.eigenvalues()[i];
        const double v0 = es.eigenvectors()(0, i);
        weights[i] = sqrt_pi * v0 * v0;
    }
    return {std::move(nodes), std::move(weights)};
}

namespace {

// One pass of the continuous Gaussian projector at a fixed node count.
// Sum over Gauss-Hermite nodes of (w_i/sqrt(pi)) D(i gamma t_i) acting on
// the state; returns the unnormalized result and its weight q.
std::pair<FockState, double> vacuum_pass(const FockState& state, double gamma,
                                         int n) {
    const auto [t, w] = gauss_hermite(n);
    const double inv_sqrt_pi = 1.0 / std::sqrt(kPi);
    const int dim = state.dim();

    auto apply_terms = [&](const Vec& x) {
        Vec acc = Vec::Zero(dim);
        for (int i = 0; i < n; ++i)
            acc += (w[i] * inv_sqrt_pi) *
                   displacement_apply(Complex(0.0, gamma * t[i]), x);
        return acc;
    };

    if (state.kind == StateKind::Pure) {
        Vec phi = apply_terms(state.psi);
        const double q = phi.squaredNorm();
        return {FockState::pure(std::move(phi)), q};
    }
    Mat half(dim, dim);
    for (int c = 0; c < dim; ++c) half.col(c) = apply_terms(state.rho.col(c));
    Mat halfT = half.adjoint();
    Mat full(dim, dim);
    for (int c = 0; c < dim; ++c) full.col(c) = apply_terms(halfT.col(c));
    Mat r = full.adjoint();
    const double q = r.trace().real();
    return {FockState::mixed(std::move(r)), q};
}

}  // namespace

std::pair<FockState, double> vacuum_project(const FockState& state,
                                            double gamma, int quad_points) {
    if (gamma < 0.0) throw InvalidArgument("vacuum_project: gamma must be >= 0");
    if (quad_points < 64)
        throw InvalidArgument("vacuum_project: quad_points must be >= 64");

    auto coarse = vacuum_pass(state, gamma, quad_points);
    auto fine = vacuum_pass(state, gamma, 2 * quad_points);
    if (std::abs(fine.second - coarse.second) > 1e-8)
        throw QuadratureNotConverged(
            "vacuum_project: doubling nodes moved q by more than 1e-8");
    if (fine.second < 1e-12)
        throw ProjectionAnnihilated("vacuum_project: q < 1e-12");
    normalize(fine.first);
    return {std::move(fine.first), fine.second};
}

std::string ProjectorSpec::serialize() const {
    std::string out;
    switch (kind) {
        case ProjectorKind::SC: out += "code = sc\n"; break;
        case ProjectorKind::GKP: out += "code = gkp\n"; break;
        case ProjectorKind::VACUUM: out += "code = vacuum\n"; break;
        case ProjectorKind::ROTATION: out += "code = rotation\n"; break;
    }
    if (kind == ProjectorKind::SC || kind == ProjectorKind::GKP)
        out += fmt_line("xi", xi);
    if (kind == ProjectorKind::SC || kind == ProjectorKind::VACUUM)
        out += fmt_line("gamma", gamma1);
    if (kind == ProjectorKind::GKP) {
        out += fmt_line("gamma1", gamma1);
        out += fmt_line("gamma2", gamma2);
    }
    if (delta_z > 0.0) out += fmt_line("delta_z", delta_z);
    if (s > 0.0) out += fmt_line("s", s);
    if (kind == ProjectorKind::SC) out += fmt_line("cutoff", cutoff1);
    if (kind == ProjectorKind::GKP) {
        out += fmt_line("cutoff1", cutoff1);
        out += fmt_line("cutoff2", cutoff2);
    }
    if (kind == ProjectorKind::ROTATION) out += fmt_line("order", order);
    out += fmt_line("terms", int(terms.size()));
    return out;
}

}  // namespace projsq
