#include "projsq/fock.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include <unsupported/Eigen/MatrixFunctions>

namespace projsq {

namespace {

void check_dim(int dim) {
    if (dim < 2) throw InvalidArgument("Fock dimension must be >= 2");
}

void check_finite(Complex z, const char* name) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InvalidArgument(std::string(name) + " must be finite");
}

// Eigendecomposition of H = i(a^dag - a), reused by every displacement at a
// given dimension. D(r e^{i theta}) = R(theta) V e^{-i r w} V^dag R(-theta)
// because the generator of D(r) conjugated by a phase rotation gives the
// generator at angle theta, exactly, also on the truncated space.
struct DispBasis {
    Eigen::VectorXd w;
    Mat V;
};

const DispBasis& disp_basis(int dim) {
    static std::map<int, DispBasis> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(dim);
    if (it != cache.end()) return it->second;

    auto [a, adag] = ladder(dim);
    Mat h = Complex(0, 1) * (adag - a);
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    DispBasis basis;
    basis.w = es.eigenvalues();
    basis.V = es.eigenvectors();
    return cache.emplace(dim, std::move(basis)).first->second;
}

}  // namespace

std::pair<Mat, Mat> ladder(int dim) {
    check_dim(dim);
    Mat a = Mat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    return {a, a.adjoint()};
}

Vec vacuum(int dim) { return fock_basis(0, dim); }

Vec fock_basis(int n, int dim) {
    check_dim(dim);
    if (n < 0 || n >= dim) throw InvalidArgument("Fock index out of range");
    Vec v = Vec::Zero(dim);
    v(n) = 1.0;
    return v;
}

Mat displacement(Complex zeta, int dim) {
    check_dim(dim);
    check_finite(zeta, "zeta");
    const DispBasis& b = disp_basis(dim);
    const double r = std::abs(zeta);
    const double theta = (r == 0.0) ? 0.0 : std::arg(zeta);

    Vec expw(dim);
    for (int k = 0; k < dim; ++k) expw(k) = std::exp(Complex(0, -r * b.w(k)));
    Mat core = (b.V * expw.asDiagonal()) * b.V.adjoint();
    if (theta == 0.0) return core;

    Vec phase(dim);
    for (int n = 0; n < dim; ++n) phase(n) = std::exp(Complex(0, theta * n));
    return phase.asDiagonal() * core * phase.conjugate().asDiagonal();
}

Vec displacement_apply(Complex zeta, const Vec& v) {
    const int dim = static_cast<int>(v.size());
    check_dim(dim);
    check_finite(zeta, "zeta");
    const DispBasis& b = disp_basis(dim);
    const double r = std::abs(zeta);
    const double theta = (r == 0.0) ? 0.0 : std::arg(zeta);

    Vec x = v;
    if (theta != 0.0)
        for (int n = 0; n < dim; ++n) x(n) *= std::exp(Complex(0, -theta * n));
    Vec y = b.V.adjoint() * x;
    for (int k = 0; k < dim; ++k) y(k) *= std::exp(Complex(0, -r * b.w(k)));
    x = b.V * y;
    if (theta != 0.0)
        for (int n = 0; n < dim; ++n) x(n) *= std::exp(Complex(0, theta * n));
    return x;
}

Mat squeeze(Complex z, int dim) {
    check_dim(dim);
    check_finite(z, "z");
    auto [a, adag] = ladder(dim);
    Mat g = 0.5 * (std::conj(z) * (a * a) - z * (adag * adag));
    // g is anti-Hermitian; exponentiate through the Hermitian matrix i g.
    Mat h = Complex(0, 1) * g;
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    Vec expw(dim);
    for (int k = 0; k < dim; ++k) expw(k) = std::exp(Complex(0, -es.eigenvalues()(k)));
    return (es.eigenvectors() * expw.asDiagonal()) * es.eigenvectors().adjoint();
}

Mat rotation(double theta, int dim) {
    check_dim(dim);
    if (!std::isfinite(theta)) throw InvalidArgument("theta must be finite");
    Vec d(dim);
    for (int n = 0; n < dim; ++n) d(n) = std::exp(Complex(0, theta * n));
    return Mat(d.asDiagonal());
}

Mat envelope(double delta_sq, int dim) {
    check_dim(dim);
    if (!(delta_sq >= 0.0)) throw InvalidArgument("delta_sq must be >= 0");
    Vec d(dim);
    for (int n = 0; n < dim; ++n) d(n) = std::exp(-delta_sq * n);
    return Mat(d.asDiagonal());
}

FockOperator displacement_op(Complex zeta, int dim) {
    return {displacement(zeta, dim), true, false};
}
FockOperator squeeze_op(Complex z, int dim) { return {squeeze(z, dim), true, false}; }
FockOperator rotation_op(double theta, int dim) { return {rotation(theta, dim), true, false}; }
FockOperator envelope_op(double delta_sq, int dim) {
    return {envelope(delta_sq, dim), delta_sq == 0.0, true};
}

Mat expm(const Mat& g) { return g.exp(); }

Complex expectation(const FockState& state, const Mat& op) {
    if (op.rows() != state.dim())
        throw InvalidArgument("operator/state dimension mismatch");
    if (state.kind == StateKind::Pure) return state.psi.dot(op * state.psi);
    return (op * state.rho).trace();
}

double expectation_real(const FockState& state, const Mat& op, double tol) {
    Complex v = expectation(state, op);
    if (std::abs(v.imag()) > tol)
        throw std::runtime_error("expectation has non-negligible imaginary part: " +
                                 std::to_string(v.imag()));
    return v.real();
}

double fidelity(const FockState& s1, const FockState& s2) {
    if (s1.dim() != s2.dim()) throw InvalidArgument("state dimension mismatch");
    if (s1.kind == StateKind::Pure && s2.kind == StateKind::Pure) {
        return std::norm(s1.psi.dot(s2.psi));
    }
    if (s1.kind == StateKind::Pure) return s1.psi.dot(s2.rho * s1.psi).real();
    if (s2.kind == StateKind::Pure) return s2.psi.dot(s1.rho * s2.psi).real();
    throw InvalidArgument("mixed-mixed fidelity is unsupported");
}

void normalize(FockState& state) {
    if (state.kind == StateKind::Pure) {
        double n = state.psi.norm();
        if (n < 1e-300) throw InvalidArgument("cannot normalize zero state");
        state.norm_meta = n;
        state.psi /= n;
    } else {
        double t = state.rho.trace().real();
        if (t < 1e-300) throw InvalidArgument("cannot normalize zero-trace state");
        state.norm_meta = t;
        state.rho /= t;
    }
}

double tail_mass(const Vec& psi, int band) {
    const int dim = static_cast<int>(psi.size());
    if (band <= 0 || band > dim) band = dim;
    double tail = 0.0;
    for (int n = dim - band; n < dim; ++n) tail += std::norm(psi(n));
    double total = psi.squaredNorm();
    return total > 0 ? tail / total : 0.0;
}

double trace_distance(const FockState& s1, const FockState& s2) {
    Mat d = s1.density() - s2.density();
    Eigen::SelfAdjointEigenSolver<Mat> es(d);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

Mat displacement_laguerre(Complex zeta, int dim) {
    check_dim(dim);
    const double asq = std::norm(zeta);
    Mat out(dim, dim);
    // <m|D|n> = sqrt(n!/m!) zeta^{m-n} e^{-|z|^2/2} L_n^{(m-n)}(|z|^2), m >= n;
    // the upper triangle follows from D^dag(zeta) = D(-zeta).
    for (int n = 0; n < dim; ++n) {
        for (int m = n; m < dim; ++m) {
            const int k = m - n;
            // L_n^{(k)}(x) by the stable three-term recurrence.
            double lprev = 1.0, lcur = 1.0 + k - asq;
            for (int j = 2; j <= n; ++j) {
                double lnext = ((2.0 * j - 1.0 + k - asq) * lcur - (j - 1.0 + k) * lprev) / j;
                lprev = lcur;
                lcur = lnext;
            }
            const double lag = (n == 0) ? 1.0 : lcur;
            double lsqrtfact = 0.0;  // log sqrt(n!/m!)
            for (int j = n + 1; j <= m; ++j) lsqrtfact -= 0.5 * std::log(static_cast<double>(j));
            const double radial = std::exp(lsqrtfact - asq / 2.0) * lag;
            out(m, n) = radial * std::pow(zeta, k);
            if (m != n) {
                // <n|D(z)|m> = conj(<m|D(-z)|n>) = radial * (-z^*)^k
                out(n, m) = radial * std::pow(-std::conj(zeta), k);
            }
        }
    }
    return out;
}

}  // namespace projsq
