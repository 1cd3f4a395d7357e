#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace projsq {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Thrown when a constructed state has leaked noticeable weight into the top
// of the truncated basis, i.e. the chosen dimension is too small.
struct TruncationOverflow : std::runtime_error {
    explicit TruncationOverflow(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidArgument : std::invalid_argument {
    explicit InvalidArgument(const std::string& what) : std::invalid_argument(what) {}
};

// Dense operator on the truncated Fock space together with structural tags.
// The tags are advisory: expectation() uses hermitian to decide whether the
// imaginary residue should be treated as numerical noise.
struct FockOperator {
    Mat m;
    bool unitary = false;
    bool hermitian = false;

    int dim() const { return static_cast<int>(m.rows()); }
};

enum class StateKind { Pure, Mixed };

// Pure state (amplitude vector) or mixed state (density matrix) on the
// truncated space. norm_meta records the norm/trace seen by the last
// normalize() call, before rescaling.
struct FockState {
    StateKind kind = StateKind::Pure;
    Vec psi;
    Mat rho;
    double norm_meta = 1.0;

    int dim() const {
        return kind == StateKind::Pure ? static_cast<int>(psi.size())
                                       : static_cast<int>(rho.rows());
    }
    static FockState pure(Vec v) {
        FockState s;
        s.kind = StateKind::Pure;
        s.psi = std::move(v);
        return s;
    }
    static FockState mixed(Mat r) {
        FockState s;
        s.kind = StateKind::Mixed;
        s.rho = std::move(r);
        return s;
    }
    // Density matrix view regardless of kind (copies for pure states).
    Mat density() const {
        if (kind == StateKind::Mixed) return rho;
        return psi * psi.adjoint();
    }
};

// Annihilation / creation pair with <n-1|a|n> = sqrt(n).
std::pair<Mat, Mat> ladder(int dim);

// Vacuum |0> at the given dimension.
Vec vacuum(int dim);

// Fock basis vector |n>.
Vec fock_basis(int n, int dim);

// exp(zeta a^dag - zeta^* a) as the exact exponential of the truncated
// generator (exactly unitary). Uses a per-dimension spectral cache.
Mat displacement(Complex zeta, int dim);

// Applies displacement(zeta, dim) to a vector without forming the matrix.
Vec displacement_apply(Complex zeta, const Vec& v);

// exp((z^* a^2 - z a^dag^2)/2), the exact exponential of the truncated
// generator. Real z > 0 squeezes the position quadrature.
Mat squeeze(Complex z, int dim);

// Diagonal phase rotation exp(i theta a^dag a).
Mat rotation(double theta, int dim);

// Diagonal damping exp(-delta_sq a^dag a); not unitary for delta_sq > 0.
Mat envelope(double delta_sq, int dim);

// Tagged builders for callers that want the structural flags.
FockOperator displacement_op(Complex zeta, int dim);
FockOperator squeeze_op(Complex z, int dim);
FockOperator rotation_op(double theta, int dim);
FockOperator envelope_op(double delta_sq, int dim);

// Generic dense matrix exponential (scaling-and-squaring Pade); used as the
// independent cross-check engine for the spectral builders.
Mat expm(const Mat& g);

// <psi|O|psi> or Tr[O rho].
Complex expectation(const FockState& state, const Mat& op);
// Real part, asserting the imaginary residue is below tol (for operators
// known to be Hermitian).
double expectation_real(const FockState& state, const Mat& op, double tol = 1e-8);

// |<psi|phi>|^2 (pure-pure) or <psi|rho|psi> (pure-mixed). Mixed-mixed is
// unsupported and throws.
double fidelity(const FockState& s1, const FockState& s2);

// Normalizes in place and records the pre-normalization norm (pure) or trace
// (mixed) in norm_meta. Throws InvalidArgument on a zero state.
void normalize(FockState& state);

// Fraction of probability weight in the top `band` coefficients; the cheap
// truncation-health indicator used by the state constructors.
double tail_mass(const Vec& psi, int band);

// 0.5 * trace norm of (rho1 - rho2) for mixed/pure inputs.
double trace_distance(const FockState& s1, const FockState& s2);

// <m|D(zeta)|n> from the closed-form associated-Laguerre expression;
// independent oracle for the matrix builders (block of the first `dim` rows
// and columns).
Mat displacement_laguerre(Complex zeta, int dim);

}  // namespace projsq
