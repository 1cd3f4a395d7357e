#pragma once

#include "projsq/fock.hpp"
#include "projsq/projector.hpp"

#include <utility>
#include <vector>

namespace projsq {

// Joint ancilla-qubit x oscillator state. Pure states hold a 2*dim vector in
// ancilla-major layout: entries [0, dim) are the ancilla-|0> block, entries
// [dim, 2*dim) the ancilla-|1> block. Mixed states hold the 2*dim square
// density matrix in the same block order.
struct HybridState {
    StateKind kind = StateKind::Pure;
    Vec amp;
    Mat rho;

    int dim() const {
        return kind == StateKind::Pure ? int(amp.size()) / 2
                                       : int(rho.rows()) / 2;
    }
    Vec block(int b) const { return amp.segment(b * dim(), dim()); }

    // Register state tensored with a reset ancilla |0>.
    static HybridState from_register(const FockState& reg);
};

enum class LcuCode { SC, GKP };

struct LcuConfig {
    LcuCode code = LcuCode::SC;
    double xi = 1.2533141373155003;  // sqrt(pi/2)
    double p0 = 0.5;                 // in (0, 1]
    int reps = 1;                    // M repetitions of the Q-block
    // Post-selected ancilla bit per step; empty selects the defaults
    // (1 for SC steps, 0 for GKP steps).
    std::vector<int> postselect_bits;
};

// One post-selected LCU round: prepare the ancilla in
// sqrt(p0)|0> + sign*sqrt(1-p0)|1>, apply controlled-D(zeta), rotate the
// ancilla so the kept row realizes p0*I + sign*(1-p0)*D(zeta), measure and
// post-select the requested bit. Returns the state (ancilla reset to |0>)
// and the branch probability. The input ancilla must be in |0>.
std::pair<HybridState, double> lcu_step(const HybridState& state, Complex zeta,
                                        int sign, int postselect, double p0);

// M repetitions of the code's Q-block (SC: Q0, Q0^dag; GKP: Q1, Q1^dag,
// Q2, Q2^dag), each via lcu_step. Returns the final register state and the
// product of branch probabilities.
std::pair<FockState, double> lcu_project(const FockState& state,
                                         const LcuConfig& cfg, int dim);

// Central-limit width of the M-repetition binomial comb, in the
// exp(-zeta^2/Gamma^2) convention: Gamma^2 = 4 step^2 M p0 (1-p0) with
// step = pi/(2 xi) for SC and 2 xi per quadrature for GKP.
double binomial_width(LcuCode code, double xi, double p0, int M);

// Smallest M >= 1 whose binomial width reaches target_gamma_sq.
int binomial_reps(LcuCode code, double xi, double p0, double target_gamma_sq);

// Exact expansion of the M-repetition Q-product as a displacement comb:
// SC gives signed weights on multiples of i pi/(2 xi); GKP gives the
// separable all-positive two-axis comb.
ProjectorSpec binomial_spec(LcuCode code, double xi, double p0, int M);

struct RotationPair {
    double theta_l = 0.0;
    double theta_lp = 0.0;
};

struct HadamardResult {
    double ex_m = 0.0;   // expectation of the sign-corrected ancilla outcome
    double ex_mo = 0.0;  // expectation of outcome times observable
    Complex phase{1.0, 0.0};  // compensation phase folded into the readout
};

// Exact expectations of the Hadamard-test circuit for one sampled pair:
// ancilla |+>, unconditional D(zeta_lp), controlled-D(zeta_l - zeta_lp),
// phase-compensated X readout. The realized register process is exactly
// sign * D(zeta_l) rho D(zeta_lp)^dag; with the optional rotation pair the
// displacements become D(zeta)R(theta). observable may be null (ex_mo = 0).
HadamardResult hadamard_test_exact(const FockState& state, Complex zeta_l,
                                   Complex zeta_lp, int sign,
                                   const FockOperator* observable = nullptr,
                                   const RotationPair* rot = nullptr);

}  // namespace projsq
