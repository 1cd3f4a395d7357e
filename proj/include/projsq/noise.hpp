#pragma once

#include <stdexcept>

#include "projsq/circuit.hpp"
#include "projsq/fock.hpp"
#include "projsq/vqed.hpp"

namespace projsq {

// Thrown when the adaptive integrator in photon_loss cannot reach its
// trace-distance tolerance within the step-doubling budget.
struct StepControlFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Dimensionless photon-loss strength gamma*t of the amplitude-damping
// channel d rho/dt = gamma/2 (2 a rho a+ - a+a rho - rho a+a).
struct LossParams {
    double gamma_t = 0.0;
};

// Ancilla relaxation/dephasing rates plus the gate-time model: a controlled
// displacement of size |dzeta| takes time_per_unit_displacement * |dzeta|.
struct AncillaNoise {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double time_per_unit_displacement = 1.0;
};

// Photon loss through adaptive RK4 integration of the Lindblad generator.
// Output is always a density matrix; steps double until two refinements
// agree in trace distance below 1e-8.
FockState photon_loss(const FockState& state, const LossParams& p);

// The same channel through its exact damping Kraus family with
// eta = e^{-gamma t}; closed form, used as the reference path.
FockState photon_loss_kraus(const FockState& state, const LossParams& p);

// Ancilla coherence surviving one controlled displacement:
// exp(-(gamma1/2 + 2 gamma2) * time_per_unit_displacement * |zeta_l - zeta_lp|).
double ancilla_decay(Complex zeta_l, Complex zeta_lp, const AncillaNoise& noise);

// Adapter handing the decay model to VqedPlan::decay.
DecayFn make_decay(const AncillaNoise& noise);

// Hadamard-test expectations under ancilla noise: the noiseless values scale
// by the coherence factor (off-diagonal ancilla blocks decay uniformly, the
// diagonal blocks never reach the X readout). Bit-identical to
// hadamard_test_exact when the factor is one.
HadamardResult noisy_hadamard_test(const FockState& state, Complex zeta_l,
                                   Complex zeta_lp, int sign,
                                   const FockOperator* observable,
                                   const AncillaNoise& noise,
                                   const RotationPair* rot = nullptr);

}  // namespace projsq
