#pragma once

#include "projsq/fock.hpp"

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace projsq {

// Thrown by project() when the projection probability underflows (q < 1e-12).
struct ProjectionAnnihilated : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown by vacuum_project() when doubling the node count moves q by more
// than 1e-8, i.e. the requested quadrature order is not trustworthy.
struct QuadratureNotConverged : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ProjectorKind { SC, GKP, VACUUM, ROTATION };

// One term of a displacement-sum projector: weight * sign * D(zeta).
// Rotation projectors reuse the slot with `angle` instead of `zeta`.
// l1/l2 record the lattice indices the term was generated from.
struct ProjectorTerm {
    double weight = 0.0;
    int sign = 1;
    Complex zeta{0.0, 0.0};
    double angle = 0.0;
    int l1 = 0;
    int l2 = 0;
};

struct ProjectorSpec {
    ProjectorKind kind = ProjectorKind::SC;
    std::vector<ProjectorTerm> terms;

    // Generation metadata, kept for reporting and serialization.
    double xi = 0.0;
    double gamma1 = 0.0;   // SC width, GKP x-axis width, vacuum width
    double gamma2 = 0.0;   // GKP p-axis width
    double delta_z = 0.0;  // set when the width came from a target delta-z
    double s = 0.0;        // set when the width came from a target s
    int cutoff1 = 0;
    int cutoff2 = 0;
    int order = 0;         // rotation order

    // Plain-text key = value dump (weights are implied by the metadata).
    std::string serialize() const;
};

struct ValidityReport {
    bool smearing_resolved = false;   // e^{2z} >= (pi/2xi)^2
    bool step_fine_enough = false;    // dz >= e^{-2z}(pi/2xi)^2 / 2
    double margin_resolved = 0.0;     // ratio lhs/rhs, > 1 means satisfied
    double margin_step = 0.0;
};

// Width calculus: Gamma^2 = e^{2z}(e^{2 dz} - 1) and Gamma0^2 = (s - 1)/delta_sq.
double gamma_from_dz(double z, double dz);
double gamma0_from_s(double delta_sq, double s);

// Gaussian-weighted displacement combs. Terms with relative weight below
// tail_tol are dropped; the remainder is renormalized to sum to one.
ProjectorSpec sc_spec(double xi, double gamma, double tail_tol = 1e-10);
ProjectorSpec gkp_spec(double xi, double gamma1, double gamma2,
                       double tail_tol = 1e-10);

// Uniform average of rotation(2 pi k / order), k = 0..order-1.
ProjectorSpec rotation_spec(int order);

// Dense operator sum of a projector spec at the given truncation.
FockOperator assemble(const ProjectorSpec& spec, int dim);

// Apply the smeared projector and renormalize; returns (state, q) with
// q = <P~ P~> the projection probability.
std::pair<FockState, double> project(const FockState& state,
                                     const ProjectorSpec& spec, int dim);

// Leading-order projection probabilities.
double q_analytic_sc(double dz);
double q_analytic_gkp(double s);

// Lattice double sums for the projection probability, using the analytic
// displacement overlaps of the ideal code states.
double q_sum_sc(double xi, double gamma, double z, int cutoff);
double q_sum_gkp(double xi, double gamma0, double delta_sq, int cutoff);

// Checks the two closed-form validity conditions for the SC probability.
ValidityReport validity(double xi, double z, double dz);

// Continuous Gaussian momentum-displacement projector evaluated with
// Gauss-Hermite quadrature. Exact on squeezed vacuum inputs:
// dz = ln(1 + gamma^2 e^{-2z}) / 2 and q = e^{-dz}.
std::pair<FockState, double> vacuum_project(const FockState& state,
                                            double gamma, int quad_points);

// Gauss-Hermite nodes and weights for weight function e^{-t^2}.
std::pair<std::vector<double>, std::vector<double>> gauss_hermite(int n);

}  // namespace projsq
