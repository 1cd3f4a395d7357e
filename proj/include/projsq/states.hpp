#pragma once

#include <vector>

#include "projsq/fock.hpp"

namespace projsq {

// Raised when a requested code state is (numerically) the zero vector, e.g.
// the odd squeezed-cat branch at xi = 0.
struct DegenerateInput : std::runtime_error {
    explicit DegenerateInput(const std::string& what) : std::runtime_error(what) {}
};

struct ScParams {
    double xi = 1.0;  // coherent amplitude, > 0
    double z = 0.0;   // squeezing parameter
};

struct GkpParams {
    double xi = 1.2533141373155003;  // lattice half-spacing; sqrt(pi/2) = square
    double delta_sq = 0.05;          // envelope strength
    int comb_peaks = 0;              // half-count of comb peaks; 0 = auto
    double comb_z = 0.0;             // peak squeezing emulating the ideal comb; 0 = auto
};

struct LogicalSet {
    Mat x_op, y_op, z_op;
};

struct DecayFactors {
    double hx, hy, hz;
};

// D(xi) S(z) |0>. Throws TruncationOverflow when the result carries
// non-negligible weight near the basis cutoff.
FockState squeezed_coherent(double xi, double z, int dim);

// (|xi,z> + (-1)^mu |-xi,z>) / N with the exact normalization.
FockState sc_state(const ScParams& p, int mu, int dim);

// Approximate GKP state: envelope(delta_sq) applied to a finitely squeezed
// comb of peaks at (2n+mu) xi. Evaluated per peak in closed form (Gaussian
// algebra), which is numerically identical to building the comb first and
// attenuating it, but never represents the huge pre-envelope intermediate.
FockState gkp_state(const GkpParams& p, int mu, int dim);

// Literal construction path (comb sum, then envelope, then normalize); used
// as a cross-check of gkp_state where the comb is representable.
FockState gkp_state_direct(const GkpParams& p, int mu, int dim);

// Logical Pauli unitaries. SC: X = -i D(i pi/(4 xi)), Z = parity, Y = iXZ.
// GKP: X = D(xi), Z = D(i pi/(2 xi)), Y = iXZ.
LogicalSet logical_set(const ScParams& p, int dim);
LogicalSet logical_set(const GkpParams& p, int dim);

// Stabilizer displacement of the SC code, -D(i pi/(2 xi)) with the sign
// folded in, and the two GKP stabilizers S_X = D(2 xi), S_Z = D(i pi/xi).
Mat sc_stabilizer(double xi, int dim);
std::pair<Mat, Mat> gkp_stabilizers(double xi, int dim);

// c0 |mu=0> + c1 |mu=1>, exactly normalized.
FockState code_superposition(const ScParams& p, Complex c0, Complex c1, int dim);
FockState code_superposition(const GkpParams& p, Complex c0, Complex c1, int dim);

// |A> with c0 = 1, c1 = e^{i pi/4}.
FockState magic_state(const ScParams& p, int dim);
FockState magic_state(const GkpParams& p, int dim);

// Finite-squeezing decay of logical expectations:
// SC -> (h, h, 1), h = exp(-(pi/(4 xi))^2 e^{-2z} / 2);
// GKP -> (g1, g2, g1), g1 = exp(-delta_sq xi^2 / 2), g2 = exp(-delta_sq xi^2).
DecayFactors decay_factors(const ScParams& p);
DecayFactors decay_factors(const GkpParams& p);

// Bloch vector (2 Re c0* c1, 2 Im c0* c1, |c0|^2 - |c1|^2) / (|c0|^2 + |c1|^2)
// of the ideal qubit with amplitudes (c0, c1); the infinite-squeezing
// reference for logical expectations.
DecayFactors ideal_bloch(Complex c0, Complex c1);

// Resolved comb parameters for a GkpParams (auto fields filled in).
struct GkpComb {
    double comb_z;    // peak squeezing
    int peaks;        // half-count (n in [-peaks, peaks])
    double z_out;     // common squeezing of the post-envelope peaks
};
GkpComb resolve_gkp_comb(const GkpParams& p, int mu);

}  // namespace projsq
