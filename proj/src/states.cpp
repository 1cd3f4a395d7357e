#include "projsq/states.hpp"

#include <cmath>

namespace projsq {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_tail(const Vec& psi, const char* what) {
    const int band = std::max(2, static_cast<int>(psi.size()) / 10);
    if (tail_mass(psi, band) > 1e-5)
        throw TruncationOverflow(std::string(what) +
                                 ": state weight reaches the basis cutoff; increase dim");
}

// Per-peak data of the enveloped comb. Attenuating a displaced squeezed
// vacuum with e^{-tau a^dag a} yields another displaced squeezed vacuum with
// a common output squeezing and a peak-dependent amplitude and weight; these
// are the closed-form Gaussian-algebra expressions.
struct Peak {
    double weight;  // relative amplitude weight (positive)
    double alpha;   // output displacement
};

struct CombData {
    double z_out;
    std::vector<Peak> peaks;
};

CombData gkp_peaks(const GkpParams& p, int mu, const GkpComb& comb) {
    const double tau = p.delta_sq;
    const double C = std::cosh(tau), S = std::sinh(tau);
    const double v = std::exp(-2.0 * comb.comb_z);
    CombData out;
    out.z_out = comb.z_out;
    for (int k = -comb.peaks; k <= comb.peaks; ++k) {
        const double x0 = std::sqrt(2.0) * (2 * k + mu) * p.xi;
        Peak pk;
        pk.weight = std::exp(-x0 * x0 * S / (2.0 * (C + S * v)));
        pk.alpha = x0 / ((C + S * v) * std::sqrt(2.0));
        out.peaks.push_back(pk);
    }
    return out;
}

double peak_weight(const GkpParams& p, double comb_z, int mu, int k) {
    const double tau = p.delta_sq;
    const double C = std::cosh(tau), S = std::sinh(tau);
    const double v = std::exp(-2.0 * comb_z);
    const double x0 = std::sqrt(2.0) * (2 * k + mu) * p.xi;
    return std::exp(-x0 * x0 * S / (2.0 * (C + S * v)));
}

FockState superpose_impl(FockState a, const FockState& b, Complex c0, Complex c1,
                         const char* what) {
    FockState out = FockState::pure(c0 * a.psi + c1 * b.psi);
    if (out.psi.norm() < 1e-6) throw DegenerateInput(std::string(what) + ": zero superposition");
    normalize(out);
    return out;
}

}  // namespace

FockState squeezed_coherent(double xi, double z, int dim) {
    Vec sq = squeeze(z, dim) * vacuum(dim);
    Vec v = displacement_apply(xi, sq);
    check_tail(v, "squeezed_coherent");
    FockState s = FockState::pure(std::move(v));
    normalize(s);
    return s;
}

FockState sc_state(const ScParams& p, int mu, int dim) {
    if (!(p.xi > 0)) throw InvalidArgument("sc_state: xi must be > 0");
    if (mu != 0 && mu != 1) throw InvalidArgument("sc_state: mu must be 0 or 1");
    Vec sq = squeeze(p.z, dim) * vacuum(dim);
    Vec plus = displacement_apply(p.xi, sq);
    Vec minus = displacement_apply(-p.xi, sq);
    Vec v = plus + (mu == 0 ? 1.0 : -1.0) * minus;
    if (v.norm() < 1e-6)
        throw DegenerateInput("sc_state: branches cancel (xi too small for odd state)");
    check_tail(v, "sc_state");
    FockState s = FockState::pure(std::move(v));
    normalize(s);
    return s;
}

GkpComb resolve_gkp_comb(const GkpParams& p, int mu) {
    if (!(p.delta_sq > 0)) throw InvalidArgument("gkp_state: delta_sq must be > 0");
    GkpComb comb;
    comb.comb_z = (p.comb_z != 0.0) ? p.comb_z : -0.5 * std::log(p.delta_sq / 10.0);
    if (std::exp(-2.0 * comb.comb_z) > p.delta_sq / 10.0 + 1e-12)
        throw InvalidArgument("gkp_state: comb_z too small to emulate the ideal comb");

    if (p.comb_peaks > 0) {
        comb.peaks = p.comb_peaks;
    } else {
        int k = 1;
        while (peak_weight(p, comb.comb_z, mu, k) >= 1e-8 && k < 64) ++k;
        comb.peaks = std::max(6, k);
    }
    const double tau = p.delta_sq;
    const double C = std::cosh(tau), S = std::sinh(tau);
    const double v = std::exp(-2.0 * comb.comb_z);
    comb.z_out = -0.5 * std::log((C * v + S) / (S * v + C));
    return comb;
}

FockState gkp_state(const GkpParams& p, int mu, int dim) {
    if (mu != 0 && mu != 1) throw InvalidArgument("gkp_state: mu must be 0 or 1");
    GkpComb comb = resolve_gkp_comb(p, mu);
    CombData data = gkp_peaks(p, mu, comb);

    Vec sq = squeeze(data.z_out, dim) * vacuum(dim);
    Vec acc = Vec::Zero(dim);
    for (const Peak& pk : data.peaks) acc += pk.weight * displacement_apply(pk.alpha, sq);

    // Outermost-peak convergence: its weight must be negligible relative to
    // the center, otherwise the comb was truncated too early.
    const double outer = std::max(data.peaks.front().weight, data.peaks.back().weight);
    const double center = data.peaks[data.peaks.size() / 2].weight;
    if (outer > 1e-8 * std::max(1.0, center) && p.comb_peaks > 0)
        throw InvalidArgument("gkp_state: comb_peaks too small (outermost weight not negligible)");

    check_tail(acc, "gkp_state");
    FockState s = FockState::pure(std::move(acc));
    normalize(s);
    return s;
}

FockState gkp_state_direct(const GkpParams& p, int mu, int dim) {
    GkpComb comb = resolve_gkp_comb(p, mu);
    Vec sq = squeeze(comb.comb_z, dim) * vacuum(dim);
    Vec acc = Vec::Zero(dim);
    for (int k = -comb.peaks; k <= comb.peaks; ++k)
        acc += displacement_apply((2 * k + mu) * p.xi, sq);
    acc = envelope(p.delta_sq, dim) * acc;
    check_tail(acc, "gkp_state_direct");
    FockState s = FockState::pure(std::move(acc));
    normalize(s);
    return s;
}

LogicalSet logical_set(const ScParams& p, int dim) {
    LogicalSet set;
    set.x_op = Complex(0, -1) * displacement(Complex(0, kPi / (4.0 * p.xi)), dim);
    set.z_op = rotation(kPi, dim);
    set.y_op = Complex(0, 1) * set.x_op * set.z_op;
    return set;
}

LogicalSet logical_set(const GkpParams& p, int dim) {
    LogicalSet set;
    set.x_op = displacement(p.xi, dim);
    set.z_op = displacement(Complex(0, kPi / (2.0 * p.xi)), dim);
    set.y_op = Complex(0, 1) * set.x_op * set.z_op;
    return set;
}

Mat sc_stabilizer(double xi, int dim) {
    return -displacement(Complex(0, kPi / (2.0 * xi)), dim);
}

std::pair<Mat, Mat> gkp_stabilizers(double xi, int dim) {
    return {displacement(2.0 * xi, dim), displacement(Complex(0, kPi / xi), dim)};
}

FockState code_superposition(const ScParams& p, Complex c0, Complex c1, int dim) {
    return superpose_impl(sc_state(p, 0, dim), sc_state(p, 1, dim), c0, c1, "sc superposition");
}

FockState code_superposition(const GkpParams& p, Complex c0, Complex c1, int dim) {
    return superpose_impl(gkp_state(p, 0, dim), gkp_state(p, 1, dim), c0, c1, "gkp superposition");
}

FockState magic_state(const ScParams& p, int dim) {
    return code_superposition(p, 1.0, std::exp(Complex(0, kPi / 4.0)), dim);
}

FockState magic_state(const GkpParams& p, int dim) {
    return code_superposition(p, 1.0, std::exp(Complex(0, kPi / 4.0)), dim);
}

DecayFactors decay_factors(const ScParams& p) {
    const double arg = 0.5 * std::pow(kPi / (4.0 * p.xi), 2) * std::exp(-2.0 * p.z);
    const double h = std::exp(-arg);
    return {h, h, 1.0};
}

DecayFactors decay_factors(const GkpParams& p) {
    const double g1 = std::exp(-p.delta_sq * p.xi * p.xi / 2.0);
    const double g2 = std::exp(-p.delta_sq * p.xi * p.xi);
    return {g1, g2, g1};
}

DecayFactors ideal_bloch(Complex c0, Complex c1) {
    const double n = std::norm(c0) + std::norm(c1);
    const Complex cross = std::conj(c0) * c1;
    return {2.0 * cross.real() / n, 2.0 * cross.imag() / n, (std::norm(c0) - std::norm(c1)) / n};
}

}  // namespace projsq
