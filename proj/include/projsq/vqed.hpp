#pragma once

#include "projsq/circuit.hpp"
#include "projsq/fock.hpp"
#include "projsq/projector.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace projsq {

// splitmix64: counter-based generator used for reproducible per-shot
// substreams. Shot n always derives its own stream from (seed, n), so any
// execution order reproduces the sequential run exactly.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    // Uniform double in [0, 1) with 53 random bits.
    double uniform();
};

// Seed of the counter-th substream of a master seed.
std::uint64_t substream(std::uint64_t master, std::uint64_t counter);

// One sampled displacement-index pair of a projector insertion. l and lp
// index spec.terms; sign is the product of the two term signs; phase is the
// compensation phase of the Hadamard-test circuit for this pair.
struct PairSample {
    int l = 0;
    int lp = 0;
    int sign = 1;
    Complex phase{1.0, 0.0};
};

// Draws l and lp independently from the term weights.
PairSample sample_pair(const ProjectorSpec& spec, SplitMix64& rng);

// Joint pair-weight table over term-index pairs (row-major l * n + lp).
// R is the reweighting mass sum_{l,lp} p_l p_lp / e_{l,lp}; weights are
// normalized to sum to one.
struct PairTable {
    int n = 0;
    std::vector<double> weights;
    double r_mass = 1.0;
};

using DecayFn =
    std::function<double(const ProjectorTerm&, const ProjectorTerm&)>;

// The noise-compensated sampling rule p' = p_l p_lp e^{-1} / R. The recorded
// outcomes stay physically decayed; the reweighting makes the ratio estimator
// unbiased again at an R^2 sampling-overhead cost.
PairTable noise_compensated_probs(const ProjectorSpec& spec,
                                  const DecayFn& decay);

// Draws a joint pair from an explicit table.
PairSample sample_pair(const ProjectorSpec& spec, const PairTable& table,
                       SplitMix64& rng);

enum class VqedMode { ExactExpectation, ShotSampled };

// A virtual-PS estimation run: ordered register gates U_k, one projector
// insertion after each, and the final observable. circuit may be empty
// (identity gates). decay, when set, injects the ancilla coherence factor
// e(term_l, term_lp) per insertion; compensate switches sampling to the
// reweighted pair table.
struct VqedPlan {
    FockState initial;
    std::vector<FockOperator> circuit;
    std::vector<ProjectorSpec> insertions;
    FockOperator observable;
    long long shots = 10000;
    std::uint64_t seed = 1;
    VqedMode mode = VqedMode::ExactExpectation;
    DecayFn decay;
    bool compensate = false;

    std::string serialize() const;
};

struct EstimatorResult {
    double mean_m = 0.0;   // denominator estimate; converges to q (times 1/R)
    double mean_mo = 0.0;  // numerator estimate
    double ratio = 0.0;    // mean_mo / mean_m, the mitigated expectation
    double var_m = 0.0;    // variance of the mean
    double var_mo = 0.0;
    double cov = 0.0;      // covariance of the two means
    double var_ratio = 0.0;  // delta method
    long long shots = 0;
    double empirical_overhead = 0.0;  // var_ratio * shots
    double r_mass = 1.0;              // compensation mass R (1 if unused)
    bool denominator_degenerate = false;  // |mean_m| <= 3 stderr; ratio withheld
};

// Monte-Carlo estimator. ExactExpectation replaces the ancilla and observable
// outcomes with their exact conditional expectations (index-sampling variance
// only); ShotSampled draws the +-1 outcomes and requires an involution
// observable. Mixed initial states are supported for a single insertion.
EstimatorResult run_vqed(const VqedPlan& plan);

// Exact full enumeration of the pair distribution (exact-expectation
// semantics). Variance fields are single-shot variances; shots = 1.
// Throws when the joint index space exceeds 200000 tuples.
EstimatorResult enumerate_vqed(const VqedPlan& plan);

struct OverheadReport {
    double empirical = 0.0;  // var_ratio * shots
    double reference = 0.0;  // (1 - ratio^2) / q_ref^2
    double ratio = 0.0;      // empirical / reference
};

// Compares the measured per-shot variance against the ideal projective
// measurement variance amplified by q_ref^-2.
OverheadReport overhead(const EstimatorResult& result, double q_ref);

}  // namespace projsq
