#include "projsq/vqed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace projsq {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_line(const std::string& key, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return key + " = " + buf + "\n";
}

Complex comp_phase(Complex zl, Complex zlp) {
    return std::polar(1.0, ((zl - zlp) * std::conj(zlp)).imag());
}

std::vector<double> cumulative_weights(const ProjectorSpec& spec) {
    std::vector<double> cum;
    cum.reserve(spec.terms.size());
    double acc = 0.0;
    for (const auto& t : spec.terms) cum.push_back(acc += t.weight);
    return cum;
}

int draw_cdf(const std::vector<double>& cum, double u) {
    const auto it =
        std::upper_bound(cum.begin(), cum.end(), u * cum.back());
    return std::min(int(it - cum.begin()), int(cum.size()) - 1);
}

double checked_decay(const DecayFn& decay, const ProjectorTerm& a,
                     const ProjectorTerm& b) {
    const double e = decay(a, b);
    if (!(e > 0.0) || e > 1.0 + 1e-12)
        throw InvalidArgument("vqed: decay factors must lie in (0, 1]");
    return std::min(e, 1.0);
}

// Per-pair decay factors; all ones when no decay model is set.
Eigen::MatrixXd decay_table(const ProjectorSpec& spec, const DecayFn& decay) {
    const int n = int(spec.terms.size());
    Eigen::MatrixXd e = Eigen::MatrixXd::Ones(n, n);
    if (!decay) return e;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            e(i, j) = checked_decay(decay, spec.terms[i], spec.terms[j]);
    return e;
}

// Real cross tables of a single insertion on the (gate-applied) input:
// g(l,lp) = Re<b|a>, go(l,lp) = Re<b|O|a>, d(l) = <a|O|a> with
// a = D(zeta_l)|phi>, b = D(zeta_lp)|phi>.
struct SingleTables {
    Eigen::MatrixXd g, go;
    Eigen::VectorXd d;
};

SingleTables build_tables(const FockState& state, const FockOperator* gate,
                          const ProjectorSpec& spec,
                          const FockOperator& obs) {
    const int n = int(spec.terms.size());
    SingleTables t;

    if (state.kind == StateKind::Pure) {
        Vec phi = gate ? Vec(gate->m * state.psi) : state.psi;
        Mat v(phi.size(), n);
        for (int i = 0; i < n; ++i)
            v.col(i) = displacement_apply(spec.terms[i].zeta, phi);
        const Mat w = obs.m * v;
        const Mat gc = v.adjoint() * v;
        const Mat goc = v.adjoint() * w;
        t.g = gc.real().transpose();
        t.go = goc.real().transpose();
        t.d = goc.real().diagonal();
        return t;
    }

    FockState rho = state;
    if (gate) {
        rho.rho = gate->m * rho.rho * gate->m.adjoint();
        normalize(rho);
    }
    t.g.resize(n, n);
    t.go.resize(n, n);
    t.d.resize(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const auto r = hadamard_test_exact(rho, spec.terms[i].zeta,
                                               spec.terms[j].zeta, 1, &obs);
            t.g(i, j) = r.ex_m;
            t.go(i, j) = r.ex_mo;
        }
    t.d = t.go.diagonal();
    return t;
}

void validate(const VqedPlan& plan) {
    if (plan.insertions.empty())
        throw InvalidArgument("vqed: at least one insertion required");
    if (plan.shots < 1) throw InvalidArgument("vqed: shots must be >= 1");
    if (!plan.circuit.empty() &&
        plan.circuit.size() != plan.insertions.size())
        throw InvalidArgument(
            "vqed: circuit must be empty or match the insertion count");

    const int dim = plan.initial.dim();
    if (plan.observable.dim() != dim)
        throw InvalidArgument("vqed: observable dimension mismatch");
    for (const auto& g : plan.circuit)
        if (g.dim() != dim)
            throw InvalidArgument("vqed: gate dimension mismatch");

    for (const auto& spec : plan.insertions) {
        if (spec.terms.empty())
            throw InvalidArgument("vqed: empty projector spec");
        if (spec.kind != ProjectorKind::SC && spec.kind != ProjectorKind::GKP)
            throw InvalidArgument(
                "vqed: only displacement-comb insertions are samplable");
    }

    if (plan.initial.kind == StateKind::Mixed && plan.insertions.size() > 1)
        throw InvalidArgument(
            "vqed: mixed inputs support a single insertion only");

    if (plan.mode == VqedMode::ShotSampled) {
        const Mat& o = plan.observable.m;
        if ((o * o - Mat::Identity(dim, dim)).cwiseAbs().maxCoeff() > 1e-8)
            throw InvalidArgument(
                "vqed: shot-sampled mode needs an involution observable");
        if (plan.decay && plan.insertions.size() > 1)
            throw InvalidArgument(
                "vqed: shot-sampled noisy runs support a single insertion");
    }
}

// Shared per-insertion sampling context.
struct InsertionCtx {
    const ProjectorSpec* spec = nullptr;
    std::vector<double> cum;  // marginal CDF, or joint CDF when compensating
    Eigen::MatrixXd e;        // physical decay per pair
    double r_mass = 1.0;
    bool joint = false;
};

std::vector<InsertionCtx> build_contexts(const VqedPlan& plan) {
    std::vector<InsertionCtx> ctx;
    ctx.reserve(plan.insertions.size());
    for (const auto& spec : plan.insertions) {
        InsertionCtx c;
        c.spec = &spec;
        c.e = decay_table(spec, plan.decay);
        if (plan.compensate) {
            const PairTable table = noise_compensated_probs(spec, plan.decay);
            c.cum.reserve(table.weights.size());
            double acc = 0.0;
            for (double w : table.weights) c.cum.push_back(acc += w);
            c.r_mass = table.r_mass;
            c.joint = true;
        } else {
            c.cum = cumulative_weights(spec);
        }
        ctx.push_back(std::move(c));
    }
    return ctx;
}

PairSample draw_pair(const InsertionCtx& c, SplitMix64& rng) {
    const int n = int(c.spec->terms.size());
    PairSample p;
    if (c.joint) {
        const int flat = draw_cdf(c.cum, rng.uniform());
        p.l = flat / n;
        p.lp = flat % n;
    } else {
        p.l = draw_cdf(c.cum, rng.uniform());
        p.lp = draw_cdf(c.cum, rng.uniform());
    }
    p.sign = c.spec->terms[p.l].sign * c.spec->terms[p.lp].sign;
    p.phase = comp_phase(c.spec->terms[p.l].zeta, c.spec->terms[p.lp].zeta);
    return p;
}

struct Accumulator {
    double sm = 0.0, smo = 0.0;
    double smm = 0.0, smomo = 0.0, scross = 0.0;

    void add(double vm, double vmo) {
        sm += vm;
        smo += vmo;
        smm += vm * vm;
        smomo += vmo * vmo;
        scross += vm * vmo;
    }
};

EstimatorResult finalize(const Accumulator& a, long long shots,
                         double r_mass) {
    EstimatorResult r;
    r.shots = shots;
    r.r_mass = r_mass;
    r.mean_m = a.sm / double(shots);
    r.mean_mo = a.smo / double(shots);

    if (shots > 1) {
        const double denom = double(shots) * double(shots - 1);
        r.var_m = std::max(0.0, (a.smm - double(shots) * r.mean_m * r.mean_m) / denom);
        r.var_mo =
            std::max(0.0, (a.smomo - double(shots) * r.mean_mo * r.mean_mo) / denom);
        r.cov = (a.scross - double(shots) * r.mean_m * r.mean_mo) / denom;
    }

    const double stderr_m = std::sqrt(r.var_m);
    if (std::abs(r.mean_m) <= 3.0 * stderr_m || r.mean_m == 0.0) {
        r.denominator_degenerate = true;
        r.ratio = kNaN;
        r.var_ratio = kNaN;
        r.empirical_overhead = kNaN;
        return r;
    }

    r.ratio = r.mean_mo / r.mean_m;
    r.var_ratio = std::max(
        0.0, (r.var_mo - 2.0 * r.ratio * r.cov + r.ratio * r.ratio * r.var_m) /
                 (r.mean_m * r.mean_m));
    r.empirical_overhead = r.var_ratio * double(shots);
    return r;
}

// Exact-expectation value of one sampled tuple along the (L, R) vector pair.
std::pair<double, double> propagated_value(
    const VqedPlan& plan, const std::vector<InsertionCtx>& ctx,
    const std::vector<PairSample>& pairs) {
    Vec l = plan.initial.psi, r = plan.initial.psi;
    double sign = 1.0, e_total = 1.0;
    for (std::size_t k = 0; k < ctx.size(); ++k) {
        if (!plan.circuit.empty()) {
            l = plan.circuit[k].m * l;
            r = plan.circuit[k].m * r;
        }
        const auto& p = pairs[k];
        l = displacement_apply(ctx[k].spec->terms[p.l].zeta, l);
        r = displacement_apply(ctx[k].spec->terms[p.lp].zeta, r);
        sign *= p.sign;
        e_total *= ctx[k].e(p.l, p.lp);
    }
    const double vm = sign * e_total * r.dot(l).real();
    const double vmo = sign * e_total * r.dot(plan.observable.m * l).real();
    return {vm, vmo};
}

}  // namespace

std::uint64_t SplitMix64::next() {
    state += kGolden;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

double SplitMix64::uniform() {
    return double(next() >> 11) * 0x1.0p-53;
}

std::uint64_t substream(std::uint64_t master, std::uint64_t counter) {
    SplitMix64 g(master + kGolden * counter);
    return g.next();
}

PairSample sample_pair(const ProjectorSpec& spec, SplitMix64& rng) {
    if (spec.terms.empty())
        throw InvalidArgument("sample_pair: empty projector spec");
    const auto cum = cumulative_weights(spec);
    PairSample p;
    p.l = draw_cdf(cum, rng.uniform());
    p.lp = draw_cdf(cum, rng.uniform());
    p.sign = spec.terms[p.l].sign * spec.terms[p.lp].sign;
    p.phase = comp_phase(spec.terms[p.l].zeta, spec.terms[p.lp].zeta);
    return p;
}

PairTable noise_compensated_probs(const ProjectorSpec& spec,
                                  const DecayFn& decay) {
    if (spec.terms.empty())
        throw InvalidArgument("noise_compensated_probs: empty projector spec");
    const int n = int(spec.terms.size());
    PairTable table;
    table.n = n;
    table.weights.resize(std::size_t(n) * n);
    double r = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            const double e =
                decay ? checked_decay(decay, spec.terms[i], spec.terms[j])
                      : 1.0;
            const double w = spec.terms[i].weight * spec.terms[j].weight / e;
            table.weights[std::size_t(i) * n + j] = w;
            r += w;
        }
    for (double& w : table.weights) w /= r;
    table.r_mass = r;
    return table;
}

PairSample sample_pair(const ProjectorSpec& spec, const PairTable& table,
                       SplitMix64& rng) {
    if (table.n != int(spec.terms.size()))
        throw InvalidArgument("sample_pair: table does not match spec");
    std::vector<double> cum;
    cum.reserve(table.weights.size());
    double acc = 0.0;
    for (double w : table.weights) cum.push_back(acc += w);
    const int flat = draw_cdf(cum, rng.uniform());
    PairSample p;
    p.l = flat / table.n;
    p.lp = flat % table.n;
    p.sign = spec.terms[p.l].sign * spec.terms[p.lp].sign;
    p.phase = comp_phase(spec.terms[p.l].zeta, spec.terms[p.lp].zeta);
    return p;
}

EstimatorResult run_vqed(const VqedPlan& plan) {
    validate(plan);
    const auto ctx = build_contexts(plan);
    const std::size_t n_ins = ctx.size();

    double r_mass = 1.0;
    for (const auto& c : ctx) r_mass *= c.r_mass;

    Accumulator acc;

    if (n_ins == 1) {
        // Fast path: all shot values come from precomputed cross tables.
        const FockOperator* gate =
            plan.circuit.empty() ? nullptr : &plan.circuit[0];
        const SingleTables t =
            build_tables(plan.initial, gate, *ctx[0].spec, plan.observable);

        for (long long s = 0; s < plan.shots; ++s) {
            SplitMix64 rng(substream(plan.seed, std::uint64_t(s)));
            const PairSample p = draw_pair(ctx[0], rng);
            const double e = ctx[0].e(p.l, p.lp);
            const double sg = double(p.sign);

            if (plan.mode == VqedMode::ExactExpectation) {
                acc.add(sg * e * t.g(p.l, p.lp), sg * e * t.go(p.l, p.lp));
                continue;
            }

            const double x = e * t.g(p.l, p.lp);
            const double pm = std::clamp(0.5 * (1.0 + x), 0.0, 1.0);
            const double m = (rng.uniform() < pm) ? 1.0 : -1.0;
            const double den = 1.0 + m * x;
            double eo = 0.5 * (t.d(p.l) + t.d(p.lp)) + m * e * t.go(p.l, p.lp);
            eo = (den > 1e-15) ? std::clamp(eo / den, -1.0, 1.0) : 0.0;
            const double o = (rng.uniform() < 0.5 * (1.0 + eo)) ? 1.0 : -1.0;
            acc.add(m * sg, m * sg * o);
        }
        return finalize(acc, plan.shots, r_mass);
    }

    // Multi-insertion paths need a pure register.
    std::vector<PairSample> pairs(n_ins);
    for (long long s = 0; s < plan.shots; ++s) {
        SplitMix64 rng(substream(plan.seed, std::uint64_t(s)));
        for (std::size_t k = 0; k < n_ins; ++k)
            pairs[k] = draw_pair(ctx[k], rng);

        if (plan.mode == VqedMode::ExactExpectation) {
            const auto [vm, vmo] = propagated_value(plan, ctx, pairs);
            acc.add(vm, vmo);
            continue;
        }

        // Faithful sequential collapse of each ancilla measurement.
        Vec phi = plan.initial.psi;
        double m_prod = 1.0, sign = 1.0;
        for (std::size_t k = 0; k < n_ins; ++k) {
            if (!plan.circuit.empty()) phi = plan.circuit[k].m * phi;
            const auto& p = pairs[k];
            const Vec a = displacement_apply(ctx[k].spec->terms[p.l].zeta, phi);
            const Vec b =
                displacement_apply(ctx[k].spec->terms[p.lp].zeta, phi);
            const double x = b.dot(a).real();
            const double pm = std::clamp(0.5 * (1.0 + x), 0.0, 1.0);
            const double m = (rng.uniform() < pm) ? 1.0 : -1.0;
            m_prod *= m;
            sign *= p.sign;
            phi = (b + m * a) / (2.0 * std::sqrt(std::max(0.5 * (1.0 + m * x),
                                                          1e-300)));
        }
        double eo = phi.dot(plan.observable.m * phi).real();
        eo = std::clamp(eo, -1.0, 1.0);
        const double o = (rng.uniform() < 0.5 * (1.0 + eo)) ? 1.0 : -1.0;
        acc.add(m_prod * sign, m_prod * sign * o);
    }
    return finalize(acc, plan.shots, r_mass);
}

EstimatorResult enumerate_vqed(const VqedPlan& plan) {
    validate(plan);
    const auto ctx = build_contexts(plan);
    const std::size_t n_ins = ctx.size();

    double tuples = 1.0;
    for (const auto& c : ctx) {
        const double n = double(c.spec->terms.size());
        tuples *= n * n;
    }
    if (tuples > 200000.0)
        throw InvalidArgument("enumerate_vqed: joint index space too large");

    double r_mass = 1.0;
    for (const auto& c : ctx) r_mass *= c.r_mass;

    // Single-insertion tuples read values off the cross tables; deeper plans
    // propagate the (L, R) pair per tuple.
    SingleTables tables;
    if (n_ins == 1) {
        const FockOperator* gate =
            plan.circuit.empty() ? nullptr : &plan.circuit[0];
        tables =
            build_tables(plan.initial, gate, *ctx[0].spec, plan.observable);
    }

    double em = 0.0, emo = 0.0, emm = 0.0, emomo = 0.0, ecross = 0.0;
    std::vector<PairSample> pairs(n_ins);
    const long long total = (long long)(tuples + 0.5);
    for (long long flat = 0; flat < total; ++flat) {
        long long rem = flat;
        double prob = 1.0;
        for (std::size_t k = 0; k < n_ins; ++k) {
            const int n = int(ctx[k].spec->terms.size());
            const int cell = int(rem % (n * n));
            rem /= n * n;
            PairSample p;
            p.l = cell / n;
            p.lp = cell % n;
            p.sign =
                ctx[k].spec->terms[p.l].sign * ctx[k].spec->terms[p.lp].sign;
            pairs[k] = p;
            if (ctx[k].joint) {
                // cum holds the joint CDF; recover the cell weight.
                const double hi = ctx[k].cum[cell];
                const double lo = cell > 0 ? ctx[k].cum[cell - 1] : 0.0;
                prob *= hi - lo;
            } else {
                prob *= ctx[k].spec->terms[p.l].weight *
                        ctx[k].spec->terms[p.lp].weight;
            }
        }

        double vm, vmo;
        if (n_ins == 1) {
            const auto& p = pairs[0];
            const double e = ctx[0].e(p.l, p.lp);
            vm = p.sign * e * tables.g(p.l, p.lp);
            vmo = p.sign * e * tables.go(p.l, p.lp);
        } else {
            std::tie(vm, vmo) = propagated_value(plan, ctx, pairs);
        }

        em += prob * vm;
        emo += prob * vmo;
        emm += prob * vm * vm;
        emomo += prob * vmo * vmo;
        ecross += prob * vm * vmo;
    }

    EstimatorResult r;
    r.shots = 1;
    r.r_mass = r_mass;
    r.mean_m = em;
    r.mean_mo = emo;
    r.var_m = std::max(0.0, emm - em * em);
    r.var_mo = std::max(0.0, emomo - emo * emo);
    r.cov = ecross - em * emo;
    if (std::abs(em) < 1e-15) {
        r.denominator_degenerate = true;
        r.ratio = kNaN;
        r.var_ratio = kNaN;
        r.empirical_overhead = kNaN;
        return r;
    }
    r.ratio = emo / em;
    r.var_ratio = std::max(
        0.0,
        (r.var_mo - 2.0 * r.ratio * r.cov + r.ratio * r.ratio * r.var_m) /
            (em * em));
    r.empirical_overhead = r.var_ratio;
    return r;
}

OverheadReport overhead(const EstimatorResult& result, double q_ref) {
    if (!(q_ref > 0.0)) throw InvalidArgument("overhead: q_ref must be > 0");
    OverheadReport rep;
    rep.empirical = result.empirical_overhead;
    rep.reference =
        (1.0 - result.ratio * result.ratio) / (q_ref * q_ref);
    rep.ratio = rep.empirical / rep.reference;
    return rep;
}

std::string VqedPlan::serialize() const {
    std::string out = "kind = vqed_plan\n";
    out += std::string("mode = ") +
           (mode == VqedMode::ExactExpectation ? "exact" : "shots") + "\n";
    out += "shots = " + std::to_string(shots) + "\n";
    out += "seed = " + std::to_string(seed) + "\n";
    out += "gates = " + std::to_string(circuit.size()) + "\n";
    out += "insertions = " + std::to_string(insertions.size()) + "\n";
    out += std::string("compensate = ") + (compensate ? "1" : "0") + "\n";
    out += std::string("decay = ") + (decay ? "1" : "0") + "\n";
    out += fmt_line("dim", initial.dim());
    for (std::size_t k = 0; k < insertions.size(); ++k) {
        const std::string prefix = "insertion" + std::to_string(k) + ".";
        const std::string body = insertions[k].serialize();
        std::size_t start = 0;
        while (start < body.size()) {
            std::size_t end = body.find('\n', start);
            if (end == std::string::npos) end = body.size();
            out += prefix + body.substr(start, end - start) + "\n";
            start = end + 1;
        }
    }
    return out;
}

}  // namespace projsq
