#include "projsq/wigner.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace projsq {

namespace {

// Sum_n (-1)^n |v_n|^2 = <v|Pi|v> for the parity operator Pi.
double parity_norm(const Vec& v) {
    double acc = 0.0;
    for (int n = 0; n < v.size(); ++n) {
        const double w = std::norm(v(n));
        acc += (n % 2 == 0) ? w : -w;
    }
    return acc;
}

}  // namespace

Eigen::MatrixXd wigner_grid(const FockState& state,
                            const std::vector<double>& xs,
                            const std::vector<double>& ps) {
    if (xs.empty() || ps.empty())
        throw InvalidArgument("wigner_grid: empty grid axis");
    if (xs.size() > 512 || ps.size() > 512)
        throw InvalidArgument("wigner_grid: grid larger than 512x512");

    const int dim = state.dim();
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

    // Mixed states are expanded into their eigenvector ensemble once, so the
    // per-point work stays two matrix-vector products per component.
    std::vector<std::pair<double, Vec>> ensemble;
    if (state.kind == StateKind::Pure) {
        ensemble.emplace_back(1.0, state.psi);
    } else {
        Eigen::SelfAdjointEigenSolver<Mat> es(state.rho);
        for (int k = 0; k < dim; ++k) {
            const double w = es.eigenvalues()(k);
            if (w > 1e-12) ensemble.emplace_back(w, es.eigenvectors().col(k));
        }
        if (ensemble.empty())
            throw InvalidArgument("wigner_grid: density matrix has no weight");
    }

    Eigen::MatrixXd w(xs.size(), ps.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ps.size(); ++j) {
            const Complex alpha(xs[i] * inv_sqrt2, ps[j] * inv_sqrt2);
            double acc = 0.0;
            for (const auto& [weight, vec] : ensemble)
                acc += weight * parity_norm(displacement_apply(-alpha, vec));
            w(Eigen::Index(i), Eigen::Index(j)) = acc / std::numbers::pi;
        }
    }
    return w;
}

}  // namespace projsq
