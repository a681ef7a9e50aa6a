// equilibrium.cpp

#include "rcqt/equilibrium.hpp"

#include <json.hpp>

namespace rcqt {

Matrix reduced_gibbs(const OperatorMatrix& H_super, double beta, int traced_factor) {
    const Matrix rho_full = gibbs_state(H_super.mat, beta);
    Matrix rho = partial_trace(rho_full, H_super.space, traced_factor);
    rho /= rho.trace();
    return rho;
}

ReducedStateComparison compare_equilibrium(const MaserConfig& cfg) {
    RCModelParts parts = build_rc_parts(cfg);

    // keep only the cold residual reservoir: single-bath equilibration
    std::vector<ReservoirSpec> cold_only{parts.reservoirs[1]};
    const auto bundle = build_secular(parts.H, cold_only);
    const auto sol = steady_state(bundle);
    const Matrix rho_lab = to_lab_basis(bundle, sol.rho_eig);

    ReducedStateComparison cmp;
    cmp.rho_reduced = reduced_gibbs(parts.H, cfg.beta_c, 1);
    cmp.rho_steady = partial_trace(rho_lab, parts.H.space, 1);
    cmp.rho_steady /= cmp.rho_steady.trace();

    Matrix h_bare = Matrix::Zero(3, 3);
    h_bare(1, 1) = cfg.Delta10;
    h_bare(2, 2) = cfg.Delta20();
    cmp.rho_canonical = gibbs_state(h_bare, cfg.beta_c);

    cmp.dist_reduced_canonical = trace_distance(cmp.rho_reduced, cmp.rho_canonical);
    cmp.dist_reduced_steady = trace_distance(cmp.rho_reduced, cmp.rho_steady);
    cmp.dist_steady_canonical = trace_distance(cmp.rho_steady, cmp.rho_canonical);
    return cmp;
}

std::string comparison_to_json(const ReducedStateComparison& cmp) {
    auto diag_of = [](const Matrix& m) {
        std::vector<double> d;
        for (int i = 0; i < m.rows(); ++i) d.push_back(m(i, i).real());
        return d;
    };
    nlohmann::ordered_json j;
    j["populations_reduced_gibbs"] = diag_of(cmp.rho_reduced);
    j["populations_steady"] = diag_of(cmp.rho_steady);
    j["populations_canonical"] = diag_of(cmp.rho_canonical);
    j["trace_distance_reduced_vs_canonical"] = cmp.dist_reduced_canonical;
    j["trace_distance_reduced_vs_steady"] = cmp.dist_reduced_steady;
    j["trace_distance_steady_vs_canonical"] = cmp.dist_steady_canonical;
    return j.dump(2) + "\n";
}

} // namespace rcqt
