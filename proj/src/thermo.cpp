// thermo.cpp

#include "rcqt/thermo.hpp"

#include <cmath>

#include <json.hpp>

#include "rcqt/io.hpp"

namespace rcqt {

const ReservoirCurrents* SteadyStateReport::find(const std::string& label) const {
    for (const auto& r : reservoirs)
        if (r.label == label) return &r;
    return nullptr;
}

ReservoirCurrents block_currents(const GeneratorBundle& bundle, std::size_t b,
                                 const Matrix& rho_eig) {
    const auto& blk = bundle.blocks.at(b);
    ReservoirCurrents out;
    out.label = blk.label;
    out.beta = blk.beta;
    out.mu = blk.mu;

    const Matrix action = bundle.block_action(b, rho_eig);
    const Vector diag = action.diagonal();
    double ie = 0.0, im = 0.0;
    for (int k = 0; k < bundle.dim(); ++k) {
        ie += bundle.eig.energies(k) * diag(k).real();
        if (bundle.has_number()) im += bundle.number_diag(k) * diag(k).real();
    }
    out.energy = ie;
    out.matter = im;
    out.heat = ie - blk.mu * im;
    return out;
}

double entropy_production(const std::vector<ReservoirCurrents>& currents) {
    double s = 0.0;
    for (const auto& c : currents) s -= c.beta * c.heat;
    return s;
}

double spohn_check(const GeneratorBundle& bundle, std::size_t b, const Matrix& rho_eig) {
    const auto& blk = bundle.blocks.at(b);
    const int d = bundle.dim();

    // ln ρ_eq^ν = −βν(E_k − μν n_k) − ln Zν, diagonal in the eigenbasis
    RealVector k_exponent(d);
    for (int k = 0; k < d; ++k) {
        double e = bundle.eig.energies(k);
        if (blk.mu != 0.0) {
            if (!bundle.has_number())
                throw DimensionMismatch("spohn_check: mu != 0 without a number operator");
            e -= blk.mu * bundle.number_diag(k);
        }
        k_exponent(k) = -blk.beta * e;
    }
    const double kmax = k_exponent.maxCoeff();
    double z = 0.0;
    for (int k = 0; k < d; ++k) z += std::exp(k_exponent(k) - kmax);
    const double log_z = kmax + std::log(z);

    const Matrix action = bundle.block_action(b, rho_eig);
    const Matrix log_rho = log_psd(rho_eig);
    double val = 0.0;
    // −tr{(Lνρ)·lnρ}
    val -= ((action * log_rho).trace()).real();
    // +tr{(Lνρ)·lnρ_eq}
    for (int k = 0; k < d; ++k)
        val += action(k, k).real() * (k_exponent(k) - log_z);
    return val;
}

namespace {

double find_beta(const SteadyStateReport& rep, const std::string& label) {
    const auto* r = rep.find(label);
    if (r == nullptr) throw DimensionMismatch("analyze: missing reservoir '" + label + "'");
    return r->beta;
}

} // namespace

SteadyStateReport analyze(const GeneratorBundle& bundle, const SteadyStateSolution& sol,
                          const EngineSpec& spec) {
    SteadyStateReport rep;
    rep.solver_residual = sol.residual;
    rep.min_state_eigenvalue = sol.min_eigenvalue;

    double chem_work = 0.0, heat_sum = 0.0, heat_scale = 0.0;
    for (std::size_t b = 0; b < bundle.blocks.size(); ++b) {
        ReservoirCurrents c = block_currents(bundle, b, sol.rho_eig);
        c.spohn = spohn_check(bundle, b, sol.rho_eig);
        chem_work += c.mu * c.matter;
        heat_sum += c.heat;
        heat_scale = std::max(heat_scale, std::abs(c.heat));
        rep.reservoirs.push_back(std::move(c));
    }
    rep.entropy_production = entropy_production(rep.reservoirs);
    rep.first_law_residual = std::abs(chem_work + heat_sum) / std::max(heat_scale, 1e-300);

    if (spec.kind == EngineKind::MaserEngine) {
        const auto* hot = rep.find(spec.hot_label);
        const auto* work = rep.find(spec.work_label);
        const double beta_h = find_beta(rep, spec.hot_label);
        const double beta_c = find_beta(rep, spec.cold_label);
        const double beta_w = find_beta(rep, spec.work_label);
        rep.work_rate = work->heat;
        rep.efficiency_carnot = 1.0 - beta_h / beta_c;
        rep.second_law_bound = (beta_c - beta_h) / (beta_c - beta_w);
        if (rep.work_rate < 0.0 && hot->heat > 0.0)
            rep.efficiency = -rep.work_rate / hot->heat;
    } else {
        const auto* left = rep.find(spec.left_label);
        const auto* right = rep.find(spec.right_label);
        const auto* phonon = rep.find(spec.phonon_label);
        if (left == nullptr || right == nullptr || phonon == nullptr)
            throw DimensionMismatch("analyze: thermoelectric engine needs L, R, ph blocks");
        rep.work_rate = left->mu * left->matter + right->mu * right->matter;
        const double beta_el = left->beta;
        const double beta_ph = phonon->beta;
        rep.efficiency_carnot = 1.0 - beta_ph / beta_el; // phonon bath is the hot one
        rep.second_law_bound = rep.efficiency_carnot;
        const double generated = -rep.work_rate; // −(μL−μR) I_M at steady state
        if (generated > 0.0 && phonon->energy > 0.0)
            rep.efficiency = generated / phonon->energy;
    }
    return rep;
}

std::string report_to_json(const SteadyStateReport& rep) {
    nlohmann::ordered_json j;
    auto rs = nlohmann::ordered_json::array();
    for (const auto& r : rep.reservoirs) {
        rs.push_back({{"label", r.label},
                      {"beta", r.beta},
                      {"mu", r.mu},
                      {"energy_current", r.energy},
                      {"matter_current", r.matter},
                      {"heat_current", r.heat},
                      {"spohn", r.spohn}});
    }
    j["reservoirs"] = std::move(rs);
    j["work_rate"] = rep.work_rate;
    j["entropy_production"] = rep.entropy_production;
    if (rep.efficiency)
        j["efficiency"] = *rep.efficiency;
    else
        j["efficiency"] = nullptr;
    j["efficiency_carnot"] = rep.efficiency_carnot;
    j["second_law_bound"] = rep.second_law_bound;
    j["first_law_residual"] = rep.first_law_residual;
    j["solver_residual"] = rep.solver_residual;
    j["min_state_eigenvalue"] = rep.min_state_eigenvalue;
    return j.dump(2) + "\n";
}

} // namespace rcqt
