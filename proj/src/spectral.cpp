// spectral.cpp

#include "rcqt/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rcqt/io.hpp"

namespace rcqt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double interp_tabulated(const Tabulated& t, double w) {
    if (t.omega.empty() || w <= 0.0) return 0.0;
    if (w >= t.omega.back()) return 0.0;
    if (w <= t.omega.front()) {
        // linear through the origin below the first node
        return t.J.front() * (w / t.omega.front());
    }
    const auto it = std::upper_bound(t.omega.begin(), t.omega.end(), w);
    const std::size_t i = static_cast<std::size_t>(it - t.omega.begin());
    const double x0 = t.omega[i - 1], x1 = t.omega[i];
    const double y0 = t.J[i - 1], y1 = t.J[i];
    return y0 + (y1 - y0) * (w - x0) / (x1 - x0);
}

} // namespace

double SpectralDensity::positive_value(double w) const {
    if (w <= 0.0) return 0.0;
    return std::visit(
        [&](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, LorentzianHardCutoff>) {
                if (w >= f.omegaR) return 0.0;
                const double a = w * w - f.omega0 * f.omega0;
                return f.d0 * f.d0 * f.gamma * w / (a * a + f.gamma * f.gamma * w * w);
            } else if constexpr (std::is_same_v<T, OhmicHardCutoff>) {
                return (w >= f.omegaR) ? 0.0 : f.slope * w;
            } else if constexpr (std::is_same_v<T, OhmicExpCutoff>) {
                return f.J_ph * w * std::exp(-w / f.omegaR);
            } else if constexpr (std::is_same_v<T, FlatWork>) {
                return f.level();
            } else {
                return interp_tabulated(f, w);
            }
        },
        family_);
}

double SpectralDensity::value(double w) const {
    if (w == 0.0) return 0.0;
    return w > 0.0 ? positive_value(w) : -positive_value(-w);
}

double SpectralDensity::support_max() const {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, LorentzianHardCutoff>) return f.omegaR;
            else if constexpr (std::is_same_v<T, OhmicHardCutoff>) return f.omegaR;
            else if constexpr (std::is_same_v<T, OhmicExpCutoff>) return kInf;
            else if constexpr (std::is_same_v<T, FlatWork>) return kInf;
            else return f.omega.empty() ? 0.0 : f.omega.back();
        },
        family_);
}

double SpectralDensity::integration_upper() const {
    return std::visit(
        [this](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, OhmicExpCutoff>)
                return 60.0 * f.omegaR; // exp(-60) below double precision of the moments
            else if constexpr (std::is_same_v<T, FlatWork>)
                return kInf;
            else
                return support_max();
        },
        family_);
}

double SpectralDensity::slope_at_zero() const {
    return std::visit(
        [](const auto& f) -> double {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, LorentzianHardCutoff>) {
                const double w04 = std::pow(f.omega0, 4);
                return f.d0 * f.d0 * f.gamma / w04;
            } else if constexpr (std::is_same_v<T, OhmicHardCutoff>) {
                return f.slope;
            } else if constexpr (std::is_same_v<T, OhmicExpCutoff>) {
                return f.J_ph;
            } else if constexpr (std::is_same_v<T, FlatWork>) {
                return kInf; // J(0⁺) is finite and nonzero: no linear slope
            } else {
                if (f.omega.empty()) return 0.0;
                return f.J.front() / f.omega.front();
            }
        },
        family_);
}

std::optional<std::pair<double, double>> SpectralDensity::peak() const {
    if (const auto* p = std::get_if<LorentzianHardCutoff>(&family_))
        return std::make_pair(p->omega0, p->gamma);
    return std::nullopt;
}

bool SpectralDensity::mappable() const {
    return !std::holds_alternative<FlatWork>(family_);
}

std::string SpectralDensity::family_name() const {
    return std::visit(
        [](const auto& f) -> std::string {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, LorentzianHardCutoff>) return "lorentzian_hard";
            else if constexpr (std::is_same_v<T, OhmicHardCutoff>) return "ohmic_hard";
            else if constexpr (std::is_same_v<T, OhmicExpCutoff>) return "ohmic_exp";
            else if constexpr (std::is_same_v<T, FlatWork>) return "flat_work";
            else return "tabulated";
        },
        family_);
}

double RCParameters::lambda0() const { return std::sqrt(lambda0_sq); }
double RCParameters::dOmega0() const { return std::sqrt(dOmega0_sq); }

double RCParameters::consistency_residual() const {
    const double lhs = lambda0_sq / dOmega0_sq;
    const double rhs = Omega1_sq - dOmega1_sq;
    return std::abs(lhs - rhs) / std::abs(lhs);
}

// ------------------------------- quadrature ---------------------------------

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 31>;

struct QuadResult {
    double value{0.0};
    double error{0.0};
    double l1{0.0};
};

// Sorted interior breakpoints of the integrand structure within (a, b)
std::vector<double> segment_points(const SpectralDensity& sd, double a, double b) {
    std::vector<double> pts{a, b};
    if (const auto pk = sd.peak()) {
        const double c = pk->first, w = pk->second;
        for (double x : {c - 10 * w, c - 2 * w, c, c + 2 * w, c + 10 * w})
            if (x > a && x < b) pts.push_back(x);
    }
    std::sort(pts.begin(), pts.end());
    return pts;
}

template <typename F>
QuadResult integrate_adaptive(F&& f, const SpectralDensity& sd, double a, double b,
                              const QuadratureOptions& opts) {
    QuadResult out;
    if (!(b > a)) return out;
    for (const auto pts = segment_points(sd, a, b); true;) {
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            double err = 0.0, l1 = 0.0;
            out.value += GK::integrate(f, pts[i], pts[i + 1],
                                       static_cast<unsigned>(opts.max_depth),
                                       opts.rel_tol, &err, &l1);
            out.error += err;
            out.l1 += l1;
        }
        break;
    }
    return out;
}

void check_quadrature(const QuadResult& q, const QuadratureOptions& opts,
                      const char* what) {
    const double scale = std::max(std::abs(q.value), 1e-3 * q.l1) + 1e-300;
    if (q.error > 100.0 * opts.rel_tol * scale)
        throw QuadratureFail(std::string(what) + ": adaptive quadrature did not meet tolerance");
}

double tabulated_moment(const Tabulated& t, int power) {
    // trapezoid over the grid plus the linear-through-origin segment
    if (t.omega.size() < 2) throw QuadratureFail("tabulated moment: need at least 2 points");
    auto f = [&](std::size_t i) { return std::pow(t.omega[i], power) * t.J[i]; };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < t.omega.size(); ++i)
        acc += 0.5 * (f(i) + f(i + 1)) * (t.omega[i + 1] - t.omega[i]);
    // below the first node J = (J1/ω1)·ω, so ∫ ω^p J dω = J1 ω1^{p+1}/(p+2)
    acc += t.J.front() * std::pow(t.omega.front(), power + 1) / (power + 2);
    return acc;
}

} // namespace

RCParameters moments_basic(const SpectralDensity& sd, const QuadratureOptions& opts) {
    RCParameters p;
    if (std::holds_alternative<FlatWork>(sd.family()))
        throw QuadratureFail("moments: the flat work density has no finite moments");

    if (const auto* tab = std::get_if<Tabulated>(&sd.family())) {
        p.dOmega0_sq = (2.0 / M_PI) * tabulated_moment(*tab, -1);
        p.lambda0_sq = (2.0 / M_PI) * tabulated_moment(*tab, 1);
        if (p.lambda0_sq > 0)
            p.Omega1_sq = (2.0 / (M_PI * p.lambda0_sq)) * tabulated_moment(*tab, 3);
    } else {
        const double hi = sd.integration_upper();
        auto q_m1 = integrate_adaptive([&](double w) { return sd.positive_value(w) / w; },
                                       sd, 0.0, hi, opts);
        auto q_p1 = integrate_adaptive([&](double w) { return w * sd.positive_value(w); },
                                       sd, 0.0, hi, opts);
        auto q_p3 = integrate_adaptive([&](double w) { return w * w * w * sd.positive_value(w); },
                                       sd, 0.0, hi, opts);
        check_quadrature(q_m1, opts, "moments(J/w)");
        check_quadrature(q_p1, opts, "moments(wJ)");
        check_quadrature(q_p3, opts, "moments(w3J)");
        p.dOmega0_sq = (2.0 / M_PI) * q_m1.value;
        p.lambda0_sq = (2.0 / M_PI) * q_p1.value;
        if (p.lambda0_sq > 0)
            p.Omega1_sq = (2.0 / (M_PI * p.lambda0_sq)) * q_p3.value;
    }

    if (!(p.dOmega0_sq > 0.0) || !(p.lambda0_sq > 0.0) || !(p.Omega1_sq > 0.0) ||
        !std::isfinite(p.dOmega0_sq) || !std::isfinite(p.lambda0_sq) ||
        !std::isfinite(p.Omega1_sq))
        throw NonPositiveMoment("moments: a spectral moment is non-positive or non-finite");

    p.physical_rc_freq = std::sqrt(p.lambda0_sq / p.dOmega0_sq);
    return p;
}

RCParameters moments(const SpectralDensity& sd, const MapOptions& opts) {
    RCParameters p = moments_basic(sd, opts.quad);
    const SpectralDensity mapped = map_sd(sd, opts);
    p.dOmega1_sq = tabulated_dOmega_sq(mapped);
    return p;
}

CauchyBoundaryValue cauchy_boundary(const SpectralDensity& sd, double omega,
                                    const QuadratureOptions& opts) {
    if (!sd.mappable())
        throw QuadratureFail("cauchy_boundary: Cauchy transform undefined for the flat density");
    const double upper = sd.support_max();
    if (!(omega > 0.0) || !(omega < upper) || !(sd.positive_value(omega) > 0.0))
        throw Error("cauchy_boundary: frequency outside the open support (0, omegaR)");

    // One-sided reduction of (1/π) P∫_{-∞}^{∞} J(ω′)/(ω′−ω) dω′ using the
    // antisymmetric extension: (2/π) P∫_0^Ω ω′J(ω′)/(ω′²−ω²) dω′ with the pole
    // factored as f(ω′)/(ω′−ω), f(ω′) = ω′J(ω′)/(ω′+ω).
    auto f = [&](double x) { return x * sd.positive_value(x) / (x + omega); };

    const double hi = (std::isfinite(upper)) ? upper : sd.integration_upper();
    const double delta = 0.5 * std::min(omega, hi - omega);

    auto outer_left = integrate_adaptive([&](double x) { return f(x) / (x - omega); },
                                         sd, 0.0, omega - delta, opts);
    auto outer_right = integrate_adaptive([&](double x) { return f(x) / (x - omega); },
                                          sd, omega + delta, hi, opts);
    check_quadrature(outer_left, opts, "cauchy outer");
    check_quadrature(outer_right, opts, "cauchy outer");
    const double outer = outer_left.value + outer_right.value;

    // Excised window, written symmetrically: ∫_{ε<|u|<δ} f(ω+u)/u du
    auto window = [&](double eps) {
        auto g = [&](double u) { return (f(omega + u) - f(omega - u)) / u; };
        double err = 0.0, l1 = 0.0;
        const double v = GK::integrate(g, eps, delta, static_cast<unsigned>(opts.max_depth),
                                       opts.rel_tol, &err, &l1);
        return QuadResult{v, err, l1};
    };

    // Richardson extrapolation of the excision radius: the symmetric-excision
    // error is c1·ε + c3·ε³, so two halvings remove both leading orders.
    const double eps0 = delta / 8.0;
    const auto w0 = window(eps0);
    const auto w1 = window(eps0 / 2.0);
    const auto w2 = window(eps0 / 4.0);
    const double I0 = outer + w0.value;
    const double I1 = outer + w1.value;
    const double I2 = outer + w2.value;
    const double B1 = 2.0 * I1 - I0;
    const double C1 = 2.0 * I2 - I1;
    const double R = (8.0 * C1 - B1) / 7.0;

    const double scale =
        std::max({std::abs(R), 1e-3 * (outer_left.l1 + outer_right.l1 + w2.l1)}) + 1e-300;
    if (std::abs(C1 - B1) > 1000.0 * opts.rel_tol * scale)
        throw QuadratureFail("cauchy_boundary: excision limit did not converge");

    CauchyBoundaryValue out;
    out.omega = omega;
    out.re = (2.0 / M_PI) * R;
    out.im = sd.value(omega);
    return out;
}

namespace {

std::vector<double> build_map_grid(const SpectralDensity& sd, const MapOptions& opts) {
    const double upper = std::isfinite(sd.support_max()) ? sd.support_max()
                                                         : sd.integration_upper() / 6.0;
    const double hi = upper * (1.0 - 1e-6);
    const double scale = sd.peak() ? sd.peak()->first : upper / 10.0;
    const double lo =
        opts.grid_lo > 0.0 ? opts.grid_lo : std::min(scale * 1e-4, upper * 1e-6);

    const int n = std::max(16, opts.n_points);
    const int n_peak = sd.peak() ? n / 4 : 0;
    const int n_log = n / 2;
    const int n_lin = n - n_log - n_peak;

    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n_log; ++i)
        grid.push_back(lo * std::pow(hi / lo, double(i) / double(n_log - 1)));
    for (int i = 0; i < n_lin; ++i)
        grid.push_back(lo + (hi - lo) * double(i) / double(n_lin - 1));
    if (n_peak > 0) {
        const auto [c, w] = *sd.peak();
        const double a = std::max(lo, c - 12.0 * w);
        const double b = std::min(hi, c + 12.0 * w);
        for (int i = 0; i < n_peak; ++i)
            grid.push_back(a + (b - a) * double(i) / double(n_peak - 1));
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return b - a < 1e-14 * b; }),
               grid.end());
    return grid;
}

} // namespace

SpectralDensity map_sd(const SpectralDensity& sd, const MapOptions& opts) {
    if (!sd.mappable())
        throw QuadratureFail("map_sd: the flat work density cannot be mapped");
    if (const auto* tab = std::get_if<Tabulated>(&sd.family())) {
        for (std::size_t i = 0; i < tab->J.size(); ++i)
            if (!(tab->J[i] > 0.0))
                throw DivisionNearZero("map_sd: input density vanishes inside its support");
    }

    RCParameters base = moments_basic(sd, opts.quad);
    const double lam2 = base.lambda0_sq;

    const auto grid = build_map_grid(sd, opts);
    Tabulated out;
    out.omega = grid;
    out.J.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto cb = cauchy_boundary(sd, grid[i], opts.quad);
        const double den = cb.abs_sq();
        if (!(den > 1e-280) || !std::isfinite(den))
            throw DivisionNearZero("map_sd: |W0+(w)|^2 underflow inside the support");
        const double j1 = lam2 * sd.positive_value(grid[i]) / den;
        if (!std::isfinite(j1))
            throw DivisionNearZero("map_sd: mapped value is non-finite");
        out.J[i] = j1;
    }
    return SpectralDensity(std::move(out));
}

double tabulated_dOmega_sq(const SpectralDensity& sd) {
    const auto* tab = std::get_if<Tabulated>(&sd.family());
    if (tab == nullptr)
        throw DimensionMismatch("tabulated_dOmega_sq: density is not tabulated");
    return (2.0 / M_PI) * tabulated_moment(*tab, -1);
}

CauchyBoundaryValue lorentzian_cauchy_closed_form(const LorentzianHardCutoff& p,
                                                  double omega) {
    // W0⁺(ω) = d0² / (ω0² − ω² − iγω) for the cutoff-free Lorentzian
    const double a = p.omega0 * p.omega0 - omega * omega;
    const double den = a * a + p.gamma * p.gamma * omega * omega;
    CauchyBoundaryValue out;
    out.omega = omega;
    out.re = p.d0 * p.d0 * a / den;
    out.im = p.d0 * p.d0 * p.gamma * omega / den;
    return out;
}

double lorentzian_mapped_closed_form(const LorentzianHardCutoff& p, double omega) {
    return (omega >= p.omegaR || omega <= 0.0) ? 0.0 : p.gamma * omega;
}

SpectralDensity read_tabulated_csv(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open: " + path);
    Tabulated tab;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b)) continue;
        try {
            const double w = std::stod(a);
            const double j = std::stod(b);
            tab.omega.push_back(w);
            tab.J.push_back(j);
        } catch (const std::exception&) {
            continue; // header line
        }
    }
    if (tab.omega.size() < 2) throw IoError("tabulated CSV has fewer than 2 rows: " + path);
    if (!std::is_sorted(tab.omega.begin(), tab.omega.end()))
        throw IoError("tabulated CSV frequencies are not ascending: " + path);
    return SpectralDensity(std::move(tab));
}

void write_tabulated_csv(const std::string& path, const SpectralDensity& sd) {
    const auto* tab = std::get_if<Tabulated>(&sd.family());
    if (tab == nullptr)
        throw DimensionMismatch("write_tabulated_csv: density is not tabulated");
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open for writing: " + path);
    os << "omega,J\n";
    for (std::size_t i = 0; i < tab->omega.size(); ++i)
        os << format_double(tab->omega[i]) << ',' << format_double(tab->J[i]) << '\n';
    if (!os) throw IoError("write failed: " + path);
}

} // namespace rcqt
