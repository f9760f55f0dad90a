#include "scenario.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "spherent/errors.hpp"

namespace spherent::cli {

namespace {

constexpr std::array<std::pair<const char*, Command>, 8> kCommands{{
    {"resonances", Command::Resonances},
    {"rates", Command::Rates},
    {"dynamics", Command::Dynamics},
    {"entangle", Command::Entangle},
    {"figure2", Command::Figure2},
    {"figure3", Command::Figure3},
    {"figure4", Command::Figure4},
    {"figure5", Command::Figure5},
}};

bool is_figure(Command c) {
    return c == Command::Figure2 || c == Command::Figure3 || c == Command::Figure4 || c == Command::Figure5;
}

std::optional<Axis> axis_from_string(const std::string& s) {
    if (s == "theta") return Axis::Theta;
    if (s == "omega") return Axis::Omega;
    if (s == "delta_r") return Axis::DeltaR;
    if (s == "delta_omega_c") return Axis::DeltaOmegaC;
    return std::nullopt;
}

void read_sphere(const Config& cfg, Scenario& s) {
    s.sphere.material.omega_p = cfg.get_double("material.omega_p", s.sphere.material.omega_p);
    s.sphere.material.gamma = cfg.get_double("material.gamma", s.sphere.material.gamma);
    s.sphere.radius = cfg.get_double("sphere.radius", s.sphere.radius);
    s.sphere.delta_r = cfg.get_double("sphere.delta_r", s.sphere.delta_r);
    s.sphere.theta = cfg.get_double("sphere.theta", s.sphere.theta);
    try {
        s.sphere.validate();
    } catch (const spherent::Error& e) {
        throw ConfigError(cfg.where("sphere.radius") + "invalid sphere: " + e.what());
    }
}

void read_search(const Config& cfg, Scenario& s) {
    s.search_lo = cfg.get_double("search.omega_lo", s.search_lo);
    s.search_hi = cfg.get_double("search.omega_hi", s.search_hi);
    s.l_lo = cfg.get_int("search.l_lo", s.l_lo);
    s.l_hi = cfg.get_int("search.l_hi", s.l_hi);
    if (!(s.search_lo < s.search_hi) || s.search_lo <= 0.0) {
        throw ConfigError(cfg.where("search.omega_lo") + "search window must satisfy 0 < omega_lo < omega_hi");
    }
    if (s.l_lo < 1 || s.l_lo > s.l_hi) {
        throw ConfigError(cfg.where("search.l_lo") + "search orders must satisfy 1 <= l_lo <= l_hi");
    }
}

void read_sweep(const Config& cfg, Scenario& s, bool required) {
    const bool any = cfg.has("sweep.axis") || cfg.has("sweep.lo") || cfg.has("sweep.hi") || cfg.has("sweep.count");
    if (!any && !required) {
        return;
    }
    SweepSpec sw = s.sweep.value_or(SweepSpec{});
    if (cfg.has("sweep.axis") || !s.sweep) {
        const std::string name = cfg.get_string("sweep.axis");
        const auto axis = axis_from_string(name);
        if (!axis) {
            throw ConfigError(cfg.where("sweep.axis") + "sweep.axis must be theta, omega, delta_r or delta_omega_c");
        }
        sw.axis = *axis;
    }
    sw.lo = s.sweep && !cfg.has("sweep.lo") ? sw.lo : cfg.get_double("sweep.lo");
    sw.hi = s.sweep && !cfg.has("sweep.hi") ? sw.hi : cfg.get_double("sweep.hi");
    sw.count = s.sweep && !cfg.has("sweep.count") ? sw.count : cfg.get_int("sweep.count");
    if (!(sw.lo < sw.hi)) {
        throw ConfigError(cfg.where("sweep.lo") + "sweep bounds must satisfy lo < hi");
    }
    if (sw.count < 2) {
        throw ConfigError(cfg.where("sweep.count") + "sweep.count must be >= 2");
    }
    s.sweep = sw;
}

void read_coupling(const Config& cfg, Scenario& s) {
    const std::string src = cfg.get_string("strong.source", "sphere");
    if (src == "sphere") {
        s.strong_source = StrongSource::Sphere;
    } else if (src == "explicit") {
        s.strong_source = StrongSource::Explicit;
    } else {
        throw ConfigError(cfg.where("strong.source") + "strong.source must be sphere or explicit");
    }

    CouplingParams& c = s.coupling;
    c.dipole_shift = cfg.get_double("coupling.dipole_shift", c.dipole_shift);
    if (s.strong_source == StrongSource::Explicit) {
        c.gamma31_aa = cfg.get_double("coupling.gamma31_aa");
        c.gamma31_ab = cfg.get_double("coupling.gamma31_ab", 0.0);
        c.gamma32_aa = cfg.get_double("coupling.gamma32_aa", 1.0);
        c.gamma32_ab = cfg.get_double("coupling.gamma32_ab", 0.0);
        c.delta_omega_c = cfg.get_double("coupling.delta_omega_c");
        c.detuning = cfg.get_double("coupling.detuning", 0.0);
        try {
            c.validate();
        } catch (const spherent::Error& e) {
            throw ConfigError(cfg.where("coupling.gamma31_aa") + "invalid coupling: " + e.what());
        }
    } else {
        read_sphere(cfg, s);
        read_search(cfg, s);
        s.rel_tol = cfg.get_double("rates.rel_tol", s.rel_tol);
        if (cfg.has("strong.omega")) {
            const std::string v = cfg.get_string("strong.omega");
            if (v != "resonance:auto") {
                s.strong_omega = cfg.get_double("strong.omega");
            }
        }
        s.gamma0 = cfg.get_double("units.gamma0");
        if (!(s.gamma0 > 0.0)) {
            throw ConfigError(cfg.where("units.gamma0") + "units.gamma0 must be > 0");
        }
        const bool has_weak_rates = cfg.has("weak.gamma_aa") || cfg.has("weak.gamma_ab");
        if (cfg.has("weak.omega") == has_weak_rates) {
            throw ConfigError(cfg.where("weak.omega") +
                              "give either weak.omega (with weak.anchor) or weak.gamma_aa and weak.gamma_ab");
        }
        if (has_weak_rates) {
            s.weak_gamma_aa = cfg.get_double("weak.gamma_aa");
            s.weak_gamma_ab = cfg.get_double("weak.gamma_ab");
            if (!(s.weak_gamma_aa > 0.0) || std::abs(s.weak_gamma_ab) > s.weak_gamma_aa) {
                throw ConfigError(cfg.where("weak.gamma_aa") + "weak rates need gamma_aa > 0 and |gamma_ab| <= gamma_aa");
            }
        } else {
            s.weak_omega = cfg.get_double("weak.omega");
            if (!cfg.has("weak.anchor")) {
                throw ConfigError(cfg.where("weak.omega") +
                                  "weak.anchor is required when the weak rates come from the sphere");
            }
            s.weak_anchor = cfg.get_double("weak.anchor");
            if (!(s.weak_anchor > 0.0) || !(*s.weak_omega > 0.0)) {
                throw ConfigError(cfg.where("weak.anchor") + "weak.omega and weak.anchor must be > 0");
            }
        }
    }

    const std::string place = cfg.get_string("drive.placement", "site_of_A");
    if (place == "site_of_A") {
        s.placement = DrivePlacement::SiteOfA;
    } else if (place == "equidistant") {
        s.placement = DrivePlacement::Equidistant;
        if (s.strong_source == StrongSource::Explicit) {
            s.drive_cross = cfg.get_double("drive.gamma_cross");
            s.drive_rates.gamma_dd = cfg.get_double("drive.gamma_dd", c.gamma31_aa);
        }
    } else if (place == "explicit") {
        s.placement = DrivePlacement::Explicit;
        s.drive_rates.gamma_dd = cfg.get_double("drive.gamma_dd");
        s.drive_rates.gamma_ad = cfg.get_double("drive.gamma_ad");
        s.drive_rates.gamma_bd = cfg.get_double("drive.gamma_bd");
    } else {
        throw ConfigError(cfg.where("drive.placement") + "drive.placement must be site_of_A, equidistant or explicit");
    }
    s.ratio_min = cfg.get_double("regime.ratio_min", s.ratio_min);
    if (!(s.ratio_min > 1.0)) {
        throw ConfigError(cfg.where("regime.ratio_min") + "regime.ratio_min must be > 1");
    }
}

void check_axis(const Config& cfg, const Scenario& s, std::initializer_list<Axis> allowed) {
    for (Axis a : allowed) {
        if (s.sweep->axis == a) {
            return;
        }
    }
    throw ConfigError(cfg.where("sweep.axis") + "sweep.axis '" + to_string(s.sweep->axis) + "' is not valid for " +
                      to_string(s.command));
}

}  // namespace

std::optional<Command> command_from_string(const std::string& name) {
    for (const auto& [n, c] : kCommands) {
        if (name == n) {
            return c;
        }
    }
    return std::nullopt;
}

const char* to_string(Command c) {
    for (const auto& [n, cmd] : kCommands) {
        if (cmd == c) {
            return n;
        }
    }
    return "?";
}

const char* to_string(Axis a) {
    switch (a) {
        case Axis::Theta: return "theta";
        case Axis::Omega: return "omega";
        case Axis::DeltaR: return "delta_r";
        case Axis::DeltaOmegaC: return "delta_omega_c";
    }
    return "?";
}

std::vector<double> SweepSpec::points() const {
    std::vector<double> x(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        // endpoints exact
        x[static_cast<std::size_t>(i)] =
            (i == count - 1) ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    return x;
}

std::string format_number(double v) {
    if (v == 0.0) {
        return "0";  // folds -0
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

Scenario figure_preset(Command command) {
    Scenario s;
    s.command = command;
    s.sphere.material = {0.5, 1e-6};
    s.sphere.radius = 10.0;
    s.sphere.delta_r = 0.14;
    s.sphere.theta = std::numbers::pi;
    s.omega = 1.0501;
    switch (command) {
        case Command::Figure2: s.sweep = SweepSpec{Axis::Theta, 0.0, std::numbers::pi, 181}; break;
        case Command::Figure3: s.sweep = SweepSpec{Axis::Omega, 1.0495, 1.0507, 1201}; break;
        case Command::Figure4: s.sweep = SweepSpec{Axis::Omega, 0.80, 0.84, 2001}; break;
        case Command::Figure5: s.sweep = SweepSpec{Axis::DeltaR, 0.005, 3.0, 300}; break;
        default: throw ConfigError("not a figure command");
    }
    return s;
}

Scenario resolve_scenario(Command command, const Config& cfg) {
    Scenario s = is_figure(command) ? figure_preset(command) : Scenario{};
    s.command = command;
    switch (command) {
        case Command::Resonances:
            read_sphere(cfg, s);
            read_search(cfg, s);
            break;
        case Command::Rates:
        case Command::Figure2:
        case Command::Figure3:
        case Command::Figure4:
        case Command::Figure5:
            read_sphere(cfg, s);
            s.omega = cfg.get_double("rates.omega", s.omega);
            s.rel_tol = cfg.get_double("rates.rel_tol", s.rel_tol);
            read_sweep(cfg, s, command == Command::Rates);
            check_axis(cfg, s, {Axis::Theta, Axis::Omega, Axis::DeltaR});
            break;
        case Command::Dynamics:
            read_coupling(cfg, s);
            s.solver = cfg.get_string("dynamics.solver", s.solver);
            if (s.solver != "closed" && s.solver != "volterra") {
                throw ConfigError(cfg.where("dynamics.solver") + "dynamics.solver must be closed or volterra");
            }
            s.t_end = cfg.find_double("dynamics.t_end");
            s.dt = cfg.find_double("dynamics.dt");
            if ((s.t_end && !(*s.t_end > 0.0)) || (s.dt && !(*s.dt > 0.0))) {
                throw ConfigError(cfg.where("dynamics.t_end") + "dynamics.t_end and dynamics.dt must be > 0");
            }
            break;
        case Command::Entangle:
            read_coupling(cfg, s);
            read_sweep(cfg, s, true);
            if (s.strong_source == StrongSource::Explicit) {
                check_axis(cfg, s, {Axis::DeltaOmegaC});
            } else {
                check_axis(cfg, s, {Axis::Theta, Axis::Omega, Axis::DeltaR});
            }
            break;
    }
    if (s.rel_tol <= 0.0 || s.rel_tol >= 1e-3) {
        throw ConfigError(cfg.where("rates.rel_tol") + "rates.rel_tol must lie in (0, 1e-3)");
    }
    s.output = cfg.get_string("output.path", "");
    cfg.reject_unused();
    return s;
}

std::vector<std::pair<std::string, std::string>> Scenario::echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    // shortest round-trip form, so the echo re-parses to identical doubles
    auto num = [&](const char* k, double v) {
        char buf[40];
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        out.emplace_back(k, std::string(buf, r.ptr));
    };
    const bool sphere_used = command != Command::Dynamics && command != Command::Entangle
                                 ? true
                                 : strong_source == StrongSource::Sphere;
    if (sphere_used) {
        num("material.omega_p", sphere.material.omega_p);
        num("material.gamma", sphere.material.gamma);
        num("sphere.radius", sphere.radius);
        num("sphere.delta_r", sphere.delta_r);
        num("sphere.theta", sphere.theta);
    }
    switch (command) {
        case Command::Resonances:
            num("search.omega_lo", search_lo);
            num("search.omega_hi", search_hi);
            out.emplace_back("search.l_lo", std::to_string(l_lo));
            out.emplace_back("search.l_hi", std::to_string(l_hi));
            break;
        case Command::Dynamics:
        case Command::Entangle:
            out.emplace_back("strong.source", strong_source == StrongSource::Sphere ? "sphere" : "explicit");
            if (strong_source == StrongSource::Explicit) {
                num("coupling.gamma31_aa", coupling.gamma31_aa);
                num("coupling.gamma31_ab", coupling.gamma31_ab);
                num("coupling.gamma32_aa", coupling.gamma32_aa);
                num("coupling.gamma32_ab", coupling.gamma32_ab);
                num("coupling.delta_omega_c", coupling.delta_omega_c);
                num("coupling.detuning", coupling.detuning);
            } else {
                num("rates.rel_tol", rel_tol);
                num("search.omega_lo", search_lo);
                num("search.omega_hi", search_hi);
                out.emplace_back("search.l_lo", std::to_string(l_lo));
                out.emplace_back("search.l_hi", std::to_string(l_hi));
                if (strong_omega) {
                    num("strong.omega", *strong_omega);
                } else {
                    out.emplace_back("strong.omega", "resonance:auto");
                }
                num("units.gamma0", gamma0);
                if (weak_omega) {
                    num("weak.omega", *weak_omega);
                    num("weak.anchor", weak_anchor);
                } else {
                    num("weak.gamma_aa", weak_gamma_aa);
                    num("weak.gamma_ab", weak_gamma_ab);
                }
            }
            num("coupling.dipole_shift", coupling.dipole_shift);
            switch (placement) {
                case DrivePlacement::SiteOfA: out.emplace_back("drive.placement", "site_of_A"); break;
                case DrivePlacement::Equidistant:
                    out.emplace_back("drive.placement", "equidistant");
                    if (strong_source == StrongSource::Explicit) {
                        num("drive.gamma_dd", drive_rates.gamma_dd);
                        num("drive.gamma_cross", drive_cross);
                    }
                    break;
                case DrivePlacement::Explicit:
                    out.emplace_back("drive.placement", "explicit");
                    num("drive.gamma_dd", drive_rates.gamma_dd);
                    num("drive.gamma_ad", drive_rates.gamma_ad);
                    num("drive.gamma_bd", drive_rates.gamma_bd);
                    break;
            }
            num("regime.ratio_min", ratio_min);
            if (command == Command::Dynamics) {
                out.emplace_back("dynamics.solver", solver);
                if (t_end) num("dynamics.t_end", *t_end);
                if (dt) num("dynamics.dt", *dt);
            }
            break;
        default:
            num("rates.omega", omega);
            num("rates.rel_tol", rel_tol);
            break;
    }
    if (sweep) {
        out.emplace_back("sweep.axis", to_string(sweep->axis));
        num("sweep.lo", sweep->lo);
        num("sweep.hi", sweep->hi);
        out.emplace_back("sweep.count", std::to_string(sweep->count));
    }
    if (!output.empty()) {
        out.emplace_back("output.path", output);
    }
    return out;
}

}  // namespace spherent::cli
