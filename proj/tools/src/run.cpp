#include "run.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "spherent/errors.hpp"
#include "spherent/microsphere.hpp"
#include "spherent/steady_state.hpp"
#include "sweep.hpp"

namespace spherent::cli {

namespace {

using Row = std::vector<std::string>;

std::string num(double v) { return format_number(v); }

/// Runs f for point i, re-labelling library errors with the point.
template <class F>
auto at_point(const Scenario& s, std::size_t i, double x, F&& f) {
    try {
        return f();
    } catch (const spherent::Error& e) {
        std::string where = "sweep point " + std::to_string(i);
        if (s.sweep) {
            where += " (" + std::string(to_string(s.sweep->axis)) + " = " + num(x) + ")";
        }
        throw NumericalFailure(where + ": " + e.what());
    }
}

std::vector<double> sweep_points(const Scenario& s) {
    return s.sweep ? s.sweep->points() : std::vector<double>{0.0};
}

SphereSystem sphere_at(const Scenario& s, double x) {
    SphereSystem sys = s.sphere;
    if (!s.sweep) {
        return sys;
    }
    switch (s.sweep->axis) {
        case Axis::Theta: sys.theta = x; break;
        case Axis::DeltaR: sys.delta_r = x; break;
        default: break;
    }
    return sys;
}

Table rates_table(const Scenario& s, unsigned threads) {
    const auto xs = sweep_points(s);
    RateOptions opt;
    opt.rel_tol = s.rel_tol;
    Table t;
    t.header = {to_string(s.sweep->axis), "gamma_aa", "gamma_ab", "gamma_plus", "gamma_minus", "terms"};
    t.rows = parallel_map(xs.size(), threads, [&](std::size_t i) {
        return at_point(s, i, xs[i], [&] {
            const SphereSystem sys = sphere_at(s, xs[i]);
            const double omega = s.sweep->axis == Axis::Omega ? xs[i] : s.omega;
            const CollectiveRates r = collective_rates(sys, omega, opt);
            return Row{num(xs[i]), num(r.gamma_aa), num(r.gamma_ab), num(r.plus()), num(r.minus()),
                       std::to_string(r.terms)};
        });
    });
    return t;
}

Table resonances_table(const Scenario& s) {
    const ResonanceSearch found = at_point(s, 0, 0.0, [&] {
        return find_resonances(s.sphere, s.search_lo, s.search_hi, s.l_lo, s.l_hi);
    });
    Table t;
    t.header = {"omega_c", "delta_omega_c", "l", "kind", "quality"};
    for (const Resonance& r : found.resonances) {
        t.rows.push_back({num(r.omega_c), num(r.delta_omega_c), std::to_string(r.l), to_string(r.kind),
                          num(r.omega_c / (2.0 * r.delta_omega_c))});
    }
    for (const CandidateFailure& f : found.failures) {
        t.notes.push_back("candidate l = " + std::to_string(f.l) + " near omega = " + num(f.omega_start) +
                          " rejected: " + f.reason);
    }
    return t;
}

/// The resonance that drives the strong transition.
Resonance select_resonance(const Scenario& s) {
    const ResonanceSearch found = at_point(s, 0, 0.0, [&] {
        return find_resonances(s.sphere, s.search_lo, s.search_hi, s.l_lo, s.l_hi);
    });
    if (found.resonances.empty()) {
        throw NumericalFailure("no field resonance in search window [" + num(s.search_lo) + ", " +
                               num(s.search_hi) + "]");
    }
    auto key = [&](const Resonance& r) {
        // nearest to the transition, else the sharpest
        return s.strong_omega ? std::abs(r.omega_c - *s.strong_omega) : r.delta_omega_c;
    };
    return *std::min_element(found.resonances.begin(), found.resonances.end(),
                             [&](const Resonance& a, const Resonance& b) { return key(a) < key(b); });
}

class PointBuilder {
public:
    explicit PointBuilder(const Scenario& s) : s_(s) {
        if (s.strong_source == StrongSource::Sphere) {
            res_ = select_resonance(s);
        }
    }

    [[nodiscard]] const Resonance& resonance() const { return res_; }

    [[nodiscard]] PointSetup at(double x) const {
        return s_.strong_source == StrongSource::Sphere ? from_sphere(x) : from_explicit(x);
    }

private:
    PointSetup from_explicit(double x) const {
        CouplingParams p = s_.coupling;
        double scale = 1.0;
        if (s_.sweep && s_.sweep->axis == Axis::DeltaOmegaC) {
            // keep every Rabi frequency fixed while the resonance broadens
            scale = p.delta_omega_c / x;
            p.delta_omega_c = x;
            p.gamma31_aa *= scale;
            p.gamma31_ab *= scale;
        }
        p.validate();
        return {p, drive_for(p, scale * s_.drive_rates.gamma_dd, scale * s_.drive_cross,
                             {scale * s_.drive_rates.gamma_dd, scale * s_.drive_rates.gamma_ad,
                              scale * s_.drive_rates.gamma_bd})};
    }

    PointSetup from_sphere(double x) const {
        RateOptions opt;
        opt.rel_tol = s_.rel_tol;
        const SphereSystem sys = sphere_at(s_, x);
        double omega31 = s_.strong_omega.value_or(res_.omega_c);
        if (s_.sweep && s_.sweep->axis == Axis::Omega) {
            omega31 = x;
        }
        const CollectiveRates r31 = collective_rates(sys, res_.omega_c, opt);
        double g32_aa = s_.weak_gamma_aa;
        double g32_ab = s_.weak_gamma_ab;
        if (s_.weak_omega) {
            const CollectiveRates r32 = collective_rates(sys, *s_.weak_omega, opt);
            g32_aa = s_.weak_anchor * r32.gamma_aa;
            g32_ab = s_.weak_anchor * r32.gamma_ab;
        }
        // dynamics runs in units of gamma32_aa
        const double unit = g32_aa;
        const double unit_wt = unit * s_.gamma0;
        CouplingParams p;
        p.gamma31_aa = r31.gamma_aa / unit;
        p.gamma31_ab = r31.gamma_ab / unit;
        p.gamma32_aa = 1.0;
        p.gamma32_ab = g32_ab / unit;
        p.delta_omega_c = res_.delta_omega_c / unit_wt;
        p.detuning = (res_.omega_c - omega31) / unit_wt;
        p.dipole_shift = s_.coupling.dipole_shift;
        p.validate();
        double cross = 0.0;
        if (s_.placement == DrivePlacement::Equidistant) {
            SphereSystem side = sys;
            side.theta = 0.5 * std::numbers::pi;
            cross = collective_rate(side, res_.omega_c, false, opt) / unit;
        }
        const DriveRates given{s_.drive_rates.gamma_dd / unit, s_.drive_rates.gamma_ad / unit,
                               s_.drive_rates.gamma_bd / unit};
        return {p, drive_for(p, p.gamma31_aa, cross, given)};
    }

    DriveSpec drive_for(const CouplingParams& p, double gamma_dd, double cross, const DriveRates& given) const {
        switch (s_.placement) {
            case DrivePlacement::SiteOfA: return prepare_drive(drive_at_site_of_a(p), p.delta_omega_c);
            case DrivePlacement::Equidistant: return prepare_drive(drive_equidistant(gamma_dd, cross), p.delta_omega_c);
            case DrivePlacement::Explicit: return prepare_drive(given, p.delta_omega_c);
        }
        return {};
    }

    const Scenario& s_;
    Resonance res_;
};

double decay_horizon(const CouplingParams& p) { return 1.0 / std::min(p.delta_omega_c, 0.5 * p.gamma32_aa); }

std::vector<std::string> setup_notes(const PointBuilder& b, const Scenario& s, const PointSetup& ps) {
    std::vector<std::string> notes;
    if (s.strong_source == StrongSource::Sphere) {
        const Resonance& r = b.resonance();
        notes.push_back("resonance omega_c = " + num(r.omega_c) + " delta_omega_c = " + num(r.delta_omega_c) +
                        " l = " + std::to_string(r.l) + " kind = " + to_string(r.kind));
    }
    if (!s.sweep) {
        const CouplingParams& p = ps.params;
        notes.push_back("gamma31_aa = " + num(p.gamma31_aa) + " gamma31_ab = " + num(p.gamma31_ab) +
                        " gamma32_ab = " + num(p.gamma32_ab) + " delta_omega_c = " + num(p.delta_omega_c) +
                        " detuning = " + num(p.detuning));
        notes.push_back("g_plus = " + num(rabi_g(p, Branch::Plus)) + " g_minus = " + num(rabi_g(p, Branch::Minus)) +
                        " regime = " + to_string(regime_classify(p, s.ratio_min)));
        notes.push_back("f_plus_0 = " + num(ps.drive.f_plus_0.real()) + " " + num(ps.drive.f_plus_0.imag()) +
                        "i f_minus_0 = " + num(ps.drive.f_minus_0.real()) + " " + num(ps.drive.f_minus_0.imag()) + "i");
    }
    return notes;
}

Table dynamics_table(const Scenario& s) {
    const PointBuilder builder(s);
    const PointSetup ps = at_point(s, 0, 0.0, [&] { return builder.at(0.0); });
    const CouplingParams& p = ps.params;
    const double t_end = s.t_end.value_or(10.0 * decay_horizon(p));
    const double dt = s.dt.value_or(t_end / 2000.0);
    const auto times = uniform_times(t_end, dt);

    AmplitudeTrajectory traj;
    if (s.solver == "closed") {
        traj = at_point(s, 0, 0.0, [&] { return trajectory_closed(p, ps.drive, times); });
    } else {
        // inner step divides dt and meets the solver's precondition
        const double max_step = std::min(volterra_max_step(p, Branch::Plus), volterra_max_step(p, Branch::Minus));
        const auto sub = static_cast<std::size_t>(std::ceil(dt / max_step * (1.0 + 1e-12)));
        const double step = dt / static_cast<double>(sub);
        const double t_max = dt * static_cast<double>(times.size() - 1);
        const auto plus = at_point(s, 0, 0.0, [&] { return amplitude_volterra(p, ps.drive, Branch::Plus, t_max, step); });
        const auto minus = at_point(s, 0, 0.0, [&] { return amplitude_volterra(p, ps.drive, Branch::Minus, t_max, step); });
        traj.times = times;
        for (std::size_t i = 0; i < times.size(); ++i) {
            const std::size_t k = std::min(i * sub, plus.c_plus.size() - 1);
            traj.c_plus.push_back(plus.c_plus[k]);
            traj.c_minus.push_back(minus.c_minus[k]);
        }
    }
    Table t;
    t.notes = setup_notes(builder, s, ps);
    t.header = {"t", "c_plus_re", "c_plus_im", "c_minus_re", "c_minus_im", "pop_plus", "pop_minus"};
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const cplx cp = traj.c_plus[i];
        const cplx cm = traj.c_minus[i];
        t.rows.push_back({num(traj.times[i]), num(cp.real()), num(cp.imag()), num(cm.real()), num(cm.imag()),
                          num(std::norm(cp)), num(std::norm(cm))});
    }
    return t;
}

Table entangle_table(const Scenario& s, unsigned threads) {
    const PointBuilder builder(s);
    const auto xs = sweep_points(s);
    Table t;
    t.header = {to_string(s.sweep->axis), "gamma31_aa", "gamma31_ab", "gamma32_ab", "delta_omega_c", "detuning",
                "g_plus", "g_minus", "regime", "f_plus_re", "f_plus_im", "f_minus_re", "f_minus_im",
                "alpha_plus", "alpha_minus", "beta_re", "beta_im", "concurrence"};
    t.rows = parallel_map(xs.size(), threads, [&](std::size_t i) {
        return at_point(s, i, xs[i], [&] {
            const PointSetup ps = builder.at(xs[i]);
            const CouplingParams& p = ps.params;
            const double horizon = 40.0 * decay_horizon(p);
            const auto traj = trajectory_closed(p, ps.drive, uniform_times(horizon, horizon / 4000.0));
            const SteadyState ss = integrate_alpha_beta(traj, gamma32_pm(p));
            const double c = concurrence_paper(ss);
            return Row{num(xs[i]), num(p.gamma31_aa), num(p.gamma31_ab), num(p.gamma32_ab), num(p.delta_omega_c),
                       num(p.detuning), num(rabi_g(p, Branch::Plus)), num(rabi_g(p, Branch::Minus)),
                       to_string(regime_classify(p, s.ratio_min)), num(ps.drive.f_plus_0.real()),
                       num(ps.drive.f_plus_0.imag()), num(ps.drive.f_minus_0.real()), num(ps.drive.f_minus_0.imag()),
                       num(ss.alpha_plus), num(ss.alpha_minus), num(ss.beta.real()), num(ss.beta.imag()), num(c)};
        });
    });
    if (s.strong_source == StrongSource::Sphere) {
        t.notes = setup_notes(builder, s, PointSetup{});
    }
    return t;
}

}  // namespace

void write_csv(std::ostream& out, const Scenario& s, const Table& t) {
    out << "# spherent " << to_string(s.command) << '\n';
    for (const auto& [k, v] : s.echo()) {
        out << "# " << k << " = " << v << '\n';
    }
    for (const auto& n : t.notes) {
        out << "# note: " << n << '\n';
    }
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            out << (i ? "," : "") << cells[i];
        }
        out << '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) {
        line(r);
    }
}

Table execute(const Scenario& s, unsigned threads) {
    switch (s.command) {
        case Command::Resonances: return resonances_table(s);
        case Command::Dynamics: return dynamics_table(s);
        case Command::Entangle: return entangle_table(s, threads);
        default: return rates_table(s, threads);
    }
}

std::string run_to_string(Command command, const std::string& config_text, unsigned threads,
                          const std::string& source) {
    const Scenario s = resolve_scenario(command, Config::parse(config_text, source));
    std::ostringstream out;
    write_csv(out, s, execute(s, threads));
    return out.str();
}

int run(const RunRequest& req, std::ostream& out, std::ostream& err) {
    try {
        const auto command = command_from_string(req.command);
        if (!command) {
            throw ConfigError("unknown subcommand '" + req.command + "'");
        }
        const bool figure = *command == Command::Figure2 || *command == Command::Figure3 ||
                            *command == Command::Figure4 || *command == Command::Figure5;
        if (req.config_path.empty() && !figure) {
            throw ConfigError(std::string(to_string(*command)) + " needs --config");
        }
        const Config cfg = req.config_path.empty() ? Config::parse("", "<preset>") : Config::load(req.config_path);
        const Scenario s = resolve_scenario(*command, cfg);
        const Table t = execute(s, std::max(1u, req.threads));
        const std::string path = req.out_path.empty() ? s.output : req.out_path;
        if (path.empty()) {
            write_csv(out, s, t);
            out.flush();
        } else {
            std::ofstream file(path, std::ios::binary);
            if (!file) {
                throw ConfigError("cannot write output file '" + path + "'");
            }
            write_csv(file, s, t);
            if (!file) {
                throw ConfigError("failed writing output file '" + path + "'");
            }
        }
        return 0;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return 1;
    } catch (const NumericalFailure& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    } catch (const spherent::Error& e) {
        err << "numerical failure: " << e.what() << '\n';
        return 2;
    }
}

std::string csv_schema_help() {
    return R"(CSV output: '#' metadata lines echo the resolved scenario, then a header row.
  resonances  omega_c,delta_omega_c,l,kind,quality
  rates       <axis>,gamma_aa,gamma_ab,gamma_plus,gamma_minus,terms
  figure2-5   same columns as rates (figure2: theta, figure3/4: omega, figure5: delta_r)
  dynamics    t,c_plus_re,c_plus_im,c_minus_re,c_minus_im,pop_plus,pop_minus
  entangle    <axis>,gamma31_aa,gamma31_ab,gamma32_ab,delta_omega_c,detuning,g_plus,g_minus,
              regime,f_plus_re,f_plus_im,f_minus_re,f_minus_im,alpha_plus,alpha_minus,
              beta_re,beta_im,concurrence
Rates are in units of the free-space rate; dynamics and entangle columns are in
units of gamma32_aa. Exit status: 0 success, 1 config error, 2 numerical failure.)";
}

}  // namespace spherent::cli
