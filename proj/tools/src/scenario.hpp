#pragma once

// Resolved run description: every value a subcommand uses, defaults filled in.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "config.hpp"
#include "spherent/dynamics.hpp"
#include "spherent/microsphere.hpp"

namespace spherent::cli {

enum class Command { Resonances, Rates, Dynamics, Entangle, Figure2, Figure3, Figure4, Figure5 };

std::optional<Command> command_from_string(const std::string& name);
const char* to_string(Command c);

enum class Axis { Theta, Omega, DeltaR, DeltaOmegaC };

const char* to_string(Axis a);

struct SweepSpec {
    Axis axis = Axis::Theta;
    double lo = 0.0;
    double hi = 1.0;
    int count = 2;

    [[nodiscard]] std::vector<double> points() const;
};

enum class StrongSource { Sphere, Explicit };
enum class DrivePlacement { SiteOfA, Equidistant, Explicit };

struct Scenario {
    Command command = Command::Rates;
    SphereSystem sphere;
    double omega = 1.0501;  ///< evaluation frequency when omega is not swept
    double rel_tol = 1e-12;

    double search_lo = 1.0495;
    double search_hi = 1.0507;
    int l_lo = 1;
    int l_hi = 200;

    StrongSource strong_source = StrongSource::Sphere;
    std::optional<double> strong_omega;  ///< empty: tune to the selected resonance
    double gamma0 = 1e-7;                ///< free-space strong-arm rate in omega_T units

    std::optional<double> weak_omega;
    double weak_anchor = 1.0;  ///< weak-arm over strong-arm free-space rate
    double weak_gamma_aa = 0.0;
    double weak_gamma_ab = 0.0;

    CouplingParams coupling;  ///< explicit source, or dipole_shift only

    DrivePlacement placement = DrivePlacement::SiteOfA;
    DriveRates drive_rates;   ///< explicit placement
    double drive_cross = 0.0; ///< equidistant placement with explicit coupling

    double ratio_min = 10.0;  ///< only labels the regime column

    std::string solver = "closed";
    std::optional<double> t_end;
    std::optional<double> dt;

    std::optional<SweepSpec> sweep;
    std::string output;

    /// Canonical `key = value` lines; parsing them back yields the same scenario.
    [[nodiscard]] std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Reads the keys relevant to the command; rejects unknown keys and
/// inconsistent combinations with ConfigError.
Scenario resolve_scenario(Command command, const Config& cfg);

/// Preset of the figure commands with the Fig. 2 caption parameters; config
/// keys may override individual values.
Scenario figure_preset(Command command);

/// Fixed-format number with 12 significant digits.
std::string format_number(double v);

}  // namespace spherent::cli
