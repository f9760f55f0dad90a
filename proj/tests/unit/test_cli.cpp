#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "run.hpp"
#include "scenario.hpp"

using namespace spherent::cli;

namespace {

struct Csv {
    std::vector<std::string> meta;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    return cells;
}

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            csv.meta.push_back(line);
        } else if (csv.header.empty()) {
            csv.header = split(line);
        } else {
            csv.rows.push_back(split(line));
        }
    }
    return csv;
}

/// Scenario lines of the echo, as a config.
std::string echo_as_config(const Csv& csv) {
    std::string cfg;
    for (const auto& m : csv.meta) {
        if (m.rfind("# spherent", 0) == 0 || m.rfind("# note:", 0) == 0) {
            continue;
        }
        cfg += m.substr(2) + "\n";
    }
    return cfg;
}

std::string config_error(Command c, const std::string& text) {
    try {
        run_to_string(c, text, 1, "test.cfg");
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

/// Regime (a) with every ratio >= 20 and gamma32 / dw = 100.
const char* kRegimeA = R"(strong.source = explicit
coupling.gamma31_aa = 40401.000016
coupling.gamma31_ab = 40400.999984
coupling.gamma32_aa = 1
coupling.gamma32_ab = 0.98
coupling.delta_omega_c = 0.01
drive.placement = site_of_A
regime.ratio_min = 20
sweep.axis = delta_omega_c
sweep.lo = 0.01
sweep.hi = 0.011
sweep.count = 2
)";

std::string temp_path(const std::string& name) { return "cli_test_" + name; }

}  // namespace

TEST_CASE("config parsing") {
    const Config cfg = Config::parse("# header\n\nsphere.radius = 12  # trailing\nsphere.theta = pi/2\n"
                                     "a.b = 2pi\nc.d = 0.5*pi\ne.f = -pi\n");
    CHECK(cfg.get_double("sphere.radius") == 12.0);
    CHECK(cfg.get_double("sphere.theta") == doctest::Approx(std::numbers::pi / 2));
    CHECK(cfg.get_double("a.b") == doctest::Approx(2 * std::numbers::pi));
    CHECK(cfg.get_double("c.d") == doctest::Approx(std::numbers::pi / 2));
    CHECK(cfg.get_double("e.f") == doctest::Approx(-std::numbers::pi));
    CHECK(cfg.get_double("missing.key", 3.0) == 3.0);
    CHECK_THROWS_AS((void)cfg.get_double("missing.key"), ConfigError);

    auto message = [](const std::string& text) {
        try {
            Config::parse(text, "f.cfg");
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message("a.b = 1\n\nnot a pair\n").find("f.cfg:3:") != std::string::npos);
    CHECK(message("a.b = 1\na.b = 2\n").find("f.cfg:2: duplicate") != std::string::npos);
    CHECK(message("a.b =\n").find("f.cfg:1:") != std::string::npos);
    CHECK(message("a b = 1\n").find("invalid key") != std::string::npos);

    const Config bad = Config::parse("x.y = 1.5z\n\nx.n = 2.5\n", "g.cfg");
    try {
        (void)bad.get_double("x.y");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("g.cfg:1:") != std::string::npos);
    }
    CHECK_THROWS_AS((void)bad.get_int("x.n"), ConfigError);
}

TEST_CASE("scenario validation") {
    CHECK(config_error(Command::Rates, "sweep.axis = theta\nsweep.lo = 1\nsweep.hi = 0\nsweep.count = 3\n")
              .find("lo < hi") != std::string::npos);
    CHECK(config_error(Command::Rates, "sweep.axis = theta\nsweep.lo = 0\nsweep.hi = 1\nsweep.count = 1\n")
              .find("count") != std::string::npos);
    CHECK(config_error(Command::Rates, "sweep.axis = spin\nsweep.lo = 0\nsweep.hi = 1\nsweep.count = 3\n")
              .find("test.cfg:1:") != std::string::npos);
    CHECK(config_error(Command::Rates, "sweep.axis = delta_omega_c\nsweep.lo = 0.1\nsweep.hi = 1\nsweep.count = 3\n")
              .find("not valid for rates") != std::string::npos);
    CHECK(config_error(Command::Rates, "sweep.axis = theta\nsweep.lo = 0\nsweep.hi = 1\nsweep.count = 3\n"
                                       "sphere.colour = red\n")
              .find("test.cfg:5: unknown") != std::string::npos);
    CHECK(config_error(Command::Rates, "rates.omega = 1\n").find("sweep.axis") != std::string::npos);
    CHECK(config_error(Command::Rates, "sphere.radius = -1\nsweep.axis = theta\nsweep.lo = 0\nsweep.hi = 1\n"
                                       "sweep.count = 3\n")
              .find("invalid sphere") != std::string::npos);
    // the weak-channel anchor is mandatory with sphere-computed weak rates
    CHECK(config_error(Command::Entangle, "units.gamma0 = 1e-7\nweak.omega = 0.9\nsweep.axis = theta\n"
                                          "sweep.lo = 0\nsweep.hi = 1\nsweep.count = 2\n")
              .find("weak.anchor") != std::string::npos);
    CHECK(config_error(Command::Entangle, "weak.omega = 0.9\nweak.anchor = 1\nsweep.axis = theta\n"
                                          "sweep.lo = 0\nsweep.hi = 1\nsweep.count = 2\n")
              .find("units.gamma0") != std::string::npos);
    CHECK(config_error(Command::Entangle, "strong.source = explicit\ncoupling.gamma31_aa = 1\n"
                                          "coupling.delta_omega_c = 0.1\nsweep.axis = theta\n"
                                          "sweep.lo = 0\nsweep.hi = 1\nsweep.count = 2\n")
              .find("not valid for entangle") != std::string::npos);
}

TEST_CASE("figure2 preset") {
    const std::string out = run_to_string(Command::Figure2, "sweep.count = 7\n", 1);
    CHECK(out.find('\r') == std::string::npos);
    const Csv csv = parse_csv(out);
    REQUIRE(csv.header == std::vector<std::string>{"theta", "gamma_aa", "gamma_ab", "gamma_plus", "gamma_minus",
                                                   "terms"});
    REQUIRE(csv.rows.size() == 7);
    CHECK(csv.rows.front()[0] == "0");
    CHECK(std::stod(csv.rows.back()[0]) == doctest::Approx(std::numbers::pi));
    // the Fig. 2 system at theta = pi
    CHECK(std::stod(csv.rows.back()[2]) == doctest::Approx(-455.829158088).epsilon(1e-9));
    CHECK(csv.meta.front() == "# spherent figure2");
}

TEST_CASE("determinism and sweep-order independence") {
    const std::string serial = run_to_string(Command::Figure5, "sweep.count = 24\n", 1);
    CHECK(run_to_string(Command::Figure5, "sweep.count = 24\n", 1) == serial);
    CHECK(run_to_string(Command::Figure5, "sweep.count = 24\n", 8) == serial);
    CHECK(run_to_string(Command::Entangle, kRegimeA, 2) == run_to_string(Command::Entangle, kRegimeA, 1));
}

TEST_CASE("config round trip through the echo") {
    const std::string cfg = "material.omega_p = 0.5\nsweep.axis = theta\nsweep.lo = pi/3\nsweep.hi = pi\n"
                            "sweep.count = 5\nrates.omega = 1.0501\n";
    const std::string first = run_to_string(Command::Rates, cfg, 1);
    CHECK(run_to_string(Command::Rates, echo_as_config(parse_csv(first)), 1) == first);

    const std::string ent = run_to_string(Command::Entangle, kRegimeA, 1);
    CHECK(run_to_string(Command::Entangle, echo_as_config(parse_csv(ent)), 1) == ent);
}

TEST_CASE("free-space rates") {
    const Csv csv = parse_csv(run_to_string(
        Command::Rates,
        "material.omega_p = 0\nsweep.axis = omega\nsweep.lo = 0.5\nsweep.hi = 1.5\nsweep.count = 11\n", 4));
    REQUIRE(csv.rows.size() == 11);
    for (const auto& row : csv.rows) {
        CHECK(std::stod(row[1]) == doctest::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("entangle pipeline in regime A") {
    const Csv csv = parse_csv(run_to_string(Command::Entangle, kRegimeA, 1));
    REQUIRE(csv.header.back() == "concurrence");
    REQUIRE(csv.rows.size() == 2);
    for (const auto& row : csv.rows) {
        CHECK(row[8] == "A");
        CHECK(std::stod(row.back()) >= 0.9);
    }
}

TEST_CASE("resonances and sphere-driven entangle") {
    const Csv res = parse_csv(run_to_string(Command::Resonances, "search.l_lo = 115\nsearch.l_hi = 125\n", 1));
    REQUIRE(res.header.front() == "omega_c");
    bool found = false;
    for (const auto& row : res.rows) {
        if (row[2] == "121") {
            found = true;
            CHECK(std::stod(row[0]) == doctest::Approx(1.0501003669).epsilon(1e-9));
            CHECK(row[3] == "SG");
        }
    }
    CHECK(found);

    const std::string cfg = "search.l_lo = 115\nsearch.l_hi = 125\nstrong.omega = 1.0501\nunits.gamma0 = 1e-7\n"
                            "weak.gamma_aa = 10\nweak.gamma_ab = -9.8\nsweep.axis = theta\nsweep.lo = 3\n"
                            "sweep.hi = pi\nsweep.count = 3\n";
    const Csv ent = parse_csv(run_to_string(Command::Entangle, cfg, 2));
    REQUIRE(ent.rows.size() == 3);
    for (const auto& row : ent.rows) {
        const double c = std::stod(row.back());
        CHECK(c >= 0.0);
        CHECK(c <= 1.0);
    }
    bool noted = false;
    for (const auto& m : ent.meta) {
        noted = noted || m.find("# note: resonance omega_c = 1.05010036") == 0;
    }
    CHECK(noted);
}

TEST_CASE("exit statuses") {
    std::ostringstream out;
    std::ostringstream err;
    CHECK(run({"figure2", "", temp_path("fig2.csv"), 2}, out, err) == 0);
    {
        std::ifstream f(temp_path("fig2.csv"));
        std::string first;
        std::getline(f, first);
        CHECK(first == "# spherent figure2");
    }
    std::remove(temp_path("fig2.csv").c_str());

    CHECK(run({"rates", "", "", 1}, out, err) == 1);
    CHECK(run({"bogus", "", "", 1}, out, err) == 1);
    CHECK(run({"rates", temp_path("missing.cfg"), "", 1}, out, err) == 1);

    // a sweep point outside the domain is a numerical failure naming the point
    {
        std::ofstream f(temp_path("neg.cfg"));
        f << "sweep.axis = delta_r\nsweep.lo = -0.2\nsweep.hi = 0.2\nsweep.count = 3\n";
    }
    err.str("");
    CHECK(run({"rates", temp_path("neg.cfg"), "", 1}, out, err) == 2);
    CHECK(err.str().find("sweep point 0 (delta_r = -0.2)") != std::string::npos);
    std::remove(temp_path("neg.cfg").c_str());

    // no resonance in the window
    {
        std::ofstream f(temp_path("nores.cfg"));
        f << "search.l_lo = 1\nsearch.l_hi = 2\nunits.gamma0 = 1e-7\nweak.gamma_aa = 1\nweak.gamma_ab = 0\n"
             "sweep.axis = theta\nsweep.lo = 0\nsweep.hi = pi\nsweep.count = 2\n";
    }
    CHECK(run({"entangle", temp_path("nores.cfg"), "", 1}, out, err) == 2);
    std::remove(temp_path("nores.cfg").c_str());
}
