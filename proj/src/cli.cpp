// SPDX-License-Identifier: Apache-2.0
//
// rissim: RIS-assisted link simulation and discrete phase-shift beamforming
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "rissim/cli.hpp"

#include "rissim/beamforming.hpp"
#include "rissim/errors.hpp"
#include "rissim/scenario_io.hpp"
#include "rissim/simulator.hpp"
#include "rissim/spacetime.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

namespace rissim
{

namespace
{

std::string fmt4(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

std::vector<double> parse_number_list(const std::string &text, std::size_t min_n, std::size_t max_n,
                                      const std::string &what)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception &) {
            throw std::invalid_argument(what + ": expected a comma-separated number list, got '" + text + "'");
        }
        if (used != tok.size())
            throw std::invalid_argument(what + ": trailing characters in '" + tok + "'");
        out.push_back(v);
    }
    if (out.size() < min_n || out.size() > max_n)
        throw std::invalid_argument(what + ": expected between " + std::to_string(min_n) + " and " +
                                    std::to_string(max_n) + " values");
    return out;
}

int as_positive_int(double v, const std::string &what)
{
    if (v != std::floor(v) || v < 1.0 || v > 1e9)
        throw std::invalid_argument(what + ": expected a positive integer");
    return static_cast<int>(v);
}

unsigned default_threads()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

struct OptimizeArgs
{
    std::string scenario_path;
    std::string out_path;
    std::string algo = "das";
    int bits = 0; // 0: take the panel's native bit depth
    int panel = 0;
};

int cmd_optimize(const OptimizeArgs &a, std::ostream &out)
{
    const ScenarioFile sf = load_scenario(a.scenario_path);
    const Scenario &sc = sf.scenario;
    if (sc.panels.empty())
        throw blocked_link("optimize: the scenario has no panel");
    if (a.panel < 0 || a.panel >= static_cast<int>(sc.panels.size()))
        throw std::invalid_argument("optimize: panel index out of range");

    RisPanel panel = sc.panels[static_cast<std::size_t>(a.panel)];
    if (a.bits != 0 && a.bits != panel.unit.bits()) {
        // Re-quantize the unit's state alphabet at the requested depth.
        panel.unit = UnitCell::uniform(a.bits, panel.unit.width_a, panel.unit.height_b,
                                       panel.unit.amplitude_response);
    }
    Scenario scq = sc;
    scq.panels[static_cast<std::size_t>(a.panel)] = panel;

    const GainDecomposition g =
        panel_link_decomposition(scq, static_cast<std::size_t>(a.panel), scq.rx.pose.position);
    const int bits = panel.unit.bits();

    DiscreteOptResult res;
    if (a.algo == "das") {
        res = das_opt(g, bits, panel.unit);
    } else if (a.algo == "brute") {
        res = brute_force_opt(g, bits, panel.unit);
    } else if (a.algo == "greedy") {
        const PhaseCodebook init(1, static_cast<int>(g.per_unit.size()), bits);
        res = greedy_opt([&](const PhaseCodebook &cb) { return objective_power(g, cb, panel.unit); }, init, 16);
    } else {
        throw std::invalid_argument("optimize: unknown algorithm '" + a.algo + "'");
    }

    save_codebook(a.out_path, res.codebook.reshaped(panel.rows, panel.cols));
    out << "objective_db=" << fmt4(res.objective > 0.0 ? lin2db(res.objective)
                                                       : -std::numeric_limits<double>::infinity())
        << "\n";
    return 0;
}

struct CoverageArgs
{
    std::string scenario_path;
    std::string grid;
    std::string out_prefix;
    std::string policy = "off";
    unsigned threads = 0;
};

int cmd_coverage(const CoverageArgs &a, std::ostream &out)
{
    const ScenarioFile sf = load_scenario(a.scenario_path);
    const std::vector<double> g = parse_number_list(a.grid, 6, 6, "--grid");
    CoverageGridSpec spec;
    spec.origin = Vec3d(g[0], g[1], g[2]);
    spec.nx = as_positive_int(g[3], "--grid nx");
    spec.ny = as_positive_int(g[4], "--grid ny");
    spec.step = g[5];
    spec.validate();

    CoveragePolicy policy;
    if (a.policy == "off") {
        policy.kind = CoveragePolicy::Kind::off;
    } else if (a.policy.rfind("optimize=", 0) == 0) {
        const std::vector<double> p = parse_number_list(a.policy.substr(9), 3, 3, "--policy optimize");
        policy.kind = CoveragePolicy::Kind::optimize_to_point;
        policy.focus = Vec3d(p[0], p[1], p[2]);
    } else if (a.policy.rfind("fixed=", 0) == 0) {
        policy.kind = CoveragePolicy::Kind::fixed;
        std::stringstream ss(a.policy.substr(6));
        std::string path;
        while (std::getline(ss, path, ','))
            policy.codebooks.push_back(load_codebook(path));
    } else {
        throw std::invalid_argument("--policy must be off, optimize=x,y,z or fixed=file[,file...]");
    }

    const unsigned threads = a.threads ? a.threads : default_threads();
    const CoverageGrid grid = coverage_map(sf.scenario, spec, policy, threads);
    save_coverage_csv(a.out_prefix + ".csv", grid);
    save_coverage_pgm(a.out_prefix + ".pgm", grid);

    int bx = 0, by = 0;
    for (int iy = 0; iy < grid.ny; ++iy)
        for (int ix = 0; ix < grid.nx; ++ix)
            if (grid.values_dbm(ix, iy) > grid.values_dbm(bx, by)) {
                bx = ix;
                by = iy;
            }
    out << "cells=" << grid.nx * grid.ny << " argmax=" << bx << "," << by
        << " max_dbm=" << fmt4(grid.values_dbm(bx, by)) << "\n";
    return 0;
}

struct ImageArgs
{
    std::string scenario_path;
    std::string soi;
    std::string out_prefix;
    std::string optimizer = "das";
    std::vector<std::string> scatterers;
    unsigned threads = 0;
};

int cmd_image(const ImageArgs &a, std::ostream &out)
{
    const ScenarioFile sf = load_scenario(a.scenario_path);
    const std::vector<double> s = parse_number_list(a.soi, 7, 7, "--soi");
    SoiGridSpec spec;
    spec.origin = Vec3d(s[0], s[1], s[2]);
    spec.nx = as_positive_int(s[3], "--soi nx");
    spec.ny = as_positive_int(s[4], "--soi ny");
    spec.nz = as_positive_int(s[5], "--soi nz");
    spec.step = s[6];
    spec.validate();

    std::vector<PointScatterer> scatterers;
    for (const std::string &sp : a.scatterers) {
        const std::vector<double> v = parse_number_list(sp, 3, 4, "--scatterer");
        PointScatterer ps;
        ps.position = Vec3d(v[0], v[1], v[2]);
        if (v.size() == 4)
            ps.reflectivity = v[3];
        scatterers.push_back(ps);
    }

    SoiOptimizer opt;
    if (a.optimizer == "das")
        opt = SoiOptimizer::das;
    else if (a.optimizer == "greedy")
        opt = SoiOptimizer::greedy;
    else
        throw std::invalid_argument("--optimizer must be das or greedy");

    const unsigned threads = a.threads ? a.threads : default_threads();
    SoiGrid grid;
    try {
        grid = soi_imaging(sf.scenario, spec, opt, scatterers, threads);
    } catch (const std::invalid_argument &e) {
        // Arguments were already validated; a complaint here is geometry.
        throw blocked_link(e.what());
    }
    save_soi_csv(a.out_prefix + ".csv", grid);
    save_soi_pgm(a.out_prefix + ".pgm", grid);

    const int n = grid.argmax();
    const int ix = n % spec.nx, iy = (n / spec.nx) % spec.ny, iz = n / (spec.nx * spec.ny);
    double lo = grid.intensity_dbm[0], hi = grid.intensity_dbm[0];
    for (double v : grid.intensity_dbm) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    const double spread = hi - lo;
    out << "argmax_voxel=" << ix << "," << iy << "," << iz << " intensity_dbm=" << fmt4(hi) << "\n";
    out << "intensity_spread_db=" << fmt4(spread) << " flat_field=" << (spread < 6.0 ? "true" : "false") << "\n";
    return 0;
}

struct SpacetimeArgs
{
    std::string timecode_path;
    int harmonic = 1;
    int scan = 181;
    std::string out_prefix;
    double frequency_hz = 5.8e9;
};

int cmd_spacetime(const SpacetimeArgs &a, std::ostream &out, std::ostream &err)
{
    if (!(a.frequency_hz > 0.0))
        throw std::invalid_argument("--frequency must be positive");
    const TimeCodebook tc = load_timecode(a.timecode_path);
    const double lambda = speed_of_light / a.frequency_hz;

    // Default panel built around the schedule: half-wavelength grid, unity
    // amplitude, boresight along +z.
    RisPanel panel;
    panel.rows = tc.rows;
    panel.cols = tc.cols;
    panel.spacing_x = panel.spacing_y = lambda / 2.0;
    panel.unit = UnitCell::uniform(tc.bits, lambda / 2.0, lambda / 2.0);

    // Per-unit harmonic content.
    bool any = false;
    for (int u = 0; u < tc.units(); ++u) {
        const Complexd a_k = harmonic_coefficient(tc.unit_waveform(u, panel.unit), a.harmonic);
        const double mag = std::abs(a_k);
        out << "unit=" << u << " mag=";
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.16f", mag);
        out << buf;
        if (mag > 1e-15) {
            any = true;
            out << " phase_deg=" << fmt4(rad2deg(std::arg(a_k)));
        } else {
            out << " phase_deg=undef";
        }
        out << "\n";
    }
    if (!any)
        err << "warning: the schedule has no harmonic-" << a.harmonic << " content; the pattern is all -inf\n";

    if (!a.out_prefix.empty()) {
        PlaneWave wave;
        wave.amplitude = 1.0;
        wave.wavelength = lambda;
        wave.incident_dir = SphericalDirection{0.0, 0.0};

        std::vector<SphericalDirection> scan;
        std::vector<double> angles_deg;
        for (int i = 0; i < a.scan; ++i) {
            const double t = (a.scan == 1) ? 0.0 : -90.0 + 180.0 * i / (a.scan - 1);
            angles_deg.push_back(t);
            SphericalDirection d;
            d.azimuth = t < 0.0 ? -pi : 0.0;
            d.elevation = deg2rad(std::abs(t));
            scan.push_back(d);
        }
        const std::vector<double> pattern = harmonic_pattern(panel, tc, a.harmonic, scan, wave);
        std::ofstream os(a.out_prefix + ".csv", std::ios::binary);
        if (!os)
            throw std::runtime_error("spacetime: cannot open '" + a.out_prefix + ".csv'");
        os << "angle_deg,pattern_db\n";
        for (std::size_t i = 0; i < pattern.size(); ++i)
            os << fmt4(angles_deg[i]) << "," << fmt4(pattern[i]) << "\n";
    }
    return 0;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"RIS link simulation and discrete phase-shift beamforming"};
    app.require_subcommand(1);

    OptimizeArgs oa;
    CLI::App *opt = app.add_subcommand("optimize", "Steer one panel at the receiver and export the codebook");
    opt->add_option("scenario", oa.scenario_path, "scenario JSON file")->required();
    opt->add_option("--out", oa.out_path, "output codebook file")->required();
    opt->add_option("--algo", oa.algo, "das | greedy | brute");
    opt->add_option("--bits", oa.bits, "override the panel bit depth (1..3)");
    opt->add_option("--panel", oa.panel, "panel index (default 0)");

    CoverageArgs ca;
    CLI::App *cov = app.add_subcommand("coverage", "Signal-strength map over a horizontal grid");
    cov->add_option("scenario", ca.scenario_path, "scenario JSON file")->required();
    cov->add_option("--grid", ca.grid, "x0,y0,z,nx,ny,step")->required();
    cov->add_option("--out", ca.out_prefix, "output prefix (.csv/.pgm)")->required();
    cov->add_option("--policy", ca.policy, "off | optimize=x,y,z | fixed=file[,file...]");
    cov->add_option("--threads", ca.threads, "worker count (default: hardware)");

    ImageArgs ia;
    CLI::App *img = app.add_subcommand("image", "Scan a space of interest and image reflectors");
    img->add_option("scenario", ia.scenario_path, "scenario JSON file")->required();
    img->add_option("--soi", ia.soi, "x0,y0,z0,nx,ny,nz,step")->required();
    img->add_option("--out", ia.out_prefix, "output prefix (.csv/.pgm)")->required();
    img->add_option("--scatterer", ia.scatterers, "x,y,z[,rho], repeatable");
    img->add_option("--optimizer", ia.optimizer, "das | greedy");
    img->add_option("--threads", ia.threads, "worker count (default: hardware)");

    SpacetimeArgs sa;
    CLI::App *st = app.add_subcommand("spacetime", "Harmonic analysis of a time-coded panel");
    st->add_option("timecode", sa.timecode_path, "time-code text file")->required();
    st->add_option("--harmonic", sa.harmonic, "harmonic order k (default 1)");
    st->add_option("--scan", sa.scan, "number of pattern samples over -90..90 deg");
    st->add_option("--out", sa.out_prefix, "optional output prefix (.csv)");
    st->add_option("--frequency", sa.frequency_hz, "carrier frequency in Hz (default 5.8e9)");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == 0) { // --help
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*opt)
            return cmd_optimize(oa, out);
        if (*cov)
            return cmd_coverage(ca, out);
        if (*img)
            return cmd_image(ia, out);
        if (*st)
            return cmd_spacetime(sa, out, err);
        err << "error: no subcommand\n";
        return 2;
    } catch (const scenario_error &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const enumeration_too_large &e) {
        err << "error: too-large: " << e.what() << "\n";
        return 3;
    } catch (const blocked_link &e) {
        err << "error: infeasible geometry: " << e.what() << "\n";
        return 3;
    } catch (const degenerate_geometry &e) {
        err << "error: infeasible geometry: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace rissim
