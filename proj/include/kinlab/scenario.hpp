#pragma once
/// @file scenario.hpp
/// Scenario configs (JSON), the run orchestrator, verification drivers, and
/// report emission. Each driver writes CSV series plus a JSON summary and
/// returns pass/fail; the CLI maps these onto exit codes.

#include "kinlab/densities.hpp"
#include "kinlab/hamiltonian.hpp"
#include "kinlab/integrals.hpp"
#include "kinlab/jet.hpp"
#include "kinlab/solver.hpp"

#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace kinlab {

struct CurveConfig {
    std::vector<Vec> points;
    bool closed = false;
    std::string label;
};

struct MarkerConfig {
    bool has_domain = false;
    Vec domain_center;
    double domain_radius = 1.0;
    int boundary_points = 256;
    double cloud_spacing_cells = 1.0;
    std::vector<CurveConfig> curves;
};

struct DensityRequest {
    DensitySpec spec;
    bool expect_fail = false;
};

struct Scenario {
    std::string name;
    std::string chart_name = "flat_torus";
    int dim = 2;
    std::map<std::string, double> chart_params;
    std::array<int, kMaxDim> grid_size = {64, 64, 1};
    Eos eos = Eos::barotropic(1.0, 2.0);
    std::vector<FieldExpr> u0;
    FieldExpr rho0, S0;
    SolverConfig solver;
    MarkerConfig markers;
    std::vector<DensityRequest> densities;
    int jet_count = 1000;
    int jet_order = 1;
    std::uint64_t seed = 1;
    bool allow_incompatible = false;
    std::map<std::string, double> tolerances;
    std::string raw_config;  // original bytes, hashed into the manifest

    double tol(const std::string& key, double dflt) const {
        auto it = tolerances.find(key);
        return it == tolerances.end() ? dflt : it->second;
    }

    ChartMetric make_chart_metric() const;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

struct CheckResult {
    std::string name;
    double value = 0;
    double tolerance = 0;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string command;
    std::string scenario_name;
    std::vector<CheckResult> checks;

    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
    void add(const std::string& name, double value, double tolerance, bool ok,
             const std::string& detail = "");
    std::string to_json() const;
    void print(std::ostream& os) const;
};

// Full marker-transported run; streams per-density domain series and
// per-curve circulation series at the snapshot cadence.
struct RunSeries {
    std::vector<IntegralSeries> domain;        // aligned with scenario.densities
    std::vector<IntegralSeries> circulation;   // aligned with markers.curves
    std::vector<std::vector<Vec>> curve_endpoints;  // start/end per open curve
};

RunSeries run_with_markers(const Scenario& sc, const ChartMetric& chart, const Grid& grid,
                           const GeometryCache& geo);

// Drivers. `out_dir` empty = no artifacts written.
Report drive_simulate(const Scenario& sc, const std::string& out_dir);
Report drive_verify_densities(const Scenario& sc, const std::string& out_dir);
Report drive_verify_circulation(const Scenario& sc, const std::string& out_dir);
Report drive_verify_determining(const Scenario& sc, const std::string& out_dir);
Report drive_verify_hamiltonian(const Scenario& sc, const std::string& out_dir);
Report drive_geometry_report(const Scenario& sc, const std::string& out_dir);

void write_manifest(const Scenario& sc, const std::string& out_dir,
                    const std::vector<std::string>& artifacts);

}  // namespace kinlab
