#include "nldiff/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace nldiff {

namespace {

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

nlohmann::json fitted_json(const FittedConstants& f) {
    nlohmann::json j;
    if (f.K1) j["K1"] = *f.K1;
    if (f.K2) j["K2"] = *f.K2;
    if (f.K3) j["K3"] = *f.K3;
    if (f.C1) j["C1"] = *f.C1;
    if (f.alpha_fit) j["alpha_fit"] = *f.alpha_fit;
    if (f.crossover_radius) j["crossover_radius"] = *f.crossover_radius;
    if (!f.Cp.empty()) {
        nlohmann::json cp;
        for (const auto& [p, v] : f.Cp) cp[std::to_string(p)] = v;
        j["Cp"] = cp;
    }
    if (!f.fit_radii.empty()) {
        j["fit_radii"] = f.fit_radii;
        j["K1_ratio"] = f.K1_ratio;
        j["K2_ratio"] = f.K2_ratio;
    }
    return j;
}

std::string assumption_name(GreenAssumption a) {
    switch (a) {
        case GreenAssumption::G1: return "G1";
        case GreenAssumption::G1prime: return "G1prime";
        case GreenAssumption::G2: return "G2";
        case GreenAssumption::G3: return "G3";
    }
    return "?";
}

} // namespace

void write_field_csv(const Field& f, const std::string& path) {
    auto out = open_out(path);
    out << std::setprecision(17);
    const Grid& g = f.grid();
    if (g.dim() == 1) {
        out << "x,value\n";
        for (std::size_t i = 0; i < f.size(); ++i)
            out << g.coordinate(i) << "," << f[i] << "\n";
        return;
    }
    out << (g.dim() == 2 ? "i,j,value\n" : "i,j,k,value\n");
    for (std::size_t i = 0; i < f.size(); ++i) {
        const auto idx = g.unravel(i);
        for (int d = 0; d < g.dim(); ++d) out << idx[static_cast<std::size_t>(d)] << ",";
        out << f[i] << "\n";
    }
}

Field read_field_csv(const Grid& grid, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open field csv: " + path);
    Field f(grid);
    std::string line;
    std::size_t row = 0;
    bool header_checked = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (!header_checked) {
            header_checked = true;
            if (!line.empty() && !std::isdigit(static_cast<unsigned char>(line[0])) &&
                line[0] != '-' && line[0] != '+')
                continue; // header row
        }
        std::istringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (cells.empty()) continue;
        if (row >= f.size()) throw std::runtime_error("field csv has too many rows");
        f[row++] = std::stod(cells.back());
    }
    if (row != f.size())
        throw std::runtime_error("field csv row count does not match grid (" +
                                 std::to_string(row) + " vs " + std::to_string(f.size()) +
                                 ")");
    return f;
}

void write_field_binary(const Field& f, const std::string& path) {
    auto out = open_out(path, std::ios::binary);
    const Grid& g = f.grid();
    const std::uint32_t dim = static_cast<std::uint32_t>(g.dim());
    const std::uint32_t n = static_cast<std::uint32_t>(g.n());
    const double L = g.side();
    out.write(reinterpret_cast<const char*>(&dim), sizeof(dim));
    out.write(reinterpret_cast<const char*>(&n), sizeof(n));
    out.write(reinterpret_cast<const char*>(&L), sizeof(L));
    out.write(reinterpret_cast<const char*>(f.values().data()),
              static_cast<std::streamsize>(f.size() * sizeof(double)));
}

Field read_field_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open field binary: " + path);
    std::uint32_t dim = 0, n = 0;
    double L = 0.0;
    in.read(reinterpret_cast<char*>(&dim), sizeof(dim));
    in.read(reinterpret_cast<char*>(&n), sizeof(n));
    in.read(reinterpret_cast<char*>(&L), sizeof(L));
    Grid g(static_cast<int>(dim), n, L);
    Field f(g);
    in.read(reinterpret_cast<char*>(f.values().data()),
            static_cast<std::streamsize>(f.size() * sizeof(double)));
    if (!in) throw std::runtime_error("field binary truncated: " + path);
    return f;
}

std::string kernel_report_json(const KernelReport& report) {
    nlohmann::json j;
    j["operator"] = report.spec.describe();
    j["grid"] = report.grid.describe();
    switch (report.kind) {
        case KernelKind::HeatKernel:
            j["kind"] = "heat";
            j["t"] = report.time;
            break;
        case KernelKind::Green: j["kind"] = "green"; break;
        case KernelKind::ResolventGreen: j["kind"] = "resolvent-green"; break;
    }
    j["mass"] = report.mass;
    j["min_value"] = report.min_value;
    j["window"] = {report.window_min, report.window_max};
    j["under_resolved"] = report.under_resolved;
    j["periodic_correction"] = report.periodic_correction;
    if (report.quadrature_max_rel_err > 0.0) {
        j["quadrature_max_rel_err"] = report.quadrature_max_rel_err;
        j["quadrature_disagreement"] = report.quadrature_disagreement;
    }
    j["fitted"] = fitted_json(report.fitted);
    std::vector<std::string> cls;
    for (auto a : report.classification) cls.push_back(assumption_name(a));
    j["classification"] = cls;
    j["classification_inconclusive"] = report.classification_inconclusive;
    return j.dump(2);
}

void write_kernel_report(const KernelReport& report, const std::string& path) {
    open_out(path) << kernel_report_json(report) << "\n";
}

std::string estimate_report_json(const EstimateReport& report,
                                 const std::string& paper_ref) {
    nlohmann::json j;
    j["check"] = estimate_kind_name(report.kind);
    j["paper_ref"] = paper_ref;
    j["passed"] = report.passed;
    j["margin_min"] = report.margin_min;
    j["slack_used"] = report.slack_used;
    j["worst_time"] = report.worst_time;
    j["worst_point"] = report.worst_point;
    j["skipped_snapshots"] = report.skipped_snapshots;
    if (report.empirical_prefactor > 0.0)
        j["empirical_prefactor"] = report.empirical_prefactor;
    if (!report.notes.empty()) j["notes"] = report.notes;
    return j.dump(2);
}

void write_estimate_report(const EstimateReport& report, const std::string& paper_ref,
                           const std::string& json_path) {
    open_out(json_path) << estimate_report_json(report, paper_ref) << "\n";
}

void write_estimate_table_csv(const EstimateReport& report, const std::string& path) {
    auto out = open_out(path);
    out << std::setprecision(17);
    out << "t,lhs,rhs,margin\n";
    for (const auto& row : report.data_table)
        out << row.t << "," << row.lhs << "," << row.rhs << "," << row.margin << "\n";
}

void write_trajectory(const Trajectory& traj, const std::string& dir, bool binary) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        nlohmann::json meta;
        meta["operator"] = traj.spec.describe();
        meta["grid"] = traj.grid.describe();
        meta["m"] = traj.m;
        nlohmann::json snaps = nlohmann::json::array();
        for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
            nlohmann::json s;
            s["index"] = i;
            s["t"] = traj.snapshots[i].first;
            s["file"] = "snap_" + std::to_string(i) + (binary ? ".bin" : ".csv");
            snaps.push_back(s);
        }
        meta["snapshots"] = snaps;
        open_out(dir + "/meta.json") << meta.dump(2) << "\n";
    }
    {
        auto out = open_out(dir + "/diagnostics.csv");
        out << std::setprecision(17);
        out << "step,t,residual,newton_iters,mass,l1,l2,linf,boundary_contamination\n";
        for (const auto& d : traj.diagnostics)
            out << d.step << "," << d.t << "," << d.residual << "," << d.newton_iters
                << "," << d.mass << "," << d.l1 << "," << d.l2 << "," << d.linf << ","
                << d.boundary_contamination << "\n";
    }
    for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
        const std::string base = dir + "/snap_" + std::to_string(i);
        if (binary) write_field_binary(traj.snapshots[i].second, base + ".bin");
        else write_field_csv(traj.snapshots[i].second, base + ".csv");
    }
}

} // namespace nldiff
