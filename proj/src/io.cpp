#include "qmem/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace qmem::io {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DomainError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, sep)) out.push_back(cell);
    return out;
}

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw DomainError("CSV: '" + s + "' is not a number");
    }
    if (used != s.size()) throw DomainError("CSV: '" + s + "' is not a number");
    return v;
}

}  // namespace

std::string format_number(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string axis_name(protocols::Axis axis) {
    return axis == protocols::Axis::wavenumber ? "wavenumber" : "frequency";
}

void write_curve_csv(const std::filesystem::path& path, const protocols::SpectralCurve& curve) {
    std::ofstream out = open_for_write(path);
    out << "# axis=" << axis_name(curve.axis) << " grain=" << format_number(curve.grain)
        << " units=dimensionless\n";
    out << "index,argument,value\n";
    for (const auto& p : curve.points) {
        out << p.index << ',' << format_number(p.argument) << ',' << format_number(p.value) << '\n';
    }
}

void write_grid_csv(const std::filesystem::path& path, const GridTable& table) {
    std::ofstream out = open_for_write(path);
    const double row_step = table.rows.size() > 1 ? table.rows[1] - table.rows[0] : 0.0;
    const double col_step = table.cols.size() > 1 ? table.cols[1] - table.cols[0] : 0.0;
    out << "# rows=" << table.row_axis << " cols=" << table.col_axis << " row_step=" << format_number(row_step)
        << " col_step=" << format_number(col_step) << " units=dimensionless\n";
    out << table.row_axis << '\\' << table.col_axis;
    for (double c : table.cols) out << ',' << format_number(c);
    out << '\n';
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        out << format_number(table.rows[i]);
        for (std::size_t j = 0; j < table.cols.size(); ++j) {
            out << ',' << format_number(table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
        }
        out << '\n';
    }
}

GridTable read_grid_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot open '" + path.string() + "'");
    std::string line;
    GridTable t;
    std::vector<std::vector<double>> rows;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> cells = split(line, ',');
        if (cells.empty()) continue;
        if (!header_seen) {
            const std::string& corner = cells[0];
            const auto slash = corner.find('\\');
            t.row_axis = corner.substr(0, slash);
            t.col_axis = slash == std::string::npos ? "" : corner.substr(slash + 1);
            for (std::size_t j = 1; j < cells.size(); ++j) t.cols.push_back(parse_number(cells[j]));
            header_seen = true;
            continue;
        }
        if (cells.size() != t.cols.size() + 1) throw DomainError("CSV: ragged row in '" + path.string() + "'");
        t.rows.push_back(parse_number(cells[0]));
        std::vector<double> r;
        for (std::size_t j = 1; j < cells.size(); ++j) r.push_back(parse_number(cells[j]));
        rows.push_back(std::move(r));
    }
    if (!header_seen) throw DomainError("CSV: no header row in '" + path.string() + "'");
    t.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(t.cols.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < t.cols.size(); ++j) {
            t.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return t;
}

GridTable table_of(const kernels::WriteKernel& wk) {
    return {"z", "t", wk.z_grid().samples(), wk.t_grid().samples(), wk.values()};
}

GridTable table_of(const kernels::CycleKernel& ck) {
    return {"t", "t'", ck.t_grid().samples(), ck.t_grid().samples(), ck.values()};
}

void write_modes_csv(const std::filesystem::path& path, const std::string& axis,
                     const std::vector<numerics::SampledFunction1D>& modes) {
    std::ofstream out = open_for_write(path);
    if (modes.empty()) {
        out << "# axis=" << axis << " units=dimensionless\n" << axis << '\n';
        return;
    }
    const auto& grid = modes.front().grid;
    out << "# axis=" << axis << " step=" << format_number(grid.step()) << " units=dimensionless\n";
    out << axis;
    for (std::size_t i = 0; i < modes.size(); ++i) out << ",mode_" << (i + 1);
    out << '\n';
    for (std::size_t j = 0; j < grid.count(); ++j) {
        out << format_number(grid[j]);
        for (const auto& m : modes) out << ',' << format_number(m.values[j]);
        out << '\n';
    }
}

void write_mode_table_csv(const std::filesystem::path& path, const schmidt::SchmidtDecomposition& sd) {
    std::ofstream out = open_for_write(path);
    out << "# axis=mode grain=1 units=dimensionless\n";
    out << "mode,lambda,operator_eigenvalue,zero_frequency_magnitude\n";
    for (std::size_t i = 0; i < sd.n_modes_kept; ++i) {
        out << (i + 1) << ',' << format_number(sd.lambdas[i]) << ',' << format_number(sd.operator_eigenvalues[i])
            << ',' << format_number(std::abs(schmidt::mode_spectrum(sd, i, 0.0))) << '\n';
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out = open_for_write(path);
    out << text;
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

Json to_json(const kernels::MemoryConfig& cfg) {
    return Json{{"L", cfg.length},           {"Tw", cfg.write_time}, {"Tr", cfg.read_time},
                {"n_z", cfg.n_z},            {"n_t", cfg.n_t},       {"readout_delay", cfg.readout_delay}};
}

Json to_json(const source::LaserSource& src) {
    return Json{{"p", src.p}, {"kappa", src.kappa}, {"mu", src.mu}};
}

Json to_json(const protocols::ProtocolResult& r) {
    Json j;
    j["protocol"] = r.protocol;
    j["config"] = to_json(r.config);
    Json sources = Json::object();
    for (const auto& [name, src] : r.sources) sources[name] = to_json(src);
    j["sources"] = sources;
    Json headline = Json::object();
    for (const auto& [name, value] : r.headline) headline[name] = value;
    j["headline"] = headline;
    Json flags = Json::object();
    for (const auto& [name, value] : r.flags) flags[name] = value;
    j["flags"] = flags;
    Json curves = Json::array();
    for (const auto& c : r.curves) {
        curves.push_back({{"name", c.name},
                          {"axis", axis_name(c.axis)},
                          {"grain", c.grain},
                          {"points", c.points.size()}});
    }
    j["curves"] = curves;
    j["notes"] = r.notes;
    return j;
}

Json to_json(const schmidt::SchmidtDecomposition& sd) {
    Json j;
    j["n_modes_kept"] = sd.n_modes_kept;
    j["lambdas"] = sd.lambdas;
    j["operator_eigenvalues"] = sd.operator_eigenvalues;
    std::vector<double> magnitudes;
    for (std::size_t i = 0; i < sd.n_modes_kept; ++i) {
        magnitudes.push_back(std::abs(schmidt::mode_spectrum(sd, i, 0.0)));
    }
    j["zero_frequency_magnitudes"] = magnitudes;
    const schmidt::OrthonormalityResiduals r = schmidt::orthonormality(sd);
    j["orthonormality"] = {{"temporal_off_diagonal", r.temporal_off_diagonal},
                           {"temporal_diagonal", r.temporal_diagonal},
                           {"spatial_off_diagonal", r.spatial_off_diagonal},
                           {"spatial_diagonal", r.spatial_diagonal},
                           {"spatial_modes", sd.spatial_modes.size()}};
    j["clamp"] = {{"clamped_count", sd.clamp.clamped_count}, {"worst_negative", sd.clamp.worst_negative}};
    return j;
}

Json to_json(const entanglement::QuadratureSecondMoments& m) {
    Json j;
    j["grain"] = m.grain();
    j["max_index"] = m.max_index();
    Json entries = Json::array();
    auto name = [](const entanglement::SpectralOperator& o) {
        return std::string(o.quadrature == entanglement::Quadrature::x ? "X" : "Y") +
               std::to_string(static_cast<int>(o.beam)) + "[" + std::to_string(o.index) + "]";
    };
    for (const auto& [key, value] : m.entries()) {
        entries.push_back({{"a", name(key.first)}, {"b", name(key.second)}, {"re", value.real()}, {"im", value.imag()}});
    }
    j["entries"] = entries;
    return j;
}

}  // namespace qmem::io
