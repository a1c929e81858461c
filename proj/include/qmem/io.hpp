#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qmem/entanglement.hpp"
#include "qmem/kernels.hpp"
#include "qmem/protocols.hpp"
#include "qmem/schmidt.hpp"
#include "qmem/source_model.hpp"

/// CSV and JSON export. Numbers are written with 17 significant digits and
/// LF line endings so identical inputs give byte-identical files.
namespace qmem::io {

using Json = nlohmann::ordered_json;

std::string format_number(double x);

/// "# axis=<kind> grain=<grain> units=dimensionless", then index,argument,value rows.
void write_curve_csv(const std::filesystem::path& path, const protocols::SpectralCurve& curve);

/// Matrix CSV: the first row holds the column coordinates after a corner
/// label, each later row starts with its row coordinate.
struct GridTable {
    std::string row_axis;
    std::string col_axis;
    std::vector<double> rows;
    std::vector<double> cols;
    Eigen::MatrixXd values;
};

void write_grid_csv(const std::filesystem::path& path, const GridTable& table);
GridTable read_grid_csv(const std::filesystem::path& path);

GridTable table_of(const kernels::WriteKernel& wk);
GridTable table_of(const kernels::CycleKernel& ck);

/// Column per mode: t, phi_1, ..., phi_n (or z, g_1, ... for spatial modes).
void write_modes_csv(const std::filesystem::path& path, const std::string& axis,
                     const std::vector<numerics::SampledFunction1D>& modes);

/// mode, lambda, operator_eigenvalue, zero_frequency_magnitude.
void write_mode_table_csv(const std::filesystem::path& path, const schmidt::SchmidtDecomposition& sd);

void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

Json to_json(const kernels::MemoryConfig& cfg);
Json to_json(const source::LaserSource& src);
Json to_json(const protocols::ProtocolResult& r);
/// lambdas, zero-frequency magnitudes, orthonormality residuals, clamp diagnostics.
Json to_json(const schmidt::SchmidtDecomposition& sd);
Json to_json(const entanglement::QuadratureSecondMoments& m);

std::string axis_name(protocols::Axis axis);

}  // namespace qmem::io
