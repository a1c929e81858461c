#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qmem/kernels.hpp"
#include "qmem/protocols.hpp"
#include "qmem/source_model.hpp"

/// Command-line front end. `run` is the whole program minus process exit so
/// tests can drive it in-process.
namespace qmem::cli {

enum ExitCode : int {
    kOk = 0,
    kValidationFailure = 1,
    kUsageError = 2,
    kNumericalQuality = 3,
};

struct RunConfig {
    kernels::MemoryConfig memory;
    source::LaserSource source;
    source::LaserSource second_source{0.0, 100.0, 0.0};
    protocols::Protocol protocol = protocols::Protocol::read_simultaneous;
    std::filesystem::path out = ".";
    std::size_t modes = 8;
    bool exact_source = false;
    long half_width = 16;
    std::optional<std::filesystem::path> kernel_csv;
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CheckResult {
    std::string name;
    bool passed;
    std::string detail;
};

/// The property suite behind `qmem validate`.
std::vector<CheckResult> run_validation(const RunConfig& rc);

/// Parameter sets of the figure commands: (L, T_W).
struct ParameterSet {
    double length;
    double write_time;
};
inline constexpr ParameterSet kMatched{10.0, 5.5};
inline constexpr ParameterSet kLongWrite{10.0, 7.25};
inline constexpr ParameterSet kLongCell{30.0, 5.5};

}  // namespace qmem::cli
