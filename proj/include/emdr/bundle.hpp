#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "emdr/config.hpp"
#include "emdr/csv.hpp"
#include "emdr/regression.hpp"

namespace emdr::bundle {

inline constexpr const char* kVersion = "0.1.0";

void write_manifest(const std::filesystem::path& dir, const RunConfig& cfg,
                    const std::vector<std::string>& warnings);

// decomposition_<tag><channel>.csv with columns t, [date], imf_1..imf_K,
// residue; summing the component columns reproduces the channel.
void write_decomposition(const std::filesystem::path& dir, const std::string& tag,
                         const std::string& channel, const Decomposition& dec,
                         const std::optional<CivilDate>& start);

// model_<tag>.csv: one row per design column of every submodel, CI columns
// empty until a bootstrap has run.
void write_model(const std::filesystem::path& dir, const std::string& tag,
                 const EmdrModel& model, const BootstrapResult* boot);

struct DiagnosticsRow {
    std::string design;
    std::string submodel;
    double lambda = 0.0;
    std::size_t df = 0;
    double r2 = 0.0;
    double gcv = 0.0;
    std::size_t n_rows = 0;
};

void write_diagnostics(const std::filesystem::path& dir,
                       const std::vector<DiagnosticsRow>& rows);

// Everything cmd_bootstrap / cmd_report need to run without refitting:
// trimmed designs, responses, fitted Lasso state and column metadata.
void write_state(const std::filesystem::path& dir, const std::string& tag,
                 const EmdrModel& model, const std::optional<CivilDate>& start,
                 const BootstrapResult* boot);

struct LoadedState {
    EmdrModel model; // decomposition left empty; submodels fully restored
    std::optional<CivilDate> start_date;
    bool has_bootstrap = false;
    BootstrapResult boot;
};

LoadedState load_state(const std::filesystem::path& dir, const std::string& tag);

std::vector<std::string> designs_present(const std::filesystem::path& dir);

} // namespace emdr::bundle
