#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "emdr/bundle.hpp"
#include "emdr/config.hpp"
#include "emdr/csv.hpp"
#include "emdr/parallel.hpp"
#include "emdr/regression.hpp"

namespace fs = std::filesystem;
using namespace emdr;

namespace {

struct GlobalFlags {
    std::optional<std::uint64_t> seed;
    std::string threads; // "", "auto" or integer
    bool quiet = false;
};

void apply_globals(RunConfig& cfg, const GlobalFlags& g) {
    if (g.seed) cfg.seed = *g.seed;
    if (!g.threads.empty()) {
        if (g.threads == "auto")
            cfg.threads = 0;
        else {
            try {
                cfg.threads = std::stoi(g.threads);
            } catch (const std::exception&) {
                throw ConfigError("--threads expects an integer or 'auto'");
            }
        }
    }
}

void info(const GlobalFlags& g, const std::string& msg) {
    if (!g.quiet) std::cerr << msg << "\n";
}

std::map<std::string, std::string> read_manifest(const fs::path& dir) {
    std::ifstream in(dir / "manifest.txt");
    if (!in) throw ParseError("bundle has no manifest.txt: " + dir.string());
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        const auto eq = line.find(" = ");
        if (eq == std::string::npos) continue;
        kv[line.substr(0, eq)] = line.substr(eq + 3);
    }
    return kv;
}

std::vector<bundle::DiagnosticsRow> diagnostics_for(const std::string& tag,
                                                    const EmdrModel& model,
                                                    const TimeSeries& y) {
    std::vector<bundle::DiagnosticsRow> rows;
    for (const auto& sub : model.submodels)
        rows.push_back({tag, sub.label, sub.fit.lambda, sub.fit.df, sub.r2,
                        sub.gcv_value, sub.response.size()});
    rows.push_back({tag, "overall", 0.0, 0, overall_r_squared(model, y),
                    overall_gcv(model, y), model.n_rows});
    return rows;
}

void write_fit_outputs(const fs::path& out, const std::string& tag,
                       const EmdrModel& model, const SeriesBundle& data) {
    for (std::size_t j = 0; j < model.decomposition.names.size(); ++j)
        bundle::write_decomposition(out, tag + "_",
                                    model.decomposition.names[j],
                                    model.decomposition.per_channel[j],
                                    data.start_date);
    bundle::write_model(out, tag, model, nullptr);
    bundle::write_state(out, tag, model, data.start_date, nullptr);
}

int cmd_decompose(const std::string& input, const std::string& config_path,
                  const std::string& out_dir, const GlobalFlags& g) {
    RunConfig cfg = RunConfig::load(config_path);
    apply_globals(cfg, g);
    cfg.validate();
    const fs::path out(out_dir);
    fs::create_directories(out);

    auto data = ingest_csv(input, cfg.response, cfg.predictors, cfg.date_column);

    MultichannelSeries all;
    all.names.push_back(cfg.response);
    all.channels.push_back(data.y);
    for (std::size_t j = 0; j < data.predictors.n_channels(); ++j) {
        all.names.push_back(data.predictors.names[j]);
        all.channels.push_back(data.predictors.channels[j]);
    }

    std::vector<std::string> warnings;
    if (all.n_channels() == 1) {
        auto dec = emd_decompose(all.channels[0], cfg.sift_params());
        warnings = dec.warnings;
        bundle::write_decomposition(out, "", all.names[0], dec, data.start_date);
    } else {
        NoiseConfig noise;
        noise.n_noise = cfg.n_noise;
        noise.variance_ratio = cfg.noise_variance_ratio;
        noise.seed = cfg.seed;
        MemdOptions mopt{cfg.directions, cfg.standardize,
                         resolve_threads(cfg.threads)};
        auto dec = na_memd_decompose(all, noise, cfg.sift_params(), mopt);
        warnings = dec.warnings;
        for (std::size_t j = 0; j < dec.names.size(); ++j)
            bundle::write_decomposition(out, "", dec.names[j], dec.per_channel[j],
                                        data.start_date);
        info(g, "decomposed " + std::to_string(dec.names.size()) +
                    " channels into K=" + std::to_string(dec.K) + " IMFs");
    }
    bundle::write_manifest(out, cfg, warnings);
    return 0;
}

int cmd_fit(const std::string& input, const std::string& config_path,
            const std::string& out_dir, const std::string& design_flag,
            const GlobalFlags& g) {
    RunConfig cfg = RunConfig::load(config_path);
    apply_globals(cfg, g);
    if (!design_flag.empty()) cfg.design = design_flag;
    cfg.validate();
    const fs::path out(out_dir);
    fs::create_directories(out);

    auto data = ingest_csv(input, cfg.response, cfg.predictors, cfg.date_column);
    auto options = cfg.to_options();

    std::vector<std::string> warnings;
    std::vector<bundle::DiagnosticsRow> diag;

    if (cfg.design == "r1" || cfg.design == "both") {
        info(g, "fitting EMD-R1 ...");
        auto model = fit_emdr1(data.y, data.predictors, options);
        warnings.insert(warnings.end(), model.warnings.begin(),
                        model.warnings.end());
        auto rows = diagnostics_for("r1", model, data.y);
        diag.insert(diag.end(), rows.begin(), rows.end());
        write_fit_outputs(out, "r1", model, data);
    }
    if (cfg.design == "r2" || cfg.design == "both") {
        info(g, "fitting EMD-R2 ...");
        auto model = fit_emdr2(data.y, data.predictors, options);
        warnings.insert(warnings.end(), model.warnings.begin(),
                        model.warnings.end());
        auto rows = diagnostics_for("r2", model, data.y);
        diag.insert(diag.end(), rows.begin(), rows.end());
        write_fit_outputs(out, "r2", model, data);
    }

    bundle::write_diagnostics(out, diag);
    bundle::write_manifest(out, cfg, warnings);
    info(g, "bundle written to " + out.string());
    return 0;
}

int cmd_bootstrap(const std::string& bundle_dir, int reps,
                  const std::string& block_len_str, const GlobalFlags& g) {
    const fs::path dir(bundle_dir);
    auto manifest = read_manifest(dir);

    std::uint64_t seed = 0;
    if (g.seed)
        seed = *g.seed;
    else if (manifest.count("seed"))
        seed = std::stoull(manifest["seed"]);
    unsigned threads = 1;
    if (!g.threads.empty())
        threads = g.threads == "auto" ? resolve_threads(0)
                                      : resolve_threads(std::stoi(g.threads));
    else if (manifest.count("threads"))
        threads = resolve_threads(std::stoi(manifest["threads"]));

    std::size_t block_len = 0;
    if (!block_len_str.empty() && block_len_str != "auto") {
        try {
            block_len = static_cast<std::size_t>(std::stoul(block_len_str));
        } catch (const std::exception&) {
            throw ConfigError("--block-len expects an integer or 'auto'");
        }
    }

    auto tags = bundle::designs_present(dir);
    if (tags.empty()) throw ParseError("bundle has no fitted models: " + bundle_dir);

    for (const auto& tag : tags) {
        info(g, "bootstrapping " + tag + " (" + std::to_string(reps) +
                    " replications) ...");
        auto st = bundle::load_state(dir, tag);
        auto boot = block_bootstrap(st.model, reps, block_len, seed, threads);
        bundle::write_model(dir, tag, st.model, &boot);
        bundle::write_state(dir, tag, st.model, st.start_date, &boot);
    }
    return 0;
}

int cmd_report(const std::string& bundle_dir, const GlobalFlags& g) {
    const fs::path dir(bundle_dir);
    auto tags = bundle::designs_present(dir);
    if (tags.empty()) throw ParseError("bundle has no fitted models: " + bundle_dir);

    for (const auto& tag : tags) {
        auto st = bundle::load_state(dir, tag);
        auto rows = sensitivities(st.model);
        if (st.has_bootstrap) attach_bootstrap(rows, st.model, st.boot);

        // Figure-4-style table: sensitivity against log2 mean period
        std::vector<std::string> header{
            "submodel", "predictor", "imf_order", "mean_period", "log2_period",
            "lag",      "beta",      "amplitude", "sensitivity", "ci_lower",
            "ci_upper", "significant"};
        std::vector<std::vector<std::string>> cells;
        for (const auto& r : rows) {
            std::vector<std::string> c;
            c.push_back(r.submodel);
            c.push_back(r.predictor);
            c.push_back(r.order == 0 ? "r" : std::to_string(r.order));
            c.push_back(std::isfinite(r.mean_period) ? format_double(r.mean_period) : "");
            c.push_back(std::isfinite(r.mean_period)
                            ? format_double(std::log2(r.mean_period))
                            : "");
            c.push_back(std::to_string(r.lag));
            c.push_back(format_double(r.beta));
            c.push_back(format_double(r.amplitude));
            c.push_back(format_double(r.sensitivity));
            c.push_back(r.has_ci ? format_double(r.ci_lower) : "");
            c.push_back(r.has_ci ? format_double(r.ci_upper) : "");
            c.push_back(r.has_ci ? (r.significant ? "1" : "0") : "");
            cells.push_back(std::move(c));
        }
        write_csv_file((dir / ("report_sensitivity_" + tag + ".csv")).string(),
                       header, cells);

        // Figure-5-style table: day-of-year mean amplitude of the retained
        // (or, after bootstrap, significant) predictor IMFs
        if (st.start_date) {
            std::vector<std::string> doy_header{"day"};
            std::vector<DayOfYearProfile> profiles;
            for (const auto& r : rows) {
                if (r.order == 0) continue;
                if (st.has_bootstrap && !r.significant) continue;
                const fs::path dec_file =
                    dir / ("decomposition_" + tag + "_" + r.predictor + ".csv");
                if (!fs::exists(dec_file)) continue;
                auto table = read_csv_file(dec_file.string());
                const std::size_t ci =
                    table.column_index("imf_" + std::to_string(r.order));
                Imf imf;
                imf.order = r.order;
                imf.values.reserve(table.rows.size());
                for (const auto& row : table.rows)
                    imf.values.push_back(std::stod(row[ci]));
                profiles.push_back(amplitude_by_day_of_year(imf, *st.start_date));
                doy_header.push_back(r.predictor + "_imf_" +
                                     std::to_string(r.order));
            }
            std::vector<std::vector<std::string>> doy_cells;
            for (int d = 0; d < 366; ++d) {
                std::vector<std::string> c{std::to_string(d + 1)};
                for (const auto& p : profiles)
                    c.push_back(std::isfinite(p.mean[d]) ? format_double(p.mean[d])
                                                         : "");
                doy_cells.push_back(std::move(c));
            }
            write_csv_file(
                (dir / ("report_amplitude_doy_" + tag + ".csv")).string(),
                doy_header, doy_cells);
        } else {
            info(g, "no date column in bundle; skipping day-of-year amplitude table");
        }
    }

    if (fs::exists(dir / "diagnostics.csv"))
        fs::copy_file(dir / "diagnostics.csv", dir / "report_diagnostics.csv",
                      fs::copy_options::overwrite_existing);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"EMD-regression: decompose time series and fit multi-scale sparse models"};
    app.require_subcommand(1);

    GlobalFlags g;
    app.add_option("--seed", g.seed, "master seed (overrides config)");
    app.add_option("--threads", g.threads, "worker threads (integer or 'auto')");
    app.add_flag("--quiet", g.quiet, "suppress progress output");

    std::string input, config_path, out_dir, design, bundle_dir;
    int reps = 500;
    std::string block_len = "auto";

    auto* dec = app.add_subcommand("decompose", "decompose the configured columns");
    dec->add_option("--input", input, "input CSV")->required();
    dec->add_option("--config", config_path, "run config file")->required();
    dec->add_option("--out", out_dir, "output directory")->required();

    auto* fit = app.add_subcommand("fit", "fit EMD-R1 / EMD-R2 models");
    fit->add_option("--input", input, "input CSV")->required();
    fit->add_option("--config", config_path, "run config file")->required();
    fit->add_option("--out", out_dir, "output directory")->required();
    fit->add_option("--design", design, "r1, r2 or both (overrides config)");

    auto* boot = app.add_subcommand("bootstrap", "bootstrap CIs for a fitted bundle");
    boot->add_option("--bundle", bundle_dir, "bundle directory")->required();
    boot->add_option("--reps", reps, "bootstrap replications");
    boot->add_option("--block-len", block_len, "block length or 'auto'");

    auto* rep = app.add_subcommand("report", "emit plot-ready tables for a bundle");
    rep->add_option("--bundle", bundle_dir, "bundle directory")->required();

    try {
        app.parse(argc, argv);
        if (app.got_subcommand(dec))
            return cmd_decompose(input, config_path, out_dir, g);
        if (app.got_subcommand(fit))
            return cmd_fit(input, config_path, out_dir, design, g);
        if (app.got_subcommand(boot))
            return cmd_bootstrap(bundle_dir, reps, block_len, g);
        if (app.got_subcommand(rep))
            return cmd_report(bundle_dir, g);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        switch (e.kind()) {
            case ErrorKind::Config: return 2;
            case ErrorKind::Data: return 3;
            case ErrorKind::Numeric: return 4;
        }
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
}
