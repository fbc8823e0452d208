#include "emdr/bundle.hpp"

#include <chrono>
#include <cmath>
#include <fstream>

#include <json.hpp>

namespace emdr::bundle {

namespace {

using nlohmann::json;

std::string cell_or_empty(double v) {
    return std::isfinite(v) ? format_double(v) : "";
}

} // namespace

void write_manifest(const std::filesystem::path& dir, const RunConfig& cfg,
                    const std::vector<std::string>& warnings) {
    std::ofstream out(dir / "manifest.txt");
    if (!out) throw ParseError("cannot write manifest");
    out << "tool = emdr " << kVersion << "\n";
    const auto now = std::chrono::system_clock::now();
    out << "timestamp_unix = "
        << std::chrono::duration_cast<std::chrono::seconds>(
               now.time_since_epoch())
               .count()
        << "\n";
    for (const auto& [k, v] : cfg.echo()) out << k << " = " << v << "\n";
    for (const auto& w : warnings) out << "warning = " << w << "\n";
}

void write_decomposition(const std::filesystem::path& dir, const std::string& tag,
                         const std::string& channel, const Decomposition& dec,
                         const std::optional<CivilDate>& start) {
    std::vector<std::string> header{"t"};
    if (start) header.push_back("date");
    for (std::size_t k = 0; k < dec.imfs.size(); ++k)
        header.push_back("imf_" + std::to_string(k + 1));
    header.push_back("residue");

    std::vector<std::vector<std::string>> rows;
    rows.reserve(dec.residue.size());
    for (std::size_t t = 0; t < dec.residue.size(); ++t) {
        std::vector<std::string> row;
        row.push_back(std::to_string(t));
        if (start) row.push_back(start->plus_days(static_cast<long>(t)).to_string());
        for (const auto& imf : dec.imfs) row.push_back(format_double(imf.values[t]));
        row.push_back(format_double(dec.residue[t]));
        rows.push_back(std::move(row));
    }
    write_csv_file((dir / ("decomposition_" + tag + channel + ".csv")).string(),
                   header, rows);
}

void write_model(const std::filesystem::path& dir, const std::string& tag,
                 const EmdrModel& model, const BootstrapResult* boot) {
    std::vector<std::string> header{
        "submodel", "predictor",  "imf_order",   "mean_period", "lag",
        "ccf",      "max_lag",    "beta",        "amplitude",   "sensitivity",
        "ci_lower", "ci_upper",   "significant", "lambda",      "intercept"};
    std::vector<std::vector<std::string>> rows;
    for (std::size_t s = 0; s < model.submodels.size(); ++s) {
        const auto& sub = model.submodels[s];
        for (std::size_t j = 0; j < sub.columns.size(); ++j) {
            const auto& col = sub.columns[j];
            std::vector<std::string> row;
            row.push_back(sub.label);
            row.push_back(col.predictor);
            row.push_back(std::to_string(col.order));
            row.push_back(cell_or_empty(col.mean_period));
            row.push_back(std::to_string(col.lag));
            row.push_back(cell_or_empty(col.ccf));
            row.push_back(std::to_string(col.max_lag));
            row.push_back(format_double(sub.fit.beta[j]));
            row.push_back(format_double(col.amplitude));
            row.push_back(format_double(sub.fit.beta[j] * col.amplitude));
            if (boot) {
                const auto& ci = boot->per_submodel[s][j];
                row.push_back(format_double(ci.lower));
                row.push_back(format_double(ci.upper));
                row.push_back(ci.significant ? "1" : "0");
            } else {
                row.push_back("");
                row.push_back("");
                row.push_back("");
            }
            row.push_back(format_double(sub.fit.lambda));
            row.push_back(format_double(sub.fit.intercept));
            rows.push_back(std::move(row));
        }
    }
    write_csv_file((dir / ("model_" + tag + ".csv")).string(), header, rows);
}

void write_diagnostics(const std::filesystem::path& dir,
                       const std::vector<DiagnosticsRow>& rows) {
    std::vector<std::string> header{"design", "submodel", "lambda", "df",
                                    "r_squared", "gcv", "n_rows"};
    std::vector<std::vector<std::string>> cells;
    for (const auto& r : rows)
        cells.push_back({r.design, r.submodel, format_double(r.lambda),
                         std::to_string(r.df), format_double(r.r2),
                         format_double(r.gcv), std::to_string(r.n_rows)});
    write_csv_file((dir / "diagnostics.csv").string(), header, cells);
}

void write_state(const std::filesystem::path& dir, const std::string& tag,
                 const EmdrModel& model, const std::optional<CivilDate>& start,
                 const BootstrapResult* boot) {
    json j;
    j["design"] = tag;
    j["response"] = model.response_name;
    j["predictors"] = model.predictor_names;
    j["K"] = model.K;
    j["trim"] = model.trim;
    j["n_rows"] = model.n_rows;
    j["start_date"] = start ? json(start->to_string()) : json(nullptr);
    j["warnings"] = model.warnings;
    if (boot) {
        j["bootstrap"] = {{"B", boot->B}, {"block_len", boot->block_len}};
    }

    json subs = json::array();
    for (std::size_t s = 0; s < model.submodels.size(); ++s) {
        const auto& sub = model.submodels[s];
        json js;
        js["label"] = sub.label;
        js["order"] = sub.order;
        js["lambda"] = sub.fit.lambda;
        js["intercept"] = sub.fit.intercept;
        js["df"] = sub.fit.df;
        js["rss"] = sub.fit.rss;
        js["r2"] = sub.r2;
        js["gcv"] = sub.gcv_value;
        js["lambda_min"] = sub.cv.lambda_min;
        js["lambda_1se"] = sub.cv.lambda_1se;
        js["beta"] = sub.fit.beta;
        js["beta_std"] = sub.fit.beta_std;
        js["response_values"] = sub.response;
        json cols = json::array();
        for (std::size_t c = 0; c < sub.columns.size(); ++c) {
            const auto& col = sub.columns[c];
            json jc;
            jc["predictor"] = col.predictor;
            jc["order"] = col.order;
            jc["lag"] = col.lag;
            jc["ccf"] = std::isfinite(col.ccf) ? json(col.ccf) : json(nullptr);
            jc["max_lag"] = col.max_lag;
            jc["mean_period"] =
                std::isfinite(col.mean_period) ? json(col.mean_period) : json(nullptr);
            jc["amplitude"] = col.amplitude;
            jc["values"] = sub.design.columns[c];
            if (boot) {
                const auto& ci = boot->per_submodel[s][c];
                jc["ci_lower"] = ci.lower;
                jc["ci_upper"] = ci.upper;
                jc["significant"] = ci.significant;
            }
            cols.push_back(std::move(jc));
        }
        js["columns"] = std::move(cols);
        subs.push_back(std::move(js));
    }
    j["submodels"] = std::move(subs);

    std::ofstream out(dir / ("state_" + tag + ".json"));
    if (!out) throw ParseError("cannot write state file");
    out << j.dump();
}

LoadedState load_state(const std::filesystem::path& dir, const std::string& tag) {
    std::ifstream in(dir / ("state_" + tag + ".json"));
    if (!in) throw ParseError("no state file for design " + tag + " in bundle");
    json j = json::parse(in);

    LoadedState st;
    st.model.design = tag == "r2" ? EmdrDesign::R2 : EmdrDesign::R1;
    st.model.response_name = j["response"].get<std::string>();
    st.model.predictor_names = j["predictors"].get<std::vector<std::string>>();
    st.model.K = j["K"].get<std::size_t>();
    st.model.trim = j["trim"].get<std::size_t>();
    st.model.n_rows = j["n_rows"].get<std::size_t>();
    st.model.warnings = j["warnings"].get<std::vector<std::string>>();
    if (!j["start_date"].is_null())
        st.start_date = CivilDate::parse(j["start_date"].get<std::string>());
    if (j.contains("bootstrap")) {
        st.has_bootstrap = true;
        st.boot.B = j["bootstrap"]["B"].get<int>();
        st.boot.block_len = j["bootstrap"]["block_len"].get<std::size_t>();
    }

    for (const auto& js : j["submodels"]) {
        EmdrSubmodel sub;
        sub.label = js["label"].get<std::string>();
        sub.order = js["order"].get<int>();
        sub.fit.lambda = js["lambda"].get<double>();
        sub.fit.intercept = js["intercept"].get<double>();
        sub.fit.df = js["df"].get<std::size_t>();
        sub.fit.rss = js["rss"].get<double>();
        sub.r2 = js["r2"].get<double>();
        sub.gcv_value = js["gcv"].get<double>();
        sub.cv.lambda_min = js["lambda_min"].get<double>();
        sub.cv.lambda_1se = js["lambda_1se"].get<double>();
        sub.fit.beta = js["beta"].get<std::vector<double>>();
        sub.fit.beta_std = js["beta_std"].get<std::vector<double>>();
        sub.response = js["response_values"].get<std::vector<double>>();
        std::vector<CoefInterval> cis;
        for (const auto& jc : js["columns"]) {
            EmdrColumn col;
            col.predictor = jc["predictor"].get<std::string>();
            col.order = jc["order"].get<int>();
            col.lag = jc["lag"].get<int>();
            col.ccf = jc["ccf"].is_null() ? std::nan("")
                                          : jc["ccf"].get<double>();
            col.max_lag = jc["max_lag"].get<int>();
            col.mean_period = jc["mean_period"].is_null()
                                  ? std::nan("")
                                  : jc["mean_period"].get<double>();
            col.amplitude = jc["amplitude"].get<double>();
            sub.design.columns.push_back(jc["values"].get<std::vector<double>>());
            sub.design.names.push_back(col.predictor);
            if (st.has_bootstrap && jc.contains("ci_lower")) {
                CoefInterval ci;
                ci.lower = jc["ci_lower"].get<double>();
                ci.upper = jc["ci_upper"].get<double>();
                ci.significant = jc["significant"].get<bool>();
                cis.push_back(ci);
            }
            sub.columns.push_back(std::move(col));
        }
        if (st.has_bootstrap) st.boot.per_submodel.push_back(std::move(cis));
        st.model.submodels.push_back(std::move(sub));
    }
    return st;
}

std::vector<std::string> designs_present(const std::filesystem::path& dir) {
    std::vector<std::string> out;
    for (const char* tag : {"r1", "r2"})
        if (std::filesystem::exists(dir / (std::string("state_") + tag + ".json")))
            out.push_back(tag);
    return out;
}

} // namespace emdr::bundle
