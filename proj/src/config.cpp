#include "emdr/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "emdr/csv.hpp"
#include "emdr/parallel.hpp"

namespace emdr {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos;
        double d = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': " + v);
    }
}

long to_long(const std::string& key, const std::string& v) {
    try {
        std::size_t pos;
        long d = std::stol(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("bad integer value for '" + key + "': " + v);
    }
}

bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("bad boolean value for '" + key + "': " + v);
}

} // namespace

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);

    RunConfig cfg;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));

        if (key == "response") cfg.response = value;
        else if (key == "predictors") cfg.predictors = split_list(value);
        else if (key == "date_column") cfg.date_column = value;
        else if (key == "design") cfg.design = value;
        else if (key == "theta1") cfg.theta1 = to_double(key, value);
        else if (key == "theta2") cfg.theta2 = to_double(key, value);
        else if (key == "alpha") cfg.alpha = to_double(key, value);
        else if (key == "max_sift_iters") cfg.max_sift_iters = static_cast<int>(to_long(key, value));
        else if (key == "max_imfs") cfg.max_imfs = static_cast<int>(to_long(key, value));
        else if (key == "boundary") cfg.boundary = value;
        else if (key == "n_noise") cfg.n_noise = static_cast<int>(to_long(key, value));
        else if (key == "noise_variance_ratio") cfg.noise_variance_ratio = to_double(key, value);
        else if (key == "directions") cfg.directions = static_cast<std::size_t>(to_long(key, value));
        else if (key == "standardize") cfg.standardize = to_bool(key, value);
        else if (key == "cv_folds") cfg.cv_folds = static_cast<int>(to_long(key, value));
        else if (key == "cv_scheme") cfg.cv_scheme = value;
        else if (key == "n_lambda") cfg.n_lambda = static_cast<int>(to_long(key, value));
        else if (key == "lambda_ratio") cfg.lambda_ratio = to_double(key, value);
        else if (key == "bootstrap_reps") cfg.bootstrap_reps = static_cast<int>(to_long(key, value));
        else if (key == "block_len") {
            if (value == "auto") cfg.block_len = 0;
            else cfg.block_len = static_cast<std::size_t>(to_long(key, value));
        }
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(to_long(key, value));
        else if (key == "threads") cfg.threads = static_cast<int>(to_long(key, value));
        else
            throw ConfigError("unknown config key '" + key + "' at line " +
                              std::to_string(lineno));
    }
    return cfg;
}

void RunConfig::validate() const {
    if (response.empty()) throw ConfigError("config: response is required");
    if (predictors.empty()) throw ConfigError("config: predictors are required");
    for (const auto& p : predictors)
        if (p == response)
            throw ConfigError("config: response must not appear in predictors");
    if (design != "r1" && design != "r2" && design != "both")
        throw ConfigError("config: design must be r1, r2 or both");
    if (boundary != "mirror" && boundary != "clamp")
        throw ConfigError("config: boundary must be mirror or clamp");
    if (cv_scheme != "blocks" && cv_scheme != "random")
        throw ConfigError("config: cv_scheme must be blocks or random");
    if (!(theta1 > 0.0 && theta1 < theta2))
        throw ConfigError("config: need 0 < theta1 < theta2");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ConfigError("config: need 0 < alpha < 1");
    if (n_noise < 1) throw ConfigError("config: n_noise must be >= 1");
    if (noise_variance_ratio <= 0.0 || noise_variance_ratio >= 1.0)
        throw ConfigError("config: noise_variance_ratio must be in (0, 1)");
    if (cv_folds < 2) throw ConfigError("config: cv_folds must be >= 2");
    if (n_lambda < 2) throw ConfigError("config: n_lambda must be >= 2");
    if (lambda_ratio <= 0.0 || lambda_ratio >= 1.0)
        throw ConfigError("config: lambda_ratio must be in (0, 1)");
    if (bootstrap_reps < 2) throw ConfigError("config: bootstrap_reps must be >= 2");
}

SiftParams RunConfig::sift_params() const {
    SiftParams sp;
    sp.theta1 = theta1;
    sp.theta2 = theta2;
    sp.alpha = alpha;
    sp.max_sift_iters = max_sift_iters;
    sp.max_imfs = max_imfs;
    sp.boundary = boundary == "clamp" ? BoundaryPolicy::ClampEndpoints
                                      : BoundaryPolicy::Mirror;
    return sp;
}

EmdrOptions RunConfig::to_options() const {
    EmdrOptions opt;
    opt.sift = sift_params();
    opt.noise.n_noise = n_noise;
    opt.noise.variance_ratio = noise_variance_ratio;
    opt.n_directions = directions;
    opt.standardize = standardize;
    opt.cv_folds = cv_folds;
    opt.cv_scheme = cv_scheme == "random" ? CvScheme::Random
                                          : CvScheme::ContiguousBlocks;
    opt.n_lambda = n_lambda;
    opt.lambda_ratio = lambda_ratio;
    opt.seed = seed;
    opt.n_threads = resolve_threads(threads);
    opt.response_name = response;
    return opt;
}

std::map<std::string, std::string> RunConfig::echo() const {
    std::map<std::string, std::string> m;
    m["response"] = response;
    std::string preds;
    for (std::size_t i = 0; i < predictors.size(); ++i)
        preds += (i ? "," : "") + predictors[i];
    m["predictors"] = preds;
    m["date_column"] = date_column;
    m["design"] = design;
    m["theta1"] = format_double(theta1);
    m["theta2"] = format_double(theta2);
    m["alpha"] = format_double(alpha);
    m["max_sift_iters"] = std::to_string(max_sift_iters);
    m["max_imfs"] = std::to_string(max_imfs);
    m["boundary"] = boundary;
    m["n_noise"] = std::to_string(n_noise);
    m["noise_variance_ratio"] = format_double(noise_variance_ratio);
    m["directions"] = std::to_string(directions);
    m["standardize"] = standardize ? "true" : "false";
    m["cv_folds"] = std::to_string(cv_folds);
    m["cv_scheme"] = cv_scheme;
    m["n_lambda"] = std::to_string(n_lambda);
    m["lambda_ratio"] = format_double(lambda_ratio);
    m["bootstrap_reps"] = std::to_string(bootstrap_reps);
    m["block_len"] = block_len == 0 ? "auto" : std::to_string(block_len);
    m["seed"] = std::to_string(seed);
    m["threads"] = std::to_string(threads);
    return m;
}

} // namespace emdr
