#include "gnv/config.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <string_view>

#include "gnv/errors.hpp"

namespace gnv {
namespace {

using nlohmann::json;

void reject_unknown(const json& obj, std::string_view where,
                    std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        throw ConfigError(std::string(where) + " must be a JSON object");
    }
    for (const auto& item : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
            throw ConfigError("unknown key '" + item.key() + "' in " + std::string(where));
        }
    }
}

double number(const json& v, std::string_view key) {
    if (!v.is_number()) {
        throw ConfigError("'" + std::string(key) + "' must be a number");
    }
    return v.get<double>();
}

std::string text(const json& v, std::string_view key) {
    if (!v.is_string()) {
        throw ConfigError("'" + std::string(key) + "' must be a string");
    }
    return v.get<std::string>();
}

}  // namespace

ExperimentConfig config_from_json(const json& doc) {
    reject_unknown(doc, "config", {"kernel", "params", "x0", "T_list", "dt", "replications",
                                   "master_seed", "modes", "sampler", "scheme"});
    ExperimentConfig cfg;
    if (doc.contains("kernel")) {
        const json& k = doc["kernel"];
        reject_unknown(k, "kernel", {"name", "H"});
        if (k.contains("name")) cfg.kernel.name = text(k["name"], "kernel.name");
        if (k.contains("H")) cfg.kernel.hurst = number(k["H"], "kernel.H");
    }
    if (doc.contains("params")) {
        const json& p = doc["params"];
        reject_unknown(p, "params", {"k", "mu", "sigma"});
        if (p.contains("k")) cfg.params.k = number(p["k"], "params.k");
        if (p.contains("mu")) cfg.params.mu = number(p["mu"], "params.mu");
        if (p.contains("sigma")) cfg.params.sigma = number(p["sigma"], "params.sigma");
    }
    if (doc.contains("x0")) cfg.x0 = number(doc["x0"], "x0");
    if (doc.contains("T_list")) {
        const json& ts = doc["T_list"];
        if (!ts.is_array()) {
            throw ConfigError("'T_list' must be an array of numbers");
        }
        cfg.T_list.clear();
        for (const auto& t : ts) cfg.T_list.push_back(number(t, "T_list"));
    }
    if (doc.contains("dt")) cfg.dt = number(doc["dt"], "dt");
    if (doc.contains("replications")) {
        const json& r = doc["replications"];
        if (!r.is_number_unsigned()) {
            throw ConfigError("'replications' must be a non-negative integer");
        }
        cfg.replications = r.get<std::size_t>();
    }
    if (doc.contains("master_seed")) {
        const json& s = doc["master_seed"];
        if (!s.is_number_unsigned()) {
            throw ConfigError("'master_seed' must be a non-negative integer");
        }
        cfg.master_seed = s.get<std::uint64_t>();
    }
    if (doc.contains("modes")) {
        const json& ms = doc["modes"];
        if (!ms.is_array()) {
            throw ConfigError("'modes' must be an array of strings");
        }
        cfg.modes.clear();
        for (const auto& m : ms) cfg.modes.push_back(parse_integral_mode(text(m, "modes")));
    }
    if (doc.contains("sampler")) {
        cfg.sampler = parse_sampler_method(text(doc["sampler"], "sampler"));
    } else {
        cfg.sampler = cfg.kernel.name == "fbm" ? SamplerMethod::circulant : SamplerMethod::cholesky;
    }
    if (doc.contains("scheme")) cfg.scheme = parse_scheme(text(doc["scheme"], "scheme"));
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open config file " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return config_from_json(doc);
}

json config_to_json(const ExperimentConfig& cfg) {
    json modes = json::array();
    for (auto m : cfg.modes) modes.push_back(std::string(to_string(m)));
    return json{{"kernel", {{"name", cfg.kernel.name}, {"H", cfg.kernel.hurst}}},
                {"params", {{"k", cfg.params.k}, {"mu", cfg.params.mu}, {"sigma", cfg.params.sigma}}},
                {"x0", cfg.x0},
                {"T_list", cfg.T_list},
                {"dt", cfg.dt},
                {"replications", cfg.replications},
                {"master_seed", cfg.master_seed},
                {"modes", modes},
                {"sampler", std::string(to_string(cfg.sampler))},
                {"scheme", std::string(to_string(cfg.scheme))}};
}

}  // namespace gnv
