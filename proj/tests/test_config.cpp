#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gnv/config.hpp"
#include "gnv/errors.hpp"

using namespace gnv;
using nlohmann::json;

TEST_SUITE("config") {

TEST_CASE("full document") {
    const auto doc = json::parse(R"({
        "kernel": {"name": "subfbm", "H": 0.65},
        "params": {"k": 1.5, "mu": -2.0, "sigma": 0.5},
        "x0": 0.0,
        "T_list": [10, 20.5],
        "dt": 0.1,
        "replications": 40,
        "master_seed": 18446744073709551615,
        "modes": ["skorohod_plugin"],
        "sampler": "cholesky",
        "scheme": "euler"
    })");
    const auto c = config_from_json(doc);
    CHECK(c.kernel.name == "subfbm");
    CHECK(c.kernel.hurst == 0.65);
    CHECK(c.params.k == 1.5);
    CHECK(c.params.mu == -2.0);
    CHECK(c.params.sigma == 0.5);
    CHECK(c.T_list == std::vector<double>{10.0, 20.5});
    CHECK(c.replications == 40);
    CHECK(c.master_seed == 18446744073709551615ull);
    CHECK(c.modes == std::vector<IntegralMode>{IntegralMode::skorohod_plugin});
    CHECK(c.sampler == SamplerMethod::cholesky);
    CHECK(c.scheme == Scheme::euler);
    CHECK(config_from_json(config_to_json(c)).replications == 40);
    CHECK(config_to_json(config_from_json(config_to_json(c))) == config_to_json(c));
}

TEST_CASE("defaults and sampler choice") {
    CHECK(config_from_json(json::object()).sampler == SamplerMethod::circulant);
    CHECK(config_from_json(json::parse(R"({"kernel": {"name": "subfbm"}})")).sampler == SamplerMethod::cholesky);
    CHECK(config_from_json(json::object()).modes.size() == 3);
}

TEST_CASE("unknown keys and wrong types are rejected") {
    for (const char* text : {R"({"kernal": {}})", R"({"kernel": {"name": "fbm", "hurst": 0.7}})",
                             R"({"params": {"kappa": 1}})", R"({"dt": "0.1"})", R"({"replications": -3})",
                             R"({"replications": 2.5})", R"({"T_list": 100})", R"({"modes": ["ito"]})",
                             R"({"sampler": "spectral"})", R"({"scheme": 3})", R"([1, 2])",
                             R"({"master_seed": -1})"}) {
        INFO(text);
        CHECK_THROWS_AS(config_from_json(json::parse(text)), ConfigError);
    }
}

TEST_CASE("loading from disk") {
    const std::filesystem::path dir = GNV_TEST_TMP;
    std::filesystem::create_directories(dir);
    CHECK_THROWS_AS(load_config(dir / "does_not_exist.json"), IoError);
    {
        std::ofstream(dir / "broken.json") << "{\"dt\": ";
    }
    CHECK_THROWS_AS(load_config(dir / "broken.json"), ConfigError);
    {
        std::ofstream(dir / "ok.json") << R"({"dt": 0.02, "T_list": [4]})";
    }
    CHECK(load_config(dir / "ok.json").dt == 0.02);
}

}  // TEST_SUITE
