#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "cha/orchestrator/pipeline.hpp"
#include "cha/planner/lm.hpp"
#include "cha/tools/registry.hpp"

namespace cha {

struct LmConfig {
    enum class Kind { scripted, http };
    Kind kind = Kind::scripted;
    std::filesystem::path script;  // scripted; relative to fixtures_dir
    HttpChatBackend::Options http;
};

struct ServiceConfig {
    std::string bind_host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::filesystem::path data_dir = "data";
    std::filesystem::path fixtures_dir;  // defaults to the bundled fixtures
    std::size_t workers = 4;

    std::vector<ToolSpec> tools;  // standard specs with their backend bindings
    std::map<std::string, std::filesystem::path> fixture_sets;  // name -> file (relative to fixtures_dir)
    LmConfig planner_lm;
    LmConfig responder_lm;

    std::size_t char_budget = 6000;
    ToolLimits limits;
    std::string search_api_key;
    std::string lm_api_key;
};

/// The compiled-in location of the bundled fixture files.
std::filesystem::path bundled_fixtures_dir();

/// Every tool on the bundled mock set, both language models scripted.
ServiceConfig default_service_config();

/// Overlays a JSON config file on the defaults. Throws Errc::config_error.
ServiceConfig parse_service_config(std::string_view json_text);
ServiceConfig load_service_config(const std::filesystem::path& path);

/// LM_API_KEY and SEARCH_API_KEY from the environment, when set.
void apply_environment(ServiceConfig& config);

/// Rebinds every tool and both language models to bundled fixtures.
void force_mock_backends(ServiceConfig& config);

/// "host:port" or ":port" or "port". Throws Errc::config_error.
void apply_bind(ServiceConfig& config, std::string_view bind);

/// Registry plus language models built from a config.
struct Runtime {
    ToolRegistry registry;
    std::unique_ptr<LmBackend> planner_lm;
    std::unique_ptr<LmBackend> responder_lm;
    PipelineConfig pipeline;
};

std::unique_ptr<Runtime> build_runtime(const ServiceConfig& config);

}  // namespace cha
