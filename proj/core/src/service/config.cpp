#include "cha/service/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cha/error.hpp"
#include "cha/tools/backends.hpp"
#include "cha/tools/standard_tools.hpp"
#include "json.hpp"

#ifndef CHA_DEFAULT_FIXTURE_DIR
#define CHA_DEFAULT_FIXTURE_DIR "fixtures"
#endif

namespace cha {

namespace {

using json = nlohmann::json;

constexpr std::string_view kBundledSet = "bundled";

template <class T>
void read_opt(const json& j, const char* key, T& target) {
    if (!j.contains(key)) return;
    try {
        target = j.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error(Errc::config_error, std::string("config: bad '") + key + "'");
    }
}

LmConfig parse_lm(const json& j, LmConfig base) {
    if (!j.is_object()) throw Error(Errc::config_error, "config: language model entry must be an object");
    std::string kind;
    read_opt(j, "backend", kind);
    if (kind == "scripted") {
        base.kind = LmConfig::Kind::scripted;
    } else if (kind == "http") {
        base.kind = LmConfig::Kind::http;
    } else if (!kind.empty()) {
        throw Error(Errc::config_error, "config: language model backend '" + kind + "'");
    }
    std::string script;
    read_opt(j, "script", script);
    if (!script.empty()) base.script = script;
    read_opt(j, "endpoint", base.http.endpoint);
    read_opt(j, "model", base.http.model);
    read_opt(j, "timeout_seconds", base.http.timeout_seconds);
    read_opt(j, "max_retries", base.http.max_retries);
    return base;
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::filesystem::path& p) {
    return p.is_relative() ? base / p : p;
}

}  // namespace

std::filesystem::path bundled_fixtures_dir() { return CHA_DEFAULT_FIXTURE_DIR; }

ServiceConfig default_service_config() {
    ServiceConfig config;
    config.fixtures_dir = bundled_fixtures_dir();
    config.tools = tools::standard_tool_specs();
    config.fixture_sets[std::string(kBundledSet)] = "tool_fixtures.json";
    config.planner_lm.script = "lm_script.json";
    config.responder_lm.script = "lm_script.json";
    return config;
}

ServiceConfig parse_service_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw Error(Errc::config_error, std::string("config: ") + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::config_error, "config: expected an object");

    ServiceConfig config = default_service_config();
    std::string bind;
    read_opt(doc, "bind", bind);
    if (!bind.empty()) apply_bind(config, bind);
    std::string path;
    read_opt(doc, "data_dir", path);
    if (!path.empty()) config.data_dir = path;
    path.clear();
    read_opt(doc, "fixtures_dir", path);
    if (!path.empty()) config.fixtures_dir = path;
    read_opt(doc, "workers", config.workers);
    if (config.workers == 0) throw Error(Errc::config_error, "config: workers must be positive");
    read_opt(doc, "char_budget", config.char_budget);
    read_opt(doc, "top_k", config.limits.top_k);
    read_opt(doc, "extract_char_budget", config.limits.extract_char_budget);

    if (doc.contains("fixture_sets")) {
        std::map<std::string, std::string> sets;
        read_opt(doc, "fixture_sets", sets);
        for (const auto& [name, file] : sets) config.fixture_sets[name] = file;
    }
    if (doc.contains("tools")) {
        const auto& tools = doc["tools"];
        if (!tools.is_object()) throw Error(Errc::config_error, "config: 'tools' must be an object");
        for (const auto& [name, entry] : tools.items()) {
            ToolSpec* spec = nullptr;
            for (auto& s : config.tools) {
                if (s.name == name) spec = &s;
            }
            if (spec == nullptr) throw Error(Errc::config_error, "config: unknown tool '" + name + "'");
            std::string kind;
            read_opt(entry, "backend", kind);
            if (!kind.empty()) {
                try {
                    spec->backend.kind = parse_backend_kind(kind);
                } catch (const Error&) {
                    throw Error(Errc::config_error, "config: backend kind '" + kind + "'");
                }
            }
            read_opt(entry, "endpoint", spec->backend.endpoint);
            read_opt(entry, "timeout_seconds", spec->backend.timeout_seconds);
            read_opt(entry, "max_retries", spec->backend.max_retries);
        }
    }
    if (doc.contains("planner_lm")) config.planner_lm = parse_lm(doc["planner_lm"], config.planner_lm);
    if (doc.contains("responder_lm")) config.responder_lm = parse_lm(doc["responder_lm"], config.responder_lm);
    read_opt(doc, "search_api_key", config.search_api_key);
    read_opt(doc, "lm_api_key", config.lm_api_key);
    return config;
}

ServiceConfig load_service_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::config_error, "cannot read config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    ServiceConfig config = parse_service_config(buf.str());
    // Relative paths in a config file are relative to the file.
    const auto base = path.parent_path();
    if (config.data_dir.is_relative()) config.data_dir = base / config.data_dir;
    if (config.fixtures_dir.is_relative() && config.fixtures_dir != bundled_fixtures_dir()) {
        config.fixtures_dir = base / config.fixtures_dir;
    }
    return config;
}

void apply_environment(ServiceConfig& config) {
    if (const char* v = std::getenv("LM_API_KEY"); v != nullptr && *v != '\0') config.lm_api_key = v;
    if (const char* v = std::getenv("SEARCH_API_KEY"); v != nullptr && *v != '\0') config.search_api_key = v;
}

void force_mock_backends(ServiceConfig& config) {
    if (!config.fixture_sets.count(std::string(kBundledSet))) {
        config.fixture_sets[std::string(kBundledSet)] = "tool_fixtures.json";
    }
    for (auto& spec : config.tools) {
        spec.backend.kind = BackendRef::Kind::mock;
        spec.backend.endpoint = std::string(kBundledSet);
    }
    config.planner_lm.kind = LmConfig::Kind::scripted;
    config.responder_lm.kind = LmConfig::Kind::scripted;
    if (config.planner_lm.script.empty()) config.planner_lm.script = "lm_script.json";
    if (config.responder_lm.script.empty()) config.responder_lm.script = "lm_script.json";
}

void apply_bind(ServiceConfig& config, std::string_view bind) {
    const auto colon = bind.rfind(':');
    std::string host = colon == std::string_view::npos ? config.bind_host : std::string(bind.substr(0, colon));
    const std::string port = std::string(colon == std::string_view::npos ? bind : bind.substr(colon + 1));
    if (host.empty()) host = "0.0.0.0";
    try {
        std::size_t used = 0;
        const int p = std::stoi(port, &used);
        if (used != port.size() || p < 0 || p > 65535) throw std::invalid_argument("port");
        config.port = p;
    } catch (const std::exception&) {
        throw Error(Errc::config_error, "bind address '" + std::string(bind) + "'");
    }
    config.bind_host = std::move(host);
}

std::unique_ptr<Runtime> build_runtime(const ServiceConfig& config) {
    BackendEnv env;
    env.search_api_key = config.search_api_key;
    env.lm_api_key = config.lm_api_key;
    env.top_k = config.limits.top_k;
    for (const auto& [name, file] : config.fixture_sets) {
        // Only load sets some tool actually uses.
        bool used = false;
        for (const auto& spec : config.tools) {
            used = used || (spec.backend.kind == BackendRef::Kind::mock && spec.backend.endpoint == name);
        }
        if (used) env.fixture_sets[name] = std::make_shared<FixtureSet>(FixtureSet::load(resolve(config.fixtures_dir, file)));
    }

    auto make_lm = [&](const LmConfig& lm) -> std::unique_ptr<LmBackend> {
        if (lm.kind == LmConfig::Kind::scripted) {
            return std::make_unique<ScriptedLmBackend>(ScriptedLmBackend::load(resolve(config.fixtures_dir, lm.script)));
        }
        auto options = lm.http;
        if (options.api_key.empty()) options.api_key = config.lm_api_key;
        return std::make_unique<HttpChatBackend>(options);
    };

    auto runtime = std::make_unique<Runtime>();
    runtime->registry = make_standard_registry(config.tools, env, config.limits);
    runtime->planner_lm = make_lm(config.planner_lm);
    runtime->responder_lm = make_lm(config.responder_lm);
    runtime->pipeline.response_char_budget = config.char_budget;
    return runtime;
}

}  // namespace cha
