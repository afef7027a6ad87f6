// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/pipeline/config.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/hash.hpp"
#include "ultrachat/core/record_io.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace ultrachat::pipeline {

namespace {

using nlohmann::json;

std::vector<ConfigKey> build_schema()
{
    std::vector<ConfigKey> keys = {
        {"seed", ValueKind::integer, 42, "root seed; every stage derives its randomness from it"},

        {"backend.kind", ValueKind::text, "mock", "mock, live or http (live is an alias of http)", true,
         {"mock", "live", "http"}},
        {"backend.base_url", ValueKind::text, "https://api.openai.com/v1", "OpenAI-compatible API root"},
        {"backend.api_key_env", ValueKind::text, "OPENAI_API_KEY",
         "environment variable holding the API key; empty sends no key", false},
        {"backend.user_model", ValueKind::text, "gpt-3.5-turbo", "model playing the user"},
        {"backend.assistant_model", ValueKind::text, "gpt-3.5-turbo", "model playing the assistant"},
        {"backend.judge_model", ValueKind::text, "gpt-4", "model used as judge"},
        {"backend.embedding_model", ValueKind::text, "text-embedding-ada-002", "embedding model"},
        {"backend.requests_per_minute", ValueKind::integer, 0, "shared request budget; 0 disables throttling",
         false},
        {"backend.cache_dir", ValueKind::text, "", "response cache directory; empty keeps it in memory", false},
        {"backend.timeout_seconds", ValueKind::integer, 120, "per-request timeout", false},

        {"runtime.concurrency", ValueKind::integer, 4, "bound on in-flight record tasks", false},
        {"runtime.checkpoint_every", ValueKind::integer, 25, "dialogues between simulate checkpoints", false},
        {"runtime.timestamps", ValueKind::text, "auto",
         "fixed writes the epoch, wallclock the current time, auto picks fixed for mock", false,
         {"auto", "fixed", "wallclock"}},
        {"runtime.log_level", ValueKind::text, "info", "trace, debug, info, warn, error or off", false,
         {"trace", "debug", "info", "warn", "error", "off"}},

        {"seeds.meta_topics", ValueKind::integer, 1, "how many meta-topics to expand, from the top of the list"},
        {"seeds.subtopics_per_topic", ValueKind::integer, 40, "subtopics per meta-topic"},
        {"seeds.questions_per_subtopic", ValueKind::integer, 10, "questions per subtopic"},
        {"seeds.expansions_per_question", ValueKind::integer, 10, "extra questions per question"},
        {"seeds.entity_file", ValueKind::text, "", "rank<TAB>name file; empty uses the bundled sample"},
        {"seeds.entities", ValueKind::integer, 2, "entities taken from the list, by rank"},
        {"seeds.entity_meta", ValueKind::integer, 5, "meta-questions per entity"},
        {"seeds.entity_specific", ValueKind::integer, 10, "entity-specific questions"},
        {"seeds.entity_extended", ValueKind::integer, 20, "extended questions"},
        {"seeds.entity_counts", ValueKind::text, "per-meta",
         "whether specific/extended counts apply per meta-question or per entity", true,
         {"per-meta", "per-entity"}},
        {"seeds.instructions_per_type", ValueKind::integer, 5, "writing instructions per material type"},
        {"seeds.refine_fraction", ValueKind::real, 0.8, "share of writing instructions sent for refinement"},
        {"seeds.corpus_file", ValueKind::text, "", "url/text JSONL corpus; empty uses the bundled sample"},
        {"seeds.pieces_limit", ValueKind::integer, 0, "cap on classified pieces; 0 keeps all"},
        {"seeds.instructions_per_piece", ValueKind::integer, 5, "instructions generated per text piece"},
        {"seeds.world_sample", ValueKind::integer, 40, "openings sampled from the world-questions pool"},
        {"seeds.creation_sample", ValueKind::integer, 40, "openings sampled from the creation pool"},
        {"seeds.material_sample", ValueKind::integer, 40, "openings sampled from the material pool"},
        {"seeds.min_opening_chars", ValueKind::integer, 10, "shortest opening kept"},
        {"seeds.max_opening_chars", ValueKind::integer, 6000, "longest opening kept"},
        {"seeds.retry_cap", ValueKind::integer, 3, "extra generation calls when a list comes back short"},
        {"seeds.temperature", ValueKind::real, 1.0, "sampling temperature for seed generation"},

        {"simulate.max_rounds", ValueKind::integer, 8, "hard cap on user/assistant rounds"},
        {"simulate.min_rounds", ValueKind::integer, 2, "dialogues with fewer rounds are rejected"},
        {"simulate.user_temperature", ValueKind::real, 1.0, "user simulator temperature"},
        {"simulate.assistant_temperature", ValueKind::real, 0.7, "assistant temperature"},
        {"simulate.max_output_tokens", ValueKind::integer, 1024, "completion budget per turn"},
        {"simulate.termination_marker", ValueKind::text, "<END_OF_DIALOGUE>", "user reply that ends a dialogue"},
        {"simulate.assistant_system_prompt", ValueKind::text, "", "optional system prompt for the assistant"},
        {"simulate.reinforce_objective", ValueKind::boolean, false,
         "restate the objective in every user prompt (always on for creation)"},

        {"filter.min_utterance_tokens", ValueKind::integer, 1, "shortest utterance kept"},
        {"filter.max_utterance_tokens", ValueKind::integer, 2048, "longest utterance kept"},

        {"stats.input", ValueKind::text, "", "dataset to describe; empty reads the filter output"},
        {"stats.tokenizer", ValueKind::text, "unicode-words", "unicode-words or whitespace", true,
         {"unicode-words", "whitespace"}},
        {"stats.mtld_threshold", ValueKind::real, 0.72, "MTLD type-token ratio threshold"},
        {"stats.min_mtld_tokens", ValueKind::integer, 3, "utterances shorter than this are skipped"},
        {"stats.topic_sample", ValueKind::integer, 10000, "records sampled for topic diversity"},
        {"stats.coherence_sample", ValueKind::integer, 200, "dialogues sampled for coherence"},
        {"stats.topic_text", ValueKind::text, "full", "embed the full dialogue or the opening only", true,
         {"full", "opening"}},
        {"stats.use_backend", ValueKind::boolean, true, "compute topic diversity and coherence"},

        {"eval.max_retries", ValueKind::integer, 2, "re-asks after an unparseable judge reply"},
        {"eval.max_output_tokens", ValueKind::integer, 512, "judge completion budget"},
    };
    return keys;
}

const ConfigKey* find_key(std::string_view name)
{
    for (const auto& key : config_schema()) {
        if (key.name == name) {
            return &key;
        }
    }
    return nullptr;
}

const ConfigKey& require_key(const std::string& name)
{
    if (const auto* key = find_key(name)) {
        return *key;
    }
    auto message = fmt::format("unknown config key '{}'", name);
    if (auto suggestion = suggest_key(name)) {
        message += fmt::format(" (did you mean '{}'?)", *suggestion);
    }
    throw ConfigError(message);
}

std::size_t edit_distance(std::string_view a, std::string_view b)
{
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) {
        row[j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t above = row[j];
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + (a[i - 1] == b[j - 1] ? 0 : 1)});
            diagonal = above;
        }
    }
    return row[b.size()];
}

std::string_view kind_name(ValueKind kind)
{
    switch (kind) {
    case ValueKind::integer:
        return "an integer";
    case ValueKind::real:
        return "a number";
    case ValueKind::boolean:
        return "a boolean";
    case ValueKind::text:
        return "a string";
    }
    return "a value";
}

json coerce(const ConfigKey& key, const json& value)
{
    const auto wrong = [&] {
        return ConfigError(fmt::format("config key '{}' must be {}, got {}", key.name, kind_name(key.kind),
                                       value.dump()));
    };
    switch (key.kind) {
    case ValueKind::integer:
        if (value.is_number_integer()) {
            return value.get<std::int64_t>();
        }
        if (value.is_number_float()) {
            const double x = value.get<double>();
            if (std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9.0e15) {
                return static_cast<std::int64_t>(x);
            }
        }
        throw wrong();
    case ValueKind::real:
        if (value.is_number() && std::isfinite(value.get<double>())) {
            return value.get<double>();
        }
        throw wrong();
    case ValueKind::boolean:
        if (value.is_boolean()) {
            return value;
        }
        throw wrong();
    case ValueKind::text:
        if (!value.is_string()) {
            throw wrong();
        }
        if (!key.choices.empty() &&
            std::find(key.choices.begin(), key.choices.end(), value.get<std::string>()) == key.choices.end()) {
            throw ConfigError(fmt::format("config key '{}' must be one of {}, got {}", key.name,
                                          fmt::join(key.choices, ", "), value.dump()));
        }
        return value;
    }
    throw wrong();
}

json parse_text(const ConfigKey& key, const std::string& text)
{
    const auto wrong = [&] {
        return ConfigError(fmt::format("config key '{}' must be {}, got '{}'", key.name, kind_name(key.kind), text));
    };
    switch (key.kind) {
    case ValueKind::integer: {
        errno = 0;
        char* end = nullptr;
        const long long parsed = std::strtoll(text.c_str(), &end, 10);
        if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
            throw wrong();
        }
        return static_cast<std::int64_t>(parsed);
    }
    case ValueKind::real: {
        errno = 0;
        char* end = nullptr;
        const double parsed = std::strtod(text.c_str(), &end);
        if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(parsed)) {
            throw wrong();
        }
        return parsed;
    }
    case ValueKind::boolean: {
        std::string lowered = text;
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        if (lowered == "true" || lowered == "1" || lowered == "yes" || lowered == "on") {
            return true;
        }
        if (lowered == "false" || lowered == "0" || lowered == "no" || lowered == "off") {
            return false;
        }
        throw wrong();
    }
    case ValueKind::text:
        return text;
    }
    throw wrong();
}

void flatten(const json& node, const std::string& prefix, std::map<std::string, json>& out)
{
    for (const auto& [name, value] : node.items()) {
        const std::string key = prefix.empty() ? name : prefix + "." + name;
        if (value.is_object()) {
            flatten(value, key, out);
        } else {
            out[key] = value;
        }
    }
}

bool has_prefix(std::string_view key, std::string_view prefix)
{
    return key.size() > prefix.size() && key.substr(0, prefix.size()) == prefix && key[prefix.size()] == '.';
}

} // namespace

const std::vector<ConfigKey>& config_schema()
{
    static const std::vector<ConfigKey> schema = build_schema();
    return schema;
}

std::string env_name(std::string_view key)
{
    std::string name = "ULTRACHAT_";
    for (char c : key) {
        name += c == '.' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    }
    return name;
}

EnvLookup process_env()
{
    return [](const std::string& name) -> std::optional<std::string> {
        if (const char* value = std::getenv(name.c_str())) {
            return std::string(value);
        }
        return std::nullopt;
    };
}

std::optional<std::string> suggest_key(std::string_view unknown)
{
    std::optional<std::string> best;
    std::size_t best_distance = 4;
    for (const auto& key : config_schema()) {
        std::size_t distance = edit_distance(unknown, key.name);
        // Let a bare leaf name such as "max_rounds" find its section.
        const auto dot = key.name.rfind('.');
        if (dot != std::string::npos) {
            distance = std::min(distance, edit_distance(unknown, std::string_view(key.name).substr(dot + 1)));
        }
        if (distance < best_distance) {
            best_distance = distance;
            best = key.name;
        }
    }
    return best;
}

Config::Config()
{
    for (const auto& key : config_schema()) {
        values_[key.name] = key.fallback;
        sources_[key.name] = "default";
    }
}

Config Config::load(const std::optional<std::filesystem::path>& file,
                    const std::map<std::string, std::string>& overrides, const EnvLookup& env)
{
    Config config;
    if (file) {
        if (!std::filesystem::exists(*file)) {
            throw InputError(fmt::format("config file not found: {}", file->string()));
        }
        json document;
        try {
            document = json::parse(read_file(*file));
        } catch (const json::parse_error& error) {
            throw ConfigError(fmt::format("config file {} is not valid JSON: {}", file->string(), error.what()));
        }
        if (!document.is_object()) {
            throw ConfigError(fmt::format("config file {} must hold a JSON object", file->string()));
        }
        std::map<std::string, json> flat;
        flatten(document, "", flat);
        for (const auto& [key, value] : flat) {
            config.set(key, value, "file");
        }
    }
    for (const auto& key : config_schema()) {
        if (auto value = env(env_name(key.name))) {
            config.set_text(key.name, *value, "env");
        }
    }
    for (const auto& [key, value] : overrides) {
        config.set_text(key, value, "cli");
    }
    return config;
}

void Config::set(const std::string& key, const json& value, const std::string& source)
{
    const auto& spec = require_key(key);
    values_[key] = coerce(spec, value);
    sources_[key] = source;
}

void Config::set_text(const std::string& key, const std::string& value, const std::string& source)
{
    const auto& spec = require_key(key);
    values_[key] = coerce(spec, parse_text(spec, value));
    sources_[key] = source;
}

const json& Config::value(const std::string& key) const
{
    require_key(key);
    return values_.at(key);
}

std::int64_t Config::integer(const std::string& key) const
{
    return value(key).get<std::int64_t>();
}

std::size_t Config::count(const std::string& key) const
{
    const auto n = integer(key);
    if (n < 0) {
        throw ConfigError(fmt::format("config key '{}' must not be negative, got {}", key, n));
    }
    return static_cast<std::size_t>(n);
}

double Config::real(const std::string& key) const
{
    return value(key).get<double>();
}

bool Config::boolean(const std::string& key) const
{
    return value(key).get<bool>();
}

const std::string& Config::text(const std::string& key) const
{
    return value(key).get_ref<const std::string&>();
}

std::uint64_t Config::seed() const
{
    return static_cast<std::uint64_t>(integer("seed"));
}

const std::string& Config::source(const std::string& key) const
{
    require_key(key);
    return sources_.at(key);
}

json Config::to_json() const
{
    json out = json::object();
    for (const auto& [key, value] : values_) {
        out[key] = value;
    }
    return out;
}

std::string Config::fingerprint(const std::vector<std::string>& prefixes) const
{
    json subset = json::object();
    for (const auto& key : config_schema()) {
        if (!key.affects_output) {
            continue;
        }
        bool include = key.name == "seed" || has_prefix(key.name, "backend");
        for (const auto& prefix : prefixes) {
            include = include || has_prefix(key.name, prefix);
        }
        if (include) {
            subset[key.name] = values_.at(key.name);
        }
    }
    std::string kind = text("backend.kind");
    if (kind == "live") {
        subset["backend.kind"] = "http";
    }
    return sha256_hex(subset.dump()).substr(0, 32);
}

BackendConfig Config::backend() const
{
    BackendConfig config;
    config.kind = text("backend.kind") == "live" ? "http" : text("backend.kind");
    config.seed = seed();
    config.base_url = text("backend.base_url");
    config.api_key_env = text("backend.api_key_env");
    config.user_model = text("backend.user_model");
    config.assistant_model = text("backend.assistant_model");
    config.judge_model = text("backend.judge_model");
    config.embedding_model = text("backend.embedding_model");
    config.requests_per_minute = count("backend.requests_per_minute");
    config.cache_dir = text("backend.cache_dir");
    config.timeout_seconds = static_cast<int>(count("backend.timeout_seconds"));
    return config;
}

seeds::GenerationOptions Config::generation() const
{
    seeds::GenerationOptions options;
    options.retry_cap = count("seeds.retry_cap");
    options.temperature = real("seeds.temperature");
    options.model = text("backend.user_model");
    options.concurrency = concurrency();
    return options;
}

seeds::TopicFanout Config::fanout() const
{
    return {count("seeds.subtopics_per_topic"), count("seeds.questions_per_subtopic"),
            count("seeds.expansions_per_question")};
}

seeds::EntityCounts Config::entity_counts() const
{
    seeds::EntityCounts counts;
    counts.meta = count("seeds.entity_meta");
    counts.specific = count("seeds.entity_specific");
    counts.extended = count("seeds.entity_extended");
    counts.mode = text("seeds.entity_counts") == "per-entity" ? seeds::EntityCountMode::per_entity
                                                              : seeds::EntityCountMode::per_meta;
    return counts;
}

SimulationConfig Config::simulation() const
{
    SimulationConfig config;
    config.max_rounds = count("simulate.max_rounds");
    config.min_rounds = count("simulate.min_rounds");
    config.user_temperature = real("simulate.user_temperature");
    config.assistant_temperature = real("simulate.assistant_temperature");
    config.max_output_tokens = static_cast<int>(count("simulate.max_output_tokens"));
    config.reinforce_objective = boolean("simulate.reinforce_objective");
    config.termination_marker = text("simulate.termination_marker");
    config.assistant_system_prompt = text("simulate.assistant_system_prompt");
    config.user_model = text("backend.user_model");
    config.assistant_model = text("backend.assistant_model");
    config.validate();
    return config;
}

QualityBounds Config::quality_bounds() const
{
    QualityBounds bounds;
    bounds.min_utterance_tokens = count("filter.min_utterance_tokens");
    bounds.max_utterance_tokens = count("filter.max_utterance_tokens");
    bounds.min_rounds = count("simulate.min_rounds");
    bounds.max_turns = 2 * count("simulate.max_rounds");
    if (bounds.min_utterance_tokens > bounds.max_utterance_tokens) {
        throw ConfigError("filter.min_utterance_tokens exceeds filter.max_utterance_tokens");
    }
    return bounds;
}

std::size_t Config::concurrency() const
{
    const auto n = count("runtime.concurrency");
    if (n == 0) {
        throw ConfigError("runtime.concurrency must be at least 1");
    }
    return n;
}

} // namespace ultrachat::pipeline
