// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/gateway/backend_factory.hpp"
#include "ultrachat/refine/quality.hpp"
#include "ultrachat/seeds/entities.hpp"
#include "ultrachat/seeds/generation.hpp"
#include "ultrachat/seeds/topics.hpp"
#include "ultrachat/simulate/simulator.hpp"
#include "ultrachat/stats/report.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat::pipeline {

enum class ValueKind { integer, real, boolean, text };

struct ConfigKey {
    std::string name;
    ValueKind kind;
    nlohmann::json fallback;
    std::string help;
    /// Keys that cannot change output bytes stay out of the fingerprint.
    bool affects_output = true;
    /// Allowed values of a text key; empty accepts anything.
    std::vector<std::string> choices = {};
};

/// Every accepted key with its default, in documentation order.
const std::vector<ConfigKey>& config_schema();

/// ULTRACHAT_ followed by the key upper-cased with dots turned into underscores.
std::string env_name(std::string_view key);

using EnvLookup = std::function<std::optional<std::string>(const std::string&)>;
EnvLookup process_env();

class Config {
public:
    /// All defaults.
    Config();

    /// Layers file, environment and CLI overrides over the defaults, in
    /// increasing precedence. The file may be nested JSON objects or flat
    /// dotted keys. Unknown keys and ill-typed values throw ConfigError.
    static Config load(const std::optional<std::filesystem::path>& file,
                       const std::map<std::string, std::string>& overrides, const EnvLookup& env = process_env());

    /// Throws ConfigError for unknown keys or values that do not parse as
    /// the key's kind.
    void set(const std::string& key, const nlohmann::json& value, const std::string& source);
    void set_text(const std::string& key, const std::string& value, const std::string& source);

    const nlohmann::json& value(const std::string& key) const;
    std::int64_t integer(const std::string& key) const;
    std::size_t count(const std::string& key) const;
    double real(const std::string& key) const;
    bool boolean(const std::string& key) const;
    const std::string& text(const std::string& key) const;
    std::uint64_t seed() const;

    /// Where each value came from: default, file, env or cli.
    const std::string& source(const std::string& key) const;

    /// Flat object of every key, sorted.
    nlohmann::json to_json() const;

    /// Hash over the output-affecting keys under the given prefixes, plus
    /// the root seed and backend models.
    std::string fingerprint(const std::vector<std::string>& prefixes) const;

    BackendConfig backend() const;
    seeds::GenerationOptions generation() const;
    seeds::TopicFanout fanout() const;
    seeds::EntityCounts entity_counts() const;
    SimulationConfig simulation() const;
    QualityBounds quality_bounds() const;
    std::size_t concurrency() const;

private:
    std::map<std::string, nlohmann::json> values_;
    std::map<std::string, std::string> sources_;
};

/// Closest known key within edit distance 3, if any.
std::optional<std::string> suggest_key(std::string_view unknown);

} // namespace ultrachat::pipeline
