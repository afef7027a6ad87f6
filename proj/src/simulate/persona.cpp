// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/simulate/persona.hpp"

#include "ultrachat/core/embedded_data.hpp"
#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/rng.hpp"
#include "ultrachat/core/text.hpp"

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include <unordered_set>

namespace ultrachat {

PersonaCatalog PersonaCatalog::from_json(std::string_view text)
{
    PersonaCatalog catalog;
    std::unordered_set<std::string> ids;
    try {
        const auto json = nlohmann::json::parse(text);
        for (const auto& item : json.at("personas")) {
            Persona persona{item.at("id").get<std::string>(), item.at("description").get<std::string>()};
            if (trim(persona.id).empty() || trim(persona.description).empty()) {
                throw ConfigError("persona id and description must be non-empty");
            }
            if (!ids.insert(persona.id).second) {
                throw ConfigError(fmt::format("duplicate persona id '{}'", persona.id));
            }
            catalog.personas_.push_back(std::move(persona));
        }
    } catch (const nlohmann::json::exception& error) {
        throw ConfigError(fmt::format("malformed persona catalog: {}", error.what()));
    }
    if (catalog.personas_.empty()) {
        throw ConfigError("persona catalog is empty");
    }
    return catalog;
}

const PersonaCatalog& PersonaCatalog::standard()
{
    static const PersonaCatalog catalog = from_json(embedded_file("personas.json").value());
    return catalog;
}

const Persona& PersonaCatalog::by_id(std::string_view id) const
{
    for (const auto& persona : personas_) {
        if (persona.id == id) {
            return persona;
        }
    }
    throw PreconditionError(fmt::format("unknown persona '{}'", id));
}

const Persona& PersonaCatalog::pick(std::uint64_t seed, std::string_view opening_id) const
{
    Rng rng(derive_seed(seed, "persona", opening_id));
    return personas_[rng.below(personas_.size())];
}

} // namespace ultrachat
