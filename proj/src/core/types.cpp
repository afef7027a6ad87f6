// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/core/types.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/hash.hpp"
#include "ultrachat/core/tokenizer.hpp"

#include <fmt/format.h>

namespace ultrachat {

std::string_view to_string(Role role)
{
    return role == Role::user ? "user" : "assistant";
}

std::string_view to_string(Sector sector)
{
    switch (sector) {
    case Sector::world_questions:
        return "world_questions";
    case Sector::creation_generation:
        return "creation_generation";
    case Sector::material_assistance:
        return "material_assistance";
    }
    return "unknown";
}

Role role_from_string(std::string_view name)
{
    if (name == "user") {
        return Role::user;
    }
    if (name == "assistant") {
        return Role::assistant;
    }
    throw PreconditionError(fmt::format("unknown role '{}'", name));
}

Sector sector_from_string(std::string_view name)
{
    for (auto sector : {Sector::world_questions, Sector::creation_generation, Sector::material_assistance}) {
        if (to_string(sector) == name) {
            return sector;
        }
    }
    throw PreconditionError(fmt::format("unknown sector '{}'", name));
}

Turn make_turn(Role role, std::string content, const Tokenizer& tokenizer)
{
    const auto tokens = tokenizer.count(content);
    return Turn{role, std::move(content), tokens};
}

std::string opening_id(Sector sector, std::string_view text)
{
    return content_id("op-", {to_string(sector), text});
}

OpeningLine make_opening(Sector sector, std::string text, std::vector<LineageStep> lineage)
{
    auto id = opening_id(sector, text);
    return OpeningLine{std::move(id), sector, std::move(text), std::move(lineage)};
}

const std::vector<std::string_view>& lineage_vocabulary(Sector sector)
{
    static const std::vector<std::string_view> world = {
        "topic", "subtopic", "question", "expansion", "entity", "meta-question", "specific-question",
        "extended-question"};
    static const std::vector<std::string_view> creation = {"material-type", "instruction", "refined"};
    static const std::vector<std::string_view> material = {"material-type", "piece", "source-url", "instruction",
                                                           "template-id"};
    switch (sector) {
    case Sector::world_questions:
        return world;
    case Sector::creation_generation:
        return creation;
    case Sector::material_assistance:
        return material;
    }
    return world;
}

bool Dialogue::operator==(const Dialogue& other) const
{
    return id == other.id && sector == other.sector && opening_id == other.opening_id && turns == other.turns &&
           persona_id == other.persona_id && backend_fingerprint == other.backend_fingerprint;
}

std::string dialogue_id(Sector sector, const std::vector<Turn>& turns)
{
    std::string joined;
    for (const auto& turn : turns) {
        joined.append(to_string(turn.role));
        joined.push_back('\x1e');
        joined.append(turn.content);
        joined.push_back('\x1d');
    }
    return content_id("dlg-", {to_string(sector), joined});
}

} // namespace ultrachat
