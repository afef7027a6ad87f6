// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat {

class Tokenizer;

enum class Role { user, assistant };

enum class Sector { world_questions, creation_generation, material_assistance };

std::string_view to_string(Role role);
std::string_view to_string(Sector sector);

/// Throw PreconditionError on an unknown name.
Role role_from_string(std::string_view name);
Sector sector_from_string(std::string_view name);

struct Turn {
    Role role = Role::user;
    std::string content;
    std::size_t token_count = 0;

    bool operator==(const Turn&) const = default;
};

Turn make_turn(Role role, std::string content, const Tokenizer& tokenizer);

struct LineageStep {
    std::string stage;
    std::string value;

    bool operator==(const LineageStep&) const = default;
};

struct OpeningLine {
    std::string id;
    Sector sector = Sector::world_questions;
    std::string text;
    std::vector<LineageStep> lineage;

    bool operator==(const OpeningLine&) const = default;
};

/// Content-addressed id of an opening line.
std::string opening_id(Sector sector, std::string_view text);

OpeningLine make_opening(Sector sector, std::string text, std::vector<LineageStep> lineage);

/// Lineage stage names permitted for openings of a sector.
const std::vector<std::string_view>& lineage_vocabulary(Sector sector);

struct Dialogue {
    std::string id;
    Sector sector = Sector::world_questions;
    std::string opening_id;
    std::vector<Turn> turns;
    std::string persona_id;
    std::string backend_fingerprint;
    std::string created_at;

    /// Completed user+assistant pairs.
    std::size_t rounds() const { return turns.size() / 2; }

    /// Field-wise equality; created_at is informational and ignored.
    bool operator==(const Dialogue& other) const;
};

/// Content-addressed id of a dialogue over its sector and turn contents.
std::string dialogue_id(Sector sector, const std::vector<Turn>& turns);

} // namespace ultrachat
