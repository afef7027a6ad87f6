// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ultrachat {

struct Persona {
    std::string id;
    std::string description;

    bool operator==(const Persona&) const = default;
};

class PersonaCatalog {
public:
    /// Parses {"version": n, "personas": [{"id", "description"}]}. Throws
    /// ConfigError on empty or duplicate ids and empty descriptions.
    static PersonaCatalog from_json(std::string_view text);
    /// The shipped catalog.
    static const PersonaCatalog& standard();

    const std::vector<Persona>& personas() const { return personas_; }
    /// Throws PreconditionError for an unknown id.
    const Persona& by_id(std::string_view id) const;
    /// Seeded pick keyed by the opening id, independent of processing order.
    const Persona& pick(std::uint64_t seed, std::string_view opening_id) const;

private:
    std::vector<Persona> personas_;
};

} // namespace ultrachat
