// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/core/types.hpp"
#include "ultrachat/gateway/chat_backend.hpp"
#include "ultrachat/simulate/persona.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace ultrachat {

class Tokenizer;

inline constexpr std::string_view kDefaultTerminationMarker = "<END_OF_DIALOGUE>";

struct SimulationConfig {
    std::size_t max_rounds = 8;
    std::size_t min_rounds = 2;
    double user_temperature = 1.0;
    double assistant_temperature = 0.7;
    int max_output_tokens = 1024;
    Sector sector = Sector::world_questions;
    /// Restate the writing objective in every user prompt; always on for creation_generation.
    bool reinforce_objective = false;
    std::string termination_marker = std::string(kDefaultTerminationMarker);
    std::string assistant_system_prompt;
    std::string user_model;
    std::string assistant_model;

    bool reinforces() const { return reinforce_objective || sector == Sector::creation_generation; }
    /// Throws ConfigError on inconsistent settings.
    void validate() const;
};

/// Request for the user model: persona and role instructions in the system
/// message, then the history with roles seen from the user's side (the
/// assistant's turns arrive as the interlocutor's messages).
/// History must be non-empty and end with an assistant turn.
ChatRequest build_user_prompt(const std::vector<Turn>& history, const Persona& persona, const SimulationConfig& config);

/// Request for the assistant model over the history as-is.
ChatRequest build_assistant_prompt(const std::vector<Turn>& history, const SimulationConfig& config);

namespace stop_reason {
inline constexpr const char* kMaxRounds = "max rounds";
inline constexpr const char* kMarker = "termination marker";
inline constexpr const char* kEmptyReply = "empty user reply";
inline constexpr const char* kRoleExchange = "role exchange";
inline constexpr const char* kBackendError = "backend error";
inline constexpr const char* kTooFewRounds = "too few rounds";
inline constexpr const char* kInvalid = "invalid dialogue";
} // namespace stop_reason

struct SimulationOutcome {
    Dialogue dialogue;
    bool rejected = false;
    /// Why the loop stopped, or why the dialogue was rejected.
    std::string reason;
    /// Backend error text when reason is "backend error".
    std::string error;
    std::size_t user_calls = 0;
    std::size_t assistant_calls = 0;
};

/// Runs the two-agent loop from an opening line. The opening's sector governs
/// the prompts. Backend failures never escape: the partial dialogue comes back
/// rejected with the error attached.
SimulationOutcome simulate_dialogue(const OpeningLine& opening, const Persona& persona, const SimulationConfig& config,
                                    ChatBackend& user_backend, ChatBackend& assistant_backend,
                                    const std::string& created_at, const Tokenizer& tokenizer);
SimulationOutcome simulate_dialogue(const OpeningLine& opening, const Persona& persona, const SimulationConfig& config,
                                    ChatBackend& user_backend, ChatBackend& assistant_backend,
                                    const std::string& created_at = "1970-01-01T00:00:00Z");

} // namespace ultrachat
