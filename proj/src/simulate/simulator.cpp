// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/simulate/simulator.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/prompts.hpp"
#include "ultrachat/core/text.hpp"
#include "ultrachat/core/tokenizer.hpp"
#include "ultrachat/core/validation.hpp"
#include "ultrachat/simulate/role_exchange.hpp"

#include <fmt/format.h>

namespace ultrachat {

void SimulationConfig::validate() const
{
    if (max_rounds == 0 || min_rounds == 0) {
        throw ConfigError("simulate.max_rounds and simulate.min_rounds must be positive");
    }
    if (min_rounds > max_rounds) {
        throw ConfigError(fmt::format("simulate.min_rounds ({}) exceeds simulate.max_rounds ({})", min_rounds, max_rounds));
    }
    if (!(user_temperature >= 0.0) || !(assistant_temperature >= 0.0)) {
        throw ConfigError("simulate temperatures must be >= 0");
    }
    if (max_output_tokens <= 0) {
        throw ConfigError("simulate.max_output_tokens must be positive");
    }
    if (trim(termination_marker).empty()) {
        throw ConfigError("simulate.termination_marker must be non-empty");
    }
}

ChatRequest build_user_prompt(const std::vector<Turn>& history, const Persona& persona, const SimulationConfig& config)
{
    if (history.empty() || history.back().role != Role::assistant) {
        throw PreconditionError("user prompt needs a history ending with an assistant turn");
    }
    ChatRequest request;
    request.temperature = config.user_temperature;
    request.max_output_tokens = config.max_output_tokens;
    request.model_name = config.user_model;
    request.messages.push_back({MessageRole::system,
                                prompts::user_simulator_system({persona.description,
                                                                config.sector == Sector::world_questions,
                                                                config.reinforces(), history.front().content,
                                                                config.termination_marker})});
    for (const auto& turn : history) {
        request.messages.push_back(
            {turn.role == Role::user ? MessageRole::assistant : MessageRole::user, turn.content});
    }
    return request;
}

ChatRequest build_assistant_prompt(const std::vector<Turn>& history, const SimulationConfig& config)
{
    if (history.empty() || history.back().role != Role::user) {
        throw PreconditionError("assistant prompt needs a history ending with a user turn");
    }
    ChatRequest request;
    request.temperature = config.assistant_temperature;
    request.max_output_tokens = config.max_output_tokens;
    request.model_name = config.assistant_model;
    if (!config.assistant_system_prompt.empty()) {
        request.messages.push_back({MessageRole::system, config.assistant_system_prompt});
    }
    for (const auto& turn : history) {
        request.messages.push_back({turn.role == Role::user ? MessageRole::user : MessageRole::assistant, turn.content});
    }
    return request;
}

namespace {

std::string fingerprint_of(ChatBackend& user, ChatBackend& assistant)
{
    const auto u = user.fingerprint();
    const auto a = assistant.fingerprint();
    return u == a ? u : fmt::format("user={};assistant={}", u, a);
}

} // namespace

SimulationOutcome simulate_dialogue(const OpeningLine& opening, const Persona& persona, const SimulationConfig& base,
                                    ChatBackend& user_backend, ChatBackend& assistant_backend,
                                    const std::string& created_at, const Tokenizer& tokenizer)
{
    auto config = base;
    config.sector = opening.sector;
    config.validate();
    if (trim(opening.text).empty()) {
        throw PreconditionError("opening line text is empty");
    }

    SimulationOutcome outcome;
    std::vector<Turn> turns{make_turn(Role::user, opening.text, tokenizer)};
    const auto finish = [&] {
        auto& d = outcome.dialogue;
        d.sector = opening.sector;
        d.opening_id = opening.id;
        d.persona_id = persona.id;
        d.backend_fingerprint = fingerprint_of(user_backend, assistant_backend);
        d.created_at = created_at;
        d.turns = std::move(turns);
        d.id = dialogue_id(d.sector, d.turns);
    };

    try {
        while (true) {
            ++outcome.assistant_calls;
            turns.push_back(make_turn(Role::assistant,
                                      assistant_backend.complete(build_assistant_prompt(turns, config)), tokenizer));
            if (turns.size() / 2 >= config.max_rounds) {
                outcome.reason = stop_reason::kMaxRounds;
                break;
            }
            auto request = build_user_prompt(turns, persona, config);
            ++outcome.user_calls;
            auto reply = user_backend.complete(request);
            if (reply.find(config.termination_marker) == std::string::npos && detect_role_exchange(reply)) {
                request.messages.front().content.append("\n").append(prompts::kRoleReminder);
                ++outcome.user_calls;
                reply = user_backend.complete(request);
                if (reply.find(config.termination_marker) == std::string::npos && detect_role_exchange(reply)) {
                    outcome.reason = stop_reason::kRoleExchange;
                    break;
                }
            }
            if (reply.find(config.termination_marker) != std::string::npos) {
                outcome.reason = stop_reason::kMarker;
                break;
            }
            const auto text = trim(reply);
            if (text.empty()) {
                outcome.reason = stop_reason::kEmptyReply;
                break;
            }
            turns.push_back(make_turn(Role::user, std::string(text), tokenizer));
        }
    } catch (const BackendError& error) {
        outcome.rejected = true;
        outcome.reason = stop_reason::kBackendError;
        outcome.error = error.what();
        finish();
        return outcome;
    }

    finish();
    if (outcome.dialogue.rounds() < config.min_rounds) {
        outcome.rejected = true;
        outcome.reason = stop_reason::kTooFewRounds;
        return outcome;
    }
    const auto result = validate_dialogue(outcome.dialogue, {config.max_rounds * 2}, tokenizer);
    if (!result.ok()) {
        outcome.rejected = true;
        outcome.reason = stop_reason::kInvalid;
        outcome.error = fmt::format("{}", fmt::join(result.violations, "; "));
    }
    return outcome;
}

SimulationOutcome simulate_dialogue(const OpeningLine& opening, const Persona& persona, const SimulationConfig& config,
                                    ChatBackend& user_backend, ChatBackend& assistant_backend,
                                    const std::string& created_at)
{
    return simulate_dialogue(opening, persona, config, user_backend, assistant_backend, created_at,
                             default_tokenizer());
}

} // namespace ultrachat
