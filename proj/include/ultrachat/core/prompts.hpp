// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

// Versioned prompt catalog. Every prompt the pipeline sends is rendered here,
// so a catalog version pins the exact wording of a run.
namespace ultrachat::prompts {

inline constexpr std::string_view kCatalogVersion = "prompts-v1";

/// Replaces `{name}` slots in one pass; slot text appearing inside a value is not re-expanded.
std::string render(std::string_view pattern, std::initializer_list<std::pair<std::string_view, std::string_view>> slots);

// Seed generation.

enum class SeedTask {
    subtopics,
    questions,
    expanded_questions,
    entity_meta,
    entity_specific,
    entity_extended,
    writing_instruction,
    refine_instruction,
    material_instructions,
};

std::string subtopics(std::string_view topic, std::size_t count, std::size_t attempt = 0);
std::string questions(std::string_view subtopic, std::size_t count, std::size_t attempt = 0);
std::string expanded_questions(std::string_view question, std::size_t count, std::size_t attempt = 0);
std::string entity_meta_questions(std::string_view entity, std::size_t count, std::size_t attempt = 0);
std::string entity_specific_questions(std::string_view entity, std::string_view meta, std::size_t count,
                                      std::size_t attempt = 0);
std::string entity_extended_questions(std::string_view entity, std::string_view meta, std::size_t count,
                                      std::size_t attempt = 0);
std::string writing_instruction(std::string_view material_type, std::size_t variation, std::size_t attempt = 0);
std::string refine_instruction(std::string_view instruction);
std::string material_instructions(std::string_view body, std::size_t count, std::size_t attempt = 0);

/// A seed prompt recognized from its rendered text.
struct SeedTaskRequest {
    SeedTask task = SeedTask::subtopics;
    std::size_t count = 1;
    std::size_t attempt = 0;
    std::string subject;  ///< topic, subtopic, question, entity, material type, instruction or text body
    std::string context;  ///< meta-question for entity follow-ups, variation index for writing instructions
};

std::optional<SeedTaskRequest> identify_seed_task(std::string_view prompt);

// Dialogue simulation.

struct UserSimulatorPrompt {
    std::string_view persona;
    bool concise_clause = false;
    bool reinforce_objective = false;
    std::string_view objective;
    std::string_view termination_marker;
};

inline constexpr std::string_view kUserSimulatorLead = "You are role-playing a human user who is chatting with an AI assistant.";
inline constexpr std::string_view kAntiRoleExchangeClause =
    "You are the USER, not the assistant: never answer as an AI, never offer to help, and never describe yourself as "
    "an AI or a language model.";
inline constexpr std::string_view kConciseClause =
    "Please respond concisely and meaningfully, taking into account the context of the ongoing dialogue history.";
inline constexpr std::string_view kRoleReminder =
    "Reminder: your previous reply sounded like an AI assistant. You are the human USER; write as the user.";

std::string user_simulator_system(const UserSimulatorPrompt& prompt);

/// Extracts the termination marker from a rendered user-simulator system prompt.
std::optional<std::string> termination_marker_of(std::string_view system_prompt);

// Judging.

inline constexpr std::string_view kJudgeSystemLine =
    "You are a helpful, harmless and precise assistant for checking the quality of the answer.";

/// Pairwise comparison template; slots {question}, {answer_1}, {answer_2}.
extern const std::string_view kPairwiseTemplate;
/// Independent scoring template; slots {question}, {answer}.
extern const std::string_view kIndependentTemplate;
/// Coherence template built on the independent-scoring scaffold; slot {conversation}.
extern const std::string_view kCoherenceTemplate;

inline constexpr std::string_view kPairwiseFormatReminder =
    "Remember: the first line of your reply must contain only the two integer scores, separated by a space.";
inline constexpr std::string_view kScoreFormatReminder =
    "Remember: your reply must contain \"Score: \" followed by an integer between 1 and 10.";

std::string truthfulqa(std::string_view question, std::string_view candidate);

} // namespace ultrachat::prompts
