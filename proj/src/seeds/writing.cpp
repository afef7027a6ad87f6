// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/seeds/writing.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/parallel.hpp"
#include "ultrachat/core/prompts.hpp"
#include "ultrachat/core/rng.hpp"
#include "ultrachat/core/text.hpp"

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ultrachat::seeds {

namespace {

std::string first_item(const std::string& reply)
{
    auto items = parse_list(reply);
    if (items.empty()) {
        throw BackendError("instruction reply has no usable line", 1);
    }
    return std::move(items.front());
}

} // namespace

std::vector<std::size_t> refine_subset(std::size_t n, double fraction, std::uint64_t seed)
{
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw PreconditionError(fmt::format("refine fraction {} is outside [0, 1]", fraction));
    }
    const auto k = std::min(n, static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n))));
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    order.resize(k);
    std::sort(order.begin(), order.end());
    return order;
}

std::vector<OpeningLine> writing_instructions(MaterialType type, std::size_t n, double refine_fraction,
                                              ChatBackend& backend, std::uint64_t seed,
                                              const GenerationOptions& options)
{
    const auto refined = refine_subset(n, refine_fraction, derive_seed(seed, "refine", slug(type)));
    const auto drafts = parallel_map<std::string>(n, options.concurrency, [&](std::size_t i) {
        return first_item(backend.complete(seed_request(prompts::writing_instruction(display_name(type), i), options)));
    });
    std::vector<std::optional<std::string>> detailed(n);
    parallel_for(refined.size(), options.concurrency, [&](std::size_t j) {
        const auto i = refined[j];
        try {
            detailed[i] = first_item(backend.complete(seed_request(prompts::refine_instruction(drafts[i]), options)));
        } catch (const BackendError& error) {
            spdlog::warn("refining instruction {} for {} failed, keeping the draft: {}", i, slug(type), error.what());
        }
    });
    std::vector<OpeningLine> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const bool was_refined = detailed[i].has_value();
        out.push_back(make_opening(Sector::creation_generation, was_refined ? *detailed[i] : drafts[i],
                                   {{"material-type", std::string(slug(type))},
                                    {"instruction", drafts[i]},
                                    {"refined", was_refined ? "true" : "false"}}));
    }
    return out;
}

} // namespace ultrachat::seeds
