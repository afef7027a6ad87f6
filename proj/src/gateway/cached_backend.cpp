// SPDX-License-Identifier: Apache-2.0
#include "ultrachat/gateway/cached_backend.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/core/hash.hpp"
#include "ultrachat/core/record_io.hpp"

#include <fmt/format.h>

#include <fstream>
#include <sstream>

namespace ultrachat {

CachedBackend::CachedBackend(BackendPtr inner, std::optional<std::filesystem::path> directory)
    : inner_(std::move(inner)), directory_(std::move(directory))
{
    if (!inner_) {
        throw PreconditionError("cached backend needs an inner backend");
    }
    if (directory_) {
        std::filesystem::create_directories(*directory_);
    }
}

std::optional<std::string> CachedBackend::lookup(const std::string& key)
{
    {
        std::shared_lock lock(mutex_);
        if (auto it = memory_.find(key); it != memory_.end()) {
            return it->second;
        }
    }
    if (!directory_) {
        return std::nullopt;
    }
    const auto path = *directory_ / key.substr(0, 2) / key;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        return std::nullopt;
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    auto value = buffer.str();
    std::unique_lock lock(mutex_);
    memory_.emplace(key, value);
    return value;
}

void CachedBackend::store(const std::string& key, const std::string& value)
{
    {
        std::unique_lock lock(mutex_);
        memory_[key] = value;
    }
    if (directory_) {
        write_file_atomic(*directory_ / key.substr(0, 2) / key, value);
    }
}

std::string CachedBackend::do_complete(const ChatRequest& request)
{
    const auto key = sha256_hex(fmt::format("complete\x1f{}\x1f{}", inner_->fingerprint(), canonical_json(request).dump()));
    if (auto hit = lookup(key)) {
        hits_.fetch_add(1);
        return *hit;
    }
    misses_.fetch_add(1);
    auto value = inner_->complete(request);
    store(key, value);
    return value;
}

std::vector<Embedding> CachedBackend::do_embed(const std::vector<std::string>& texts)
{
    std::vector<Embedding> out(texts.size());
    std::vector<std::string> keys(texts.size());
    std::vector<std::size_t> missing;
    std::vector<std::string> missing_texts;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        keys[i] = sha256_hex(fmt::format("embed\x1f{}\x1f{}", inner_->fingerprint(), texts[i]));
        if (auto hit = lookup(keys[i])) {
            hits_.fetch_add(1);
            out[i] = nlohmann::json::parse(*hit).get<Embedding>();
        } else {
            misses_.fetch_add(1);
            missing.push_back(i);
            missing_texts.push_back(texts[i]);
        }
    }
    if (!missing.empty()) {
        auto fresh = inner_->embed(missing_texts);
        for (std::size_t j = 0; j < missing.size(); ++j) {
            store(keys[missing[j]], nlohmann::json(fresh[j]).dump());
            out[missing[j]] = std::move(fresh[j]);
        }
    }
    return out;
}

} // namespace ultrachat
