// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ultrachat/gateway/chat_backend.hpp"

#include <atomic>
#include <filesystem>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace ultrachat {

/// Response cache keyed by the hash of the canonical request and the inner
/// fingerprint. Entries live in memory and, when a directory is given, on disk
/// as one file per key, so cached runs survive restarts.
class CachedBackend final : public ChatBackend {
public:
    explicit CachedBackend(BackendPtr inner, std::optional<std::filesystem::path> directory = std::nullopt);

    /// Transparent: the cache reports its inner backend's fingerprint.
    std::string fingerprint() const override { return inner_->fingerprint(); }

    std::uint64_t hits() const { return hits_.load(); }
    std::uint64_t misses() const { return misses_.load(); }

protected:
    std::string do_complete(const ChatRequest& request) override;
    std::vector<Embedding> do_embed(const std::vector<std::string>& texts) override;

private:
    std::optional<std::string> lookup(const std::string& key);
    void store(const std::string& key, const std::string& value);

    BackendPtr inner_;
    std::optional<std::filesystem::path> directory_;
    std::shared_mutex mutex_;
    std::unordered_map<std::string, std::string> memory_;
    std::atomic<std::uint64_t> hits_{0};
    std::atomic<std::uint64_t> misses_{0};
};

} // namespace ultrachat
