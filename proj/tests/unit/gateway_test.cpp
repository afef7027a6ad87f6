// SPDX-License-Identifier: Apache-2.0
#include "support/generators.hpp"

#include "ultrachat/core/errors.hpp"
#include "ultrachat/gateway/backend_factory.hpp"
#include "ultrachat/gateway/cached_backend.hpp"
#include "ultrachat/gateway/http_backend.hpp"
#include "ultrachat/gateway/mock_backend.hpp"
#include "ultrachat/gateway/rate_limiter.hpp"
#include "ultrachat/gateway/retry.hpp"

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>

#include <doctest.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <thread>

using namespace ultrachat;
using namespace std::chrono_literals;

namespace {

ChatRequest request_for(std::string text, double temperature = 0.7)
{
    ChatRequest request;
    request.messages = {{MessageRole::system, "You are helpful."}, {MessageRole::user, std::move(text)}};
    request.temperature = temperature;
    return request;
}

ChatRequest random_request(testing::Engine& engine)
{
    ChatRequest request;
    const std::size_t turns = 1 + testing::pick(engine, 4);
    for (std::size_t i = 0; i < turns; ++i) {
        request.messages.push_back({i % 2 == 0 ? MessageRole::user : MessageRole::assistant, testing::sentence(engine, 12)});
    }
    if (request.messages.back().role == MessageRole::assistant) {
        request.messages.push_back({MessageRole::user, testing::sentence(engine, 5)});
    }
    request.temperature = static_cast<double>(testing::pick(engine, 11)) / 10.0;
    return request;
}

/// Local HTTP server on an ephemeral port, stopped on destruction.
class StubServer {
public:
    StubServer()
    {
        port_ = server_.bind_to_any_port("127.0.0.1");
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }
    ~StubServer()
    {
        server_.stop();
        thread_.join();
    }
    httplib::Server& server() { return server_; }
    std::string base_url() const { return "http://127.0.0.1:" + std::to_string(port_) + "/v1"; }

private:
    httplib::Server server_;
    int port_ = 0;
    std::thread thread_;
};

HttpOptions stub_options(const std::string& base_url, std::vector<std::chrono::milliseconds>* delays = nullptr)
{
    HttpOptions options;
    options.base_url = base_url;
    options.api_key_env = "";
    options.timeout_seconds = 5;
    options.sleeper = [delays](std::chrono::milliseconds d) {
        if (delays) {
            delays->push_back(d);
        }
    };
    return options;
}

} // namespace

TEST_CASE("mock completions are a pure function of seed and request")
{
    MockBackend first(MockOptions{7});
    MockBackend second(MockOptions{7});
    const auto request = request_for("Tell me about rivers.");
    CHECK(first.complete(request) == first.complete(request));

    testing::Engine engine(99);
    for (int i = 0; i < 100; ++i) {
        const auto r = random_request(engine);
        CHECK(first.complete(r) == second.complete(r));
    }
    MockBackend other(MockOptions{8});
    int differing = 0;
    testing::Engine replay(99);
    for (int i = 0; i < 100; ++i) {
        const auto r = random_request(replay);
        differing += first.complete(r) != other.complete(r) ? 1 : 0;
    }
    CHECK(differing > 50);
    CHECK(first.fingerprint() == "mock/v1 seed=7");
}

TEST_CASE("requests are validated before reaching a backend")
{
    MockBackend mock;
    CHECK_THROWS_AS(mock.complete(ChatRequest{}), PreconditionError);
    auto bad = request_for("x");
    bad.temperature = -1;
    CHECK_THROWS_AS(mock.complete(bad), PreconditionError);
    auto trailing_assistant = request_for("x");
    trailing_assistant.messages.push_back({MessageRole::assistant, "y"});
    CHECK_THROWS_AS(mock.complete(trailing_assistant), PreconditionError);
    CHECK(mock.complete_calls() == 0);
}

TEST_CASE("empty completions surface as backend errors")
{
    LambdaBackend blank([](const ChatRequest&) { return std::string("  \n"); });
    CHECK_THROWS_AS(blank.complete(request_for("x")), BackendError);
}

TEST_CASE("scripted mock replies drain in order and repeat the last")
{
    MockBackend mock;
    mock.script("ping", {"one", "two"});
    CHECK(mock.complete(request_for("ping")) == "one");
    CHECK(mock.complete(request_for("ping again")) == "two");
    CHECK(mock.complete(request_for("ping")) == "two");
}

TEST_CASE("canonical request keys ignore nothing that matters")
{
    const auto a = request_for("x", 0.5);
    auto b = a;
    CHECK(request_key(a) == request_key(b));
    b.temperature = 0.6;
    CHECK(request_key(a) != request_key(b));
    b = a;
    b.model_name = "other";
    CHECK(request_key(a) != request_key(b));
}

TEST_CASE("mock embeddings are deterministic unit vectors")
{
    MockBackend mock;
    const auto pair = mock.embed({"a", "a"});
    REQUIRE(pair.size() == 2);
    CHECK(pair[0] == pair[1]);
    CHECK_THROWS_AS(mock.embed({}), PreconditionError);

    testing::Engine engine(5);
    std::vector<std::string> texts;
    for (int i = 0; i < 1000; ++i) {
        texts.push_back(testing::unicode_string(engine, 20));
    }
    const auto vectors = mock.embed(texts);
    for (const auto& v : vectors) {
        double norm = 0.0;
        for (double x : v) {
            norm += x * x;
        }
        CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-9);
        CHECK(v.size() == 64);
    }
}

TEST_CASE("embedding output is checked")
{
    LambdaBackend wrong_count([](const ChatRequest&) { return std::string("x"); },
                              [](const std::vector<std::string>&) { return std::vector<Embedding>{{1.0}}; });
    CHECK_THROWS_AS(wrong_count.embed({"a", "b"}), BackendError);
    LambdaBackend ragged([](const ChatRequest&) { return std::string("x"); },
                         [](const std::vector<std::string>&) { return std::vector<Embedding>{{1.0}, {1.0, 2.0}}; });
    CHECK_THROWS_AS(ragged.embed({"a", "b"}), BackendError);
    LambdaBackend not_finite([](const ChatRequest&) { return std::string("x"); },
                             [](const std::vector<std::string>&) { return std::vector<Embedding>{{NAN}}; });
    CHECK_THROWS_AS(not_finite.embed({"a"}), BackendError);
}

TEST_CASE("cache serves repeats without calling the inner backend")
{
    auto inner = std::make_shared<MockBackend>(MockOptions{3});
    CachedBackend cached(inner);
    const auto request = request_for("What is a cache?");
    const auto first = cached.complete(request);
    CHECK(cached.complete(request) == first);
    CHECK(inner->complete_calls() == 1);
    CHECK(cached.hits() == 1);
    CHECK(cached.misses() == 1);
    CHECK(cached.fingerprint() == inner->fingerprint());

    cached.embed({"x", "y"});
    cached.embed({"y", "x"});
    CHECK(inner->embed_calls() == 1);
}

TEST_CASE("cache is transparent in value")
{
    auto inner = std::make_shared<MockBackend>(MockOptions{21});
    MockBackend reference(MockOptions{21});
    CachedBackend cached(inner);
    testing::Engine engine(17);
    for (int i = 0; i < 100; ++i) {
        const auto r = random_request(engine);
        CHECK(cached.complete(r) == reference.complete(r));
    }
}

TEST_CASE("disk cache survives a restart")
{
    const auto dir = std::filesystem::temp_directory_path() / "ultrachat-cache-test";
    std::filesystem::remove_all(dir);
    const auto request = request_for("persist me");
    std::string stored;
    {
        CachedBackend cached(std::make_shared<MockBackend>(MockOptions{4}), dir);
        stored = cached.complete(request);
    }
    auto inner = std::make_shared<MockBackend>(MockOptions{4});
    CachedBackend reopened(inner, dir);
    CHECK(reopened.complete(request) == stored);
    CHECK(inner->complete_calls() == 0);
}

TEST_CASE("retry classification and backoff schedule")
{
    CHECK(is_retryable_status(429));
    CHECK(is_retryable_status(408));
    CHECK(is_retryable_status(500));
    CHECK(is_retryable_status(503));
    CHECK_FALSE(is_retryable_status(400));
    CHECK_FALSE(is_retryable_status(401));
    CHECK_FALSE(is_retryable_status(404));

    const RetryPolicy policy;
    CHECK(backoff_delay(policy, 0, 0.5) == 1000ms);
    CHECK(backoff_delay(policy, 0, 0.0) == 800ms);
    CHECK(backoff_delay(policy, 2, 0.5) == 4000ms);
    CHECK(backoff_delay(policy, 3, 0.0) == 6400ms);
}

TEST_CASE("retry loop respects the error class")
{
    const RetryPolicy policy;
    std::vector<std::chrono::milliseconds> delays;
    const Sleeper sleeper = [&](std::chrono::milliseconds d) { delays.push_back(d); };

    int calls = 0;
    try {
        call_with_retry(policy, [&]() -> std::string { ++calls; throw BackendError("HTTP 400", 1, false); }, sleeper, 1);
        FAIL("expected BackendError");
    } catch (const BackendError& error) {
        CHECK(error.attempts() == 1);
    }
    CHECK(calls == 1);
    CHECK(delays.empty());

    calls = 0;
    try {
        call_with_retry(policy, [&]() -> std::string { ++calls; throw BackendError("HTTP 503", 1, true); }, sleeper, 1);
        FAIL("expected BackendError");
    } catch (const BackendError& error) {
        CHECK(error.attempts() == 5);
        CHECK(std::string(error.what()).find("5 attempts") != std::string::npos);
    }
    CHECK(calls == 5);
    REQUIRE(delays.size() == 4);
    for (std::size_t i = 0; i < delays.size(); ++i) {
        const double nominal = 1000.0 * std::pow(2.0, static_cast<double>(i));
        CHECK(static_cast<double>(delays[i].count()) >= 0.8 * nominal - 1);
        CHECK(static_cast<double>(delays[i].count()) <= 1.2 * nominal + 1);
    }

    calls = 0;
    const auto reply = call_with_retry(
        policy,
        [&]() -> std::string {
            if (++calls < 3) {
                throw BackendError("HTTP 429", 1, true);
            }
            return "ok";
        },
        sleeper, 2);
    CHECK(reply == "ok");
    CHECK(calls == 3);
}

TEST_CASE("live backend gives up after five failing attempts")
{
    StubServer stub;
    std::atomic<int> hits{0};
    stub.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 500;
        res.set_content("{\"error\":\"boom\"}", "application/json");
    });
    std::vector<std::chrono::milliseconds> delays;
    HttpBackend backend(stub_options(stub.base_url(), &delays));
    try {
        backend.complete(request_for("hello"));
        FAIL("expected BackendError");
    } catch (const BackendError& error) {
        CHECK(error.attempts() == 5);
        CHECK(std::string(error.what()).find("5 attempts") != std::string::npos);
    }
    CHECK(hits.load() == 5);
    CHECK(delays.size() == 4);
}

TEST_CASE("live backend does not retry client errors")
{
    StubServer stub;
    std::atomic<int> hits{0};
    stub.server().Post("/v1/chat/completions", [&](const httplib::Request&, httplib::Response& res) {
        ++hits;
        res.status = 400;
        res.set_content("{\"error\":\"bad request\"}", "application/json");
    });
    HttpBackend backend(stub_options(stub.base_url()));
    CHECK_THROWS_AS(backend.complete(request_for("hello")), BackendError);
    CHECK(hits.load() == 1);
}

TEST_CASE("live backend parses completions and embeddings")
{
    StubServer stub;
    std::string seen_auth;
    std::string seen_body;
    stub.server().Post("/v1/chat/completions", [&](const httplib::Request& req, httplib::Response& res) {
        seen_auth = req.get_header_value("Authorization");
        seen_body = req.body;
        res.set_content(R"({"choices":[{"index":0,"message":{"role":"assistant","content":"Hi there"}}]})",
                        "application/json");
    });
    stub.server().Post("/v1/embeddings", [&](const httplib::Request&, httplib::Response& res) {
        res.set_content(R"({"data":[{"index":1,"embedding":[0.0,1.0]},{"index":0,"embedding":[1.0,0.0]}]})",
                        "application/json");
    });
    ::setenv("ULTRACHAT_TEST_KEY", "sk-test", 1);
    auto options = stub_options(stub.base_url());
    options.api_key_env = "ULTRACHAT_TEST_KEY";
    HttpBackend backend(options);
    CHECK(backend.complete(request_for("hello")) == "Hi there");
    CHECK(seen_auth == "Bearer sk-test");
    const auto body = nlohmann::json::parse(seen_body);
    CHECK(body.at("model") == "gpt-3.5-turbo");
    CHECK(body.at("messages").size() == 2);
    const auto vectors = backend.embed({"first", "second"});
    CHECK(vectors == std::vector<Embedding>{{1.0, 0.0}, {0.0, 1.0}});
}

TEST_CASE("live backend without a reachable server retries transport errors")
{
    int port = 0;
    {
        httplib::Server probe;
        port = probe.bind_to_any_port("127.0.0.1");
    }
    std::vector<std::chrono::milliseconds> delays;
    HttpBackend backend(stub_options("http://127.0.0.1:" + std::to_string(port) + "/v1", &delays));
    try {
        backend.complete(request_for("hello"));
        FAIL("expected BackendError");
    } catch (const BackendError& error) {
        CHECK(error.attempts() == 5);
    }
}

TEST_CASE("live backend configuration errors")
{
    auto options = stub_options("not a url");
    CHECK_THROWS_AS(HttpBackend{options}, ConfigError);
    options = stub_options("http://127.0.0.1:1/v1");
    options.api_key_env = "ULTRACHAT_TEST_UNSET_KEY";
    ::unsetenv("ULTRACHAT_TEST_UNSET_KEY");
    CHECK_THROWS_AS(HttpBackend{options}, ConfigError);
}

TEST_CASE("rate limiter delays requests past the window")
{
    auto clock = std::make_shared<VirtualClock>();
    RateLimiter limiter(2, clock);
    std::vector<Clock::duration> granted(4);
    std::vector<std::thread> threads;
    std::atomic<int> done{0};
    for (int i = 0; i < 4; ++i) {
        threads.emplace_back([&, i] {
            limiter.acquire();
            granted[static_cast<std::size_t>(i)] = clock->now();
            ++done;
        });
    }
    clock->wait_for_sleepers(2);
    while (done.load() < 2) {
        std::this_thread::yield();
    }
    CHECK(done.load() == 2);
    clock->advance(59s);
    std::this_thread::sleep_for(20ms);
    CHECK(done.load() == 2);
    clock->advance(1s);
    for (auto& t : threads) {
        t.join();
    }
    std::sort(granted.begin(), granted.end());
    CHECK(granted[0] == Clock::duration::zero());
    CHECK(granted[1] == Clock::duration::zero());
    CHECK(granted[2] == std::chrono::duration_cast<Clock::duration>(60s));
    CHECK(granted[3] == std::chrono::duration_cast<Clock::duration>(60s));
}

TEST_CASE("a generous limit never sleeps")
{
    auto clock = std::make_shared<VirtualClock>();
    auto inner = std::make_shared<MockBackend>();
    RateLimitedBackend limited(inner, 1000000, clock);
    for (int i = 0; i < 1000; ++i) {
        limited.complete(request_for("quick " + std::to_string(i)));
    }
    CHECK(clock->now() == Clock::duration::zero());
    CHECK(inner->complete_calls() == 1000);
    CHECK_THROWS_AS(with_rate_limit(inner, 0), PreconditionError);
}

TEST_CASE("eight concurrent callers never exceed the per-minute budget")
{
    constexpr std::size_t kRpm = 5;
    constexpr int kThreads = 8;
    constexpr int kCallsEach = 10;
    auto clock = std::make_shared<VirtualClock>();
    std::mutex mutex;
    std::vector<Clock::duration> forwarded;
    auto recorder = std::make_shared<LambdaBackend>([&](const ChatRequest&) {
        std::lock_guard lock(mutex);
        forwarded.push_back(clock->now());
        return std::string("ok");
    });
    RateLimitedBackend limited(recorder, kRpm, clock);

    std::atomic<int> active{kThreads};
    std::vector<std::thread> threads;
    for (int t = 0; t < kThreads; ++t) {
        threads.emplace_back([&, t] {
            for (int c = 0; c < kCallsEach; ++c) {
                limited.complete(request_for("caller " + std::to_string(t) + " call " + std::to_string(c)));
            }
            --active;
        });
    }
    // Advance only while every live caller is blocked, so recorded times are exact.
    while (active.load() > 0) {
        if (clock->sleepers() == static_cast<std::size_t>(active.load())) {
            clock->advance(1s);
        } else {
            std::this_thread::yield();
        }
    }
    for (auto& thread : threads) {
        thread.join();
    }
    REQUIRE(forwarded.size() == static_cast<std::size_t>(kThreads * kCallsEach));
    std::sort(forwarded.begin(), forwarded.end());
    const auto window = std::chrono::duration_cast<Clock::duration>(60s);
    std::size_t worst = 0;
    for (std::size_t i = 0; i < forwarded.size(); ++i) {
        const auto end = std::lower_bound(forwarded.begin(), forwarded.end(), forwarded[i] + window);
        worst = std::max(worst, static_cast<std::size_t>(end - (forwarded.begin() + static_cast<std::ptrdiff_t>(i))));
    }
    CHECK(worst == kRpm);
    // 80 calls at 5 per minute: the last lands in minute 15.
    CHECK(forwarded.back() == std::chrono::duration_cast<Clock::duration>(15min));
}

TEST_CASE("backend factory")
{
    BackendConfig config;
    const auto mock = make_backends(config);
    CHECK(mock.user == mock.assistant);
    CHECK(mock.judge == mock.embedding);
    CHECK(mock.user->fingerprint() == "mock/v1 seed=42");

    config.kind = "carrier-pigeon";
    CHECK_THROWS_AS(make_backends(config), ConfigError);

    config.kind = "http";
    config.api_key_env = "ULTRACHAT_TEST_UNSET_KEY";
    ::unsetenv("ULTRACHAT_TEST_UNSET_KEY");
    CHECK_THROWS_AS(make_backends(config), ConfigError);
}
