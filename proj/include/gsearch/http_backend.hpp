// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <chrono>
#include <cmath>
#include <random>
#include <semaphore>
#include <string>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "gsearch/backend.hpp"

namespace gsearch {

struct HttpBackendConfig {
    std::string base_url = "https://api.openai.com";
    std::string path = "/v1/chat/completions";
    std::string api_key;  // empty for servers that need no credential
    std::string default_model = "gpt-4o-mini";
    int max_attempts = 5;
    double backoff_base_seconds = 1.0;
    double timeout_seconds = 120.0;
    int max_concurrency = 8;
    int max_output_tokens = 0;  // 0 = leave unset
    PriceTable prices = default_price_table();
};

/// Chat-completions client over HTTP. One system+user pair per call,
/// transient failures (429, 5xx, transport) retried with exponential
/// backoff and jitter, concurrent callers throttled by a semaphore.
class HttpBackend final : public LLMBackend {
   public:
    explicit HttpBackend(HttpBackendConfig config)
        : config_(std::move(config)),
          ledger_(config_.prices),
          slots_(config_.max_concurrency > 0 ? config_.max_concurrency : 1) {
        if (config_.max_attempts < 1) throw ConfigError("max_attempts must be positive");
    }

    ChatResponse complete(const ChatRequest& request) override {
        if (request.user_text.empty())
            throw BackendError("empty user_text", request.request_tag);

        nlohmann::json body = {
            {"model", request.model.empty() ? config_.default_model : request.model},
            {"messages",
             {{{"role", "system"}, {"content", request.system_text}},
              {{"role", "user"}, {"content", request.user_text}}}},
            {"temperature", request.temperature},
        };
        if (config_.max_output_tokens > 0) body["max_tokens"] = config_.max_output_tokens;
        const std::string payload = body.dump();

        slots_.acquire();
        struct Release {
            std::counting_semaphore<>& s;
            ~Release() { s.release(); }
        } release{slots_};

        std::string last_failure = "no attempt made";
        for (int attempt = 0; attempt < config_.max_attempts; ++attempt) {
            if (attempt > 0) backoff(attempt - 1);

            httplib::Client client(config_.base_url);
            client.set_connection_timeout(std::chrono::duration<double>(config_.timeout_seconds));
            client.set_read_timeout(std::chrono::duration<double>(config_.timeout_seconds));
            client.set_write_timeout(std::chrono::duration<double>(config_.timeout_seconds));
            httplib::Headers headers;
            if (!config_.api_key.empty())
                headers.emplace("Authorization", "Bearer " + config_.api_key);

            auto res = client.Post(config_.path, headers, payload, "application/json");
            if (!res) {
                last_failure = "transport error: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status == 429 || res->status >= 500) {
                last_failure = "HTTP " + std::to_string(res->status);
                continue;
            }
            if (res->status != 200)
                throw BackendError("HTTP " + std::to_string(res->status) + ": " + res->body,
                                   request.request_tag);
            return parse_response(res->body, request);
        }
        throw BackendError("gave up after " + std::to_string(config_.max_attempts) +
                               " attempts; last: " + last_failure,
                           request.request_tag);
    }

    CostLedger& ledger() override { return ledger_; }

    const HttpBackendConfig& config() const { return config_; }

   private:
    ChatResponse parse_response(const std::string& body, const ChatRequest& request) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(body);
        } catch (const nlohmann::json::exception& e) {
            throw ProtocolError(std::string("response is not JSON: ") + e.what());
        }
        if (!doc.contains("choices") || !doc["choices"].is_array() || doc["choices"].empty())
            throw ProtocolError("response has no choices: " + body.substr(0, 200));
        const auto& choice = doc["choices"][0];
        if (!choice.contains("message") || !choice["message"].contains("content") ||
            !choice["message"]["content"].is_string())
            throw ProtocolError("choice carries no message content");

        ChatResponse out;
        out.content = choice["message"]["content"].get<std::string>();
        out.model = doc.value("model",
                              request.model.empty() ? config_.default_model : request.model);
        if (doc.contains("usage") && doc["usage"].is_object()) {
            out.prompt_tokens = doc["usage"].value("prompt_tokens", 0L);
            out.completion_tokens = doc["usage"].value("completion_tokens", 0L);
        }
        ledger_.append({request.request_tag, out.model, out.prompt_tokens,
                        out.completion_tokens});
        return out;
    }

    void backoff(int exponent) {
        thread_local std::mt19937_64 jitter_rng{std::random_device{}()};
        double jitter = double(jitter_rng() % 1000) / 1000.0;
        double seconds = config_.backoff_base_seconds * std::pow(2.0, exponent) + jitter;
        std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }

    HttpBackendConfig config_;
    CostLedger ledger_;
    std::counting_semaphore<> slots_;
};

}  // namespace gsearch
