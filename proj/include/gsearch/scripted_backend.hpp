// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <mutex>
#include <regex>
#include <string>
#include <vector>

#include "gsearch/backend.hpp"

namespace gsearch {

/// Deterministic in-memory backend driven by an ordered rule table. The
/// first rule whose matcher hits the request's user_text (and whose call
/// budget is not spent) answers; otherwise the fallback does. With no call
/// budgets in play the backend is a pure function of the request, which is
/// what makes whole searches replayable bit for bit.
class ScriptedBackend final : public LLMBackend {
   public:
    enum class Fallback { Echo, Fixed, Error };

    struct Rule {
        enum class Match { Substring, Pattern } match = Match::Substring;
        std::string needle;     // substring, or ECMAScript regex source
        std::string response;
        int max_calls = -1;     // -1 = unlimited
        int used = 0;
    };

    ScriptedBackend() = default;
    explicit ScriptedBackend(PriceTable prices) : ledger_(std::move(prices)) {}

    ScriptedBackend& when_contains(std::string needle, std::string response, int max_calls = -1) {
        rules_.push_back({Rule::Match::Substring, std::move(needle), std::move(response),
                          max_calls, 0});
        return *this;
    }

    ScriptedBackend& when_matches(std::string pattern, std::string response, int max_calls = -1) {
        rules_.push_back({Rule::Match::Pattern, std::move(pattern), std::move(response),
                          max_calls, 0});
        return *this;
    }

    ScriptedBackend& fallback_echo() {
        fallback_ = Fallback::Echo;
        return *this;
    }

    ScriptedBackend& fallback_fixed(std::string text) {
        fallback_ = Fallback::Fixed;
        fallback_text_ = std::move(text);
        return *this;
    }

    ScriptedBackend& fallback_error() {
        fallback_ = Fallback::Error;
        return *this;
    }

    ScriptedBackend& set_model_name(std::string name) {
        model_name_ = std::move(name);
        return *this;
    }

    ChatResponse complete(const ChatRequest& request) override {
        if (request.user_text.empty())
            throw BackendError("empty user_text", request.request_tag);
        std::string content;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            const Rule* hit = nullptr;
            for (auto& rule : rules_) {
                if (rule.max_calls >= 0 && rule.used >= rule.max_calls) continue;
                bool matched =
                    rule.match == Rule::Match::Substring
                        ? request.user_text.find(rule.needle) != std::string::npos
                        : std::regex_search(request.user_text, std::regex(rule.needle));
                if (matched) {
                    ++rule.used;
                    hit = &rule;
                    break;
                }
            }
            if (hit) {
                content = hit->response;
            } else {
                switch (fallback_) {
                    case Fallback::Echo: content = request.user_text; break;
                    case Fallback::Fixed: content = fallback_text_; break;
                    case Fallback::Error:
                        throw BackendError("no scripted rule matches", request.request_tag);
                }
            }
        }
        ChatResponse response;
        response.content = std::move(content);
        response.model = model_name_;
        response.prompt_tokens =
            long((request.system_text.size() + request.user_text.size() + 3) / 4);
        response.completion_tokens = long((response.content.size() + 3) / 4);
        ledger_.append({request.request_tag, response.model, response.prompt_tokens,
                        response.completion_tokens});
        return response;
    }

    CostLedger& ledger() override { return ledger_; }

    std::size_t call_count() const { return ledger_.size(); }

   private:
    std::vector<Rule> rules_;
    Fallback fallback_ = Fallback::Echo;
    std::string fallback_text_;
    std::string model_name_ = "scripted";
    std::mutex mutex_;
    CostLedger ledger_;
};

}  // namespace gsearch
