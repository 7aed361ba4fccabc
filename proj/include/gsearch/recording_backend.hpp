// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "gsearch/backend.hpp"

namespace gsearch {

/// Decorator that persists every (request, response) pair as one JSON line,
/// for post-hoc audit of a run. Lines carry no timestamps: two identical
/// runs must produce identical transcripts.
class RecordingBackend final : public LLMBackend {
   public:
    RecordingBackend(LLMBackend& inner, std::ostream& sink) : inner_(inner), sink_(&sink) {}

    RecordingBackend(LLMBackend& inner, const std::string& path) : inner_(inner) {
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw ConfigError("cannot open transcript file: " + path);
        sink_ = file_.get();
    }

    ChatResponse complete(const ChatRequest& request) override {
        ChatResponse response = inner_.complete(request);
        nlohmann::json line = {
            {"tag", request.request_tag},
            {"model", response.model},
            {"temperature", request.temperature},
            {"system", request.system_text},
            {"user", request.user_text},
            {"content", response.content},
            {"prompt_tokens", response.prompt_tokens},
            {"completion_tokens", response.completion_tokens},
        };
        std::lock_guard<std::mutex> lock(mutex_);
        *sink_ << line.dump() << '\n';
        sink_->flush();
        return response;
    }

    CostLedger& ledger() override { return inner_.ledger(); }

   private:
    LLMBackend& inner_;
    std::ostream* sink_ = nullptr;
    std::unique_ptr<std::ofstream> file_;
    std::mutex mutex_;
};

}  // namespace gsearch
