// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "gsearch/errors.hpp"

namespace gsearch {

/// One completion request: a single system+user message pair.
struct ChatRequest {
    std::string model;        // empty = backend default
    std::string system_text;  // agent role
    std::string user_text;    // formatted inputs + instruction
    double temperature = 0.5;
    std::string request_tag;  // agent name + position, for transcripts
};

struct ChatResponse {
    std::string content;
    long prompt_tokens = 0;
    long completion_tokens = 0;
    std::string model;
};

/// Dollars per million tokens, input and output.
struct ModelPrice {
    double input_per_million = 0.0;
    double output_per_million = 0.0;
};

using PriceTable = std::map<std::string, ModelPrice>;

/// Prices for the models this artifact touches by default. The scripted
/// backend is free; live defaults follow the public gpt-4o-mini card.
inline PriceTable default_price_table() {
    return {
        {"scripted", {0.0, 0.0}},
        {"gpt-4o-mini", {0.15, 0.60}},
        {"gpt-4o-mini-2024-07-18", {0.15, 0.60}},
    };
}

struct LedgerEntry {
    std::string request_tag;
    std::string model;
    long prompt_tokens = 0;
    long completion_tokens = 0;

    bool operator==(const LedgerEntry&) const = default;
};

/// Append-only record of every completed call, with the price table needed
/// to turn token counts into dollars. Appends are serialized; reads take
/// snapshots so callers never hold the lock.
class CostLedger {
   public:
    CostLedger() : prices_(default_price_table()) {}
    explicit CostLedger(PriceTable prices) : prices_(std::move(prices)) {}

    void append(LedgerEntry entry) {
        std::lock_guard<std::mutex> lock(mutex_);
        entries_.push_back(std::move(entry));
    }

    std::vector<LedgerEntry> snapshot() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return entries_;
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mutex_);
        return entries_.size();
    }

    void clear() {
        std::lock_guard<std::mutex> lock(mutex_);
        entries_.clear();
    }

    const PriceTable& prices() const { return prices_; }

    void set_price(const std::string& model, ModelPrice price) {
        std::lock_guard<std::mutex> lock(mutex_);
        prices_[model] = price;
    }

    double entry_dollars(const LedgerEntry& e) const {
        auto it = prices_.find(e.model);
        if (it == prices_.end())
            throw PricingError("no price for model '" + e.model + "' (tag " + e.request_tag + ")");
        return double(e.prompt_tokens) * it->second.input_per_million / 1e6 +
               double(e.completion_tokens) * it->second.output_per_million / 1e6;
    }

    double total() const {
        double sum = 0.0;
        for (const auto& e : snapshot()) sum += entry_dollars(e);
        return sum;
    }

    long total_prompt_tokens() const {
        long sum = 0;
        for (const auto& e : snapshot()) sum += e.prompt_tokens;
        return sum;
    }

    long total_completion_tokens() const {
        long sum = 0;
        for (const auto& e : snapshot()) sum += e.completion_tokens;
        return sum;
    }

   private:
    mutable std::mutex mutex_;
    std::vector<LedgerEntry> entries_;
    PriceTable prices_;
};

inline double ledger_total(const CostLedger& ledger) { return ledger.total(); }

/// A completion provider. Every successful complete() appends exactly one
/// ledger entry; implementations must be safe for concurrent callers.
class LLMBackend {
   public:
    virtual ~LLMBackend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
    virtual CostLedger& ledger() = 0;
    const CostLedger& ledger() const { return const_cast<LLMBackend*>(this)->ledger(); }
};

}  // namespace gsearch
