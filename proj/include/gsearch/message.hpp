// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <iostream>
#include <string>
#include <vector>

#include "gsearch/errors.hpp"

namespace gsearch {

/// Information record passed between agents: who said what, and in which
/// loop iteration (-1 outside any loop).
struct Message {
    std::string name;
    std::string author;
    std::string content;
    int iteration_idx = -1;

    bool operator==(const Message&) const = default;
};

/// An agent identity: display name, the role text sent as the system
/// message, and the sampling temperature.
struct AgentProfile {
    std::string display_name;
    std::string role = "assistant";
    double temperature = 0.5;

    bool operator==(const AgentProfile&) const = default;
};

/// The problem under execution, wrapped as the conventional task message.
struct TaskContext {
    Message task_text;
};

inline TaskContext make_task(std::string question) {
    if (question.empty()) throw ConfigError("task text must be non-empty");
    return TaskContext{Message{"task", "User", std::move(question), -1}};
}

/// Where component warnings go (degraded aggregator inputs and similar).
/// Defaults to stderr; tests plug in a collector.
inline std::function<void(const std::string&)>& warn_sink() {
    static std::function<void(const std::string&)> sink = [](const std::string& w) {
        std::cerr << "warning: " << w << '\n';
    };
    return sink;
}

inline void warn(const std::string& text) { warn_sink()(text); }

}  // namespace gsearch
