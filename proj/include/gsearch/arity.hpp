// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace gsearch {

/// Input or output cardinality of a component: one answer stream or many.
enum class Arity { One, Many };

inline std::string to_string(Arity a) { return a == Arity::One ? "One" : "Many"; }

/// Input/output arity pair. The four combinations are the SISO / SIMO /
/// MISO / MIMO classes that govern how components may be chained.
struct AritySignature {
    Arity input;
    Arity output;

    bool operator==(const AritySignature&) const = default;
};

/// Short class name for a signature ("SISO", "SIMO", "MISO", "MIMO").
inline std::string class_name(AritySignature sig) {
    std::string s;
    s += sig.input == Arity::One ? "SI" : "MI";
    s += sig.output == Arity::One ? "SO" : "MO";
    return s;
}

}  // namespace gsearch
