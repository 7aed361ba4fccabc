// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace gsearch {

/// Base class for all gsearch errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid or inconsistent configuration (bad paths, missing credential,
/// empty validation set, malformed grammar file, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Malformed input text (dataset line, sequence token, grammar document).
/// Carries a 1-based line or token position where known.
struct ParseError : Error {
    ParseError(const std::string& what, long position = -1)
        : Error(what), position(position) {}
    long position;
};

/// A backend call failed after exhausting its retry budget.
struct BackendError : Error {
    BackendError(const std::string& what, std::string request_tag = {})
        : Error(what), request_tag(std::move(request_tag)) {}
    std::string request_tag;
};

/// The backend answered but the response body could not be interpreted.
struct ProtocolError : Error {
    using Error::Error;
};

/// A cost ledger entry references a model absent from the price table.
struct PricingError : Error {
    using Error::Error;
};

/// A pipeline run exceeded its wall-clock deadline.
struct TimeoutError : Error {
    using Error::Error;
};

/// Arity or cardinality violation while stitching components together.
struct StructureError : Error {
    using Error::Error;
};

/// The sampler's resample budget ran out before a complete sequence
/// (or, during search, an unseen forced sequence) was produced.
struct SampleBudgetError : Error {
    using Error::Error;
};

}  // namespace gsearch
