// Copyright (C) 2026 the gsearch authors
// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header: grammar-constrained search over multi-agent LLM systems.
#pragma once

#include "gsearch/arity.hpp"
#include "gsearch/backend.hpp"
#include "gsearch/commands.hpp"
#include "gsearch/component.hpp"
#include "gsearch/components.hpp"
#include "gsearch/enumerate.hpp"
#include "gsearch/errors.hpp"
#include "gsearch/eval.hpp"
#include "gsearch/executor.hpp"
#include "gsearch/grammar.hpp"
#include "gsearch/http_backend.hpp"
#include "gsearch/message.hpp"
#include "gsearch/prompts.hpp"
#include "gsearch/recognize.hpp"
#include "gsearch/recording_backend.hpp"
#include "gsearch/rng.hpp"
#include "gsearch/sample.hpp"
#include "gsearch/scripted_backend.hpp"
#include "gsearch/search.hpp"
