// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "vistok/budget_control.hpp"

#include <string>

#include "vistok/error.hpp"

namespace vistok {

const char* to_string(BudgetPhase phase) {
    switch (phase) {
    case BudgetPhase::PreThink: return "PRE_THINK";
    case BudgetPhase::Thinking: return "THINKING";
    case BudgetPhase::Closing: return "CLOSING";
    case BudgetPhase::Answer: return "ANSWER";
    case BudgetPhase::Done: return "DONE";
    }
    return "?";
}

const char* to_string(BudgetAction action) {
    switch (action) {
    case BudgetAction::Pass: return "PASS";
    case BudgetAction::RequestSoftClose: return "REQUEST_SOFT_CLOSE";
    case BudgetAction::ForceInjectClose: return "FORCE_INJECT_CLOSE";
    }
    return "?";
}

BudgetAction on_token(BudgetState& state, const BudgetConfig& cfg, TokenId token) {
    if (state.phase == BudgetPhase::Done) fail(ErrorKind::Protocol, "token received after end of stream");
    if (cfg.end_of_stream && token == *cfg.end_of_stream) {
        state.phase = BudgetPhase::Done;
        return BudgetAction::Pass;
    }

    const bool enforce = cfg.budget > 0;
    const std::uint64_t hard_cap = cfg.budget + cfg.grace;
    const bool in_block = state.phase == BudgetPhase::Thinking || state.phase == BudgetPhase::Closing;

    if (!in_block) {
        if (token != cfg.think_open) return BudgetAction::Pass;
        if (enforce && state.thinking_tokens_used >= hard_cap) {
            state.phase = BudgetPhase::Answer;
            state.forced_close = true;
            return BudgetAction::ForceInjectClose;
        }
        state.phase = enforce && state.thinking_tokens_used >= cfg.budget ? BudgetPhase::Closing : BudgetPhase::Thinking;
        return BudgetAction::Pass;
    }

    if (token == cfg.think_close) {
        state.phase = BudgetPhase::Answer;
        return BudgetAction::Pass;
    }

    ++state.thinking_tokens_used;
    if (!enforce) return BudgetAction::Pass;
    if (state.thinking_tokens_used >= hard_cap) {
        state.phase = BudgetPhase::Answer;
        state.forced_close = true;
        return BudgetAction::ForceInjectClose;
    }
    if (state.thinking_tokens_used == cfg.budget) {
        state.phase = BudgetPhase::Closing;
        return BudgetAction::RequestSoftClose;
    }
    return BudgetAction::Pass;
}

void finish(BudgetState& state) { state.phase = BudgetPhase::Done; }

BudgetController::BudgetController(BudgetConfig cfg) : cfg_(cfg) {
    if (cfg_.think_open == cfg_.think_close) fail(ErrorKind::InvalidConfig, "think_open and think_close must differ");
}

void validate_markers(std::span<const TokenId> trace, TokenId think_open, TokenId think_close) {
    bool open = false;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        if (trace[i] == think_open) {
            if (open) fail(ErrorKind::Protocol, "nested think_open at position " + std::to_string(i));
            open = true;
        } else if (trace[i] == think_close) {
            if (!open) fail(ErrorKind::Protocol, "think_close without open block at position " + std::to_string(i));
            open = false;
        }
    }
}

BudgetReplay replay_trace(std::span<const TokenId> trace, const BudgetConfig& cfg) {
    if (cfg.think_open == cfg.think_close) fail(ErrorKind::InvalidConfig, "think_open and think_close must differ");
    validate_markers(trace, cfg.think_open, cfg.think_close);

    BudgetReplay out;
    out.output.reserve(trace.size() + 1);
    BudgetState state;
    bool in_recorded_block = false;
    bool skipping = false;
    bool output_open = false;

    for (const TokenId token : trace) {
        const bool is_open = token == cfg.think_open;
        const bool is_close = token == cfg.think_close;
        if (in_recorded_block) {
            if (!is_close) ++out.thinking_total;
        }
        if (is_open) in_recorded_block = true;
        if (is_close) in_recorded_block = false;

        if (skipping) {
            if (is_close) skipping = false;
            continue;
        }

        const BudgetAction action = on_token(state, cfg, token);
        out.output.push_back(token);
        if (is_open) output_open = true;
        if (output_open && !is_open && !is_close) ++out.thinking_kept;
        if (is_close && output_open) {
            output_open = false;
            out.answer_offset = static_cast<std::int64_t>(out.output.size());
        }

        if (action == BudgetAction::RequestSoftClose) out.soft_close_requested = true;
        if (action == BudgetAction::ForceInjectClose) {
            out.forced = true;
            out.output.push_back(cfg.think_close);
            output_open = false;
            out.answer_offset = static_cast<std::int64_t>(out.output.size());
            skipping = in_recorded_block;
        }
        if (state.phase == BudgetPhase::Done) break;
    }
    if (output_open) out.answer_offset = -1;
    return out;
}

std::vector<BudgetSummary> budget_sweep(std::span<const TokenId> trace, std::span<const std::uint64_t> budgets,
                                        TokenId think_open, TokenId think_close, std::uint64_t grace) {
    validate_markers(trace, think_open, think_close);
    std::vector<BudgetSummary> out;
    out.reserve(budgets.size());
    for (const std::uint64_t b : budgets) {
        BudgetSummary s;
        s.budget = b;
        s.unrestricted = b >= kUnrestrictedBudget;
        BudgetConfig cfg;
        cfg.budget = s.unrestricted ? 0 : b;
        cfg.grace = grace;
        cfg.think_open = think_open;
        cfg.think_close = think_close;
        s.replay = replay_trace(trace, cfg);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace vistok
