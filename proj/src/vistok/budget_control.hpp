// Copyright (C) 2026 The vistok Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace vistok {

using TokenId = std::int64_t;

struct BudgetConfig {
    std::uint64_t budget = 0;  // 0 disables the controller (reasoning off)
    std::uint64_t grace = 500;
    TokenId think_open = -1;
    TokenId think_close = -2;
    std::optional<TokenId> end_of_stream;
};

enum class BudgetPhase { PreThink, Thinking, Closing, Answer, Done };
enum class BudgetAction { Pass, RequestSoftClose, ForceInjectClose };

const char* to_string(BudgetPhase phase);
const char* to_string(BudgetAction action);

struct BudgetState {
    BudgetPhase phase = BudgetPhase::PreThink;
    std::uint64_t thinking_tokens_used = 0;
    bool forced_close = false;
};

/// Advances the controller by one decoded token.
///
/// Thinking tokens are counted across all think blocks. The token that
/// brings the count to the budget returns RequestSoftClose; the one that
/// brings it to budget + grace returns ForceInjectClose, meaning: forward
/// this token, then emit think_close. An open marker arriving after the
/// allowance is spent is answered with ForceInjectClose immediately.
/// Any token after Done throws ErrorKind::Protocol.
BudgetAction on_token(BudgetState& state, const BudgetConfig& cfg, TokenId token);

/// Marks the stream finished; later tokens are a protocol error.
void finish(BudgetState& state);

class BudgetController {
public:
    explicit BudgetController(BudgetConfig cfg);

    BudgetAction on_token(TokenId token) { return vistok::on_token(state_, cfg_, token); }
    void finish() { vistok::finish(state_); }
    const BudgetState& state() const { return state_; }
    const BudgetConfig& config() const { return cfg_; }

private:
    BudgetConfig cfg_;
    BudgetState state_;
};

/// Generation limit that counts as unrestricted reasoning.
inline constexpr std::uint64_t kUnrestrictedBudget = 16384;

struct BudgetReplay {
    std::vector<TokenId> output;
    std::uint64_t thinking_total = 0;  // thinking tokens in the input trace
    std::uint64_t thinking_kept = 0;   // thinking tokens in the output
    bool forced = false;
    bool soft_close_requested = false;
    std::int64_t answer_offset = 0;    // output index after the last close, -1 if a block never closes
};

/// Throws ErrorKind::Protocol on an open inside an open block or a close
/// outside one. A trailing unclosed block is allowed.
void validate_markers(std::span<const TokenId> trace, TokenId think_open, TokenId think_close);

/// Replays a recorded decode. Tokens the model would no longer have produced
/// after a forced close (the rest of that block, including its own close)
/// are dropped from the output.
BudgetReplay replay_trace(std::span<const TokenId> trace, const BudgetConfig& cfg);

struct BudgetSummary {
    std::uint64_t budget = 0;
    bool unrestricted = false;
    BudgetReplay replay;
};

/// One replay per budget. Budget 0 (reasoning off) and budgets at or above
/// kUnrestrictedBudget run without intervention.
std::vector<BudgetSummary> budget_sweep(std::span<const TokenId> trace, std::span<const std::uint64_t> budgets,
                                        TokenId think_open, TokenId think_close, std::uint64_t grace = 500);

}  // namespace vistok
