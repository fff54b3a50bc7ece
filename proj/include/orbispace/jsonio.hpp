#pragma once

#include "orbispace/verdict.hpp"

#include "json.hpp"

#include <optional>
#include <string>

namespace orbi::io {

using Json = nlohmann::ordered_json;

// Document schema: {"version","m","weights","v0_dim","v0_gram","generators",
// "caps"}; rationals travel as "p/q" strings, weights as integer arrays.
rep::RepSpec parse_spec(const Json& doc, std::size_t max_lines);
Json spec_to_json(const rep::RepSpec& spec);

Json verdict_to_json(const ver::Verdict& verdict);
Json trace_to_json(const red::ReductionTrace& trace);

struct CommandOptions {
    std::size_t q = 2;
    std::optional<std::size_t> trials;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> cap;  // overrides group_order_cap
    std::size_t max_lines = 24;
};

struct CommandResult {
    Json report;
    int exit_code = 0;
};

// Runs one CLI command on a JSON document text. Never throws: failures are
// encoded in the report plus the exit code (1 invalid input, 2 cap exceeded,
// 3 internal contradiction).
CommandResult run_command(const std::string& command, const std::string& input_text,
                          const CommandOptions& opts);

std::string human_summary(const Json& report);

}  // namespace orbi::io
