#pragma once

#include <string>

#include "plv/agent_ast.hpp"
#include "plv/diagnostics.hpp"

namespace plv {

// Parses agent-program concrete syntax. The grammar is documented in
// docs/agent-language.md; see models/follower.agent for a full example.
// Throws ParseError with line/column on malformed input.
AgentProgram parse_program(const std::string& text);

// Canonical pretty-printer. print_program(p) re-parses to a program equal
// to p (round-trip invariant, exercised by the test suite).
std::string print_program(const AgentProgram& p);

// Structural well-formedness: every variable used in a body step or in a
// positive guard literal is bound by the trigger or an earlier positive
// guard literal. Variables appearing only under negation are existential
// and exempt. Throws ConfigError on violation.
void validate_program(const AgentProgram& p);

}  // namespace plv
