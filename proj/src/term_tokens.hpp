#pragma once

#include "lexer.hpp"
#include "plv/term.hpp"

namespace plv::detail {

// Parses a term from a token stream: ident, integer, variable or
// functor(args...). Shared by the program and property parsers.
inline Term parse_term(TokenStream& ts) {
    const Token& t = ts.peek();
    if (t.is(Token::Kind::Int)) {
        ts.next();
        return Term::number(t.value);
    }
    if (t.is(Token::Kind::Var)) {
        ts.next();
        return Term::var(t.text);
    }
    if (!t.is(Token::Kind::Ident)) ts.fail("expected term");
    std::string name = ts.next().text;
    if (!ts.peek().is_punct("(")) return Term::atom(name);
    ts.next();
    std::vector<Term> args;
    if (ts.accept_punct(")")) return Term::atom(name);
    while (true) {
        args.push_back(parse_term(ts));
        if (ts.accept_punct(",")) continue;
        ts.expect_punct(")");
        break;
    }
    return Term::compound(name, std::move(args));
}

}  // namespace plv::detail
