#include "plv/agent_syntax.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "lexer.hpp"
#include "term_tokens.hpp"

namespace plv {

std::string to_string(GoalKind k) { return k == GoalKind::Achieve ? "achieve" : "perform"; }

std::string GuardLiteral::str() const {
    std::string s;
    if (!positive) s += "~";
    s += mod == Mod::Belief ? "B " : "G ";
    s += pattern.str();
    if (goal_kind) s += " [" + to_string(*goal_kind) + "]";
    return s;
}

std::string BodyStep::str() const {
    switch (kind) {
        case Kind::AddGoal:
            return "+!" + term.str() + " [" + to_string(goal_kind) + "]";
        case Kind::AddBelief:
            return "+" + term.str();
        case Kind::RemoveBelief:
            return "-" + term.str();
        case Kind::WaitFor:
            return "*" + term.str();
        case Kind::Perform:
            return "perf(" + term.str() + ")";
        case Kind::Send:
            return ".send(" + recipient.str() + ", :" + performative + ", " + term.str() + ")";
    }
    return "";
}

std::string Plan::str() const {
    std::string s;
    if (trigger == Trigger::GoalAdded)
        s += "+!" + trigger_pattern.str() + " [" + to_string(trigger_kind) + "]";
    else
        s += "+" + trigger_pattern.str();
    s += " : {";
    for (size_t i = 0; i < guard.size(); ++i) {
        if (i) s += ", ";
        s += guard[i].str();
    }
    s += "}\n    <- ";
    for (size_t i = 0; i < body.size(); ++i) {
        if (i) s += ",\n       ";
        s += body[i].str();
    }
    s += ";";
    return s;
}

std::string ReasoningRule::str() const {
    std::string s = head.str() + " :- ";
    for (size_t i = 0; i < body.size(); ++i) {
        if (i) s += ", ";
        s += body[i].str();
    }
    return s;
}

std::string AgentProgram::str() const {
    std::ostringstream os;
    if (!name.empty()) os << "Name\n" << name << "\n\n";
    if (!initial_beliefs.empty()) {
        os << "Initial Beliefs\n";
        for (const Term& b : initial_beliefs) os << b.str() << "\n";
        os << "\n";
    }
    if (!initial_goals.empty()) {
        os << "Initial Goals\n";
        for (const auto& [g, k] : initial_goals) os << g.str() << " [" << to_string(k) << "]\n";
        os << "\n";
    }
    if (!rules.empty()) {
        os << "Reasoning Rules\n";
        for (const ReasoningRule& r : rules) os << r.str() << "\n";
        os << "\n";
    }
    if (!plans.empty()) {
        os << "Plans\n";
        for (const Plan& p : plans) os << p.str() << "\n\n";
    }
    return os.str();
}

namespace {

using detail::Token;
using detail::TokenStream;

const std::vector<std::string> kProgramOps = {"+!", ":-", "<-", "(", ")", "{", "}", "[",
                                              "]",  ",",  ";",  ":", ".", "~", "+", "-", "*"};

GoalKind parse_annotation(TokenStream& ts) {
    ts.expect_punct("[");
    std::string kind = ts.expect_ident();
    ts.expect_punct("]");
    if (kind == "achieve") return GoalKind::Achieve;
    if (kind == "perform") return GoalKind::Perform;
    ts.fail("expected 'achieve' or 'perform'");
}

bool at_section_header(const TokenStream& ts) {
    const Token& t = ts.peek();
    if (!t.is(Token::Kind::Var)) return false;
    if (t.text == "Name" || t.text == "Plans") return true;
    if (t.text == "Initial")
        return ts.peek(1).is(Token::Kind::Var) &&
               (ts.peek(1).text == "Beliefs" || ts.peek(1).text == "Goals");
    if (t.text == "Reasoning") return ts.peek(1).is(Token::Kind::Var) && ts.peek(1).text == "Rules";
    return false;
}

GuardLiteral parse_guard_literal(TokenStream& ts) {
    GuardLiteral lit;
    if (ts.accept_punct("~")) lit.positive = false;
    const Token& m = ts.peek();
    if (!m.is(Token::Kind::Var) || (m.text != "B" && m.text != "G"))
        ts.fail("expected guard modality 'B' or 'G'");
    lit.mod = m.text == "B" ? GuardLiteral::Mod::Belief : GuardLiteral::Mod::Goal;
    ts.next();
    lit.pattern = detail::parse_term(ts);
    if (ts.peek().is_punct("[")) {
        if (lit.mod != GuardLiteral::Mod::Goal) ts.fail("kind annotation only on goal literals");
        lit.goal_kind = parse_annotation(ts);
    }
    return lit;
}

BodyStep parse_body_step(TokenStream& ts) {
    BodyStep step;
    if (ts.accept_punct("+!")) {
        step.kind = BodyStep::Kind::AddGoal;
        step.term = detail::parse_term(ts);
        step.goal_kind = parse_annotation(ts);
        return step;
    }
    if (ts.accept_punct("+")) {
        step.kind = BodyStep::Kind::AddBelief;
        step.term = detail::parse_term(ts);
        return step;
    }
    if (ts.accept_punct("-")) {
        step.kind = BodyStep::Kind::RemoveBelief;
        step.term = detail::parse_term(ts);
        return step;
    }
    if (ts.accept_punct("*")) {
        step.kind = BodyStep::Kind::WaitFor;
        step.term = detail::parse_term(ts);
        return step;
    }
    if (ts.accept_punct(".")) {
        std::string fn = ts.expect_ident();
        if (fn != "send") ts.fail("expected 'send'");
        ts.expect_punct("(");
        step.kind = BodyStep::Kind::Send;
        step.recipient = detail::parse_term(ts);
        if (!step.recipient.is_atom() && !step.recipient.is_var())
            ts.fail("recipient must be an agent name or a variable");
        ts.expect_punct(",");
        ts.expect_punct(":");
        step.performative = ts.expect_ident();
        ts.expect_punct(",");
        step.term = detail::parse_term(ts);
        ts.expect_punct(")");
        return step;
    }
    if (ts.peek().is_ident("perf")) {
        ts.next();
        ts.expect_punct("(");
        step.kind = BodyStep::Kind::Perform;
        step.term = detail::parse_term(ts);
        ts.expect_punct(")");
        return step;
    }
    ts.fail("expected body step");
}

Plan parse_plan(TokenStream& ts) {
    Plan p;
    if (ts.accept_punct("+!")) {
        p.trigger = Plan::Trigger::GoalAdded;
        p.trigger_pattern = detail::parse_term(ts);
        p.trigger_kind = parse_annotation(ts);
    } else if (ts.accept_punct("+")) {
        p.trigger = Plan::Trigger::BeliefAdded;
        p.trigger_pattern = detail::parse_term(ts);
    } else {
        ts.fail("expected plan trigger");
    }
    ts.expect_punct(":");
    ts.expect_punct("{");
    if (!ts.accept_punct("}")) {
        while (true) {
            p.guard.push_back(parse_guard_literal(ts));
            if (ts.accept_punct(",")) continue;
            ts.expect_punct("}");
            break;
        }
    }
    ts.expect_punct("<-");
    while (true) {
        p.body.push_back(parse_body_step(ts));
        if (ts.accept_punct(",")) continue;
        ts.expect_punct(";");
        break;
    }
    return p;
}

}  // namespace

AgentProgram parse_program(const std::string& text) {
    detail::Lexer lex(text, kProgramOps);
    TokenStream ts(lex.tokens());
    AgentProgram prog;

    while (!ts.at_end()) {
        if (!at_section_header(ts)) ts.fail("expected section header");
        std::string header = ts.next().text;
        if (header == "Initial" || header == "Reasoning") header += " " + ts.next().text;

        if (header == "Name") {
            prog.name = ts.expect_ident();
        } else if (header == "Initial Beliefs") {
            while (!ts.at_end() && !at_section_header(ts))
                prog.initial_beliefs.push_back(detail::parse_term(ts));
        } else if (header == "Initial Goals") {
            while (!ts.at_end() && !at_section_header(ts)) {
                Term g = detail::parse_term(ts);
                GoalKind k = parse_annotation(ts);
                prog.initial_goals.emplace_back(std::move(g), k);
            }
        } else if (header == "Reasoning Rules") {
            while (!ts.at_end() && !at_section_header(ts)) {
                ReasoningRule rule;
                rule.head = detail::parse_term(ts);
                ts.expect_punct(":-");
                while (true) {
                    rule.body.push_back(detail::parse_term(ts));
                    if (ts.accept_punct(",")) continue;
                    break;
                }
                prog.rules.push_back(std::move(rule));
            }
        } else {  // Plans
            while (!ts.at_end() && !at_section_header(ts)) prog.plans.push_back(parse_plan(ts));
        }
    }
    validate_program(prog);
    return prog;
}

std::string print_program(const AgentProgram& p) { return p.str(); }

void validate_program(const AgentProgram& p) {
    for (size_t i = 0; i < p.plans.size(); ++i) {
        const Plan& plan = p.plans[i];
        std::set<std::string> bound;
        for (const std::string& v : plan.trigger_pattern.vars()) bound.insert(v);
        for (const GuardLiteral& lit : plan.guard) {
            if (lit.positive)
                for (const std::string& v : lit.pattern.vars()) bound.insert(v);
        }
        for (const BodyStep& step : plan.body) {
            if (step.kind == BodyStep::Kind::WaitFor) continue;  // wait patterns may bind on wake
            std::vector<std::string> step_vars = step.term.vars();
            if (step.kind == BodyStep::Kind::Send)
                for (const std::string& v : step.recipient.vars()) step_vars.push_back(v);
            for (const std::string& v : step_vars) {
                if (!bound.count(v))
                    throw ConfigError("plan " + std::to_string(i + 1) + ": unbound variable '" +
                                      v + "' in body step " + step.str());
            }
        }
    }
    for (const Term& b : p.initial_beliefs) {
        if (!b.ground()) throw ConfigError("initial belief not ground: " + b.str());
    }
}

}  // namespace plv
