#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

#include "plv/diagnostics.hpp"

namespace plv::detail {

struct Token {
    enum class Kind { Ident, Var, Int, Punct, End };
    Kind kind = Kind::End;
    std::string text;
    long value = 0;
    int line = 1;
    int col = 1;

    bool is(Kind k) const { return kind == k; }
    bool is_punct(const std::string& p) const { return kind == Kind::Punct && text == p; }
    bool is_ident(const std::string& s) const { return kind == Kind::Ident && text == s; }
};

// Hand-rolled tokenizer shared by the agent-program, property and timed-net
// parsers. Multi-character operators are matched longest-first from the
// caller-supplied list. '#' starts a comment running to end of line.
class Lexer {
public:
    Lexer(std::string text, std::vector<std::string> operators)
        : text_(std::move(text)), ops_(std::move(operators)) {
        std::sort(ops_.begin(), ops_.end(),
                  [](const std::string& a, const std::string& b) { return a.size() > b.size(); });
        tokenize();
    }

    const std::vector<Token>& tokens() const { return toks_; }

private:
    void tokenize() {
        size_t i = 0;
        int line = 1, col = 1;
        auto advance = [&](size_t n) {
            for (size_t k = 0; k < n; ++k) {
                if (text_[i + k] == '\n') {
                    ++line;
                    col = 1;
                } else {
                    ++col;
                }
            }
            i += n;
        };
        while (i < text_.size()) {
            char c = text_[i];
            if (c == '#') {
                while (i < text_.size() && text_[i] != '\n') advance(1);
                continue;
            }
            if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
                continue;
            }
            Token t;
            t.line = line;
            t.col = col;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                size_t start = i;
                while (i < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[i])) ||
                                            text_[i] == '_')) {
                    ++col;
                    ++i;
                }
                t.text = text_.substr(start, i - start);
                t.kind = (std::isupper(static_cast<unsigned char>(t.text[0])) || t.text[0] == '_')
                             ? Token::Kind::Var
                             : Token::Kind::Ident;
                toks_.push_back(t);
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c))) {
                size_t start = i;
                while (i < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i]))) {
                    ++col;
                    ++i;
                }
                t.kind = Token::Kind::Int;
                t.text = text_.substr(start, i - start);
                t.value = std::stol(t.text);
                toks_.push_back(t);
                continue;
            }
            bool matched = false;
            for (const std::string& op : ops_) {
                if (text_.compare(i, op.size(), op) == 0) {
                    t.kind = Token::Kind::Punct;
                    t.text = op;
                    toks_.push_back(t);
                    advance(op.size());
                    matched = true;
                    break;
                }
            }
            if (!matched)
                throw ParseError("unexpected character", line, col, std::string(1, c));
        }
        Token end;
        end.kind = Token::Kind::End;
        end.line = line;
        end.col = col;
        toks_.push_back(end);
    }

    std::string text_;
    std::vector<std::string> ops_;
    std::vector<Token> toks_;
};

// Cursor over a token stream with the usual expect/accept helpers.
class TokenStream {
public:
    explicit TokenStream(const std::vector<Token>& toks) : toks_(toks) {}

    const Token& peek(size_t ahead = 0) const {
        size_t j = pos_ + ahead;
        return j < toks_.size() ? toks_[j] : toks_.back();
    }
    const Token& next() {
        const Token& t = peek();
        if (pos_ + 1 < toks_.size()) ++pos_;
        return t;
    }
    bool accept_punct(const std::string& p) {
        if (peek().is_punct(p)) {
            next();
            return true;
        }
        return false;
    }
    bool accept_ident(const std::string& s) {
        if (peek().is_ident(s)) {
            next();
            return true;
        }
        return false;
    }
    void expect_punct(const std::string& p) {
        if (!accept_punct(p)) fail("expected '" + p + "'");
    }
    std::string expect_ident() {
        if (!peek().is(Token::Kind::Ident)) fail("expected identifier");
        return next().text;
    }
    bool at_end() const { return peek().is(Token::Kind::End); }

    [[noreturn]] void fail(const std::string& msg) const {
        const Token& t = peek();
        throw ParseError(msg, t.line, t.col, t.text);
    }

private:
    const std::vector<Token>& toks_;
    size_t pos_ = 0;
};

}  // namespace plv::detail
