#pragma once

#include <tcsp/error.hpp>

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace tcsp::detail {

enum class TokenKind { End, Identifier, Integer, String, Symbol };

struct Token {
    TokenKind kind = TokenKind::End;
    std::string text;
    std::size_t offset = 0;
    std::size_t line = 1;
    std::size_t column = 1;
};

/// On-demand tokenizer shared by the text formats. `#` starts a comment that
/// runs to the end of the line.
class Lexer {
public:
    explicit Lexer(std::string_view text, std::size_t first_line = 1) : text_(text), line_(first_line) {}

    const Token& peek()
    {
        if (!peeked_)
            peeked_ = scan();
        return *peeked_;
    }

    Token next()
    {
        Token t = peek();
        peeked_.reset();
        return t;
    }

    bool at_end() { return peek().kind == TokenKind::End; }

    bool is_symbol(std::string_view s) { return peek().kind == TokenKind::Symbol && peek().text == s; }
    bool is_identifier(std::string_view s) { return peek().kind == TokenKind::Identifier && peek().text == s; }

    bool accept_symbol(std::string_view s)
    {
        if (!is_symbol(s))
            return false;
        next();
        return true;
    }

    bool accept_identifier(std::string_view s)
    {
        if (!is_identifier(s))
            return false;
        next();
        return true;
    }

    void expect_symbol(std::string_view s)
    {
        if (!accept_symbol(s))
            fail("expected '" + std::string(s) + "' but found " + describe(peek()));
    }

    void expect_keyword(std::string_view s)
    {
        if (!accept_identifier(s))
            fail("expected '" + std::string(s) + "' but found " + describe(peek()));
    }

    std::string expect_identifier(std::string_view what = "identifier")
    {
        if (peek().kind != TokenKind::Identifier)
            fail("expected " + std::string(what) + " but found " + describe(peek()));
        return next().text;
    }

    std::size_t expect_integer(std::string_view what = "integer")
    {
        if (peek().kind != TokenKind::Integer)
            fail("expected " + std::string(what) + " but found " + describe(peek()));
        const Token t = next();
        try {
            return std::stoull(t.text);
        } catch (const std::exception&) {
            throw ParseError("integer out of range", t.line, t.column);
        }
    }

    std::string expect_string()
    {
        if (peek().kind != TokenKind::String)
            fail("expected a quoted string but found " + describe(peek()));
        return next().text;
    }

    /// Raw text from the current position up to (not including) `stop`; the
    /// stop character is consumed. Returns the text and its first line.
    std::pair<std::string_view, std::size_t> raw_until(char stop)
    {
        if (peeked_) {
            pos_ = peeked_->offset;
            line_ = peeked_->line;
            column_ = peeked_->column;
            peeked_.reset();
        }
        const std::size_t start = pos_;
        const std::size_t start_line = line_;
        while (pos_ < text_.size() && text_[pos_] != stop)
            advance();
        if (pos_ >= text_.size())
            throw ParseError(std::string("missing '") + stop + "'", line_, column_);
        std::string_view raw = text_.substr(start, pos_ - start);
        advance();
        return {raw, start_line};
    }

    [[noreturn]] void fail(const std::string& message) { fail(message, peek()); }

    [[noreturn]] static void fail(const std::string& message, const Token& at)
    {
        throw ParseError(message, at.line, at.column);
    }

    static std::string describe(const Token& t)
    {
        switch (t.kind) {
        case TokenKind::End:
            return "end of input";
        case TokenKind::String:
            return "string \"" + t.text + "\"";
        default:
            return "'" + t.text + "'";
        }
    }

private:
    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else {
            ++column_;
        }
        ++pos_;
    }

    Token scan()
    {
        for (;;) {
            while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
                advance();
            if (pos_ < text_.size() && text_[pos_] == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
                continue;
            }
            break;
        }
        Token t;
        t.offset = pos_;
        t.line = line_;
        t.column = column_;
        if (pos_ >= text_.size())
            return t;
        const char c = text_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = TokenKind::Identifier;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                t.text.push_back(text_[pos_]);
                advance();
            }
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = TokenKind::Integer;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                t.text.push_back(text_[pos_]);
                advance();
            }
        } else if (c == '"') {
            t.kind = TokenKind::String;
            advance();
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\n')
                    throw ParseError("unterminated string", t.line, t.column);
                t.text.push_back(text_[pos_]);
                advance();
            }
            if (pos_ >= text_.size())
                throw ParseError("unterminated string", t.line, t.column);
            advance();
        } else {
            t.kind = TokenKind::Symbol;
            if (pos_ + 1 < text_.size() && c == '!' && text_[pos_ + 1] == '=') {
                t.text = "!=";
                advance();
                advance();
            } else if (std::string_view("(){}[],;&|!=<>/:*").find(c) != std::string_view::npos) {
                t.text = std::string(1, c);
                advance();
            } else {
                throw ParseError(std::string("unexpected character '") + c + "'", line_, column_);
            }
        }
        return t;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
    std::optional<Token> peeked_;
};

} // namespace tcsp::detail
