#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "montiarc/diagnostics.hpp"

namespace montiarc {

enum class TokenKind {
    Identifier,
    IntLiteral,
    CharLiteral,
    StringLiteral,
    // Keywords (closed set; identifiers may not collide with these).
    KwComponent, KwPort, KwIn, KwOut, KwConnect, KwExtends,
    KwAutoconnect, KwAutoinstantiate, KwBehavior, KwInv,
    KwType, KwOff, KwOn, KwTimed, KwUntimed, KwTimesynchronous,
    // Punctuation.
    LBrace, RBrace, LBracket, RBracket, LParen, RParen,
    Less, Greater, Comma, Semicolon, Colon, Dot, Arrow, Star,
    StereoOpen,   // `<<`
    StereoClose,  // `>>`
    EndOfFile,
    Invalid,
};

struct Token {
    TokenKind kind = TokenKind::Invalid;
    std::string text;
    size_t offset = 0;      // byte offset of first character
    size_t end_offset = 0;  // one past last character
    SourceSpan span;
};

bool is_keyword(std::string_view word);
const char* token_kind_name(TokenKind k);

// On-demand tokenizer. The parser drives it and may rewind to a byte
// offset (needed for raw invariant-body capture, which is character
// based and bypasses tokenization).
class Lexer {
public:
    Lexer(std::string_view text, std::string file);

    Token next();
    void rewind_to(size_t offset);

    struct RawCapture {
        std::string text;     // body up to (not including) the `;`
        SourceSpan span;
        bool terminated = false;  // false: hit EOF (P002)
        size_t end_offset = 0;    // offset just past the `;`
    };
    // Scans raw text until the first `;` at bracket depth zero, aware of
    // string/char literals and comments.
    RawCapture capture_raw_until_semicolon(size_t from_offset);

    const Diagnostics& diagnostics() const { return diags_; }
    const std::string& file() const { return file_; }

private:
    char peek(size_t ahead = 0) const;
    bool at_end() const { return pos_ >= text_.size(); }
    void advance();
    void skip_trivia();
    SourcePos pos_at(size_t offset) const;

    std::string_view text_;
    std::string file_;
    size_t pos_ = 0;
    std::vector<size_t> line_starts_;
    Diagnostics diags_;
};

}  // namespace montiarc
