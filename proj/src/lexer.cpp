#include "montiarc/lexer.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>

namespace montiarc {

namespace {

const std::map<std::string_view, TokenKind>& keyword_map() {
    static const std::map<std::string_view, TokenKind> kws = {
        {"component", TokenKind::KwComponent},
        {"port", TokenKind::KwPort},
        {"in", TokenKind::KwIn},
        {"out", TokenKind::KwOut},
        {"connect", TokenKind::KwConnect},
        {"extends", TokenKind::KwExtends},
        {"autoconnect", TokenKind::KwAutoconnect},
        {"autoinstantiate", TokenKind::KwAutoinstantiate},
        {"behavior", TokenKind::KwBehavior},
        {"inv", TokenKind::KwInv},
        {"type", TokenKind::KwType},
        {"off", TokenKind::KwOff},
        {"on", TokenKind::KwOn},
        {"timed", TokenKind::KwTimed},
        {"untimed", TokenKind::KwUntimed},
        {"timesynchronous", TokenKind::KwTimesynchronous},
    };
    return kws;
}

}  // namespace

bool is_keyword(std::string_view word) { return keyword_map().count(word) > 0; }

const char* token_kind_name(TokenKind k) {
    switch (k) {
        case TokenKind::Identifier: return "identifier";
        case TokenKind::IntLiteral: return "integer literal";
        case TokenKind::CharLiteral: return "character literal";
        case TokenKind::StringLiteral: return "string literal";
        case TokenKind::KwComponent: return "'component'";
        case TokenKind::KwPort: return "'port'";
        case TokenKind::KwIn: return "'in'";
        case TokenKind::KwOut: return "'out'";
        case TokenKind::KwConnect: return "'connect'";
        case TokenKind::KwExtends: return "'extends'";
        case TokenKind::KwAutoconnect: return "'autoconnect'";
        case TokenKind::KwAutoinstantiate: return "'autoinstantiate'";
        case TokenKind::KwBehavior: return "'behavior'";
        case TokenKind::KwInv: return "'inv'";
        case TokenKind::KwType: return "'type'";
        case TokenKind::KwOff: return "'off'";
        case TokenKind::KwOn: return "'on'";
        case TokenKind::KwTimed: return "'timed'";
        case TokenKind::KwUntimed: return "'untimed'";
        case TokenKind::KwTimesynchronous: return "'timesynchronous'";
        case TokenKind::LBrace: return "'{'";
        case TokenKind::RBrace: return "'}'";
        case TokenKind::LBracket: return "'['";
        case TokenKind::RBracket: return "']'";
        case TokenKind::LParen: return "'('";
        case TokenKind::RParen: return "')'";
        case TokenKind::Less: return "'<'";
        case TokenKind::Greater: return "'>'";
        case TokenKind::Comma: return "','";
        case TokenKind::Semicolon: return "';'";
        case TokenKind::Colon: return "':'";
        case TokenKind::Dot: return "'.'";
        case TokenKind::Arrow: return "'->'";
        case TokenKind::Star: return "'*'";
        case TokenKind::StereoOpen: return "'<<'";
        case TokenKind::StereoClose: return "'>>'";
        case TokenKind::EndOfFile: return "end of file";
        case TokenKind::Invalid: return "invalid token";
    }
    return "?";
}

Lexer::Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {
    line_starts_.push_back(0);
    for (size_t i = 0; i < text_.size(); ++i)
        if (text_[i] == '\n') line_starts_.push_back(i + 1);
}

char Lexer::peek(size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
}

void Lexer::advance() { ++pos_; }

SourcePos Lexer::pos_at(size_t offset) const {
    auto it = std::upper_bound(line_starts_.begin(), line_starts_.end(), offset);
    size_t line = static_cast<size_t>(it - line_starts_.begin());  // 1-based
    size_t col = offset - line_starts_[line - 1] + 1;
    return SourcePos{static_cast<int>(line), static_cast<int>(col)};
}

void Lexer::skip_trivia() {
    while (!at_end()) {
        char c = peek();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance();
        } else if (c == '/' && peek(1) == '/') {
            while (!at_end() && peek() != '\n') advance();
        } else if (c == '/' && peek(1) == '*') {
            size_t start = pos_;
            advance();
            advance();
            bool closed = false;
            while (!at_end()) {
                if (peek() == '*' && peek(1) == '/') {
                    advance();
                    advance();
                    closed = true;
                    break;
                }
                advance();
            }
            if (!closed) {
                SourceSpan span{file_, pos_at(start), pos_at(text_.size())};
                diags_.push_back(make_error("P002", span, "unterminated comment"));
            }
        } else {
            break;
        }
    }
}

void Lexer::rewind_to(size_t offset) { pos_ = std::min(offset, text_.size()); }

Token Lexer::next() {
    skip_trivia();
    Token tok;
    tok.offset = pos_;
    tok.span.file = file_;
    tok.span.start = pos_at(pos_);

    auto finish = [&](TokenKind kind) {
        tok.kind = kind;
        tok.end_offset = pos_;
        tok.span.end = pos_at(pos_);
        if (tok.text.empty()) tok.text = std::string(text_.substr(tok.offset, pos_ - tok.offset));
        return tok;
    };

    if (at_end()) return finish(TokenKind::EndOfFile);

    char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
            advance();
        std::string_view word = text_.substr(tok.offset, pos_ - tok.offset);
        auto it = keyword_map().find(word);
        return finish(it != keyword_map().end() ? it->second : TokenKind::Identifier);
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
        return finish(TokenKind::IntLiteral);
    }
    switch (c) {
        case '-':
            advance();
            if (peek() == '>') {
                advance();
                return finish(TokenKind::Arrow);
            }
            if (std::isdigit(static_cast<unsigned char>(peek()))) {
                while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
                return finish(TokenKind::IntLiteral);
            }
            return finish(TokenKind::Invalid);
        case '\'': {
            advance();
            std::string value;
            if (peek() == '\\') {
                advance();
                char esc = peek();
                advance();
                switch (esc) {
                    case 'n': value = "\n"; break;
                    case 't': value = "\t"; break;
                    case '\\': value = "\\"; break;
                    case '\'': value = "'"; break;
                    default: value = std::string(1, esc); break;
                }
            } else if (!at_end() && peek() != '\'') {
                value = std::string(1, peek());
                advance();
            }
            if (peek() != '\'') {
                tok.text = value;
                return finish(TokenKind::Invalid);
            }
            advance();
            tok.text = value;
            return finish(TokenKind::CharLiteral);
        }
        case '"': {
            advance();
            std::string value;
            bool closed = false;
            while (!at_end()) {
                char d = peek();
                if (d == '"') {
                    advance();
                    closed = true;
                    break;
                }
                if (d == '\\') {
                    advance();
                    char esc = peek();
                    advance();
                    switch (esc) {
                        case 'n': value += '\n'; break;
                        case 't': value += '\t'; break;
                        case '\\': value += '\\'; break;
                        case '"': value += '"'; break;
                        default: value += esc; break;
                    }
                    continue;
                }
                if (d == '\n') break;
                value += d;
                advance();
            }
            tok.text = value;
            return finish(closed ? TokenKind::StringLiteral : TokenKind::Invalid);
        }
        case '{': advance(); return finish(TokenKind::LBrace);
        case '}': advance(); return finish(TokenKind::RBrace);
        case '[': advance(); return finish(TokenKind::LBracket);
        case ']': advance(); return finish(TokenKind::RBracket);
        case '(': advance(); return finish(TokenKind::LParen);
        case ')': advance(); return finish(TokenKind::RParen);
        case '<':
            advance();
            if (peek() == '<') {
                advance();
                return finish(TokenKind::StereoOpen);
            }
            return finish(TokenKind::Less);
        case '>':
            advance();
            if (peek() == '>') {
                advance();
                return finish(TokenKind::StereoClose);
            }
            return finish(TokenKind::Greater);
        case '*': advance(); return finish(TokenKind::Star);
        case ',': advance(); return finish(TokenKind::Comma);
        case ';': advance(); return finish(TokenKind::Semicolon);
        case ':': advance(); return finish(TokenKind::Colon);
        case '.': advance(); return finish(TokenKind::Dot);
        default: advance(); return finish(TokenKind::Invalid);
    }
}

Lexer::RawCapture Lexer::capture_raw_until_semicolon(size_t from_offset) {
    RawCapture cap;
    size_t p = std::min(from_offset, text_.size());
    size_t start = p;
    cap.span.file = file_;
    cap.span.start = pos_at(p);
    int depth = 0;
    while (p < text_.size()) {
        char c = text_[p];
        if (c == '/' && p + 1 < text_.size() && text_[p + 1] == '/') {
            while (p < text_.size() && text_[p] != '\n') ++p;
            continue;
        }
        if (c == '/' && p + 1 < text_.size() && text_[p + 1] == '*') {
            p += 2;
            while (p + 1 < text_.size() && !(text_[p] == '*' && text_[p + 1] == '/')) ++p;
            p = p + 1 < text_.size() ? p + 2 : text_.size();
            continue;
        }
        if (c == '"' || c == '\'') {
            char quote = c;
            ++p;
            while (p < text_.size() && text_[p] != quote) {
                if (text_[p] == '\\') ++p;
                ++p;
            }
            if (p < text_.size()) ++p;
            continue;
        }
        if (c == '{' || c == '(' || c == '[') ++depth;
        if (c == '}' || c == ')' || c == ']') --depth;
        if (c == ';' && depth <= 0) {
            cap.text = std::string(text_.substr(start, p - start));
            cap.span.end = pos_at(p);
            cap.terminated = true;
            cap.end_offset = p + 1;
            pos_ = cap.end_offset;
            return cap;
        }
        ++p;
    }
    cap.text = std::string(text_.substr(start));
    cap.span.end = pos_at(text_.size());
    cap.terminated = false;
    cap.end_offset = text_.size();
    pos_ = text_.size();
    return cap;
}

}  // namespace montiarc
