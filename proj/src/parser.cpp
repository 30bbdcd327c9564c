#include "montiarc/parser.hpp"

#include <deque>

#include "montiarc/lexer.hpp"

namespace montiarc {

namespace {

using namespace ast;

SourceSpan merge(const SourceSpan& a, const SourceSpan& b) {
    SourceSpan s = a;
    s.end = b.end;
    return s;
}

// Recursive descent over the simplified grammar. The only construct
// needing unbounded lookahead is `component`, which opens either a type
// definition or a subcomponent declaration; scan_component_kind peeks
// past the reference type to decide.
class Parser {
public:
    Parser(std::string_view text, const std::string& source_id)
        : lexer_(text, source_id), file_(source_id) {}

    ParseResult run() {
        ParseResult result;
        auto unit = std::make_unique<CompilationUnit>();
        unit->source_id = file_;

        parse_package(*unit);
        parse_imports(*unit);

        if (peek().kind == TokenKind::EndOfFile) {
            error_at(peek(), "expected a component type definition");
        } else {
            unit->root = parse_component_def();
            if (peek().kind != TokenKind::EndOfFile)
                error_at(peek(), "expected end of file after the root component type definition");
        }

        result.diagnostics = lexer_.diagnostics();
        append(result.diagnostics, diags_);
        normalize(result.diagnostics);
        if (!has_errors(result.diagnostics) && unit->root) result.unit = std::move(unit);
        return result;
    }

private:
    // ---- token access -------------------------------------------------

    const Token& peek(size_t ahead = 0) {
        while (buffer_.size() <= ahead) buffer_.push_back(lexer_.next());
        return buffer_[ahead];
    }

    Token advance() {
        peek();
        Token t = buffer_.front();
        buffer_.pop_front();
        return t;
    }

    bool at(TokenKind k) { return peek().kind == k; }

    bool accept(TokenKind k, Token* out = nullptr) {
        if (!at(k)) return false;
        Token t = advance();
        if (out) *out = t;
        return true;
    }

    Token expect(TokenKind k, const char* what) {
        if (at(k)) return advance();
        error_at(peek(), std::string("expected ") + what + ", found " +
                              token_kind_name(peek().kind));
        return peek();
    }

    // Splits a buffered `>>` into two `>` tokens so nested type argument
    // lists close correctly.
    bool accept_close_angle() {
        if (at(TokenKind::Greater)) {
            advance();
            return true;
        }
        if (at(TokenKind::StereoClose)) {
            Token t = buffer_.front();
            buffer_.pop_front();
            Token rest = t;  // second `>` stays in the stream
            rest.kind = TokenKind::Greater;
            rest.text = ">";
            rest.offset += 1;
            rest.span.start.col += 1;
            buffer_.push_front(rest);
            return true;
        }
        return false;
    }

    void error_at(const Token& t, const std::string& message) {
        if (suppress_errors_) return;
        std::string msg = "syntax error: " + message;
        diags_.push_back(make_error("P001", t.span, msg));
    }

    // Skips to the next statement boundary: past the next `;` at the
    // current nesting depth, or before the enclosing `}`.
    void sync() {
        int depth = 0;
        while (true) {
            switch (peek().kind) {
                case TokenKind::EndOfFile:
                    return;
                case TokenKind::Semicolon:
                    if (depth == 0) {
                        advance();
                        return;
                    }
                    advance();
                    break;
                case TokenKind::LBrace:
                    ++depth;
                    advance();
                    break;
                case TokenKind::RBrace:
                    if (depth == 0) return;
                    --depth;
                    advance();
                    break;
                default:
                    advance();
                    break;
            }
        }
    }

    // ---- small helpers ------------------------------------------------

    bool at_contextual(const char* word) {
        return at(TokenKind::Identifier) && peek().text == word;
    }

    Token expect_name(const char* what) {
        if (at(TokenKind::Identifier)) return advance();
        if (peek().kind >= TokenKind::KwComponent && peek().kind <= TokenKind::KwTimesynchronous) {
            error_at(peek(), "keyword " + std::string(token_kind_name(peek().kind)) +
                                 " cannot be used as " + what);
            return advance();
        }
        error_at(peek(), std::string("expected ") + what + ", found " +
                             token_kind_name(peek().kind));
        return peek();
    }

    QualifiedName parse_qualified_name(const char* what) {
        QualifiedName qn;
        Token first = expect_name(what);
        qn.segments.push_back(first.text);
        qn.span = first.span;
        while (at(TokenKind::Dot) && peek(1).kind == TokenKind::Identifier) {
            advance();
            Token seg = advance();
            qn.segments.push_back(seg.text);
            qn.span = merge(qn.span, seg.span);
        }
        return qn;
    }

    TypeExpr parse_type_expr() {
        TypeExpr t;
        t.base = parse_qualified_name("a type name");
        if (at(TokenKind::Less)) {
            advance();
            t.args.push_back(parse_type_expr());
            while (accept(TokenKind::Comma)) t.args.push_back(parse_type_expr());
            if (!accept_close_angle())
                error_at(peek(), "expected '>' to close type arguments");
        }
        while (at(TokenKind::LBracket) && peek(1).kind == TokenKind::RBracket) {
            advance();
            advance();
            ++t.array_dims;
        }
        return t;
    }

    ReferenceType parse_reference_type() {
        ReferenceType r;
        r.name = parse_qualified_name("a component type name");
        r.span = r.name.span;
        if (at(TokenKind::Less)) {
            advance();
            r.type_args.push_back(parse_type_expr());
            while (accept(TokenKind::Comma)) r.type_args.push_back(parse_type_expr());
            Token close = peek();
            if (!accept_close_angle())
                error_at(peek(), "expected '>' to close type arguments");
            r.span = merge(r.span, close.span);
        }
        return r;
    }

    std::optional<Stereotype> parse_stereotype_opt() {
        if (!at(TokenKind::StereoOpen)) return std::nullopt;
        Stereotype st;
        Token open = advance();
        st.span = open.span;
        do {
            StereotypeValue v;
            Token name = expect_name("a stereotype name");
            v.name = name.text;
            if (accept(TokenKind::Colon) || check_eq()) {
                Token val = expect(TokenKind::StringLiteral, "a string value");
                v.value = val.text;
            }
            st.values.push_back(std::move(v));
        } while (accept(TokenKind::Comma));
        Token close = expect(TokenKind::StereoClose, "'>>'");
        st.span = merge(st.span, close.span);
        return st;
    }

    // `=` only occurs inside stereotypes; it is not a token of its own,
    // so it lexes as Invalid with text "=".
    bool check_eq() {
        if (peek().kind == TokenKind::Invalid && peek().text == "=") {
            advance();
            return true;
        }
        return false;
    }

    // ---- unit ----------------------------------------------------------

    void parse_package(CompilationUnit& unit) {
        if (!at_contextual("package")) return;
        advance();
        QualifiedName name = parse_qualified_name("a package name");
        unit.package = name.segments;
        expect(TokenKind::Semicolon, "';' after the package name");
    }

    void parse_imports(CompilationUnit& unit) {
        while (at_contextual("import")) {
            Token kw = advance();
            ImportDecl imp;
            imp.name = parse_qualified_name("an import name");
            if (at(TokenKind::Dot) && peek(1).kind == TokenKind::Star) {
                advance();
                advance();
                imp.wildcard = true;
            }
            Token semi = expect(TokenKind::Semicolon, "';' after the import");
            imp.span = merge(kw.span, semi.span);
            unit.imports.push_back(std::move(imp));
        }
    }

    // ---- component definitions -----------------------------------------

    std::unique_ptr<ComponentTypeDecl> parse_component_def() {
        auto comp = std::make_unique<ComponentTypeDecl>();
        comp->stereotype = parse_stereotype_opt();
        Token kw = expect(TokenKind::KwComponent, "'component'");
        comp->span = kw.span;
        Token name = expect_name("a component type name");
        comp->name = name.text;
        comp->name_span = name.span;
        if (at(TokenKind::Identifier)) {
            Token inst = advance();
            comp->instance_name = inst.text;
            comp->instance_name_span = inst.span;
        }
        parse_component_head(*comp);
        parse_component_body(*comp);
        return comp;
    }

    void parse_component_head(ComponentTypeDecl& comp) {
        if (at(TokenKind::Less)) {
            advance();
            do {
                TypeParam p;
                Token name = expect_name("a type parameter name");
                p.name = name.text;
                p.span = name.span;
                if (accept(TokenKind::KwExtends)) p.bound = parse_reference_type();
                comp.type_params.push_back(std::move(p));
            } while (accept(TokenKind::Comma));
            if (!accept_close_angle())
                error_at(peek(), "expected '>' to close type parameters");
        }
        if (at(TokenKind::LBracket)) {
            advance();
            if (!at(TokenKind::RBracket)) {
                do {
                    ConfigParam p;
                    p.type = parse_type_expr();
                    Token name = expect_name("a parameter name");
                    p.name = name.text;
                    p.span = merge(p.type.base.span, name.span);
                    comp.config_params.push_back(std::move(p));
                } while (accept(TokenKind::Comma));
            }
            expect(TokenKind::RBracket, "']' to close the parameter list");
        }
        if (accept(TokenKind::KwExtends)) comp.super_type = parse_reference_type();
    }

    void parse_component_body(ComponentTypeDecl& comp) {
        expect(TokenKind::LBrace, "'{' to open the component body");
        parse_config_elements(comp);
        while (!at(TokenKind::RBrace) && !at(TokenKind::EndOfFile)) {
            if (!parse_element(comp)) sync();
        }
        Token close = expect(TokenKind::RBrace, "'}' to close the component body");
        comp.span = merge(comp.span, close.span);
    }

    void parse_config_elements(ComponentTypeDecl& comp) {
        while (true) {
            ConfigElement ce;
            Token kw = peek();
            if (at(TokenKind::KwAutoconnect)) {
                advance();
                ce.kind = ConfigElement::Kind::AutoConnect;
                ce.stereotype = parse_stereotype_opt();
                if (accept(TokenKind::KwType)) ce.autoconnect = AutoConnectMode::Type;
                else if (accept(TokenKind::KwPort)) ce.autoconnect = AutoConnectMode::Port;
                else if (accept(TokenKind::KwOff)) ce.autoconnect = AutoConnectMode::Off;
                else { error_at(peek(), "expected 'type', 'port' or 'off'"); sync(); continue; }
            } else if (at(TokenKind::KwAutoinstantiate)) {
                advance();
                ce.kind = ConfigElement::Kind::AutoInstantiate;
                ce.stereotype = parse_stereotype_opt();
                if (accept(TokenKind::KwOn)) ce.autoinstantiate = AutoInstantiateMode::On;
                else if (accept(TokenKind::KwOff)) ce.autoinstantiate = AutoInstantiateMode::Off;
                else { error_at(peek(), "expected 'on' or 'off'"); sync(); continue; }
            } else if (at(TokenKind::KwBehavior)) {
                advance();
                ce.kind = ConfigElement::Kind::Timing;
                ce.stereotype = parse_stereotype_opt();
                if (accept(TokenKind::KwTimed)) ce.timing = TimingMode::Timed;
                else if (accept(TokenKind::KwUntimed)) ce.timing = TimingMode::Untimed;
                else if (accept(TokenKind::KwTimesynchronous)) ce.timing = TimingMode::Timesynchronous;
                else { error_at(peek(), "expected 'timed', 'untimed' or 'timesynchronous'"); sync(); continue; }
            } else {
                return;
            }
            Token semi = expect(TokenKind::Semicolon, "';'");
            ce.span = merge(kw.span, semi.span);
            comp.config_elements.push_back(std::move(ce));
        }
    }

    // Index of the first token after a stereotype starting at `from`.
    size_t skip_stereotype_ahead(size_t from) {
        if (peek(from).kind != TokenKind::StereoOpen) return from;
        size_t i = from + 1;
        while (peek(i).kind != TokenKind::StereoClose && peek(i).kind != TokenKind::EndOfFile) ++i;
        return i + 1;
    }

    bool parse_element(ComponentTypeDecl& comp) {
        size_t start = skip_stereotype_ahead(0);
        TokenKind k = peek(start).kind;

        if (k == TokenKind::KwPort) return parse_port_interface(comp);
        if (k == TokenKind::KwConnect) return parse_connector(comp);
        if (k == TokenKind::KwComponent) {
            if (next_component_is_definition(start)) {
                comp.elements.emplace_back(parse_component_def());
                return true;
            }
            return parse_subcomponent(comp);
        }
        if (k == TokenKind::KwInv ||
            (k == TokenKind::Identifier && peek(start + 1).kind == TokenKind::KwInv)) {
            return parse_invariant(comp);
        }
        if (k == TokenKind::KwAutoconnect || k == TokenKind::KwAutoinstantiate ||
            k == TokenKind::KwBehavior) {
            error_at(peek(start), "configuration elements must precede architectural elements");
            return false;
        }
        error_at(peek(start), "expected a port interface, subcomponent, connector, invariant or "
                              "inner component type");
        return false;
    }

    // Lookahead discrimination after `component`: a definition continues
    // with a head and `{`, a declaration with arguments, instances or `;`.
    bool next_component_is_definition(size_t kw_index) {
        size_t i = kw_index + 1;
        if (peek(i).kind != TokenKind::Identifier) return true;  // report inside def parser
        ++i;
        while (peek(i).kind == TokenKind::Dot && peek(i + 1).kind == TokenKind::Identifier) i += 2;
        i = skip_angle_group(i);
        switch (peek(i).kind) {
            case TokenKind::LParen: return false;
            case TokenKind::KwExtends:
            case TokenKind::LBrace:
            case TokenKind::LBracket: return true;  // config parameters follow the type name
            case TokenKind::Semicolon: return false;
            case TokenKind::Identifier: break;
            default: return true;
        }
        // `component Type name ...`
        ++i;
        switch (peek(i).kind) {
            case TokenKind::LBrace:
            case TokenKind::KwExtends:
            case TokenKind::Less: return true;
            case TokenKind::LBracket: {
                if (bracket_group_has_arrow(i)) return false;  // simple connectors
                size_t after = skip_bracket_group(i);
                return peek(after).kind == TokenKind::LBrace ||
                       peek(after).kind == TokenKind::KwExtends;
            }
            default: return false;
        }
    }

    size_t skip_angle_group(size_t i) {
        if (peek(i).kind != TokenKind::Less) return i;
        int depth = 0;
        while (peek(i).kind != TokenKind::EndOfFile) {
            switch (peek(i).kind) {
                case TokenKind::Less: depth += 1; break;
                case TokenKind::StereoOpen: depth += 2; break;
                case TokenKind::Greater: depth -= 1; break;
                case TokenKind::StereoClose: depth -= 2; break;
                default: break;
            }
            ++i;
            if (depth <= 0) break;
        }
        return i;
    }

    size_t skip_bracket_group(size_t i) {
        if (peek(i).kind != TokenKind::LBracket) return i;
        int depth = 0;
        while (peek(i).kind != TokenKind::EndOfFile) {
            if (peek(i).kind == TokenKind::LBracket) ++depth;
            if (peek(i).kind == TokenKind::RBracket) --depth;
            ++i;
            if (depth == 0) break;
        }
        return i;
    }

    bool bracket_group_has_arrow(size_t i) {
        if (peek(i).kind != TokenKind::LBracket) return false;
        int depth = 0;
        while (peek(i).kind != TokenKind::EndOfFile) {
            if (peek(i).kind == TokenKind::LBracket) ++depth;
            if (peek(i).kind == TokenKind::RBracket) {
                --depth;
                if (depth == 0) return false;
            }
            if (peek(i).kind == TokenKind::Arrow) return true;
            ++i;
        }
        return false;
    }

    // ---- elements -------------------------------------------------------

    bool parse_port_interface(ComponentTypeDecl& comp) {
        PortInterfaceDecl decl;
        decl.stereotype = parse_stereotype_opt();
        Token kw = expect(TokenKind::KwPort, "'port'");
        decl.span = kw.span;
        do {
            PortDecl port;
            port.stereotype = parse_stereotype_opt();
            Token dir = peek();
            if (accept(TokenKind::KwIn)) port.direction = PortDirection::In;
            else if (accept(TokenKind::KwOut)) port.direction = PortDirection::Out;
            else {
                error_at(peek(), "expected 'in' or 'out'");
                return false;
            }
            if (!at(TokenKind::Identifier)) {
                error_at(peek(), "expected a port type");
                return false;
            }
            port.type = parse_type_expr();
            port.span = merge(dir.span, peek().span);
            port.name_span = port.type.base.span;
            if (at(TokenKind::Identifier)) {
                Token name = advance();
                port.name = name.text;
                port.name_span = name.span;
                port.span = merge(dir.span, name.span);
            }
            decl.ports.push_back(std::move(port));
        } while (accept(TokenKind::Comma));
        Token semi = expect(TokenKind::Semicolon, "';' after the port list");
        decl.span = merge(decl.span, semi.span);
        comp.elements.emplace_back(std::move(decl));
        return true;
    }

    bool parse_subcomponent(ComponentTypeDecl& comp) {
        SubComponentDecl decl;
        decl.stereotype = parse_stereotype_opt();
        Token kw = expect(TokenKind::KwComponent, "'component'");
        decl.span = kw.span;
        decl.type = parse_reference_type();
        if (accept(TokenKind::LParen)) {
            if (!at(TokenKind::RParen)) {
                do {
                    decl.config_args.push_back(parse_config_arg());
                } while (accept(TokenKind::Comma));
            }
            expect(TokenKind::RParen, "')' to close the argument list");
        }
        while (at(TokenKind::Identifier)) {
            SubComponentInstance inst;
            Token name = advance();
            inst.name = name.text;
            inst.span = name.span;
            if (accept(TokenKind::LBracket)) {
                do {
                    inst.connectors.push_back(parse_simple_connector());
                } while (accept(TokenKind::Semicolon) && !at(TokenKind::RBracket));
                Token close = expect(TokenKind::RBracket, "']' to close the simple connector list");
                inst.span = merge(inst.span, close.span);
            }
            decl.instances.push_back(std::move(inst));
            if (!accept(TokenKind::Comma)) break;
        }
        Token semi = expect(TokenKind::Semicolon, "';' after the subcomponent declaration");
        decl.span = merge(decl.span, semi.span);
        comp.elements.emplace_back(std::move(decl));
        return true;
    }

    ConfigArg parse_config_arg() {
        ConfigArg arg;
        Token t = peek();
        arg.span = t.span;
        switch (t.kind) {
            case TokenKind::IntLiteral:
                advance();
                arg.kind = ConfigArg::Kind::Literal;
                arg.literal_kind = ConfigArg::LiteralKind::Int;
                arg.text = t.text;
                return arg;
            case TokenKind::CharLiteral:
                advance();
                arg.kind = ConfigArg::Kind::Literal;
                arg.literal_kind = ConfigArg::LiteralKind::Char;
                arg.text = t.text;
                return arg;
            case TokenKind::StringLiteral:
                advance();
                arg.kind = ConfigArg::Kind::Literal;
                arg.literal_kind = ConfigArg::LiteralKind::String;
                arg.text = t.text;
                return arg;
            case TokenKind::Identifier:
                if (t.text == "true" || t.text == "false") {
                    advance();
                    arg.kind = ConfigArg::Kind::Literal;
                    arg.literal_kind = ConfigArg::LiteralKind::Bool;
                    arg.text = t.text;
                    return arg;
                }
                if (peek(1).kind == TokenKind::Dot) {
                    arg.kind = ConfigArg::Kind::Reference;
                    arg.reference = parse_qualified_name("a reference");
                    arg.span = arg.reference.span;
                    return arg;
                }
                advance();
                arg.kind = ConfigArg::Kind::Variable;
                arg.text = t.text;
                return arg;
            default:
                error_at(t, "expected a configuration argument (literal, variable or reference)");
                advance();
                return arg;
        }
    }

    SimpleConnector parse_simple_connector() {
        SimpleConnector sc;
        sc.source = parse_qualified_name("a source port");
        sc.span = sc.source.span;
        expect(TokenKind::Arrow, "'->'");
        sc.targets.push_back(parse_qualified_name("a connector target"));
        while (accept(TokenKind::Comma)) sc.targets.push_back(parse_qualified_name("a connector target"));
        sc.span = merge(sc.span, sc.targets.back().span);
        return sc;
    }

    bool parse_connector(ComponentTypeDecl& comp) {
        ConnectorDecl decl;
        decl.stereotype = parse_stereotype_opt();
        Token kw = expect(TokenKind::KwConnect, "'connect'");
        decl.span = kw.span;
        decl.source = parse_qualified_name("a connector source");
        expect(TokenKind::Arrow, "'->'");
        decl.targets.push_back(parse_qualified_name("a connector target"));
        while (accept(TokenKind::Comma)) decl.targets.push_back(parse_qualified_name("a connector target"));
        Token semi = expect(TokenKind::Semicolon, "';' after the connector");
        decl.span = merge(decl.span, semi.span);
        comp.elements.emplace_back(std::move(decl));
        return true;
    }

    bool parse_invariant(ComponentTypeDecl& comp) {
        InvariantDecl decl;
        Token first = peek();
        decl.span = first.span;
        if (at(TokenKind::Identifier)) {
            Token kind = advance();
            decl.kind = kind.text;
        }
        expect(TokenKind::KwInv, "'inv'");
        Token name = expect_name("an invariant name");
        decl.name = name.text;
        decl.name_span = name.span;
        Token colon = expect(TokenKind::Colon, "':' after the invariant name");

        // Raw capture: rewind the lexer past any lookahead, then scan
        // characters to the terminating `;`.
        size_t from = buffer_.empty() ? colon.end_offset : buffer_.front().offset;
        buffer_.clear();
        auto cap = lexer_.capture_raw_until_semicolon(from);
        if (!cap.terminated) {
            diags_.push_back(make_error("P002", cap.span, "unterminated invariant body"));
            return false;
        }
        decl.body = cap.text;
        decl.span = merge(decl.span, cap.span);
        comp.elements.emplace_back(std::move(decl));
        return true;
    }

    Lexer lexer_;
    std::string file_;
    std::deque<Token> buffer_;
    Diagnostics diags_;
    bool suppress_errors_ = false;
};

}  // namespace

ParseResult parse_compilation_unit(std::string_view text, const std::string& source_id) {
    Parser parser(text, source_id);
    return parser.run();
}

}  // namespace montiarc
