#include "dfq/parser.hpp"

#include <cctype>
#include <optional>

namespace dfq {

ParseError::ParseError(SourceSpan span, std::vector<std::string> expected, std::string found)
    : Error([&] {
        std::string msg = "parse error at " + std::to_string(span.start) + ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) msg += (i ? " or " : "") + expected[i];
        return msg + ", found " + found;
    }())
    , span_(span)
    , expected_(std::move(expected))
    , found_(std::move(found))
{ }

std::string describe(const ParseError &err, std::string_view text)
{
    std::string out = std::string(err.what()) + "\n  " + std::string(text) + "\n  ";
    out += std::string(err.span().start, ' ');
    out += std::string(std::max<std::size_t>(1, err.span().end - err.span().start), '^');
    return out;
}

namespace {

enum class Tok {
    End,
    Name, ///< identifier, possibly dotted
    Integer,
    Decimal,
    Time,
    String,
    LParen,
    RParen,
    Comma,
    Arrow,
    And,
    Or,
    Not,
    Op,
};

struct Token
{
    Tok kind;
    SourceSpan span;
    std::string text; ///< identifier/literal payload
    CompareOp op = CompareOp::Eq;
};

std::string describe_token(const Token &t)
{
    switch (t.kind) {
        case Tok::End: return "end of input";
        case Tok::String: return "string literal";
        default: return "'" + t.text + "'";
    }
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) or c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) or c == '_'; }
bool digit(char c) { return c >= '0' and c <= '9'; }

class Lexer
{
    std::string_view in_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(std::size_t start, std::vector<std::string> expected, std::string found)
    {
        throw ParseError({start, std::max(start + 1, pos_)}, std::move(expected), std::move(found));
    }

    char peek(std::size_t k = 0) const { return pos_ + k < in_.size() ? in_[pos_ + k] : '\0'; }

    Token make(Tok kind, std::size_t start, std::string text = {})
    {
        return Token{kind, {start, pos_}, std::move(text)};
    }

    Token number(std::size_t start)
    {
        if (peek() == '-' or peek() == '+') ++pos_;
        std::size_t digits_start = pos_;
        while (digit(peek())) ++pos_;
        std::size_t ndigits = pos_ - digits_start;
        bool signed_ = digits_start != start;
        if (not signed_ and ndigits == 2 and peek() == ':') {
            while (digit(peek()) or peek() == ':' or peek() == '.') ++pos_;
            return make(Tok::Time, start, std::string(in_.substr(start, pos_ - start)));
        }
        if (not signed_ and ndigits == 4 and peek() == '-' and digit(peek(1))) {
            while (digit(peek()) or peek() == '-' or peek() == ':' or peek() == '.' or peek() == 'T' or peek() == 'Z')
                ++pos_;
            return make(Tok::Time, start, std::string(in_.substr(start, pos_ - start)));
        }
        bool decimal = false;
        if (peek() == '.' and digit(peek(1))) {
            decimal = true;
            ++pos_;
            while (digit(peek())) ++pos_;
        }
        if ((peek() == 'e' or peek() == 'E') and
            (digit(peek(1)) or ((peek(1) == '-' or peek(1) == '+') and digit(peek(2))))) {
            decimal = true;
            pos_ += 2;
            while (digit(peek())) ++pos_;
        }
        if (ident_char(peek())) fail(start, {"number"}, "'" + std::string(in_.substr(start, pos_ + 1 - start)) + "'");
        return make(decimal ? Tok::Decimal : Tok::Integer, start, std::string(in_.substr(start, pos_ - start)));
    }

    Token string(std::size_t start)
    {
        char quote = in_[pos_++];
        std::string out;
        while (true) {
            if (pos_ >= in_.size()) fail(start, {"closing quote"}, "end of input");
            char c = in_[pos_++];
            if (c == quote) break;
            if (c == '\\') {
                if (pos_ >= in_.size()) fail(start, {"escaped character"}, "end of input");
                c = in_[pos_++];
            }
            out += c;
        }
        return make(Tok::String, start, std::move(out));
    }

  public:
    explicit Lexer(std::string_view in) : in_(in) { }

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (true) {
            while (std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
            std::size_t start = pos_;
            char c = peek();
            if (pos_ >= in_.size()) {
                out.push_back(make(Tok::End, start));
                return out;
            }
            if (ident_start(c)) {
                while (true) {
                    while (ident_char(peek())) ++pos_;
                    if (peek() == '.' and ident_start(peek(1)))
                        ++pos_;
                    else
                        break;
                }
                out.push_back(make(Tok::Name, start, std::string(in_.substr(start, pos_ - start))));
                continue;
            }
            if (digit(c) or ((c == '-' or c == '+') and digit(peek(1)))) {
                out.push_back(number(start));
                continue;
            }
            if (c == '\'' or c == '"') {
                out.push_back(string(start));
                continue;
            }
            ++pos_;
            auto op = [&](CompareOp o, std::string text) {
                Token t = make(Tok::Op, start, std::move(text));
                t.op = o;
                out.push_back(t);
            };
            switch (c) {
                case '(': out.push_back(make(Tok::LParen, start, "(")); break;
                case ')': out.push_back(make(Tok::RParen, start, ")")); break;
                case ',': out.push_back(make(Tok::Comma, start, ",")); break;
                case '&': out.push_back(make(Tok::And, start, "&")); break;
                case '|': out.push_back(make(Tok::Or, start, "|")); break;
                case '-':
                    if (peek() == '>') {
                        ++pos_;
                        out.push_back(make(Tok::Arrow, start, "->"));
                        break;
                    }
                    fail(start, {"'->'", "number"}, "'-'");
                case '!':
                    if (peek() == '=') {
                        ++pos_;
                        op(CompareOp::Ne, "!=");
                    } else {
                        out.push_back(make(Tok::Not, start, "!"));
                    }
                    break;
                case '=': op(CompareOp::Eq, "="); break;
                case '<':
                    if (peek() == '=') {
                        ++pos_;
                        op(CompareOp::Le, "<=");
                    } else {
                        op(CompareOp::Lt, "<");
                    }
                    break;
                case '>':
                    if (peek() == '=') {
                        ++pos_;
                        op(CompareOp::Ge, ">=");
                    } else {
                        op(CompareOp::Gt, ">");
                    }
                    break;
                default: fail(start, {"token"}, "'" + std::string(1, c) + "'");
            }
        }
    }
};

bool is_function(std::string_view n)
{
    return n == "select" or n == "project" or n == "rename" or n == "prefix" or n == "product" or n == "join" or
           n == "union" or n == "intersect" or n == "minus" or n == "df";
}

class Parser
{
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token &peek(std::size_t k = 0) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }

    [[noreturn]] void fail(std::vector<std::string> expected) const
    {
        throw ParseError(peek().span, std::move(expected), describe_token(peek()));
    }

    const Token &expect(Tok kind, const char *what)
    {
        if (peek().kind != kind) fail({what});
        return toks_[pos_++];
    }

    std::string attribute()
    {
        if (peek().kind != Tok::Name) fail({"attribute name"});
        return toks_[pos_++].text;
    }

    std::string plain_ident(const char *what)
    {
        if (peek().kind != Tok::Name or peek().text.find('.') != std::string::npos) fail({what});
        return toks_[pos_++].text;
    }

    Operand atom()
    {
        const Token &t = peek();
        switch (t.kind) {
            case Tok::Name: ++pos_; return AttrRef{t.text};
            case Tok::Integer: {
                auto v = parse_integer(t.text);
                if (not v) fail({"integer in range"});
                ++pos_;
                return Value::integer(*v);
            }
            case Tok::Decimal: {
                auto v = parse_decimal(t.text);
                if (not v) fail({"finite decimal"});
                ++pos_;
                return Value::decimal(*v);
            }
            case Tok::Time: {
                auto v = parse_timestamp(t.text);
                if (not v) fail({"timestamp HH:MM or YYYY-MM-DDTHH:MM:SS"});
                ++pos_;
                return Value::timestamp(*v);
            }
            case Tok::String: ++pos_; return Value::text(t.text);
            default: fail({"attribute", "literal"});
        }
    }

    Condition unary()
    {
        if (peek().kind == Tok::Not) {
            ++pos_;
            return Condition::negate(unary());
        }
        if (peek().kind == Tok::LParen) {
            ++pos_;
            Condition c = disjunction();
            expect(Tok::RParen, "')'");
            return c;
        }
        Operand lhs = atom();
        if (peek().kind != Tok::Op) fail({"comparison operator"});
        CompareOp op = toks_[pos_++].op;
        Operand rhs = atom();
        return Condition::compare(std::move(lhs), op, std::move(rhs));
    }

    Condition conjunction()
    {
        Condition c = unary();
        while (peek().kind == Tok::And) {
            ++pos_;
            c = Condition::conj(c, unary());
        }
        return c;
    }

  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) { }

    Condition disjunction()
    {
        Condition c = conjunction();
        while (peek().kind == Tok::Or) {
            ++pos_;
            c = Condition::disj(c, conjunction());
        }
        return c;
    }

    Expr expr()
    {
        if (peek().kind != Tok::Name) fail({"expression"});
        if (peek(1).kind == Tok::LParen and is_function(peek().text)) return function();
        return Expr::base(plain_ident("relation name"));
    }

    Expr function()
    {
        std::string name = toks_[pos_++].text;
        expect(Tok::LParen, "'('");
        auto comma = [&] { expect(Tok::Comma, "','"); };
        Expr out = [&]() -> Expr {
            if (name == "select") {
                Condition c = disjunction();
                comma();
                return Expr::select(std::move(c), expr());
            }
            if (name == "join") {
                Condition c = disjunction();
                comma();
                Expr l = expr();
                comma();
                return Expr::join(std::move(c), std::move(l), expr());
            }
            if (name == "project") return projection();
            if (name == "rename") {
                std::string from = attribute();
                expect(Tok::Arrow, "'->'");
                std::string to = attribute();
                comma();
                return Expr::rename(std::move(from), std::move(to), expr());
            }
            if (name == "prefix") {
                std::string p = plain_ident("prefix identifier");
                comma();
                return Expr::prefix(std::move(p), expr());
            }
            if (name == "df") {
                std::string c = attribute();
                comma();
                std::string t = attribute();
                comma();
                return Expr::df(std::move(c), std::move(t), expr());
            }
            Expr l = expr();
            comma();
            Expr r = expr();
            if (name == "product") return Expr::product(std::move(l), std::move(r));
            if (name == "union") return Expr::union_of(std::move(l), std::move(r));
            if (name == "intersect") return Expr::intersect(std::move(l), std::move(r));
            return Expr::minus(std::move(l), std::move(r));
        }();
        expect(Tok::RParen, "')'");
        return out;
    }

    Expr projection()
    {
        // Attributes and the final operand share syntax; the last item is the operand.
        std::vector<Token> names;
        while (true) {
            if (peek().kind == Tok::Name and not(peek(1).kind == Tok::LParen and is_function(peek().text))) {
                names.push_back(toks_[pos_++]);
                if (peek().kind == Tok::Comma) {
                    ++pos_;
                    continue;
                }
                if (names.size() < 2) fail({"','"});
                const Token &last = names.back();
                if (last.text.find('.') != std::string::npos)
                    throw ParseError(last.span, {"relation name"}, describe_token(last));
                std::vector<std::string> attrs;
                for (std::size_t i = 0; i + 1 < names.size(); ++i) attrs.push_back(names[i].text);
                return Expr::project(std::move(attrs), Expr::base(last.text));
            }
            if (names.empty()) fail({"attribute name"});
            std::vector<std::string> attrs;
            for (auto &t : names) attrs.push_back(t.text);
            return Expr::project(std::move(attrs), function());
        }
    }

    void finish()
    {
        if (peek().kind != Tok::End) fail({"end of input"});
    }
};

std::string join_names(const std::vector<std::string> &v)
{
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i];
    return out;
}

std::string node_label(const Expr &e)
{
    return std::visit(
        [](auto &n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BaseRel>)
                return n.name;
            else if constexpr (std::is_same_v<T, Select>)
                return "select " + render(n.cond);
            else if constexpr (std::is_same_v<T, Project>)
                return "project " + join_names(n.attrs);
            else if constexpr (std::is_same_v<T, RenameAttr>)
                return "rename " + n.from + " -> " + n.to;
            else if constexpr (std::is_same_v<T, RenamePrefix>)
                return "prefix " + n.prefix;
            else if constexpr (std::is_same_v<T, Join>)
                return "join " + render(n.cond);
            else if constexpr (std::is_same_v<T, DirectlyFollows>)
                return "df " + n.case_attr + ", " + n.time_attr;
            else if constexpr (std::is_same_v<T, Product>)
                return "product";
            else if constexpr (std::is_same_v<T, Union>)
                return "union";
            else if constexpr (std::is_same_v<T, Intersect>)
                return "intersect";
            else
                return "minus";
        },
        e.node());
}

void render_tree_into(const Expr &e, std::size_t depth, std::string &out)
{
    out += std::string(2 * depth, ' ') + node_label(e) + "\n";
    for (auto &c : e.children()) render_tree_into(c, depth + 1, out);
}

} // namespace

Expr parse(std::string_view text)
{
    Parser p(Lexer(text).run());
    Expr e = p.expr();
    p.finish();
    return e;
}

Condition parse_condition(std::string_view text)
{
    Parser p(Lexer(text).run());
    Condition c = p.disjunction();
    p.finish();
    return c;
}

std::string render(const Expr &e)
{
    return std::visit(
        [&](auto &n) -> std::string {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, BaseRel>)
                return n.name;
            else if constexpr (std::is_same_v<T, Select>)
                return "select(" + render(n.cond) + ", " + render(n.child) + ")";
            else if constexpr (std::is_same_v<T, Project>)
                return "project(" + join_names(n.attrs) + ", " + render(n.child) + ")";
            else if constexpr (std::is_same_v<T, RenameAttr>)
                return "rename(" + n.from + " -> " + n.to + ", " + render(n.child) + ")";
            else if constexpr (std::is_same_v<T, RenamePrefix>)
                return "prefix(" + n.prefix + ", " + render(n.child) + ")";
            else if constexpr (std::is_same_v<T, Join>)
                return "join(" + render(n.cond) + ", " + render(n.left) + ", " + render(n.right) + ")";
            else if constexpr (std::is_same_v<T, DirectlyFollows>)
                return "df(" + n.case_attr + ", " + n.time_attr + ", " + render(n.child) + ")";
            else
                return std::string(to_string(e.kind())) + "(" + render(n.left) + ", " + render(n.right) + ")";
        },
        e.node());
}

std::string render_node(const Expr &e) { return node_label(e); }

std::string render_tree(const Expr &e)
{
    std::string out;
    render_tree_into(e, 0, out);
    return out;
}

} // namespace dfq
