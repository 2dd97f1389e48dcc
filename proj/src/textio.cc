#include <cqmono/textio.hh>

#include <fstream>
#include <set>
#include <sstream>

using std::optional;
using std::size_t;
using std::string;
using std::string_view;
using std::vector;

namespace cqmono
{
    auto Document::query(string_view name) const -> const Query &
    {
        if (auto it = queries.find(string{name}); it != queries.end())
            return it->second;
        throw Error{"no query named '" + string{name} + "'"};
    }

    auto Document::statement(string_view lhs, string_view rhs) const -> ContainmentStatement
    {
        return ContainmentStatement{query(lhs), query(rhs)};
    }

    ParseError::ParseError(ParseErrorKind kind, size_t line, size_t column, string what,
        optional<ValidationError> validation) :
        Error(std::to_string(line) + ":" + std::to_string(column) + ": "
            + (kind == ParseErrorKind::Syntax ? "expected " : "") + what),
        _kind(kind),
        _line(line),
        _column(column),
        _what(std::move(what)),
        _validation(std::move(validation))
    {
    }

    namespace
    {
        enum class Tok
        {
            Ident,
            Nat,
            LParen,
            RParen,
            Comma,
            Dot,
            Slash,
            Equals,
            Turnstile,
            SubsetEq,
            End
        };

        struct Token
        {
            Tok kind;
            string text;
            size_t line, column;
        };

        auto describe(Tok t) -> string
        {
            switch (t) {
                case Tok::Ident: return "identifier";
                case Tok::Nat: return "number";
                case Tok::LParen: return "'('";
                case Tok::RParen: return "')'";
                case Tok::Comma: return "','";
                case Tok::Dot: return "'.'";
                case Tok::Slash: return "'/'";
                case Tok::Equals: return "'='";
                case Tok::Turnstile: return "':-'";
                case Tok::SubsetEq: return "'<='";
                case Tok::End: return "end of input";
            }
            return "token";
        }

        auto is_ident_start(char c) -> bool { return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || c == '_'; }
        auto is_digit(char c) -> bool { return c >= '0' && c <= '9'; }

        auto tokenize(string_view text, size_t first_line = 1) -> vector<Token>
        {
            vector<Token> result;
            size_t line = first_line, column = 1, i = 0;
            auto advance = [&] (size_t n) {
                for (size_t k = 0 ; k < n ; ++k, ++i) {
                    if (text[i] == '\n') {
                        ++line;
                        column = 1;
                    }
                    else
                        ++column;
                }
            };

            while (i < text.size()) {
                char c = text[i];
                if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
                    advance(1);
                    continue;
                }
                if (c == '#') {
                    while (i < text.size() && text[i] != '\n')
                        advance(1);
                    continue;
                }

                Token t{Tok::End, "", line, column};
                size_t length = 1;
                if (is_ident_start(c)) {
                    while (i + length < text.size() && (is_ident_start(text[i + length]) || is_digit(text[i + length])))
                        ++length;
                    t.kind = Tok::Ident;
                }
                else if (is_digit(c)) {
                    while (i + length < text.size() && is_digit(text[i + length]))
                        ++length;
                    t.kind = Tok::Nat;
                }
                else if (text.substr(i, 2) == ":-") {
                    t.kind = Tok::Turnstile;
                    length = 2;
                }
                else if (text.substr(i, 2) == "<=") {
                    t.kind = Tok::SubsetEq;
                    length = 2;
                }
                else {
                    switch (c) {
                        case '(': t.kind = Tok::LParen; break;
                        case ')': t.kind = Tok::RParen; break;
                        case ',': t.kind = Tok::Comma; break;
                        case '.': t.kind = Tok::Dot; break;
                        case '/': t.kind = Tok::Slash; break;
                        case '=': t.kind = Tok::Equals; break;
                        default:
                            throw ParseError{ParseErrorKind::Syntax, line, column, "a token, found '" + string(1, c) + "'"};
                    }
                }
                t.text = string{text.substr(i, length)};
                advance(length);
                result.push_back(std::move(t));
            }
            result.push_back(Token{Tok::End, "", line, column});
            return result;
        }

        class Parser
        {
            private:
                vector<Token> _tokens;
                size_t _pos = 0;

            public:
                explicit Parser(vector<Token> tokens) :
                    _tokens(std::move(tokens))
                {
                }

                auto peek(size_t ahead = 0) const -> const Token &
                {
                    return _tokens[std::min(_pos + ahead, _tokens.size() - 1)];
                }

                auto at(Tok kind) const -> bool { return peek().kind == kind; }
                auto at_keyword(string_view word) const -> bool { return at(Tok::Ident) && peek().text == word; }

                [[noreturn]] auto fail(const string & expected) const -> void
                {
                    auto & t = peek();
                    auto found = t.kind == Tok::End ? describe(Tok::End) : "'" + t.text + "'";
                    throw ParseError{ParseErrorKind::Syntax, t.line, t.column, expected + ", found " + found};
                }

                auto expect(Tok kind) -> Token
                {
                    if (! at(kind))
                        fail(describe(kind));
                    return _tokens[_pos++];
                }

                auto expect_keyword(string_view word) -> Token
                {
                    if (! at_keyword(word))
                        fail("'" + string{word} + "'");
                    return _tokens[_pos++];
                }

                auto accept(Tok kind) -> bool
                {
                    if (! at(kind))
                        return false;
                    ++_pos;
                    return true;
                }

                auto nat(const Token & t) -> size_t
                {
                    if (t.text.size() > 9)
                        throw ParseError{ParseErrorKind::Syntax, t.line, t.column, "a small number, found '" + t.text + "'"};
                    return std::stoul(t.text);
                }

                auto schema() -> Schema
                {
                    expect_keyword("schema");
                    std::map<Relation, size_t> arities;
                    do {
                        auto name = expect(Tok::Ident);
                        expect(Tok::Slash);
                        auto arity = nat(expect(Tok::Nat));
                        if (! arities.emplace(Relation{name.text}, arity).second)
                            throw ParseError{ParseErrorKind::DuplicateName, name.line, name.column,
                                "relation '" + name.text + "' declared twice"};
                    } while (accept(Tok::Comma));
                    expect(Tok::Dot);
                    return Schema{std::move(arities)};
                }

                auto symbol(bool allow_reserved) -> Symbol
                {
                    auto t = expect(Tok::Ident);
                    if (! allow_reserved && is_reserved_symbol_name(t.text))
                        throw ParseError{ParseErrorKind::ReservedSymbol, t.line, t.column,
                            "symbol '" + t.text + "' is reserved for generated names"};
                    return Symbol{t.text};
                }

                auto atom(const Schema & s, bool allow_reserved) -> Atom
                {
                    auto name = expect(Tok::Ident);
                    Atom result{Relation{name.text}, {}};
                    expect(Tok::LParen);
                    if (! at(Tok::RParen)) {
                        do
                            result.args.push_back(symbol(allow_reserved));
                        while (accept(Tok::Comma));
                    }
                    expect(Tok::RParen);
                    if (auto problem = validate_atoms(s, FactSet{result}))
                        throw ParseError{ParseErrorKind::Validation, name.line, name.column, problem->message(), problem};
                    return result;
                }

                auto query(const Schema & s) -> Query
                {
                    expect_keyword("query");
                    Query result{expect(Tok::Ident).text, Head{}, FactSet{}};
                    expect(Tok::LParen);

                    vector<Head::Entry> entries;
                    std::set<string> seen;
                    if (! at(Tok::RParen)) {
                        do {
                            auto start = peek();
                            string attr;
                            if (at(Tok::Nat) || (at(Tok::Ident) && peek(1).kind == Tok::Equals)) {
                                attr = _tokens[_pos++].text;
                                expect(Tok::Equals);
                            }
                            else
                                attr = std::to_string(entries.size() + 1);
                            auto var = symbol(false);
                            if (! seen.insert(attr).second)
                                throw ParseError{ParseErrorKind::DuplicateAttribute, start.line, start.column,
                                    "attribute '" + attr + "' occurs twice in head"};
                            entries.emplace_back(attr, var);
                        } while (accept(Tok::Comma));
                    }
                    expect(Tok::RParen);
                    result.head = Head{std::move(entries)};

                    expect(Tok::Turnstile);
                    vector<Atom> body;
                    if (at_keyword("true") && peek(1).kind != Tok::LParen)
                        ++_pos;
                    else {
                        do
                            body.push_back(atom(s, false));
                        while (accept(Tok::Comma));
                    }
                    result.body = FactSet{std::move(body)};
                    expect(Tok::Dot);
                    return result;
                }

                auto document() -> Document
                {
                    Document result{schema(), {}, {}};
                    vector<std::pair<Token, Token>> asserts;

                    while (! at(Tok::End)) {
                        if (at_keyword("query")) {
                            auto start = peek(1);
                            auto q = query(result.schema);
                            auto name = q.name;
                            if (! result.queries.emplace(name, std::move(q)).second)
                                throw ParseError{ParseErrorKind::DuplicateName, start.line, start.column,
                                    "query '" + name + "' declared twice"};
                        }
                        else if (at_keyword("assert")) {
                            ++_pos;
                            auto lhs = expect(Tok::Ident);
                            expect(Tok::SubsetEq);
                            auto rhs = expect(Tok::Ident);
                            expect(Tok::Dot);
                            asserts.emplace_back(lhs, rhs);
                        }
                        else
                            fail("'query' or 'assert'");
                    }

                    for (auto & [lhs, rhs] : asserts) {
                        for (auto & t : {lhs, rhs})
                            if (! result.queries.contains(t.text))
                                throw ParseError{ParseErrorKind::UndeclaredQuery, t.line, t.column,
                                    "query '" + t.text + "' is not declared"};
                        if (result.queries.at(lhs.text).result_scheme() != result.queries.at(rhs.text).result_scheme())
                            throw ParseError{ParseErrorKind::SchemeMismatch, lhs.line, lhs.column,
                                "queries '" + lhs.text + "' and '" + rhs.text + "' have different result schemes"};
                        result.statements.emplace_back(lhs.text, rhs.text);
                    }
                    return result;
                }
        };
    }

    auto parse_document(string_view text) -> Document
    {
        Parser p{tokenize(text)};
        return p.document();
    }

    auto parse_instance(string_view text, const Schema & s) -> FactSet
    {
        vector<Atom> facts;
        size_t line_number = 0;
        size_t start = 0;
        while (start <= text.size()) {
            auto end = text.find('\n', start);
            if (end == string_view::npos)
                end = text.size();
            auto line = text.substr(start, end - start);
            ++line_number;

            Parser p{tokenize(line, line_number)};
            if (! p.at(Tok::End)) {
                facts.push_back(p.atom(s, true));
                p.expect(Tok::End);
            }
            start = end + 1;
        }

        FactSet result{std::move(facts)};
        if (auto problem = validate_instance(s, result))
            throw ParseError{ParseErrorKind::Validation, line_number, 1, problem->message(), problem};
        return result;
    }

    auto serialize(const Schema & s) -> string
    {
        string result = "schema ";
        bool first = true;
        for (auto & [r, arity] : s.relations()) {
            if (! first)
                result += ", ";
            result += r.name() + "/" + std::to_string(arity);
            first = false;
        }
        return result + ".";
    }

    auto serialize(const Atom & a) -> string
    {
        string result = a.relation.name() + "(";
        for (size_t i = 0 ; i < a.args.size() ; ++i) {
            if (i)
                result += ",";
            result += a.args[i].name();
        }
        return result + ")";
    }

    auto serialize(const Query & q) -> string
    {
        string result = "query " + q.name + "(";
        bool first = true;
        for (auto & [attr, var] : q.head.entries()) {
            if (! first)
                result += ", ";
            result += attr + "=" + var.name();
            first = false;
        }
        result += ") :- ";
        if (q.body.empty())
            result += "true";
        for (size_t i = 0 ; i < q.body.size() ; ++i) {
            if (i)
                result += ", ";
            result += serialize(q.body[i]);
        }
        return result + ".";
    }

    auto serialize(const Document & d) -> string
    {
        string result = serialize(d.schema) + "\n";
        for (auto & [_, q] : d.queries)
            result += serialize(q) + "\n";
        for (auto & [lhs, rhs] : d.statements)
            result += "assert " + lhs + " <= " + rhs + ".\n";
        return result;
    }

    auto serialize(const FactSet & fs) -> string
    {
        string result;
        for (auto & f : fs)
            result += serialize(f) + "\n";
        return result;
    }

    auto serialize(const ResultTuple & t) -> string
    {
        string result = "(";
        for (size_t i = 0 ; i < t.entries.size() ; ++i) {
            if (i)
                result += ",";
            result += t.entries[i].first + "=" + t.entries[i].second.name();
        }
        return result + ")";
    }

    auto serialize(const ResultSet & r) -> string
    {
        if (r.empty())
            return "<empty>\n";
        string result;
        for (auto & t : r)
            result += serialize(t) + "\n";
        return result;
    }

    auto read_file(const string & path) -> string
    {
        std::ifstream in{path, std::ios::binary};
        if (! in)
            throw Error{"cannot open '" + path + "'"};
        std::ostringstream buffer;
        buffer << in.rdbuf();
        return buffer.str();
    }
}
