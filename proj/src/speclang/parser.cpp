#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gr1shield/spec.hpp"

namespace gr1shield {

namespace {

enum class Tok { Ident, Int, Op, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    std::int64_t number = 0;
    int col = 0;
};

class Lexer {
public:
    Lexer(std::string_view src, int line) : src_(src), line_(line) { advance(); }

    const Token& peek() const { return tok_; }
    Token take() {
        Token t = tok_;
        advance();
        return t;
    }
    bool accept_op(std::string_view op) {
        if (tok_.kind == Tok::Op && tok_.text == op) {
            advance();
            return true;
        }
        return false;
    }
    void expect_op(std::string_view op) {
        if (!accept_op(op)) fail("expected '" + std::string(op) + "'");
    }
    bool at_op(std::string_view op) const { return tok_.kind == Tok::Op && tok_.text == op; }
    bool at_ident(std::string_view word) const { return tok_.kind == Tok::Ident && tok_.text == word; }
    [[noreturn]] void fail(const std::string& msg) const {
        std::string near = tok_.kind == Tok::End ? "end of line" : "'" + tok_.text + "'";
        throw SpecError(msg + " near " + near, line_, tok_.col);
    }
    int line() const { return line_; }

private:
    void advance() {
        while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
        tok_ = Token{};
        tok_.col = static_cast<int>(pos_) + 1;
        if (pos_ >= src_.size() || src_[pos_] == '#') {
            tok_.kind = Tok::End;
            return;
        }
        char c = src_[pos_];
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t start = pos_;
            while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
                ++pos_;
            tok_.kind = Tok::Ident;
            tok_.text = std::string(src_.substr(start, pos_ - start));
            return;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t start = pos_;
            while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
            tok_.kind = Tok::Int;
            tok_.text = std::string(src_.substr(start, pos_ - start));
            tok_.number = std::stoll(tok_.text);
            return;
        }
        static const char* ops[] = {"->", "&&", "||", "==", "!=", "<=", ">=", "..", "!", "(", ")", "=",
                                    "<",  ">",  ":",  "+",  "-",  ","};
        for (const char* op : ops) {
            std::string_view o(op);
            if (src_.substr(pos_, o.size()) == o) {
                tok_.kind = Tok::Op;
                tok_.text = std::string(o);
                pos_ += o.size();
                return;
            }
        }
        tok_.kind = Tok::Op;
        tok_.text = std::string(1, c);
        fail("unexpected character");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_;
    Token tok_;
};

bool reserved(const std::string& w) {
    static const std::set<std::string> words = {"X", "Y", "H", "true", "false", "env", "sys", "critical",
                                                "bool", "boolean", "int", "step"};
    return words.count(w) > 0;
}

class FormulaParser {
public:
    explicit FormulaParser(Lexer& lex) : lex_(lex) {}

    FormulaPtr parse_implies() {
        FormulaPtr lhs = parse_or();
        if (lex_.accept_op("->")) return f::implies(lhs, parse_implies());
        return lhs;
    }

private:
    FormulaPtr parse_or() {
        FormulaPtr acc = parse_and();
        while (lex_.accept_op("||")) acc = f::disj(acc, parse_and());
        return acc;
    }
    FormulaPtr parse_and() {
        FormulaPtr acc = parse_unary();
        while (lex_.accept_op("&&")) acc = f::conj(acc, parse_unary());
        return acc;
    }
    FormulaPtr parse_unary() {
        if (lex_.accept_op("!")) return f::negate(parse_unary());
        return parse_primary();
    }

    std::int64_t parse_signed_int() {
        bool neg = false;
        if (lex_.accept_op("-")) neg = true;
        if (lex_.peek().kind != Tok::Int) lex_.fail("expected integer");
        std::int64_t v = lex_.take().number;
        return neg ? -v : v;
    }

    std::optional<CmpOp> parse_cmp() {
        static const std::pair<const char*, CmpOp> table[] = {{"==", CmpOp::Eq}, {"=", CmpOp::Eq},  {"!=", CmpOp::Ne},
                                                              {"<=", CmpOp::Le}, {">=", CmpOp::Ge}, {"<", CmpOp::Lt},
                                                              {">", CmpOp::Gt}};
        for (const auto& [text, op] : table)
            if (lex_.accept_op(text)) return op;
        return std::nullopt;
    }

    FormulaPtr parse_primary() {
        const Token& t = lex_.peek();
        if (lex_.accept_op("(")) {
            FormulaPtr inner = parse_implies();
            lex_.expect_op(")");
            return inner;
        }
        if (t.kind != Tok::Ident) lex_.fail("expected formula");
        if (t.text == "true" || t.text == "false") {
            bool v = lex_.take().text == "true";
            return f::constant(v);
        }
        if (t.text == "X" || t.text == "Y" || t.text == "H") {
            std::string op = lex_.take().text;
            lex_.expect_op("(");
            FormulaPtr inner = parse_implies();
            lex_.expect_op(")");
            if (op == "Y") return f::yesterday(inner);
            if (op == "H") return f::historically(inner);
            if (inner->kind == FormulaKind::Atom && (lex_.at_op("=") || lex_.at_op("=="))) {
                lex_.take();
                if (lex_.peek().kind == Tok::Ident) {
                    std::string rhs = lex_.take().text;
                    std::int64_t offset = 0;
                    if (lex_.accept_op("+")) offset = parse_signed_int();
                    else if (lex_.accept_op("-")) offset = -parse_signed_int();
                    return f::next_equals(inner->var, rhs, offset);
                }
                return f::next_equals_const(inner->var, parse_signed_int());
            }
            return f::next(inner);
        }
        std::string name = lex_.take().text;
        if (reserved(name)) lex_.fail("reserved word '" + name + "' used as a variable");
        if (auto op = parse_cmp()) return f::compare(name, *op, parse_signed_int());
        return f::atom(name);
    }

    Lexer& lex_;
};

std::optional<UnitKind> unit_keyword(const std::string& w) {
    if (w == "assume") return UnitKind::Assume;
    if (w == "guarantee") return UnitKind::Guarantee;
    if (w == "assume_justice") return UnitKind::AssumeJustice;
    if (w == "guarantee_justice") return UnitKind::GuaranteeJustice;
    if (w == "assume_init") return UnitKind::AssumeInit;
    if (w == "guarantee_init") return UnitKind::GuaranteeInit;
    return std::nullopt;
}

std::string auto_prefix(UnitKind k) {
    switch (k) {
        case UnitKind::Assume: return "a";
        case UnitKind::Guarantee: return "g";
        case UnitKind::AssumeInit: return "ai";
        case UnitKind::GuaranteeInit: return "gi";
        case UnitKind::AssumeJustice: return "aj";
        case UnitKind::GuaranteeJustice: return "gj";
    }
    return "u";
}

void parse_decl(Lexer& lex, Owner owner, Spec& spec) {
    if (lex.peek().kind != Tok::Ident) lex.fail("expected variable type");
    std::string type = lex.take().text;
    if (lex.peek().kind != Tok::Ident) lex.fail("expected variable name");
    Token name_tok = lex.take();
    if (reserved(name_tok.text)) throw SpecError("reserved word used as a variable name", lex.line(), name_tok.col);
    if (spec.find_var(name_tok.text))
        throw SpecError("duplicate variable '" + name_tok.text + "'", lex.line(), name_tok.col);
    if (type == "bool" || type == "boolean") {
        spec.vars.push_back(VarDecl::boolean(name_tok.text, owner));
    } else if (type == "int") {
        auto read_int = [&] {
            bool neg = lex.accept_op("-");
            if (lex.peek().kind != Tok::Int) lex.fail("expected integer");
            std::int64_t v = lex.take().number;
            return neg ? -v : v;
        };
        std::int64_t lo = read_int();
        lex.expect_op("..");
        std::int64_t hi = read_int();
        std::int64_t step = 1;
        if (lex.at_ident("step")) {
            lex.take();
            step = read_int();
        }
        if (step < 1 || lo > hi || (hi - lo) % step != 0)
            throw SpecError("invalid integer domain for '" + name_tok.text + "'", lex.line(), name_tok.col);
        spec.vars.push_back(VarDecl::integer(name_tok.text, owner, lo, hi, step));
    } else {
        lex.fail("unknown variable type '" + type + "'");
    }
    if (lex.peek().kind != Tok::End) lex.fail("trailing input");
}

}  // namespace

FormulaPtr parse_formula(std::string_view text) {
    Lexer lex(text, 0);
    FormulaParser p(lex);
    FormulaPtr out = p.parse_implies();
    if (lex.peek().kind != Tok::End) lex.fail("trailing input");
    return out;
}

Spec parse_spec(std::string_view text) {
    Spec spec;
    std::vector<bool> needs_name;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;

        Lexer lex(line, line_no);
        if (lex.peek().kind == Tok::End) continue;
        if (lex.peek().kind != Tok::Ident) lex.fail("expected declaration or unit keyword");
        std::string head = lex.take().text;
        if (head == "env" || head == "sys") {
            parse_decl(lex, head == "env" ? Owner::Env : Owner::Sys, spec);
            continue;
        }
        auto kind = unit_keyword(head);
        if (!kind) throw SpecError("unknown keyword '" + head + "'", line_no, 1);
        Unit unit;
        unit.kind = *kind;
        unit.line = line_no;
        if (lex.at_ident("critical")) {
            lex.take();
            unit.critical = true;
        }
        // An optional "name:" prefix; a lone identifier followed by ':' is a name.
        {
            Lexer probe = lex;
            if (probe.peek().kind == Tok::Ident) {
                Token name = probe.take();
                if (probe.at_op(":")) {
                    if (reserved(name.text)) throw SpecError("reserved word used as a unit name", line_no, name.col);
                    unit.name = name.text;
                    lex = probe;
                    lex.take();
                }
            }
        }
        FormulaParser fp(lex);
        unit.formula = fp.parse_implies();
        if (lex.peek().kind != Tok::End) lex.fail("trailing input");
        needs_name.push_back(unit.name.empty());
        spec.units.push_back(std::move(unit));
        if (pos > text.size()) break;
    }

    std::set<std::string> taken;
    for (const auto& u : spec.units)
        if (!u.name.empty()) taken.insert(u.name);
    std::map<std::string, int> counters;
    for (std::size_t i = 0; i < spec.units.size(); ++i) {
        if (!needs_name[i]) continue;
        std::string prefix = auto_prefix(spec.units[i].kind);
        std::string candidate;
        do {
            candidate = prefix + std::to_string(++counters[prefix]);
        } while (taken.count(candidate));
        taken.insert(candidate);
        spec.units[i].name = candidate;
    }

    std::stable_sort(spec.units.begin(), spec.units.end(),
                     [](const Unit& a, const Unit& b) { return static_cast<int>(a.kind) < static_cast<int>(b.kind); });

    for (const auto& d : check_wellformed(spec)) throw SpecError(d.message + (d.unit.empty() ? "" : " in '" + d.unit + "'"), d.line, 1);
    return spec;
}

Spec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot open spec file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

}  // namespace gr1shield
