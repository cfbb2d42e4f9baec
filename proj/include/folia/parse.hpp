#pragma once

#include "folia/bipoly.hpp"
#include "folia/errors.hpp"
#include "folia/form.hpp"

#include <cctype>
#include <optional>
#include <string>
#include <vector>

namespace folia {

struct Options {
    int order = 16;
    int dmax = 12;
    int max_depth = 50;
    std::string emit = "text";       // text | json | dot
    std::string dot_graph = "dual";  // dual | centers
};

struct InputDocument {
    enum class Kind { Foliation, Curve };
    Kind kind = Kind::Foliation;
    std::string name;
    std::string expression; // the payload text as written
    std::optional<OneForm> form;
    std::optional<BiPoly> curve;
    bool saturation_warning = false;
    Options options;
};

namespace parsing {

struct Token {
    enum class Type { Number, Ident, Op, End };
    Type type = Type::End;
    std::string text;
    int line = 1;
    int col = 1;
};

class Lexer {
public:
    explicit Lexer(const std::string& s) : s_(s) { advance(); }

    const Token& peek() const { return tok_; }
    Token next() {
        Token t = tok_;
        advance();
        return t;
    }

private:
    void advance() {
        while (pos_ < s_.size() &&
               (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) {
            ++pos_;
            ++col_;
        }
        tok_ = Token{};
        tok_.line = line_;
        tok_.col = col_;
        if (pos_ >= s_.size()) {
            tok_.type = Token::Type::End;
            return;
        }
        char c = s_[pos_];
        if (c == '\n') {
            tok_.type = Token::Type::Op;
            tok_.text = "\n";
            ++pos_;
            ++line_;
            col_ = 1;
            return;
        }
        if (std::isdigit((unsigned char)c)) {
            tok_.type = Token::Type::Number;
            while (pos_ < s_.size() && std::isdigit((unsigned char)s_[pos_])) {
                tok_.text += s_[pos_++];
                ++col_;
            }
            return;
        }
        if (std::isalpha((unsigned char)c) || c == '_') {
            tok_.type = Token::Type::Ident;
            while (pos_ < s_.size() &&
                   (std::isalnum((unsigned char)s_[pos_]) || s_[pos_] == '_')) {
                tok_.text += s_[pos_++];
                ++col_;
            }
            return;
        }
        if (c == '*' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '*') {
            tok_.type = Token::Type::Op;
            tok_.text = "^"; // ** is a synonym for ^
            pos_ += 2;
            col_ += 2;
            return;
        }
        if (std::string("+-*/^()=").find(c) != std::string::npos) {
            tok_.type = Token::Type::Op;
            tok_.text = std::string(1, c);
            ++pos_;
            ++col_;
            return;
        }
        throw parse_error(std::string("unexpected character '") + c + "'", line_, col_);
    }

    std::string s_;
    std::size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
    Token tok_;
};

// Polynomial expression extended by the formal markers dx, dy (each may
// appear linearly in a term).
struct FormExpr {
    BiPoly plain, dx, dy;

    explicit FormExpr(const FieldPtr& f) : plain(f), dx(f), dy(f) {}

    static FormExpr from_poly(BiPoly p) {
        FormExpr e(p.field());
        e.plain = std::move(p);
        return e;
    }
    bool has_marker() const { return !dx.is_zero() || !dy.is_zero(); }
};

class Parser {
public:
    Parser(const std::string& text, FieldPtr field)
        : lex_(text), field_(std::move(field)) {}

    // <ident> '=' <expr> (one logical line)
    std::pair<std::string, FormExpr> parse_assignment() {
        skip_newlines();
        Token head = expect(Token::Type::Ident, "expected 'omega' or 'curve'");
        Token eq = lex_.next();
        if (eq.type != Token::Type::Op || eq.text != "=")
            throw parse_error("expected '=' after '" + head.text + "'", eq.line, eq.col);
        FormExpr value = parse_expr();
        Token tail = lex_.peek();
        if (tail.type != Token::Type::End && tail.text != "\n")
            throw parse_error("unexpected trailing input '" + tail.text + "'", tail.line,
                              tail.col);
        return {head.text, value};
    }

private:
    void skip_newlines() {
        while (lex_.peek().type == Token::Type::Op && lex_.peek().text == "\n") lex_.next();
    }

    Token expect(Token::Type t, const std::string& msg) {
        Token tok = lex_.next();
        if (tok.type != t) throw parse_error(msg, tok.line, tok.col);
        return tok;
    }

    FormExpr parse_expr() {
        FormExpr acc = parse_term();
        while (true) {
            const Token& t = lex_.peek();
            if (t.type == Token::Type::Op && (t.text == "+" || t.text == "-")) {
                Token op = lex_.next();
                FormExpr rhs = parse_term();
                acc.plain = op.text == "+" ? acc.plain + rhs.plain : acc.plain - rhs.plain;
                acc.dx = op.text == "+" ? acc.dx + rhs.dx : acc.dx - rhs.dx;
                acc.dy = op.text == "+" ? acc.dy + rhs.dy : acc.dy - rhs.dy;
            } else {
                return acc;
            }
        }
    }

    bool starts_factor(const Token& t) const {
        if (t.type == Token::Type::Number || t.type == Token::Type::Ident) return true;
        return t.type == Token::Type::Op && t.text == "(";
    }

    FormExpr parse_term() {
        FormExpr acc = parse_unary();
        while (true) {
            const Token& t = lex_.peek();
            if (t.type == Token::Type::Op && (t.text == "*" || t.text == "/")) {
                Token op = lex_.next();
                FormExpr rhs = parse_unary();
                acc = op.text == "*" ? multiply(acc, rhs, op) : divide(acc, rhs, op);
            } else if (starts_factor(t)) {
                Token at = t;
                FormExpr rhs = parse_unary();
                acc = multiply(acc, rhs, at); // juxtaposition, e.g. "3*x^2 dx"
            } else {
                return acc;
            }
        }
    }

    FormExpr parse_unary() {
        const Token& t = lex_.peek();
        if (t.type == Token::Type::Op && (t.text == "-" || t.text == "+")) {
            Token op = lex_.next();
            FormExpr v = parse_unary();
            if (op.text == "-") {
                v.plain = -v.plain;
                v.dx = -v.dx;
                v.dy = -v.dy;
            }
            return v;
        }
        return parse_power();
    }

    FormExpr parse_power() {
        FormExpr base = parse_atom();
        const Token& t = lex_.peek();
        if (t.type == Token::Type::Op && t.text == "^") {
            Token op = lex_.next();
            Token e = expect(Token::Type::Number, "expected integer exponent after '^'");
            long exp = std::stol(e.text);
            if (base.has_marker()) {
                if (exp == 1) return base;
                throw parse_error("dx/dy cannot be raised to a power", op.line, op.col);
            }
            FormExpr out(field_);
            out.plain = base.plain.pow((int)exp);
            return out;
        }
        return base;
    }

    FormExpr parse_atom() {
        Token t = lex_.next();
        if (t.type == Token::Type::Number) {
            Rat v(BigInt(t.text));
            return FormExpr::from_poly(BiPoly::constant(field_, v));
        }
        if (t.type == Token::Type::Ident) {
            if (t.text == "x") return FormExpr::from_poly(BiPoly::var_x(field_));
            if (t.text == "y") return FormExpr::from_poly(BiPoly::var_y(field_));
            if (t.text == "i")
                return FormExpr::from_poly(
                    BiPoly::constant(field_, FieldElement::unit_i(field_)));
            if (t.text == "dx") {
                FormExpr e(field_);
                e.dx = BiPoly::constant(field_, Rat(1));
                return e;
            }
            if (t.text == "dy") {
                FormExpr e(field_);
                e.dy = BiPoly::constant(field_, Rat(1));
                return e;
            }
            throw parse_error("unknown identifier '" + t.text + "'", t.line, t.col);
        }
        if (t.type == Token::Type::Op && t.text == "(") {
            FormExpr inner = parse_expr();
            Token close = lex_.next();
            if (close.type != Token::Type::Op || close.text != ")")
                throw parse_error("expected ')'", close.line, close.col);
            return inner;
        }
        throw parse_error("expected a number, variable, dx/dy or '('", t.line, t.col);
    }

    FormExpr multiply(const FormExpr& a, const FormExpr& b, const Token& at) {
        if (a.has_marker() && b.has_marker())
            throw parse_error("product of two dx/dy markers", at.line, at.col);
        FormExpr out(field_);
        out.plain = a.plain * b.plain;
        out.dx = a.plain * b.dx + a.dx * b.plain;
        out.dy = a.plain * b.dy + a.dy * b.plain;
        return out;
    }

    FormExpr divide(const FormExpr& a, const FormExpr& b, const Token& at) {
        if (b.has_marker())
            throw parse_error("cannot divide by dx/dy", at.line, at.col);
        if (!b.plain.is_constant() || b.plain.is_zero())
            throw parse_error("division is only allowed by nonzero constants", at.line,
                              at.col);
        FieldElement inv = b.plain.coefficient(0, 0).inverse();
        FormExpr out(field_);
        out.plain = a.plain * inv;
        out.dx = a.dx * inv;
        out.dy = a.dy * inv;
        return out;
    }

    Lexer lex_;
    FieldPtr field_;
};

} // namespace parsing

// Strips comment lines (#...) and returns the single payload line.
inline std::string strip_comments(const std::string& text) {
    std::string out;
    std::size_t i = 0;
    bool in_comment = false;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c == '#') in_comment = true;
        if (c == '\n') in_comment = false;
        if (!in_comment) out += c;
    }
    return out;
}

inline InputDocument parse_input(const std::string& text, const std::string& name = "input") {
    FieldPtr field = NumberField::gaussian_rationals();
    parsing::Parser parser(strip_comments(text), field);
    auto [head, value] = parser.parse_assignment();
    InputDocument doc;
    doc.name = name;
    doc.expression = text;
    if (head == "omega") {
        doc.kind = InputDocument::Kind::Foliation;
        if (!value.plain.is_zero())
            throw parse_error("foliation terms must carry dx or dy", 1, 1);
        if (value.dx.is_zero() && value.dy.is_zero())
            throw parse_error("foliation form is zero", 1, 1);
        if (!value.dx.coefficient(0, 0).is_zero() || !value.dy.coefficient(0, 0).is_zero())
            throw nonzero_constant_term_error(
                "the form does not vanish at the origin", 1, 1);
        OneForm w = OneForm::make(value.dx, value.dy);
        doc.saturation_warning = w.saturation_divided();
        doc.form = w;
        return doc;
    }
    if (head == "curve") {
        doc.kind = InputDocument::Kind::Curve;
        if (value.has_marker())
            throw parse_error("curve expressions cannot contain dx/dy", 1, 1);
        if (value.plain.is_zero()) throw parse_error("curve is zero", 1, 1);
        if (!value.plain.coefficient(0, 0).is_zero())
            throw nonzero_constant_term_error(
                "the curve does not vanish at the origin", 1, 1);
        doc.curve = value.plain;
        return doc;
    }
    throw parse_error("expected 'omega = ...' or 'curve = ...', got '" + head + "'", 1, 1);
}

// Canonical serialization; re-parsing yields an identical payload.
inline std::string serialize_payload(const InputDocument& doc) {
    if (doc.kind == InputDocument::Kind::Foliation) {
        const OneForm& w = *doc.form;
        std::string s = "omega =";
        bool first = true;
        if (!w.a().is_zero()) {
            s += " (" + w.a().to_string() + ") dx";
            first = false;
        }
        if (!w.b().is_zero()) {
            s += first ? " " : " + ";
            s += "(" + w.b().to_string() + ") dy";
        }
        return s;
    }
    return "curve = " + doc.curve->to_string();
}

} // namespace folia
