#include "glerg/dsl.hpp"

#include <cctype>
#include <limits>

namespace glerg {

const char* command_name(CommandKind k) {
    switch (k) {
    case CommandKind::Decompose: return "decompose";
    case CommandKind::Rep: return "rep";
    case CommandKind::Limit: return "limit";
    case CommandKind::Density: return "density";
    case CommandKind::CheckJoint: return "check-joint";
    case CommandKind::PrimeAvg: return "prime-avg";
    case CommandKind::Gowers: return "gowers";
    case CommandKind::Report: return "report";
    }
    return "?";
}

const SystemSpec& DslProgram::system(const std::string& name) const {
    for (auto& s : systems)
        if (s.name == name) return s.spec;
    throw Error(ErrorKind::UnknownName, "no system named '" + name + "'");
}

namespace {

enum class Tok { Ident, Int, String, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    int line = 1, col = 1;
};

std::vector<Token> lex(const std::string& src) {
    std::vector<Token> out;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&] {
        if (src[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };
    while (i < src.size()) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            advance();
            continue;
        }
        if (c == '#') {
            while (i < src.size() && src[i] != '\n') advance();
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            t.kind = Tok::Ident;
            while (i < src.size() && (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_')) {
                t.text += src[i];
                advance();
            }
        } else if (std::isdigit(static_cast<unsigned char>(c))) {
            t.kind = Tok::Int;
            while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) {
                t.text += src[i];
                advance();
            }
        } else if (c == '"') {
            t.kind = Tok::String;
            advance();
            while (i < src.size() && src[i] != '"' && src[i] != '\n') {
                t.text += src[i];
                advance();
            }
            if (i >= src.size() || src[i] != '"') throw SyntaxError(line, col, "'\"'");
            advance();
        } else if (std::string("()[]{},;:=+-*/^").find(c) != std::string::npos) {
            t.kind = Tok::Punct;
            t.text = std::string(1, c);
            advance();
        } else {
            throw SyntaxError(line, col, "a token");
        }
        out.push_back(std::move(t));
    }
    Token end;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

// an expression value: a constant, or a GL expression in x
struct Value {
    bool is_const = true;
    SymReal c;
    GlfExpr e;

    GlfExpr expr() const { return is_const ? constant(c) : e; }
    // constants hiding inside a GL expression
    bool constant_like(SymReal& out) const {
        if (is_const) {
            out = c;
            return true;
        }
        if (e->kind == NodeKind::Linear && e->a.is_zero()) {
            out = e->b;
            return true;
        }
        return false;
    }
};

class Parser {
public:
    Parser(std::vector<Token> toks, DslProgram* prog, const IrrationalBasis* basis)
        : t_(std::move(toks)), prog_(prog), basis_(basis) {}

    DslProgram program() {
        while (peek().kind != Tok::End) statement();
        return std::move(*prog_);
    }

    Value expression() {
        Value v = term();
        for (;;) {
            if (accept("+")) {
                v = add(v, term(), false);
            } else if (accept("-")) {
                v = add(v, term(), true);
            } else {
                return v;
            }
        }
    }

    void expect_end() {
        if (peek().kind != Tok::End) fail("end of input");
    }

private:
    std::vector<Token> t_;
    std::size_t p_ = 0;
    DslProgram* prog_;
    const IrrationalBasis* basis_;

    const Token& peek(std::size_t ahead = 0) const { return t_[std::min(p_ + ahead, t_.size() - 1)]; }
    const Token& next() {
        const Token& t = t_[p_];
        if (p_ + 1 < t_.size()) ++p_;
        return t;
    }
    [[noreturn]] void fail(const std::string& expected) const {
        throw SyntaxError(peek().line, peek().col, expected);
    }
    bool is(const std::string& punct_or_word) const {
        return (peek().kind == Tok::Punct || peek().kind == Tok::Ident) && peek().text == punct_or_word;
    }
    bool accept(const std::string& s) {
        if (!is(s)) return false;
        next();
        return true;
    }
    void expect(const std::string& s) {
        if (!accept(s)) fail("'" + s + "'");
    }
    std::string ident(const std::string& what = "a name") {
        if (peek().kind != Tok::Ident) fail(what);
        return next().text;
    }
    std::int64_t integer() {
        bool neg = accept("-");
        if (peek().kind != Tok::Int) fail("an integer");
        const Token& t = next();
        try {
            std::int64_t v = std::stoll(t.text);
            return neg ? -v : v;
        } catch (const std::out_of_range&) {
            throw SyntaxError(t.line, t.col, "an integer that fits in 64 bits");
        }
    }

    Value add(const Value& x, const Value& y, bool minus) {
        Value r;
        if (x.is_const && y.is_const) {
            r.c = minus ? x.c - y.c : x.c + y.c;
            return r;
        }
        r.is_const = false;
        r.e = minus ? x.expr() - y.expr() : x.expr() + y.expr();
        return r;
    }

    Value term() {
        Value v = unary();
        while (is("*")) {
            const Token at = peek();
            next();
            Value w = unary();
            SymReal c;
            Value r;
            if (v.is_const && w.is_const) {
                r.c = v.c * w.c;
            } else if (v.constant_like(c)) {
                r.is_const = false;
                r.e = c * w.expr();
            } else if (w.constant_like(c)) {
                r.is_const = false;
                r.e = c * v.expr();
            } else {
                throw SyntaxError(at.line, at.col, "a constant factor (x is the only variable)");
            }
            v = r;
        }
        return v;
    }

    Value unary() {
        if (accept("-")) {
            Value v = unary();
            if (v.is_const) v.c = -v.c;
            else v.e = -v.e;
            return v;
        }
        return primary();
    }

    Value primary() {
        const Token& t = peek();
        if (t.kind == Tok::Int) {
            std::int64_t n = integer();
            std::int64_t d = 1;
            if (accept("/")) {
                if (peek().kind != Tok::Int) fail("an integer denominator");
                d = integer();
                if (d == 0) throw SyntaxError(t.line, t.col, "a nonzero denominator");
            }
            Value v;
            v.c = SymReal(Rational(n, d));
            // 2x, 1/3x
            if (peek().kind == Tok::Ident && peek().text == "x") {
                next();
                v.is_const = false;
                v.e = linear(v.c, SymReal(0));
            }
            return v;
        }
        if (accept("(")) {
            Value v = expression();
            expect(")");
            return v;
        }
        if (t.kind != Tok::Ident) fail("an expression");
        std::string name = t.text;
        int line = t.line, col = t.col;
        next();
        if (name == "floor" || name == "frac") {
            expect("(");
            Value inner = expression();
            expect(")");
            Value v;
            v.is_const = false;
            v.e = name == "floor" ? floor_of(inner.expr()) : frac_of(inner.expr());
            return v;
        }
        if (name == "x") {
            Value v;
            v.is_const = false;
            v.e = var();
            return v;
        }
        if (prog_)
            for (auto& l : prog_->lets)
                if (l.name == name) {
                    Value v;
                    v.is_const = false;
                    v.e = l.expr;
                    return v;
                }
        if (basis_->find(name)) {
            Value v;
            v.c = (*basis_)(name);
            return v;
        }
        throw Error(ErrorKind::UnknownName, "line " + std::to_string(line) + ", col " + std::to_string(col) +
                                                ": unknown name '" + name + "'");
    }

    SymReal constant_expr() {
        const Token at = peek();
        Value v = expression();
        SymReal c;
        if (!v.constant_like(c)) throw SyntaxError(at.line, at.col, "a constant");
        return c;
    }

    Rational rational() {
        const Token at = peek();
        SymReal c = constant_expr();
        if (!c.is_rational()) throw SyntaxError(at.line, at.col, "a rational number");
        return c.rational_part();
    }

    GlfExpr gl_expr() { return expression().expr(); }

    bool name_taken(const std::string& n) const {
        if (n == "x" || basis_->find(n)) return true;
        for (auto& l : prog_->lets)
            if (l.name == n) return true;
        return false;
    }

    void statement() {
        const Token start = peek();
        std::string w = ident("a statement");
        if (w == "irrational") return irrational();
        if (w == "rule") return rule();
        if (w == "let") {
            const Token at = peek();
            std::string n = ident();
            if (name_taken(n)) throw SyntaxError(at.line, at.col, "a fresh name");
            expect("=");
            GlfExpr e = gl_expr();
            expect(";");
            prog_->lets.push_back({n, e});
            return;
        }
        if (w == "system") return system();
        Command c;
        c.line = start.line;
        if (w == "decompose" || w == "rep") {
            c.kind = w == "rep" ? CommandKind::Rep : CommandKind::Decompose;
            c.expr = gl_expr();
        } else if (w == "limit") {
            c.kind = CommandKind::Limit;
            expect("beta");
            expect("=");
            c.beta = constant_expr();
            expect("of");
            c.expr = gl_expr();
        } else if (w == "density") {
            c.kind = CommandKind::Density;
            expect("of");
            c.expr = gl_expr();
            expect("in");
            expect("[");
            c.lo = rational();
            expect(",");
            c.hi = rational();
            expect(")");
        } else if ((w == "check" || w == "prime") && is("-")) {
            next();
            if (w == "check") {
                expect("joint");
                c.kind = CommandKind::CheckJoint;
            } else {
                expect("avg");
                c.kind = CommandKind::PrimeAvg;
            }
            const Token at = peek();
            c.system = ident("a system name");
            const SystemSpec* sys = nullptr;
            for (auto& s : prog_->systems)
                if (s.name == c.system) sys = &s.spec;
            if (!sys)
                throw Error(ErrorKind::UnknownName, "line " + std::to_string(at.line) + ", col " +
                                                        std::to_string(at.col) + ": no system named '" + c.system + "'");
            expect("(");
            do {
                c.seqs.push_back(sequence(*sys));
            } while (accept(","));
            expect(")");
        } else if (w == "gowers") {
            c.kind = CommandKind::Gowers;
            expect("k");
            expect("=");
            c.k = static_cast<int>(integer());
            expect("N");
            expect("=");
            c.N = integer();
            expect("of");
            c.expr = gl_expr();
        } else if (w == "report") {
            c.kind = CommandKind::Report;
        } else {
            throw SyntaxError(start.line, start.col, "a statement");
        }
        expect(";");
        prog_->commands.push_back(std::move(c));
    }

    GlSeq sequence(const SystemSpec& sys) {
        GlSeq s;
        do {
            const Token at = peek();
            std::string h = ident("a transformation");
            try {
                sys.find(h);
            } catch (const Error&) {
                throw Error(ErrorKind::UnknownName, "line " + std::to_string(at.line) + ", col " +
                                                        std::to_string(at.col) + ": no transformation '" + h + "'");
            }
            expect("^");
            expect("(");
            GlfExpr e = gl_expr();
            expect(")");
            s.factors.emplace_back(h, e);
        } while (peek().kind == Tok::Ident);
        return s;
    }

    void irrational() {
        const Token at = peek();
        std::string n = ident();
        expect("=");
        const Token src = peek();
        std::string kind = ident("quadratic, pi or custom");
        std::string source;
        IrrationalBasis& b = *prog_->basis;
        auto existing = b.find(n);
        if (kind == "quadratic") {
            expect("(");
            std::int64_t v = integer();
            expect(")");
            source = "quadratic(" + std::to_string(v) + ")";
            if (!existing) {
                try {
                    b.add_quadratic(n, v);
                } catch (const Error&) {
                    throw SyntaxError(src.line, src.col, "quadratic(n) with n > 1 not a square");
                }
            }
        } else if (kind == "pi") {
            source = "pi";
            if (!existing) b.add_pi(n);
        } else if (kind == "custom") {
            expect("(");
            if (peek().kind != Tok::String) fail("a quoted decimal");
            std::string digits = next().text;
            expect(")");
            source = "custom(\"" + digits + "\")";
            if (!existing) {
                try {
                    b.add_custom(n, digits);
                } catch (const Error&) {
                    throw SyntaxError(src.line, src.col, "a decimal literal");
                }
            }
        } else {
            throw SyntaxError(src.line, src.col, "quadratic, pi or custom");
        }
        if (existing && b.gen(*existing).source != source)
            throw SyntaxError(at.line, at.col, "a fresh name ('" + n + "' is " + b.gen(*existing).source + ")");
        for (auto& l : prog_->lets)
            if (l.name == n) throw SyntaxError(at.line, at.col, "a fresh name");
        expect(";");
        prog_->irrationals.push_back({n, source});
    }

    void rule() {
        const Token at = peek();
        std::string a = ident("a generator");
        expect("*");
        std::string b = ident("a generator");
        expect("=");
        SymReal v = constant_expr();
        expect(";");
        auto ia = prog_->basis->find(a), ib = prog_->basis->find(b);
        if (!ia || !ib)
            throw Error(ErrorKind::UnknownName, "line " + std::to_string(at.line) + ", col " +
                                                    std::to_string(at.col) + ": unknown generator in rule");
        prog_->basis->add_rule(*ia, *ib, v);
        prog_->rules.push_back({a, b, v});
    }

    void system() {
        SystemDecl d;
        d.name = ident("a system name");
        for (auto& s : prog_->systems)
            if (s.name == d.name) fail("a fresh system name");
        expect("{");
        const Token kt = peek();
        std::string kind = ident("torus, cyclic or automorphism");
        int dim = 1;
        std::int64_t m = 0;
        if (kind == "torus") {
            expect("dim");
            dim = static_cast<int>(integer());
            if (dim < 1) throw SyntaxError(kt.line, kt.col, "a positive dimension");
        } else if (kind == "cyclic") {
            accept("m");
            m = integer();
            if (m < 1) throw SyntaxError(kt.line, kt.col, "a positive modulus");
        } else if (kind != "automorphism") {
            throw SyntaxError(kt.line, kt.col, "torus, cyclic or automorphism");
        }
        expect(";");
        std::vector<std::pair<std::string, std::vector<SymReal>>> rot;
        std::vector<std::pair<std::string, std::int64_t>> cyc;
        std::vector<std::pair<std::string, Mat2>> aut;
        while (!accept("}")) {
            std::string h = ident("a transformation name");
            expect(":");
            if (kind == "torus") {
                expect("alpha");
                expect("=");
                std::vector<SymReal> a;
                if (dim > 1) {
                    expect("(");
                    do {
                        a.push_back(constant_expr());
                    } while (accept(","));
                    expect(")");
                    if (static_cast<int>(a.size()) != dim) fail(std::to_string(dim) + " coordinates");
                } else {
                    a.push_back(constant_expr());
                }
                rot.emplace_back(h, a);
            } else if (kind == "cyclic") {
                expect("shift");
                expect("=");
                cyc.emplace_back(h, integer());
            } else {
                expect("matrix");
                expect("=");
                Mat2 A{};
                expect("[");
                expect("[");
                A[0] = integer();
                expect(",");
                A[1] = integer();
                expect("]");
                expect(",");
                expect("[");
                A[2] = integer();
                expect(",");
                A[3] = integer();
                expect("]");
                expect("]");
                aut.emplace_back(h, A);
            }
            expect(";");
        }
        if (kind == "torus") d.spec = torus_rotation(d.name, dim, rot);
        else if (kind == "cyclic") d.spec = cyclic_shift(d.name, m, cyc);
        else d.spec = toral_automorphism(d.name, aut);
        prog_->systems.push_back(std::move(d));
    }
};

} // namespace

DslProgram parse_program(const std::string& text) {
    DslProgram p;
    p.basis = std::make_shared<IrrationalBasis>();
    add_standard_generators(*p.basis);
    Parser ps(lex(text), &p, p.basis.get());
    return ps.program();
}

GlfExpr parse_expr(const std::string& text, const IrrationalBasis& basis) {
    Parser ps(lex(text), nullptr, &basis);
    Value v = ps.expression();
    ps.expect_end();
    return v.expr();
}

SymReal parse_symreal(const std::string& text, const IrrationalBasis& basis) {
    GlfExpr e = parse_expr(text, basis);
    if (e->kind != NodeKind::Linear || !e->a.is_zero()) throw SyntaxError(1, 1, "a constant");
    return e->b;
}

std::string print_system(const SystemDecl& s) {
    std::string out = "system " + s.name + " {\n";
    const SystemBlock& b = s.spec.blocks.at(0);
    switch (b.kind) {
    case SystemKind::TorusRotation:
        out += "  torus dim " + std::to_string(b.dim) + ";\n";
        for (std::size_t i = 0; i < b.handles.size(); ++i) {
            out += "  " + b.handles[i] + ": alpha = ";
            if (b.dim == 1) {
                out += b.alpha[i][0].str();
            } else {
                out += "(";
                for (int j = 0; j < b.dim; ++j) out += (j ? ", " : "") + b.alpha[i][j].str();
                out += ")";
            }
            out += ";\n";
        }
        break;
    case SystemKind::CyclicShift:
        out += "  cyclic m " + std::to_string(b.modulus) + ";\n";
        for (std::size_t i = 0; i < b.handles.size(); ++i)
            out += "  " + b.handles[i] + ": shift = " + std::to_string(b.shift[i]) + ";\n";
        break;
    case SystemKind::ToralAutomorphism:
        out += "  automorphism;\n";
        for (std::size_t i = 0; i < b.handles.size(); ++i) {
            auto& A = b.matrix[i];
            out += "  " + b.handles[i] + ": matrix = [[" + std::to_string(A[0]) + ", " + std::to_string(A[1]) +
                   "], [" + std::to_string(A[2]) + ", " + std::to_string(A[3]) + "]];\n";
        }
        break;
    }
    return out + "}\n";
}

std::string print_command(const Command& c) {
    switch (c.kind) {
    case CommandKind::Decompose: return "decompose " + to_string(c.expr) + ";";
    case CommandKind::Rep: return "rep " + to_string(c.expr) + ";";
    case CommandKind::Limit: return "limit beta=" + c.beta.str() + " of " + to_string(c.expr) + ";";
    case CommandKind::Density:
        return "density of " + to_string(c.expr) + " in [" + c.lo.str() + ", " + c.hi.str() + ");";
    case CommandKind::CheckJoint:
    case CommandKind::PrimeAvg: {
        std::string s = std::string(command_name(c.kind)) + " " + c.system + " (";
        for (std::size_t i = 0; i < c.seqs.size(); ++i) s += (i ? ", " : "") + c.seqs[i].str();
        return s + ");";
    }
    case CommandKind::Gowers:
        return "gowers k=" + std::to_string(c.k) + " N=" + std::to_string(c.N) + " of " + to_string(c.expr) + ";";
    case CommandKind::Report: return "report;";
    }
    return "";
}

std::string print_program(const DslProgram& p) {
    std::string out;
    for (auto& d : p.irrationals) out += "irrational " + d.name + " = " + d.source + ";\n";
    for (auto& r : p.rules) out += "rule " + r.a + "*" + r.b + " = " + r.value.str() + ";\n";
    for (auto& l : p.lets) out += "let " + l.name + " = " + to_string(l.expr) + ";\n";
    for (auto& s : p.systems) out += print_system(s);
    for (auto& c : p.commands) out += print_command(c) + "\n";
    return out;
}

bool structurally_equal(const DslProgram& x, const DslProgram& y) {
    if (x.irrationals.size() != y.irrationals.size() || x.rules.size() != y.rules.size() ||
        x.lets.size() != y.lets.size() || x.systems.size() != y.systems.size() ||
        x.commands.size() != y.commands.size())
        return false;
    for (std::size_t i = 0; i < x.irrationals.size(); ++i)
        if (x.irrationals[i].name != y.irrationals[i].name || x.irrationals[i].source != y.irrationals[i].source)
            return false;
    for (std::size_t i = 0; i < x.rules.size(); ++i)
        if (x.rules[i].a != y.rules[i].a || x.rules[i].b != y.rules[i].b ||
            x.rules[i].value.str() != y.rules[i].value.str())
            return false;
    for (std::size_t i = 0; i < x.lets.size(); ++i)
        if (x.lets[i].name != y.lets[i].name || !glerg::structurally_equal(x.lets[i].expr, y.lets[i].expr))
            return false;
    for (std::size_t i = 0; i < x.systems.size(); ++i)
        if (x.systems[i].name != y.systems[i].name || x.systems[i].spec.str() != y.systems[i].spec.str())
            return false;
    for (std::size_t i = 0; i < x.commands.size(); ++i) {
        auto& a = x.commands[i];
        auto& b = y.commands[i];
        if (a.kind != b.kind || print_command(a) != print_command(b)) return false;
        if (a.expr && !glerg::structurally_equal(a.expr, b.expr)) return false;
    }
    return true;
}

} // namespace glerg
