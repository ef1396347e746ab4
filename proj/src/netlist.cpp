#include "stochcirc/netlist.hpp"

#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>

namespace stochcirc {

namespace {

enum class Tok { ident, number, lbrace, rbrace, lparen, rparen, comma, semicolon, equals, end };

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    SourceSpan span;
};

std::string describe(const Token& t) {
    switch (t.kind) {
        case Tok::end: return "end of input";
        case Tok::number: return "number '" + t.text + "'";
        case Tok::ident: return "'" + t.text + "'";
        default: return "'" + t.text + "'";
    }
}

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_blank();
            const SourceSpan at{line_, col_};
            if (pos_ >= text_.size()) {
                out.push_back({Tok::end, "", 0.0, at});
                return out;
            }
            const char c = text_[pos_];
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                const std::size_t start = pos_;
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
                    advance();
                }
                out.push_back({Tok::ident, std::string(text_.substr(start, pos_ - start)), 0.0, at});
                continue;
            }
            if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
                out.push_back(number(at));
                continue;
            }
            Tok kind;
            switch (c) {
                case '{': kind = Tok::lbrace; break;
                case '}': kind = Tok::rbrace; break;
                case '(': kind = Tok::lparen; break;
                case ')': kind = Tok::rparen; break;
                case ',': kind = Tok::comma; break;
                case ';': kind = Tok::semicolon; break;
                case '=': kind = Tok::equals; break;
                default: throw ParseError(std::string("unexpected character '") + c + "'", at);
            }
            advance();
            out.push_back({kind, std::string(1, c), 0.0, at});
        }
    }

private:
    void advance() {
        if (text_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_blank() {
        while (pos_ < text_.size()) {
            const char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                return;
            }
        }
    }

    Token number(SourceSpan at) {
        const std::size_t start = pos_;
        auto digits = [&] {
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        };
        if (text_[pos_] == '+' || text_[pos_] == '-') advance();
        digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            advance();
            digits();
        }
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            advance();
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
            digits();
        }
        // A number glued to further digits, dots or letters is one malformed token.
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) {
            advance();
        }
        std::string lexeme(text_.substr(start, pos_ - start));
        // from_chars rejects a leading '+'.
        const char* first = lexeme.data() + (lexeme.front() == '+' ? 1 : 0);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(first, lexeme.data() + lexeme.size(), value);
        if (ec != std::errc{} || ptr != lexeme.data() + lexeme.size()) {
            throw ParseError("malformed number '" + lexeme + "'", at);
        }
        return {Tok::number, lexeme, value, at};
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

// ---------------------------------------------------------------------------

const std::map<ElementKind, std::set<std::string>>& allowed_keys() {
    static const std::map<ElementKind, std::set<std::string>> keys{
        {ElementKind::inductor, {"L0", "L"}},
        {ElementKind::capacitor, {"C0", "C", "dPhi"}},
        {ElementKind::resistor, {"R0", "R"}},
        {ElementKind::memristor, {"M0", "M"}},
    };
    return keys;
}

bool scalar_key(const std::string& key) { return key.size() == 2 && key[1] == '0'; }

std::string variable_for(ElementKind kind) {
    return (kind == ElementKind::inductor || kind == ElementKind::resistor) ? "I" : "q";
}

std::optional<ElementKind> element_kind(const std::string& word) {
    if (word == "L") return ElementKind::inductor;
    if (word == "C") return ElementKind::capacitor;
    if (word == "R") return ElementKind::resistor;
    if (word == "M") return ElementKind::memristor;
    return std::nullopt;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    NetlistAst circuit() {
        NetlistAst ast;
        ast.span = peek().span;
        expect_word("circuit");
        expect(Tok::lbrace, "'{'");
        while (peek().kind != Tok::rbrace) {
            if (peek().kind == Tok::end) fail({"'}'", "L", "C", "R", "M", "parallel", "drive"});
            ast.items.push_back(item());
        }
        if (ast.items.empty()) throw ParseError("empty circuit", peek().span, {"L", "C", "R", "M", "parallel", "drive"});
        next();
        if (peek().kind != Tok::end) fail({"end of input"});
        check_arity(ast);
        return ast;
    }

private:
    const Token& peek() const { return toks_[i_]; }
    const Token& next() { return toks_[i_ < toks_.size() - 1 ? i_++ : i_]; }

    [[noreturn]] void fail(std::vector<std::string> expected) const {
        throw ParseError("unexpected " + describe(peek()), peek().span, std::move(expected));
    }

    const Token& expect(Tok kind, const std::string& what) {
        if (peek().kind != kind) fail({what});
        return next();
    }

    void expect_word(const std::string& word) {
        if (peek().kind != Tok::ident || peek().text != word) fail({"'" + word + "'"});
        next();
    }

    double expect_number() { return expect(Tok::number, "number").number; }

    ItemNode item() {
        const Token& t = peek();
        if (t.kind == Tok::ident) {
            if (t.text == "parallel") return parallel();
            if (t.text == "drive") return drive();
            if (element_kind(t.text)) return element();
        }
        fail({"L", "C", "R", "M", "parallel", "drive", "'}'"});
    }

    ElementNode element() {
        ElementNode node;
        node.span = peek().span;
        const auto kind = element_kind(peek().text);
        if (peek().kind != Tok::ident || !kind) fail({"L", "C", "R", "M"});
        node.kind = *kind;
        next();
        expect(Tok::lbrace, "'{'");
        const auto& keys = allowed_keys().at(node.kind);
        std::vector<std::string> key_list(keys.begin(), keys.end());
        for (;;) {
            if (peek().kind != Tok::ident) fail(key_list);
            Param param;
            param.span = peek().span;
            param.key = next().text;
            if (!keys.count(param.key)) {
                throw ParseError("unknown key '" + param.key + "' for " + std::string(to_string(node.kind)),
                                 param.span, key_list);
            }
            for (const auto& prev : node.params) {
                if (prev.key == param.key) throw ParseError("duplicate key '" + param.key + "'", param.span);
            }
            if (!node.params.empty()) {
                throw ParseError("conflicting key '" + param.key + "': " + std::string(to_string(node.kind)) +
                                     " already set by '" + node.params.front().key + "'",
                                 param.span);
            }
            expect(Tok::equals, "'='");
            if (scalar_key(param.key)) {
                param.value = expect_number();
            } else {
                param.value = poly(variable_for(node.kind));
            }
            node.params.push_back(std::move(param));
            if (peek().kind == Tok::comma) {
                next();
                continue;
            }
            expect(Tok::rbrace, "'}'");
            return node;
        }
    }

    PolyLiteral poly(const std::string& variable) {
        PolyLiteral lit;
        lit.span = peek().span;
        expect_word("poly");
        expect(Tok::lparen, "'('");
        if (peek().kind != Tok::ident) fail({"'" + variable + "'"});
        const Token& var = next();
        if (var.text != variable) {
            throw ParseError("polynomial variable '" + var.text + "' does not match element; use '" + variable + "'",
                             var.span, {"'" + variable + "'"});
        }
        lit.variable = var.text;
        expect(Tok::semicolon, "';'");
        lit.coefficients.push_back(expect_number());
        while (peek().kind == Tok::comma) {
            next();
            lit.coefficients.push_back(expect_number());
        }
        expect(Tok::rparen, "')'");
        return lit;
    }

    ParallelNode parallel() {
        ParallelNode node;
        node.span = peek().span;
        next();
        expect(Tok::lbrace, "'{'");
        for (int k = 0; k < 2; ++k) {
            if (peek().kind != Tok::ident || !element_kind(peek().text)) fail({"R", "M"});
            node.elements.push_back(element());
        }
        expect(Tok::rbrace, "'}'");
        return node;
    }

    DriveNode drive() {
        DriveNode node;
        node.span = peek().span;
        next();
        expect(Tok::lbrace, "'{'");
        if (peek().kind != Tok::ident) fail({"zero", "const", "sin"});
        const std::string form = peek().text;
        if (form == "zero") {
            next();
            node.form = DriveForm::zero;
        } else if (form == "const") {
            next();
            expect(Tok::lparen, "'('");
            node.form = DriveForm::constant;
            node.value = expect_number();
            expect(Tok::rparen, "')'");
        } else if (form == "sin") {
            next();
            expect(Tok::lparen, "'('");
            node.form = DriveForm::sinusoid;
            expect_word("amp");
            expect(Tok::equals, "'='");
            node.amplitude = expect_number();
            expect(Tok::comma, "','");
            expect_word("omega");
            expect(Tok::equals, "'='");
            node.omega = expect_number();
            expect(Tok::comma, "','");
            expect_word("phase");
            expect(Tok::equals, "'='");
            node.phase = expect_number();
            expect(Tok::rparen, "')'");
        } else {
            fail({"zero", "const", "sin"});
        }
        expect(Tok::rbrace, "'}'");
        return node;
    }

    static void check_arity(const NetlistAst& ast) {
        const ElementNode* inductor = nullptr;
        const ElementNode* capacitor = nullptr;
        const DriveNode* drive = nullptr;
        for (const auto& item : ast.items) {
            if (const auto* e = std::get_if<ElementNode>(&item)) {
                if (e->kind == ElementKind::inductor) {
                    if (inductor) throw ParseError("duplicate inductor", e->span);
                    inductor = e;
                } else if (e->kind == ElementKind::capacitor) {
                    if (capacitor) throw ParseError("duplicate capacitor", e->span);
                    capacitor = e;
                }
            } else if (const auto* d = std::get_if<DriveNode>(&item)) {
                if (drive) throw ParseError("duplicate drive", d->span);
                drive = d;
            }
        }
        if (!inductor) throw ParseError("exactly one inductor required", ast.span);
    }

    std::vector<Token> toks_;
    std::size_t i_ = 0;
};

std::string format_number(double x) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

char element_letter(ElementKind kind) {
    switch (kind) {
        case ElementKind::inductor: return 'L';
        case ElementKind::capacitor: return 'C';
        case ElementKind::resistor: return 'R';
        case ElementKind::memristor: return 'M';
    }
    return '?';
}

void print_element(std::ostringstream& os, const ElementNode& e) {
    os << element_letter(e.kind) << "{";
    for (std::size_t k = 0; k < e.params.size(); ++k) {
        if (k) os << ", ";
        const Param& p = e.params[k];
        os << p.key << "=";
        if (const double* v = std::get_if<double>(&p.value)) {
            os << format_number(*v);
        } else {
            const auto& lit = std::get<PolyLiteral>(p.value);
            os << "poly(" << lit.variable << "; ";
            for (std::size_t c = 0; c < lit.coefficients.size(); ++c) {
                if (c) os << ", ";
                os << format_number(lit.coefficients[c]);
            }
            os << ")";
        }
    }
    os << "}";
}

bool same_element(const ElementNode& a, const ElementNode& b) {
    if (a.kind != b.kind || a.params.size() != b.params.size()) return false;
    for (std::size_t k = 0; k < a.params.size(); ++k) {
        const Param& x = a.params[k];
        const Param& y = b.params[k];
        if (x.key != y.key || x.value.index() != y.value.index()) return false;
        if (const double* v = std::get_if<double>(&x.value)) {
            if (*v != std::get<double>(y.value)) return false;
        } else {
            const auto& px = std::get<PolyLiteral>(x.value);
            const auto& py = std::get<PolyLiteral>(y.value);
            if (px.variable != py.variable || px.coefficients != py.coefficients) return false;
        }
    }
    return true;
}

ScalarFunction characteristic(const ElementNode& e, Interval domain) {
    const Param& p = e.params.front();
    if (const double* v = std::get_if<double>(&p.value)) return ScalarFunction::constant(*v, domain);
    return ScalarFunction::polynomial(std::get<PolyLiteral>(p.value).coefficients, domain);
}

void accumulate(std::optional<ScalarFunction>& slot, const ScalarFunction& f) {
    slot = slot ? *slot + f : f;
}

}  // namespace

NetlistAst parse_netlist(std::string_view text) {
    Lexer lexer(text);
    Parser parser(lexer.run());
    return parser.circuit();
}

std::string print_netlist(const NetlistAst& ast) {
    std::ostringstream os;
    os << "circuit {\n";
    for (const auto& item : ast.items) {
        os << "  ";
        if (const auto* e = std::get_if<ElementNode>(&item)) {
            print_element(os, *e);
        } else if (const auto* par = std::get_if<ParallelNode>(&item)) {
            os << "parallel { ";
            for (const auto& e : par->elements) {
                print_element(os, e);
                os << " ";
            }
            os << "}";
        } else {
            const auto& d = std::get<DriveNode>(item);
            os << "drive { ";
            switch (d.form) {
                case DriveForm::zero: os << "zero"; break;
                case DriveForm::constant: os << "const(" << format_number(d.value) << ")"; break;
                case DriveForm::sinusoid:
                    os << "sin(amp=" << format_number(d.amplitude) << ", omega=" << format_number(d.omega)
                       << ", phase=" << format_number(d.phase) << ")";
                    break;
            }
            os << " }";
        }
        os << "\n";
    }
    os << "}\n";
    return os.str();
}

bool same_structure(const NetlistAst& a, const NetlistAst& b) {
    if (a.items.size() != b.items.size()) return false;
    for (std::size_t k = 0; k < a.items.size(); ++k) {
        const auto& x = a.items[k];
        const auto& y = b.items[k];
        if (x.index() != y.index()) return false;
        if (const auto* e = std::get_if<ElementNode>(&x)) {
            if (!same_element(*e, std::get<ElementNode>(y))) return false;
        } else if (const auto* p = std::get_if<ParallelNode>(&x)) {
            const auto& q = std::get<ParallelNode>(y);
            if (p->elements.size() != q.elements.size()) return false;
            for (std::size_t j = 0; j < p->elements.size(); ++j) {
                if (!same_element(p->elements[j], q.elements[j])) return false;
            }
        } else {
            const auto& d = std::get<DriveNode>(x);
            const auto& f = std::get<DriveNode>(y);
            if (d.form != f.form || d.value != f.value || d.amplitude != f.amplitude || d.omega != f.omega ||
                d.phase != f.phase) {
                return false;
            }
        }
    }
    return true;
}

CircuitSpec compile_spec(const NetlistAst& ast, const CompileOptions& options) {
    CircuitSpec spec;
    spec.domain = options.domain;
    spec.drive = ScalarFunction::zero(kTimeDomain);
    const ParallelNode* parallel = nullptr;
    const ElementNode* series_dissipator = nullptr;

    for (const auto& item : ast.items) {
        if (const auto* e = std::get_if<ElementNode>(&item)) {
            const ScalarFunction f = characteristic(*e, options.domain);
            const std::string& key = e->params.front().key;
            switch (e->kind) {
                case ElementKind::inductor: spec.inductance = f; break;
                case ElementKind::capacitor:
                    if (key == "dPhi") spec.potential_derivative = f;
                    else spec.capacitance = f;
                    break;
                case ElementKind::resistor:
                    accumulate(spec.resistance, f);
                    series_dissipator = e;
                    break;
                case ElementKind::memristor:
                    accumulate(spec.memristance, f);
                    series_dissipator = e;
                    break;
            }
        } else if (const auto* p = std::get_if<ParallelNode>(&item)) {
            if (parallel) throw ParseError("at most one parallel dissipator is supported", p->span);
            parallel = p;
        } else {
            const auto& d = std::get<DriveNode>(item);
            switch (d.form) {
                case DriveForm::zero: break;
                case DriveForm::constant: spec.drive = ScalarFunction::constant(d.value, kTimeDomain); break;
                case DriveForm::sinusoid:
                    spec.drive = ScalarFunction::sinusoid(d.amplitude, d.omega, d.phase, kTimeDomain);
                    break;
            }
        }
    }

    if (parallel) {
        if (series_dissipator) {
            throw ParseError("series R/M elements cannot be combined with a parallel dissipator",
                             series_dissipator->span);
        }
        const auto& els = parallel->elements;
        const bool r_and_m =
            els.size() == 2 && ((els[0].kind == ElementKind::resistor && els[1].kind == ElementKind::memristor) ||
                                (els[0].kind == ElementKind::memristor && els[1].kind == ElementKind::resistor));
        if (!r_and_m) throw ParseError("parallel dissipator needs exactly one R and one M", parallel->span, {"R", "M"});
        for (const auto& e : els) {
            if (e.kind == ElementKind::resistor) spec.resistance = characteristic(e, options.domain);
            else spec.memristance = characteristic(e, options.domain);
        }
        spec.topology = DissipatorTopology::parallel;
    }
    return spec;
}

PhaseSpaceModel compile(const NetlistAst& ast, const CompileOptions& options) {
    return PhaseSpaceModel::from_spec(compile_spec(ast, options));
}

}  // namespace stochcirc
