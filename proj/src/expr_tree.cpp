#include "lemlearn/expr_tree.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>
#include <sstream>
#include <unordered_map>

#include "lemlearn/errors.hpp"

namespace lemlearn {

ExprTree::ExprTree(std::string lbl, std::vector<ExprTree> kids)
    : label(std::move(lbl)), children(std::move(kids)) {
    size = 1;
    for (const auto& c : children) size += c.size;
}

bool ExprTree::operator==(const ExprTree& other) const {
    if (label != other.label || children.size() != other.children.size()) return false;
    for (size_t i = 0; i < children.size(); ++i)
        if (!(children[i] == other.children[i])) return false;
    return true;
}

ExprTree make_leaf(std::string label) { return ExprTree(std::move(label)); }

ExprTree make_node(std::string label, std::vector<ExprTree> children) {
    return ExprTree(std::move(label), std::move(children));
}

namespace {

bool needs_quoting(const std::string& s) {
    if (s.empty()) return true;
    for (char c : s)
        if (c == '(' || c == ')' || c == '"' || std::isspace(static_cast<unsigned char>(c)))
            return true;
    return false;
}

void write_sexpr(const ExprTree& t, std::string& out) {
    if (t.children.empty()) {
        if (needs_quoting(t.label)) {
            out += '"';
            for (char c : t.label) {
                if (c == '"' || c == '\\') out += '\\';
                out += c;
            }
            out += '"';
        } else {
            out += t.label;
        }
        return;
    }
    out += '(';
    ExprTree head(t.label);
    write_sexpr(head, out);
    for (const auto& c : t.children) {
        out += ' ';
        write_sexpr(c, out);
    }
    out += ')';
}

struct SexprReader {
    std::string_view text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    std::string read_atom() {
        if (text[pos] == '"') {
            ++pos;
            std::string out;
            while (pos < text.size() && text[pos] != '"') {
                if (text[pos] == '\\' && pos + 1 < text.size()) ++pos;
                out += text[pos++];
            }
            if (pos >= text.size()) throw ParseError("unterminated string in s-expression");
            ++pos;
            return out;
        }
        size_t start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos])) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        if (pos == start) throw ParseError("empty atom in s-expression");
        return std::string(text.substr(start, pos - start));
    }

    ExprTree read_tree() {
        skip_ws();
        if (pos >= text.size()) throw ParseError("unexpected end of s-expression");
        if (text[pos] != '(') return make_leaf(read_atom());
        ++pos;
        skip_ws();
        std::string label = read_atom();
        std::vector<ExprTree> kids;
        while (true) {
            skip_ws();
            if (pos >= text.size()) throw ParseError("unbalanced s-expression");
            if (text[pos] == ')') {
                ++pos;
                break;
            }
            kids.push_back(read_tree());
        }
        return make_node(std::move(label), std::move(kids));
    }
};

}  // namespace

std::string ExprTree::to_sexpr() const {
    std::string out;
    write_sexpr(*this, out);
    return out;
}

ExprTree ExprTree::from_sexpr(std::string_view text) {
    SexprReader r{text};
    ExprTree t = r.read_tree();
    r.skip_ws();
    if (r.pos != text.size()) throw ParseError("trailing content after s-expression");
    return t;
}

// ---------------------------------------------------------------------------
// Tokenizer
// ---------------------------------------------------------------------------

namespace {

enum class TokKind { Ident, Number, Op, LParen, RParen, LBrace, RBrace, LBracket, RBracket,
                     Colon, Comma, Forall, Exists, End };

struct Token {
    TokKind kind;
    std::string text;  // canonical spelling (operators normalized, types renamed)
};

// Unicode spellings mapped to canonical tokens before tree construction.
struct UniEntry {
    const char* utf8;
    TokKind kind;
    const char* canon;
};

constexpr std::array<UniEntry, 22> kUnicodeTable{{
    {"ℝ", TokKind::Ident, "Real"},
    {"ℕ", TokKind::Ident, "Nat"},
    {"ℤ", TokKind::Ident, "Int"},
    {"ℚ", TokKind::Ident, "Rat"},
    {"ℂ", TokKind::Ident, "Complex"},
    {"≤", TokKind::Op, "LE"},
    {"≥", TokKind::Op, "GE"},
    {"≠", TokKind::Op, "NE"},
    {"→", TokKind::Op, "IMP"},
    {"↔", TokKind::Op, "IFF"},
    {"∧", TokKind::Op, "AND"},
    {"∨", TokKind::Op, "OR"},
    {"¬", TokKind::Op, "NOT"},
    {"∣", TokKind::Op, "DVD"},
    {"∈", TokKind::Op, "MEM"},
    {"⊆", TokKind::Op, "SUBSET"},
    {"≡", TokKind::Op, "EQUIV"},
    {"×", TokKind::Op, "MUL"},
    {"∀", TokKind::Forall, "FORALL"},
    {"∃", TokKind::Exists, "EXISTS"},
    {"∑", TokKind::Ident, "SUM"},
    {"∏", TokKind::Ident, "PROD"},
}};

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_cont(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' ||
           c == '!' || c == '?';
}

std::vector<Token> tokenize(std::string_view src) {
    std::vector<Token> out;
    size_t i = 0;
    const size_t n = src.size();
    while (i < n) {
        char c = src[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        if (static_cast<unsigned char>(c) >= 0x80) {
            bool matched = false;
            for (const auto& e : kUnicodeTable) {
                size_t len = std::char_traits<char>::length(e.utf8);
                if (src.compare(i, len, e.utf8) == 0) {
                    out.push_back({e.kind, e.canon});
                    i += len;
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            // Unknown non-ASCII character: treat as identifier material so
            // exotic notation degrades to atoms instead of failing.
            size_t start = i;
            while (i < n && (static_cast<unsigned char>(src[i]) >= 0x80 ||
                             is_ident_cont(src[i]))) {
                if (static_cast<unsigned char>(src[i]) >= 0x80) {
                    bool stop = false;
                    for (const auto& e : kUnicodeTable) {
                        size_t len = std::char_traits<char>::length(e.utf8);
                        if (src.compare(i, len, e.utf8) == 0) {
                            stop = true;
                            break;
                        }
                    }
                    if (stop) break;
                    // advance one UTF-8 sequence
                    ++i;
                    while (i < n && (static_cast<unsigned char>(src[i]) & 0xC0) == 0x80) ++i;
                } else {
                    ++i;
                }
            }
            out.push_back({TokKind::Ident, std::string(src.substr(start, i - start))});
            continue;
        }
        if (is_ident_start(c)) {
            size_t start = i;
            while (i < n && (is_ident_cont(src[i]) ||
                             (static_cast<unsigned char>(src[i]) >= 0x80))) {
                if (static_cast<unsigned char>(src[i]) >= 0x80) {
                    bool stop = false;
                    for (const auto& e : kUnicodeTable) {
                        size_t len = std::char_traits<char>::length(e.utf8);
                        if (src.compare(i, len, e.utf8) == 0) {
                            stop = true;
                            break;
                        }
                    }
                    if (stop) break;
                    ++i;
                    while (i < n && (static_cast<unsigned char>(src[i]) & 0xC0) == 0x80) ++i;
                } else {
                    ++i;
                }
            }
            out.push_back({TokKind::Ident, std::string(src.substr(start, i - start))});
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            size_t start = i;
            while (i < n && (std::isdigit(static_cast<unsigned char>(src[i])) || src[i] == '.'))
                ++i;
            out.push_back({TokKind::Number, std::string(src.substr(start, i - start))});
            continue;
        }
        auto two = src.substr(i, 2);
        if (two == "<=") { out.push_back({TokKind::Op, "LE"}); i += 2; continue; }
        if (two == ">=") { out.push_back({TokKind::Op, "GE"}); i += 2; continue; }
        if (two == "!=") { out.push_back({TokKind::Op, "NE"}); i += 2; continue; }
        if (two == "->") { out.push_back({TokKind::Op, "IMP"}); i += 2; continue; }
        if (src.substr(i, 3) == "<->") { out.push_back({TokKind::Op, "IFF"}); i += 3; continue; }
        switch (c) {
            case '(': out.push_back({TokKind::LParen, "("}); ++i; continue;
            case ')': out.push_back({TokKind::RParen, ")"}); ++i; continue;
            case '{': out.push_back({TokKind::LBrace, "{"}); ++i; continue;
            case '}': out.push_back({TokKind::RBrace, "}"}); ++i; continue;
            case '[': out.push_back({TokKind::LBracket, "["}); ++i; continue;
            case ']': out.push_back({TokKind::RBracket, "]"}); ++i; continue;
            case ':': out.push_back({TokKind::Colon, ":"}); ++i; continue;
            case ',': out.push_back({TokKind::Comma, ","}); ++i; continue;
            case '=': out.push_back({TokKind::Op, "EQ"}); ++i; continue;
            case '<': out.push_back({TokKind::Op, "LT"}); ++i; continue;
            case '>': out.push_back({TokKind::Op, "GT"}); ++i; continue;
            case '+': out.push_back({TokKind::Op, "ADD"}); ++i; continue;
            case '-': out.push_back({TokKind::Op, "SUB"}); ++i; continue;
            case '*': out.push_back({TokKind::Op, "MUL"}); ++i; continue;
            case '/': out.push_back({TokKind::Op, "DIV"}); ++i; continue;
            case '%': out.push_back({TokKind::Op, "MOD"}); ++i; continue;
            case '^': out.push_back({TokKind::Op, "POW"}); ++i; continue;
            default:
                out.push_back({TokKind::Op, std::string(1, c)});
                ++i;
                continue;
        }
    }
    out.push_back({TokKind::End, ""});
    return out;
}

// ---------------------------------------------------------------------------
// Expression parser (Pratt, fixed precedence table, degrade-to-atom fallback)
// ---------------------------------------------------------------------------

struct OpInfo {
    int bp;          // binding power
    bool right;      // right associative
};

const std::unordered_map<std::string, OpInfo>& infix_table() {
    static const std::unordered_map<std::string, OpInfo> table = {
        {"IFF", {14, true}},  {"IMP", {16, true}},  {"OR", {20, true}},  {"AND", {25, true}},
        {"EQ", {40, false}},  {"NE", {40, false}},  {"LT", {40, false}}, {"LE", {40, false}},
        {"GT", {40, false}},  {"GE", {40, false}},  {"DVD", {40, false}},
        {"MEM", {40, false}}, {"SUBSET", {40, false}}, {"EQUIV", {40, false}},
        {"ADD", {60, false}}, {"SUB", {60, false}},
        {"MUL", {70, false}}, {"DIV", {70, false}}, {"MOD", {70, false}},
        {"POW", {80, true}},
    };
    return table;
}

constexpr int kAppBp = 90;
constexpr int kNotBp = 30;
constexpr int kNegBp = 75;

class ExprParser {
  public:
    ExprParser(std::vector<Token> toks, std::map<std::string, int>* slots)
        : toks_(std::move(toks)), slots_(slots) {}

    ExprTree parse_full() {
        ExprTree t = parse_expr(0);
        // Trailing unconsumed tokens degrade into an application chain so a
        // valid token stream never fails hard.
        while (peek().kind != TokKind::End) {
            ExprTree atom = parse_primary();
            t = make_node("APP", {std::move(t), std::move(atom)});
        }
        return t;
    }

  private:
    std::vector<Token> toks_;
    size_t pos_ = 0;
    std::map<std::string, int>* slots_;

    const Token& peek() const { return toks_[pos_]; }
    Token take() { return toks_[pos_++]; }

    std::string resolve_ident(const std::string& name) const {
        auto it = slots_->find(name);
        if (it != slots_->end()) return "v" + std::to_string(it->second);
        return name;
    }

    void bind(const std::string& name) {
        if (!slots_->count(name)) {
            int slot = static_cast<int>(slots_->size());
            (*slots_)[name] = slot;
        }
    }

    bool starts_primary(const Token& t) const {
        switch (t.kind) {
            case TokKind::Ident:
            case TokKind::Number:
            case TokKind::LParen:
            case TokKind::LBrace:
            case TokKind::LBracket:
            case TokKind::Forall:
            case TokKind::Exists:
                return true;
            default:
                return false;
        }
    }

    // Consumes tokens up to the matching close delimiter, returning the raw
    // text. Used for set-builders and bracket notation that the simplified
    // grammar does not model.
    std::string consume_balanced(TokKind open, TokKind close) {
        int depth = 1;
        std::string text;
        while (depth > 0) {
            if (peek().kind == TokKind::End) throw ParseError("unbalanced delimiters");
            Token t = take();
            if (t.kind == open) ++depth;
            if (t.kind == close) {
                --depth;
                if (depth == 0) break;
            }
            if (!text.empty()) text += ' ';
            text += t.text;
        }
        return text;
    }

    ExprTree parse_quantifier(const std::string& label) {
        std::vector<ExprTree> kids;
        // binder names (possibly parenthesized groups with type annotations)
        while (true) {
            if (peek().kind == TokKind::Ident) {
                Token t = take();
                bind(t.text);
                kids.push_back(make_leaf(resolve_ident(t.text)));
            } else if (peek().kind == TokKind::LParen) {
                take();
                std::vector<std::string> names;
                while (peek().kind == TokKind::Ident) names.push_back(take().text);
                for (const auto& nm : names) bind(nm);
                for (const auto& nm : names) kids.push_back(make_leaf(resolve_ident(nm)));
                if (peek().kind == TokKind::Colon) {
                    take();
                    kids.push_back(parse_expr(0));
                }
                if (peek().kind != TokKind::RParen) throw ParseError("unbalanced delimiters");
                take();
            } else {
                break;
            }
        }
        if (peek().kind == TokKind::Colon) {
            take();
            // bare typed binder: ∀ x : T, body
            ExprTree type = parse_expr(0);
            kids.push_back(std::move(type));
        }
        if (peek().kind == TokKind::Comma) take();
        kids.push_back(parse_expr(0));
        return make_node(label, std::move(kids));
    }

    ExprTree parse_primary() {
        Token t = take();
        switch (t.kind) {
            case TokKind::Ident:
                return make_leaf(resolve_ident(t.text));
            case TokKind::Number:
                return make_leaf(t.text);
            case TokKind::LParen: {
                if (peek().kind == TokKind::RParen) {
                    take();
                    return make_leaf("UNIT");
                }
                ExprTree e = parse_expr(0);
                if (peek().kind == TokKind::Colon) {
                    take();
                    ExprTree type = parse_expr(0);
                    e = make_node("TYPED", {std::move(e), std::move(type)});
                }
                std::vector<ExprTree> items;
                items.push_back(std::move(e));
                while (peek().kind == TokKind::Comma) {
                    take();
                    items.push_back(parse_expr(0));
                }
                if (peek().kind != TokKind::RParen) throw ParseError("unbalanced delimiters");
                take();
                if (items.size() == 1) return std::move(items[0]);
                return make_node("TUPLE", std::move(items));
            }
            case TokKind::LBrace:
                return make_leaf("{" + consume_balanced(TokKind::LBrace, TokKind::RBrace) + "}");
            case TokKind::LBracket:
                return make_leaf("[" + consume_balanced(TokKind::LBracket, TokKind::RBracket) + "]");
            case TokKind::Forall:
                return parse_quantifier("FORALL");
            case TokKind::Exists:
                return parse_quantifier("EXISTS");
            case TokKind::Op:
                if (t.text == "NOT") return make_node("NOT", {parse_expr(kNotBp)});
                if (t.text == "SUB") return make_node("NEG", {parse_expr(kNegBp)});
                // stray operator degrades to an atom leaf
                return make_leaf(t.text);
            case TokKind::Colon:
            case TokKind::Comma:
                return make_leaf(t.text);
            case TokKind::RParen:
            case TokKind::RBrace:
            case TokKind::RBracket:
                throw ParseError("unbalanced delimiters");
            case TokKind::End:
                throw ParseError("empty statement body");
        }
        throw ParseError("unreachable token kind");
    }

    ExprTree parse_expr(int min_bp) {
        ExprTree lhs = parse_primary();
        while (true) {
            const Token& t = peek();
            if (t.kind == TokKind::Op) {
                auto it = infix_table().find(t.text);
                if (it != infix_table().end()) {
                    const OpInfo& op = it->second;
                    if (op.bp < min_bp) break;
                    std::string label = t.text;
                    take();
                    ExprTree rhs = parse_expr(op.right ? op.bp : op.bp + 1);
                    lhs = make_node(std::move(label), {std::move(lhs), std::move(rhs)});
                    continue;
                }
                break;
            }
            if (starts_primary(t) && kAppBp >= min_bp &&
                t.kind != TokKind::Forall && t.kind != TokKind::Exists) {
                ExprTree arg = parse_primary();
                lhs = make_node("APP", {std::move(lhs), std::move(arg)});
                continue;
            }
            break;
        }
        return lhs;
    }
};

ExprTree parse_expr_text(const std::string& text, std::map<std::string, int>* slots) {
    ExprParser p(tokenize(text), slots);
    return p.parse_full();
}

// Splits binder contents "names : type" at the first top-level colon.
// Returns false when there is no top-level colon.
bool split_binder(const std::string& body, std::string& names, std::string& type) {
    int depth = 0;
    for (size_t i = 0; i < body.size(); ++i) {
        char c = body[i];
        if (c == '(' || c == '{' || c == '[') ++depth;
        if (c == ')' || c == '}' || c == ']') --depth;
        if (c == ':' && depth == 0 && (i + 1 >= body.size() || body[i + 1] != '=')) {
            names = body.substr(0, i);
            type = body.substr(i + 1);
            return true;
        }
    }
    return false;
}

bool is_simple_name_list(const std::string& names, std::vector<std::string>& out) {
    for (const Token& t : tokenize(names)) {
        if (t.kind == TokKind::End) break;
        if (t.kind != TokKind::Ident) return false;
        out.push_back(t.text);
    }
    return !out.empty();
}

}  // namespace

// ---------------------------------------------------------------------------
// TheoremStatement parsing
// ---------------------------------------------------------------------------

namespace {

// Locates `theorem`/`lemma` keywords appearing as standalone words outside
// comments and string literals.
std::vector<size_t> find_decl_keywords(const std::string& src) {
    std::vector<size_t> hits;
    bool in_line_comment = false;
    int block_comment = 0;
    bool in_string = false;
    for (size_t i = 0; i < src.size(); ++i) {
        if (in_line_comment) {
            if (src[i] == '\n') in_line_comment = false;
            continue;
        }
        if (block_comment > 0) {
            if (src.compare(i, 2, "/-") == 0) { ++block_comment; ++i; }
            else if (src.compare(i, 2, "-/") == 0) { --block_comment; ++i; }
            continue;
        }
        if (in_string) {
            if (src[i] == '\\') ++i;
            else if (src[i] == '"') in_string = false;
            continue;
        }
        if (src.compare(i, 2, "--") == 0) { in_line_comment = true; ++i; continue; }
        if (src.compare(i, 2, "/-") == 0) { block_comment = 1; ++i; continue; }
        if (src[i] == '"') { in_string = true; continue; }
        for (const char* kw : {"theorem", "lemma"}) {
            size_t len = std::char_traits<char>::length(kw);
            if (src.compare(i, len, kw) == 0) {
                bool left_ok = (i == 0) || !is_ident_cont(src[i - 1]);
                bool right_ok = (i + len >= src.size()) || !is_ident_cont(src[i + len]);
                if (left_ok && right_ok) hits.push_back(i);
            }
        }
    }
    return hits;
}

}  // namespace

TheoremStatement TheoremStatement::parse(const std::string& source) {
    auto keywords = find_decl_keywords(source);
    if (keywords.empty()) throw ParseError("no theorem declaration found");
    if (keywords.size() > 1)
        throw ParseError("expected exactly one top-level theorem keyword, found " +
                         std::to_string(keywords.size()));

    TheoremStatement stmt;
    stmt.raw_source = source;
    size_t kw = keywords[0];
    stmt.imports_header = source.substr(0, kw);

    size_t i = kw;
    while (i < source.size() && !std::isspace(static_cast<unsigned char>(source[i]))) ++i;
    while (i < source.size() && std::isspace(static_cast<unsigned char>(source[i]))) ++i;

    size_t name_start = i;
    while (i < source.size() && (is_ident_cont(source[i]) ||
                                 static_cast<unsigned char>(source[i]) >= 0x80))
        ++i;
    stmt.name = source.substr(name_start, i - name_start);
    if (stmt.name.empty()) throw ParseError("theorem has no name");

    // binder groups
    while (true) {
        while (i < source.size() && std::isspace(static_cast<unsigned char>(source[i]))) ++i;
        if (i >= source.size()) break;
        char open = source[i];
        char close;
        if (open == '(') close = ')';
        else if (open == '{') close = '}';
        else if (open == '[') close = ']';
        else break;
        size_t start = i;
        int depth = 0;
        for (; i < source.size(); ++i) {
            char c = source[i];
            if (c == '(' || c == '{' || c == '[') ++depth;
            if (c == ')' || c == '}' || c == ']') {
                --depth;
                if (depth == 0) { ++i; break; }
            }
        }
        if (depth != 0) throw ParseError("unbalanced delimiters in binders");
        (void)close;
        stmt.hypotheses.push_back(source.substr(start, i - start));
    }

    while (i < source.size() && std::isspace(static_cast<unsigned char>(source[i]))) ++i;
    if (i >= source.size() || source[i] != ':')
        throw ParseError("missing ':' before theorem goal");
    ++i;

    // goal runs until a top-level `:=`
    size_t goal_start = i;
    int depth = 0;
    size_t goal_end = source.size();
    for (size_t j = i; j + 1 < source.size(); ++j) {
        char c = source[j];
        if (c == '(' || c == '{' || c == '[') ++depth;
        if (c == ')' || c == '}' || c == ']') --depth;
        if (depth == 0 && c == ':' && source[j + 1] == '=') {
            goal_end = j;
            break;
        }
    }
    if (depth < 0) throw ParseError("unbalanced delimiters in goal");
    stmt.goal = source.substr(goal_start, goal_end - goal_start);
    while (!stmt.goal.empty() && std::isspace(static_cast<unsigned char>(stmt.goal.back())))
        stmt.goal.pop_back();
    while (!stmt.goal.empty() && std::isspace(static_cast<unsigned char>(stmt.goal.front())))
        stmt.goal.erase(stmt.goal.begin());
    if (stmt.goal.empty()) throw ParseError("empty statement body");
    return stmt;
}

std::string TheoremStatement::declaration() const {
    return raw_source.substr(imports_header.size());
}

// ---------------------------------------------------------------------------
// Tree construction
// ---------------------------------------------------------------------------

ExprTree parse_to_expr_tree(const TheoremStatement& stmt) {
    std::map<std::string, int> slots;
    std::vector<ExprTree> hyp_trees;
    for (const auto& seg : stmt.hypotheses) {
        if (seg.size() < 2) continue;
        std::string body = seg.substr(1, seg.size() - 2);
        std::string names, type;
        if (split_binder(body, names, type)) {
            std::vector<std::string> name_list;
            if (is_simple_name_list(names, name_list)) {
                for (const auto& nm : name_list) {
                    if (!slots.count(nm)) slots[nm] = static_cast<int>(slots.size());
                }
                hyp_trees.push_back(parse_expr_text(type, &slots));
                continue;
            }
        }
        hyp_trees.push_back(parse_expr_text(body, &slots));
    }
    ExprTree tree = parse_expr_text(stmt.goal, &slots);
    for (auto it = hyp_trees.rbegin(); it != hyp_trees.rend(); ++it)
        tree = make_node("IMP", {std::move(*it), std::move(tree)});
    return tree;
}

// ---------------------------------------------------------------------------
// Zhang-Shasha ordered tree edit distance, unit costs
// ---------------------------------------------------------------------------

namespace {

struct PostorderIndex {
    std::vector<const ExprTree*> nodes;  // postorder
    std::vector<int> lml;                // leftmost leaf descendant, postorder index
    std::vector<int> keyroots;

    explicit PostorderIndex(const ExprTree& root) {
        walk(root);
        std::vector<bool> seen_lml(nodes.size(), false);
        for (int i = static_cast<int>(nodes.size()) - 1; i >= 0; --i) {
            if (!seen_lml[static_cast<size_t>(lml[i])]) {
                keyroots.push_back(i);
                seen_lml[static_cast<size_t>(lml[i])] = true;
            }
        }
        std::sort(keyroots.begin(), keyroots.end());
    }

  private:
    int walk(const ExprTree& t) {
        int first_leaf = -1;
        for (const auto& c : t.children) {
            int leaf = walk(c);
            if (first_leaf < 0) first_leaf = leaf;
        }
        int idx = static_cast<int>(nodes.size());
        nodes.push_back(&t);
        lml.push_back(first_leaf < 0 ? idx : first_leaf);
        return lml.back();
    }
};

}  // namespace

int tree_edit_distance(const ExprTree& a, const ExprTree& b) {
    PostorderIndex ia(a), ib(b);
    const int na = static_cast<int>(ia.nodes.size());
    const int nb = static_cast<int>(ib.nodes.size());
    std::vector<std::vector<int>> td(static_cast<size_t>(na),
                                     std::vector<int>(static_cast<size_t>(nb), 0));
    std::vector<std::vector<int>> fd(static_cast<size_t>(na) + 2,
                                     std::vector<int>(static_cast<size_t>(nb) + 2, 0));

    for (int x : ia.keyroots) {
        for (int y : ib.keyroots) {
            const int ioff = ia.lml[x] - 1;
            const int joff = ib.lml[y] - 1;
            const int m = x - ioff;
            const int n = y - joff;
            fd[0][0] = 0;
            for (int i = 1; i <= m; ++i) fd[i][0] = fd[i - 1][0] + 1;
            for (int j = 1; j <= n; ++j) fd[0][j] = fd[0][j - 1] + 1;
            for (int i = 1; i <= m; ++i) {
                for (int j = 1; j <= n; ++j) {
                    const int ai = i + ioff;
                    const int bj = j + joff;
                    if (ia.lml[ai] == ia.lml[x] && ib.lml[bj] == ib.lml[y]) {
                        const int rel =
                            (ia.nodes[ai]->label == ib.nodes[bj]->label) ? 0 : 1;
                        fd[i][j] = std::min({fd[i - 1][j] + 1, fd[i][j - 1] + 1,
                                             fd[i - 1][j - 1] + rel});
                        td[ai][bj] = fd[i][j];
                    } else {
                        fd[i][j] = std::min({fd[i - 1][j] + 1, fd[i][j - 1] + 1,
                                             fd[ia.lml[ai] - 1 - ioff][ib.lml[bj] - 1 - joff] +
                                                 td[ai][bj]});
                    }
                }
            }
        }
    }
    return td[static_cast<size_t>(na) - 1][static_cast<size_t>(nb) - 1];
}

// ---------------------------------------------------------------------------
// Top-down alignment coverage
// ---------------------------------------------------------------------------

namespace {

struct FlatTree {
    std::vector<const ExprTree*> nodes;              // preorder
    std::vector<std::vector<int>> children;

    explicit FlatTree(const ExprTree& root) { walk(root); }

  private:
    int walk(const ExprTree& t) {
        int idx = static_cast<int>(nodes.size());
        nodes.push_back(&t);
        children.emplace_back();
        for (const auto& c : t.children) {
            int child = walk(c);  // may reallocate children
            children[static_cast<size_t>(idx)].push_back(child);
        }
        return idx;
    }
};

class Aligner {
  public:
    Aligner(const FlatTree& s, const FlatTree& t)
        : s_(s), t_(t),
          memo_(s.nodes.size(), std::vector<int>(t.nodes.size(), -1)) {}

    // Number of source nodes in the best top-down alignment mapping source
    // node u onto target node v (0 when labels differ).
    int match(int u, int v) {
        int& m = memo_[static_cast<size_t>(u)][static_cast<size_t>(v)];
        if (m >= 0) return m;
        if (s_.nodes[static_cast<size_t>(u)]->label != t_.nodes[static_cast<size_t>(v)]->label)
            return m = 0;
        const auto& cu = s_.children[static_cast<size_t>(u)];
        const auto& cv = t_.children[static_cast<size_t>(v)];
        // order-preserving injective child assignment, skips allowed
        std::vector<std::vector<int>> dp(cu.size() + 1, std::vector<int>(cv.size() + 1, 0));
        for (size_t i = 1; i <= cu.size(); ++i) {
            for (size_t j = 1; j <= cv.size(); ++j) {
                dp[i][j] = std::max(dp[i - 1][j], dp[i][j - 1]);
                dp[i][j] = std::max(dp[i][j],
                                    dp[i - 1][j - 1] + match(cu[i - 1], cv[j - 1]));
            }
        }
        return m = 1 + dp[cu.size()][cv.size()];
    }

  private:
    const FlatTree& s_;
    const FlatTree& t_;
    std::vector<std::vector<int>> memo_;
};

}  // namespace

SimilarityScore structural_similarity(const ExprTree& source, const ExprTree& target) {
    FlatTree fs(source), ft(target);
    Aligner aligner(fs, ft);
    int best = 0;
    for (size_t v = 0; v < ft.nodes.size(); ++v)
        best = std::max(best, aligner.match(0, static_cast<int>(v)));
    double value = static_cast<double>(best) / static_cast<double>(source.size);
    return {std::clamp(value, 0.0, 1.0)};
}

bool is_duplicate(const ExprTree& a, const ExprTree& b, double threshold) {
    const int dist = tree_edit_distance(a, b);
    const int denom = std::max(a.size, b.size);
    return static_cast<double>(dist) / static_cast<double>(denom) <= threshold;
}

}  // namespace lemlearn
