#include <doctest.h>

#include "rasp/error.hpp"
#include "rasp/eval.hpp"
#include "rasp/frontend/lexer.hpp"
#include "rasp/frontend/lower.hpp"
#include "rasp/frontend/parser.hpp"

using namespace rasp;
using namespace rasp::frontend;

namespace {

struct Scope {
    NameTable names;
    std::unique_ptr<Env> env = make_global_env(names);
    Extensions ext;

    explicit Scope(Extensions e = {}) : ext(e) {}

    void run(std::string_view src) {
        Lowerer lowerer(*env, names, ext);
        (void)lowerer.lower(parse_source(src));
    }
    const Value& get(std::string_view name) const {
        const Value* v = env->lookup(name);
        REQUIRE(v != nullptr);
        return *v;
    }
    SOp sop(std::string_view name) const { return std::get<SOp>(get(name)); }
    Selector selector(std::string_view name) const { return std::get<Selector>(get(name)); }
    std::string show(std::string_view name, std::string_view input) const {
        return to_display(evaluate(sop(name), input));
    }
};

std::vector<std::string> texts(std::string_view src) {
    std::vector<std::string> out;
    for (const auto& t : tokenize(src)) out.push_back(t.text);
    return out;
}

}  // namespace

TEST_CASE("lexer segmentation") {
    const auto toks = tokenize("hist = selector_width(same_tok, assume_bos = True);");
    CHECK(toks.size() == 11);
    CHECK(toks.back().text == ";");
    CHECK(toks[8].kind == TokenKind::Keyword);
    CHECK(texts("# comment\nx = 1;") == std::vector<std::string>{"x", "=", "1", ";"});
    const auto pairs = tokenize("pairs = [\"()\",\"{}\"];");
    int strings = 0;
    for (const auto& t : pairs) strings += t.kind == TokenKind::String;
    CHECK(strings == 2);
    CHECK(texts("a<=b==c") == std::vector<std::string>{"a", "<=", "b", "==", "c"});
    CHECK(tokenize("\"§\"")[0].text == "§");
    CHECK(tokenize(R"("a\"b\\")")[0].text == "a\"b\\");
}

TEST_CASE("lexer spans") {
    const auto toks = tokenize("x = 1;\n  yy = 22;");
    CHECK(toks[4].span.line == 2);
    CHECK(toks[4].span.column == 3);
    CHECK(toks[4].span.length == 2);
    for (std::size_t i = 1; i < toks.size(); ++i) {
        CHECK(toks[i].span.offset >= toks[i - 1].span.offset + toks[i - 1].span.length);
    }
}

TEST_CASE("lexer errors") {
    CHECK_THROWS_AS(tokenize("x = \"abc"), LexError);
    CHECK_THROWS_AS(tokenize("x = \"\\q\";"), LexError);
    CHECK_THROWS_AS(tokenize("x = 1 @ 2;"), LexError);
    CHECK_THROWS_AS(tokenize("x = §;"), LexError);
}

TEST_CASE("parser shapes") {
    auto p = parse_source("reverse = aggregate(select(indices, opp_index,==), tokens);");
    REQUIRE(p.statements.size() == 1);
    CHECK(std::holds_alternative<Assign>(p.statements[0].node));

    p = parse_source("x = \"F\" if a else (\"T\" if b else \"P\");");
    const auto& value = *std::get<Assign>(p.statements[0].node).value;
    const auto& cond = std::get<Conditional>(value.node);
    CHECK(std::holds_alternative<Conditional>(cond.otherwise->node));

    p = parse_source("openers = [p[0] for p in pairs];");
    CHECK(std::holds_alternative<Comprehension>(std::get<Assign>(p.statements[0].node).value->node));

    p = parse_source("def f(a, b = 2) { c = a; return c + b; }");
    const auto& def = std::get<std::shared_ptr<const FunctionDef>>(p.statements[0].node);
    CHECK(def->params.size() == 2);
    CHECK(def->body.size() == 1);

    p = parse_source("set example \"hey\"; draw(x, \"ab\");");
    CHECK(std::get<SetExample>(p.statements[0].node).value == "hey");
    CHECK(std::get<Draw>(p.statements[1].node).input == "ab");
}

TEST_CASE("parser precedence") {
    const auto text = [](std::string_view src) { return to_source(parse_source(src)); };
    CHECK(text("x = 1 + 2 * 3;") == "x = (1 + (2 * 3));\n");
    CHECK(text("x = not a == b and c or d;") == "x = (((not (a == b)) and c) or d);\n");
    CHECK(text("x = -a * b;") == "x = ((-a) * b);\n");
    CHECK(text("x = a if b else c if d else e;") == "x = (a if b else (c if d else e));\n");
    CHECK(text("x = t in [\"a\"] == y;") == "x = ((t in [\"a\"]) == y);\n");
    CHECK(text("x = f(a)[0];") == "x = f(a)[0];\n");
}

TEST_CASE("parser errors carry spans") {
    try {
        (void)parse_source("x = (1 + ;");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.span().line == 1);
        CHECK(e.span().column == 10);
        CHECK(std::string(e.what()).find("expected expression") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_source("x = 1"), ParseError);
    CHECK_THROWS_AS(parse_source("def f() { x = 1; }"), ParseError);
    CHECK_THROWS_AS(parse_source("def f() { return 1; return 2; }"), ParseError);
}

TEST_CASE("pretty-printing round-trips") {
    const char* sources[] = {
        "def frac_prevs(sop, val) { prevs = select(indices, indices, <=); return aggregate(prevs, indicator(sop == val)); }",
        "dyck1PTF = \"F\" if prev_imbalances > 0 else (\"T\" if balance == 0 else \"P\");",
        "openers = [p[0] for p in pairs]; x = -(a - b) % 3;",
        "hist = selector_width(same_tok, assume_bos = True); set example \"a\\\"b\"; draw(hist, \"§ab\");",
        "x = not (a and b) or \"c\" in tokens;",
    };
    for (const char* src : sources) {
        const auto once = to_source(parse_source(src));
        CHECK(to_source(parse_source(once)) == once);
    }
}

TEST_CASE("lowering basics") {
    Scope s;
    s.run("x = 1 + 2; y = x * 2; z = \"ab\"[1]; l = [c for c in [\"a\", \"b\"]]; w = l[-1];");
    CHECK(std::get<Atom>(s.get("x")) == Atom::number(3));
    CHECK(std::get<Atom>(s.get("y")) == Atom::number(6));
    CHECK(std::get<Atom>(s.get("z")) == Atom::token("b"));
    CHECK(std::get<StaticList>(s.get("l")).items.size() == 2);
    CHECK(std::get<Atom>(s.get("w")) == Atom::token("b"));

    s.run("flip = select(indices, length - indices - 1, ==); reverse = aggregate(flip, tokens);");
    CHECK(s.show("reverse", "hey") == "yeh");
    s.run("t = tokens if indices % 2 == 0 else \"-\";");
    CHECK(s.show("t", "hello") == "h-l-o");
    s.run("c = \"i\" in tokens; m = tokens in [\"a\", \"b\", \"c\"];");
    CHECK(s.show("c", "hi") == "[T, T]");
    CHECK(s.show("m", "hat") == "[F, T, F]");
    s.run("load1 = select(indices, 1, ==); both = load1 or flip; neither = not both;");
    CHECK(to_display(evaluate(s.sop("reverse"), "ab")) == "ba");
    const auto m = evaluate(s.selector("neither"), "hey");
    CHECK_FALSE(m.at(0, 1));
    CHECK(m.at(0, 0));
    s.run("e = select_eq(indices, 0); k = aggregate(e, tokens, default = \"-\");");
    CHECK(s.show("k", "hey") == "hhh");
}

TEST_CASE("functions inline into one DAG") {
    Scope s;
    s.run(R"src(
def frac_prevs(sop, val) {
    prevs = select(indices, indices, <=);
    return aggregate(prevs, indicator(sop == val));
}
a = frac_prevs(tokens, "(");
b = frac_prevs(tokens, ")");
)src");
    const SOp a = s.sop("a");
    const SOp b = s.sop("b");
    CHECK(a != b);
    CHECK(a.node().operands[0] == b.node().operands[0]);
    CHECK(s.show("a", "(()") == "[1, 1, 0.6666666666666666]");

    s.run("def g(x, y = 10) { return x + y; } p = g(1); q = g(1, y = 2); r = g(y = 3, x = 1);");
    CHECK(std::get<Atom>(s.get("p")) == Atom::number(11));
    CHECK(std::get<Atom>(s.get("q")) == Atom::number(3));
    CHECK(std::get<Atom>(s.get("r")) == Atom::number(4));
}

TEST_CASE("lowering is deterministic") {
    const char* src = "z = selector_width(select(tokens, tokens, ==)) + length;";
    Scope a, b;
    a.run(src);
    b.run(src);
    CHECK(a.sop("z") == b.sop("z"));
}

TEST_CASE("lowering errors") {
    Scope s;
    CHECK_THROWS_AS(s.run("x = nope + 1;"), LowerError);
    CHECK_THROWS_AS(s.run("x = 1; y = x(2);"), LowerError);
    CHECK_THROWS_AS(s.run("y = [c for c in tokens];"), LowerError);
    CHECK_THROWS_AS(s.run("return 1;"), LowerError);
    CHECK_THROWS_AS(s.run("tokens = 1;"), LowerError);
    CHECK_THROWS_AS(s.run("def length() { return 1; }"), LowerError);
    CHECK_THROWS_AS(s.run("x = 1 / 0;"), LowerError);
    CHECK_THROWS_AS(s.run("x = [1, 2][5];"), LowerError);
    CHECK_THROWS_AS(s.run("def f(a) { return f(a); } x = f(1);"), LowerError);
    CHECK_THROWS_AS(s.run("def f(a) { return a; } x = f(1, 2);"), LowerError);
    CHECK_THROWS_AS(s.run("x = select(indices, indices);"), LowerError);
    CHECK_THROWS_AS(s.run("x = aggregate(tokens, tokens);"), LowerError);
    CHECK_THROWS_AS(s.run("x = select_all and tokens;"), LowerError);
    CHECK_THROWS_AS(s.run("x = score(indices, 1);"), FeatureGateError);
    // shadowing built-ins is allowed inside functions
    s.run("def f(length) { return length + 1; } x = f(2);");
    CHECK(std::get<Atom>(s.get("x")) == Atom::number(3));
}

TEST_CASE("select_best lowering with the extension") {
    Scope s(Extensions{true});
    s.run("sc = score(indices, 1); b = select_best(select(indices, indices, <=), sc); v = aggregate(b, tokens);");
    CHECK(s.show("v", "abc") == "abc");
}

TEST_CASE("names recorded for printing") {
    Scope s;
    s.run("def h(seq) { same = select(seq, seq, ==); return selector_width(same); } hist = h(tokens);");
    CHECK(node_label(s.sop("hist").id(), &s.names) == "hist");
    const auto same = build::select(build::tokens(), build::tokens(), Predicate::Eq);
    CHECK(node_label(same.id(), &s.names) == "same");
    CHECK(node_label(build::length().id(), &s.names) == "length");
}
