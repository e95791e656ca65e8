#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "rasp/atom.hpp"
#include "rasp/error.hpp"
#include "rasp/sequence.hpp"

using namespace rasp;

TEST_CASE("atom construction and invariants") {
    CHECK(Atom().is_null());
    CHECK(Atom::token("a").as_token() == "a");
    CHECK_THROWS_AS(Atom::token(""), EvalError);
    CHECK_THROWS_AS(Atom::number(std::nan("")), EvalError);
    CHECK_THROWS_AS(Atom::number(std::numeric_limits<double>::infinity()), EvalError);
    CHECK(Atom::number(-0.0) == Atom::number(0.0));
    CHECK(Atom::boolean(true).is_numeric());
    CHECK_FALSE(Atom::token("1").is_numeric());
    CHECK(Atom::token("ab").hash() == Atom::token("ab").hash());
}

TEST_CASE("apply_predicate examples") {
    CHECK(apply_predicate(Predicate::Lt, Atom::number(0), Atom::number(1)));
    CHECK(apply_predicate(Predicate::Eq, Atom::token("a"), Atom::token("a")));
    CHECK(apply_predicate(Predicate::Ge, Atom::number(2.0), Atom::number(2.0)));
    // key on the left, query on the right
    CHECK_FALSE(apply_predicate(Predicate::Lt, Atom::number(2), Atom::number(1)));
}

TEST_CASE("apply_predicate across kinds") {
    CHECK_FALSE(apply_predicate(Predicate::Eq, Atom::token("1"), Atom::number(1)));
    CHECK(apply_predicate(Predicate::Ne, Atom::token("1"), Atom::number(1)));
    CHECK_THROWS_AS(apply_predicate(Predicate::Lt, Atom::token("a"), Atom::number(1)), EvalError);
    CHECK(apply_predicate(Predicate::Eq, Atom::null(), Atom::null()));
    CHECK_FALSE(apply_predicate(Predicate::Eq, Atom::null(), Atom::number(0)));
    CHECK(apply_predicate(Predicate::Eq, Atom::boolean(true), Atom::number(1)));
    CHECK(apply_predicate(Predicate::Lt, Atom::token("a"), Atom::token("b")));
    CHECK(apply_predicate(Predicate::Lt, Atom::token("ab"), Atom::token("b")));
}

TEST_CASE("numeric tolerance") {
    CHECK(numeric_equal(3.0 * (2.0 / 3.0), 2.0));
    CHECK(numeric_equal(0.1 + 0.2, 0.3));
    CHECK_FALSE(numeric_equal(1.0, 1.0001));
    CHECK_FALSE(numeric_compare(Predicate::Lt, 0.1 + 0.2, 0.3));
    CHECK(numeric_compare(Predicate::Le, 0.1 + 0.2, 0.3));
    CHECK(numeric_compare(Predicate::Gt, 2.0, 1.0));
}

TEST_CASE("predicate properties over sampled atoms") {
    std::mt19937 rng(7);
    std::vector<Atom> pool = {Atom::null(),        Atom::token("a"),      Atom::token("b"),     Atom::number(0),
                              Atom::number(1.5),   Atom::number(-2),      Atom::boolean(true),  Atom::boolean(false),
                              Atom::token("§"),    Atom::number(1e12)};
    for (const auto& a : pool) {
        CHECK(apply_predicate(Predicate::Eq, a, a));
        for (const auto& b : pool) {
            CHECK(apply_predicate(Predicate::Ne, a, b) == !apply_predicate(Predicate::Eq, a, b));
        }
    }
}

TEST_CASE("coerce_numeric") {
    CHECK(coerce_numeric(Atom::boolean(true)) == 1);
    CHECK(coerce_numeric(Atom::boolean(false)) == 0);
    CHECK(coerce_numeric(Atom::number(3.5)) == 3.5);
    CHECK_THROWS_AS(coerce_numeric(Atom::token("a")), CoercionError);
    CHECK_THROWS_AS(coerce_numeric(Atom::null()), CoercionError);
}

TEST_CASE("broadcast_const") {
    const auto s = broadcast_const(Atom::token("§"), 3);
    CHECK(s.size() == 3);
    CHECK(to_display(s) == "§§§");
    CHECK(to_display(broadcast_const(Atom::number(1), 2)) == "[1, 1]");
    CHECK(to_display(broadcast_const(Atom::boolean(true), 1)) == "[T]");
    CHECK_THROWS_AS(broadcast_const(Atom::number(1), 0), EvalError);
    for (std::size_t n = 1; n <= 1000; ++n) REQUIRE(broadcast_const(Atom::number(7), n).size() == n);
}

TEST_CASE("display format") {
    CHECK(to_display(Atom::number(2.0)) == "2");
    CHECK(to_display(Atom::number(1.5)) == "1.5");
    CHECK(to_display(Atom::number(-3)) == "-3");
    CHECK(to_display(Atom::number(2.0000000000001)) == "2");
    CHECK(to_display(Atom::boolean(false)) == "F");
    CHECK(to_display(Atom::null()) == "-");
    CHECK(to_display(Atom::token("()")) == "()");
    CHECK(to_display(Sequence::from_string("hé§")) == "hé§");
    CHECK(to_display(Sequence({Atom::token("ab"), Atom::token("c")})) == "[ab, c]");
}

TEST_CASE("code point splitting") {
    CHECK(split_code_points("§ab").size() == 3);
    CHECK(split_code_points("").empty());
    CHECK(Sequence::from_string("§aba")[0].as_token() == "§");
}

TEST_CASE("selection matrix") {
    auto m = SelectionMatrix::from_rows({{true, false}, {false, true}});
    CHECK(m.at(0, 0));
    CHECK_FALSE(m.at(0, 1));
    m.set(0, 1, true);
    CHECK(m.at(0, 1));
    CHECK_THROWS_AS(SelectionMatrix::from_rows({{true, false}, {true}}), EvalError);
}
