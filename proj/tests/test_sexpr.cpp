#include "doctest.h"

#include "deepread/sexpr.hpp"

using namespace deepread;

TEST_CASE("sexpr reader handles atoms, strings, nesting, comments") {
    auto forms = parse_sexprs("# comment\n(ako car motor-vehicle)\n(lex \"french fries\" NN (sense f))\n");
    REQUIRE(forms.size() == 2);
    CHECK(forms[0].head() == "ako");
    CHECK(forms[0].at(1).str() == "car");
    CHECK(forms[1].at(1).is_string());
    CHECK(forms[1].at(1).text == "french fries");
    CHECK(forms[1].at(3).head() == "sense");
}

TEST_CASE("sexpr reader reports line numbers on errors") {
    CHECK_THROWS_WITH_AS(parse_sexprs("(a b\n(c", "f.kb"), doctest::Contains("f.kb:2"), ParseError);
    CHECK_THROWS_AS(parse_sexprs(")", "f"), ParseError);
    CHECK_THROWS_AS(parse_sexprs("\"open", "f"), ParseError);
}

TEST_CASE("numbers parse on demand") {
    auto forms = parse_sexprs("(size-of chair tall 3 foot)");
    CHECK(forms[0].at(3).num() == 3.0);
    CHECK_THROWS(forms[0].at(1).num());
}
