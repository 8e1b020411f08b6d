#include <gtest/gtest.h>

#include <sstream>

#include "qcsp/rel_io.hpp"
#include "qcsp/rng.hpp"

using namespace qcsp;

namespace {

TEST(RelIo, ParseLabeledLibrary) {
    std::istringstream in(
        "# toy library\n"
        "domain 4 + - 0 1\n"
        "relation PLUS 1\n"
        "+\n"
        "end\n"
        "relation R 2\n"
        "+ -\n"
        "0 1\n"
        "end\n");
    RelLibrary lib = read_rel_stream(in, "<test>");
    EXPECT_EQ(lib.dom.size(), 4);
    EXPECT_TRUE(lib.rel("PLUS").contains({1}));
    EXPECT_TRUE(lib.rel("R").contains({1, 2}));
    EXPECT_TRUE(lib.rel("R").contains({3, 4}));
    EXPECT_EQ(lib.rel("R").count(), 2u);
}

TEST(RelIo, ParseParamRelationAndLambda) {
    std::istringstream in(
        "domain 2\n"
        "relation Q 5\n"
        "param z 2 delta 0 alpha 1 value 2\n"
        "1 2 1 1 1\n"
        "end\n"
        "relation DELTA 0\n"
        "lambda\n"
        "end\n");
    RelLibrary lib = read_rel_stream(in, "<test>");
    const ParamRelation& q = lib.params.at("Q");
    EXPECT_EQ(q.sig().z, 2);
    EXPECT_EQ(q.sig().v, 2);
    EXPECT_TRUE(q.base().contains({1, 2, 1, 1, 1}));
    EXPECT_TRUE(lib.rel("DELTA").contains(Tuple{}));
}

TEST(RelIo, ErrorsCarryLineNumbers) {
    std::istringstream in(
        "domain 2\n"
        "relation R 2\n"
        "1 2 3\n");
    try {
        read_rel_stream(in, "bad.rel");
        FAIL() << "expected parse_error";
    } catch (const parse_error& e) {
        EXPECT_NE(std::string(e.what()).find("bad.rel:3"), std::string::npos);
    }
}

TEST(RelIo, RoundTripIsByteStable) {
    Domain d(3, {"a", "b", "c"});
    RelLibrary lib;
    lib.dom = d;
    SplitMix64 rng(7);
    lib.add("R1", random_relation(d, 2, rng));
    lib.add("R2", random_relation(d, 3, rng));
    lib.add("P", ParamRelation(random_relation(d, 4, rng), ParamSignature{3, 0, 0, 1}));

    std::ostringstream first;
    write_rel_library(first, lib);
    std::istringstream back(first.str());
    RelLibrary lib2 = read_rel_stream(back, "<round>");
    std::ostringstream second;
    write_rel_library(second, lib2);
    EXPECT_EQ(first.str(), second.str());
    EXPECT_EQ(lib.rel("R1"), lib2.rel("R1"));
    EXPECT_EQ(lib.params.at("P"), lib2.params.at("P"));
}

}  // namespace
