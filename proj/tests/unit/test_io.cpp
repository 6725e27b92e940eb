#include <functional>

#include "doctest.h"
#include "support/corpus.hpp"
#include "tropmirror/errors.hpp"
#include "tropmirror/io.hpp"

using namespace tropmirror;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const TropError& e) {
        return e.code();
    }
    return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("FNV-1a matches the published 64-bit vectors") {
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
    CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
    CHECK(fnv1a_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("polytope and triangulation files round trip") {
    for (const DualPair* d : {&corpus::cubic_pair(), &corpus::k3_pair()}) {
        const CentralTriangulation& T = *d->primal;
        CHECK(polytope_from_json(polytope_to_json(T.polytope())) == T.polytope());
        Json j = triangulation_to_json(T);
        CHECK(is_triangulation_json(j));
        CentralTriangulation back = triangulation_from_json(Json::parse(j.dump()));
        CHECK(back.points() == T.points());
        CHECK(back.simplices() == T.simplices());
    }
    CHECK_FALSE(is_triangulation_json(polytope_to_json(corpus::cubic())));
}

TEST_CASE("the stored cubic files describe the corpus pair") {
    const std::string dir = TROPMIRROR_DATA_DIR;
    LatticePolytope P = polytope_from_json(load_json_file(dir + "/cubic_polytope.json").value);
    CHECK(P == corpus::cubic());
    LatticePolytope Q = polytope_from_json(load_json_file(dir + "/cubic_dual_polytope.json").value);
    CHECK(Q == dual_polytope(corpus::cubic()));
    CentralTriangulation T = triangulation_from_json(load_json_file(dir + "/cubic_triangulation.json").value);
    CHECK(T.simplices() == corpus::cubic_pair().primal->simplices());
}

TEST_CASE("divisor and sign files round trip") {
    const CentralTriangulation& T = *corpus::cubic_pair().primal;
    DivisorF2 D = DivisorF2::from_rays(T, {{-1, 2}, {-1, 1}});
    CHECK(divisor_from_json(T, divisor_to_json(T, D)) == D);
    SignDistribution s = signs_from_divisor(T, D);
    CHECK(signs_from_json(T, signs_to_json(T, s)) == s);
    const std::string dir = TROPMIRROR_DATA_DIR;
    CHECK(signs_from_json(T, load_json_file(dir + "/cubic_signs_d7_d8.json").value) == s);
}

TEST_CASE("malformed files are input errors") {
    const CentralTriangulation& T = *corpus::cubic_pair().primal;
    CHECK(code_of([] { polytope_from_json(Json{{"rank", 2}}); }) == ErrorCode::InvalidInput);
    CHECK(code_of([] { polytope_from_json(Json::parse(R"({"rank": 2, "vertices": [[1, 2, 3]]})")); }) ==
          ErrorCode::InvalidInput);
    CHECK(code_of([] { polytope_from_json(Json::parse(R"({"rank": 2, "vertices": [[0, 0], [1, "x"]]})")); }) ==
          ErrorCode::InvalidInput);
    CHECK(code_of([&] { divisor_from_json(T, Json::parse(R"({"rays": [[-1, 1], [-1, 1]]})")); }) == ErrorCode::InvalidInput);
    CHECK(code_of([&] { divisor_from_json(T, Json::parse(R"({"rays": [[0, 0]]})")); }) == ErrorCode::RayNotInFan);
    // a missing point, then a repeated point, then a bad value
    Json partial = signs_to_json(T, signs_from_divisor(T, DivisorF2::zero(T)));
    partial["signs"].erase(partial["signs"].begin());
    CHECK(code_of([&] { signs_from_json(T, partial); }) == ErrorCode::InvalidInput);
    Json twice = signs_to_json(T, signs_from_divisor(T, DivisorF2::zero(T)));
    twice["signs"].push_back(twice["signs"][0]);
    CHECK(code_of([&] { signs_from_json(T, twice); }) == ErrorCode::InvalidInput);
    Json value = signs_to_json(T, signs_from_divisor(T, DivisorF2::zero(T)));
    value["signs"][0][1] = 2;
    CHECK(code_of([&] { signs_from_json(T, value); }) == ErrorCode::InvalidInput);
    CHECK(code_of([] { load_json_file("/nonexistent/file.json"); }) == ErrorCode::InvalidInput);
}

TEST_CASE("poset dump lists every cell and cover") {
    const DualPair& d = corpus::cubic_pair();
    CellPoset P = CellPoset::build_P(d.dual, d.primal);
    Json dump = poset_dump(P);
    CHECK(dump["kind"] == "P");
    CHECK(int(dump["cells"].size()) == P.size());
    CHECK(dump["covers"].size() == P.covers().size());
    int sphere = 0;
    for (const Json& c : dump["cells"])
        for (const Json& f : c["flags"]) sphere += f == "sphere";
    int expected = 0;
    for (const Cell& c : P.cells()) expected += c.has(kSphere);
    CHECK(sphere == expected);
}

TEST_CASE("cycle dump keys nonzero cells by coordinates") {
    const DualPair& d = corpus::cubic_pair();
    CellPoset P = CellPoset::build_P(d.primal, d.dual);
    ChainComplex C = Cosheaf(P, CosheafKind::F, 0).chain_complex();
    DivisorF2 D = DivisorF2::from_rays(*d.primal, {{-1, 2}, {-1, 1}});
    Json dump = cycle_dump(P, C, 0, divisor_restriction(P, C, D));
    REQUIRE(dump.size() == 1);
    CHECK(dump.begin().key().find('|') != std::string::npos);
}
