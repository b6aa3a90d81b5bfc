#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"

using namespace cbkp;

TEST_CASE("lemma checks pass on the displayed instances") {
    Workspace ws;
    CHECK(check_lemma2(ws, 1, 0, 2).status == CheckStatus::pass);
    CHECK(check_lemma2(ws, 2, 1, 2).status == CheckStatus::pass);
    CHECK(check_lemma2(ws, 1, 2, 3).status == CheckStatus::pass);
    CHECK(check_lemma3(ws, 1, 0, 2).status == CheckStatus::pass);
    CHECK(check_lemma3(ws, 2, 1, 2).status == CheckStatus::pass);
    CHECK(check_lemma4(ws, 2, 0, 2).status == CheckStatus::pass);
    CHECK(check_lemma4(ws, 1, 1, 3).status == CheckStatus::pass);
}

TEST_CASE("insufficient precision is reported, not guessed") {
    Workspace ws;
    CheckReport r = check_lemma2(ws, 1, 2, 0);
    CHECK(r.status == CheckStatus::insufficient_precision);
    REQUIRE(r.witness.has_value());
    CHECK(r.witness->contains("error"));
}

TEST_CASE("zero curvature instances") {
    Workspace ws;
    const unsigned K = 4;
    CHECK(check_zero_curvature(ws, 1, 0, 1, 1, K).status == CheckStatus::pass);
    CHECK(check_zero_curvature(ws, 1, 1, 2, 0, K).status == CheckStatus::pass);
    CHECK(check_zero_curvature(ws, 1, 1, 2, 1, K).status == CheckStatus::pass);
}

TEST_CASE("commutativity instances") {
    Workspace ws;
    const std::vector<std::pair<GenKind, std::uint32_t>> gens = {
        {GenKind::U, 0}, {GenKind::V, 0}, {GenKind::W, 0}};
    CHECK(check_commutativity(ws, 1, 0, 2, 1, gens, 4).status == CheckStatus::pass);
    CHECK(check_commutativity(ws, 1, 1, 2, 1, gens, 4).status == CheckStatus::pass);
}

TEST_CASE("involution checks") {
    Workspace ws;
    CHECK(check_tau(ws, 0, 3).status == CheckStatus::pass);
    CHECK(check_tau(ws, 1, 3).status == CheckStatus::pass);
}

TEST_CASE("defining relation closure") {
    Workspace ws;
    CHECK(check_defrel(ws, 1, 0).status == CheckStatus::pass);
    CHECK(check_defrel(ws, 1, 1).status == CheckStatus::pass);
    CHECK(check_defrel(ws, 2, 2).status == CheckStatus::pass);
}

TEST_CASE("target equation recovery") {
    Workspace ws;
    CHECK(derive_nv(ws, 4).status == CheckStatus::pass);
}

TEST_CASE("seeded property checks") {
    Workspace ws;
    CHECK(check_properties_diffalg(ws, 0, 50).status == CheckStatus::pass);
    CHECK(check_properties_psido(ws, 0, 25).status == CheckStatus::pass);
    CHECK(check_reduction(ws, 0, 5).status == CheckStatus::pass);
    // a different seed still passes; the laws are not seed luck
    CHECK(check_properties_diffalg(ws, 12345, 50).status == CheckStatus::pass);
}

TEST_CASE("suite runner retries once at a deeper truncation") {
    Workspace ws;
    SuiteOptions opt;
    opt.depth = 0;
    opt.retry_deeper = true;
    auto reports = run_suite(ws, Suite::tau, opt);
    REQUIRE(!reports.empty());
    for (const auto& r : reports) {
        CHECK(r.status == CheckStatus::pass);
        if (r.params.at("n").get<int>() >= 1) {
            REQUIRE(r.retried_from.has_value());
            CHECK(*r.retried_from == 0);
        }
    }

    // with the pinned-depth policy the deep checks stay insufficient
    opt.retry_deeper = false;
    auto pinned = run_suite(ws, Suite::tau, opt);
    bool any_insufficient = false;
    for (const auto& r : pinned) {
        if (r.status == CheckStatus::insufficient_precision) any_insufficient = true;
        CHECK(r.status != CheckStatus::fail);
    }
    CHECK(any_insufficient);
    CHECK(suite_exit_code(pinned) == 2);
}

TEST_CASE("reports are deterministic and sorted") {
    Workspace ws;
    SuiteOptions opt;
    opt.depth = 3;
    auto a = run_suite(ws, Suite::nv, opt);
    auto b = run_suite(ws, Suite::nv, opt);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].check_id == b[k].check_id);
        CHECK(a[k].params == b[k].params);
        CHECK(a[k].status == b[k].status);
    }
    CHECK(suite_exit_code(a) == 0);

    json j = to_json(a.front());
    CHECK(j.at("check_id") == "nv_recovery");
    CHECK(j.at("status") == "pass");
}
