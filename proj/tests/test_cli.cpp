#include "doctest.h"

#include "orbispace/jsonio.hpp"

using namespace orbi;
using namespace orbi::io;

namespace {

const char* kG23 = R"({
  "version": "1",
  "m": 1,
  "weights": [[1], [1], [1]],
  "v0_dim": 0,
  "generators": [
    {"name": "diag_half", "perm": [0, 1, 2], "rot": ["1/2", "0", "0"]},
    {"name": "cycle", "perm": [1, 2, 0]},
    {"name": "antiswap", "perm": [0, 2, 1], "conj": [true, true, true]}
  ]
})";

}  // namespace

TEST_CASE("document round trip is the identity on canonical documents") {
    auto spec = parse_spec(Json::parse(kG23), 24);
    Json canonical = spec_to_json(spec);
    auto reparsed = parse_spec(canonical, 24);
    CHECK(spec_to_json(reparsed) == canonical);
    CHECK(reparsed.weights.items == spec.weights.items);
    CHECK(reparsed.generators == spec.generators);
}

TEST_CASE("reports are byte-identical across runs") {
    CommandOptions opts;
    auto a = run_command("analyze", kG23, opts);
    auto b = run_command("analyze", kG23, opts);
    CHECK(a.report.dump() == b.report.dump());
    CHECK(a.exit_code == 0);
    CHECK(a.report["verdict"]["topological"] == "yes");

    auto g1 = run_command("group", kG23, opts);
    auto g2 = run_command("group", kG23, opts);
    CHECK(g1.report.dump() == g2.report.dump());
    CHECK(g1.report["coset_count"] == 24);
}

TEST_CASE("stability command pinned example") {
    CommandOptions opts;
    opts.q = 2;
    auto r = run_command("stability", R"({"m":2,"weights":[[1,0],[0,1],[1,1]]})", opts);
    CHECK(r.exit_code == 0);
    CHECK(r.report["q"] == 2);
    CHECK(r.report["stable"] == false);
}

TEST_CASE("malformed input maps to exit code 1") {
    CommandOptions opts;
    auto r = run_command("analyze", "{ not json", opts);
    CHECK(r.exit_code == 1);
    CHECK(r.report["error"]["code"] == "InvalidInput");
    CHECK(r.report["error"]["message"].get<std::string>().find("malformed JSON") !=
          std::string::npos);
}

TEST_CASE("inconsistent generators map to exit code 1") {
    CommandOptions opts;
    auto r = run_command(
        "validate",
        R"({"m":2,"weights":[[1,0],[0,2],[1,1]],"generators":[{"perm":[1,0,2]}]})", opts);
    CHECK(r.exit_code == 1);
    CHECK(r.report["error"]["code"] == "InconsistentAd");
}

TEST_CASE("cap exhaustion maps to exit code 2") {
    CommandOptions opts;
    opts.cap = 3;
    auto r = run_command("group", kG23, opts);
    CHECK(r.exit_code == 2);
    CHECK(r.report["error"]["code"] == "CapExceeded");
}

TEST_CASE("line guard rejects oversized documents") {
    CommandOptions opts;
    opts.max_lines = 2;
    auto r = run_command("stability", R"({"m":1,"weights":[[1],[1],[1]]})", opts);
    CHECK(r.exit_code == 1);
}

TEST_CASE("reduce command reports the trace") {
    CommandOptions opts;
    auto r = run_command("reduce", R"({"m":2,"weights":[[1,0],[1,0],[0,1],[0,1]]})", opts);
    CHECK(r.exit_code == 0);
    CHECK(r.report["reduction_trace"].size() == 2);
    CHECK(r.report["final"]["m"] == 0);
    CHECK(r.report["final"]["v0_dim"] == 6);
}

TEST_CASE("lab command emits one record per check") {
    CommandOptions opts;
    opts.trials = 25;
    opts.seed = 7;
    auto r = run_command("lab", kG23, opts);
    CHECK(r.exit_code == 0);
    CHECK(r.report["pass"] == true);
    for (const auto& check : r.report["report"]) {
        CAPTURE(check["check"].get<std::string>());
        CHECK(check["pass"] == true);
    }
}
