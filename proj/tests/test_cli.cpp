#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "sfd/io.hpp"

using namespace sfd;
using nlohmann::json;

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    std::string cmd = std::string(SFD_CLI_PATH) + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf{};
    std::string out;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
    int status = pclose(pipe);
    int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return RunResult{code, out};
}

std::string fixture(const char* name) { return std::string(SFD_FIXTURE_DIR) + "/" + name; }

std::string tmp_path(const char* name) { return std::string("/tmp/sfd_test_") + name; }

} // namespace

TEST_CASE("build emits a schema-versioned deterministic domain file") {
    auto r1 = run_cli("build " + fixture("sqrt5.json"));
    REQUIRE(r1.exit_code == 0);
    json d = json::parse(r1.out);
    CHECK(d["schema"] == kDomainSchema);
    CHECK(d["cones"].size() == 1);
    CHECK(d["cones"][0]["mu"] == 1);
    auto r2 = run_cli("build " + fixture("sqrt5.json"));
    CHECK(r2.out == r1.out);
}

TEST_CASE("build rejects totally complex fields with exit 2") {
    auto r = run_cli("build " + fixture("totally_complex.json"));
    CHECK(r.exit_code == 2);
}

TEST_CASE("build rejects malformed input with exit 2") {
    std::string bad = tmp_path("bad.json");
    write_text_file(bad, "{\"schema\": \"sfd-spec/1\", \"min_poly\": [1, 2]}");
    CHECK(run_cli("build " + bad).exit_code == 2);
    std::string notjson = tmp_path("notjson.json");
    write_text_file(notjson, "not json at all");
    CHECK(run_cli("build " + notjson).exit_code == 2);
    std::string wrongschema = tmp_path("wrongschema.json");
    write_text_file(wrongschema, "{\"schema\": \"sfd-spec/999\"}");
    CHECK(run_cli("build " + wrongschema).exit_code == 2);
}

TEST_CASE("domain JSON round-trips exactly") {
    FieldSpec spec = parse_field_spec(load_json_file(fixture("cbrt2.json")));
    SignedDomain dom = build_from_spec(spec);
    json j = domain_to_json(dom);
    SignedDomain back = domain_from_json(j);
    REQUIRE(back.cones.size() == dom.cones.size());
    CHECK(back.units == dom.units);
    CHECK(back.N == dom.N);
    CHECK(back.det_R_sign == dom.det_R_sign);
    CHECK(back.basis_embedding_sign == dom.basis_embedding_sign);
    CHECK(back.degree_constant == dom.degree_constant);
    CHECK(back.twister.table() == dom.twister.table());
    for (size_t i = 0; i < dom.cones.size(); ++i) {
        CHECK(back.cones[i].mu == dom.cones[i].mu);
        CHECK(back.cones[i].simplex.vertices == dom.cones[i].simplex.vertices);
        CHECK(back.cones[i].generators == dom.cones[i].generators);
        CHECK(back.cones[i].y_signs == dom.cones[i].y_signs);
        CHECK(back.cones[i].closure == dom.cones[i].closure);
        REQUIRE(back.cones[i].sector.size() == dom.cones[i].sector.size());
        for (size_t s = 0; s < dom.cones[i].sector.size(); ++s) {
            CHECK(back.cones[i].sector[s].offset == dom.cones[i].sector[s].offset);
            CHECK(back.cones[i].sector[s].v == dom.cones[i].sector[s].v);
        }
    }
    // and the serialized form is reproducible
    CHECK(domain_to_json(back) == j);
}

TEST_CASE("verify pipeline: build then verify exits 0") {
    std::string dom_path = tmp_path("sqrt5_domain.json");
    auto rb = run_cli("build " + fixture("sqrt5.json") + " --out " + dom_path);
    REQUIRE(rb.exit_code == 0);
    auto rv = run_cli("verify " + dom_path + " --samples 150 --lambda-samples 300 --seed 42");
    CHECK(rv.exit_code == 0);
    json rep = json::parse(rv.out);
    CHECK(rep["schema"] == kReportSchema);
    CHECK(rep["all_pass"] == true);
    CHECK(rep["accepted"] == 150);
    REQUIRE(rep["per_sample_counts"].size() == 150);
    for (const auto& c : rep["per_sample_counts"]) CHECK(c == 1);
}

TEST_CASE("verify honors a fixed exponent bound") {
    std::string dom_path = tmp_path("sqrt5_bound.json");
    REQUIRE(run_cli("build " + fixture("sqrt5.json") + " --out " + dom_path).exit_code == 0);
    auto rv = run_cli("verify " + dom_path +
                      " --samples 40 --lambda-samples 50 --seed 5 --bound 8");
    CHECK(rv.exit_code == 0);
    json rep = json::parse(rv.out);
    CHECK(rep["bound_used_max"] == 8);
}

TEST_CASE("build precision override is reflected in the domain file") {
    auto r = run_cli("build " + fixture("sqrt5.json") + " --precision-bits 192");
    REQUIRE(r.exit_code == 0);
    json d = json::parse(r.out);
    CHECK(d["field"]["precision_bits"] == 192);
}

TEST_CASE("verify flags corrupted domains with exit 1") {
    std::string dom_path = tmp_path("cbrt2_domain.json");
    auto rb = run_cli("build " + fixture("cbrt2.json") + " --out " + dom_path);
    REQUIRE(rb.exit_code == 0);

    SUBCASE("flipped mu") {
        json d = load_json_file(dom_path);
        d["cones"][1]["mu"] = -d["cones"][1]["mu"].get<int>();
        std::string bad = tmp_path("cbrt2_flipped.json");
        write_text_file(bad, d.dump());
        auto rv = run_cli("verify " + bad + " --samples 80 --lambda-samples 100 --seed 7");
        CHECK(rv.exit_code == 1);
    }
    SUBCASE("shifted vertex") {
        json d = load_json_file(dom_path);
        d["cones"][0]["vertices"][0][0] = d["cones"][0]["vertices"][0][0].get<int>() + 1;
        std::string bad = tmp_path("cbrt2_shifted.json");
        write_text_file(bad, d.dump());
        auto rv = run_cli("verify " + bad + " --samples 20 --lambda-samples 200 --seed 7");
        CHECK(rv.exit_code == 1);
    }
    SUBCASE("structurally broken cone data exits 2") {
        json d = load_json_file(dom_path);
        d["cones"][0]["generators"].erase(0);
        std::string bad = tmp_path("cbrt2_truncated.json");
        write_text_file(bad, d.dump());
        CHECK(run_cli("verify " + bad + " --samples 5").exit_code == 2);
    }
    SUBCASE("schema mismatch exits 2") {
        json d = load_json_file(dom_path);
        d["schema"] = "sfd-domain/999";
        std::string bad = tmp_path("cbrt2_schema.json");
        write_text_file(bad, d.dump());
        auto rv = run_cli("verify " + bad);
        CHECK(rv.exit_code == 2);
    }
}

TEST_CASE("twister construct and validate") {
    auto rc = run_cli("twister construct " + fixture("cbrt2.json"));
    REQUIRE(rc.exit_code == 0);
    json tw = json::parse(rc.out);
    CHECK(tw["entries"].size() == 3);

    std::string dom_path = tmp_path("cbrt2_domain2.json");
    REQUIRE(run_cli("build " + fixture("cbrt2.json") + " --out " + dom_path).exit_code == 0);
    auto rv = run_cli("twister validate " + dom_path);
    CHECK(rv.exit_code == 0);
    json rep = json::parse(rv.out);
    CHECK(rep["all_ok"] == true);
    CHECK(rep["min_slack"].get<double>() >= 0.25);
}

TEST_CASE("explicit twister tables in specs are honored") {
    FieldSpec spec = parse_field_spec(load_json_file(fixture("cbrt2.json")));
    SignedDomain dom = build_from_spec(spec);
    json spec_j = load_json_file(fixture("cbrt2.json"));
    spec_j["twister"] = twister_to_json(dom.twister);
    std::string path = tmp_path("cbrt2_explicit.json");
    write_text_file(path, spec_j.dump());
    FieldSpec spec2 = parse_field_spec(load_json_file(path));
    REQUIRE(spec2.twister.has_value());
    SignedDomain dom2 = build_from_spec(spec2);
    CHECK(dom2.twister.table() == dom.twister.table());
    for (size_t i = 0; i < dom.cones.size(); ++i)
        CHECK(dom2.cones[i].mu == dom.cones[i].mu);
}

TEST_CASE("plot emits CSV rays and sector groups") {
    std::string dom_path = tmp_path("sqrt5_domain3.json");
    REQUIRE(run_cli("build " + fixture("sqrt5.json") + " --out " + dom_path).exit_code == 0);
    auto rp = run_cli("plot " + dom_path + " --real-slice");
    REQUIRE(rp.exit_code == 0);
    CHECK(rp.out.find("cone,generator,x1,x2,mu") == 0);
    int lines = 0;
    for (char ch : rp.out)
        if (ch == '\n') ++lines;
    CHECK(lines == 3); // header + 2 generators of the single cone

    std::string dom3 = tmp_path("cbrt2_domain3.json");
    REQUIRE(run_cli("build " + fixture("cbrt2.json") + " --out " + dom3).exit_code == 0);
    auto rc = run_cli("plot " + dom3 + " --place 2");
    REQUIRE(rc.exit_code == 0);
    lines = 0;
    for (char ch : rc.out)
        if (ch == '\n') ++lines;
    CHECK(lines == 19); // header + 6 cones x 3 generators

    CHECK(run_cli("plot " + dom3 + " --place 9").exit_code == 2);
    CHECK(run_cli("plot " + dom3).exit_code == 2);

    // an emptied domain file is an input error
    json d = load_json_file(dom3);
    d["cones"] = json::array();
    std::string empty = tmp_path("cbrt2_empty.json");
    write_text_file(empty, d.dump());
    CHECK(run_cli("plot " + empty + " --place 2").exit_code == 2);
}

TEST_CASE("info summarizes a domain") {
    std::string dom_path = tmp_path("quartic_domain.json");
    REQUIRE(run_cli("build " + fixture("quartic21.json") + " --out " + dom_path).exit_code == 0);
    auto ri = run_cli("info " + dom_path);
    CHECK(ri.exit_code == 0);
    CHECK(ri.out.find("signature (2,1)") != std::string::npos);
    CHECK(ri.out.find("cones: 18") != std::string::npos);
}
