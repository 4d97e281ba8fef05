#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "mms/json_io.hpp"
#include "mms/magic_system.hpp"
#include "mms/rank.hpp"

#ifndef MMS_CLI_PATH
#error "MMS_CLI_PATH must point at the built binary"
#endif

namespace {

using nlohmann::json;

struct CliResult {
    int exit_code = -1;
    std::string output;
};

CliResult run_cli(const std::string& args) {
    CliResult result;
    std::string command = std::string(MMS_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(command.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buffer[4096];
    while (std::size_t got = fread(buffer, 1, sizeof buffer, pipe))
        result.output.append(buffer, got);
    int status = pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

std::filesystem::path temp_file(const std::string& name, const std::string& contents) {
    std::filesystem::path path = std::filesystem::temp_directory_path() / name;
    std::ofstream out(path);
    out << contents;
    return path;
}

}  // namespace

TEST_CASE("construct round-trips through a file into rank") {
    CliResult constructed = run_cli("construct --order 4");
    REQUIRE(constructed.exit_code == 0);
    json j = json::parse(constructed.output);
    CHECK(j["rows"] == 8);
    CHECK(j["cols"] == 16);

    mms::IntMatrix parsed = mms::matrix_from_json(j);
    mms::IntMatrix direct = magic_matrix(mms::MagicSystem(4, {1}));
    CHECK(parsed == direct);

    auto path = temp_file("mms_cli_c4.json", constructed.output);
    CliResult ranked = run_cli("rank --matrix " + path.string());
    REQUIRE(ranked.exit_code == 0);
    json rj = json::parse(ranked.output);
    CHECK(rj["rank"] == mms::rank(direct));
    CHECK(rj["config"]["subcommand"] == "rank");
}

TEST_CASE("catalog and thresholds") {
    CliResult cat = run_cli("catalog --degree 4");
    REQUIRE(cat.exit_code == 0);
    json cj = json::parse(cat.output);
    CHECK(cj["order"] == "243");
    CHECK(cj["attribution"] == "P. Fengchu");

    CliResult th = run_cli("thresholds --degree 2 --power 5");
    REQUIRE(th.exit_code == 0);
    json tj = json::parse(th.output);
    CHECK(tj["multimagic"] == "13");
    CHECK(tj["kth_power"] == "61");

    CHECK(run_cli("thresholds").exit_code == 2);
    CHECK(run_cli("catalog --degree 1").exit_code == 2);
}

TEST_CASE("verify reports the bimagic failure of the classical square") {
    auto path = temp_file("mms_cli_loshu.txt", "3\n2 7 6\n9 5 1\n4 3 8\n");
    CliResult magic = run_cli("verify --square " + path.string() + " --degree 1");
    CHECK(magic.exit_code == 0);
    json mj = json::parse(magic.output);
    CHECK(mj["all_magic"] == true);
    CHECK(mj["checks"][0]["constant"] == "15");

    CliResult bimagic = run_cli("verify --square " + path.string() + " --degree 2");
    CHECK(bimagic.exit_code == 1);
    json bj = json::parse(bimagic.output);
    CHECK(bj["all_magic"] == false);
    CHECK(bj["checks"][1]["violation"] == "row 2");
}

TEST_CASE("count and fit") {
    mms::IntMatrix quad{{1, 1, -1, -1}};
    auto path = temp_file("mms_cli_quad.json", mms::matrix_to_json(quad).dump());
    CliResult counted = run_cli("count --matrix " + path.string() + " --exponents 1 --height 1");
    REQUIRE(counted.exit_code == 0);
    json cj = json::parse(counted.output);
    CHECK(cj["total"] == "19");

    CliResult distinct = run_cli("count --matrix " + path.string() +
                                 " --exponents 1 --height 1 --filter distinct");
    json dj = json::parse(distinct.output);
    CHECK(dj.contains("distinct"));

    CliResult fitted = run_cli("fit --matrix " + path.string() +
                               " --exponents 1 --heights 25,50,100 --filter none");
    REQUIRE(fitted.exit_code == 0);
    json fj = json::parse(fitted.output);
    double slope = fj["slope"].get<double>();
    CHECK(slope > 2.5);
    CHECK(slope < 3.5);
}

TEST_CASE("dominates exit codes distinguish refuted from proven") {
    mms::IntMatrix zero_col{{1, 0}, {0, 0}};
    auto bad = temp_file("mms_cli_zero.json", mms::matrix_to_json(zero_col).dump());
    CliResult refuted = run_cli("dominates --matrix " + bad.string() + " --function floor:2");
    CHECK(refuted.exit_code == 1);
    json rj = json::parse(refuted.output);
    CHECK(rj["verdict"] == "refuted");
    CHECK(rj["witness"] == json::array({2}));

    mms::IntMatrix id2{{1, 0, 1, 0}, {0, 1, 0, 1}};
    auto good = temp_file("mms_cli_id2.json", mms::matrix_to_json(id2).dump());
    CliResult proven = run_cli("dominates --matrix " + good.string() + " --function floor:4");
    CHECK(proven.exit_code == 0);
    CHECK(json::parse(proven.output)["verdict"] == "proven");
}

TEST_CASE("rank-condition subcommand") {
    CliResult r = run_cli("rank-condition --order 4");
    CHECK(r.exit_code == 0);
    json j = json::parse(r.output);
    CHECK(j["verdict"] == "proven");
    CHECK(j["subsets_checked"] == "65536");
}

TEST_CASE("partition subcommand and negative verdicts") {
    mms::IntMatrix id2{{1, 0, 1, 0}, {0, 1, 0, 1}};
    auto path = temp_file("mms_cli_part.json", mms::matrix_to_json(id2).dump());
    CliResult found = run_cli("partition --matrix " + path.string() + " --blocks 2");
    REQUIRE(found.exit_code == 0);
    json fj = json::parse(found.output);
    CHECK(fj["found"] == true);
    CHECK(fj["blocks"].size() == 2);

    CliResult none = run_cli("partition --matrix " + path.string() + " --blocks 3");
    CHECK(none.exit_code == 1);

    mms::IntMatrix deficient{{1, 1}, {1, 1}};
    auto bad = temp_file("mms_cli_rankdef.json", mms::matrix_to_json(deficient).dump());
    CliResult rejected = run_cli("partition --matrix " + bad.string() + " --blocks 1");
    CHECK(rejected.exit_code == 1);
    CHECK(json::parse(rejected.output)["reason"] == "rank-deficient");
}

TEST_CASE("search subcommand counts the classical squares") {
    CliResult eight = run_cli("search --order 3 --degree 1 --min 1 --max 9 --distinct");
    REQUIRE(eight.exit_code == 0);
    json ej = json::parse(eight.output);
    CHECK(ej["count"] == 8);
    CHECK(ej["complete"] == true);

    CliResult zero = run_cli("search --order 3 --degree 2 --min 1 --max 10 --distinct");
    CHECK(zero.exit_code == 1);
    CHECK(json::parse(zero.output)["count"] == 0);
}

TEST_CASE("solubility subcommand") {
    mms::IntMatrix quad{{1, 1, -1, -1}};
    auto path = temp_file("mms_cli_sol.json", mms::matrix_to_json(quad).dump());
    CliResult r = run_cli("solubility --matrix " + path.string() +
                          " --exponents 1,2 --prime-bound 7");
    REQUIRE(r.exit_code == 0);
    json j = json::parse(r.output);
    CHECK(j["evidence_positive"] == true);
    CHECK(j["padic"].size() == 4);
    CHECK(j["real"]["exact"] == true);
}

TEST_CASE("usage errors exit with code 2") {
    CHECK(run_cli("no-such-subcommand").exit_code == 2);
    CHECK(run_cli("construct").exit_code == 2);  // missing --order
    CHECK(run_cli("rank --matrix /nonexistent/file.json").exit_code == 2);

    auto garbled = temp_file("mms_cli_bad.json", "{\"rows\": 2, \"cols\": 2}");
    CHECK(run_cli("rank --matrix " + garbled.string()).exit_code == 2);
}

TEST_CASE("reports embed the resolved configuration") {
    CliResult r = run_cli("catalog --degree 2");
    json j = json::parse(r.output);
    CHECK(j["config"]["subcommand"] == "catalog");
    CHECK(j["config"]["degree"] == 2);
}
