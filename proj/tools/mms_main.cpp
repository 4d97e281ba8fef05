// Command-line front end.  Every subcommand writes a single JSON report to
// stdout (or --out) with the fully resolved configuration embedded, so a
// report always identifies the run that produced it.  Counts and orders are
// decimal strings.
//
// Exit codes: 0 success, 1 negative mathematical verdict (refuted
// domination, non-magic square, no partition, empty search), 2 usage or
// input error, 3 budget exhaustion or an inconclusive search.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mms/basis_partition.hpp"
#include "mms/counting.hpp"
#include "mms/domination.hpp"
#include "mms/errors.hpp"
#include "mms/json_io.hpp"
#include "mms/rank_profile.hpp"
#include "mms/solubility.hpp"

namespace {

using nlohmann::json;

constexpr int kExitSuccess = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct CommonOptions {
    std::string out_path;
    std::uint64_t seed = 0;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOptions& common) {
    cmd->add_option("--out", common.out_path, "write the JSON report here instead of stdout");
    cmd->add_option("--seed", common.seed, "seed for randomized searches")->capture_default_str();
    cmd->add_option("--threads", common.threads, "worker threads for subset scans")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

void emit(const json& report, const CommonOptions& common) {
    if (common.out_path.empty()) {
        std::cout << report.dump(2) << std::endl;
    } else {
        std::ofstream out(common.out_path);
        if (!out) throw std::runtime_error("cannot open output file " + common.out_path);
        out << report.dump(2) << std::endl;
    }
}

mms::IntMatrix load_matrix(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open matrix file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("matrix file " + path + ": " + e.what());
    }
    return mms::matrix_from_json(j);
}

mms::Square load_square(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open square file " + path);
    return mms::square_from_text(in);
}

std::vector<unsigned> parse_exponents(const std::string& text) {
    std::vector<unsigned> exps;
    std::stringstream ss(text);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (token.empty()) continue;
        long v = std::stol(token);
        if (v < 1) throw std::invalid_argument("exponents must be >= 1, got " + token);
        exps.push_back(static_cast<unsigned>(v));
    }
    if (exps.empty()) throw std::invalid_argument("exponent list is empty");
    return exps;
}

json verdict_to_json(const mms::DominationVerdict& v) {
    json j;
    switch (v.kind) {
        case mms::VerdictKind::proven: j["verdict"] = "proven"; break;
        case mms::VerdictKind::refuted: j["verdict"] = "refuted"; break;
        case mms::VerdictKind::inconclusive: j["verdict"] = "inconclusive"; break;
    }
    if (v.witness) {
        j["witness"] = *v.witness;
        j["witness_rank"] = v.witness_rank;
    }
    j["subsets_checked"] = v.subsets_checked.get_str();
    j["clean_depth"] = v.clean_depth;
    json mins = json::object();
    json status = json::object();
    for (const auto& [size, stats] : v.per_size) {
        mins[std::to_string(size)] = stats.min_rank;
        status[std::to_string(size)] = stats.exact ? "exact" : "sampled";
    }
    j["per_size_min_rank"] = std::move(mins);
    j["per_size_status"] = std::move(status);
    return j;
}

int verdict_exit(mms::VerdictKind kind) {
    switch (kind) {
        case mms::VerdictKind::proven: return kExitSuccess;
        case mms::VerdictKind::refuted: return kExitNegative;
        case mms::VerdictKind::inconclusive: return kExitBudget;
    }
    return kExitUsage;
}

json square_to_json(const mms::Square& z) {
    json rows = json::array();
    for (int i = 1; i <= z.order; ++i) {
        json row = json::array();
        for (int j = 1; j <= z.order; ++j) row.push_back(z.at(i, j).get_str());
        rows.push_back(std::move(row));
    }
    return json{{"order", z.order}, {"rows", std::move(rows)}};
}

mms::ScanOptions scan_options(std::uint64_t budget, std::uint64_t samples, const CommonOptions& common,
                              const std::string& mode) {
    mms::ScanOptions opts;
    opts.budget = budget;
    opts.samples_per_size = samples;
    opts.seed = common.seed;
    opts.threads = common.threads;
    if (mode == "exhaustive")
        opts.mode = mms::ScanMode::exhaustive;
    else if (mode == "sampled")
        opts.mode = mms::ScanMode::sampled;
    else
        opts.mode = mms::ScanMode::automatic;
    return opts;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact machinery for multimagic square systems: coefficient matrices, "
                 "rank domination, basis partitions, and solution counting"};
    app.require_subcommand(1);

    int exit_code = kExitSuccess;

    // ----- construct ------------------------------------------------------
    auto* construct = app.add_subcommand("construct", "emit the magic coefficient matrix");
    int construct_order = 0;
    std::string construct_ordering = "row-major";
    CommonOptions construct_common;
    construct->add_option("--order", construct_order, "square order N >= 3")->required();
    construct->add_option("--ordering", construct_ordering, "cell ordering: row-major|column-major")
        ->check(CLI::IsMember({"row-major", "column-major"}))
        ->capture_default_str();
    add_common(construct, construct_common);
    construct->callback([&] {
        mms::CellOrdering phi = construct_ordering == "column-major"
                                    ? mms::CellOrdering::column_major(construct_order)
                                    : mms::CellOrdering::row_major(construct_order);
        mms::IntMatrix c = mms::magic_matrix(mms::MagicSystem(construct_order, {1}, phi));
        json report = mms::matrix_to_json(c);
        report["config"] = {{"subcommand", "construct"},
                            {"order", construct_order},
                            {"ordering", construct_ordering}};
        emit(report, construct_common);
    });

    // ----- rank -----------------------------------------------------------
    auto* rank_cmd = app.add_subcommand("rank", "exact rank of a matrix file");
    std::string rank_matrix;
    CommonOptions rank_common;
    rank_cmd->add_option("--matrix", rank_matrix, "matrix JSON file")->required();
    add_common(rank_cmd, rank_common);
    rank_cmd->callback([&] {
        mms::IntMatrix c = load_matrix(rank_matrix);
        json report;
        report["rank"] = mms::rank(c);
        report["rows"] = c.rows();
        report["cols"] = c.cols();
        report["config"] = {{"subcommand", "rank"}, {"matrix", rank_matrix}};
        emit(report, rank_common);
    });

    // ----- profile --------------------------------------------------------
    auto* profile = app.add_subcommand("profile", "minimum subset rank per cardinality");
    std::string profile_matrix;
    int profile_max_card = -1;
    std::uint64_t profile_budget = 1ull << 20;
    std::uint64_t profile_samples = 100000;
    CommonOptions profile_common;
    profile->add_option("--matrix", profile_matrix, "matrix JSON file")->required();
    profile->add_option("--max-card", profile_max_card, "largest cardinality (default: all columns)");
    profile->add_option("--budget", profile_budget, "rank evaluation budget")->capture_default_str();
    profile->add_option("--samples", profile_samples, "samples per cardinality beyond the budget")
        ->capture_default_str();
    add_common(profile, profile_common);
    profile->callback([&] {
        mms::IntMatrix c = load_matrix(profile_matrix);
        int max_card = profile_max_card < 0 ? c.cols() : profile_max_card;
        auto prof = mms::rank_profile(c, max_card,
                                      scan_options(profile_budget, profile_samples, profile_common, "auto"));
        json entries = json::object();
        for (const auto& [size, entry] : prof)
            entries[std::to_string(size)] = {{"min_rank", entry.min_rank},
                                             {"status", entry.exact ? "exact" : "sampled"},
                                             {"established", entry.established.get_str()}};
        json report;
        report["profile"] = std::move(entries);
        report["config"] = {{"subcommand", "profile"}, {"matrix", profile_matrix},
                            {"max_card", max_card},   {"budget", profile_budget},
                            {"samples", profile_samples}, {"seed", profile_common.seed},
                            {"threads", profile_common.threads}};
        emit(report, profile_common);
    });

    // ----- dominates ------------------------------------------------------
    auto* dom = app.add_subcommand("dominates", "does the matrix dominate a rank threshold");
    std::string dom_matrix;
    std::string dom_function = "threshold";
    std::string dom_mode = "auto";
    std::uint64_t dom_budget = 1ull << 20;
    std::uint64_t dom_samples = 100000;
    CommonOptions dom_common;
    dom->add_option("--matrix", dom_matrix, "matrix JSON file")->required();
    dom->add_option("--function", dom_function,
                    "threshold (three-piece, from matrix shape) or floor:c (single piece)")
        ->capture_default_str();
    dom->add_option("--mode", dom_mode, "auto|exhaustive|sampled")
        ->check(CLI::IsMember({"auto", "exhaustive", "sampled"}))
        ->capture_default_str();
    dom->add_option("--budget", dom_budget, "rank evaluation budget")->capture_default_str();
    dom->add_option("--samples", dom_samples, "samples per cardinality in sampled mode")
        ->capture_default_str();
    add_common(dom, dom_common);
    dom->callback([&] {
        mms::IntMatrix c = load_matrix(dom_matrix);
        mms::ThresholdFunction f = [&] {
            if (dom_function == "threshold")
                return mms::threshold_function(c.rows(), c.cols());
            if (dom_function.rfind("floor:", 0) == 0)
                return mms::partition_bound_function(c.rows(), std::stol(dom_function.substr(6)));
            throw std::invalid_argument("--function must be threshold or floor:c");
        }();
        auto verdict = mms::dominates(c, f, scan_options(dom_budget, dom_samples, dom_common, dom_mode));
        json report = verdict_to_json(verdict);
        report["config"] = {{"subcommand", "dominates"}, {"matrix", dom_matrix},
                            {"function", dom_function},  {"mode", dom_mode},
                            {"budget", dom_budget},      {"samples", dom_samples},
                            {"seed", dom_common.seed},   {"threads", dom_common.threads}};
        emit(report, dom_common);
        exit_code = verdict_exit(verdict.kind);
    });

    // ----- rank-condition ---------------------------------------------------
    auto* rc = app.add_subcommand("rank-condition",
                                  "verify the piecewise rank bound on the magic matrix");
    int rc_order = 0;
    std::uint64_t rc_budget = 1ull << 20;
    std::uint64_t rc_samples = 100000;
    CommonOptions rc_common;
    rc->add_option("--order", rc_order, "square order N >= 4")->required();
    rc->add_option("--budget", rc_budget, "rank evaluation budget")->capture_default_str();
    rc->add_option("--samples", rc_samples, "samples per cardinality beyond the budget")
        ->capture_default_str();
    add_common(rc, rc_common);
    rc->callback([&] {
        auto verdict = mms::check_rank_condition(
            rc_order, scan_options(rc_budget, rc_samples, rc_common, "auto"));
        json report = verdict_to_json(verdict);
        report["config"] = {{"subcommand", "rank-condition"}, {"order", rc_order},
                            {"budget", rc_budget},           {"samples", rc_samples},
                            {"seed", rc_common.seed},        {"threads", rc_common.threads}};
        emit(report, rc_common);
        exit_code = verdict_exit(verdict.kind);
    });

    // ----- partition --------------------------------------------------------
    auto* part = app.add_subcommand("partition", "split columns into disjoint full-rank bases");
    std::string part_matrix;
    int part_blocks = 0;
    CommonOptions part_common;
    part->add_option("--matrix", part_matrix, "matrix JSON file")->required();
    part->add_option("--blocks", part_blocks, "number of bases")->required()->check(CLI::NonNegativeNumber);
    add_common(part, part_common);
    part->callback([&] {
        mms::IntMatrix c = load_matrix(part_matrix);
        json report;
        report["config"] = {{"subcommand", "partition"}, {"matrix", part_matrix}, {"blocks", part_blocks}};
        if (mms::rank(c) < c.rows()) {
            report["found"] = false;
            report["reason"] = "rank-deficient";
            emit(report, part_common);
            exit_code = kExitNegative;
            return;
        }
        auto partition = mms::find_basis_partition(c, part_blocks);
        if (!partition) {
            report["found"] = false;
            emit(report, part_common);
            exit_code = kExitNegative;
            return;
        }
        report["found"] = true;
        report["blocks"] = partition->blocks;
        emit(report, part_common);
    });

    // ----- count ------------------------------------------------------------
    auto* count = app.add_subcommand("count", "count solutions of a diagonal system");
    std::string count_matrix, count_exponents = "1", count_filter = "none";
    std::int64_t count_height = 0;
    CommonOptions count_common;
    count->add_option("--matrix", count_matrix, "matrix JSON file")->required();
    count->add_option("--exponents", count_exponents, "comma-separated exponent set E")
        ->capture_default_str();
    count->add_option("--height", count_height, "height bound P")->required()
        ->check(CLI::NonNegativeNumber);
    count->add_option("--filter", count_filter, "none|distinct|smooth:Q|prime")->capture_default_str();
    add_common(count, count_common);
    count->callback([&] {
        mms::DiagonalSystem sys(load_matrix(count_matrix), parse_exponents(count_exponents));
        mms::Filter filter = mms::Filter::parse(count_filter);
        mms::CountReport r = mms::count_solutions(sys, count_height, filter);
        json report;
        report["height"] = r.height;
        report["total"] = r.total.get_str();
        if (r.distinct_count) report["distinct"] = r.distinct_count->get_str();
        report["method"] = r.method;
        report["filter"] = r.filter;
        report["config"] = {{"subcommand", "count"}, {"matrix", count_matrix},
                            {"exponents", count_exponents}, {"height", count_height},
                            {"filter", count_filter}};
        emit(report, count_common);
    });

    // ----- fit ----------------------------------------------------------------
    auto* fit_cmd = app.add_subcommand("fit", "fit the growth exponent of the count in P");
    std::string fit_matrix, fit_exponents = "1", fit_filter = "none", fit_heights = "25,50,100,200";
    CommonOptions fit_common;
    fit_cmd->add_option("--matrix", fit_matrix, "matrix JSON file")->required();
    fit_cmd->add_option("--exponents", fit_exponents, "comma-separated exponent set E")
        ->capture_default_str();
    fit_cmd->add_option("--heights", fit_heights, "comma-separated ascending heights")
        ->capture_default_str();
    fit_cmd->add_option("--filter", fit_filter, "none|distinct|smooth:Q|prime")->capture_default_str();
    add_common(fit_cmd, fit_common);
    fit_cmd->callback([&] {
        mms::DiagonalSystem sys(load_matrix(fit_matrix), parse_exponents(fit_exponents));
        std::vector<std::int64_t> heights;
        for (unsigned v : parse_exponents(fit_heights)) heights.push_back(v);
        mms::ExponentFit fit = mms::exponent_fit(sys, heights, mms::Filter::parse(fit_filter));
        json points = json::array();
        for (const auto& p : fit.points)
            points.push_back({{"height", p.height}, {"count", p.count.get_str()}, {"used", p.used}});
        json report;
        report["slope"] = fit.slope;
        report["residual_rms"] = fit.residual_rms;
        report["degenerate"] = fit.degenerate;
        report["points"] = std::move(points);
        report["config"] = {{"subcommand", "fit"}, {"matrix", fit_matrix},
                            {"exponents", fit_exponents}, {"heights", fit_heights},
                            {"filter", fit_filter}};
        emit(report, fit_common);
    });

    // ----- verify ---------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "check a square for the multimagic property");
    std::string verify_square_path;
    unsigned verify_degree = 1;
    CommonOptions verify_common;
    verify->add_option("--square", verify_square_path, "square text file")->required();
    verify->add_option("--degree", verify_degree, "check powers k = 1..K")->capture_default_str();
    add_common(verify, verify_common);
    verify->callback([&] {
        mms::Square z = load_square(verify_square_path);
        mms::SquareReport r = mms::verify_square(z, verify_degree);
        json checks = json::array();
        for (const auto& c : r.checks) {
            json entry{{"exponent", c.exponent}, {"magic", c.magic}};
            if (c.constant) entry["constant"] = c.constant->get_str();
            if (c.violation) entry["violation"] = *c.violation;
            checks.push_back(std::move(entry));
        }
        json report;
        report["order"] = r.order;
        report["all_magic"] = r.all_magic;
        report["distinct_entries"] = r.distinct_entries;
        report["checks"] = std::move(checks);
        report["config"] = {{"subcommand", "verify"}, {"square", verify_square_path},
                            {"degree", verify_degree}};
        emit(report, verify_common);
        exit_code = r.all_magic ? kExitSuccess : kExitNegative;
    });

    // ----- search ------------------------------------------------------------------
    auto* search = app.add_subcommand("search", "brute-force multimagic squares in a value range");
    int search_order = 0;
    unsigned search_degree = 1;
    std::int64_t search_min = 0, search_max = 0;
    bool search_distinct = false;
    std::uint64_t search_limit = 1000;
    std::uint64_t search_nodes = 100000000;
    CommonOptions search_common;
    search->add_option("--order", search_order, "square order N")->required();
    search->add_option("--degree", search_degree, "multimagic degree K")->capture_default_str();
    search->add_option("--min", search_min, "smallest entry value")->required();
    search->add_option("--max", search_max, "largest entry value")->required();
    search->add_flag("--distinct", search_distinct, "require pairwise distinct entries");
    search->add_option("--limit", search_limit, "stop after this many squares")->capture_default_str();
    search->add_option("--node-budget", search_nodes, "backtracking node budget")->capture_default_str();
    add_common(search, search_common);
    search->callback([&] {
        mms::SquareSearchOptions opts;
        opts.node_budget = search_nodes;
        opts.max_results = search_limit;
        mms::SquareSearchResult r = mms::brute_force_squares(search_order, search_degree, search_min,
                                                             search_max, search_distinct, opts);
        json squares = json::array();
        for (const auto& z : r.squares) squares.push_back(square_to_json(z));
        json report;
        report["count"] = r.squares.size();
        report["complete"] = r.complete;
        report["nodes"] = r.nodes;
        report["squares"] = std::move(squares);
        report["config"] = {{"subcommand", "search"}, {"order", search_order},
                            {"degree", search_degree}, {"min", search_min},
                            {"max", search_max},       {"distinct", search_distinct},
                            {"limit", search_limit},   {"node_budget", search_nodes}};
        emit(report, search_common);
        if (!r.complete)
            exit_code = kExitBudget;
        else if (r.squares.empty())
            exit_code = kExitNegative;
    });

    // ----- catalog ---------------------------------------------------------------------
    auto* catalog = app.add_subcommand("catalog", "best known multimagic orders");
    unsigned catalog_degree = 2;
    CommonOptions catalog_common;
    catalog->add_option("--degree", catalog_degree, "multimagic degree K >= 2")->required();
    add_common(catalog, catalog_common);
    catalog->callback([&] {
        mms::CatalogEntry entry = mms::best_known_order(catalog_degree);
        json report;
        report["degree"] = catalog_degree;
        report["order"] = entry.order.get_str();
        report["attribution"] = entry.attribution;
        report["config"] = {{"subcommand", "catalog"}, {"degree", catalog_degree}};
        emit(report, catalog_common);
    });

    // ----- thresholds -----------------------------------------------------------------
    auto* thresholds = app.add_subcommand("thresholds", "smallest admissible square orders");
    unsigned thresholds_degree = 0, thresholds_power = 0;
    CommonOptions thresholds_common;
    thresholds->add_option("--degree", thresholds_degree, "multimagic degree K >= 2");
    thresholds->add_option("--power", thresholds_power, "k-th power threshold, k >= 2");
    add_common(thresholds, thresholds_common);
    thresholds->callback([&] {
        if (thresholds_degree == 0 && thresholds_power == 0)
            throw std::invalid_argument("thresholds: provide --degree and/or --power");
        json report;
        if (thresholds_degree > 0)
            report["multimagic"] = std::to_string(mms::multimagic_threshold(thresholds_degree));
        if (thresholds_power > 0)
            report["kth_power"] = mms::kth_power_threshold(thresholds_power).get_str();
        report["config"] = {{"subcommand", "thresholds"}, {"degree", thresholds_degree},
                            {"power", thresholds_power}};
        emit(report, thresholds_common);
    });

    // ----- solubility -------------------------------------------------------------------
    auto* sol = app.add_subcommand("solubility", "nonsingular real and p-adic witness search");
    std::string sol_matrix, sol_exponents = "1";
    std::int64_t sol_prime_bound = 20;
    std::uint64_t sol_attempts = 100000;
    CommonOptions sol_common;
    sol->add_option("--matrix", sol_matrix, "matrix JSON file")->required();
    sol->add_option("--exponents", sol_exponents, "comma-separated exponent set E")
        ->capture_default_str();
    sol->add_option("--prime-bound", sol_prime_bound, "test every prime up to this bound")
        ->capture_default_str();
    sol->add_option("--attempts", sol_attempts, "randomized candidates per prime")
        ->capture_default_str();
    add_common(sol, sol_common);
    sol->callback([&] {
        mms::DiagonalSystem sys(load_matrix(sol_matrix), parse_exponents(sol_exponents));
        mms::SolubilityOptions opts;
        opts.attempts = sol_attempts;
        opts.seed = sol_common.seed;
        mms::SolubilityReport r = mms::solubility_report(sys, sol_prime_bound, opts);
        json primes = json::array();
        for (const auto& p : r.padic) {
            json entry{{"prime", p.prime},
                       {"found", p.witness.has_value()},
                       {"search_exhaustive", p.search_exhaustive}};
            if (p.witness) {
                json point = json::array();
                for (const mpz_class& v : p.witness->point) point.push_back(v.get_str());
                entry["point"] = std::move(point);
                entry["tau"] = p.witness->tau;
                entry["modulus"] = p.witness->modulus.get_str();
            }
            primes.push_back(std::move(entry));
        }
        json report;
        report["evidence_positive"] = r.evidence_positive;
        report["padic"] = std::move(primes);
        if (r.real) {
            json point = json::array();
            for (const mpq_class& v : r.real->point) point.push_back(v.get_str());
            report["real"] = {{"point", std::move(point)},
                              {"residual", r.real->residual},
                              {"jacobian_sigma_min", r.real->jacobian_sigma_min},
                              {"exact", r.real->exact}};
        }
        report["config"] = {{"subcommand", "solubility"}, {"matrix", sol_matrix},
                            {"exponents", sol_exponents},  {"prime_bound", sol_prime_bound},
                            {"attempts", sol_attempts},    {"seed", sol_common.seed}};
        emit(report, sol_common);
        exit_code = r.evidence_positive ? kExitSuccess : kExitBudget;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    } catch (const mms::BudgetError& e) {
        std::cerr << "budget: " << e.what() << std::endl;
        return kExitBudget;
    } catch (const std::overflow_error& e) {
        std::cerr << "budget: " << e.what() << std::endl;
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return kExitUsage;
    }
    return exit_code;
}
