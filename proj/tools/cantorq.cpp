// Command-line front end for the optimal quantizer library.
//
//   cantorq moments
//   cantorq vn --range 9..13 --format csv
//   cantorq sets --n 10 --enumerate-limit 10
//   cantorq count --range 5..82
//   cantorq evaluate codebook.json --gap 1e-12
//   cantorq genealogy --from 9 --to 12 --format dot
//   cantorq oracle --n 13 --depth 12

#include "cantorq/commands.hpp"

#include "CLI11.hpp"

#include <iostream>
#include <string>

int main(int argc, char** argv) {
    using namespace cantorq;
    using namespace cantorq::cli;

    CLI::App app{"Exact optimal quantization for the nonhomogeneous Cantor distribution"};
    app.require_subcommand(1);

    std::string format = "text";
    std::string gap = "1e-12";
    std::string mode = "exact";
    Options opts;
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json", "csv", "dot"}));
    app.add_option("--enumerate-limit", opts.enumerate_limit, "Largest number of optimal sets to materialize")
        ->check(CLI::PositiveNumber);
    app.add_option("--gap", gap, "Target width of certified distortion bounds (exact rational or decimal)");
    app.add_option("--depth", opts.depth, "Discretization depth for the oracle")->check(CLI::Range(1, 16));
    app.add_option("--mode", mode, "Oracle arithmetic")->check(CLI::IsMember({"exact", "fast"}));

    std::uint64_t n = 0;
    std::string range;
    std::uint64_t from = 0, to = 0;
    std::string ifs;

    auto* moments = app.add_subcommand("moments", "Mean, variance and second moment of P");
    auto* vn = app.add_subcommand("vn", "Exact n-th quantization error");
    auto* sets = app.add_subcommand("sets", "Optimal sets of n-means");
    auto* count = app.add_subcommand("count", "Number of optimal sets of n-means");
    auto* evaluate = app.add_subcommand("evaluate", "Certified distortion of an arbitrary codebook");
    auto* gen = app.add_subcommand("genealogy", "Which optimal sets produce which at the next stage");
    auto* oracle = app.add_subcommand("oracle", "Brute-force check against a discretized measure");

    for (auto* sub : {vn, count}) {
        sub->add_option("--n", n, "Single stage")->check(CLI::PositiveNumber);
        sub->add_option("--range", range, "Stages A..B");
    }
    sets->add_option("--n", n, "Stage")->required()->check(CLI::PositiveNumber);
    oracle->add_option("--n", n, "Number of code points")->required()->check(CLI::PositiveNumber);
    oracle->add_option("--ifs", ifs, "HEURISTIC: non-standard system p1,r1,r2");
    evaluate->add_option("codebook", opts.codebook_file, "JSON codebook file")->required();
    gen->add_option("--from", from, "First stage")->required()->check(CLI::PositiveNumber);
    gen->add_option("--to", to, "Last stage")->required()->check(CLI::PositiveNumber);
    for (auto* sub : {moments, vn, sets, count, evaluate, gen, oracle}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kInputError;
    }

    std::string command = app.get_subcommands().front()->get_name();
    Output out;
    try {
        opts.format = parse_format(format);
        opts.gap = parse_rational(gap);
        opts.mode = mode == "fast" ? OracleMode::fast : OracleMode::exact;
        if (auto* opt = app.get_subcommands().front()->get_option_no_throw("--n"); opt && opt->count() > 0) opts.n = n;
        if (!range.empty()) opts.range = parse_range(range);
        if (gen->parsed()) {
            opts.from = from;
            opts.to = to;
        }
        if (!ifs.empty()) opts.ifs = parse_ifs(ifs);
        out = run(command, opts);
    } catch (const std::exception& e) {
        out = {"", std::string("error: ") + e.what() + "\n", kInputError};
    }
    std::cout << out.out;
    std::cerr << out.err;
    return out.exit_code;
}
