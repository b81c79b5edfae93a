#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <ostream>

#include "fibsite/cli.hpp"
#include "fibsite/errors.hpp"

namespace fibsite::cli {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite fibred sites: Grothendieck constructions, topologies, homotopy colimits and stack cohomology",
                 "fibsite"};
    std::string command;
    std::vector<std::string> files;
    RunOptions options;
    std::string format = "json";
    app.add_option("command", command, "One of: validate fibred-build topology-check sheaf-check cohomology cech "
                                       "adjunction-check invariance-check homology nerve-export")
        ->required()
        ->check(CLI::IsMember(commands()));
    app.add_option("files", files, "Bundle files, read in order")->required();
    app.add_option("--seed", options.seed, "Seed for randomized checks")->capture_default_str();
    app.add_option("--truncation", options.truncation, "Simplicial truncation")->capture_default_str();
    app.add_option("--nmax", options.n_max, "Highest cohomological degree")->capture_default_str();
    app.add_option("--samples", options.samples, "Random samples per section for adjunction-check")->capture_default_str();
    app.add_option("--cap", options.cap, "Largest number of strings or simplices enumerated")->capture_default_str();
    app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "markdown"}))->capture_default_str();
    app.add_flag("--timings", options.timings, "Include wall-clock timings (makes the report nondeterministic)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_parse;
    }
    for (const auto& f : files) {
        if (!std::filesystem::is_regular_file(f)) {
            err << "error: cannot read " << f << "\n";
            return exit_parse;
        }
    }
    try {
        const Bundle bundle = parse_bundle(files);
        const Report report = run(command, bundle, options);
        out << emit_report(report, format == "markdown" ? Format::markdown : Format::json);
        return report.pass() ? exit_ok : exit_verdict_failed;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << "\n";
        return exit_validation;
    } catch (const InputError& e) {
        err << "invalid input: " << e.what() << "\n";
        return exit_validation;
    } catch (const RefusedError& e) {
        err << "refused: " << e.what() << "\n";
        return exit_refused;
    } catch (const CapExceeded& e) {
        err << "cap exceeded: " << e.what() << "\n";
        return exit_cap;
    }
}

}  // namespace fibsite::cli
