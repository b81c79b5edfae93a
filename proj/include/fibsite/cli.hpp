#pragma once

// Bundle files, commands over them and their reports.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fibsite/cohom.hpp"
#include "fibsite/fibred.hpp"
#include "fibsite/fincat.hpp"
#include "fibsite/site.hpp"

namespace fibsite::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_verdict_failed = 1,
    exit_parse = 2,
    exit_validation = 3,
    exit_refused = 4,
    exit_cap = 5,
};

struct Cover {
    Index object = npos;
    std::vector<Index> generators;

    bool operator==(const Cover&) const = default;
};

/// Everything declared by one or more bundle files, resolved and validated.
struct Bundle {
    std::vector<std::string> paths;
    std::string content_hash;  // sha256 of the files in order

    std::vector<std::string> category_names;  // declaration order
    std::vector<CategoryRef> categories;
    std::size_t site = 0;       // index into categories
    std::vector<Cover> covers;  // as declared, on the site
    GrothendieckTopology topology;  // generated by the covers

    std::string fibres_name;             // empty when no psheaf-cat is declared
    std::vector<std::size_t> fibre_of;   // per site object: index into categories
    PresheafOfCategoriesRef fibres;
    std::optional<FibredSite> fibred;

    std::string coefficients_name;       // empty when no abpresheaf is declared
    std::string coefficients_over;       // fibres_name or a category name
    std::optional<AbelianPresheaf> coefficients;

    const FiniteCategory& site_category() const { return *categories.at(site); }
};

/// Parses, resolves and validates. Throws ParseError (syntax, unknown names),
/// ValidationError (laws) or InputError (unreadable file).
Bundle parse_bundle(const std::vector<std::string>& paths);
Bundle parse_bundle_text(const std::string& text, const std::string& origin = "<input>");
/// Canonical text; parse_bundle_text(emit_bundle(b)) is equal to b.
std::string emit_bundle(const Bundle& b);
/// Equal declarations, ignoring provenance.
bool same_bundle(const Bundle& a, const Bundle& b);

// ---------------------------------------------------------------------------

inline constexpr const char* report_schema = "fibsite-report/1";

inline const std::vector<std::string>& commands() {
    static const std::vector<std::string> names{"validate", "fibred-build", "topology-check", "sheaf-check",
                                                "cohomology", "cech", "adjunction-check", "invariance-check",
                                                "homology", "nerve-export"};
    return names;
}

struct RunOptions {
    std::uint64_t seed = 1;
    std::size_t truncation = 5;
    std::size_t n_max = 4;
    std::size_t samples = 2;
    std::size_t cap = default_string_cap;
    bool timings = false;
};

struct Verdict {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Report {
    std::string command;
    std::vector<std::string> files;
    std::string input_hash;
    nlohmann::ordered_json options = nlohmann::ordered_json::object();
    std::vector<Verdict> verdicts;
    nlohmann::ordered_json payload = nlohmann::ordered_json::object();
    std::vector<std::pair<std::string, double>> timings;  // seconds; empty unless requested

    bool pass() const;
};

enum class Format { json, markdown };

/// Runs one command. Module errors propagate unchanged.
Report run(const std::string& command, const Bundle& bundle, const RunOptions& options);
std::string emit_report(const Report& r, Format format);
/// Inverse of emit_report(json).
Report parse_report(const std::string& json);

/// Invariant factors, 0 for an infinite cyclic factor.
nlohmann::ordered_json group_json(const FgAbelianGroup& g);

/// The command-line tool: args exclude the program name. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fibsite::cli
