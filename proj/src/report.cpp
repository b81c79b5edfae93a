#include <sstream>

#include "fibsite/cli.hpp"
#include "fibsite/errors.hpp"

namespace fibsite::cli {

using nlohmann::ordered_json;

bool Report::pass() const {
    for (const auto& v : verdicts) {
        if (!v.pass) return false;
    }
    return true;
}

ordered_json group_json(const FgAbelianGroup& g) {
    ordered_json factors = ordered_json::array();
    for (const auto& f : g.factors) {
        if (f > std::numeric_limits<std::int64_t>::max()) {
            factors.push_back(f.str());
        } else {
            factors.push_back(static_cast<std::int64_t>(f));
        }
    }
    return factors;
}

namespace {

ordered_json to_json(const Report& r) {
    ordered_json j;
    j["schema"] = report_schema;
    j["command"] = r.command;
    j["inputs"] = {{"files", r.files}, {"sha256", r.input_hash}};
    j["options"] = r.options;
    j["pass"] = r.pass();
    ordered_json verdicts = ordered_json::array();
    for (const auto& v : r.verdicts) verdicts.push_back({{"name", v.name}, {"pass", v.pass}, {"detail", v.detail}});
    j["verdicts"] = std::move(verdicts);
    j["payload"] = r.payload;
    if (!r.timings.empty()) {
        ordered_json t = ordered_json::object();
        for (const auto& [name, seconds] : r.timings) t[name] = seconds;
        j["timings"] = std::move(t);
    }
    return j;
}

std::string cell(const std::string& key, const ordered_json& v) {
    if (key == "factors" && v.is_array()) {
        FgAbelianGroup g;
        for (const auto& f : v) g.factors.push_back(f.is_string() ? BigInt(f.get<std::string>()) : BigInt(f.get<std::int64_t>()));
        return g.to_string();
    }
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string out;
        for (const auto& e : v) out += (out.empty() ? "" : ", ") + cell("", e);
        return out;
    }
    return v.dump();
}

bool uniform_objects(const ordered_json& a) {
    if (!a.is_array() || a.empty()) return false;
    for (const auto& e : a) {
        if (!e.is_object() || e.size() != a.front().size()) return false;
        auto it = a.front().begin();
        for (auto jt = e.begin(); jt != e.end(); ++jt, ++it) {
            if (jt.key() != it.key()) return false;
        }
    }
    return true;
}

void render(std::ostream& out, const ordered_json& node, int level) {
    const std::string heading(static_cast<std::size_t>(std::min(level, 6)), '#');
    for (auto it = node.begin(); it != node.end(); ++it) {
        const auto& v = it.value();
        if (uniform_objects(v)) {
            out << "\n" << heading << " " << it.key() << "\n\n|";
            for (auto k = v.front().begin(); k != v.front().end(); ++k) out << " " << k.key() << " |";
            out << "\n|";
            for (std::size_t k = 0; k < v.front().size(); ++k) out << "---|";
            out << "\n";
            for (const auto& row : v) {
                out << "|";
                for (auto k = row.begin(); k != row.end(); ++k) out << " " << cell(k.key(), k.value()) << " |";
                out << "\n";
            }
        } else if (v.is_object()) {
            out << "\n" << heading << " " << it.key() << "\n\n";
            render(out, v, level + 1);
        } else {
            out << "- " << it.key() << ": " << cell(it.key(), v) << "\n";
        }
    }
}

std::string to_markdown(const Report& r) {
    std::ostringstream out;
    out << "# " << r.command << "\n\n";
    out << "- schema: " << report_schema << "\n";
    out << "- files: " << cell("", ordered_json(r.files)) << "\n";
    out << "- sha256: " << r.input_hash << "\n";
    for (auto it = r.options.begin(); it != r.options.end(); ++it) out << "- " << it.key() << ": " << cell("", it.value()) << "\n";
    out << "- result: " << (r.pass() ? "pass" : "FAIL") << "\n";
    out << "\n## Verdicts\n\n";
    if (r.verdicts.empty()) {
        out << "(none)\n";
    } else {
        out << "| check | result | detail |\n|---|---|---|\n";
        for (const auto& v : r.verdicts) out << "| " << v.name << " | " << (v.pass ? "pass" : "FAIL") << " | " << v.detail << " |\n";
    }
    if (!r.payload.empty()) {
        out << "\n## Payload\n";
        std::ostringstream body;
        render(body, r.payload, 3);
        const std::string s = body.str();
        out << (s.empty() || s.front() == '\n' ? "" : "\n") << s;
    }
    if (!r.timings.empty()) {
        out << "\n## Timings\n\n| phase | seconds |\n|---|---|\n";
        for (const auto& [name, seconds] : r.timings) out << "| " << name << " | " << ordered_json(seconds).dump() << " |\n";
    }
    return out.str();
}

}  // namespace

std::string emit_report(const Report& r, Format format) {
    if (format == Format::markdown) return to_markdown(r);
    return to_json(r).dump(2) + "\n";
}

Report parse_report(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("report: ") + e.what(), 1, e.byte, "");
    }
    try {
        if (j.at("schema").get<std::string>() != report_schema) throw InputError("report: unsupported schema");
        Report r;
        r.command = j.at("command").get<std::string>();
        r.files = j.at("inputs").at("files").get<std::vector<std::string>>();
        r.input_hash = j.at("inputs").at("sha256").get<std::string>();
        r.options = j.at("options");
        for (const auto& v : j.at("verdicts")) {
            r.verdicts.push_back({v.at("name").get<std::string>(), v.at("pass").get<bool>(), v.at("detail").get<std::string>()});
        }
        r.payload = j.at("payload");
        if (j.contains("timings")) {
            for (auto it = j["timings"].begin(); it != j["timings"].end(); ++it) {
                r.timings.emplace_back(it.key(), it.value().get<double>());
            }
        }
        if (j.at("pass").get<bool>() != r.pass()) throw InputError("report: pass flag disagrees with the verdicts");
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("report: ") + e.what());
    }
}

}  // namespace fibsite::cli
