#pragma once

#include "wedgelab/config.hpp"

#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>

namespace wedgelab::app {

/// One verification record: which identity was checked, where it comes
/// from in the source text, how wrong it was, and the pinned tolerance.
struct Record {
    std::string suite;
    std::string check;
    std::string anchor;
    double residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool informational = false; // model properties, not artifact fail:
                                // excluded from the mandatory verdict
    std::string note;
};

inline Record make_record(std::string suite, std::string check, std::string anchor, double residual,
                          double tolerance, bool informational = false, std::string note = "")
{
    Record r;
    r.suite = std::move(suite);
    r.check = std::move(check);
    r.anchor = std::move(anchor);
    r.residual = residual;
    r.tolerance = tolerance;
    r.pass = residual <= tolerance;
    r.informational = informational;
    r.note = std::move(note);
    return r;
}

/// A boolean check rendered as a residual record (0 = pass, 1 = fail).
inline Record make_flag_record(std::string suite, std::string check, std::string anchor, bool ok,
                               bool informational = false, std::string note = "")
{
    return make_record(std::move(suite), std::move(check), std::move(anchor), ok ? 0.0 : 1.0, 0.5,
                       informational, std::move(note));
}

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

struct Report {
    std::map<std::string, std::string> config_echo;
    std::vector<Record> records;
    std::map<std::string, Table> tables;
    std::vector<std::string> skipped; // "suite: reason"
    std::string timestamp;

    bool overall_pass() const
    {
        for (const auto& r : records)
            if (!r.informational && !r.pass) return false;
        return true;
    }
};

inline std::string current_timestamp()
{
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

/// JSON serialization; `with_timestamp = false` yields the canonical form
/// used for the byte-identical determinism comparison.
inline nlohmann::ordered_json to_json(const Report& rep, bool with_timestamp = true)
{
    nlohmann::ordered_json j;
    j["schema_version"] = 1;
    if (with_timestamp) j["generated_at"] = rep.timestamp;
    j["config"] = rep.config_echo;
    nlohmann::ordered_json recs = nlohmann::ordered_json::array();
    for (const auto& r : rep.records) {
        nlohmann::ordered_json jr;
        jr["suite"] = r.suite;
        jr["check"] = r.check;
        jr["anchor"] = r.anchor;
        jr["residual"] = r.residual;
        jr["tolerance"] = r.tolerance;
        jr["pass"] = r.pass;
        jr["informational"] = r.informational;
        if (!r.note.empty()) jr["note"] = r.note;
        recs.push_back(jr);
    }
    j["records"] = recs;
    nlohmann::ordered_json tabs = nlohmann::ordered_json::object();
    for (const auto& [name, table] : rep.tables) {
        nlohmann::ordered_json jt;
        jt["header"] = table.header;
        jt["rows"] = table.rows;
        tabs[name] = jt;
    }
    j["tables"] = tabs;
    j["skipped"] = rep.skipped;
    j["overall_pass"] = rep.overall_pass();
    return j;
}

inline Report report_from_json(const nlohmann::ordered_json& j)
{
    Report rep;
    rep.timestamp = j.value("generated_at", "");
    rep.config_echo = j.at("config").get<std::map<std::string, std::string>>();
    for (const auto& jr : j.at("records")) {
        Record r;
        r.suite = jr.at("suite");
        r.check = jr.at("check");
        r.anchor = jr.at("anchor");
        r.residual = jr.at("residual");
        r.tolerance = jr.at("tolerance");
        r.pass = jr.at("pass");
        r.informational = jr.at("informational");
        r.note = jr.value("note", "");
        rep.records.push_back(r);
    }
    if (j.contains("tables"))
        for (const auto& [name, jt] : j.at("tables").items()) {
            Table t;
            t.header = jt.at("header").get<std::vector<std::string>>();
            t.rows = jt.at("rows").get<std::vector<std::vector<double>>>();
            rep.tables[name] = t;
        }
    rep.skipped = j.value("skipped", std::vector<std::string>{});
    return rep;
}

inline std::string csv_escape(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

/// CSV exports: one residual table plus one file per scan table.
inline std::vector<std::string> export_csv(const Report& rep, const std::string& dir)
{
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    std::vector<std::string> written;

    {
        const std::string path = (fs::path(dir) / "records.csv").string();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << "suite,check,anchor,residual,tolerance,pass,informational\n";
        out << std::setprecision(17);
        for (const auto& r : rep.records)
            out << csv_escape(r.suite) << ',' << csv_escape(r.check) << ',' << csv_escape(r.anchor)
                << ',' << r.residual << ',' << r.tolerance << ',' << (r.pass ? 1 : 0) << ','
                << (r.informational ? 1 : 0) << '\n';
        written.push_back(path);
    }
    for (const auto& [name, table] : rep.tables) {
        const std::string path = (fs::path(dir) / (name + ".csv")).string();
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        for (std::size_t k = 0; k < table.header.size(); ++k)
            out << (k ? "," : "") << csv_escape(table.header[k]);
        out << '\n';
        out << std::setprecision(17);
        for (const auto& row : table.rows) {
            for (std::size_t k = 0; k < row.size(); ++k) out << (k ? "," : "") << row[k];
            out << '\n';
        }
        written.push_back(path);
    }
    return written;
}

} // namespace wedgelab::app
