#pragma once

// Command-line front end: ingest / run / statcheck / report.
// Exit codes: 0 success, 1 warning threshold exceeded, 2 fatal error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "artiq/config.hpp"
#include "artiq/error.hpp"
#include "artiq/ingest.hpp"
#include "artiq/pipeline.hpp"
#include "artiq/report.hpp"
#include "artiq/statparse.hpp"

namespace artiq::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitWarnings = 1;
inline constexpr int kExitFatal = 2;

struct CliConfig {
    RunConfig run;
    std::string input;                  // statcheck: file or directory; report: indicators.jsonl
    std::string format = "json";        // statcheck output format
    std::string export_path;            // ingest: write kept records here
    std::string config_file;
};

// ---------------------------------------------------------------------------
// Config file: TOML-style "key = value" lines; keys are the long flag names
// with '-' or '_'. Sections are ignored.
// ---------------------------------------------------------------------------

namespace detail {

inline std::string key_of(std::string k) {
    std::replace(k.begin(), k.end(), '-', '_');
    return k;
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got '" + v + "'");
}

template <class T>
T to_number(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        T out{};
        if constexpr (std::is_floating_point_v<T>)
            out = static_cast<T>(std::stod(v, &used));
        else
            out = static_cast<T>(std::stoll(v, &used));
        if (used != v.size()) throw std::invalid_argument(v);
        return out;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + v + "'");
    }
}

using Setter = std::function<void(CliConfig&, const std::string& key, const std::vector<std::string>&)>;

inline const std::map<std::string, Setter>& config_setters() {
    auto str = [](std::string RunConfig::*f) -> Setter {
        return [f](CliConfig& c, const std::string&, const std::vector<std::string>& v) {
            c.run.*f = v.empty() ? std::string() : v.front();
        };
    };
    auto flag = [](bool RunConfig::*f) -> Setter {
        return [f](CliConfig& c, const std::string& k, const std::vector<std::string>& v) {
            c.run.*f = v.empty() ? true : to_bool(k, v.front());
        };
    };
    auto list = [](std::vector<std::string> RunConfig::*f) -> Setter {
        return [f](CliConfig& c, const std::string&, const std::vector<std::string>& v) {
            (c.run.*f).clear();
            for (const auto& x : v) {
                std::stringstream ss(x);
                std::string part;
                while (std::getline(ss, part, ','))
                    if (auto t = artiq::detail::trim(part); !t.empty()) (c.run.*f).emplace_back(t);
            }
        };
    };
    static const std::map<std::string, Setter> setters = {
        {"corpus", str(&RunConfig::corpus)},
        {"groups", list(&RunConfig::groups)},
        {"alpha", [](CliConfig& c, const std::string& k, const auto& v) { c.run.alpha = to_number<double>(k, v.at(0)); }},
        {"dictionary", str(&RunConfig::dictionary)},
        {"allowlist", str(&RunConfig::allowlist)},
        {"abbreviations", str(&RunConfig::abbreviations)},
        {"ethics_terms", str(&RunConfig::ethics_terms)},
        {"consent_terms", str(&RunConfig::consent_terms)},
        {"exclusion_rules", str(&RunConfig::exclusion_rules)},
        {"language_filter", flag(&RunConfig::language_filter)},
        {"tails", str(&RunConfig::tails)},
        {"correction", str(&RunConfig::correction)},
        {"force_pairwise", flag(&RunConfig::force_pairwise)},
        {"citation_window",
         [](CliConfig& c, const std::string& k, const auto& v) { c.run.citation_window = to_number<int>(k, v.at(0)); }},
        {"census_year",
         [](CliConfig& c, const std::string& k, const auto& v) { c.run.census_year = to_number<int>(k, v.at(0)); }},
        {"out", str(&RunConfig::out)},
        {"endpoint", str(&RunConfig::endpoint)},
        {"cache_dir", str(&RunConfig::cache_dir)},
        {"enrich", flag(&RunConfig::enrich)},
        {"offline", flag(&RunConfig::offline)},
        {"rate_limit",
         [](CliConfig& c, const std::string& k, const auto& v) { c.run.rate_limit = to_number<double>(k, v.at(0)); }},
        {"formats", list(&RunConfig::formats)},
        {"plots", flag(&RunConfig::plots)},
        {"svg", flag(&RunConfig::svg)},
        {"jobs", [](CliConfig& c, const std::string& k, const auto& v) { c.run.jobs = to_number<unsigned>(k, v.at(0)); }},
        {"max_warnings",
         [](CliConfig& c, const std::string& k, const auto& v) { c.run.max_warnings = to_number<long>(k, v.at(0)); }},
    };
    return setters;
}

} // namespace detail

/// Applies a config file on top of `c`. Unknown keys are errors.
inline void apply_config_file(const std::string& path, CliConfig& c) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(path, ec)) throw ConfigError("config file '" + path + "' not found");
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_file(path);
    } catch (const CLI::Error& e) {
        throw ConfigError("config file '" + path + "': " + e.what());
    }
    const auto& setters = detail::config_setters();
    for (const auto& item : items) {
        if (item.name == "++" || item.name == "--") continue; // section markers
        const auto key = detail::key_of(item.name);
        const auto it = setters.find(key);
        if (it == setters.end()) throw ConfigError("config file '" + path + "': unknown key '" + item.name + "'");
        it->second(c, key, item.inputs);
    }
}

namespace detail {

inline std::string find_config_arg(int argc, const char* const* argv) {
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--config" && i + 1 < argc) return argv[i + 1];
        if (a.rfind("--config=", 0) == 0) return a.substr(9);
    }
    return {};
}

inline void add_config(CLI::App* sub, CliConfig& c) {
    sub->add_option("--config", c.config_file, "TOML-style key = value file; flags override it");
}

inline void add_corpus_options(CLI::App* sub, CliConfig& c) {
    sub->add_option("corpus,--corpus", c.run.corpus, "Corpus in JSON Lines format")->capture_default_str();
    sub->add_option("--groups", c.run.groups, "Group labels in report order (default: first-seen order)")
        ->delimiter(',');
    sub->add_option("--exclusion-rules", c.run.exclusion_rules, "Extra non-research title keywords, one per line");
    sub->add_flag("--language-filter,!--no-language-filter", c.run.language_filter,
                  "Drop records whose titles do not look English");
}

inline void add_alpha(CLI::App* sub, CliConfig& c) {
    sub->add_option("--alpha", c.run.alpha, "Significance level")->capture_default_str();
}

inline void add_tails(CLI::App* sub, CliConfig& c) {
    sub->add_option("--tails", c.run.tails, "p-value recomputation for t, r and z: one or two")
        ->check(CLI::IsMember({"one", "two"}))
        ->capture_default_str();
}

inline void add_comparison_options(CLI::App* sub, CliConfig& c) {
    add_alpha(sub, c);
    sub->add_option("--correction", c.run.correction, "Pairwise multiplicity correction")
        ->check(CLI::IsMember({"holm", "bonferroni", "none"}))
        ->capture_default_str();
    sub->add_flag("--force-pairwise,!--no-force-pairwise", c.run.force_pairwise,
                  "Run pairwise tests even when the omnibus test is not significant");
    sub->add_option("--out", c.run.out, "Output directory")->capture_default_str();
    sub->add_option("--formats", c.run.formats, "Report formats: json, csv, markdown")
        ->delimiter(',')
        ->check(CLI::IsMember({"json", "csv", "markdown", "md"}));
    sub->add_flag("--plots,!--no-plots", c.run.plots, "Write plots/<indicator>.csv");
    sub->add_flag("--svg,!--no-svg", c.run.svg, "Also write plots/<indicator>.svg");
    sub->add_option("--max-warnings", c.run.max_warnings, "Exit with status 1 above this many warnings (-1: off)")
        ->capture_default_str();
}

inline void add_run_options(CLI::App* sub, CliConfig& c) {
    add_corpus_options(sub, c);
    add_comparison_options(sub, c);
    add_tails(sub, c);
    sub->add_option("--dictionary", c.run.dictionary, "Spelling dictionary, one word per line");
    sub->add_option("--allowlist", c.run.allowlist, "Accepted jargon, one word per line");
    sub->add_option("--abbreviations", c.run.abbreviations, "Abbreviations that do not end sentences");
    sub->add_option("--ethics-terms", c.run.ethics_terms, "Ethics term list");
    sub->add_option("--consent-terms", c.run.consent_terms, "Consent term list");
    sub->add_option("--citation-window", c.run.citation_window, "Citation window in calendar years")
        ->capture_default_str();
    sub->add_option("--census-year", c.run.census_year,
                    "Last year covered by citation data; younger windows become null");
    sub->add_flag("--enrich,!--no-enrich", c.run.enrich, "Fetch authors, references and citations by DOI");
    sub->add_option("--endpoint", c.run.endpoint, "Metadata service base URL")->envname(kEndpointEnvVar);
    sub->add_option("--cache-dir", c.run.cache_dir, "Metadata response cache directory");
    sub->add_flag("--offline,!--online", c.run.offline, "Serve metadata from the cache only");
    sub->add_option("--rate-limit", c.run.rate_limit, "Maximum metadata requests per second")
        ->capture_default_str();
    sub->add_option("--jobs,-j", c.run.jobs, "Worker threads (0: number of cores)")->capture_default_str();
}

inline std::vector<std::filesystem::path> statcheck_inputs(const std::string& input) {
    namespace fs = std::filesystem;
    std::error_code ec;
    if (fs::is_directory(input, ec)) {
        std::vector<fs::path> files;
        for (const auto& e : fs::directory_iterator(input, ec))
            if (!e.is_directory()) files.push_back(e.path());
        std::sort(files.begin(), files.end());
        return files;
    }
    if (!fs::exists(input, ec)) throw IoError("input '" + input + "' not found");
    return {fs::path(input)};
}

inline std::string csv_field(const std::string& s) { return artiq::detail::csv_escape(s); }

} // namespace detail

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

inline int cmd_ingest(const CliConfig& c, std::ostream& out, std::ostream& err) {
    validate(c.run);
    const auto o = ingest(c.run);
    for (const auto& e : o.line_errors) err << "warning: line " << e.line << ": " << e.message << "\n";
    for (const auto& d : o.dropped)
        for (const auto& v : d.violations)
            err << "warning: line " << d.line << " (" << d.id << "): " << v.field << ": " << v.message << "\n";
    out << ingest_summary(o) << "\n";
    if (!o.line_errors.empty() || !o.dropped.empty())
        out << "dropped " << o.line_errors.size() + o.dropped.size() << " invalid line(s)\n";
    for (const auto& g : o.corpus.groups()) out << "  " << g << ": " << o.corpus.group_size(g) << "\n";
    if (!c.export_path.empty()) {
        std::string text;
        for (const auto& r : o.corpus.records()) text += to_json(r).dump() + "\n";
        artiq::detail::write_text(c.export_path, text);
    }
    const auto warnings = static_cast<long>(o.line_errors.size() + o.dropped.size());
    return c.run.max_warnings >= 0 && warnings > c.run.max_warnings ? kExitWarnings : kExitOk;
}

inline int cmd_run(const CliConfig& c, std::ostream& out, std::ostream& err) {
    const auto s = run_pipeline(c.run, [&](const std::string& w) { err << "warning: " << w << "\n"; });
    out << "analysed " << s.kept << " of " << s.loaded << " articles (excluded " << s.excluded << ")\n";
    if (s.enrichment)
        out << "metadata: matched " << s.enrichment->matched << ", unmatched " << s.enrichment->unmatched.size()
            << ", errors " << s.enrichment->fetch_errors.size() + s.enrichment->parse_errors.size() << "\n";
    out << "wrote " << s.written.size() << " files to " << c.run.out << "\n";
    if (s.warnings) out << s.warnings << " warning(s)\n";
    return c.run.max_warnings >= 0 && static_cast<long>(s.warnings) > c.run.max_warnings ? kExitWarnings : kExitOk;
}

inline int cmd_statcheck(const CliConfig& c, std::ostream& out, std::ostream& err) {
    if (!(c.run.alpha > 0.0 && c.run.alpha < 1.0)) throw ConfigError("alpha must lie in (0, 1)");
    const StatcheckOptions opts{c.run.alpha, parse_tails(c.run.tails)};
    const auto files = detail::statcheck_inputs(c.input);
    long warnings = 0;

    nlohmann::ordered_json docs = nlohmann::ordered_json::array();
    std::ostringstream csv;
    csv << "document,kind,df1,df2,n,value,comparator,p_reported,p_recomputed,status,text\n";
    for (const auto& f : files) {
        nlohmann::ordered_json d;
        d["document"] = f.string();
        std::string text;
        try {
            text = artiq::detail::read_file(f.string());
        } catch (const IoError& e) {
            err << "warning: " << e.what() << "\n";
            ++warnings;
            d["error"] = e.what();
            d["tests"] = nlohmann::ordered_json::array();
            docs.push_back(std::move(d));
            continue;
        }
        auto tests = nlohmann::ordered_json::array();
        for (const auto& ct : check_text(text, opts)) {
            tests.push_back(to_json(ct));
            const auto& t = ct.test;
            csv << detail::csv_field(f.string()) << ',' << to_string(t.kind) << ','
                << (t.kind == TestKind::z ? std::string() : artiq::detail::num(t.df1)) << ','
                << (t.df2 ? artiq::detail::num(*t.df2) : std::string()) << ','
                << (t.n ? std::to_string(*t.n) : std::string()) << ',' << artiq::detail::num(t.value) << ','
                << to_string(t.comparator) << ',' << artiq::detail::num(t.p_reported) << ','
                << (ct.verdict ? artiq::detail::num(ct.verdict->p_recomputed) : std::string()) << ','
                << (ct.verdict ? to_string(ct.verdict->status) : "invalid") << ','
                << detail::csv_field(render(t)) << '\n';
        }
        d["tests"] = std::move(tests);
        docs.push_back(std::move(d));
    }
    if (c.format == "csv") {
        out << csv.str();
    } else {
        nlohmann::ordered_json j;
        j["alpha"] = c.run.alpha;
        j["tails"] = c.run.tails;
        j["documents"] = std::move(docs);
        out << j.dump(2) << "\n";
    }
    return c.run.max_warnings >= 0 && warnings > c.run.max_warnings ? kExitWarnings : kExitOk;
}

inline int cmd_report(const CliConfig& c, std::ostream& out, std::ostream& err) {
    validate(c.run, false);
    const auto vectors = read_indicators_jsonl(c.input);
    const auto groups = c.run.groups.empty() ? groups_of(vectors) : c.run.groups;
    std::vector<std::filesystem::path> written;
    const auto warnings = write_outputs(vectors, groups, c.run, written);
    for (const auto& w : warnings) err << "warning: " << w << "\n";
    out << "wrote " << written.size() << " files to " << c.run.out << "\n";
    return c.run.max_warnings >= 0 && static_cast<long>(warnings.size()) > c.run.max_warnings ? kExitWarnings
                                                                                               : kExitOk;
}

// ---------------------------------------------------------------------------
// Entry point
// ---------------------------------------------------------------------------

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CliConfig c;
    try {
        if (const auto path = detail::find_config_arg(argc, argv); !path.empty()) apply_config_file(path, c);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }

    CLI::App app{"Quality indicators for scholarly article corpora", "artiq"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    auto* ingest_cmd = app.add_subcommand("ingest", "Load, validate and filter a corpus; print exclusion counts");
    detail::add_config(ingest_cmd, c);
    detail::add_corpus_options(ingest_cmd, c);
    ingest_cmd->add_option("--export", c.export_path, "Write the kept records as JSON Lines");
    ingest_cmd->add_option("--max-warnings", c.run.max_warnings, "Exit with status 1 above this many warnings")
        ->capture_default_str();

    auto* run_cmd = app.add_subcommand("run", "Full pipeline: indicators, group comparisons, reports");
    detail::add_config(run_cmd, c);
    detail::add_run_options(run_cmd, c);

    auto* stat_cmd = app.add_subcommand("statcheck", "Recompute p-values of APA-style statistics in text files");
    detail::add_config(stat_cmd, c);
    stat_cmd->add_option("input", c.input, "Text file or directory of text files")->required();
    detail::add_alpha(stat_cmd, c);
    detail::add_tails(stat_cmd, c);
    stat_cmd->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    stat_cmd->add_option("--max-warnings", c.run.max_warnings, "Exit with status 1 above this many unreadable files")
        ->capture_default_str();

    auto* report_cmd = app.add_subcommand("report", "Recompute comparisons and reports from indicators.jsonl");
    detail::add_config(report_cmd, c);
    report_cmd->add_option("indicators", c.input, "indicators.jsonl written by 'run'")->required();
    report_cmd->add_option("--groups", c.run.groups, "Group labels in report order")->delimiter(',');
    detail::add_comparison_options(report_cmd, c);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitFatal;
    }

    try {
        if (ingest_cmd->parsed()) return cmd_ingest(c, out, err);
        if (run_cmd->parsed()) return cmd_run(c, out, err);
        if (stat_cmd->parsed()) return cmd_statcheck(c, out, err);
        if (report_cmd->parsed()) return cmd_report(c, out, err);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitFatal;
    }
    return kExitFatal;
}

} // namespace artiq::cli
