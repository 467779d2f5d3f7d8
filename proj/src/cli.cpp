#include "relspec/cli.hpp"

#include "relspec/dataset.hpp"
#include "relspec/error.hpp"
#include "relspec/generator.hpp"
#include "relspec/index.hpp"
#include "relspec/lint.hpp"
#include "relspec/parser.hpp"
#include "relspec/resolver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace relspec::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

/// Input problem detected before or during loading; carries its exit code.
struct Failure {
    int code;
    std::string message;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure{kParseOrConfigError, "cannot read '" + path + "'"};
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Failure{kParseOrConfigError, "cannot write '" + path.string() + "'"};
    out << content;
}

int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::UnknownDevelopment:
    case ErrorCode::DevelopmentNotPresent:
    case ErrorCode::UnknownRelease:
    case ErrorCode::InvalidIdentifier: return kUnknownEntity;
    default: return kParseOrConfigError;
    }
}

ReleaseId release_arg(const std::string& text) {
    auto r = ReleaseId::parse(text);
    if (!r) throw Failure{kUnknownEntity, "invalid release '" + text + "'"};
    return *r;
}

DevelopmentId dev_arg(const std::string& text) {
    auto d = DevelopmentId::parse(text);
    if (!d) throw Failure{kUnknownEntity, "invalid development '" + text + "'"};
    return *d;
}

/// Options shared by the corpus-reading subcommands.
struct CorpusOptions {
    std::vector<std::string> paths;
    std::string registry;
    std::string lexicon;
    std::string format = "text";

    void add_to(CLI::App* cmd, bool paths_required, bool with_lexicon) {
        auto* p = cmd->add_option("paths", paths, "Specification files");
        if (paths_required) p->required();
        cmd->add_option("--registry", registry, "Development registry file");
        if (with_lexicon) cmd->add_option("--lexicon", lexicon, "Procedure lexicon (JSON)");
        cmd->add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    }

    bool json_output() const { return format == "json"; }

    /// Every referenced path must exist before any work starts.
    void check_paths(const std::vector<std::string>& extra = {}) const {
        std::vector<std::string> all = paths;
        if (!registry.empty()) all.push_back(registry);
        if (!lexicon.empty()) all.push_back(lexicon);
        all.insert(all.end(), extra.begin(), extra.end());
        for (const auto& p : all) {
            if (!p.empty() && !fs::exists(p)) throw Failure{kParseOrConfigError, "no such file: '" + p + "'"};
        }
    }
};

struct Corpus {
    std::vector<SpecDocument> docs;
    DevelopmentRegistry registry;
    Lexicon lexicon;
    std::vector<ParseError> diagnostics; ///< errors and warnings, file-qualified
    bool has_errors = false;
};

Corpus load_corpus(const CorpusOptions& opts) {
    opts.check_paths();
    Corpus c;
    try {
        if (!opts.registry.empty()) c.registry = parse_registry(read_file(opts.registry));
        if (!opts.lexicon.empty()) c.lexicon = load_lexicon(read_file(opts.lexicon));
    } catch (const Error& e) {
        throw Failure{kParseOrConfigError, e.what()};
    }
    std::map<std::string, std::string> path_of;
    for (const auto& path : opts.paths) {
        auto result = parse_document(read_file(path), fs::path(path).stem().string());
        for (auto e : result.errors) {
            e.document = path;
            c.diagnostics.push_back(std::move(e));
        }
        path_of[result.document.name] = path;
        c.docs.push_back(std::move(result.document));
    }
    for (auto e : validate_corpus(c.docs, c.registry)) {
        if (auto it = path_of.find(e.document); it != path_of.end()) e.document = it->second;
        c.diagnostics.push_back(std::move(e));
    }
    for (const auto& e : c.diagnostics) c.has_errors = c.has_errors || !e.is_warning();
    return c;
}

void report_diagnostics(const Corpus& c, std::ostream& err) {
    for (const auto& e : c.diagnostics) err << format_error(e) << '\n';
}

/// Loads a corpus that later stages require to be valid.
Corpus load_valid_corpus(const CorpusOptions& opts, std::ostream& err) {
    Corpus c = load_corpus(opts);
    report_diagnostics(c, err);
    if (c.has_errors) throw Failure{kParseOrConfigError, "corpus has parse errors"};
    return c;
}

json diagnostic_json(const ParseError& e) {
    return {{"document", e.document},
            {"line", e.line},
            {"kind", to_string(e.kind)},
            {"severity", e.is_warning() ? "warning" : "error"},
            {"message", e.message}};
}

std::string join_devs(const std::set<DevelopmentId>& devs) {
    std::string out;
    for (const auto& d : devs) out += (out.empty() ? "" : ",") + d.str();
    return out;
}

void print_diff(const BehaviorDiff& d, bool as_json, std::ostream& out) {
    if (as_json) {
        out << to_json(d).dump() << '\n';
        return;
    }
    out << d.id << ' ' << d.release_a.to_string() << " -> " << d.release_b.to_string();
    if (!d.causes.empty()) out << " [" << join_devs(d.causes) << ']';
    out << '\n';
    for (const auto& s : d.segments) {
        char mark = s.kind == DiffKind::Added ? '+' : s.kind == DiffKind::Removed ? '-' : ' ';
        out << "  " << mark << ' ' << s.text << '\n';
    }
}

void print_entries(const std::vector<IndexEntry>& entries, const std::string& proc, const std::string& release,
                   const char* deployment, bool as_json, std::ostream& out) {
    for (const auto& e : entries) {
        if (as_json) {
            json j{{"procedure", proc}, {"id", e.id}, {"release", release}, {"text", e.text}};
            if (deployment) j["deployment"] = deployment;
            out << j.dump() << '\n';
        } else {
            out << e.id << '\t' << e.text << '\n';
        }
    }
}

LintConfig load_lint_config(const std::string& path) {
    if (path.empty()) return {};
    if (!fs::exists(path)) throw Failure{kParseOrConfigError, "no such file: '" + path + "'"};
    return LintConfig::from_json(read_file(path));
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parse, resolve, lint, index and extract release-tagged specifications", "relspec"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    // validate
    CorpusOptions validate_opts;
    auto* validate = app.add_subcommand("validate", "Parse and cross-check a corpus");
    validate_opts.add_to(validate, true, false);

    // resolve
    CorpusOptions resolve_opts;
    std::string resolve_id, resolve_release, resolve_dep = "Both";
    auto* resolve = app.add_subcommand("resolve", "Materialize one requirement at a release");
    resolve_opts.add_to(resolve, true, false);
    resolve->add_option("--id", resolve_id, "Requirement ID")->required();
    resolve->add_option("--release", resolve_release, "Release, e.g. 01R1")->required();
    resolve->add_option("--deployment", resolve_dep, "SA, NSA or Both")->check(CLI::IsMember({"SA", "NSA", "Both"}));

    // baseline
    CorpusOptions baseline_opts;
    std::string baseline_dev, baseline_out;
    auto* base = app.add_subcommand("baseline", "Delete a development's tags, keeping its behaviour");
    baseline_opts.add_to(base, true, false);
    base->add_option("--dev", baseline_dev, "Development ID")->required();
    base->add_option("--out", baseline_out, "Directory for rewritten documents (default: standard output)");

    // lint
    CorpusOptions lint_opts;
    std::string lint_config, fail_on = "high";
    auto* lint = app.add_subcommand("lint", "Report corpus quality findings");
    lint_opts.add_to(lint, true, true);
    lint->add_option("--config", lint_config, std::string("Lint configuration (default: $") + kConfigEnv + ")");
    lint->add_option("--fail-on", fail_on, "Exit 1 when a finding reaches this severity")
        ->check(CLI::IsMember({"low", "medium", "high", "none"}));

    // index build
    CorpusOptions index_opts;
    std::string index_out;
    auto* index = app.add_subcommand("index", "Index operations");
    index->require_subcommand(1);
    auto* index_build = index->add_subcommand("build", "Build the procedure index");
    index_opts.add_to(index_build, true, true);
    index_build->add_option("-o,--output", index_out, "Index file to write")->required();

    // query
    CorpusOptions query_opts;
    std::string query_index, proc, q_release, q_from, q_to, q_dev, q_dep;
    auto* query = app.add_subcommand("query", "Answer procedure-centred questions");
    query->require_subcommand(1);
    auto add_query = [&](const char* name, const char* help) {
        auto* q = query->add_subcommand(name, help);
        query_opts.add_to(q, false, true);
        q->add_option("--index", query_index, "Prebuilt index (otherwise built from the given paths)");
        q->add_option("--proc", proc, "Procedure name or alias")->required();
        return q;
    };
    auto* q_behavior = add_query("behavior", "How does procedure X behave in release Y?");
    q_behavior->add_option("--release", q_release)->required();
    auto* q_diff = add_query("diff", "What changed in procedure X between releases Y and Z?");
    q_diff->add_option("--from", q_from)->required();
    q_diff->add_option("--to", q_to)->required();
    auto* q_devq = add_query("dev", "How was procedure X modified by development Y?");
    q_devq->add_option("--dev", q_dev)->required();
    auto* q_reqs = add_query("reqs", "Which requirements describe procedure X?");
    auto* q_deploy = add_query("deployment", "How does procedure X behave in SA/NSA?");
    q_deploy->add_option("--deployment", q_dep)->required()->check(CLI::IsMember({"SA", "NSA"}));
    q_deploy->add_option("--release", q_release, "Release (default: latest)");

    // extract
    CorpusOptions extract_opts;
    std::string extract_release, extract_out;
    bool extract_all_releases = false;
    std::size_t min_tokens = DatasetConfig{}.min_tokens;
    auto* extract = app.add_subcommand("extract", "Write per-release datasets");
    extract_opts.add_to(extract, true, false);
    auto* rel_opt = extract->add_option("--release", extract_release, "Single release");
    auto* all_opt = extract->add_flag("--all", extract_all_releases, "Every release in the corpus");
    rel_opt->excludes(all_opt);
    extract->add_option("--out", extract_out, "Output directory")->required();
    extract->add_option("--min-tokens", min_tokens, "Records shorter than this are dropped as headers");

    // gen-corpus
    GeneratorConfig gen;
    std::string gen_out;
    auto* gen_cmd = app.add_subcommand("gen-corpus", "Write a seeded synthetic corpus and its ground truth");
    gen_cmd->add_option("--seed", gen.seed);
    gen_cmd->add_option("--size", gen.size, "Total requirements");
    gen_cmd->add_option("--documents", gen.documents)->check(CLI::Range(1, 99));
    gen_cmd->add_option("--near-dups", gen.near_dups);
    gen_cmd->add_option("--over-length", gen.over_length);
    gen_cmd->add_option("--aliases", gen.alias_usages);
    gen_cmd->add_option("--dispersed", gen.dispersed);
    gen_cmd->add_option("--out", gen_out, "Output directory")->required();

    std::vector<std::string> argv_store{"relspec"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kParseOrConfigError;
    }

    try {
        if (*validate) {
            Corpus c = load_corpus(validate_opts);
            for (const auto& e : c.diagnostics) {
                if (validate_opts.json_output()) out << diagnostic_json(e).dump() << '\n';
                else out << format_error(e) << '\n';
            }
            return c.has_errors ? kParseOrConfigError : kSuccess;
        }

        if (*resolve) {
            Corpus c = load_valid_corpus(resolve_opts, err);
            ReleaseId r = release_arg(resolve_release);
            auto dep = *parse_deployment_filter(resolve_dep);
            for (const auto& doc : c.docs) {
                for (const Requirement* req : all_requirements(doc)) {
                    if (req->id != resolve_id) continue;
                    auto resolved = materialize(*req, r, dep, c.registry);
                    if (!resolved) {
                        err << "requirement " << resolve_id << " is not valid at " << r.to_string() << '\n';
                        return kUnknownEntity;
                    }
                    if (resolve_opts.json_output()) out << to_json(*resolved).dump() << '\n';
                    else out << resolved->text << '\n';
                    return kSuccess;
                }
            }
            err << "unknown requirement " << resolve_id << '\n';
            return kUnknownEntity;
        }

        if (*base) {
            Corpus c = load_valid_corpus(baseline_opts, err);
            DevelopmentId d = dev_arg(baseline_dev);
            if (!c.registry.contains(d)) throw Error(ErrorCode::UnknownDevelopment, "unregistered development " + d.str());
            auto universe = release_universe(c.docs, c.registry);
            std::size_t changed = 0;
            for (std::size_t i = 0; i < c.docs.size(); ++i) {
                bool touched = false;
                for (Requirement* req : all_requirements(c.docs[i])) {
                    const RequirementVersion* open = open_version(*req);
                    if (!open) continue;
                    bool present = false;
                    for_each_dev_block(open->content, [&](const DevBlock& b) { present = present || b.dev == d; });
                    if (!present) continue;
                    *req = baseline(*req, d, c.registry, universe);
                    touched = true;
                    ++changed;
                }
                if (!touched) continue;
                if (baseline_out.empty()) {
                    out << serialize(c.docs[i]);
                } else {
                    fs::create_directories(baseline_out);
                    write_file(fs::path(baseline_out) / fs::path(baseline_opts.paths[i]).filename(), serialize(c.docs[i]));
                }
            }
            if (changed == 0) {
                err << "development " << d.str() << " is not present in any open version\n";
                return kUnknownEntity;
            }
            err << "baselined " << changed << " requirement(s)\n";
            return kSuccess;
        }

        if (*lint) {
            std::string config_path = lint_config;
            if (config_path.empty()) {
                if (const char* env = std::getenv(kConfigEnv)) config_path = env;
            }
            LintConfig config = load_lint_config(config_path);
            Corpus c = load_valid_corpus(lint_opts, err);
            auto findings = lint_corpus(c.docs, c.registry, c.lexicon, config);
            std::optional<Severity> threshold;
            if (fail_on != "none") threshold = parse_severity(fail_on);
            bool exceeded = false;
            for (const auto& f : findings) {
                if (lint_opts.json_output()) out << to_json(f).dump() << '\n';
                else out << format_finding(f) << '\n';
                exceeded = exceeded || (threshold && f.severity >= *threshold);
            }
            return exceeded ? kLintThreshold : kSuccess;
        }

        if (*index_build) {
            Corpus c = load_valid_corpus(index_opts, err);
            SpecIndex ix = build_index(c.docs, c.registry, c.lexicon);
            write_file(index_out, ix.to_json());
            err << "indexed " << ix.requirement_order.size() << " requirement(s) into " << index_out << '\n';
            return kSuccess;
        }

        if (*query) {
            SpecIndex ix;
            if (!query_index.empty()) {
                query_opts.check_paths({query_index});
                ix = SpecIndex::from_json(read_file(query_index));
            } else {
                if (query_opts.paths.empty()) throw Failure{kParseOrConfigError, "query needs --index or corpus paths"};
                Corpus c = load_valid_corpus(query_opts, err);
                ix = build_index(c.docs, c.registry, c.lexicon);
            }
            const bool as_json = query_opts.json_output();
            const std::string canonical = canonical_procedure(ix, proc);

            if (*q_behavior) {
                ReleaseId r = release_arg(q_release);
                print_entries(query_behavior(ix, proc, r), canonical, r.to_string(), nullptr, as_json, out);
            } else if (*q_diff) {
                for (const auto& d : query_release_diff(ix, proc, release_arg(q_from), release_arg(q_to)))
                    print_diff(d, as_json, out);
            } else if (*q_devq) {
                for (const auto& d : query_dev_changes(ix, proc, dev_arg(q_dev))) print_diff(d, as_json, out);
            } else if (*q_reqs) {
                for (const auto& id : query_requirements(ix, proc)) {
                    if (as_json) out << json{{"procedure", canonical}, {"id", id}}.dump() << '\n';
                    else out << id << '\n';
                }
            } else if (*q_deploy) {
                auto dep = *parse_deployment_type(q_dep);
                std::optional<ReleaseId> r;
                if (!q_release.empty()) r = release_arg(q_release);
                std::string shown = r ? r->to_string() : ix.release_universe.empty() ? "" : ix.release_universe.back().to_string();
                print_entries(query_deployment(ix, proc, dep, r), canonical, shown, to_string(dep), as_json, out);
            }
            return kSuccess;
        }

        if (*extract) {
            if (extract_release.empty() && !extract_all_releases)
                throw Failure{kParseOrConfigError, "extract needs --release or --all"};
            Corpus c = load_valid_corpus(extract_opts, err);
            DatasetConfig config;
            config.min_tokens = min_tokens;
            std::vector<ReleaseDataset> sets;
            if (extract_all_releases) sets = extract_all(c.docs, c.registry, config);
            else sets.push_back(extract_release_dataset(c.docs, release_arg(extract_release), c.registry, config));
            fs::create_directories(extract_out);
            for (const auto& s : sets) {
                auto path = fs::path(extract_out) / (s.release.to_string() + ".jsonl");
                write_file(path, s.to_jsonl());
                out << path.string() << '\t' << s.records.size() << " record(s)\n";
            }
            write_file(fs::path(extract_out) / "stats.json", stats_json(sets).dump(2) + "\n");
            return kSuccess;
        }

        if (*gen_cmd) {
            GeneratedCorpus corpus = generate_corpus(gen);
            fs::create_directories(gen_out);
            for (const auto& doc : corpus.docs) write_file(fs::path(gen_out) / (doc.name + ".spec"), serialize(doc));
            write_file(fs::path(gen_out) / "registry.txt", serialize_registry(corpus.registry));
            write_file(fs::path(gen_out) / "lexicon.json", corpus.lexicon_json + "\n");
            write_file(fs::path(gen_out) / "ground_truth.json", corpus.ground_truth.dump(2) + "\n");
            out << "wrote " << corpus.docs.size() << " document(s) to " << gen_out << '\n';
            return kSuccess;
        }
    } catch (const Failure& f) {
        err << "error: " << f.message << '\n';
        return f.code;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kParseOrConfigError;
    }
    return kSuccess;
}

} // namespace relspec::cli
