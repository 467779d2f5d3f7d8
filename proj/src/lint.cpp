#include "relspec/lint.hpp"
#include "relspec/error.hpp"
#include "relspec/resolver.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <tuple>

namespace relspec {

const char* to_string(LintRule rule) {
    switch (rule) {
    case LintRule::L1_Duplication: return "L1_Duplication";
    case LintRule::L2_Length: return "L2_Length";
    case LintRule::L3_Standardization: return "L3_Standardization";
    case LintRule::L4_Grammar: return "L4_Grammar";
    case LintRule::L5_Dispersion: return "L5_Dispersion";
    }
    return "?";
}

const char* to_string(Severity severity) {
    switch (severity) {
    case Severity::Low: return "Low";
    case Severity::Medium: return "Medium";
    case Severity::High: return "High";
    }
    return "?";
}

std::optional<Severity> parse_severity(std::string_view text) {
    auto lower = detail::to_lower(text);
    if (lower == "low")
        return Severity::Low;
    if (lower == "medium")
        return Severity::Medium;
    if (lower == "high")
        return Severity::High;
    return std::nullopt;
}

Severity severity_of(LintRule rule) {
    switch (rule) {
    case LintRule::L1_Duplication:
    case LintRule::L2_Length:
    case LintRule::L3_Standardization: return Severity::High;
    case LintRule::L4_Grammar: return Severity::Medium;
    case LintRule::L5_Dispersion: return Severity::Low;
    }
    return Severity::Low;
}

void LintConfig::validate() const {
    if (shingle_k < 2)
        throw Error(ErrorCode::InvalidConfig, "shingle_k must be at least 2");
    if (!(dup_threshold > 0.0 && dup_threshold <= 1.0))
        throw Error(ErrorCode::InvalidConfig, "dup_threshold must be in (0, 1]");
    if (max_tokens == 0)
        throw Error(ErrorCode::InvalidConfig, "max_tokens must be positive");
    if (max_procedures < 1)
        throw Error(ErrorCode::InvalidConfig, "max_procedures must be at least 1");
    if (max_sections < 1)
        throw Error(ErrorCode::InvalidConfig, "max_sections must be at least 1");
}

LintConfig LintConfig::from_json(std::string_view source) {
    LintConfig config;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(source);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidConfig, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object())
        throw Error(ErrorCode::InvalidConfig, "config must be a JSON object");
    auto read_count = [&](const std::string& key, const nlohmann::json& v) {
        if (!v.is_number_integer() || v.get<long long>() < 0)
            throw Error(ErrorCode::InvalidConfig, key + " must be a non-negative integer");
        return static_cast<std::size_t>(v.get<long long>());
    };
    for (const auto& [key, value] : j.items()) {
        if (key == "shingle_k") {
            config.shingle_k = read_count(key, value);
        } else if (key == "dup_threshold") {
            if (!value.is_number())
                throw Error(ErrorCode::InvalidConfig, "dup_threshold must be a number");
            config.dup_threshold = value.get<double>();
        } else if (key == "max_tokens") {
            config.max_tokens = read_count(key, value);
        } else if (key == "max_procedures") {
            config.max_procedures = read_count(key, value);
        } else if (key == "max_sections") {
            config.max_sections = read_count(key, value);
        } else if (key == "rules") {
            if (!value.is_object())
                throw Error(ErrorCode::InvalidConfig, "rules must be an object");
            for (const auto& [rule, flag] : value.items()) {
                static const std::array<const char*, 5> names{"L1", "L2", "L3", "L4", "L5"};
                auto it = std::find(names.begin(), names.end(), rule);
                if (it == names.end() || !flag.is_boolean())
                    throw Error(ErrorCode::InvalidConfig, "rules." + rule + " must be one of L1..L5 with a boolean");
                config.enabled[static_cast<std::size_t>(it - names.begin())] = flag.get<bool>();
            }
        } else {
            throw Error(ErrorCode::InvalidConfig, "unknown config key '" + key + "'");
        }
    }
    config.validate();
    return config;
}

namespace {

std::string join_path(const std::vector<std::string>& path) {
    std::string out;
    for (const auto& p : path) {
        if (!out.empty())
            out += " / ";
        out += p;
    }
    return out;
}

Location location_of(const SpecDocument& doc, const Requirement& req, const RequirementVersion* v) {
    return Location{doc.name, req.id, v ? v->range_string() : std::string(), join_path(req.section_path)};
}

LintFinding make_finding(LintRule rule, std::string check, Location loc, std::string message,
                         std::optional<double> score = std::nullopt) {
    LintFinding f{rule, severity_of(rule), std::move(check), std::move(loc), std::nullopt, {}, std::move(message),
                  score};
    return f;
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 1469598103934665603ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

struct Item {
    std::size_t doc;
    const Requirement* req;
    const RequirementVersion* version;
    std::size_t order; ///< requirement position in corpus order
    TokenList tokens;  ///< normalized
    std::vector<std::uint64_t> shingles;
};

std::set<std::string> identifiers(const TokenList& tokens) {
    std::set<std::string> out;
    for (const auto& t : tokens)
        if (t.kind == TokenKind::Identifier)
            out.insert(t.text);
    return out;
}

bool prefix_related(const std::string& a, const std::string& b) {
    return a.size() < b.size() ? b.compare(0, a.size(), a) == 0 : a.compare(0, b.size(), b) == 0;
}

/// The identifier sets differ, and only by names being suffix extensions of one another.
/// Returns the first renamed pair.
std::optional<std::pair<std::string, std::string>> renamed_parameter(const TokenList& a, const TokenList& b) {
    auto ia = identifiers(a);
    auto ib = identifiers(b);
    std::vector<std::string> only_a, only_b;
    std::set_difference(ia.begin(), ia.end(), ib.begin(), ib.end(), std::back_inserter(only_a));
    std::set_difference(ib.begin(), ib.end(), ia.begin(), ia.end(), std::back_inserter(only_b));
    if (only_a.empty() || only_b.empty())
        return std::nullopt;
    auto covered = [](const std::vector<std::string>& xs, const std::vector<std::string>& ys) {
        return std::all_of(xs.begin(), xs.end(), [&](const std::string& x) {
            return std::any_of(ys.begin(), ys.end(), [&](const std::string& y) { return prefix_related(x, y); });
        });
    };
    if (!covered(only_a, only_b) || !covered(only_b, only_a))
        return std::nullopt;
    return std::make_pair(only_a.front(), only_b.front());
}

std::string format_score(double v) {
    std::ostringstream out;
    out.precision(3);
    out << std::fixed << v;
    return out.str();
}

} // namespace

std::string latest_text(const Requirement& req, const RequirementVersion& version, const DevelopmentRegistry& reg,
                        const ReleaseUniverse& universe) {
    auto r = latest_release_in(universe, version).value_or(version.first_release);
    auto resolved = materialize(req, r, DeploymentFilter::Both, reg);
    return resolved ? resolved->text : std::string();
}

std::vector<std::uint64_t> shingle_hashes(const TokenList& normalized, std::size_t k) {
    std::vector<std::uint64_t> out;
    if (normalized.empty())
        return out;
    const std::size_t width = std::min(k, normalized.size());
    for (std::size_t i = 0; i + width <= normalized.size(); ++i) {
        std::uint64_t h = 1469598103934665603ULL;
        for (std::size_t j = i; j < i + width; ++j) {
            h = fnv1a(normalized[j].text, h);
            h = fnv1a("\x1f", h);
        }
        out.push_back(h);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double jaccard(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    if (a.empty() && b.empty())
        return 0.0;
    std::size_t inter = 0;
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++inter;
            ++i;
            ++j;
        }
    }
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

std::vector<LintFinding> detect_duplication(const std::vector<SpecDocument>& docs, const DevelopmentRegistry& reg,
                                            const LintConfig& config) {
    const auto universe = release_universe(docs, reg);
    std::vector<Item> items;
    std::size_t order = 0;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto* req : all_requirements(docs[d])) {
            for (const auto& v : req->versions) {
                auto tokens = normalize(tokenize(latest_text(*req, v, reg, universe)));
                if (tokens.empty())
                    continue;
                auto shingles = shingle_hashes(tokens, config.shingle_k);
                items.push_back(Item{d, req, &v, order, std::move(tokens), std::move(shingles)});
            }
            ++order;
        }
    }

    // shared read-only shingle index: candidates are pairs sharing at least one shingle
    std::map<std::uint64_t, std::vector<std::size_t>> postings;
    for (std::size_t i = 0; i < items.size(); ++i)
        for (auto h : items[i].shingles)
            postings[h].push_back(i);

    struct Best {
        double score;
        std::size_t a;
        std::size_t b;
    };
    std::map<std::pair<std::size_t, std::size_t>, Best> best; // keyed by requirement order
    for (std::size_t i = 0; i < items.size(); ++i) {
        std::set<std::size_t> candidates;
        for (auto h : items[i].shingles)
            for (auto j : postings[h])
                if (j > i && items[j].order != items[i].order)
                    candidates.insert(j);
        for (auto j : candidates) {
            double sim = jaccard(items[i].shingles, items[j].shingles);
            if (sim < config.dup_threshold)
                continue;
            auto key = std::minmax(items[i].order, items[j].order);
            auto [it, inserted] = best.emplace(key, Best{sim, i, j});
            if (!inserted && sim > it->second.score)
                it->second = Best{sim, i, j};
        }
    }

    std::vector<LintFinding> out;
    for (const auto& [key, b] : best) {
        const Item* first = &items[b.a];
        const Item* second = &items[b.b];
        if (first->order > second->order)
            std::swap(first, second);
        auto renamed = renamed_parameter(first->tokens, second->tokens);
        auto loc = location_of(docs[first->doc], *first->req, first->version);
        auto rel = location_of(docs[second->doc], *second->req, second->version);
        std::string message = renamed ? "near-duplicate of " + rel.requirement +
                                            " with parameter '" + renamed->first + "' renamed to '" +
                                            renamed->second + "' (similarity " + format_score(b.score) + ")"
                                      : "near-duplicate of " + rel.requirement + " (similarity " +
                                            format_score(b.score) + ")";
        auto f = make_finding(LintRule::L1_Duplication, renamed ? "renamed-parameter" : "near-duplicate", loc,
                              std::move(message), b.score);
        f.related = rel;
        f.locations = {loc, rel};
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<LintFinding> check_length(const SpecDocument& doc, const Requirement& req, const DevelopmentRegistry& reg,
                                      const ReleaseUniverse& universe, const LintConfig& config, const Lexicon& lex) {
    std::vector<LintFinding> out;
    for (const auto& v : req.versions) {
        auto loc = location_of(doc, req, &v);
        auto tokens = tokenize(latest_text(req, v, reg, universe));
        auto count = normalize(tokens).size();
        if (count > config.max_tokens) {
            out.push_back(make_finding(LintRule::L2_Length, "too-long", loc,
                                       std::to_string(count) + " tokens exceeds the limit of " +
                                           std::to_string(config.max_tokens),
                                       static_cast<double>(count)));
        }
        std::set<std::string> procedures;
        for (const auto& m : lex.find_mentions(tokens))
            procedures.insert(m.canonical);
        if (procedures.size() > config.max_procedures) {
            out.push_back(make_finding(LintRule::L2_Length, "too-many-procedures", loc,
                                       "covers " + std::to_string(procedures.size()) + " procedures (limit " +
                                           std::to_string(config.max_procedures) + ")",
                                       static_cast<double>(procedures.size())));
        }
        auto deployments = deployment_sequence(v.content);
        bool sa = std::count(deployments.begin(), deployments.end(), DeploymentType::SA) > 0;
        bool nsa = std::count(deployments.begin(), deployments.end(), DeploymentType::NSA) > 0;
        if (sa && nsa) {
            out.push_back(make_finding(LintRule::L2_Length, "mixed-deployment", loc,
                                       "specifies both SA and NSA behaviour; split into one requirement per "
                                       "deployment type"));
            std::size_t switches = 0;
            for (std::size_t i = 1; i < deployments.size(); ++i)
                if (deployments[i] != deployments[i - 1])
                    ++switches;
            if (switches > 1) {
                out.push_back(make_finding(LintRule::L2_Length, "alternating-deployment", loc,
                                           "deployment behaviour alternates between SA and NSA " +
                                               std::to_string(switches) + " times",
                                           static_cast<double>(switches)));
            }
        }
    }
    return out;
}

std::vector<LintFinding> check_standardization(const std::vector<SpecDocument>& docs, const Lexicon& lex) {
    std::vector<LintFinding> out;
    for (const auto& doc : docs) {
        for (const auto* req : all_requirements(doc)) {
            std::set<std::string> aliases_seen;
            std::set<std::string> tags_seen;
            std::map<std::string, std::set<std::string>> dev_styles;
            std::map<std::string, Location> dev_first;
            for (const auto& v : req->versions) {
                auto loc = location_of(doc, *req, &v);
                for_each_dev_block(v.content, [&](const DevBlock& b) {
                    dev_styles[b.dev.str()].insert("[Before D] [D] [End D]");
                    dev_first.emplace(b.dev.str(), loc);
                });

                auto text = flatten_plain_text(v.content);
                for (const auto& m : lex.find_mentions(tokenize(text))) {
                    if (m.canonical_form || !aliases_seen.insert(m.surface).second)
                        continue;
                    out.push_back(make_finding(LintRule::L3_Standardization, "alias", loc,
                                               "'" + m.surface + "' is an alias; use the canonical name '" +
                                                   m.canonical + "'"));
                }
                for (std::size_t pos = text.find('['); pos != std::string::npos; pos = text.find('[', pos + 1)) {
                    auto tag = match_lenient_tag(text, pos);
                    if (!tag || tag->canonical)
                        continue;
                    auto raw = text.substr(pos, tag->length);
                    bool is_dev = detail::to_lower(tag->target).rfind("cb", 0) == 0;
                    if (is_dev) {
                        std::string upper = tag->target;
                        for (auto& c : upper)
                            c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
                        std::string style = raw;
                        style.replace(style.find(tag->target), tag->target.size(), "D");
                        dev_styles[upper].insert(style);
                        dev_first.emplace(upper, loc);
                    }
                    if (tags_seen.insert(raw).second) {
                        out.push_back(make_finding(LintRule::L3_Standardization, "tag-style", loc,
                                                   "tag '" + raw + "' deviates from the tag grammar"));
                    }
                }
            }
            for (const auto& [dev, styles] : dev_styles) {
                if (styles.size() > 1) {
                    out.push_back(make_finding(LintRule::L3_Standardization, "mixed-tag-style", dev_first.at(dev),
                                               "development " + dev + " is tagged in " +
                                                   std::to_string(styles.size()) + " different styles",
                                               static_cast<double>(styles.size())));
                }
            }
        }
    }
    return out;
}

std::vector<LintFinding> check_grammar(const SpecDocument& doc, const Requirement& req,
                                       const DevelopmentRegistry& reg, const ReleaseUniverse& universe) {
    std::vector<LintFinding> out;
    if (!is_valid_requirement_id(req.id)) {
        out.push_back(make_finding(LintRule::L4_Grammar, "id-grammar",
                                   location_of(doc, req, req.versions.empty() ? nullptr : &req.versions.front()),
                                   "requirement id '" + req.id +
                                       "' should be 3-64 uppercase letters, digits or underscores"));
    }
    std::set<std::string> lowercase_reported;
    for (const auto& v : req.versions) {
        auto loc = location_of(doc, req, &v);
        for_each_dev_block(v.content, [&](const DevBlock& b) {
            const auto& dev = b.dev.str();
            bool lower = std::any_of(dev.begin(), dev.end(), [](char c) { return c >= 'a' && c <= 'z'; });
            if (lower && lowercase_reported.insert(dev).second)
                out.push_back(make_finding(LintRule::L4_Grammar, "lowercase-dev", loc,
                                           "development id " + dev + " contains lowercase letters"));
            if (b.before.empty() || b.after.empty())
                out.push_back(make_finding(LintRule::L4_Grammar, "empty-dev-part", loc,
                                           "block for " + dev + " has an empty " +
                                               (b.before.empty() ? "before" : "after") + "-part"));
        });
        auto text = latest_text(req, v, reg, universe);
        if (!text.empty() && std::string_view(".!?").find(text.back()) == std::string_view::npos)
            out.push_back(make_finding(LintRule::L4_Grammar, "missing-terminal-punct", loc,
                                       "version text does not end with terminal punctuation"));
    }
    return out;
}

std::vector<LintFinding> check_dispersion(const std::vector<SpecDocument>& docs, const Lexicon& lex,
                                          const LintConfig& config) {
    // procedure -> (document index, section path) -> first location
    std::map<std::string, std::map<std::pair<std::size_t, std::vector<std::string>>, Location>> seen;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        for (const auto* req : all_requirements(docs[d])) {
            for (const auto& v : req->versions) {
                for (const auto& m : lex.find_mentions(tokenize(flatten_plain_text(v.content))))
                    seen[m.canonical].emplace(std::make_pair(d, req->section_path), location_of(docs[d], *req, &v));
            }
        }
    }
    std::vector<LintFinding> out;
    for (const auto& [procedure, sections] : seen) {
        if (sections.size() <= config.max_sections)
            continue;
        std::vector<Location> locations;
        for (const auto& [key, loc] : sections)
            locations.push_back(loc);
        auto f = make_finding(LintRule::L5_Dispersion, "dispersed", locations.front(),
                              "procedure '" + procedure + "' is described in " + std::to_string(sections.size()) +
                                  " sections (limit " + std::to_string(config.max_sections) + ")",
                              static_cast<double>(sections.size()));
        f.locations = std::move(locations);
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<LintFinding> lint_corpus(const std::vector<SpecDocument>& docs, const DevelopmentRegistry& reg,
                                     const Lexicon& lex, const LintConfig& config) {
    config.validate();
    const auto universe = release_universe(docs, reg);
    std::vector<LintFinding> out;
    auto append = [&](std::vector<LintFinding> more) {
        for (auto& f : more)
            out.push_back(std::move(f));
    };
    if (config.is_enabled(LintRule::L1_Duplication))
        append(detect_duplication(docs, reg, config));
    for (const auto& doc : docs) {
        for (const auto* req : all_requirements(doc)) {
            if (config.is_enabled(LintRule::L2_Length))
                append(check_length(doc, *req, reg, universe, config, lex));
            if (config.is_enabled(LintRule::L4_Grammar))
                append(check_grammar(doc, *req, reg, universe));
        }
    }
    if (config.is_enabled(LintRule::L3_Standardization))
        append(check_standardization(docs, lex));
    if (config.is_enabled(LintRule::L5_Dispersion))
        append(check_dispersion(docs, lex, config));

    std::map<std::string, std::size_t> doc_order;
    for (std::size_t i = 0; i < docs.size(); ++i)
        doc_order.emplace(docs[i].name, i);
    std::map<std::pair<std::string, std::string>, std::size_t> req_order;
    std::size_t n = 0;
    for (const auto& doc : docs)
        for (const auto* req : all_requirements(doc))
            req_order.emplace(std::make_pair(doc.name, req->id), n++);
    auto key = [&](const LintFinding& f) {
        auto r = req_order.find({f.location.document, f.location.requirement});
        return std::make_tuple(doc_order[f.location.document], r == req_order.end() ? n : r->second,
                               static_cast<int>(f.rule));
    };
    std::stable_sort(out.begin(), out.end(),
                     [&](const LintFinding& a, const LintFinding& b) { return key(a) < key(b); });
    return out;
}

namespace {

nlohmann::json location_json(const Location& loc) {
    return {{"document", loc.document}, {"requirement", loc.requirement}, {"version", loc.version},
            {"section", loc.section}};
}

} // namespace

nlohmann::json to_json(const LintFinding& f) {
    nlohmann::json j;
    j["rule"] = to_string(f.rule);
    j["severity"] = to_string(f.severity);
    j["check"] = f.check;
    j["location"] = location_json(f.location);
    j["related"] = f.related ? location_json(*f.related) : nlohmann::json(nullptr);
    j["locations"] = nlohmann::json::array();
    for (const auto& loc : f.locations)
        j["locations"].push_back(location_json(loc));
    j["message"] = f.message;
    j["score"] = f.score ? nlohmann::json(*f.score) : nlohmann::json(nullptr);
    return j;
}

std::string format_finding(const LintFinding& f) {
    std::ostringstream out;
    out << f.location.document << ':' << f.location.requirement;
    if (!f.location.version.empty())
        out << " (" << f.location.version << ')';
    out << " [" << to_string(f.severity) << "] " << to_string(f.rule) << '/' << f.check << ": " << f.message;
    if (f.locations.size() > 2) {
        for (const auto& loc : f.locations)
            out << "\n    " << loc.document << " / " << loc.section << ": " << loc.requirement;
    }
    return out.str();
}

} // namespace relspec
