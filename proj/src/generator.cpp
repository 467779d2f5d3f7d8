#include "relspec/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <set>

namespace relspec {

namespace {

// Filler vocabulary. Disjoint from every word used by the procedure dictionary, so
// random text never forms a lexicon phrase.
const std::vector<std::string> kVocabulary = {
    "timer", "counter", "threshold", "value", "message", "indication", "request", "response",
    "report", "signal", "quality", "level", "offset", "window", "interval", "period", "priority",
    "list", "entry", "field", "flag", "state", "mode", "channel", "resource", "slot", "frame",
    "symbol", "antenna", "port", "layer", "link", "path", "route", "table", "record", "context",
    "session", "identity", "key", "token", "buffer", "queue", "packet", "header", "payload",
    "status", "error", "cause", "code", "limit", "range", "step", "phase", "stage", "trigger",
    "condition", "criterion", "rule", "policy", "profile", "group", "subset", "instance", "object",
    "attribute", "element", "component", "module", "unit", "function", "service", "client",
    "server", "peer", "neighbour", "target", "source", "power", "gain", "loss", "delay", "latency",
    "jitter", "rate", "throughput", "load", "capacity", "usage", "share", "weight", "score",
    "metric", "sample", "average", "maximum", "minimum", "bitmap", "pattern", "sequence", "cycle",
    "duration", "margin", "hysteresis", "filter", "coefficient", "scaling", "factor", "estimate",
    "band", "bandwidth", "spectrum", "grant", "allocation", "scheduler", "budget", "credit",
    "marker", "label", "descriptor", "pointer", "vector", "matrix", "array", "domain", "zone",
    "area", "region", "tier", "class", "category", "variant", "initial", "final", "current",
    "previous", "pending", "inactive", "valid", "invalid", "stored", "received", "updated",
    "configured", "reported", "selected", "allowed", "blocked", "ignored", "applied", "started",
    "stopped", "expired", "cleared", "optional", "mandatory", "default", "specific", "common",
    "dedicated", "periodic", "aperiodic", "local", "remote", "internal", "external", "upper",
    "lower", "primary", "alternate", "send", "store", "discard", "start", "stop", "apply",
    "ignore", "update", "compare", "select", "include", "indicate", "forward", "evaluate",
    "reset", "increment", "decrement", "check", "verify", "keep", "monitor", "derive", "compute",
    "encode", "decode", "transmit", "receive", "accept", "reject", "retain", "restore", "suspend",
    "resume", "notify", "log", "assign",
};

const std::vector<std::string> kVerbs = {
    "send", "store", "discard", "start", "stop", "apply", "ignore", "update", "compare", "select",
    "include", "indicate", "forward", "evaluate", "reset", "check", "verify", "keep", "monitor",
    "derive", "compute", "transmit", "accept", "reject", "retain", "restore", "notify",
};

struct ProcedureEntry {
    const char* canonical;
    std::vector<std::string> aliases;
};

const std::vector<ProcedureEntry>& procedures() {
    static const std::vector<ProcedureEntry> kProcedures = {
        {"A2 measurement",
         {"A2 measurement for Handover", "A2 measurement for the activation of Inter-frequency measurements"}},
        {"A3 measurement", {"A3 event measurement"}},
        {"Handover preparation", {"HO preparation"}},
        {"RRC connection setup", {"RRC setup procedure", "connection establishment"}},
        {"SgNB addition", {"secondary node addition", "SgNB add procedure"}},
        {"Bearer release", {"bearer removal"}},
        {"Paging procedure", {"paging"}},
        {"Cell reselection", {"cell re-selection"}},
        {"Beam failure recovery", {"BFR procedure"}},
        {"Carrier aggregation activation", {"CA activation"}},
        {"Measurement gap configuration", {"gap configuration"}},
        {"Random access procedure", {"RACH procedure"}},
    };
    return kProcedures;
}

const std::vector<std::string> kChapterTitles = {"Overview", "Signalling", "Timers", "Mobility",
                                                 "Scheduling", "Reporting", "Security", "Radio"};

ReleaseId rel(int revision) { return ReleaseId{1, revision}; }
const std::vector<ReleaseId> kUniverse = {rel(1), rel(2), rel(3), rel(4)};

std::string capitalize(std::string w) {
    if (!w.empty() && w[0] >= 'a' && w[0] <= 'z') w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

template <typename T>
void shuffle(Rng& rng, std::vector<T>& items) {
    // Fisher-Yates over Rng; std::shuffle's algorithm is unspecified.
    for (std::size_t i = items.size(); i > 1; --i) std::swap(items[i - 1], items[rng.index(i)]);
}

std::vector<std::string> sentence_words(Rng& rng, int count) {
    std::vector<std::string> words;
    for (int i = 0; i < count; ++i) words.push_back(rng.pick(kVocabulary));
    return words;
}

std::string join_sentence(std::vector<std::string> words) {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i) out += ' ';
        out += i == 0 ? capitalize(words[i]) : words[i];
    }
    return out + ".";
}

std::string procedure_sentence(Rng& rng, const std::string& phrase) {
    return "During " + phrase + " the " + rng.pick(kVocabulary) + " shall " + rng.pick(kVerbs) + " the " +
           rng.pick(kVocabulary) + " " + rng.pick(kVocabulary) + ".";
}

std::string random_identifier(Rng& rng) {
    return rng.pick(kVocabulary) + capitalize(rng.pick(kVocabulary)) + capitalize(rng.pick(kVocabulary));
}

std::string parameter_sentence(Rng& rng, const std::string& identifier) {
    return "The " + rng.pick(kVocabulary) + " shall use " + identifier + " as the " + rng.pick(kVocabulary) + " " +
           rng.pick(kVocabulary) + ".";
}

// Plan of a generated requirement; texts are derived from the plan, not from the resolver.
struct Piece {
    enum Kind { Plain, Dev, Span } kind = Plain;
    std::string text;  // Plain and Span body; Dev before-part
    std::string after; // Dev after-part
    std::string dev;
    DeploymentType deployment = DeploymentType::SA;
};

struct VersionPlan {
    ReleaseId first;
    std::optional<ReleaseId> last;
    std::vector<Piece> pieces;

    bool contains(const ReleaseId& r) const { return first <= r && (!last || r <= *last); }
};

struct ReqPlan {
    std::size_t section = 0;
    std::vector<std::string> procedures;
    std::vector<VersionPlan> versions;
    std::string id;
};

struct SectionSlot {
    std::size_t document;
    std::vector<std::string> path;
};

SegmentList build_content(const std::vector<Piece>& pieces) {
    SegmentList out;
    for (const auto& p : pieces) {
        if (p.kind == Piece::Plain) {
            if (!out.empty()) {
                if (auto* prev = std::get_if<PlainText>(&out.back().node)) {
                    prev->text += " " + p.text;
                    continue;
                }
            }
            out.push_back(PlainText{p.text});
        } else if (p.kind == Piece::Dev) {
            DevBlock block{*DevelopmentId::parse(p.dev), {}, {}};
            if (!p.text.empty()) block.before.push_back(PlainText{p.text});
            if (!p.after.empty()) block.after.push_back(PlainText{p.after});
            out.push_back(std::move(block));
        } else {
            out.push_back(DeploymentSpan{p.deployment, {PlainText{p.text}}});
        }
    }
    return out;
}

std::string plan_text(const VersionPlan& v, const ReleaseId& r, DeploymentFilter filter,
                      const DevelopmentRegistry& reg) {
    std::string out;
    auto append = [&](const std::string& s) {
        if (s.empty()) return;
        if (!out.empty()) out += ' ';
        out += s;
    };
    for (const auto& p : v.pieces) {
        switch (p.kind) {
        case Piece::Plain: append(p.text); break;
        case Piece::Dev: {
            auto at = reg.find(*DevelopmentId::parse(p.dev));
            append(at && *at <= r ? p.after : p.text);
            break;
        }
        case Piece::Span:
            if (filter == DeploymentFilter::Both || filter == to_filter(p.deployment)) append(p.text);
            break;
        }
    }
    return out;
}

class CorpusBuilder {
public:
    explicit CorpusBuilder(const GeneratorConfig& config) : config_(config), rng_(config.seed) {}

    GeneratedCorpus build() {
        make_registry();
        make_sections();
        assign_homes();

        const std::size_t injected = 2 * config_.near_dups + config_.over_length + 3 * config_.dispersed;
        const std::size_t ordinary = config_.size > injected ? config_.size - injected : 0;

        std::vector<std::size_t> ordinary_ids;
        for (std::size_t i = 0; i < ordinary; ++i) {
            bool mapped = i < procedures().size() || !rng_.chance(0.05);
            std::optional<std::size_t> proc;
            if (mapped) proc = i < procedures().size() ? i : rng_.index(procedures().size());
            ordinary_ids.push_back(add_ordinary(proc, std::nullopt, false));
        }

        inject_near_duplicates(ordinary_ids);
        inject_over_length();
        inject_aliases(ordinary_ids);
        inject_dispersion();

        return assemble();
    }

private:
    void make_registry() {
        const int per_release[] = {2, 5, 5, 4};
        int serial = 200001;
        registry_ = DevelopmentRegistry{};
        for (const auto& r : kUniverse) registry_.declare_release(r);
        for (int k = 0; k < 4; ++k) {
            for (int i = 0; i < per_release[k]; ++i) {
                auto dev = *DevelopmentId::parse("CB" + std::to_string(serial++));
                registry_.add(dev, kUniverse[static_cast<std::size_t>(k)]);
                devs_by_release_[kUniverse[static_cast<std::size_t>(k)]].push_back(dev.str());
            }
        }
    }

    void make_sections() {
        for (std::size_t d = 0; d < config_.documents; ++d) {
            for (int c = 1; c <= 3; ++c) {
                std::string chapter =
                    std::to_string(c) + " " + kChapterTitles[(d * 3 + static_cast<std::size_t>(c)) % kChapterTitles.size()];
                slots_.push_back({d, {chapter}});
                slots_.push_back({d, {chapter, std::to_string(c) + ".1 Parameters"}});
            }
        }
    }

    void assign_homes() {
        std::vector<std::size_t> order(slots_.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        shuffle(rng_, order);
        for (std::size_t p = 0; p < procedures().size(); ++p) home_.push_back(order[p % order.size()]);
    }

    std::vector<std::string> eligible_devs(const VersionPlan& v) {
        std::vector<std::string> out;
        for (const auto& [r, devs] : devs_by_release_) {
            if (r > v.first && (!v.last || r <= *v.last)) out.insert(out.end(), devs.begin(), devs.end());
        }
        return out;
    }

    std::vector<Piece> filler_pieces(int sentences) {
        std::vector<Piece> out;
        for (int i = 0; i < sentences; ++i) out.push_back({Piece::Plain, random_sentence(rng_, 8, 12), {}, {}, {}});
        return out;
    }

    // Ordinary requirement: one procedure sentence, fillers, optional parameter sentence,
    // optional development blocks and a single-type deployment span.
    std::size_t add_ordinary(std::optional<std::size_t> proc, std::optional<std::size_t> section, bool source) {
        ReqPlan plan;
        plan.section = section ? *section : proc ? home_[*proc] : rng_.index(slots_.size());
        if (proc) plan.procedures.push_back(procedures()[*proc].canonical);

        std::vector<Piece> base = filler_pieces(source ? rng_.between(6, 8) : rng_.between(2, 4));
        if (source || rng_.chance(0.5)) base.push_back({Piece::Plain, parameter_sentence(rng_, random_identifier(rng_)), {}, {}, {}});
        shuffle(rng_, base);
        if (proc) {
            Piece p{Piece::Plain, procedure_sentence(rng_, procedures()[*proc].canonical), {}, {}, {}};
            base.insert(base.begin() + static_cast<std::ptrdiff_t>(rng_.index(base.size() + 1)), p);
        }

        double roll = source ? 0.0 : static_cast<double>(rng_.below(100)) / 100.0;
        if (roll < 0.6 || roll >= 0.9) {
            plan.versions.push_back({rel(1), std::nullopt, base});
        } else if (roll < 0.75) {
            int k = rng_.between(1, 2);
            VersionPlan v1{rel(1), rel(k), base};
            VersionPlan v2{rel(k + 1), std::nullopt, base};
            // Replace one non-procedure sentence, or append one.
            std::vector<std::size_t> fillers;
            for (std::size_t i = 0; i < v2.pieces.size(); ++i) {
                if (v2.pieces[i].text.rfind("During ", 0) != 0) fillers.push_back(i);
            }
            std::string fresh = random_sentence(rng_, 8, 12);
            if (!fillers.empty() && rng_.chance(0.7)) v2.pieces[rng_.pick(fillers)].text = fresh;
            else v2.pieces.push_back({Piece::Plain, fresh, {}, {}, {}});
            plan.versions.push_back(std::move(v1));
            plan.versions.push_back(std::move(v2));
        } else if (roll < 0.85) {
            plan.versions.push_back({rel(rng_.between(2, 3)), std::nullopt, base});
        } else {
            plan.versions.push_back({rel(1), rel(rng_.between(2, 3)), base});
        }

        if (!source) {
            VersionPlan& last = plan.versions.back();
            auto devs = eligible_devs(last);
            if (!devs.empty() && rng_.chance(0.45)) {
                int count = rng_.between(1, 2);
                std::set<std::string> used;
                for (int i = 0; i < count; ++i) {
                    const std::string& dev = rng_.pick(devs);
                    if (!used.insert(dev).second) continue;
                    Piece p{Piece::Dev, random_sentence(rng_, 6, 10), random_sentence(rng_, 6, 10), dev, {}};
                    last.pieces.insert(last.pieces.begin() + static_cast<std::ptrdiff_t>(rng_.index(last.pieces.size() + 1)), p);
                }
            }
            if (rng_.chance(0.3)) {
                auto dep = rng_.chance(0.5) ? DeploymentType::SA : DeploymentType::NSA;
                Piece p{Piece::Span, random_sentence(rng_, 6, 10), {}, {}, dep};
                last.pieces.insert(last.pieces.begin() + static_cast<std::ptrdiff_t>(rng_.index(last.pieces.size() + 1)), p);
            }
        }

        plans_.push_back(std::move(plan));
        return plans_.size() - 1;
    }

    static std::string source_text(const ReqPlan& plan) {
        std::string out;
        for (const auto& p : plan.versions.front().pieces) out += (out.empty() ? "" : " ") + p.text;
        return out;
    }

    void inject_near_duplicates(const std::vector<std::size_t>& ordinary) {
        for (std::size_t n = 0; n < config_.near_dups; ++n) {
            std::optional<std::size_t> proc;
            if (!ordinary.empty()) {
                proc = rng_.index(procedures().size());
            }
            std::size_t src = add_ordinary(proc, std::nullopt, true);
            ReqPlan copy;
            copy.section = plans_[src].section;
            copy.procedures = plans_[src].procedures;

            bool rename = n % 2 == 1;
            std::vector<Piece> pieces = plans_[src].versions.front().pieces;
            if (rename) {
                for (auto& p : pieces) {
                    if (p.text.rfind("The ", 0) != 0 || p.text.find(" shall use ") == std::string::npos) continue;
                    auto begin = p.text.find(" shall use ") + 11;
                    auto end = p.text.find(' ', begin);
                    p.text.insert(end, "SA");
                    break;
                }
            } else {
                std::vector<std::size_t> fillers;
                for (std::size_t i = 0; i < pieces.size(); ++i) {
                    if (pieces[i].text.rfind("During ", 0) != 0 && pieces[i].text.find(" shall use ") == std::string::npos)
                        fillers.push_back(i);
                }
                auto& text = pieces[rng_.pick(fillers)].text;
                // Swap a non-initial word for a different vocabulary word.
                std::vector<std::size_t> starts;
                for (std::size_t i = 0; i < text.size(); ++i) {
                    if (text[i] == ' ') starts.push_back(i + 1);
                }
                std::size_t at = rng_.pick(starts);
                std::size_t stop = text.find_first_of(" .", at);
                std::string old = text.substr(at, stop - at);
                std::string word;
                do word = rng_.pick(kVocabulary);
                while (word == old);
                text.replace(at, stop - at, word);
            }
            copy.versions.push_back({rel(1), std::nullopt, {Piece{Piece::Plain, join_pieces(pieces), {}, {}, {}}}});
            plans_.push_back(std::move(copy));
            near_dups_.push_back({src, plans_.size() - 1, rename});
        }
    }

    static std::string join_pieces(const std::vector<Piece>& pieces) {
        std::string out;
        for (const auto& p : pieces) out += (out.empty() ? "" : " ") + p.text;
        return out;
    }

    void inject_over_length() {
        for (std::size_t n = 0; n < config_.over_length; ++n) {
            std::size_t proc = rng_.index(procedures().size());
            ReqPlan plan;
            plan.section = home_[proc];
            plan.procedures.push_back(procedures()[proc].canonical);
            std::vector<Piece> pieces;
            std::string lead = procedure_sentence(rng_, procedures()[proc].canonical);
            pieces.push_back({Piece::Plain, lead, {}, {}, {}});
            int remaining = static_cast<int>(config_.over_length_tokens) - word_count(lead);
            while (remaining > 0) {
                int len = rng_.between(6, 12);
                if (remaining - len < 6) len = remaining;
                pieces.push_back({Piece::Plain, join_sentence(sentence_words(rng_, len)), {}, {}, {}});
                remaining -= len;
            }
            shuffle(rng_, pieces);
            plan.versions.push_back({rel(1), std::nullopt, pieces});
            plans_.push_back(std::move(plan));
            over_length_.push_back(plans_.size() - 1);
        }
    }

    static int word_count(const std::string& s) {
        int n = 0;
        bool in = false;
        for (char c : s) {
            if (c == ' ') in = false;
            else if (!in) in = true, ++n;
        }
        return n;
    }

    void inject_aliases(const std::vector<std::size_t>& ordinary) {
        std::vector<std::size_t> candidates;
        for (std::size_t i : ordinary) {
            if (!plans_[i].procedures.empty()) candidates.push_back(i);
        }
        shuffle(rng_, candidates);
        for (std::size_t n = 0; n < config_.alias_usages && n < candidates.size(); ++n) {
            ReqPlan& plan = plans_[candidates[n]];
            const std::string canonical = plan.procedures.front();
            const ProcedureEntry* entry = nullptr;
            for (const auto& e : procedures()) {
                if (canonical == e.canonical) entry = &e;
            }
            const std::string& alias = rng_.pick(entry->aliases);
            for (auto& v : plan.versions) {
                for (auto& p : v.pieces) {
                    if (p.kind == Piece::Plain && p.text.rfind("During " + canonical + " ", 0) == 0)
                        p.text.replace(7, canonical.size(), alias);
                }
            }
            aliases_.push_back({candidates[n], alias});
        }
    }

    void inject_dispersion() {
        std::vector<std::size_t> procs(procedures().size());
        for (std::size_t i = 0; i < procs.size(); ++i) procs[i] = i;
        shuffle(rng_, procs);
        for (std::size_t n = 0; n < config_.dispersed && n < procs.size(); ++n) {
            std::size_t proc = procs[n];
            std::vector<std::size_t> others;
            for (std::size_t s = 0; s < slots_.size(); ++s) {
                if (s != home_[proc]) others.push_back(s);
            }
            shuffle(rng_, others);
            std::vector<std::size_t> sections{home_[proc]};
            for (std::size_t k = 0; k < 3 && k < others.size(); ++k) {
                add_ordinary(proc, others[k], false);
                sections.push_back(others[k]);
            }
            dispersed_.push_back({proc, sections});
        }
    }

    GeneratedCorpus assemble() {
        // Order requirements within each section randomly, then number them in document order.
        std::vector<std::vector<std::size_t>> by_section(slots_.size());
        for (std::size_t i = 0; i < plans_.size(); ++i) by_section[plans_[i].section].push_back(i);
        for (auto& list : by_section) shuffle(rng_, list);

        GeneratedCorpus out;
        out.registry = registry_;
        out.lexicon_json = generator_lexicon_json();

        int serial = 1;
        char buf[16];
        for (std::size_t d = 0; d < config_.documents; ++d) {
            SpecDocument doc;
            std::snprintf(buf, sizeof buf, "doc%02zu", d + 1);
            doc.name = buf;
            for (std::size_t s = 0; s < slots_.size(); ++s) {
                if (slots_[s].document != d) continue;
                Section* target = nullptr;
                if (slots_[s].path.size() == 1) {
                    doc.sections.push_back(Section{slots_[s].path[0], {}, {}});
                    target = &doc.sections.back();
                } else {
                    doc.sections.back().subsections.push_back(Section{slots_[s].path[1], {}, {}});
                    target = &doc.sections.back().subsections.back();
                }
                for (std::size_t i : by_section[s]) {
                    std::snprintf(buf, sizeof buf, "REQ_%04d", serial++);
                    plans_[i].id = buf;
                    Requirement req;
                    req.id = plans_[i].id;
                    req.section_path = slots_[s].path;
                    for (const auto& v : plans_[i].versions)
                        req.versions.push_back({v.first, v.last, build_content(v.pieces)});
                    target->requirements.push_back(std::move(req));
                }
            }
            out.docs.push_back(std::move(doc));
        }

        out.ground_truth = ground_truth(out.docs);
        return out;
    }

    nlohmann::json ground_truth(const std::vector<SpecDocument>& docs) {
        using nlohmann::json;
        json gt;
        json universe = json::array();
        for (const auto& r : kUniverse) universe.push_back(r.to_string());
        gt["universe"] = universe;
        json procs = json::array();
        for (const auto& p : procedures()) procs.push_back(p.canonical);
        gt["procedures"] = procs;

        std::map<std::string, const ReqPlan*> by_id;
        for (const auto& p : plans_) by_id[p.id] = &p;

        json reqs = json::array();
        for (const auto& doc : docs) {
            for (const Requirement* req : all_requirements(doc)) {
                const ReqPlan& plan = *by_id.at(req->id);
                json j;
                j["id"] = req->id;
                j["document"] = doc.name;
                j["section"] = req->section_path;
                j["procedures"] = plan.procedures;
                json texts = json::object();
                json devs = json::object();
                for (const auto& r : kUniverse) {
                    for (const auto& v : plan.versions) {
                        if (!v.contains(r)) continue;
                        texts[r.to_string()] = {
                            {"Both", plan_text(v, r, DeploymentFilter::Both, registry_)},
                            {"SA", plan_text(v, r, DeploymentFilter::SA, registry_)},
                            {"NSA", plan_text(v, r, DeploymentFilter::NSA, registry_)},
                        };
                        json present = json::array();
                        for (const auto& p : v.pieces) {
                            if (p.kind == Piece::Dev) present.push_back(p.dev);
                        }
                        devs[r.to_string()] = present;
                    }
                }
                j["texts"] = texts;
                j["devs"] = devs;
                reqs.push_back(j);
            }
        }
        gt["requirements"] = reqs;

        json defects;
        json nd = json::array();
        for (const auto& [src, copy, rename] : near_dups_)
            nd.push_back({{"source", plans_[src].id}, {"copy", plans_[copy].id},
                          {"check", rename ? "renamed-parameter" : "near-duplicate"}});
        defects["near_duplicates"] = nd;
        json ol = json::array();
        for (std::size_t i : over_length_)
            ol.push_back({{"id", plans_[i].id}, {"tokens", config_.over_length_tokens}});
        defects["over_length"] = ol;
        json al = json::array();
        for (const auto& [i, surface] : aliases_)
            al.push_back({{"id", plans_[i].id}, {"surface", surface}, {"canonical", plans_[i].procedures.front()}});
        defects["aliases"] = al;
        json ds = json::array();
        for (const auto& [proc, sections] : dispersed_) {
            json secs = json::array();
            for (std::size_t s : sections) {
                char name[16];
                std::snprintf(name, sizeof name, "doc%02zu", slots_[s].document + 1);
                secs.push_back({{"document", name}, {"section", slots_[s].path}});
            }
            ds.push_back({{"procedure", procedures()[proc].canonical}, {"sections", secs}});
        }
        defects["dispersed"] = ds;
        gt["defects"] = defects;
        return gt;
    }

    const GeneratorConfig& config_;
    Rng rng_;
    DevelopmentRegistry registry_;
    std::map<ReleaseId, std::vector<std::string>> devs_by_release_;
    std::vector<SectionSlot> slots_;
    std::vector<std::size_t> home_;
    std::vector<ReqPlan> plans_;
    std::vector<std::tuple<std::size_t, std::size_t, bool>> near_dups_;
    std::vector<std::size_t> over_length_;
    std::vector<std::pair<std::size_t, std::string>> aliases_;
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> dispersed_;
};

// Richer text for round-trip and resolution fixtures: numbers, identifiers, punctuation,
// bracketed non-tag text and multi-line tables.
std::string rich_text(Rng& rng) {
    switch (rng.below(6)) {
    case 0: return "| " + rng.pick(kVocabulary) + " | value |\n| " + std::to_string(rng.below(100)) + " | " +
                   rng.pick(kVocabulary) + " |";
    case 1: return random_sentence(rng) + " (see " + std::to_string(rng.between(1, 9)) + "." +
                   std::to_string(rng.between(1, 9)) + ")";
    case 2: return "The " + random_identifier(rng) + " is set to -" + std::to_string(rng.below(120)) + " dBm.";
    case 3: return random_sentence(rng) + " [note " + std::to_string(rng.between(1, 5)) + "]";
    default: return random_sentence(rng);
    }
}

SegmentList random_segments(Rng& rng, const DevelopmentRegistry& reg, int depth, bool inside_dev,
                            std::optional<DeploymentType> inside_span, int& dev_budget) {
    SegmentList out;
    int count = rng.between(1, 4);
    std::vector<DevelopmentId> devs;
    for (const auto& [d, r] : reg.developments()) devs.push_back(d);
    for (int i = 0; i < count; ++i) {
        auto roll = rng.below(10);
        if (roll < 2 && depth < 3 && !inside_dev && dev_budget > 0 && !devs.empty()) {
            --dev_budget;
            DevBlock block{rng.pick(devs), {}, {}};
            if (!rng.chance(0.15)) block.before = random_segments(rng, reg, depth + 1, true, inside_span, dev_budget);
            if (!rng.chance(0.15)) block.after = random_segments(rng, reg, depth + 1, true, inside_span, dev_budget);
            out.push_back(std::move(block));
        } else if (roll < 4 && depth < 3 && !inside_span) {
            auto dep = rng.chance(0.5) ? DeploymentType::SA : DeploymentType::NSA;
            out.push_back(DeploymentSpan{dep, random_segments(rng, reg, depth + 1, inside_dev, dep, dev_budget)});
        } else {
            std::string text = rich_text(rng);
            if (!out.empty()) {
                if (auto* prev = std::get_if<PlainText>(&out.back().node)) {
                    prev->text += " " + text;
                    continue;
                }
            }
            out.push_back(PlainText{text});
        }
    }
    return out;
}

std::vector<RequirementVersion> random_versions(Rng& rng, const DevelopmentRegistry& reg, int& dev_budget) {
    std::vector<RequirementVersion> versions;
    int first = rng.between(1, 3);
    while (first <= 4) {
        RequirementVersion v;
        v.first_release = rel(first);
        bool close = first < 4 && rng.chance(0.35);
        if (close) {
            int last = rng.between(first, 3);
            v.last_release = rel(last);
            first = last + 1;
        } else {
            first = 5;
        }
        v.content = random_segments(rng, reg, 0, false, std::nullopt, dev_budget);
        versions.push_back(std::move(v));
        if (close && rng.chance(0.3)) break;
    }
    return versions;
}

} // namespace

std::string random_sentence(Rng& rng, int min_words, int max_words) {
    return join_sentence(sentence_words(rng, rng.between(min_words, max_words)));
}

std::string generator_lexicon_json() {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& p : procedures()) j[p.canonical] = p.aliases;
    return j.dump(2);
}

GeneratedCorpus generate_corpus(const GeneratorConfig& config) {
    return CorpusBuilder(config).build();
}

DevelopmentRegistry random_registry(Rng& rng, std::size_t developments) {
    DevelopmentRegistry reg;
    for (const auto& r : kUniverse) reg.declare_release(r);
    std::set<std::string> used;
    const char* alphabet = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789";
    while (used.size() < developments) {
        std::string id = "CB";
        for (std::size_t i = 0; i < DevelopmentId::kSuffixLength; ++i) id += alphabet[rng.below(36)];
        if (!used.insert(id).second) continue;
        reg.add(*DevelopmentId::parse(id), rng.pick(kUniverse));
    }
    return reg;
}

Requirement random_requirement(Rng& rng, const DevelopmentRegistry& reg, const std::string& id, int max_dev_blocks) {
    std::vector<DevelopmentId> devs;
    for (const auto& [d, r] : reg.developments()) devs.push_back(d);

    Requirement req;
    req.id = id;
    int open_first = rng.between(1, 4);
    if (open_first > 1 && rng.chance(0.5)) {
        int closed_first = rng.between(1, open_first - 1);
        int budget = 0;
        req.versions.push_back({rel(closed_first), rel(open_first - 1),
                                random_segments(rng, reg, 0, false, std::nullopt, budget)});
    }

    // Open version: plain text interleaved with 1..max development blocks, some inside spans
    // and some carrying spans or empty parts.
    int blocks = rng.between(1, max_dev_blocks);
    SegmentList content;
    int zero = 0;
    for (int b = 0; b < blocks; ++b) {
        if (rng.chance(0.7)) content.push_back(PlainText{rich_text(rng)});
        DevBlock block{rng.pick(devs), {}, {}};
        if (!rng.chance(0.15)) block.before = random_segments(rng, reg, 1, true, std::nullopt, zero);
        if (!rng.chance(0.15)) block.after = random_segments(rng, reg, 1, true, std::nullopt, zero);
        if (rng.chance(0.25)) {
            auto dep = rng.chance(0.5) ? DeploymentType::SA : DeploymentType::NSA;
            SegmentList body;
            body.push_back(std::move(block));
            content.push_back(DeploymentSpan{dep, std::move(body)});
        } else {
            content.push_back(std::move(block));
        }
    }
    if (rng.chance(0.7)) content.push_back(PlainText{rich_text(rng)});
    // Keep the canonical form: no two adjacent plain segments.
    SegmentList merged;
    for (auto& s : content) {
        if (!merged.empty()) {
            auto* prev = std::get_if<PlainText>(&merged.back().node);
            auto* cur = std::get_if<PlainText>(&s.node);
            if (prev && cur) {
                prev->text += " " + cur->text;
                continue;
            }
        }
        merged.push_back(std::move(s));
    }
    req.versions.push_back({rel(open_first), std::nullopt, std::move(merged)});
    return req;
}

SpecDocument random_document(Rng& rng, const DevelopmentRegistry& reg, const std::string& name, std::size_t& next_id) {
    SpecDocument doc;
    doc.name = name;
    auto make_req = [&](const std::vector<std::string>& path) {
        char buf[24];
        std::snprintf(buf, sizeof buf, "REQ_%05zu", next_id++);
        Requirement req;
        req.id = buf;
        req.section_path = path;
        int budget = 3;
        req.versions = random_versions(rng, reg, budget);
        return req;
    };
    if (rng.chance(0.3)) doc.requirements.push_back(make_req({}));

    std::function<Section(std::vector<std::string>, int)> make_section = [&](std::vector<std::string> path,
                                                                               int depth) {
        Section s;
        s.title = std::to_string(rng.between(1, 20)) + " " + capitalize(rng.pick(kVocabulary));
        path.push_back(s.title);
        int reqs = rng.between(0, 3);
        for (int i = 0; i < reqs; ++i) s.requirements.push_back(make_req(path));
        if (depth < 2) {
            int subs = rng.between(0, 2);
            for (int i = 0; i < subs; ++i) s.subsections.push_back(make_section(path, depth + 1));
        }
        return s;
    };
    int tops = rng.between(1, 3);
    for (int i = 0; i < tops; ++i) doc.sections.push_back(make_section({}, 1));
    return doc;
}

} // namespace relspec
