#include "relspec/index.hpp"
#include "relspec/error.hpp"

#include <json.hpp>

#include <algorithm>

namespace relspec {

namespace {

using nlohmann::json;

std::set<std::string> procedures_in(const Lexicon& lex, const std::string& text) {
    std::set<std::string> out;
    for (const auto& m : lex.find_mentions(tokenize(text)))
        out.insert(m.canonical);
    if (out.empty())
        out.insert(SpecIndex::kUnmapped);
    return out;
}

void require_release(const SpecIndex& ix, const ReleaseId& r) {
    if (!in_universe(ix.release_universe, r))
        throw Error(ErrorCode::UnknownRelease, "release " + r.to_string() + " is not in the release universe");
}

ResolvedRequirement as_resolved(const std::string& id, const ReleaseId& r, const ResolvedState& s) {
    ResolvedRequirement out;
    out.id = id;
    out.release = r;
    out.text = s.text;
    out.present_devs = s.present_devs;
    out.contributing_devs = s.contributing_devs;
    return out;
}

const ResolvedState* state_at(const SpecIndex& ix, const std::string& id, const ReleaseId& r) {
    auto it = ix.resolved.find(id);
    if (it == ix.resolved.end())
        return nullptr;
    auto st = it->second.find(r);
    return st == it->second.end() ? nullptr : &st->second;
}

json devs_json(const std::set<DevelopmentId>& devs) {
    auto arr = json::array();
    for (const auto& d : devs)
        arr.push_back(d.str());
    return arr;
}

json entries_json(const std::vector<IndexEntry>& entries) {
    auto arr = json::array();
    for (const auto& e : entries)
        arr.push_back({{"id", e.id}, {"text", e.text}});
    return arr;
}

ReleaseId release_from(const json& j) {
    auto r = ReleaseId::parse(j.get<std::string>());
    if (!r)
        throw Error(ErrorCode::InvalidIndex, "bad release id '" + j.get<std::string>() + "'");
    return *r;
}

DevelopmentId dev_from(const json& j) {
    auto d = DevelopmentId::parse(j.get<std::string>());
    if (!d)
        throw Error(ErrorCode::InvalidIndex, "bad development id '" + j.get<std::string>() + "'");
    return *d;
}

std::set<DevelopmentId> devs_from(const json& j) {
    std::set<DevelopmentId> out;
    for (const auto& d : j)
        out.insert(dev_from(d));
    return out;
}

std::vector<IndexEntry> entries_from(const json& j) {
    std::vector<IndexEntry> out;
    for (const auto& e : j)
        out.push_back(IndexEntry{e.at("id").get<std::string>(), e.at("text").get<std::string>()});
    return out;
}

} // namespace

SpecIndex build_index(const std::vector<SpecDocument>& docs, const DevelopmentRegistry& reg, const Lexicon& lex) {
    SpecIndex ix;
    ix.release_universe = release_universe(docs, reg);
    ix.registry = reg;
    ix.lexicon = lex;
    const auto& universe = ix.release_universe;

    for (const auto& doc : docs) {
        for (const auto* req : all_requirements(doc)) {
            ix.requirement_order.push_back(req->id);
            std::map<ReleaseId, std::set<std::string>> procs_at;
            for (const auto& r : universe) {
                auto both = materialize(*req, r, DeploymentFilter::Both, reg);
                if (!both)
                    continue;
                ix.resolved[req->id][r] = ResolvedState{both->text, both->present_devs, both->contributing_devs};
                auto procs = procedures_in(lex, both->text);
                for (const auto& p : procs) {
                    ix.proc_release[{p, r}].push_back(IndexEntry{req->id, both->text});
                    ix.proc_req[p].insert(req->id);
                }
                for (auto dep : {DeploymentType::SA, DeploymentType::NSA}) {
                    auto scoped = materialize(*req, r, to_filter(dep), reg);
                    if (scoped->text.empty())
                        continue;
                    for (const auto& p : procs)
                        ix.proc_dep[{p, dep, r}].push_back(IndexEntry{req->id, scoped->text});
                }
                procs_at[r] = std::move(procs);
            }
            for (std::size_t i = 0; i + 1 < universe.size(); ++i) {
                const auto& a = universe[i];
                const auto& b = universe[i + 1];
                const auto* sa = state_at(ix, req->id, a);
                const auto* sb = state_at(ix, req->id, b);
                if (!sa && !sb)
                    continue;
                auto ra = sa ? std::optional(as_resolved(req->id, a, *sa)) : std::nullopt;
                auto rb = sb ? std::optional(as_resolved(req->id, b, *sb)) : std::nullopt;
                auto diff = diff_resolved(req->id, a, b, DeploymentFilter::Both, ra ? &*ra : nullptr,
                                          rb ? &*rb : nullptr, reg);
                if (!diff.has_changes() || diff.causes.empty())
                    continue;
                std::set<std::string> procs = procs_at[a];
                procs.insert(procs_at[b].begin(), procs_at[b].end());
                for (const auto& d : diff.causes)
                    for (const auto& p : procs)
                        ix.proc_dev[{p, d}].push_back(diff);
            }
        }
    }
    return ix;
}

std::string canonical_procedure(const SpecIndex& ix, std::string_view procedure) {
    if (auto c = ix.lexicon.canonical_of(procedure))
        return *c;
    return std::string(procedure);
}

std::vector<IndexEntry> query_behavior(const SpecIndex& ix, std::string_view procedure, const ReleaseId& r) {
    require_release(ix, r);
    auto it = ix.proc_release.find({canonical_procedure(ix, procedure), r});
    return it == ix.proc_release.end() ? std::vector<IndexEntry>{} : it->second;
}

std::vector<BehaviorDiff> query_release_diff(const SpecIndex& ix, std::string_view procedure, const ReleaseId& a,
                                             const ReleaseId& b) {
    require_release(ix, a);
    require_release(ix, b);
    const auto p = canonical_procedure(ix, procedure);
    std::set<std::string> ids;
    for (const auto& r : {a, b}) {
        auto it = ix.proc_release.find({p, r});
        if (it != ix.proc_release.end())
            for (const auto& e : it->second)
                ids.insert(e.id);
    }
    std::vector<BehaviorDiff> out;
    for (const auto& id : ix.requirement_order) {
        if (!ids.count(id))
            continue;
        const auto* sa = state_at(ix, id, a);
        const auto* sb = state_at(ix, id, b);
        auto ra = sa ? std::optional(as_resolved(id, a, *sa)) : std::nullopt;
        auto rb = sb ? std::optional(as_resolved(id, b, *sb)) : std::nullopt;
        auto diff = diff_resolved(id, a, b, DeploymentFilter::Both, ra ? &*ra : nullptr, rb ? &*rb : nullptr,
                                  ix.registry);
        if (diff.has_changes())
            out.push_back(std::move(diff));
    }
    return out;
}

std::vector<BehaviorDiff> query_dev_changes(const SpecIndex& ix, std::string_view procedure, const DevelopmentId& d) {
    if (!ix.registry.contains(d))
        throw Error(ErrorCode::UnknownDevelopment, "development " + d.str() + " is not registered");
    auto it = ix.proc_dev.find({canonical_procedure(ix, procedure), d});
    return it == ix.proc_dev.end() ? std::vector<BehaviorDiff>{} : it->second;
}

std::set<std::string> query_requirements(const SpecIndex& ix, std::string_view procedure) {
    auto it = ix.proc_req.find(canonical_procedure(ix, procedure));
    return it == ix.proc_req.end() ? std::set<std::string>{} : it->second;
}

std::vector<IndexEntry> query_deployment(const SpecIndex& ix, std::string_view procedure, DeploymentType dep,
                                         std::optional<ReleaseId> r) {
    if (r) {
        require_release(ix, *r);
    } else {
        if (ix.release_universe.empty())
            return {};
        r = ix.release_universe.back();
    }
    auto it = ix.proc_dep.find({canonical_procedure(ix, procedure), dep, *r});
    return it == ix.proc_dep.end() ? std::vector<IndexEntry>{} : it->second;
}

std::string SpecIndex::to_json() const {
    json j;
    j["format_version"] = kFormatVersion;
    j["release_universe"] = json::array();
    for (const auto& r : release_universe)
        j["release_universe"].push_back(r.to_string());

    json devs = json::object();
    for (const auto& [d, r] : registry.developments())
        devs[d.str()] = r.to_string();
    json declared = json::array();
    for (const auto& r : registry.declared_releases())
        declared.push_back(r.to_string());
    j["registry"] = {{"developments", devs}, {"declared_releases", declared}};
    j["lexicon"] = json::parse(lexicon.to_json());
    j["requirements"] = requirement_order;

    json resolved_j = json::object();
    for (const auto& [id, states] : resolved) {
        json per = json::object();
        for (const auto& [r, s] : states)
            per[r.to_string()] = {{"text", s.text},
                                  {"present_devs", devs_json(s.present_devs)},
                                  {"contributing_devs", devs_json(s.contributing_devs)}};
        resolved_j[id] = per;
    }
    j["resolved"] = resolved_j;

    j["proc_release"] = json::array();
    for (const auto& [key, entries] : proc_release)
        j["proc_release"].push_back(
            {{"procedure", key.first}, {"release", key.second.to_string()}, {"entries", entries_json(entries)}});
    j["proc_dev"] = json::array();
    for (const auto& [key, diffs] : proc_dev) {
        json arr = json::array();
        for (const auto& d : diffs)
            arr.push_back(relspec::to_json(d));
        j["proc_dev"].push_back({{"procedure", key.first}, {"development", key.second.str()}, {"diffs", arr}});
    }
    j["proc_req"] = json::object();
    for (const auto& [p, ids] : proc_req)
        j["proc_req"][p] = ids;
    j["proc_dep"] = json::array();
    for (const auto& [key, entries] : proc_dep)
        j["proc_dep"].push_back({{"procedure", std::get<0>(key)},
                                 {"deployment", to_string(std::get<1>(key))},
                                 {"release", std::get<2>(key).to_string()},
                                 {"entries", entries_json(entries)}});
    return j.dump(1);
}

SpecIndex SpecIndex::from_json(std::string_view source) {
    try {
        auto j = json::parse(source);
        if (j.at("format_version").get<int>() != kFormatVersion)
            throw Error(ErrorCode::InvalidIndex, "unsupported index format version");
        SpecIndex ix;
        for (const auto& r : j.at("release_universe"))
            ix.release_universe.push_back(release_from(r));
        for (const auto& [d, r] : j.at("registry").at("developments").items())
            ix.registry.add(dev_from(json(d)), release_from(r));
        for (const auto& r : j.at("registry").at("declared_releases"))
            ix.registry.declare_release(release_from(r));
        ix.lexicon = Lexicon::load(j.at("lexicon").dump());
        ix.requirement_order = j.at("requirements").get<std::vector<std::string>>();
        for (const auto& [id, per] : j.at("resolved").items())
            for (const auto& [r, s] : per.items())
                ix.resolved[id][release_from(json(r))] =
                    ResolvedState{s.at("text").get<std::string>(), devs_from(s.at("present_devs")),
                                  devs_from(s.at("contributing_devs"))};
        for (const auto& e : j.at("proc_release"))
            ix.proc_release[{e.at("procedure").get<std::string>(), release_from(e.at("release"))}] =
                entries_from(e.at("entries"));
        for (const auto& e : j.at("proc_dev")) {
            std::vector<BehaviorDiff> diffs;
            for (const auto& d : e.at("diffs"))
                diffs.push_back(behavior_diff_from_json(d));
            ix.proc_dev[{e.at("procedure").get<std::string>(), dev_from(e.at("development"))}] = std::move(diffs);
        }
        for (const auto& [p, ids] : j.at("proc_req").items())
            ix.proc_req[p] = ids.get<std::set<std::string>>();
        for (const auto& e : j.at("proc_dep")) {
            auto dep = parse_deployment_type(e.at("deployment").get<std::string>());
            if (!dep)
                throw Error(ErrorCode::InvalidIndex, "bad deployment type in index");
            ix.proc_dep[{e.at("procedure").get<std::string>(), *dep, release_from(e.at("release"))}] =
                entries_from(e.at("entries"));
        }
        return ix;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::InvalidIndex, std::string("malformed index file: ") + e.what());
    }
}

} // namespace relspec
