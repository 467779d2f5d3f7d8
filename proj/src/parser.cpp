#include "relspec/parser.hpp"
#include "relspec/error.hpp"

#include "text_util.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace relspec {

using detail::rtrim;
using detail::split_lines;
using detail::split_whitespace;
using detail::trim;

const char* to_string(ParseErrorKind kind) {
    switch (kind) {
    case ParseErrorKind::UnbalancedTag: return "UnbalancedTag";
    case ParseErrorKind::NestedDevBlock: return "NestedDevBlock";
    case ParseErrorKind::BadReleaseId: return "BadReleaseId";
    case ParseErrorKind::BadRequirementHeader: return "BadRequirementHeader";
    case ParseErrorKind::DuplicateId: return "DuplicateId";
    case ParseErrorKind::DanglingEnd: return "DanglingEnd";
    case ParseErrorKind::UnknownDevelopment: return "UnknownDevelopment";
    case ParseErrorKind::StaleDevelopment: return "StaleDevelopment";
    }
    return "?";
}

std::string format_error(const ParseError& error) {
    std::ostringstream out;
    out << (error.document.empty() ? "<input>" : error.document) << ':' << error.line << ": "
        << (error.is_warning() ? "warning: " : "") << to_string(error.kind) << ": " << error.message;
    return out.str();
}

namespace {

// Inline tags -------------------------------------------------------------------

enum class TagKind { DevOpen, DevSeparator, DevEnd, SpanOpen, SpanEnd };

struct Tag {
    TagKind kind;
    std::optional<DevelopmentId> dev;
    DeploymentType deployment = DeploymentType::SA;
    std::size_t length = 0;
};

std::optional<Tag> match_tag(std::string_view text, std::size_t pos) {
    auto close = text.find(']', pos);
    if (close == std::string_view::npos)
        return std::nullopt;
    auto inner = text.substr(pos + 1, close - pos - 1);
    if (inner.find_first_of("[\n") != std::string_view::npos)
        return std::nullopt;

    Tag tag;
    tag.length = close - pos + 1;
    if (auto dep = parse_deployment_type(inner)) {
        tag.kind = TagKind::SpanOpen;
        tag.deployment = *dep;
        return tag;
    }
    if (inner.substr(0, 4) == "End ") {
        auto rest = inner.substr(4);
        if (auto dep = parse_deployment_type(rest)) {
            tag.kind = TagKind::SpanEnd;
            tag.deployment = *dep;
            return tag;
        }
        if ((tag.dev = DevelopmentId::parse(rest))) {
            tag.kind = TagKind::DevEnd;
            return tag;
        }
        return std::nullopt;
    }
    if (inner.substr(0, 7) == "Before ") {
        if ((tag.dev = DevelopmentId::parse(inner.substr(7)))) {
            tag.kind = TagKind::DevOpen;
            return tag;
        }
        return std::nullopt;
    }
    if ((tag.dev = DevelopmentId::parse(inner))) {
        tag.kind = TagKind::DevSeparator;
        return tag;
    }
    return std::nullopt;
}

/// Trailing whitespace before each line break is dropped; the piece is trimmed.
std::string normalize_piece(std::string_view piece) {
    std::string out;
    std::size_t start = 0;
    while (true) {
        auto nl = piece.find('\n', start);
        auto line = piece.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
        out += rtrim(line);
        if (nl == std::string_view::npos)
            break;
        out += '\n';
        start = nl + 1;
    }
    return std::string(trim(out));
}

class ContentParser {
public:
    ContentParser(std::string_view text, int first_line) : text_(text), first_line_(first_line) {
        stack_.push_back(Frame{FrameKind::Root});
    }

    ContentParseResult run() {
        std::size_t piece_start = 0;
        std::size_t pos = 0;
        while ((pos = text_.find('[', pos)) != std::string_view::npos) {
            auto tag = match_tag(text_, pos);
            if (!tag) {
                ++pos;
                continue;
            }
            flush(text_.substr(piece_start, pos - piece_start));
            handle(*tag, line_at(pos));
            pos += tag->length;
            piece_start = pos;
        }
        flush(text_.substr(piece_start));
        finish();
        ContentParseResult result;
        result.segments = std::move(stack_.front().segments);
        result.errors = std::move(errors_);
        return result;
    }

private:
    enum class FrameKind { Root, Before, After, Span };

    struct Frame {
        FrameKind kind;
        SegmentList segments{};
        SegmentList before{};
        std::optional<DevelopmentId> dev{};
        DeploymentType deployment = DeploymentType::SA;
        int line = 0;
    };

    int line_at(std::size_t pos) const {
        return first_line_ + static_cast<int>(std::count(text_.begin(), text_.begin() + pos, '\n'));
    }

    void error(ParseErrorKind kind, int line, std::string message) {
        errors_.push_back(ParseError{kind, line, std::move(message), {}});
    }

    void flush(std::string_view piece) {
        auto text = normalize_piece(piece);
        if (!text.empty())
            stack_.back().segments.emplace_back(PlainText{std::move(text)});
    }

    int innermost_dev_frame() const {
        for (int i = static_cast<int>(stack_.size()) - 1; i > 0; --i)
            if (stack_[i].kind == FrameKind::Before || stack_[i].kind == FrameKind::After)
                return i;
        return -1;
    }

    void close_top_span() {
        Frame frame = std::move(stack_.back());
        stack_.pop_back();
        stack_.back().segments.emplace_back(DeploymentSpan{frame.deployment, std::move(frame.segments)});
    }

    // Bare spans end with their enclosing container.
    void close_spans_above(int index) {
        while (static_cast<int>(stack_.size()) - 1 > index && stack_.back().kind == FrameKind::Span)
            close_top_span();
    }

    void handle(const Tag& tag, int line) {
        const std::string dev = tag.dev ? tag.dev->str() : std::string();
        switch (tag.kind) {
        case TagKind::DevOpen: {
            if (int idx = innermost_dev_frame(); idx >= 0) {
                error(ParseErrorKind::NestedDevBlock, line,
                      "[Before " + dev + "] inside the block of " + stack_[idx].dev->str());
                return;
            }
            stack_.push_back(Frame{FrameKind::Before, {}, {}, tag.dev, DeploymentType::SA, line});
            return;
        }
        case TagKind::DevSeparator: {
            int idx = innermost_dev_frame();
            if (idx < 0) {
                stack_.push_back(Frame{FrameKind::After, {}, {}, tag.dev, DeploymentType::SA, line});
                return;
            }
            Frame& frame = stack_[idx];
            if (frame.dev != tag.dev) {
                error(ParseErrorKind::NestedDevBlock, line, "[" + dev + "] inside the block of " + frame.dev->str());
                return;
            }
            if (frame.kind == FrameKind::After) {
                error(ParseErrorKind::UnbalancedTag, line, "repeated [" + dev + "]");
                return;
            }
            close_spans_above(idx);
            frame.before = std::move(frame.segments);
            frame.segments.clear();
            frame.kind = FrameKind::After;
            return;
        }
        case TagKind::DevEnd: {
            int idx = innermost_dev_frame();
            if (idx < 0 || stack_[idx].dev != tag.dev) {
                error(ParseErrorKind::DanglingEnd, line, "[End " + dev + "] without an open block");
                return;
            }
            close_spans_above(idx);
            Frame frame = std::move(stack_.back());
            stack_.pop_back();
            if (frame.kind == FrameKind::Before) {
                error(ParseErrorKind::UnbalancedTag, frame.line, "[Before " + dev + "] has no [" + dev + "] separator");
                return;
            }
            stack_.back().segments.emplace_back(DevBlock{*frame.dev, std::move(frame.before), std::move(frame.segments)});
            return;
        }
        case TagKind::SpanOpen: {
            for (const auto& frame : stack_) {
                if (frame.kind == FrameKind::Span && frame.deployment == tag.deployment) {
                    error(ParseErrorKind::UnbalancedTag, line,
                          std::string("[") + to_string(tag.deployment) + "] inside an open [" +
                              to_string(tag.deployment) + "] span");
                    return;
                }
            }
            stack_.push_back(Frame{FrameKind::Span, {}, {}, std::nullopt, tag.deployment, line});
            return;
        }
        case TagKind::SpanEnd: {
            int found = -1;
            for (int i = static_cast<int>(stack_.size()) - 1; i > 0 && stack_[i].kind == FrameKind::Span; --i) {
                if (stack_[i].deployment == tag.deployment) {
                    found = i;
                    break;
                }
            }
            if (found < 0) {
                error(ParseErrorKind::DanglingEnd, line,
                      std::string("[End ") + to_string(tag.deployment) + "] without an open span");
                return;
            }
            close_spans_above(found);
            close_top_span();
            return;
        }
        }
    }

    void finish() {
        while (stack_.size() > 1) {
            if (stack_.back().kind == FrameKind::Span) {
                close_top_span();
                continue;
            }
            const Frame& frame = stack_.back();
            const auto& dev = frame.dev->str();
            error(ParseErrorKind::UnbalancedTag, frame.line,
                  frame.kind == FrameKind::Before ? "[Before " + dev + "] is never closed"
                                                  : "[" + dev + "] has no [End " + dev + "]");
            stack_.pop_back();
        }
    }

    std::string_view text_;
    int first_line_;
    std::vector<Frame> stack_;
    std::vector<ParseError> errors_;
};

// Document structure --------------------------------------------------------------

bool starts_with(std::string_view s, std::string_view prefix) { return s.substr(0, prefix.size()) == prefix; }

bool is_end_line(std::string_view line) { return trim(line) == "=== END ==="; }

struct PendingVersion {
    int header_line = 0;
    ReleaseId first;
    std::optional<ReleaseId> last;
    bool header_ok = false;
    int content_line = 0;
    std::vector<std::string_view> lines;
};

struct PendingRequirement {
    std::string id;
    int line = 0;
    bool failed = false;
    std::vector<PendingVersion> versions;
    std::vector<ParseError> errors;
};

class DocumentParser {
public:
    DocumentParser(std::string_view source, std::string name) : source_(source) { doc_.name = std::move(name); }

    ParseResult run() {
        auto lines = split_lines(source_);
        for (std::size_t i = 0; i < lines.size(); ++i)
            line(lines[i], static_cast<int>(i) + 1);
        if (current_) {
            error(ParseErrorKind::BadRequirementHeader, current_->line,
                  "requirement " + current_->id + " is not terminated by === END ===");
            current_.reset();
        }
        for (auto& e : errors_)
            e.document = doc_.name;
        return ParseResult{std::move(doc_), std::move(errors_)};
    }

private:
    void error(ParseErrorKind kind, int line, std::string message) {
        errors_.push_back(ParseError{kind, line, std::move(message), {}});
    }

    void line(std::string_view text, int number) {
        if (current_) {
            in_requirement(text, number);
            return;
        }
        auto t = trim(text);
        if (t.empty())
            return;
        if (starts_with(t, "=== REQ")) {
            open_requirement(t, number);
        } else if (is_end_line(t)) {
            error(ParseErrorKind::DanglingEnd, number, "=== END === outside a requirement block");
        } else if (starts_with(t, "===") || starts_with(t, "--- VERSION")) {
            error(ParseErrorKind::BadRequirementHeader, number, "unexpected block line outside a requirement");
        } else if (t.front() == '#') {
            heading(t, number);
        } else if (t.front() == '@') {
            directive(t, number);
        }
        // anything else is free prose between blocks
    }

    void directive(std::string_view t, int number) {
        auto parts = split_whitespace(t);
        if (parts[0] == "@spec-format" && parts.size() == 2) {
            if (parts[1] != std::to_string(kSpecFormatVersion))
                error(ParseErrorKind::BadRequirementHeader, number,
                      "unsupported spec format " + std::string(parts[1]));
            return;
        }
        if (parts[0] == "@document" && parts.size() >= 2) {
            doc_.name = std::string(trim(t.substr(std::string_view("@document").size())));
            return;
        }
        error(ParseErrorKind::BadRequirementHeader, number, "unknown directive " + std::string(parts[0]));
    }

    void heading(std::string_view t, int number) {
        std::size_t level = 0;
        while (level < t.size() && t[level] == '#')
            ++level;
        auto title = trim(t.substr(level));
        if (title.empty()) {
            error(ParseErrorKind::BadRequirementHeader, number, "heading without a title");
            return;
        }
        while (!stack_.empty() && stack_.back().level >= level)
            stack_.pop_back();
        auto& siblings = stack_.empty() ? doc_.sections : stack_.back().section->subsections;
        siblings.push_back(Section{std::string(title), {}, {}});
        stack_.push_back(OpenSection{level, &siblings.back()});
    }

    void open_requirement(std::string_view t, int number) {
        auto parts = split_whitespace(t);
        current_.emplace();
        current_->line = number;
        if (parts.size() != 4 || parts[0] != "===" || parts[1] != "REQ" || parts[3] != "===") {
            current_->id = "?";
            current_->failed = true;
            error(ParseErrorKind::BadRequirementHeader, number, "expected '=== REQ <ID> ==='");
            return;
        }
        current_->id = std::string(parts[2]);
    }

    void in_requirement(std::string_view text, int number) {
        auto t = trim(text);
        if (is_end_line(t)) {
            close_requirement();
            return;
        }
        if (starts_with(t, "=== REQ")) {
            error(ParseErrorKind::BadRequirementHeader, current_->line,
                  "requirement " + current_->id + " is not terminated by === END ===");
            current_.reset();
            open_requirement(t, number);
            return;
        }
        if (starts_with(t, "--- VERSION")) {
            version_header(t, number);
            return;
        }
        if (current_->versions.empty()) {
            if (!t.empty()) {
                current_->failed = true;
                error(ParseErrorKind::BadRequirementHeader, number, "content before the first version header");
            }
            return;
        }
        auto& v = current_->versions.back();
        if (v.lines.empty() && t.empty())
            return;
        if (v.lines.empty())
            v.content_line = number;
        v.lines.push_back(text);
    }

    void version_header(std::string_view t, int number) {
        PendingVersion v;
        v.header_line = number;
        auto parts = split_whitespace(t);
        if (parts.size() != 5 || parts[0] != "---" || parts[1] != "VERSION" || parts[4] != "---" ||
            !starts_with(parts[2], "first=") || !starts_with(parts[3], "last=")) {
            current_->failed = true;
            error(ParseErrorKind::BadRequirementHeader, number,
                  "expected '--- VERSION first=<release> last=<release|open> ---'");
            current_->versions.push_back(std::move(v));
            return;
        }
        auto first_text = parts[2].substr(6);
        auto last_text = parts[3].substr(5);
        auto first = ReleaseId::parse(first_text);
        std::optional<ReleaseId> last;
        bool ok = true;
        if (!first) {
            error(ParseErrorKind::BadReleaseId, number, "bad release id '" + std::string(first_text) + "'");
            ok = false;
        }
        if (last_text != "open") {
            last = ReleaseId::parse(last_text);
            if (!last) {
                error(ParseErrorKind::BadReleaseId, number, "bad release id '" + std::string(last_text) + "'");
                ok = false;
            }
        }
        if (ok && last && *last < *first) {
            error(ParseErrorKind::BadReleaseId, number,
                  "first release " + first->to_string() + " is after last release " + last->to_string());
            ok = false;
        }
        if (ok) {
            v.first = *first;
            v.last = last;
            v.header_ok = true;
        } else {
            current_->failed = true;
        }
        current_->versions.push_back(std::move(v));
    }

    void close_requirement() {
        PendingRequirement pending = std::move(*current_);
        current_.reset();
        if (pending.versions.empty()) {
            error(ParseErrorKind::BadRequirementHeader, pending.line, "requirement " + pending.id + " has no versions");
            return;
        }

        Requirement req;
        req.id = pending.id;
        req.source_line = pending.line;
        bool failed = pending.failed;
        for (auto& pv : pending.versions) {
            std::string body;
            for (std::size_t i = 0; i < pv.lines.size(); ++i) {
                if (i)
                    body += '\n';
                body += rtrim(pv.lines[i]);
            }
            auto content = parse_content(body, pv.content_line ? pv.content_line : pv.header_line + 1);
            if (!content.ok()) {
                failed = true;
                for (auto& e : content.errors)
                    errors_.push_back(std::move(e));
                continue;
            }
            if (pv.header_ok)
                req.versions.push_back(RequirementVersion{pv.first, pv.last, std::move(content.segments)});
        }
        if (failed)
            return;

        for (std::size_t i = 0; i < req.versions.size(); ++i) {
            for (std::size_t j = i + 1; j < req.versions.size(); ++j) {
                const auto& a = req.versions[i];
                const auto& b = req.versions[j];
                if (a.contains(b.first_release) || b.contains(a.first_release)) {
                    error(ParseErrorKind::BadReleaseId, pending.versions[j].header_line,
                          "version " + b.range_string() + " overlaps " + a.range_string() + " in " + req.id);
                    return;
                }
            }
        }
        if (!seen_ids_.insert(req.id).second) {
            error(ParseErrorKind::DuplicateId, pending.line, "duplicate requirement id " + req.id);
            return;
        }

        for (const auto& open : stack_)
            req.section_path.push_back(open.section->title);
        auto& target = stack_.empty() ? doc_.requirements : stack_.back().section->requirements;
        target.push_back(std::move(req));
    }

    struct OpenSection {
        std::size_t level;
        Section* section;
    };

    std::string_view source_;
    SpecDocument doc_;
    std::vector<OpenSection> stack_;
    std::optional<PendingRequirement> current_;
    std::set<std::string> seen_ids_;
    std::vector<ParseError> errors_;
};

// Serialization --------------------------------------------------------------------

void append_piece(std::string& out, std::string_view piece) {
    if (piece.empty())
        return;
    if (!out.empty())
        out += ' ';
    out += piece;
}

void serialize_segments(const SegmentList& segments, std::string& out) {
    for (const auto& seg : segments) {
        if (const auto* plain = std::get_if<PlainText>(&seg.node)) {
            append_piece(out, plain->text);
        } else if (const auto* block = std::get_if<DevBlock>(&seg.node)) {
            const auto& dev = block->dev.str();
            append_piece(out, "[Before " + dev + "]");
            serialize_segments(block->before, out);
            append_piece(out, "[" + dev + "]");
            serialize_segments(block->after, out);
            append_piece(out, "[End " + dev + "]");
        } else if (const auto* span = std::get_if<DeploymentSpan>(&seg.node)) {
            append_piece(out, std::string("[") + to_string(span->deployment) + "]");
            serialize_segments(span->body, out);
            append_piece(out, std::string("[End ") + to_string(span->deployment) + "]");
        }
    }
}

void serialize_requirement(const Requirement& req, std::string& out) {
    out += "=== REQ " + req.id + " ===\n";
    for (const auto& v : req.versions) {
        out += "--- VERSION first=" + v.first_release.to_string() +
               " last=" + (v.last_release ? v.last_release->to_string() : std::string("open")) + " ---\n";
        auto body = serialize_content(v.content);
        if (!body.empty())
            out += body + '\n';
    }
    out += "=== END ===\n\n";
}

void serialize_section(const Section& section, std::size_t level, std::string& out) {
    out += std::string(level, '#') + ' ' + section.title + "\n\n";
    for (const auto& req : section.requirements)
        serialize_requirement(req, out);
    for (const auto& sub : section.subsections)
        serialize_section(sub, level + 1, out);
}

} // namespace

ContentParseResult parse_content(std::string_view text, int first_line) {
    return ContentParser(text, first_line).run();
}

ParseResult parse_document(std::string_view source, std::string name) {
    return DocumentParser(source, std::move(name)).run();
}

std::string serialize_content(const SegmentList& segments) {
    std::string out;
    serialize_segments(segments, out);
    return out;
}

std::string serialize(const SpecDocument& doc) {
    std::string out = "@spec-format " + std::to_string(kSpecFormatVersion) + "\n";
    if (!doc.name.empty())
        out += "@document " + doc.name + "\n";
    out += '\n';
    for (const auto& req : doc.requirements)
        serialize_requirement(req, out);
    for (const auto& section : doc.sections)
        serialize_section(section, 1, out);
    while (out.size() >= 2 && out[out.size() - 1] == '\n' && out[out.size() - 2] == '\n')
        out.pop_back();
    return out;
}

std::vector<ParseError> validate_corpus(const std::vector<SpecDocument>& docs, const DevelopmentRegistry& reg) {
    std::vector<ParseError> errors;
    std::map<std::string, std::string> owner;
    for (const auto& doc : docs) {
        for (const auto* req : all_requirements(doc)) {
            auto [it, inserted] = owner.emplace(req->id, doc.name);
            if (!inserted) {
                errors.push_back(ParseError{ParseErrorKind::DuplicateId, req->source_line,
                                            "requirement id " + req->id + " already defined in " + it->second,
                                            doc.name});
            }
            for (const auto& v : req->versions) {
                std::set<DevelopmentId> reported;
                for_each_dev_block(v.content, [&](const DevBlock& block) {
                    if (!reported.insert(block.dev).second)
                        return;
                    auto release = reg.find(block.dev);
                    if (!release) {
                        errors.push_back(ParseError{ParseErrorKind::UnknownDevelopment, req->source_line,
                                                    "development " + block.dev.str() + " used by " + req->id +
                                                        " is not in the registry",
                                                    doc.name});
                    } else if (*release < v.first_release) {
                        errors.push_back(ParseError{ParseErrorKind::StaleDevelopment, req->source_line,
                                                    "development " + block.dev.str() + " (" + release->to_string() +
                                                        ") predates version " + v.range_string() + " of " + req->id,
                                                    doc.name});
                    }
                });
            }
        }
    }
    return errors;
}

DevelopmentRegistry parse_registry(std::string_view source) {
    DevelopmentRegistry reg;
    auto lines = split_lines(source);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        auto text = lines[i];
        if (auto hash = text.find('#'); hash != std::string_view::npos)
            text = text.substr(0, hash);
        auto parts = split_whitespace(text);
        if (parts.empty())
            continue;
        const auto where = "registry line " + std::to_string(i + 1) + ": ";
        if (parts[0] == "release") {
            if (parts.size() < 2)
                throw Error(ErrorCode::InvalidRegistry, where + "'release' needs at least one release id");
            for (std::size_t k = 1; k < parts.size(); ++k) {
                auto r = ReleaseId::parse(parts[k]);
                if (!r)
                    throw Error(ErrorCode::InvalidRegistry, where + "bad release id '" + std::string(parts[k]) + "'");
                reg.declare_release(*r);
            }
            continue;
        }
        if (parts.size() != 2)
            throw Error(ErrorCode::InvalidRegistry, where + "expected '<DevelopmentId> <ReleaseId>'");
        auto dev = DevelopmentId::parse(parts[0]);
        if (!dev)
            throw Error(ErrorCode::InvalidRegistry, where + "bad development id '" + std::string(parts[0]) + "'");
        auto r = ReleaseId::parse(parts[1]);
        if (!r)
            throw Error(ErrorCode::InvalidRegistry, where + "bad release id '" + std::string(parts[1]) + "'");
        if (!reg.add(*dev, *r))
            throw Error(ErrorCode::InvalidRegistry, where + dev->str() + " registered with two releases");
    }
    return reg;
}

std::string serialize_registry(const DevelopmentRegistry& reg) {
    std::string out;
    if (!reg.declared_releases().empty()) {
        out += "release";
        for (const auto& r : reg.declared_releases())
            out += ' ' + r.to_string();
        out += '\n';
    }
    for (const auto& [dev, release] : reg.developments())
        out += dev.str() + ' ' + release.to_string() + '\n';
    return out;
}

} // namespace relspec
