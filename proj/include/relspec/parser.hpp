#pragma once

#include "relspec/model.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace relspec {

enum class ParseErrorKind {
    UnbalancedTag,
    NestedDevBlock,
    BadReleaseId,
    BadRequirementHeader,
    DuplicateId,
    DanglingEnd,
    // corpus-level findings from validate_corpus
    UnknownDevelopment,
    StaleDevelopment, ///< warning: development released before the version it appears in
};

const char* to_string(ParseErrorKind kind);

struct ParseError {
    ParseErrorKind kind;
    int line = 0;
    std::string message;
    std::string document;

    bool is_warning() const { return kind == ParseErrorKind::StaleDevelopment; }
};

/// "document:line: Kind: message"
std::string format_error(const ParseError& error);

struct ParseResult {
    SpecDocument document; ///< every well-formed requirement block, even when errors exist
    std::vector<ParseError> errors;

    bool ok() const { return errors.empty(); }
};

struct ContentParseResult {
    SegmentList segments;
    std::vector<ParseError> errors;

    bool ok() const { return errors.empty(); }
};

inline constexpr int kSpecFormatVersion = 1;

/// Parses a `.spec` document. Malformed requirement blocks are dropped and
/// reported; parsing resumes at the next block.
ParseResult parse_document(std::string_view source, std::string name = {});

/// Parses one version body. `first_line` is the source line of the body's first line.
ContentParseResult parse_content(std::string_view text, int first_line = 1);

std::string serialize(const SpecDocument& doc);
std::string serialize_content(const SegmentList& segments);

/// Cross-document checks: duplicate requirement IDs and unregistered developments.
std::vector<ParseError> validate_corpus(const std::vector<SpecDocument>& docs, const DevelopmentRegistry& reg);

/// Registry file: `<DevelopmentId> <ReleaseId>` lines, `release <ReleaseId>...` declarations,
/// `#` comments. Throws Error(InvalidRegistry) with the offending line.
DevelopmentRegistry parse_registry(std::string_view source);
std::string serialize_registry(const DevelopmentRegistry& reg);

} // namespace relspec
