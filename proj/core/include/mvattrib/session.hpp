#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace mvattrib {

using ProductId = std::string;

enum class InteractionKind { Detail, Click, Add, Purchase };

const char* to_string(InteractionKind kind);
std::optional<InteractionKind> parse_interaction_kind(const std::string& text);

struct ProductEvent {
    ProductId product;
    InteractionKind kind;
    bool operator==(const ProductEvent&) const = default;
};

// An issued query plus the SERP products clicked, in click order. The clicked
// list may be empty.
struct SearchEvent {
    std::string query_id;
    std::vector<ProductId> clicked;
    bool operator==(const SearchEvent&) const = default;
};

using Event = std::variant<ProductEvent, SearchEvent>;

// One shopper visit. Events are ordered; timestamps exist only in the log
// format. converted is true iff a Purchase event is present.
struct Session {
    std::string session_id;
    std::vector<Event> events;
    bool converted = false;
    bool operator==(const Session&) const = default;
};

// Atomic unit of the shared vector space. Product interactions carry their
// kind (xyz_detail vs xyz_purchase are distinct tokens); queries are tokens of
// their own whose vectors are derived, never trained.
struct Token {
    enum class Kind { Detail, Click, Add, Purchase, Query };
    std::string id; // product id, or query id for Kind::Query
    Kind kind = Kind::Detail;

    bool operator==(const Token&) const = default;
    auto operator<=>(const Token&) const = default;

    static Token product(ProductId p, InteractionKind k);
    static Token query(std::string query_id);
    bool is_query() const { return kind == Kind::Query; }
};

// Token string form is "<id>_<kind>", parsed from the last underscore so ids
// may themselves contain underscores.
std::string to_string(const Token& token);
std::optional<Token> parse_token(const std::string& text);

struct TokenHash {
    size_t operator()(const Token& t) const;
};

struct SessionStats {
    size_t session_count = 0;
    size_t event_count = 0;
    size_t converted_count = 0;
    size_t search_session_count = 0;
    double conversion_rate = 0;
    double search_session_rate = 0;
    std::map<size_t, size_t> length_histogram; // session length -> count
};

inline constexpr const char* kLogMagic = "#mvattrib-log v1";

// Throws std::runtime_error naming the offending line for malformed input or
// out-of-order timestamps. Sessions come back in order of first appearance.
std::vector<Session> parse_session_log(const std::string& path);
std::vector<Session> parse_session_log(std::istream& in, const std::string& name);

void write_session_log(std::ostream& out, std::span<const Session> sessions);
void write_session_log(const std::string& path, std::span<const Session> sessions);

// Validates the Session invariants; throws std::invalid_argument on violation.
void validate_session(const Session& session);

std::vector<Token> tokenize_session(const Session& session);

// Throws std::invalid_argument on an empty input.
SessionStats session_stats(std::span<const Session> sessions);

bool has_search(const Session& session);
// Index of the first Purchase event, if any.
std::optional<size_t> first_purchase_event(const Session& session);

} // namespace mvattrib
