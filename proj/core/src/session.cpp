#include "mvattrib/session.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace mvattrib {

const char* to_string(InteractionKind kind) {
    switch (kind) {
        case InteractionKind::Detail: return "detail";
        case InteractionKind::Click: return "click";
        case InteractionKind::Add: return "add";
        case InteractionKind::Purchase: return "purchase";
    }
    return "?";
}

std::optional<InteractionKind> parse_interaction_kind(const std::string& text) {
    if (text == "detail") return InteractionKind::Detail;
    if (text == "click") return InteractionKind::Click;
    if (text == "add") return InteractionKind::Add;
    if (text == "purchase") return InteractionKind::Purchase;
    return std::nullopt;
}

Token Token::product(ProductId p, InteractionKind k) {
    Token t;
    t.id = std::move(p);
    switch (k) {
        case InteractionKind::Detail: t.kind = Kind::Detail; break;
        case InteractionKind::Click: t.kind = Kind::Click; break;
        case InteractionKind::Add: t.kind = Kind::Add; break;
        case InteractionKind::Purchase: t.kind = Kind::Purchase; break;
    }
    return t;
}

Token Token::query(std::string query_id) {
    Token t;
    t.id = std::move(query_id);
    t.kind = Kind::Query;
    return t;
}

static const char* kind_suffix(Token::Kind kind) {
    switch (kind) {
        case Token::Kind::Detail: return "detail";
        case Token::Kind::Click: return "click";
        case Token::Kind::Add: return "add";
        case Token::Kind::Purchase: return "purchase";
        case Token::Kind::Query: return "query";
    }
    return "?";
}

std::string to_string(const Token& token) {
    return token.id + "_" + kind_suffix(token.kind);
}

std::optional<Token> parse_token(const std::string& text) {
    const size_t pos = text.rfind('_');
    if (pos == std::string::npos || pos == 0 || pos + 1 >= text.size()) return std::nullopt;
    const std::string id = text.substr(0, pos);
    const std::string suffix = text.substr(pos + 1);
    Token t;
    t.id = id;
    if (suffix == "detail") t.kind = Token::Kind::Detail;
    else if (suffix == "click") t.kind = Token::Kind::Click;
    else if (suffix == "add") t.kind = Token::Kind::Add;
    else if (suffix == "purchase") t.kind = Token::Kind::Purchase;
    else if (suffix == "query") t.kind = Token::Kind::Query;
    else return std::nullopt;
    return t;
}

size_t TokenHash::operator()(const Token& t) const {
    size_t h = std::hash<std::string>{}(t.id);
    return h ^ (static_cast<size_t>(t.kind) + 0x9e3779b9ULL + (h << 6) + (h >> 2));
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return fields;
}

[[noreturn]] void parse_fail(const std::string& name, size_t line_no, const std::string& what) {
    throw std::runtime_error(name + ":" + std::to_string(line_no) + ": " + what);
}

} // namespace

std::vector<Session> parse_session_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open session log: " + path);
    return parse_session_log(in, path);
}

std::vector<Session> parse_session_log(std::istream& in, const std::string& name) {
    std::string line;
    size_t line_no = 0;

    if (!std::getline(in, line)) return {}; // empty file -> empty list
    ++line_no;
    if (line != kLogMagic) parse_fail(name, line_no, "expected header '" + std::string(kLogMagic) + "'");

    struct Partial {
        Session session;
        int64_t last_ts = 0;
        bool any = false;
    };
    std::vector<std::string> order;
    std::unordered_map<std::string, Partial> by_id;

    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != 6) parse_fail(name, line_no, "expected 6 TAB-separated fields, got " + std::to_string(fields.size()));

        const std::string& session_id = fields[0];
        if (session_id.empty()) parse_fail(name, line_no, "empty session_id");

        int64_t ts = 0;
        auto [ptr, ec] = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), ts);
        if (ec != std::errc{} || ptr != fields[1].data() + fields[1].size())
            parse_fail(name, line_no, "bad timestamp '" + fields[1] + "'");

        const std::string& type = fields[2];
        const std::string& product_id = fields[3];
        const std::string& query_id = fields[4];
        const std::string& clicked = fields[5];

        Event event;
        if (type == "search") {
            if (!product_id.empty()) parse_fail(name, line_no, "search event must have empty product_id");
            if (query_id.empty()) parse_fail(name, line_no, "search event must carry a query_id");
            SearchEvent se;
            se.query_id = query_id;
            if (!clicked.empty()) {
                for (auto& p : split(clicked, ',')) {
                    if (p.empty()) parse_fail(name, line_no, "empty product id in clicked list");
                    se.clicked.push_back(p);
                }
            }
            event = std::move(se);
        } else if (auto kind = parse_interaction_kind(type)) {
            if (product_id.empty()) parse_fail(name, line_no, "product event must carry a product_id");
            if (!query_id.empty()) parse_fail(name, line_no, "product event must have empty query_id");
            if (!clicked.empty()) parse_fail(name, line_no, "product event must have empty clicked list");
            event = ProductEvent{product_id, *kind};
        } else {
            parse_fail(name, line_no, "unknown event_type '" + type + "'");
        }

        auto it = by_id.find(session_id);
        if (it == by_id.end()) {
            order.push_back(session_id);
            it = by_id.emplace(session_id, Partial{}).first;
            it->second.session.session_id = session_id;
        } else if (ts <= it->second.last_ts) {
            parse_fail(name, line_no, "out-of-order timestamp in session '" + session_id + "'");
        }
        it->second.last_ts = ts;
        it->second.any = true;
        it->second.session.events.push_back(std::move(event));
    }

    std::vector<Session> sessions;
    sessions.reserve(order.size());
    for (const auto& id : order) {
        Session s = std::move(by_id.at(id).session);
        s.converted = first_purchase_event(s).has_value();
        validate_session(s);
        sessions.push_back(std::move(s));
    }
    return sessions;
}

void write_session_log(std::ostream& out, std::span<const Session> sessions) {
    out << kLogMagic << '\n';
    for (const auto& s : sessions) {
        int64_t ts = 0;
        for (const auto& e : s.events) {
            out << s.session_id << '\t' << ts++ << '\t';
            if (const auto* pe = std::get_if<ProductEvent>(&e)) {
                out << to_string(pe->kind) << '\t' << pe->product << "\t\t";
            } else {
                const auto& se = std::get<SearchEvent>(e);
                out << "search\t\t" << se.query_id << '\t';
                for (size_t i = 0; i < se.clicked.size(); ++i) {
                    if (i) out << ',';
                    out << se.clicked[i];
                }
            }
            out << '\n';
        }
    }
}

void write_session_log(const std::string& path, std::span<const Session> sessions) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write session log: " + path);
    write_session_log(out, sessions);
}

void validate_session(const Session& session) {
    if (session.session_id.empty()) throw std::invalid_argument("session has empty id");
    if (session.events.empty()) throw std::invalid_argument("session '" + session.session_id + "' has no events");
    auto purchase = first_purchase_event(session);
    if (session.converted != purchase.has_value())
        throw std::invalid_argument("session '" + session.session_id + "' conversion flag inconsistent with events");
    if (purchase && *purchase == 0)
        throw std::invalid_argument("session '" + session.session_id + "' purchase has no preceding event");
}

std::vector<Token> tokenize_session(const Session& session) {
    std::vector<Token> tokens;
    tokens.reserve(session.events.size());
    for (const auto& e : session.events) {
        if (const auto* pe = std::get_if<ProductEvent>(&e)) {
            tokens.push_back(Token::product(pe->product, pe->kind));
        } else {
            const auto& se = std::get<SearchEvent>(e);
            tokens.push_back(Token::query(se.query_id));
            for (const auto& p : se.clicked)
                tokens.push_back(Token::product(p, InteractionKind::Click));
        }
    }
    return tokens;
}

SessionStats session_stats(std::span<const Session> sessions) {
    if (sessions.empty()) throw std::invalid_argument("session_stats: empty session list");
    SessionStats stats;
    stats.session_count = sessions.size();
    for (const auto& s : sessions) {
        stats.event_count += s.events.size();
        if (s.converted) ++stats.converted_count;
        if (has_search(s)) ++stats.search_session_count;
        ++stats.length_histogram[s.events.size()];
    }
    stats.conversion_rate = double(stats.converted_count) / double(stats.session_count);
    stats.search_session_rate = double(stats.search_session_count) / double(stats.session_count);
    return stats;
}

bool has_search(const Session& session) {
    return std::any_of(session.events.begin(), session.events.end(),
                       [](const Event& e) { return std::holds_alternative<SearchEvent>(e); });
}

std::optional<size_t> first_purchase_event(const Session& session) {
    for (size_t i = 0; i < session.events.size(); ++i) {
        if (const auto* pe = std::get_if<ProductEvent>(&session.events[i]))
            if (pe->kind == InteractionKind::Purchase) return i;
    }
    return std::nullopt;
}

} // namespace mvattrib
