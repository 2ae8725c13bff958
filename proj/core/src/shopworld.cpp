#include "mvattrib/shopworld.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "mvattrib/rng.hpp"

namespace mvattrib {

namespace {

constexpr uint64_t kSessionStream = 0x73657373ULL; // per-session RNG lane

void validate_config(const WorldConfig& c) {
    if (c.n_categories < 2) throw std::invalid_argument("WorldConfig: need >= 2 categories");
    if (c.products_per_category < 2) throw std::invalid_argument("WorldConfig: need >= 2 products per category");
    if (!(c.p_stay > 0 && c.p_stay < 1)) throw std::invalid_argument("WorldConfig: p_stay must be in (0,1)");
    if (!(c.conversion_prob >= 0 && c.conversion_prob <= 1))
        throw std::invalid_argument("WorldConfig: conversion_prob must be in [0,1]");
    if (c.mean_session_len < 2) throw std::invalid_argument("WorldConfig: mean_session_len must be >= 2");
    if (!(c.search_fraction >= 0 && c.search_fraction <= 1))
        throw std::invalid_argument("WorldConfig: search_fraction must be in [0,1]");
    if (c.query_top_n < 1) throw std::invalid_argument("WorldConfig: query_top_n must be positive");
    if (c.products_per_category < c.query_top_n)
        throw std::invalid_argument("WorldConfig: products_per_category must be >= query_top_n");
}

std::string category_name(int c) { return "c" + std::to_string(c); }

} // namespace

int Catalog::category_of(const ProductId& p) const {
    auto it = index.find(p);
    if (it == index.end()) throw std::invalid_argument("unknown product: " + p);
    return products[it->second].category;
}

Catalog build_catalog(const WorldConfig& config) {
    validate_config(config);
    Catalog cat;
    cat.categories.reserve(config.n_categories);
    cat.by_category.resize(config.n_categories);
    for (int c = 0; c < config.n_categories; ++c) {
        cat.categories.push_back(category_name(c));
        for (int j = 0; j < config.products_per_category; ++j) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "c%d_p%03d", c, j);
            CatalogProduct p;
            p.id = buf;
            p.category = c;
            p.popularity = 1.0 / double(j + 1); // Zipf, exponent 1
            cat.by_category[c].push_back(cat.products.size());
            cat.index.emplace(p.id, cat.products.size());
            cat.products.push_back(std::move(p));
        }
    }
    return cat;
}

MockSearchEngine::MockSearchEngine(const Catalog& catalog) {
    for (size_t c = 0; c < catalog.by_category.size(); ++c) {
        std::string q = "q" + std::to_string(c);
        std::vector<ProductId> ranked;
        ranked.reserve(catalog.by_category[c].size());
        for (size_t idx : catalog.by_category[c]) ranked.push_back(catalog.products[idx].id);
        queries_.push_back(q);
        query_category_.emplace(q, int(c));
        ranked_.emplace(std::move(q), std::move(ranked));
    }
}

std::vector<ProductId> MockSearchEngine::search(const std::string& query_id, int n) const {
    auto it = ranked_.find(query_id);
    if (it == ranked_.end()) throw std::invalid_argument("unknown query: " + query_id);
    if (n < 1) throw std::invalid_argument("search: n must be positive");
    if (size_t(n) > it->second.size())
        throw std::invalid_argument("search: category has fewer than n products");
    return {it->second.begin(), it->second.begin() + n};
}

int MockSearchEngine::category_of_query(const std::string& query_id) const {
    auto it = query_category_.find(query_id);
    if (it == query_category_.end()) throw std::invalid_argument("unknown query: " + query_id);
    return it->second;
}

namespace {

struct WalkState {
    int category = 0;
    std::vector<double> weights; // scratch popularity weights for one category
};

size_t draw_product(const Catalog& cat, int category, Rng& rng, std::vector<double>& weights) {
    const auto& members = cat.by_category[category];
    weights.clear();
    for (size_t idx : members) weights.push_back(cat.products[idx].popularity);
    return members[rng.pick_weighted(weights)];
}

InteractionKind draw_kind(Rng& rng) {
    const double u = rng.uniform();
    if (u < 0.80) return InteractionKind::Detail;
    if (u < 0.95) return InteractionKind::Click;
    return InteractionKind::Add;
}

Session generate_one(const Catalog& cat, const MockSearchEngine& engine, const WorldConfig& config,
                     size_t index) {
    Rng rng(derive_seed(config.seed, kSessionStream, index));
    const int n_categories = int(cat.by_category.size());

    size_t target_len = 2 + rng.poisson(double(config.mean_session_len - 2));
    const bool convert = rng.bernoulli(config.conversion_prob);
    if (convert && target_len < 3) target_len = 3;
    const bool with_search = rng.bernoulli(config.search_fraction);

    size_t walk_len = convert ? target_len - 2 : target_len;
    if (walk_len < 1) walk_len = 1;
    const size_t search_pos = with_search ? rng.uniform_int(walk_len) : walk_len;

    Session session;
    session.session_id = "s" + std::to_string(index);

    int category = int(rng.uniform_int(n_categories));
    std::optional<size_t> last_product;
    std::vector<double> weights;

    for (size_t step = 0; step < walk_len; ++step) {
        if (step == search_pos) {
            // Search either re-states the current intent or jumps to a new one;
            // the walk continues in the searched category afterwards.
            int qcat = category;
            if (!rng.bernoulli(0.5)) qcat = int(rng.uniform_int(n_categories));
            SearchEvent se;
            se.query_id = "q" + std::to_string(qcat);
            const double u = rng.uniform();
            size_t n_clicks = u < 0.15 ? 0 : (u < 0.90 ? 1 : 2);
            if (n_clicks > 0) {
                auto top = engine.search(se.query_id, config.query_top_n);
                std::vector<double> w(top.size());
                for (size_t i = 0; i < top.size(); ++i)
                    w[i] = cat.products[cat.index.at(top[i])].popularity;
                for (size_t i = 0; i < n_clicks && !top.empty(); ++i) {
                    size_t pick = rng.pick_weighted(w);
                    se.clicked.push_back(top[pick]);
                    top.erase(top.begin() + pick);
                    w.erase(w.begin() + pick);
                }
                last_product = cat.index.at(se.clicked.back());
            }
            category = qcat;
            session.events.emplace_back(std::move(se));
            continue;
        }
        if (step > 0 || search_pos == 0) {
            if (!rng.bernoulli(config.p_stay)) {
                // switch to a different category, uniform among the others
                int next = int(rng.uniform_int(n_categories - 1));
                if (next >= category) ++next;
                category = next;
            }
        }
        size_t pidx = draw_product(cat, category, rng, weights);
        session.events.emplace_back(ProductEvent{cat.products[pidx].id, draw_kind(rng)});
        last_product = pidx;
    }

    if (convert) {
        if (!last_product) {
            size_t pidx = draw_product(cat, category, rng, weights);
            session.events.emplace_back(ProductEvent{cat.products[pidx].id, InteractionKind::Detail});
            last_product = pidx;
        }
        const ProductId& p = cat.products[*last_product].id;
        session.events.emplace_back(ProductEvent{p, InteractionKind::Add});
        session.events.emplace_back(ProductEvent{p, InteractionKind::Purchase});
        session.converted = true;
    }
    return session;
}

} // namespace

std::vector<Session> generate_base_sessions(const Catalog& catalog, const WorldConfig& config,
                                            size_t count) {
    validate_config(config);
    MockSearchEngine engine(catalog);
    std::vector<Session> sessions;
    sessions.reserve(count);
    for (size_t i = 0; i < count; ++i) sessions.push_back(generate_one(catalog, engine, config, i));
    return sessions;
}

void write_catalog(const std::string& path, const Catalog& catalog) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write catalog: " + path);
    out << kCatalogMagic << '\n';
    char buf[64];
    for (const auto& p : catalog.products) {
        std::snprintf(buf, sizeof(buf), "%.17g", p.popularity);
        out << p.id << '\t' << catalog.categories[p.category] << '\t' << buf << '\n';
    }
}

Catalog read_catalog(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open catalog: " + path);
    std::string line;
    if (!std::getline(in, line) || line != kCatalogMagic)
        throw std::runtime_error(path + ": expected header '" + std::string(kCatalogMagic) + "'");

    Catalog cat;
    std::unordered_map<std::string, int> cat_index;
    size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        size_t t1 = line.find('\t');
        size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos)
            throw std::runtime_error(path + ":" + std::to_string(line_no) + ": expected 3 fields");
        std::string id = line.substr(0, t1);
        std::string cname = line.substr(t1 + 1, t2 - t1 - 1);
        double pop = std::stod(line.substr(t2 + 1));
        auto [it, inserted] = cat_index.emplace(cname, int(cat.categories.size()));
        if (inserted) {
            cat.categories.push_back(cname);
            cat.by_category.emplace_back();
        }
        CatalogProduct p{std::move(id), it->second, pop};
        cat.by_category[it->second].push_back(cat.products.size());
        cat.index.emplace(p.id, cat.products.size());
        cat.products.push_back(std::move(p));
    }
    for (auto& members : cat.by_category) {
        std::stable_sort(members.begin(), members.end(), [&](size_t a, size_t b) {
            return cat.products[a].popularity > cat.products[b].popularity;
        });
    }
    return cat;
}

} // namespace mvattrib
