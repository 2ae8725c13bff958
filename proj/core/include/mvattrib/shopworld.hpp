#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "mvattrib/session.hpp"

namespace mvattrib {

// Simulator settings. The simulator stands in for a real shop's logs, so the
// knobs are stated assumptions, not calibrated values.
struct WorldConfig {
    int n_categories = 5;
    int products_per_category = 50;
    double p_stay = 0.92;          // chance of staying in the current category per step
    double conversion_prob = 0.25; // chance a session ends in Add+Purchase
    int mean_session_len = 12;
    double search_fraction = 0.35; // fraction of sessions carrying one SearchEvent
    int query_top_n = 20;          // engine result depth N
    uint64_t seed = 1;
};

struct CatalogProduct {
    ProductId id;
    int category = 0;
    double popularity = 0; // Zipf weight within the category
};

struct Catalog {
    std::vector<std::string> categories;        // "c0", "c1", ...
    std::vector<CatalogProduct> products;       // grouped by category, popularity-descending
    std::vector<std::vector<size_t>> by_category; // category -> product indices, popularity-descending
    std::unordered_map<ProductId, size_t> index;  // product id -> products[] index

    size_t size() const { return products.size(); }
    int category_of(const ProductId& p) const;
};

// One query per category concept; "q3" denotes category 3 and returns that
// category's products ranked by popularity.
class MockSearchEngine {
public:
    explicit MockSearchEngine(const Catalog& catalog);

    // Exactly n products, popularity-ranked, all from the query's category.
    // Throws on unknown query ids or if the category is shallower than n.
    std::vector<ProductId> search(const std::string& query_id, int n) const;

    int category_of_query(const std::string& query_id) const;
    const std::vector<std::string>& queries() const { return queries_; }

private:
    std::vector<std::string> queries_;
    std::unordered_map<std::string, std::vector<ProductId>> ranked_;
    std::unordered_map<std::string, int> query_category_;
};

// Deterministic for a fixed config. Throws if products_per_category < query_top_n.
Catalog build_catalog(const WorldConfig& config);

// Category-sticky popularity-weighted walks; per-session RNG streams derived
// from (seed, session index), so output is independent of evaluation order.
std::vector<Session> generate_base_sessions(const Catalog& catalog, const WorldConfig& config,
                                            size_t count);

inline constexpr const char* kCatalogMagic = "#mvattrib-catalog v1";
void write_catalog(const std::string& path, const Catalog& catalog);
Catalog read_catalog(const std::string& path);

} // namespace mvattrib
