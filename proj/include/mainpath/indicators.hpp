#pragma once

// Bibliometric indicators over publication records: annual publication and
// citation trends (TP, AGR, CAGR, TC, CPP, Cited%, h-index), entity tallies,
// authorship buckets, collaboration classes, open-access shares, first-author
// gender distribution and altmetric coverage.
//
// Counting is whole (a record with three countries adds one publication to
// each); display rounding to two decimals happens at serialization only.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "mainpath/common.hpp"
#include "mainpath/csv.hpp"
#include "mainpath/records.hpp"

namespace mainpath {

// ---- growth rates and h-index ----------------------------------------------

inline double annual_growth_pct(long long previous_tp, long long current_tp) {
    if (previous_tp <= 0) throw AnalysisError("AGR undefined for a zero-publication base year");
    return 100.0 * static_cast<double>(current_tp - previous_tp) / static_cast<double>(previous_tp);
}

// ((v_final / v_begin)^(1/t) - 1) * 100, with t the inclusive year count of
// the span (1984-2020 -> 37).
inline double cagr(double v_begin, double v_final, int t_years) {
    if (v_begin <= 0.0) throw InputError("CAGR requires a positive starting value");
    if (t_years <= 0) throw InputError("CAGR requires a positive time span");
    return (std::pow(v_final / v_begin, 1.0 / static_cast<double>(t_years)) - 1.0) * 100.0;
}

// Largest h such that at least h values are >= h.
inline int h_index(std::vector<long long> citation_counts) {
    std::sort(citation_counts.begin(), citation_counts.end(), std::greater<>());
    int h = 0;
    for (std::size_t i = 0; i < citation_counts.size(); ++i) {
        if (citation_counts[i] >= static_cast<long long>(i + 1)) h = static_cast<int>(i + 1);
        else break;
    }
    return h;
}

// ---- annual table ------------------------------------------------------------

struct AnnualRow {
    int year = 0;
    long long tp = 0;
    long long tc = 0;
    long long cited = 0;               // publications with >= 1 citation
    std::optional<double> agr;         // null for the first year or after a TP=0 year
    std::optional<double> cpp;         // TC/TP; null when TP = 0
    std::optional<double> cited_pct;   // null when TP = 0
};

struct IndicatorTable {
    std::vector<AnnualRow> rows;  // every year of the covered span, ascending
    std::optional<double> cagr_pct;
    int cagr_t_years = 0;
    int h_index = 0;
    int excluded_no_year = 0;  // records without a year, left out of the rows
};

inline IndicatorTable annual_table(const std::vector<PublicationRecord>& records) {
    IndicatorTable table;
    std::map<int, AnnualRow> by_year;
    std::vector<long long> citations;
    citations.reserve(records.size());
    for (const auto& r : records) {
        citations.push_back(r.times_cited);
        if (!r.year) {
            ++table.excluded_no_year;
            continue;
        }
        AnnualRow& row = by_year[*r.year];
        row.year = *r.year;
        ++row.tp;
        row.tc += r.times_cited;
        if (r.times_cited > 0) ++row.cited;
    }
    table.h_index = h_index(std::move(citations));
    if (by_year.empty()) return table;

    int first = by_year.begin()->first;
    int last = by_year.rbegin()->first;
    long long prev_tp = -1;
    for (int y = first; y <= last; ++y) {
        AnnualRow row = by_year.count(y) ? by_year[y] : AnnualRow{};
        row.year = y;
        if (row.tp > 0) {
            row.cpp = static_cast<double>(row.tc) / static_cast<double>(row.tp);
            row.cited_pct = 100.0 * static_cast<double>(row.cited) / static_cast<double>(row.tp);
        }
        if (prev_tp > 0) row.agr = annual_growth_pct(prev_tp, row.tp);
        prev_tp = row.tp;
        table.rows.push_back(row);
    }
    table.cagr_t_years = last - first + 1;
    table.cagr_pct = cagr(static_cast<double>(table.rows.front().tp),
                          static_cast<double>(table.rows.back().tp), table.cagr_t_years);
    return table;
}

// Column layout follows the annual trends table; CAGR and h-index are
// dataset-level and appear on the first row only.
inline void write_annual_csv(const IndicatorTable& t, std::ostream& os) {
    csv::write_row(os, {"year", "tp", "agr_pct", "cagr_pct", "tc", "cpp", "cited_pct", "h_index"});
    bool first = true;
    for (const auto& r : t.rows) {
        csv::write_row(os, {std::to_string(r.year), std::to_string(r.tp),
                            r.agr ? to_fixed(*r.agr, 2) : "",
                            first && t.cagr_pct ? to_fixed(*t.cagr_pct, 2) : "",
                            std::to_string(r.tc), r.cpp ? to_fixed(*r.cpp, 2) : "",
                            r.cited_pct ? to_fixed(*r.cited_pct, 2) : "",
                            first ? std::to_string(t.h_index) : ""});
        first = false;
    }
}

// ---- entity tallies ------------------------------------------------------------

enum class EntityKey { Country, Institution, Funder, Sdg };

inline const char* to_string(EntityKey k) {
    switch (k) {
        case EntityKey::Country: return "country";
        case EntityKey::Institution: return "institution";
        case EntityKey::Funder: return "funder";
        case EntityKey::Sdg: return "sdg";
    }
    return "?";
}

struct EntityRow {
    std::string entity;
    long long tp = 0;
    long long tc = 0;
    long long cited = 0;
    double cpp = 0.0;
    double cited_pct = 0.0;
};

// Whole counting: a record contributes once to every distinct entity it
// lists. Rows sorted by TP descending, then entity name.
inline std::vector<EntityRow> entity_table(const std::vector<PublicationRecord>& records,
                                           EntityKey key) {
    std::map<std::string, EntityRow> rows;
    for (const auto& r : records) {
        const std::vector<std::string>* list = nullptr;
        switch (key) {
            case EntityKey::Country: list = &r.research_org_countries; break;
            case EntityKey::Institution: list = &r.research_orgs; break;
            case EntityKey::Funder: list = &r.funders; break;
            case EntityKey::Sdg: list = &r.category_sdg; break;
        }
        std::set<std::string> distinct(list->begin(), list->end());
        for (const auto& entity : distinct) {
            EntityRow& row = rows[entity];
            row.entity = entity;
            ++row.tp;
            row.tc += r.times_cited;
            if (r.times_cited > 0) ++row.cited;
        }
    }
    std::vector<EntityRow> out;
    out.reserve(rows.size());
    for (auto& [name, row] : rows) {
        row.cpp = static_cast<double>(row.tc) / static_cast<double>(row.tp);
        row.cited_pct = 100.0 * static_cast<double>(row.cited) / static_cast<double>(row.tp);
        out.push_back(row);
    }
    std::sort(out.begin(), out.end(), [](const EntityRow& a, const EntityRow& b) {
        if (a.tp != b.tp) return a.tp > b.tp;
        return a.entity < b.entity;
    });
    return out;
}

inline void write_entity_csv(const std::vector<EntityRow>& rows, EntityKey key, std::ostream& os) {
    csv::write_row(os, {to_string(key), "tp", "tc", "cpp", "cited_pct"});
    for (const auto& r : rows)
        csv::write_row(os, {r.entity, std::to_string(r.tp), std::to_string(r.tc),
                            to_fixed(r.cpp, 2), to_fixed(r.cited_pct, 2)});
}

// ---- authorship buckets ---------------------------------------------------------

// Buckets: 1, 2-5, 6-10, >10 authors (boundaries inclusive on the left three).
inline std::optional<int> authorship_bucket(int authors_count) {
    if (authors_count == 1) return 0;
    if (authors_count >= 2 && authors_count <= 5) return 1;
    if (authors_count >= 6 && authors_count <= 10) return 2;
    if (authors_count > 10) return 3;
    return std::nullopt;  // zero authors: unclassifiable
}

inline const std::array<const char*, 4>& authorship_bucket_names() {
    static const std::array<const char*, 4> names = {"1", "2-5", "6-10", ">10"};
    return names;
}

struct AuthorshipRow {
    int year = 0;
    std::array<long long, 4> count{};
    std::array<double, 4> share_pct{};
};

struct AuthorshipBuckets {
    std::vector<AuthorshipRow> rows;  // ascending year
    int excluded = 0;                 // missing authors_count or no year
};

inline AuthorshipBuckets authorship_buckets(const std::vector<PublicationRecord>& records) {
    AuthorshipBuckets out;
    std::map<int, AuthorshipRow> by_year;
    for (const auto& r : records) {
        if (!r.year || !r.authors_count) {
            ++out.excluded;
            continue;
        }
        auto bucket = authorship_bucket(*r.authors_count);
        if (!bucket) {
            ++out.excluded;
            continue;
        }
        AuthorshipRow& row = by_year[*r.year];
        row.year = *r.year;
        ++row.count[static_cast<std::size_t>(*bucket)];
    }
    for (auto& [year, row] : by_year) {
        long long total = 0;
        for (long long c : row.count) total += c;
        for (std::size_t b = 0; b < 4; ++b)
            row.share_pct[b] = total ? 100.0 * static_cast<double>(row.count[b]) /
                                           static_cast<double>(total)
                                     : 0.0;
        out.rows.push_back(row);
    }
    return out;
}

inline void write_authorship_csv(const AuthorshipBuckets& b, std::ostream& os) {
    std::vector<std::string> header{"year"};
    for (const char* name : authorship_bucket_names()) header.push_back(std::string(name) + "_pct");
    csv::write_row(os, header);
    for (const auto& r : b.rows) {
        std::vector<std::string> row{std::to_string(r.year)};
        for (double s : r.share_pct) row.push_back(to_fixed(s, 2));
        csv::write_row(os, row);
    }
}

// ---- collaboration classes ---------------------------------------------------------

enum class CollaborationClass { DomesticSingle, DomesticMulti, International };

inline const char* to_string(CollaborationClass c) {
    switch (c) {
        case CollaborationClass::DomesticSingle: return "domestic-single";
        case CollaborationClass::DomesticMulti: return "domestic-multi";
        case CollaborationClass::International: return "international";
    }
    return "?";
}

// nullopt when either list is empty (unclassifiable, reported by callers).
inline std::optional<CollaborationClass> collaboration_class(const PublicationRecord& r) {
    if (r.research_orgs.empty() || r.research_org_countries.empty()) return std::nullopt;
    std::set<std::string> countries(r.research_org_countries.begin(), r.research_org_countries.end());
    std::set<std::string> orgs(r.research_orgs.begin(), r.research_orgs.end());
    if (countries.size() >= 2) return CollaborationClass::International;
    if (orgs.size() >= 2) return CollaborationClass::DomesticMulti;
    return CollaborationClass::DomesticSingle;
}

struct CollaborationRow {
    int year = 0;
    std::array<long long, 3> count{};      // single, multi, international
    std::array<double, 3> share_pct{};
};

struct CollaborationBreakdown {
    std::vector<CollaborationRow> rows;
    int unclassified = 0;
};

inline CollaborationBreakdown collaboration_breakdown(const std::vector<PublicationRecord>& records) {
    CollaborationBreakdown out;
    std::map<int, CollaborationRow> by_year;
    for (const auto& r : records) {
        auto cls = collaboration_class(r);
        if (!cls || !r.year) {
            ++out.unclassified;
            continue;
        }
        CollaborationRow& row = by_year[*r.year];
        row.year = *r.year;
        ++row.count[static_cast<std::size_t>(*cls)];
    }
    for (auto& [year, row] : by_year) {
        long long total = row.count[0] + row.count[1] + row.count[2];
        for (std::size_t i = 0; i < 3; ++i)
            row.share_pct[i] = total ? 100.0 * static_cast<double>(row.count[i]) /
                                           static_cast<double>(total)
                                     : 0.0;
        out.rows.push_back(row);
    }
    return out;
}

inline void write_collaboration_csv(const CollaborationBreakdown& b, std::ostream& os) {
    csv::write_row(os, {"year", "domestic_single_pct", "domestic_multi_pct", "international_pct"});
    for (const auto& r : b.rows)
        csv::write_row(os, {std::to_string(r.year), to_fixed(r.share_pct[0], 2),
                            to_fixed(r.share_pct[1], 2), to_fixed(r.share_pct[2], 2)});
}

// ---- open access ---------------------------------------------------------------

struct OaYearRow {
    int year = 0;
    long long open = 0;
    long long closed = 0;  // includes records with no OA tag
    double open_pct = 0.0;
    double closed_pct = 0.0;
};

struct OaBreakdown {
    std::vector<OaYearRow> rows;
    // dataset-level distribution over the open types
    std::map<std::string, long long> type_count;
    std::map<std::string, double> type_share_pct;
};

inline OaBreakdown oa_breakdown(const std::vector<PublicationRecord>& records) {
    OaBreakdown out;
    std::map<int, OaYearRow> by_year;
    long long open_total = 0;
    for (const auto& r : records) {
        bool open = r.open_access && *r.open_access != OaTag::Closed;
        if (r.year) {
            OaYearRow& row = by_year[*r.year];
            row.year = *r.year;
            if (open) ++row.open;
            else ++row.closed;
        }
        if (open) {
            ++out.type_count[to_string(*r.open_access)];
            ++open_total;
        }
    }
    for (auto& [year, row] : by_year) {
        long long total = row.open + row.closed;
        row.open_pct = total ? 100.0 * static_cast<double>(row.open) / static_cast<double>(total) : 0.0;
        row.closed_pct = total ? 100.0 - row.open_pct : 0.0;
        out.rows.push_back(row);
    }
    for (const auto& [type, count] : out.type_count)
        out.type_share_pct[type] =
            open_total ? 100.0 * static_cast<double>(count) / static_cast<double>(open_total) : 0.0;
    return out;
}

inline void write_oa_csv(const OaBreakdown& b, std::ostream& os) {
    csv::write_row(os, {"year", "open", "closed", "open_pct", "closed_pct"});
    for (const auto& r : b.rows)
        csv::write_row(os, {std::to_string(r.year), std::to_string(r.open), std::to_string(r.closed),
                            to_fixed(r.open_pct, 2), to_fixed(r.closed_pct, 2)});
    os << '\n';
    csv::write_row(os, {"oa_type", "count", "share_pct"});
    for (const auto& [type, count] : b.type_count)
        csv::write_row(os, {type, std::to_string(count), to_fixed(b.type_share_pct.at(type), 2)});
}

// ---- gender distribution ----------------------------------------------------------

struct GenderYearRow {
    int year = 0;
    long long female = 0;
    long long male = 0;
    long long unknown = 0;
    double female_pct = 0.0;
    double male_pct = 0.0;
    double unknown_pct = 0.0;
};

// First-author lookup in the (name, country) gender map. Resolutions below
// min_accuracy, absent entries and records without authors count as unknown.
inline std::vector<GenderYearRow> gender_distribution(const std::vector<PublicationRecord>& records,
                                                      const GenderMap& map,
                                                      double min_accuracy = 70.0) {
    std::map<int, GenderYearRow> by_year;
    for (const auto& r : records) {
        if (!r.year) continue;
        GenderYearRow& row = by_year[*r.year];
        row.year = *r.year;
        Gender g = Gender::Unknown;
        if (!r.authors.empty()) {
            const std::string& first_author = r.authors.front();
            std::string country = r.research_org_countries.empty() ? "" : r.research_org_countries.front();
            const GenderMapEntry* entry = map.find(first_author, country);
            if (entry && entry->accuracy >= min_accuracy) g = entry->gender;
        }
        switch (g) {
            case Gender::Female: ++row.female; break;
            case Gender::Male: ++row.male; break;
            case Gender::Unknown: ++row.unknown; break;
        }
    }
    std::vector<GenderYearRow> out;
    for (auto& [year, row] : by_year) {
        double total = static_cast<double>(row.female + row.male + row.unknown);
        if (total > 0) {
            row.female_pct = 100.0 * static_cast<double>(row.female) / total;
            row.male_pct = 100.0 * static_cast<double>(row.male) / total;
            row.unknown_pct = 100.0 * static_cast<double>(row.unknown) / total;
        }
        out.push_back(row);
    }
    return out;
}

inline void write_gender_csv(const std::vector<GenderYearRow>& rows, std::ostream& os) {
    csv::write_row(os, {"year", "female_pct", "male_pct", "unknown_pct"});
    for (const auto& r : rows)
        csv::write_row(os, {std::to_string(r.year), to_fixed(r.female_pct, 2),
                            to_fixed(r.male_pct, 2), to_fixed(r.unknown_pct, 2)});
}

// ---- altmetric coverage -------------------------------------------------------------

struct PlatformCoverage {
    std::string platform;
    long long covered = 0;        // records in window with >= 1 mention on the platform
    long long mentions = 0;       // total mentions over covered records
    double coverage_pct = 0.0;
    double avg_mentions = 0.0;    // mentions / covered; 0 when nothing covered
};

struct AltmetricCoverage {
    int window_begin = 0;
    int window_end = 0;
    long long records_in_window = 0;
    long long covered_any = 0;  // records with >= 1 mention on any platform
    std::vector<PlatformCoverage> platforms;
};

inline AltmetricCoverage altmetric_coverage(const std::vector<PublicationRecord>& records,
                                            const MentionsTable& mentions, int window_begin,
                                            int window_end) {
    AltmetricCoverage out;
    out.window_begin = window_begin;
    out.window_end = window_end;
    static const std::array<const char*, 6> names = {"twitter", "facebook", "news",
                                                     "blog",    "wikipedia", "mendeley"};
    std::array<PlatformCoverage, 6> acc;
    for (std::size_t i = 0; i < 6; ++i) acc[i].platform = names[i];

    for (const auto& r : records) {
        if (!r.year || *r.year < window_begin || *r.year > window_end) continue;
        ++out.records_in_window;
        if (!r.doi) continue;
        auto it = mentions.by_doi.find(*r.doi);
        if (it == mentions.by_doi.end()) continue;
        const AltmetricMentionRecord& m = it->second;
        const long long counts[6] = {m.twitter, m.facebook, m.news, m.blog, m.wikipedia, m.mendeley};
        bool any = false;
        for (std::size_t i = 0; i < 6; ++i) {
            if (counts[i] > 0) {
                ++acc[i].covered;
                acc[i].mentions += counts[i];
                any = true;
            }
        }
        if (any) ++out.covered_any;
    }
    for (auto& p : acc) {
        p.coverage_pct = out.records_in_window
                             ? 100.0 * static_cast<double>(p.covered) /
                                   static_cast<double>(out.records_in_window)
                             : 0.0;
        p.avg_mentions = p.covered ? static_cast<double>(p.mentions) / static_cast<double>(p.covered)
                                   : 0.0;
        out.platforms.push_back(p);
    }
    return out;
}

inline void write_altmetric_csv(const AltmetricCoverage& c, std::ostream& os) {
    csv::write_row(os, {"platform", "covered", "coverage_pct", "avg_mentions"});
    for (const auto& p : c.platforms)
        csv::write_row(os, {p.platform, std::to_string(p.covered), to_fixed(p.coverage_pct, 2),
                            to_fixed(p.avg_mentions, 2)});
}

// ---- JSON report emitters (same tables, machine-friendly) -------------------

inline nlohmann::json to_json(const IndicatorTable& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : t.rows) {
        nlohmann::json row;
        row["year"] = r.year;
        row["tp"] = r.tp;
        row["tc"] = r.tc;
        row["agr_pct"] = r.agr ? nlohmann::json(*r.agr) : nlohmann::json();
        row["cpp"] = r.cpp ? nlohmann::json(*r.cpp) : nlohmann::json();
        row["cited_pct"] = r.cited_pct ? nlohmann::json(*r.cited_pct) : nlohmann::json();
        rows.push_back(row);
    }
    nlohmann::json j;
    j["rows"] = rows;
    j["cagr_pct"] = t.cagr_pct ? nlohmann::json(*t.cagr_pct) : nlohmann::json();
    j["cagr_t_years"] = t.cagr_t_years;
    j["h_index"] = t.h_index;
    j["excluded_no_year"] = t.excluded_no_year;
    return j;
}

inline nlohmann::json to_json(const std::vector<EntityRow>& rows, EntityKey key) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{to_string(key), r.entity},
                       {"tp", r.tp},
                       {"tc", r.tc},
                       {"cpp", r.cpp},
                       {"cited_pct", r.cited_pct}});
    return arr;
}

inline nlohmann::json to_json(const AuthorshipBuckets& b) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : b.rows) {
        nlohmann::json row{{"year", r.year}};
        for (std::size_t i = 0; i < 4; ++i) {
            row[std::string(authorship_bucket_names()[i]) + "_count"] = r.count[i];
            row[std::string(authorship_bucket_names()[i]) + "_pct"] = r.share_pct[i];
        }
        rows.push_back(row);
    }
    return {{"rows", rows}, {"excluded", b.excluded}};
}

inline nlohmann::json to_json(const CollaborationBreakdown& b) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : b.rows)
        rows.push_back({{"year", r.year},
                        {"domestic_single", r.count[0]},
                        {"domestic_multi", r.count[1]},
                        {"international", r.count[2]},
                        {"domestic_single_pct", r.share_pct[0]},
                        {"domestic_multi_pct", r.share_pct[1]},
                        {"international_pct", r.share_pct[2]}});
    return {{"rows", rows}, {"unclassified", b.unclassified}};
}

inline nlohmann::json to_json(const OaBreakdown& b) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : b.rows)
        rows.push_back({{"year", r.year},
                        {"open", r.open},
                        {"closed", r.closed},
                        {"open_pct", r.open_pct},
                        {"closed_pct", r.closed_pct}});
    nlohmann::json types = nlohmann::json::array();
    for (const auto& [type, count] : b.type_count)
        types.push_back({{"oa_type", type}, {"count", count}, {"share_pct", b.type_share_pct.at(type)}});
    return {{"rows", rows}, {"types", types}};
}

inline nlohmann::json to_json(const std::vector<GenderYearRow>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
        arr.push_back({{"year", r.year},
                       {"female", r.female},
                       {"male", r.male},
                       {"unknown", r.unknown},
                       {"female_pct", r.female_pct},
                       {"male_pct", r.male_pct},
                       {"unknown_pct", r.unknown_pct}});
    return arr;
}

inline nlohmann::json to_json(const AltmetricCoverage& c) {
    nlohmann::json platforms = nlohmann::json::array();
    for (const auto& p : c.platforms)
        platforms.push_back({{"platform", p.platform},
                             {"covered", p.covered},
                             {"mentions", p.mentions},
                             {"coverage_pct", p.coverage_pct},
                             {"avg_mentions", p.avg_mentions}});
    return {{"window_begin", c.window_begin},
            {"window_end", c.window_end},
            {"records_in_window", c.records_in_window},
            {"covered_any", c.covered_any},
            {"platforms", platforms}};
}

}  // namespace mainpath
