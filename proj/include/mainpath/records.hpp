#pragma once

// Publication metadata ingestion. Records arrive as JSON lines, one object
// per line, with the field names used throughout the toolkit. Malformed
// lines are collected with line numbers instead of aborting the parse;
// callers decide whether any error is fatal.

#include <algorithm>
#include <array>
#include <chrono>
#include <ctime>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "mainpath/common.hpp"
#include "mainpath/csv.hpp"

namespace mainpath {

enum class OaTag { Closed, Green, Bronze, Hybrid, Gold };

inline const char* to_string(OaTag t) {
    switch (t) {
        case OaTag::Closed: return "closed";
        case OaTag::Green: return "green";
        case OaTag::Bronze: return "bronze";
        case OaTag::Hybrid: return "hybrid";
        case OaTag::Gold: return "gold";
    }
    return "?";
}

inline std::optional<OaTag> oa_tag_from_string(std::string_view s) {
    if (s == "closed") return OaTag::Closed;
    if (s == "green") return OaTag::Green;
    if (s == "bronze") return OaTag::Bronze;
    if (s == "hybrid") return OaTag::Hybrid;
    if (s == "gold") return OaTag::Gold;
    return std::nullopt;
}

struct ConceptScore {
    std::string term;
    double score = 0.0;  // relevance in [0,1]

    friend bool operator==(const ConceptScore&, const ConceptScore&) = default;
};

struct PublicationRecord {
    std::string id;
    std::optional<std::string> doi;
    std::optional<int> year;
    std::vector<std::string> authors;  // ordered; sequence position = index + 1
    std::optional<int> authors_count;
    std::vector<std::string> research_orgs;
    std::vector<std::string> research_org_countries;
    std::vector<std::string> referenced_pubs;  // ids of works this record cites
    std::optional<OaTag> open_access;
    std::vector<std::string> category_sdg;
    std::vector<ConceptScore> concepts_scores;
    long long times_cited = 0;
    std::vector<std::string> funders;
    nlohmann::json extra = nlohmann::json::object();  // unknown fields, preserved verbatim

    friend bool operator==(const PublicationRecord&, const PublicationRecord&) = default;
};

enum class Gender { Female, Male, Unknown };

inline const char* to_string(Gender g) {
    switch (g) {
        case Gender::Female: return "female";
        case Gender::Male: return "male";
        case Gender::Unknown: return "unknown";
    }
    return "?";
}

struct GenderMapEntry {
    std::string name;
    std::string country;
    Gender gender = Gender::Unknown;
    double accuracy = 0.0;  // percent in [0,100]
};

struct AltmetricMentionRecord {
    std::string doi;
    long long twitter = 0;
    long long facebook = 0;
    long long news = 0;
    long long blog = 0;
    long long wikipedia = 0;
    long long mendeley = 0;
};

struct LineError {
    std::size_t line;  // 1-based
    std::string reason;
};

struct ParseResult {
    std::vector<PublicationRecord> records;  // in input order
    std::vector<LineError> errors;
};

namespace detail {

inline int current_year_utc() {
    std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    return tm_utc.tm_year + 1900;
}

inline std::vector<std::string> string_list(const nlohmann::json& j, const char* field) {
    if (!j.is_array()) throw InputError(std::string(field) + " must be an array of strings");
    std::vector<std::string> out;
    out.reserve(j.size());
    for (const auto& v : j) {
        if (!v.is_string()) throw InputError(std::string(field) + " must be an array of strings");
        out.push_back(v.get<std::string>());
    }
    return out;
}

inline const std::array<const char*, 13>& known_record_fields() {
    static const std::array<const char*, 13> fields = {
        "id", "doi", "year", "authors", "authors_count", "research_orgs",
        "research_org_countries", "referenced_pubs", "open_access",
        "category_sdg", "concepts_scores", "times_cited", "funders"};
    return fields;
}

inline PublicationRecord record_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("record line is not a JSON object");
    PublicationRecord r;

    if (!j.contains("id") || !j.at("id").is_string() || j.at("id").get<std::string>().empty())
        throw InputError("missing or empty \"id\"");
    r.id = j.at("id").get<std::string>();

    if (j.contains("doi")) {
        if (!j.at("doi").is_string()) throw InputError("\"doi\" must be a string");
        r.doi = j.at("doi").get<std::string>();
    }
    if (j.contains("year")) {
        if (!j.at("year").is_number_integer()) throw InputError("\"year\" must be an integer");
        int y = j.at("year").get<int>();
        int max_year = current_year_utc();
        if (y < 1900 || y > max_year)
            throw InputError("\"year\" " + std::to_string(y) + " outside [1900, " +
                             std::to_string(max_year) + "]");
        r.year = y;
    }
    if (j.contains("authors")) r.authors = string_list(j.at("authors"), "authors");
    if (j.contains("authors_count")) {
        if (!j.at("authors_count").is_number_integer() || j.at("authors_count").get<long long>() < 0)
            throw InputError("\"authors_count\" must be a non-negative integer");
        r.authors_count = j.at("authors_count").get<int>();
        if (!r.authors.empty() && *r.authors_count != static_cast<int>(r.authors.size()))
            throw InputError("\"authors_count\" (" + std::to_string(*r.authors_count) +
                             ") does not match authors length (" + std::to_string(r.authors.size()) + ")");
    } else if (!r.authors.empty()) {
        r.authors_count = static_cast<int>(r.authors.size());
    }
    if (j.contains("research_orgs")) r.research_orgs = string_list(j.at("research_orgs"), "research_orgs");
    if (j.contains("research_org_countries"))
        r.research_org_countries = string_list(j.at("research_org_countries"), "research_org_countries");
    if (j.contains("referenced_pubs")) r.referenced_pubs = string_list(j.at("referenced_pubs"), "referenced_pubs");
    if (j.contains("open_access")) {
        if (!j.at("open_access").is_string()) throw InputError("\"open_access\" must be a string");
        auto tag = oa_tag_from_string(j.at("open_access").get<std::string>());
        if (!tag)
            throw InputError("unknown \"open_access\" tag \"" + j.at("open_access").get<std::string>() + "\"");
        r.open_access = *tag;
    }
    if (j.contains("category_sdg")) r.category_sdg = string_list(j.at("category_sdg"), "category_sdg");
    if (j.contains("concepts_scores")) {
        const auto& cs = j.at("concepts_scores");
        if (!cs.is_array()) throw InputError("\"concepts_scores\" must be an array");
        for (const auto& item : cs) {
            if (!item.is_object() || !item.contains("concept") || !item.contains("score") ||
                !item.at("concept").is_string() || !item.at("score").is_number())
                throw InputError("\"concepts_scores\" entries must be {\"concept\": string, \"score\": number}");
            double s = item.at("score").get<double>();
            if (s < 0.0 || s > 1.0)
                throw InputError("concept relevance score " + std::to_string(s) + " outside [0,1]");
            r.concepts_scores.push_back({item.at("concept").get<std::string>(), s});
        }
    }
    if (j.contains("times_cited")) {
        if (!j.at("times_cited").is_number_integer() || j.at("times_cited").get<long long>() < 0)
            throw InputError("\"times_cited\" must be a non-negative integer");
        r.times_cited = j.at("times_cited").get<long long>();
    }
    if (j.contains("funders")) r.funders = string_list(j.at("funders"), "funders");

    for (auto it = j.begin(); it != j.end(); ++it) {
        const auto& known = known_record_fields();
        if (std::find_if(known.begin(), known.end(),
                         [&](const char* f) { return it.key() == f; }) == known.end())
            r.extra[it.key()] = it.value();
    }
    return r;
}

}  // namespace detail

// Parses JSON-lines publication records. Every input line is either accepted
// or reported: accepted + reported == line count. A later line reusing an
// already-seen id is reported as a duplicate and dropped.
inline ParseResult parse_records(std::istream& in) {
    ParseResult result;
    std::unordered_set<std::string> seen_ids;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            result.errors.push_back({line_no, "empty line"});
            continue;
        }
        try {
            nlohmann::json j = nlohmann::json::parse(line);
            PublicationRecord r = detail::record_from_json(j);
            if (!seen_ids.insert(r.id).second) {
                result.errors.push_back({line_no, "duplicate id \"" + r.id + "\""});
                continue;
            }
            result.records.push_back(std::move(r));
        } catch (const nlohmann::json::parse_error& e) {
            result.errors.push_back({line_no, std::string("invalid JSON: ") + e.what()});
        } catch (const InputError& e) {
            result.errors.push_back({line_no, e.what()});
        }
    }
    return result;
}

inline nlohmann::json record_to_json(const PublicationRecord& r) {
    nlohmann::json j = r.extra.is_object() ? r.extra : nlohmann::json::object();
    j["id"] = r.id;
    if (r.doi) j["doi"] = *r.doi;
    if (r.year) j["year"] = *r.year;
    if (!r.authors.empty()) j["authors"] = r.authors;
    if (r.authors_count) j["authors_count"] = *r.authors_count;
    if (!r.research_orgs.empty()) j["research_orgs"] = r.research_orgs;
    if (!r.research_org_countries.empty()) j["research_org_countries"] = r.research_org_countries;
    if (!r.referenced_pubs.empty()) j["referenced_pubs"] = r.referenced_pubs;
    if (r.open_access) j["open_access"] = to_string(*r.open_access);
    if (!r.category_sdg.empty()) j["category_sdg"] = r.category_sdg;
    if (!r.concepts_scores.empty()) {
        nlohmann::json cs = nlohmann::json::array();
        for (const auto& c : r.concepts_scores) cs.push_back({{"concept", c.term}, {"score", c.score}});
        j["concepts_scores"] = cs;
    }
    if (r.times_cited != 0) j["times_cited"] = r.times_cited;
    if (!r.funders.empty()) j["funders"] = r.funders;
    return j;
}

inline void write_records_jsonl(const std::vector<PublicationRecord>& records, std::ostream& os) {
    for (const auto& r : records) os << record_to_json(r).dump() << '\n';
}

// ---- gender map sidecar: "name,country,gender,accuracy" -------------------

struct GenderMap {
    // keyed by (name, country)
    std::unordered_map<std::string, GenderMapEntry> entries;
    std::vector<LineError> errors;

    static std::string key(std::string_view name, std::string_view country) {
        return std::string(name) + "\x1f" + std::string(country);
    }
    const GenderMapEntry* find(std::string_view name, std::string_view country) const {
        auto it = entries.find(key(name, country));
        return it == entries.end() ? nullptr : &it->second;
    }
};

inline GenderMap parse_gender_map(std::istream& in) {
    GenderMap map;
    std::string line;
    std::size_t line_no = 0;
    bool header_checked = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = csv::parse_line(line);
        if (!header_checked) {
            header_checked = true;
            if (fields == std::vector<std::string>{"name", "country", "gender", "accuracy"}) continue;
            map.errors.push_back({line_no, "expected header \"name,country,gender,accuracy\""});
            continue;
        }
        if (fields.size() != 4) {
            map.errors.push_back({line_no, "expected 4 fields, got " + std::to_string(fields.size())});
            continue;
        }
        GenderMapEntry e;
        e.name = fields[0];
        e.country = fields[1];
        if (fields[2] == "female") e.gender = Gender::Female;
        else if (fields[2] == "male") e.gender = Gender::Male;
        else if (fields[2] == "unknown") e.gender = Gender::Unknown;
        else {
            map.errors.push_back({line_no, "unknown gender \"" + fields[2] + "\""});
            continue;
        }
        try {
            e.accuracy = std::stod(fields[3]);
        } catch (...) {
            map.errors.push_back({line_no, "non-numeric accuracy \"" + fields[3] + "\""});
            continue;
        }
        if (e.accuracy < 0.0 || e.accuracy > 100.0) {
            map.errors.push_back({line_no, "accuracy " + fields[3] + " outside [0,100]"});
            continue;
        }
        map.entries[GenderMap::key(e.name, e.country)] = e;
    }
    return map;
}

inline void write_gender_map(const GenderMap& map, std::ostream& os) {
    csv::write_row(os, {"name", "country", "gender", "accuracy"});
    std::vector<const GenderMapEntry*> rows;
    rows.reserve(map.entries.size());
    for (const auto& [k, e] : map.entries) rows.push_back(&e);
    std::sort(rows.begin(), rows.end(), [](const GenderMapEntry* a, const GenderMapEntry* b) {
        return std::tie(a->name, a->country) < std::tie(b->name, b->country);
    });
    for (const auto* e : rows)
        csv::write_row(os, {e->name, e->country, to_string(e->gender), to_roundtrip(e->accuracy)});
}

// ---- altmetric mentions sidecar: "doi,twitter,facebook,news,blog,wikipedia,mendeley"

struct MentionsTable {
    std::unordered_map<std::string, AltmetricMentionRecord> by_doi;
    std::vector<LineError> errors;
};

inline MentionsTable parse_mentions(std::istream& in) {
    MentionsTable table;
    std::string line;
    std::size_t line_no = 0;
    bool header_checked = false;
    const std::vector<std::string> header = {"doi",  "twitter",   "facebook", "news",
                                             "blog", "wikipedia", "mendeley"};
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto fields = csv::parse_line(line);
        if (!header_checked) {
            header_checked = true;
            if (fields == header) continue;
            table.errors.push_back({line_no, "expected header \"doi,twitter,facebook,news,blog,wikipedia,mendeley\""});
            continue;
        }
        if (fields.size() != 7) {
            table.errors.push_back({line_no, "expected 7 fields, got " + std::to_string(fields.size())});
            continue;
        }
        AltmetricMentionRecord m;
        m.doi = fields[0];
        long long* counts[] = {&m.twitter, &m.facebook, &m.news, &m.blog, &m.wikipedia, &m.mendeley};
        bool ok = true;
        for (int i = 0; i < 6; ++i) {
            try {
                *counts[i] = std::stoll(fields[i + 1]);
            } catch (...) {
                table.errors.push_back({line_no, "non-numeric count \"" + fields[i + 1] + "\""});
                ok = false;
                break;
            }
            if (*counts[i] < 0) {
                table.errors.push_back({line_no, "negative count " + fields[i + 1]});
                ok = false;
                break;
            }
        }
        if (ok) table.by_doi[m.doi] = m;
    }
    return table;
}

}  // namespace mainpath
