#include "diurnal/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <tuple>

#include "diurnal/common.hpp"

namespace diurnal {

struct TableAccess {
    static PostTable& mut(PostTable& t) { return t; }
    static auto& span(PostTable& t) { return t.span_; }
    static auto& users(PostTable& t) { return t.users_; }
    static auto& offsets(PostTable& t) { return t.offsets_; }
    static auto& timestamp(PostTable& t) { return t.timestamp_; }
    static auto& user(PostTable& t) { return t.user_; }
    static auto& kind(PostTable& t) { return t.kind_; }
    static auto& domain(PostTable& t) { return t.domain_; }
    static auto& category(PostTable& t) { return t.category_; }
    static auto& lat(PostTable& t) { return t.lat_; }
    static auto& lon(PostTable& t) { return t.lon_; }
    static auto& tz_id(PostTable& t) { return t.tz_id_; }
    static auto& local_second(PostTable& t) { return t.local_second_; }
    static auto& local_day(PostTable& t) { return t.local_day_; }
};

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

// Splits one line; double-quoted fields may contain the delimiter and "" escapes.
std::vector<std::string> split_fields(std::string_view line, char delim) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"' && cur.empty()) {
            quoted = true;
        } else if (c == delim) {
            out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(std::move(cur));
    for (auto& f : out) f = std::string(trim(f));
    return out;
}

std::optional<double> parse_double(std::string_view s) {
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

using RowKey = std::tuple<const std::string&, UnixSeconds, PostKind, const std::optional<std::string>&,
                          std::uint8_t>;

RowKey key_of(const PostRecord& r) {
    return {r.user_id, r.timestamp, r.kind, r.domain,
            r.category ? static_cast<std::uint8_t>(*r.category) : PostTable::kNoCategory};
}

}  // namespace

std::vector<ContentCategory> CategorySet::members() const {
    std::vector<ContentCategory> out;
    for (auto c : kAllCategories)
        if (contains(c)) out.push_back(c);
    return out;
}

std::string_view to_string(ContentCategory c) {
    switch (c) {
        case ContentCategory::Science: return "science";
        case ContentCategory::MainstreamMedia: return "mainstream_media";
        case ContentCategory::Satire: return "satire";
        case ContentCategory::Clickbait: return "clickbait";
        case ContentCategory::Other: return "other";
        case ContentCategory::Political: return "political";
        case ContentCategory::FakeOrHoax: return "fake_or_hoax";
        case ContentCategory::ConspiracyJunkScience: return "conspiracy_junk_science";
    }
    return "other";
}

std::string_view to_string(PostKind k) {
    switch (k) {
        case PostKind::Tweet: return "tweet";
        case PostKind::Retweet: return "retweet";
        case PostKind::Reply: return "reply";
    }
    return "tweet";
}

std::optional<ContentCategory> parse_category(std::string_view s) {
    std::string v = lower(trim(s));
    std::replace(v.begin(), v.end(), '-', '_');
    std::replace(v.begin(), v.end(), ' ', '_');
    if (v == "science") return ContentCategory::Science;
    if (v == "mainstream_media" || v == "mainstreammedia" || v == "mainstream") return ContentCategory::MainstreamMedia;
    if (v == "satire") return ContentCategory::Satire;
    if (v == "clickbait") return ContentCategory::Clickbait;
    if (v == "other") return ContentCategory::Other;
    if (v == "political" || v == "politically_biased") return ContentCategory::Political;
    if (v == "fake_or_hoax" || v == "fakeorhoax" || v == "fake/hoax" || v == "fake") return ContentCategory::FakeOrHoax;
    if (v == "conspiracy_junk_science" || v == "conspiracyjunkscience" || v == "conspiracy_&_junk_science" ||
        v == "conspiracy")
        return ContentCategory::ConspiracyJunkScience;
    return std::nullopt;
}

std::optional<PostKind> parse_post_kind(std::string_view s) {
    std::string v = lower(trim(s));
    if (v == "tweet" || v == "t") return PostKind::Tweet;
    if (v == "retweet" || v == "rt") return PostKind::Retweet;
    if (v == "reply" || v == "r") return PostKind::Reply;
    return std::nullopt;
}

AnalysisSpan AnalysisSpan::from_dates(CivilDate first_day, CivilDate end_exclusive) {
    return {days_from_civil(first_day) * 86400, days_from_civil(end_exclusive) * 86400};
}

AnalysisSpan AnalysisSpan::study_default() {
    return from_dates({2020, 1, 22}, {2022, 8, 1});
}

std::optional<std::size_t> PostTable::user_index(std::string_view user) const {
    auto it = std::lower_bound(users_.begin(), users_.end(), user);
    if (it == users_.end() || *it != user) return std::nullopt;
    return static_cast<std::size_t>(it - users_.begin());
}

std::optional<double> PostTable::lat(std::size_t row) const {
    if (std::isnan(lat_[row])) return std::nullopt;
    return lat_[row];
}

std::optional<double> PostTable::lon(std::size_t row) const {
    if (std::isnan(lon_[row])) return std::nullopt;
    return lon_[row];
}

PostRecord PostTable::record(std::size_t row) const {
    PostRecord r;
    r.timestamp = timestamp_[row];
    r.user_id = users_[user_[row]];
    r.kind = kind_[row];
    if (!domain_[row].empty()) r.domain = domain_[row];
    r.category = category(row);
    r.lat = lat(row);
    r.lon = lon(row);
    return r;
}

PostTable PostTable::build(std::vector<PostRecord> rows, AnalysisSpan span, std::size_t* duplicates) {
    std::sort(rows.begin(), rows.end(), [](const PostRecord& a, const PostRecord& b) {
        return key_of(a) < key_of(b);
    });
    const auto before = rows.size();
    rows.erase(std::unique(rows.begin(), rows.end(),
                           [](const PostRecord& a, const PostRecord& b) { return key_of(a) == key_of(b); }),
               rows.end());
    if (duplicates) *duplicates = before - rows.size();

    PostTable t;
    t.span_ = span;
    const std::size_t n = rows.size();
    t.timestamp_.reserve(n);
    t.user_.reserve(n);
    t.kind_.reserve(n);
    t.domain_.reserve(n);
    t.category_.reserve(n);
    t.lat_.reserve(n);
    t.lon_.reserve(n);
    constexpr double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < n; ++i) {
        auto& r = rows[i];
        if (t.users_.empty() || t.users_.back() != r.user_id) {
            if (!t.users_.empty()) t.offsets_.push_back(i);
            t.users_.push_back(r.user_id);
        }
        t.timestamp_.push_back(r.timestamp);
        t.user_.push_back(static_cast<std::uint32_t>(t.users_.size() - 1));
        t.kind_.push_back(r.kind);
        t.domain_.push_back(r.domain.value_or(std::string{}));
        t.category_.push_back(r.category ? static_cast<std::uint8_t>(*r.category) : kNoCategory);
        t.lat_.push_back(r.lat.value_or(nan));
        t.lon_.push_back(r.lon.value_or(nan));
    }
    if (!t.users_.empty()) t.offsets_.push_back(n);
    return t;
}

ParseResult parse_posts(std::istream& in, const ParseOptions& opts) {
    ParseResult result;
    std::string line;
    std::size_t lineno = 0;
    // Skip blank/comment lines before the header.
    while (std::getline(in, line)) {
        ++lineno;
        if (!trim(line).empty() && line[0] != '#') break;
        line.clear();
    }
    if (trim(line).empty()) return result;

    const char delim = opts.delimiter != 0 ? opts.delimiter
                                           : (line.find('\t') != std::string::npos ? '\t' : ',');
    const auto header = split_fields(line, delim);
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        if (name.empty()) return std::nullopt;
        for (std::size_t i = 0; i < header.size(); ++i)
            if (lower(header[i]) == lower(name)) return i;
        return std::nullopt;
    };
    const auto& sc = opts.schema;
    const auto c_ts = column(sc.ts);
    const auto c_user = column(sc.user);
    const auto c_kind = column(sc.kind);
    if (!c_ts || !c_user || !c_kind)
        throw InputError("posts header must name the timestamp, user and kind columns (got '" + line + "')");
    const auto c_dc = column(sc.domain_or_category);
    const auto c_domain = column(sc.domain);
    const auto c_category = column(sc.category);
    const auto c_lat = column(sc.lat);
    const auto c_lon = column(sc.lon);

    std::vector<PostRecord> rows;
    auto reject = [&](std::string reason) {
        ++result.counters.rejected;
        result.rejects.push_back({lineno, std::move(reason)});
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || line[0] == '#') continue;
        ++result.counters.rows_read;
        const auto f = split_fields(line, delim);
        auto field = [&](const std::optional<std::size_t>& c) -> std::string_view {
            if (!c || *c >= f.size()) return {};
            return f[*c];
        };
        if (f.size() < header.size()) {
            // Trailing optional columns may be omitted; required ones may not.
            const std::size_t need = std::max({*c_ts, *c_user, *c_kind}) + 1;
            if (f.size() < need) {
                reject("too few fields");
                continue;
            }
        }
        PostRecord r;
        auto ts = parse_iso_utc(field(c_ts));
        if (!ts) {
            reject("bad timestamp '" + std::string(field(c_ts)) + "'");
            continue;
        }
        r.timestamp = *ts;
        r.user_id = std::string(field(c_user));
        if (r.user_id.empty()) {
            reject("empty user");
            continue;
        }
        auto kind = parse_post_kind(field(c_kind));
        if (!kind) {
            reject("bad post kind '" + std::string(field(c_kind)) + "'");
            continue;
        }
        r.kind = *kind;

        if (auto v = field(c_dc); !v.empty()) {
            if (auto cat = parse_category(v)) r.category = cat;
            else r.domain = lower(v);
        }
        if (auto v = field(c_domain); !v.empty()) r.domain = lower(v);
        if (auto v = field(c_category); !v.empty()) {
            auto cat = parse_category(v);
            if (!cat) {
                reject("unknown category '" + std::string(v) + "'");
                continue;
            }
            r.category = cat;
        }
        bool bad_coord = false;
        if (auto v = field(c_lat); !v.empty()) {
            r.lat = parse_double(v);
            bad_coord |= !r.lat || std::abs(*r.lat) > 90.0;
        }
        if (auto v = field(c_lon); !v.empty()) {
            r.lon = parse_double(v);
            bad_coord |= !r.lon || std::abs(*r.lon) > 180.0;
        }
        if (bad_coord || r.lat.has_value() != r.lon.has_value()) {
            reject("bad coordinates");
            continue;
        }
        if (!opts.span.contains(r.timestamp)) {
            ++result.counters.out_of_span;
            continue;
        }
        rows.push_back(std::move(r));
    }

    const auto& c = result.counters;
    if (c.rows_read > 0 &&
        static_cast<double>(c.rejected) > opts.max_reject_fraction * static_cast<double>(c.rows_read)) {
        throw InputError(std::to_string(c.rejected) + " of " + std::to_string(c.rows_read) +
                         " rows rejected (first: line " + std::to_string(result.rejects.front().line) + ": " +
                         result.rejects.front().reason + ")");
    }
    result.table = PostTable::build(std::move(rows), opts.span, &result.counters.duplicates_dropped);
    return result;
}

CategoryMap read_category_map(std::istream& in) {
    CategoryMap map;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || line[0] == '#') continue;
        auto f = split_fields(line, line.find('\t') != std::string::npos ? '\t' : ',');
        if (f.size() < 2) throw InputError("category map line " + std::to_string(lineno) + ": expected 2 fields");
        auto cat = parse_category(f[1]);
        if (!cat) {
            if (lineno == 1) continue;  // header
            throw InputError("category map line " + std::to_string(lineno) + ": unknown category '" + f[1] + "'");
        }
        map[lower(f[0])] = *cat;
    }
    return map;
}

BotList read_bot_list(std::istream& in) {
    BotList bots;
    std::string line;
    while (std::getline(in, line)) {
        auto v = trim(line);
        if (v.empty() || v[0] == '#') continue;
        bots.insert(std::string(v));
    }
    return bots;
}

PostTable map_and_filter(const PostTable& table, const CategoryMap& category_map, const BotList& bots,
                         FilterReport* report) {
    FilterReport rep;
    PostTable out;
    auto& A = TableAccess::mut(out);
    TableAccess::span(A) = table.span();
    TableAccess::tz_id(A) = table.tz_id();
    const bool local = table.localized();
    for (std::size_t u = 0; u < table.user_count(); ++u) {
        const auto [first, last] = table.user_rows(u);
        if (bots.contains(table.users()[u])) {
            rep.bot_removed += last - first;
            continue;
        }
        TableAccess::users(A).push_back(table.users()[u]);
        const auto new_u = static_cast<std::uint32_t>(TableAccess::users(A).size() - 1);
        for (std::size_t r = first; r < last; ++r) {
            std::uint8_t cat = PostTable::kNoCategory;
            if (auto c = table.category(r)) {
                cat = static_cast<std::uint8_t>(*c);
            } else if (!table.domain(r).empty()) {
                auto it = category_map.find(table.domain(r));
                if (it != category_map.end()) {
                    cat = static_cast<std::uint8_t>(it->second);
                    ++rep.mapped;
                }
            }
            if (cat == PostTable::kNoCategory) {
                cat = static_cast<std::uint8_t>(ContentCategory::Other);
                ++rep.other;
            }
            TableAccess::timestamp(A).push_back(table.timestamp(r));
            TableAccess::user(A).push_back(new_u);
            TableAccess::kind(A).push_back(table.kind(r));
            TableAccess::domain(A).push_back(table.domain(r));
            TableAccess::category(A).push_back(cat);
            TableAccess::lat(A).push_back(table.lat(r).value_or(std::numeric_limits<double>::quiet_NaN()));
            TableAccess::lon(A).push_back(table.lon(r).value_or(std::numeric_limits<double>::quiet_NaN()));
            if (local) {
                TableAccess::local_second(A).push_back(table.local_second(r));
                TableAccess::local_day(A).push_back(table.local_day(r));
            }
        }
        TableAccess::offsets(A).push_back(TableAccess::timestamp(A).size());
    }
    if (report) *report = rep;
    return out;
}

PostTable localize(const PostTable& table, const TzRule& rule, LocalizeReport* report) {
    PostTable out = table;
    auto& sec = TableAccess::local_second(out);
    auto& day = TableAccess::local_day(out);
    sec.resize(table.size());
    day.resize(table.size());
    LocalizeReport rep;
    for (std::size_t r = 0; r < table.size(); ++r) {
        const LocalTime lt = to_local(table.timestamp(r), rule);
        sec[r] = lt.second;
        day[r] = lt.day;
        rep.dst_gap += lt.dst_gap ? 1 : 0;
        rep.dst_overlap += lt.dst_overlap ? 1 : 0;
    }
    TableAccess::tz_id(out) = rule.id();
    if (report) *report = rep;
    return out;
}

std::map<std::string, Coordinate> read_user_coordinates(std::istream& in) {
    std::map<std::string, Coordinate> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty() || line[0] == '#') continue;
        auto f = split_fields(line, line.find('\t') != std::string::npos ? '\t' : ',');
        if (f.size() < 3) throw InputError("coordinate line " + std::to_string(lineno) + ": expected 3 fields");
        auto lat = parse_double(f[1]);
        auto lon = parse_double(f[2]);
        if (!lat || !lon) {
            if (lineno == 1) continue;  // header
            throw InputError("coordinate line " + std::to_string(lineno) + ": bad number");
        }
        out[f[0]] = {*lat, *lon};
    }
    return out;
}

std::vector<Coordinate> resolve_user_coordinates(const PostTable& table,
                                                 const std::map<std::string, Coordinate>& fallback,
                                                 Coordinate centroid) {
    std::vector<Coordinate> out(table.user_count(), centroid);
    for (std::size_t u = 0; u < table.user_count(); ++u) {
        const auto [first, last] = table.user_rows(u);
        double slat = 0.0, slon = 0.0;
        std::size_t k = 0;
        for (std::size_t r = first; r < last; ++r) {
            if (auto la = table.lat(r)) {
                slat += *la;
                slon += *table.lon(r);
                ++k;
            }
        }
        if (k > 0) {
            out[u] = {slat / static_cast<double>(k), slon / static_cast<double>(k)};
        } else if (auto it = fallback.find(table.users()[u]); it != fallback.end()) {
            out[u] = it->second;
        }
    }
    return out;
}

void write_posts(std::ostream& out, const PostTable& table) {
    out << "ts\tuser\tkind\tdomain|category\tlat\tlon\n";
    char buf[32];
    for (std::size_t r = 0; r < table.size(); ++r) {
        out << format_iso_utc(table.timestamp(r)) << '\t' << table.users()[table.user_of(r)] << '\t'
            << to_string(table.kind(r)) << '\t';
        if (auto c = table.category(r)) out << to_string(*c);
        else out << table.domain(r);
        out << '\t';
        if (auto la = table.lat(r)) {
            std::snprintf(buf, sizeof buf, "%.6f", *la);
            out << buf << '\t';
            std::snprintf(buf, sizeof buf, "%.6f", *table.lon(r));
            out << buf;
        } else {
            out << '\t';
        }
        out << '\n';
    }
}

}  // namespace diurnal
