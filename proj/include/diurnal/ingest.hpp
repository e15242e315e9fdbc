#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "diurnal/timeutil.hpp"

namespace diurnal {

enum class PostKind : std::uint8_t { Tweet, Retweet, Reply };

/// Source-reliability categories. The last three form the potentially
/// disinformative composite.
enum class ContentCategory : std::uint8_t {
    Science,
    MainstreamMedia,
    Satire,
    Clickbait,
    Other,
    Political,
    FakeOrHoax,
    ConspiracyJunkScience,
};

inline constexpr std::size_t kCategoryCount = 8;

inline constexpr std::array<ContentCategory, kCategoryCount> kAllCategories = {
    ContentCategory::Science,   ContentCategory::MainstreamMedia, ContentCategory::Satire,
    ContentCategory::Clickbait, ContentCategory::Other,           ContentCategory::Political,
    ContentCategory::FakeOrHoax, ContentCategory::ConspiracyJunkScience,
};

constexpr bool is_disinformative(ContentCategory c) {
    return c == ContentCategory::Political || c == ContentCategory::FakeOrHoax ||
           c == ContentCategory::ConspiracyJunkScience;
}

/// A subset of categories stored as a bitmask.
class CategorySet {
public:
    constexpr CategorySet() = default;
    constexpr CategorySet(std::initializer_list<ContentCategory> cs) {
        for (auto c : cs) insert(c);
    }
    constexpr void insert(ContentCategory c) { bits_ |= bit(c); }
    constexpr bool contains(ContentCategory c) const { return (bits_ & bit(c)) != 0; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool subset_of(CategorySet o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr std::uint8_t bits() const { return bits_; }
    std::vector<ContentCategory> members() const;

    /// Every category (F).
    static constexpr CategorySet all() { return from_bits(0xFF); }
    /// Everything except Other (F^K).
    static constexpr CategorySet known() {
        return from_bits(static_cast<std::uint8_t>(0xFF & ~bit(ContentCategory::Other)));
    }
    /// Political, FakeOrHoax, ConspiracyJunkScience (F^H).
    static constexpr CategorySet disinformative() {
        return {ContentCategory::Political, ContentCategory::FakeOrHoax,
                ContentCategory::ConspiracyJunkScience};
    }

    friend constexpr bool operator==(CategorySet, CategorySet) = default;

private:
    static constexpr std::uint8_t bit(ContentCategory c) {
        return static_cast<std::uint8_t>(1u << static_cast<unsigned>(c));
    }
    static constexpr CategorySet from_bits(std::uint8_t b) {
        CategorySet s;
        s.bits_ = b;
        return s;
    }
    std::uint8_t bits_ = 0;
};

std::string_view to_string(ContentCategory c);
std::string_view to_string(PostKind k);
/// Case-insensitive; accepts snake_case tokens and a few spelled-out aliases.
std::optional<ContentCategory> parse_category(std::string_view s);
std::optional<PostKind> parse_post_kind(std::string_view s);

struct PostRecord {
    UnixSeconds timestamp = 0;
    std::string user_id;
    PostKind kind = PostKind::Tweet;
    std::optional<std::string> domain;
    std::optional<ContentCategory> category;
    std::optional<double> lat;
    std::optional<double> lon;
};

/// Half-open UTC span [begin, end).
struct AnalysisSpan {
    UnixSeconds begin = 0;
    UnixSeconds end = 0;

    static AnalysisSpan from_dates(CivilDate first_day, CivilDate end_exclusive);
    /// January 22, 2020 up to August 1st, 2022.
    static AnalysisSpan study_default();
    bool contains(UnixSeconds t) const { return t >= begin && t < end; }
    std::int64_t days() const { return (end - begin + 86399) / 86400; }
};

/// Column store of posts, sorted by (user, timestamp) with contiguous
/// per-user ranges. Immutable once built.
class PostTable {
public:
    static constexpr std::uint8_t kNoCategory = 0xFF;

    PostTable() = default;
    /// Sorts, deduplicates and indexes. Returns the number of duplicates dropped
    /// through `duplicates`.
    static PostTable build(std::vector<PostRecord> rows, AnalysisSpan span,
                           std::size_t* duplicates = nullptr);

    std::size_t size() const { return timestamp_.size(); }
    bool empty() const { return timestamp_.empty(); }
    const AnalysisSpan& span() const { return span_; }

    std::size_t user_count() const { return users_.size(); }
    const std::vector<std::string>& users() const { return users_; }
    std::optional<std::size_t> user_index(std::string_view user) const;
    /// Row range [first, last) of user `u`.
    std::pair<std::size_t, std::size_t> user_rows(std::size_t u) const {
        return {offsets_[u], offsets_[u + 1]};
    }
    std::size_t user_post_count(std::size_t u) const { return offsets_[u + 1] - offsets_[u]; }

    UnixSeconds timestamp(std::size_t row) const { return timestamp_[row]; }
    std::size_t user_of(std::size_t row) const { return user_[row]; }
    PostKind kind(std::size_t row) const { return kind_[row]; }
    const std::string& domain(std::size_t row) const { return domain_[row]; }
    std::optional<ContentCategory> category(std::size_t row) const {
        if (category_[row] == kNoCategory) return std::nullopt;
        return static_cast<ContentCategory>(category_[row]);
    }
    std::optional<double> lat(std::size_t row) const;
    std::optional<double> lon(std::size_t row) const;

    bool localized() const { return !tz_id_.empty(); }
    const std::string& tz_id() const { return tz_id_; }
    /// Local seconds-of-day; only valid once localized.
    std::int32_t local_second(std::size_t row) const { return local_second_[row]; }
    std::int64_t local_day(std::size_t row) const { return local_day_[row]; }
    std::size_t bin(std::size_t row) const { return static_cast<std::size_t>(local_second_[row] / 900); }

    PostRecord record(std::size_t row) const;

private:
    friend struct TableAccess;

    AnalysisSpan span_;
    std::vector<std::string> users_;
    std::vector<std::size_t> offsets_{0};
    std::vector<UnixSeconds> timestamp_;
    std::vector<std::uint32_t> user_;
    std::vector<PostKind> kind_;
    std::vector<std::string> domain_;
    std::vector<std::uint8_t> category_;
    std::vector<double> lat_;
    std::vector<double> lon_;
    std::string tz_id_;
    std::vector<std::int32_t> local_second_;
    std::vector<std::int64_t> local_day_;
};

/// Maps logical fields to header names in the input file.
struct ColumnSchema {
    std::string ts = "ts";
    std::string user = "user";
    std::string kind = "kind";
    /// Either a hostname or a category token.
    std::string domain_or_category = "domain|category";
    std::string domain = "domain";
    std::string category = "category";
    std::string lat = "lat";
    std::string lon = "lon";
};

struct ParseOptions {
    ColumnSchema schema;
    AnalysisSpan span = AnalysisSpan::study_default();
    double max_reject_fraction = 0.05;
    /// 0 means auto-detect (tab if the header contains one, else comma).
    char delimiter = 0;
};

struct RejectedRow {
    std::size_t line = 0;
    std::string reason;
};

struct IngestCounters {
    std::size_t rows_read = 0;
    std::size_t rejected = 0;
    std::size_t duplicates_dropped = 0;
    std::size_t out_of_span = 0;
    std::size_t bot_removed = 0;
    std::size_t category_mapped = 0;
    std::size_t category_other = 0;
    std::size_t dst_gap = 0;
    std::size_t dst_overlap = 0;
};

struct ParseResult {
    PostTable table;
    IngestCounters counters;
    std::vector<RejectedRow> rejects;
};

/// Reads delimited text with a header row. Malformed rows are collected;
/// exceeding `max_reject_fraction` throws InputError.
ParseResult parse_posts(std::istream& in, const ParseOptions& opts = {});

using CategoryMap = std::unordered_map<std::string, ContentCategory>;
using BotList = std::set<std::string>;

/// `domain<TAB>category` per line; keys lowercased.
CategoryMap read_category_map(std::istream& in);
/// One user id per line; blank lines and `#` comments ignored.
BotList read_bot_list(std::istream& in);

struct FilterReport {
    std::size_t bot_removed = 0;
    std::size_t mapped = 0;
    std::size_t other = 0;
};

/// Assigns categories by domain lookup (unmapped and link-free rows become
/// Other; pre-resolved categories are kept) and drops bot users' rows.
PostTable map_and_filter(const PostTable& table, const CategoryMap& category_map,
                         const BotList& bots, FilterReport* report = nullptr);

struct LocalizeReport {
    std::size_t dst_gap = 0;
    std::size_t dst_overlap = 0;
};

/// Annotates every row with local wall-clock day and second-of-day.
PostTable localize(const PostTable& table, const TzRule& rule, LocalizeReport* report = nullptr);

struct Coordinate {
    double lat = 0.0;
    double lon = 0.0;
};

/// Centre of the Italian peninsula, used when nothing better is known.
inline constexpr Coordinate kDefaultCentroid{42.5, 12.5};

/// `user<TAB>lat<TAB>lon` per line.
std::map<std::string, Coordinate> read_user_coordinates(std::istream& in);

/// Per-user coordinate: mean of row coordinates, else the fallback file,
/// else the centroid. Indexed like `table.users()`.
std::vector<Coordinate> resolve_user_coordinates(const PostTable& table,
                                                 const std::map<std::string, Coordinate>& fallback,
                                                 Coordinate centroid = kDefaultCentroid);

/// Writes the table back out in the canonical posts format.
void write_posts(std::ostream& out, const PostTable& table);

}  // namespace diurnal
