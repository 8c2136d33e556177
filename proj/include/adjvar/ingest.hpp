#pragma once

// Corpus ingestion: raw proceeding CSV -> validated ProceedingRecords, plus the
// derived columns (year bin, political climate, null indicators) the scores need.
//
// Canonical corpus column order (written by write_corpus, read back by
// ColumnMapping::canonical()):
//   proceeding_id, judge_id, nationality, court_id, state, charge_date,
//   decision_date, decision, represented, custody, president_party,
//   state_leaning, <covariates...>
// Empty fields are nulls. Dates are YYYY-MM-DD.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "adjvar/common/csv.hpp"
#include "adjvar/common/date.hpp"
#include "adjvar/common/keyvalue.hpp"
#include "adjvar/common/parallel.hpp"
#include "adjvar/feature_matrix.hpp"
#include "adjvar/reference_data.hpp"

namespace adjvar {

enum class Decision : std::uint8_t { Grant, Deny, Pending };
enum class Custody : std::uint8_t { Detained, Released, NeverDetained };
enum class Party : std::uint8_t { PartyA, PartyB };

inline std::string_view to_string(Decision d) {
    switch (d) {
        case Decision::Grant: return "Grant";
        case Decision::Deny: return "Deny";
        case Decision::Pending: return "Pending";
    }
    return "";
}
inline std::string_view to_string(Custody c) {
    switch (c) {
        case Custody::Detained: return "Detained";
        case Custody::Released: return "Released";
        case Custody::NeverDetained: return "NeverDetained";
    }
    return "";
}
inline std::string_view to_string(Party p) { return p == Party::PartyA ? "PartyA" : "PartyB"; }

inline std::optional<Party> parse_party(std::string_view s) {
    if (s == "PartyA") return Party::PartyA;
    if (s == "PartyB") return Party::PartyB;
    return std::nullopt;
}

struct ClimateKey {
    Party president_party = Party::PartyA;
    Party state_leaning = Party::PartyA;

    // Dense code in [0, 4).
    constexpr unsigned code() const noexcept {
        return static_cast<unsigned>(president_party) * 2u + static_cast<unsigned>(state_leaning);
    }
    friend constexpr bool operator==(const ClimateKey&, const ClimateKey&) = default;
};

struct CohortKey {
    std::string nationality;
    std::string court_id;
    int year_bin = 1980;
    friend bool operator==(const CohortKey&, const CohortKey&) = default;
};

// Null, numeric or string covariate.
using CovariateValue = std::variant<std::monostate, double, std::string>;

struct ProceedingRecord {
    std::string proceeding_id;
    std::optional<std::string> judge_id;
    std::string nationality;
    std::string court_id;
    std::optional<std::string> state;
    Date charge_date;
    std::optional<Date> decision_date;
    Decision decision = Decision::Pending;
    std::optional<bool> represented;
    std::optional<Custody> custody;
    std::optional<ClimateKey> climate;  // derived; see derive_climate()
    std::vector<CovariateValue> covariates;  // aligned with Corpus::covariate_names

    bool decided() const noexcept { return decision != Decision::Pending; }
    friend bool operator==(const ProceedingRecord&, const ProceedingRecord&) = default;
};

struct Corpus {
    std::vector<std::string> covariate_names;
    std::vector<ProceedingRecord> records;
};

class OutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

inline constexpr int kFirstYearBin = 1980;
inline constexpr int kYearBinWidth = 5;

inline int year_bin(int year) {
    if (year < kFirstYearBin) {
        throw OutOfRange("year " + std::to_string(year) + " precedes the 1980 analysis start");
    }
    return kFirstYearBin + ((year - kFirstYearBin) / kYearBinWidth) * kYearBinWidth;
}

inline int year_bin(Date decision_date) { return year_bin(decision_date.year()); }

inline CohortKey cohort_key(const ProceedingRecord& r) {
    if (!r.decision_date) throw std::invalid_argument("cohort_key: proceeding " + r.proceeding_id + " is pending");
    return CohortKey{r.nationality, r.court_id, year_bin(*r.decision_date)};
}

// ---------------------------------------------------------------------------
// Reference tables

struct Administration {
    Date start;  // inclusive
    Date end;    // exclusive
    Party party;
};

class ReferenceTables {
public:
    ReferenceTables() = default;

    ReferenceTables(std::vector<Administration> administrations, std::map<std::pair<std::string, int>, Party> votes)
        : administrations_(std::move(administrations)), state_votes_(std::move(votes)) {
        std::sort(administrations_.begin(), administrations_.end(),
                  [](const Administration& a, const Administration& b) { return a.start < b.start; });
        for (std::size_t i = 0; i < administrations_.size(); ++i) {
            const auto& a = administrations_[i];
            if (!(a.start < a.end)) {
                throw ConfigError("administration starting " + a.start.str() + " has an empty interval");
            }
            if (i > 0 && administrations_[i - 1].end != a.start) {
                throw ConfigError("administrations are not contiguous at " + a.start.str());
            }
        }
    }

    static ReferenceTables parse(std::string_view administrations_csv, std::string_view state_votes_csv) {
        std::vector<Administration> admins;
        {
            std::istringstream in{std::string(administrations_csv)};
            csv::Reader reader(in);
            std::vector<std::string> row;
            bool header = true;
            while (reader.next_row(row)) {
                if (header) {
                    header = false;
                    continue;
                }
                if (row.size() == 1 && row[0].empty()) continue;
                if (row.size() != 3) throw ConfigError("administrations: expected start_date,end_date,party");
                const auto s = Date::try_parse_iso(row[0]);
                const auto e = Date::try_parse_iso(row[1]);
                const auto p = parse_party(row[2]);
                if (!s || !e || !p) {
                    throw ConfigError("administrations: bad row at line " + std::to_string(reader.line()));
                }
                admins.push_back({*s, *e, *p});
            }
        }
        std::map<std::pair<std::string, int>, Party> votes;
        {
            std::istringstream in{std::string(state_votes_csv)};
            csv::Reader reader(in);
            std::vector<std::string> row;
            bool header = true;
            while (reader.next_row(row)) {
                if (header) {
                    header = false;
                    continue;
                }
                if (row.size() == 1 && row[0].empty()) continue;
                const auto year = row.size() == 3 ? csv::parse_double(row[1]) : std::nullopt;
                const auto p = row.size() == 3 ? parse_party(row[2]) : std::nullopt;
                if (!year || !p) throw ConfigError("state_votes: bad row at line " + std::to_string(reader.line()));
                votes[{row[0], static_cast<int>(*year)}] = *p;
            }
        }
        return ReferenceTables(std::move(admins), std::move(votes));
    }

    static ReferenceTables load(const std::string& administrations_path, const std::string& state_votes_path) {
        return parse(read_file(administrations_path), read_file(state_votes_path));
    }

    static const ReferenceTables& shipped() {
        static const ReferenceTables tables =
            parse(reference_data::administrations_csv, reference_data::state_votes_csv);
        return tables;
    }

    // Administration interval [start, end) containing `d`.
    std::optional<Party> president_party(Date d) const {
        auto it = std::upper_bound(administrations_.begin(), administrations_.end(), d,
                                   [](Date x, const Administration& a) { return x < a.start; });
        if (it == administrations_.begin()) return std::nullopt;
        --it;
        if (d < it->end) return it->party;
        return std::nullopt;
    }

    // Majority party of `state` at the last presidential election held strictly before `d`.
    std::optional<Party> state_leaning(std::string_view state, Date d) const {
        int year = d.year();
        year -= ((year % 4) + 4) % 4;
        if (!(election_day(year) < d)) year -= 4;
        const auto it = state_votes_.find({std::string(state), year});
        if (it == state_votes_.end()) return std::nullopt;
        return it->second;
    }

    const std::vector<Administration>& administrations() const noexcept { return administrations_; }
    const std::map<std::pair<std::string, int>, Party>& state_votes() const noexcept { return state_votes_; }

private:
    std::vector<Administration> administrations_;
    std::map<std::pair<std::string, int>, Party> state_votes_;
};

inline std::optional<ClimateKey> resolve_climate(const ProceedingRecord& record, const ReferenceTables& tables) {
    if (!record.decision_date || !record.state) return std::nullopt;
    const auto pres = tables.president_party(*record.decision_date);
    const auto lean = tables.state_leaning(*record.state, *record.decision_date);
    if (!pres || !lean) return std::nullopt;
    return ClimateKey{*pres, *lean};
}

// Fills record.climate for every record; returns the number left unresolved.
inline std::size_t derive_climate(Corpus& corpus, const ReferenceTables& tables) {
    std::size_t unresolved = 0;
    for (auto& r : corpus.records) {
        r.climate = resolve_climate(r, tables);
        if (!r.climate) ++unresolved;
    }
    return unresolved;
}

// ---------------------------------------------------------------------------
// Column mapping

enum class DateFormat { Iso, Us };

// Decision code outcome: a Decision, or exclusion from the corpus.
struct DecisionCode {
    std::optional<Decision> decision;  // nullopt = exclude
};

class ColumnMapping {
public:
    static constexpr std::string_view kRequired[] = {"proceeding_id", "judge_id", "nationality", "court_id",
                                                     "state",         "charge_date", "decision_date", "decision"};
    static constexpr std::string_view kOptional[] = {"represented", "custody", "president_party", "state_leaning"};

    // Identity mapping for canonical corpus files.
    static ColumnMapping canonical() {
        ColumnMapping m;
        for (auto f : kRequired) m.fields_[std::string(f)] = std::string(f);
        for (auto f : kOptional) m.fields_[std::string(f)] = std::string(f);
        return m;
    }

    // Mapping file grammar (one `key = value` per line):
    //   <canonical field> = <source header>
    //   decision:<raw code> = grant | deny | pending | exclude
    //   represented:<raw code> = true | false
    //   custody:<raw code> = detained | released | never_detained
    //   date_format = iso | us
    //   covariates = * | comma-separated source headers
    static ColumnMapping parse(std::string_view text) {
        ColumnMapping m;
        for (const auto& [key, value] : parse_key_values(text)) {
            if (key.starts_with("decision:")) {
                const auto code = key.substr(9);
                if (value == "grant") m.decision_codes_[code] = {Decision::Grant};
                else if (value == "deny") m.decision_codes_[code] = {Decision::Deny};
                else if (value == "pending") m.decision_codes_[code] = {Decision::Pending};
                else if (value == "exclude") m.decision_codes_[code] = {std::nullopt};
                else throw ConfigError("mapping: unknown decision outcome '" + value + "'");
            } else if (key.starts_with("represented:")) {
                if (value != "true" && value != "false") {
                    throw ConfigError("mapping: represented codes map to true|false");
                }
                m.represented_codes_[key.substr(12)] = value == "true";
            } else if (key.starts_with("custody:")) {
                Custody c;
                if (value == "detained") c = Custody::Detained;
                else if (value == "released") c = Custody::Released;
                else if (value == "never_detained") c = Custody::NeverDetained;
                else throw ConfigError("mapping: unknown custody '" + value + "'");
                m.custody_codes_[key.substr(8)] = c;
            } else if (key == "date_format") {
                if (value == "iso") m.date_format_ = DateFormat::Iso;
                else if (value == "us") m.date_format_ = DateFormat::Us;
                else throw ConfigError("mapping: date_format must be iso or us");
            } else if (key == "covariates") {
                m.covariates_.clear();
                m.all_covariates_ = value == "*";
                if (!m.all_covariates_) {
                    std::string_view rest = value;
                    while (!rest.empty()) {
                        const auto comma = rest.find(',');
                        const auto item = trim(rest.substr(0, comma));
                        if (!item.empty()) m.covariates_.emplace_back(item);
                        if (comma == std::string_view::npos) break;
                        rest = rest.substr(comma + 1);
                    }
                }
            } else if (is_field(key)) {
                m.fields_[key] = value;
            } else {
                throw ConfigError("mapping: unknown key '" + key + "'");
            }
        }
        return m;
    }

    static ColumnMapping load(const std::string& path) { return parse(read_file(path)); }

    const std::string* source(std::string_view canonical_field) const {
        const auto it = fields_.find(std::string(canonical_field));
        return it == fields_.end() ? nullptr : &it->second;
    }

    // nullopt: code not in the table (row excluded). Canonical names are always accepted.
    std::optional<DecisionCode> decision(std::string_view raw) const {
        if (const auto it = decision_codes_.find(std::string(raw)); it != decision_codes_.end()) return it->second;
        if (raw.empty() || raw == "Pending") return DecisionCode{Decision::Pending};
        if (raw == "Grant") return DecisionCode{Decision::Grant};
        if (raw == "Deny") return DecisionCode{Decision::Deny};
        return std::nullopt;
    }

    std::optional<bool> represented(std::string_view raw, bool& ok) const {
        ok = true;
        if (raw.empty()) return std::nullopt;
        if (const auto it = represented_codes_.find(std::string(raw)); it != represented_codes_.end()) {
            return it->second;
        }
        if (raw == "true" || raw == "1") return true;
        if (raw == "false" || raw == "0") return false;
        ok = false;
        return std::nullopt;
    }

    std::optional<Custody> custody(std::string_view raw, bool& ok) const {
        ok = true;
        if (raw.empty()) return std::nullopt;
        if (const auto it = custody_codes_.find(std::string(raw)); it != custody_codes_.end()) return it->second;
        if (raw == "Detained") return Custody::Detained;
        if (raw == "Released") return Custody::Released;
        if (raw == "NeverDetained") return Custody::NeverDetained;
        ok = false;
        return std::nullopt;
    }

    std::optional<Date> date(std::string_view raw) const {
        return date_format_ == DateFormat::Iso ? Date::try_parse_iso(raw) : Date::try_parse_us(raw);
    }

    bool all_covariates() const noexcept { return all_covariates_; }
    const std::vector<std::string>& covariates() const noexcept { return covariates_; }

private:
    static bool is_field(std::string_view key) {
        for (auto f : kRequired)
            if (f == key) return true;
        for (auto f : kOptional)
            if (f == key) return true;
        return false;
    }

    std::map<std::string, std::string> fields_;
    std::map<std::string, DecisionCode> decision_codes_;
    std::map<std::string, bool> represented_codes_;
    std::map<std::string, Custody> custody_codes_;
    DateFormat date_format_ = DateFormat::Iso;
    bool all_covariates_ = true;
    std::vector<std::string> covariates_;
};

// ---------------------------------------------------------------------------
// Parsing

struct Rejection {
    std::size_t line = 0;
    std::string reason;
};

struct IngestReport {
    std::size_t rows_read = 0;
    std::size_t records = 0;
    std::size_t pending = 0;
    std::size_t excluded = 0;  // decision code mapped to exclude or unknown
    std::size_t climate_unresolved = 0;
    std::vector<Rejection> rejections;
    std::map<std::string, std::size_t> null_counts;  // over accepted records

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["rows_read"] = rows_read;
        j["records"] = records;
        j["pending"] = pending;
        j["excluded"] = excluded;
        j["climate_unresolved"] = climate_unresolved;
        j["null_counts"] = null_counts;
        auto& rej = j["rejections"] = nlohmann::json::array();
        for (const auto& r : rejections) rej.push_back({{"line", r.line}, {"reason", r.reason}});
        return j;
    }
};

struct ParsedCorpus {
    Corpus corpus;
    IngestReport report;
};

// Nullable canonical columns, in report order.
inline const std::vector<std::string>& nullable_columns() {
    static const std::vector<std::string> cols = {"judge_id", "state", "decision_date", "represented", "custody"};
    return cols;
}

namespace detail {

struct ColumnPlan {
    std::unordered_map<std::string, std::size_t> field_index;
    std::vector<std::size_t> covariate_index;
};

inline ColumnPlan plan_columns(const std::vector<std::string>& header, const ColumnMapping& mapping,
                               std::vector<std::string>& covariate_names) {
    std::unordered_map<std::string, std::size_t> by_name;
    for (std::size_t i = 0; i < header.size(); ++i) by_name.emplace(header[i], i);
    ColumnPlan plan;
    std::unordered_set<std::size_t> used;
    for (auto f : ColumnMapping::kRequired) {
        const auto* src = mapping.source(f);
        if (!src) throw ConfigError("mapping names no source column for required field '" + std::string(f) + "'");
        const auto it = by_name.find(*src);
        if (it == by_name.end()) {
            throw ConfigError("required column '" + *src + "' (" + std::string(f) + ") missing from header");
        }
        plan.field_index[std::string(f)] = it->second;
        used.insert(it->second);
    }
    for (auto f : ColumnMapping::kOptional) {
        const auto* src = mapping.source(f);
        if (!src) continue;
        if (const auto it = by_name.find(*src); it != by_name.end()) {
            plan.field_index[std::string(f)] = it->second;
            used.insert(it->second);
        }
    }
    if (mapping.all_covariates()) {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (used.count(i)) continue;
            plan.covariate_index.push_back(i);
            covariate_names.push_back(header[i]);
        }
    } else {
        for (const auto& c : mapping.covariates()) {
            const auto it = by_name.find(c);
            if (it == by_name.end()) throw ConfigError("covariate column '" + c + "' missing from header");
            plan.covariate_index.push_back(it->second);
            covariate_names.push_back(c);
        }
    }
    return plan;
}

inline CovariateValue parse_covariate(const std::string& raw) {
    if (raw.empty()) return std::monostate{};
    if (auto v = csv::parse_double(raw); v && std::isfinite(*v)) return *v;
    return raw;
}

// Outcome of converting one raw row.
struct RowOutcome {
    enum class Kind { Record, Rejected, Excluded } kind = Kind::Rejected;
    ProceedingRecord record;
    std::string reason;
};

inline RowOutcome convert_row(const std::vector<std::string>& row, std::size_t width, const ColumnPlan& plan,
                              const ColumnMapping& mapping) {
    RowOutcome out;
    if (row.size() != width) {
        out.reason = "expected " + std::to_string(width) + " fields, found " + std::to_string(row.size());
        return out;
    }
    const auto field = [&](std::string_view name) -> const std::string& {
        return row[plan.field_index.at(std::string(name))];
    };
    const auto optional_field = [&](std::string_view name) -> const std::string* {
        const auto it = plan.field_index.find(std::string(name));
        return it == plan.field_index.end() ? nullptr : &row[it->second];
    };

    auto& r = out.record;
    r.proceeding_id = field("proceeding_id");
    if (r.proceeding_id.empty()) {
        out.reason = "empty proceeding_id";
        return out;
    }
    if (const auto& j = field("judge_id"); !j.empty()) r.judge_id = j;
    r.nationality = field("nationality");
    r.court_id = field("court_id");
    if (r.nationality.empty() || r.court_id.empty()) {
        out.reason = "empty nationality or court_id";
        return out;
    }
    if (const auto& s = field("state"); !s.empty()) r.state = s;

    const auto charge = mapping.date(field("charge_date"));
    if (!charge) {
        out.reason = "malformed charge_date '" + field("charge_date") + "'";
        return out;
    }
    r.charge_date = *charge;
    if (const auto& dd = field("decision_date"); !dd.empty()) {
        const auto decided = mapping.date(dd);
        if (!decided) {
            out.reason = "malformed decision_date '" + dd + "'";
            return out;
        }
        r.decision_date = *decided;
    }

    const auto code = mapping.decision(field("decision"));
    if (!code || !code->decision) {
        out.kind = RowOutcome::Kind::Excluded;
        out.reason = "decision code '" + field("decision") + "' not mapped to grant/deny/pending";
        return out;
    }
    r.decision = *code->decision;
    if (r.decided() != r.decision_date.has_value()) {
        out.reason = r.decided() ? "invariant violation: decided proceeding without decision_date"
                                 : "invariant violation: pending proceeding with decision_date";
        return out;
    }
    if (r.decision_date) {
        if (*r.decision_date < r.charge_date) {
            out.reason = "invariant violation: charge_date after decision_date";
            return out;
        }
        if (r.decision_date->year() < kFirstYearBin) {
            out.reason = "decision_date before 1980";
            return out;
        }
    }

    bool ok = true;
    if (const auto* rep = optional_field("represented")) {
        r.represented = mapping.represented(*rep, ok);
        if (!ok) {
            out.reason = "unrecognized represented value '" + *rep + "'";
            return out;
        }
    }
    if (const auto* cus = optional_field("custody")) {
        r.custody = mapping.custody(*cus, ok);
        if (!ok) {
            out.reason = "unrecognized custody value '" + *cus + "'";
            return out;
        }
    }
    const auto* pres = optional_field("president_party");
    const auto* lean = optional_field("state_leaning");
    if (pres && lean && !pres->empty() && !lean->empty()) {
        const auto p = parse_party(*pres);
        const auto l = parse_party(*lean);
        if (!p || !l) {
            out.reason = "unrecognized climate party";
            return out;
        }
        r.climate = ClimateKey{*p, *l};
    }

    r.covariates.reserve(plan.covariate_index.size());
    for (const auto idx : plan.covariate_index) r.covariates.push_back(parse_covariate(row[idx]));
    out.kind = RowOutcome::Kind::Record;
    return out;
}

}  // namespace detail

inline void tally_nulls(const Corpus& corpus, IngestReport& report) {
    auto& nulls = report.null_counts;
    for (const auto& c : nullable_columns()) nulls[c] = 0;
    for (const auto& c : corpus.covariate_names) nulls[c] = 0;
    for (const auto& r : corpus.records) {
        nulls["judge_id"] += !r.judge_id;
        nulls["state"] += !r.state;
        nulls["decision_date"] += !r.decision_date;
        nulls["represented"] += !r.represented;
        nulls["custody"] += !r.custody;
        for (std::size_t i = 0; i < r.covariates.size(); ++i) {
            nulls[corpus.covariate_names[i]] += std::holds_alternative<std::monostate>(r.covariates[i]);
        }
    }
}

// Rows are read sequentially, converted in parallel chunks and reassembled in
// input order, so output is independent of the thread count.
inline ParsedCorpus parse_corpus(std::istream& in, const ColumnMapping& mapping) {
    csv::Reader reader(in);
    std::vector<std::string> header;
    if (!reader.next_row(header)) throw ConfigError("input has no header row");
    if (!header.empty() && header[0].starts_with("\xEF\xBB\xBF")) header[0].erase(0, 3);

    ParsedCorpus out;
    const auto plan = detail::plan_columns(header, mapping, out.corpus.covariate_names);

    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> lines;
    std::vector<std::string> row;
    while (reader.next_row(row)) {
        if (row.size() == 1 && row[0].empty()) continue;  // blank line
        rows.push_back(row);
        lines.push_back(reader.line());
    }
    out.report.rows_read = rows.size();

    std::vector<detail::RowOutcome> outcomes(rows.size());
    parallel_for(rows.size(), [&](std::size_t i) {
        outcomes[i] = detail::convert_row(rows[i], header.size(), plan, mapping);
    });
    rows.clear();
    rows.shrink_to_fit();

    std::unordered_set<std::string> seen;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        auto& o = outcomes[i];
        switch (o.kind) {
            case detail::RowOutcome::Kind::Excluded:
                ++out.report.excluded;
                break;
            case detail::RowOutcome::Kind::Rejected:
                out.report.rejections.push_back({lines[i], std::move(o.reason)});
                break;
            case detail::RowOutcome::Kind::Record:
                if (!seen.insert(o.record.proceeding_id).second) {
                    out.report.rejections.push_back(
                        {lines[i], "duplicate proceeding_id '" + o.record.proceeding_id + "'"});
                    break;
                }
                out.report.pending += !o.record.decided();
                out.corpus.records.push_back(std::move(o.record));
                break;
        }
    }
    out.report.records = out.corpus.records.size();
    tally_nulls(out.corpus, out.report);
    return out;
}

inline ParsedCorpus parse_corpus(const std::string& path, const ColumnMapping& mapping) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open corpus '" + path + "'");
    return parse_corpus(in, mapping);
}

inline void write_corpus(std::ostream& out, const Corpus& corpus) {
    std::vector<std::string> header = {"proceeding_id", "judge_id", "nationality",   "court_id",
                                       "state",         "charge_date", "decision_date", "decision",
                                       "represented",   "custody",  "president_party", "state_leaning"};
    header.insert(header.end(), corpus.covariate_names.begin(), corpus.covariate_names.end());
    csv::write_row(out, header);
    std::vector<std::string> f;
    for (const auto& r : corpus.records) {
        f.clear();
        f.push_back(r.proceeding_id);
        f.push_back(r.judge_id.value_or(""));
        f.push_back(r.nationality);
        f.push_back(r.court_id);
        f.push_back(r.state.value_or(""));
        f.push_back(r.charge_date.str());
        f.push_back(r.decision_date ? r.decision_date->str() : "");
        f.emplace_back(r.decided() ? to_string(r.decision) : "");
        f.emplace_back(r.represented ? (*r.represented ? "true" : "false") : "");
        f.emplace_back(r.custody ? to_string(*r.custody) : "");
        f.emplace_back(r.climate ? to_string(r.climate->president_party) : "");
        f.emplace_back(r.climate ? to_string(r.climate->state_leaning) : "");
        for (const auto& c : r.covariates) {
            if (const auto* d = std::get_if<double>(&c)) f.push_back(csv::format_double(*d));
            else if (const auto* s = std::get_if<std::string>(&c)) f.push_back(*s);
            else f.emplace_back();
        }
        csv::write_row(out, f);
    }
}

inline void write_corpus(const std::string& path, const Corpus& corpus) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write '" + path + "'");
    write_corpus(out, corpus);
}

// One 0/1 column `<name>_isnull` per nullable column (canonical nullable
// fields, then covariates). An empty `columns` selects all of them.
inline FeatureMatrix add_null_indicators(const Corpus& corpus, const std::vector<std::string>& columns = {}) {
    std::vector<std::string> wanted = columns;
    if (wanted.empty()) {
        wanted = nullable_columns();
        wanted.insert(wanted.end(), corpus.covariate_names.begin(), corpus.covariate_names.end());
    }
    const auto& recs = corpus.records;
    FeatureMatrix out(recs.size());
    for (const auto& col : wanted) {
        std::vector<double> v(recs.size());
        if (col == "judge_id") {
            for (std::size_t i = 0; i < recs.size(); ++i) v[i] = !recs[i].judge_id;
        } else if (col == "state") {
            for (std::size_t i = 0; i < recs.size(); ++i) v[i] = !recs[i].state;
        } else if (col == "decision_date") {
            for (std::size_t i = 0; i < recs.size(); ++i) v[i] = !recs[i].decision_date;
        } else if (col == "represented") {
            for (std::size_t i = 0; i < recs.size(); ++i) v[i] = !recs[i].represented;
        } else if (col == "custody") {
            for (std::size_t i = 0; i < recs.size(); ++i) v[i] = !recs[i].custody;
        } else {
            const auto it = std::find(corpus.covariate_names.begin(), corpus.covariate_names.end(), col);
            if (it == corpus.covariate_names.end()) {
                throw std::invalid_argument("add_null_indicators: unknown column '" + col + "'");
            }
            const auto k = static_cast<std::size_t>(it - corpus.covariate_names.begin());
            for (std::size_t i = 0; i < recs.size(); ++i) {
                v[i] = std::holds_alternative<std::monostate>(recs[i].covariates[k]);
            }
        }
        out.add_column(col + "_isnull", ColumnKind::NullIndicator, std::move(v));
    }
    return out;
}

}  // namespace adjvar
