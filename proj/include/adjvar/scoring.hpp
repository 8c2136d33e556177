#pragma once

// Counterfactual variability scores over cohorts of similar proceedings.
//
// A cohort is every decided proceeding sharing nationality, court and 5-year
// decision bin. For a proceeding P in cohort C:
//   omega(P) - fraction of C's proceedings decided by a judge other than P's
//              judge whose decision equals P's decision;
//   gamma(P) - fraction of C's proceedings decided under a different political
//              climate (president party or state leaning differs) whose
//              decision is the opposite of P's;
//   phi(J)   - mean omega over judge J's proceedings with non-null omega.
// Empty counterfactual sets give null, never 0 or 1.
//
// The index keeps tallies only, so each score is O(1) given the record.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adjvar/common/csv.hpp"
#include "adjvar/common/parallel.hpp"
#include "adjvar/ingest.hpp"

namespace adjvar {

class ConsistencyFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tally {
    std::uint32_t grant = 0;
    std::uint32_t deny = 0;

    std::uint32_t total() const noexcept { return grant + deny; }
    std::uint32_t count(Decision d) const noexcept { return d == Decision::Grant ? grant : deny; }
    void add(Decision d) noexcept { (d == Decision::Grant ? grant : deny) += 1; }
    friend bool operator==(const Tally&, const Tally&) = default;
};

inline Decision opposite(Decision d) {
    if (d == Decision::Pending) throw std::invalid_argument("opposite: pending decision");
    return d == Decision::Grant ? Decision::Deny : Decision::Grant;
}

// How the counterfactual agreement in omega is weighted.
//   PerProceeding: every other-judge proceeding counts once (default).
//   PerJudge:      each other judge's agreement rate counts once.
enum class ConsistencyWeighting { PerProceeding, PerJudge };

class CohortIndex {
public:
    struct Cohort {
        Tally all;      // every decided proceeding
        Tally judged;   // proceedings with a known judge
        std::array<Tally, 4> climate{};  // by ClimateKey::code()
        std::uint32_t judge_count = 0;
    };

    CohortIndex() = default;

    // Single pass over decided records; pending records are skipped.
    static CohortIndex build(std::span<const ProceedingRecord> records) {
        CohortIndex ix;
        for (const auto& r : records) {
            if (!r.decided()) continue;
            const std::uint64_t slot = ix.slot_for(r, /*insert=*/true);
            auto& c = ix.cohorts_[slot];
            c.all.add(r.decision);
            if (r.judge_id) {
                c.judged.add(r.decision);
                const auto jid = ix.intern(ix.judges_, *r.judge_id);
                ix.judge_tallies_[judge_key(slot, jid)].add(r.decision);
            }
            if (r.climate) c.climate[r.climate->code()].add(r.decision);
        }
        ix.build_judge_agreement();
        return ix;
    }

    std::size_t cohort_count() const noexcept { return cohorts_.size(); }

    // Mean over the other judges of the cohort of their share of decisions equal
    // to `d`; nullopt when the judge is alone in the cohort.
    std::optional<double> other_judge_agreement(const ProceedingRecord& r, Decision d) const {
        if (!r.judge_id || !r.decision_date) return std::nullopt;
        const auto slot = slot_of(CohortKey{r.nationality, r.court_id, year_bin(*r.decision_date)});
        const auto j = judges_.find(*r.judge_id);
        if (!slot || j == judges_.end()) return std::nullopt;
        const auto it = judge_agreement_.find(judge_key(*slot, j->second));
        if (it == judge_agreement_.end() || std::isnan(it->second[0])) return std::nullopt;
        return it->second[d == Decision::Grant ? 0 : 1];
    }

    const Cohort* find(const CohortKey& key) const {
        const auto n = nationalities_.find(key.nationality);
        const auto c = courts_.find(key.court_id);
        if (n == nationalities_.end() || c == courts_.end()) return nullptr;
        const auto it = slots_.find(pack(n->second, c->second, key.year_bin));
        return it == slots_.end() ? nullptr : &cohorts_[it->second];
    }

    const Cohort* find(const ProceedingRecord& r) const {
        if (!r.decision_date) return nullptr;
        return find(CohortKey{r.nationality, r.court_id, year_bin(*r.decision_date)});
    }

    Tally judge_tally(const CohortKey& key, const std::string& judge_id) const {
        const auto slot = slot_of(key);
        const auto j = judges_.find(judge_id);
        if (!slot || j == judges_.end()) return {};
        const auto it = judge_tallies_.find(judge_key(*slot, j->second));
        return it == judge_tallies_.end() ? Tally{} : it->second;
    }

    Tally judge_tally(const ProceedingRecord& r) const {
        if (!r.judge_id || !r.decision_date) return {};
        return judge_tally(CohortKey{r.nationality, r.court_id, year_bin(*r.decision_date)}, *r.judge_id);
    }

    // Visits (CohortKey, Cohort) for every cohort; order unspecified.
    template <class Fn>
    void for_each_cohort(Fn&& fn) const {
        std::vector<std::string_view> nat(nationalities_.size()), court(courts_.size());
        for (const auto& [s, id] : nationalities_) nat[id] = s;
        for (const auto& [s, id] : courts_) court[id] = s;
        for (const auto& [key, slot] : slots_) {
            const auto n = static_cast<std::uint32_t>(key >> 40);
            const auto c = static_cast<std::uint32_t>((key >> 16) & 0xFFFFFF);
            const int bin = kFirstYearBin + static_cast<int>(key & 0xFFFF) * kYearBinWidth;
            fn(CohortKey{std::string(nat[n]), std::string(court[c]), bin}, cohorts_[slot]);
        }
    }

private:
    using Interner = std::unordered_map<std::string, std::uint32_t>;

    static std::uint32_t intern(Interner& m, const std::string& s) {
        return m.try_emplace(s, static_cast<std::uint32_t>(m.size())).first->second;
    }

    static std::uint64_t pack(std::uint32_t nat, std::uint32_t court, int bin) {
        if (nat >= (1u << 24) || court >= (1u << 24)) throw std::length_error("CohortIndex: too many categories");
        const auto b = static_cast<std::uint64_t>((bin - kFirstYearBin) / kYearBinWidth);
        return (std::uint64_t{nat} << 40) | (std::uint64_t{court} << 16) | b;
    }

    static std::uint64_t judge_key(std::uint64_t slot, std::uint32_t judge) { return (slot << 32) | judge; }

    // Per (cohort, judge): other judges' grant and deny shares averaged, summed
    // in judge id order.
    void build_judge_agreement() {
        std::vector<std::string_view> names(judges_.size());
        for (const auto& [s, id] : judges_) names[id] = s;
        std::vector<std::vector<std::pair<std::string_view, std::uint64_t>>> members(cohorts_.size());
        for (const auto& [key, tally] : judge_tallies_) {
            members[key >> 32].emplace_back(names[key & 0xFFFFFFFFu], key);
            ++cohorts_[key >> 32].judge_count;
        }
        judge_agreement_.reserve(judge_tallies_.size());
        std::vector<std::array<double, 2>> share;
        for (auto& m : members) {
            std::sort(m.begin(), m.end());
            share.clear();
            for (const auto& [_, key] : m) {
                const Tally& t = judge_tallies_.at(key);
                share.push_back({static_cast<double>(t.grant) / static_cast<double>(t.total()),
                                 static_cast<double>(t.deny) / static_cast<double>(t.total())});
            }
            const double others = static_cast<double>(m.size()) - 1;
            for (std::size_t a = 0; a < m.size(); ++a) {
                std::array<double, 2> v{kNaN, kNaN};
                if (m.size() > 1) {
                    double g = 0.0, d = 0.0;
                    for (std::size_t b = 0; b < m.size(); ++b) {
                        if (b == a) continue;
                        g += share[b][0];
                        d += share[b][1];
                    }
                    v = {g / others, d / others};
                }
                judge_agreement_.emplace(m[a].second, v);
            }
        }
    }

    static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

    std::uint64_t slot_for(const ProceedingRecord& r, bool insert) {
        const int bin = year_bin(*r.decision_date);
        const auto key = pack(intern(nationalities_, r.nationality), intern(courts_, r.court_id), bin);
        const auto [it, inserted] = slots_.try_emplace(key, cohorts_.size());
        if (inserted && insert) cohorts_.emplace_back();
        return it->second;
    }

    std::optional<std::uint64_t> slot_of(const CohortKey& key) const {
        const auto n = nationalities_.find(key.nationality);
        const auto c = courts_.find(key.court_id);
        if (n == nationalities_.end() || c == courts_.end()) return std::nullopt;
        const auto it = slots_.find(pack(n->second, c->second, key.year_bin));
        if (it == slots_.end()) return std::nullopt;
        return it->second;
    }

    Interner nationalities_;
    Interner courts_;
    Interner judges_;
    std::unordered_map<std::uint64_t, std::uint64_t> slots_;
    std::vector<Cohort> cohorts_;
    std::unordered_map<std::uint64_t, Tally> judge_tallies_;
    std::unordered_map<std::uint64_t, std::array<double, 2>> judge_agreement_;
};

inline CohortIndex build_index(std::span<const ProceedingRecord> records) { return CohortIndex::build(records); }

namespace detail {

inline const CohortIndex::Cohort& cohort_of(const ProceedingRecord& r, const CohortIndex& index) {
    if (!r.decided()) throw std::invalid_argument("proceeding " + r.proceeding_id + " is pending");
    const auto* c = index.find(r);
    if (!c || c->all.count(r.decision) == 0) {
        throw ConsistencyFault("proceeding " + r.proceeding_id + " is not part of the indexed corpus");
    }
    return *c;
}

}  // namespace detail

inline std::optional<double> disaggregated_consistency(
    const ProceedingRecord& r, const CohortIndex& index,
    ConsistencyWeighting weighting = ConsistencyWeighting::PerProceeding) {
    const auto& c = detail::cohort_of(r, index);
    if (!r.judge_id) return std::nullopt;
    const Tally own = index.judge_tally(r);
    if (own.count(r.decision) == 0) {
        throw ConsistencyFault("judge of proceeding " + r.proceeding_id + " is not indexed in its cohort");
    }
    if (weighting == ConsistencyWeighting::PerJudge) return index.other_judge_agreement(r, r.decision);
    const std::uint32_t others = c.judged.total() - own.total();
    if (others == 0) return std::nullopt;
    const std::uint32_t agree = c.judged.count(r.decision) - own.count(r.decision);
    return static_cast<double>(agree) / static_cast<double>(others);
}

inline std::optional<double> partisanship(const ProceedingRecord& r, const CohortIndex& index) {
    const auto& c = detail::cohort_of(r, index);
    if (!r.climate) return std::nullopt;
    const Tally& same = c.climate[r.climate->code()];
    if (same.count(r.decision) == 0) {
        throw ConsistencyFault("climate of proceeding " + r.proceeding_id + " is not indexed in its cohort");
    }
    Tally resolved;
    for (const auto& t : c.climate) {
        resolved.grant += t.grant;
        resolved.deny += t.deny;
    }
    const std::uint32_t different = resolved.total() - same.total();
    if (different == 0) return std::nullopt;
    const Decision opp = opposite(r.decision);
    return static_cast<double>(resolved.count(opp) - same.count(opp)) / static_cast<double>(different);
}

struct ProceedingScore {
    std::string proceeding_id;
    std::optional<double> omega;
    std::optional<double> gamma;
    friend bool operator==(const ProceedingScore&, const ProceedingScore&) = default;
};

struct JudgeScore {
    std::string judge_id;
    std::optional<double> phi;
    std::size_t scored_case_count = 0;
    friend bool operator==(const JudgeScore&, const JudgeScore&) = default;
};

struct ScoreTable {
    std::vector<ProceedingScore> proceedings;  // decided records, input order
    std::vector<JudgeScore> judges;            // sorted by judge_id

    const JudgeScore* find_judge(std::string_view judge_id) const {
        const auto it = std::lower_bound(judges.begin(), judges.end(), judge_id,
                                         [](const JudgeScore& j, std::string_view id) { return j.judge_id < id; });
        return it != judges.end() && it->judge_id == judge_id ? &*it : nullptr;
    }
};

class UnknownJudge : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

inline std::optional<double> cohort_consistency(std::string_view judge_id, const ScoreTable& table) {
    const auto* j = table.find_judge(judge_id);
    if (!j) throw UnknownJudge("unknown judge '" + std::string(judge_id) + "'");
    return j->phi;
}

// Mean over values sorted ascending, so the result does not depend on the
// order in which proceedings were supplied.
inline std::optional<double> order_free_mean(std::vector<double>& values) {
    if (values.empty()) return std::nullopt;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

struct ScoringOptions {
    ConsistencyWeighting weighting = ConsistencyWeighting::PerProceeding;
};

inline ScoreTable score_corpus(std::span<const ProceedingRecord> records, const CohortIndex& index,
                               ScoringOptions options = {}) {
    std::vector<std::size_t> decided;
    decided.reserve(records.size());
    for (std::size_t i = 0; i < records.size(); ++i)
        if (records[i].decided()) decided.push_back(i);

    ScoreTable table;
    table.proceedings.resize(decided.size());
    parallel_for(decided.size(), [&](std::size_t k) {
        const auto& r = records[decided[k]];
        auto& s = table.proceedings[k];
        s.proceeding_id = r.proceeding_id;
        s.omega = disaggregated_consistency(r, index, options.weighting);
        s.gamma = partisanship(r, index);
    });

    std::map<std::string, std::vector<double>> by_judge;
    for (std::size_t k = 0; k < decided.size(); ++k) {
        const auto& r = records[decided[k]];
        if (!r.judge_id) continue;
        auto& v = by_judge[*r.judge_id];
        if (const auto& o = table.proceedings[k].omega) v.push_back(*o);
    }
    table.judges.reserve(by_judge.size());
    for (auto& [judge, omegas] : by_judge) {
        const std::size_t n = omegas.size();
        table.judges.push_back({judge, order_free_mean(omegas), n});
    }
    return table;
}

// ---------------------------------------------------------------------------
// CSV surface: nulls are empty fields.

inline void write_proceeding_scores(std::ostream& out, const ScoreTable& t) {
    csv::write_row(out, {"proceeding_id", "omega", "gamma"});
    for (const auto& s : t.proceedings) {
        csv::write_row(out, {std::string_view{s.proceeding_id}, csv::format_optional(s.omega),
                             csv::format_optional(s.gamma)});
    }
}

inline void write_judge_scores(std::ostream& out, const ScoreTable& t) {
    csv::write_row(out, {"judge_id", "phi", "scored_case_count"});
    for (const auto& j : t.judges) {
        csv::write_row(out, {std::string_view{j.judge_id}, csv::format_optional(j.phi),
                             std::to_string(j.scored_case_count)});
    }
}

inline ScoreTable read_score_table(std::istream& proceedings_csv, std::istream& judges_csv) {
    ScoreTable t;
    std::vector<std::string> row;
    const auto opt = [](const std::string& s) -> std::optional<double> {
        if (s.empty()) return std::nullopt;
        const auto v = csv::parse_double(s);
        if (!v) throw ConfigError("score table: bad number '" + s + "'");
        return v;
    };
    {
        csv::Reader r(proceedings_csv);
        if (!r.next_row(row) || row != std::vector<std::string>{"proceeding_id", "omega", "gamma"}) {
            throw ConfigError("proceeding score header must be proceeding_id,omega,gamma");
        }
        while (r.next_row(row)) {
            if (row.size() != 3) throw ConfigError("proceeding scores: bad row at line " + std::to_string(r.line()));
            t.proceedings.push_back({row[0], opt(row[1]), opt(row[2])});
        }
    }
    {
        csv::Reader r(judges_csv);
        if (!r.next_row(row) || row != std::vector<std::string>{"judge_id", "phi", "scored_case_count"}) {
            throw ConfigError("judge score header must be judge_id,phi,scored_case_count");
        }
        while (r.next_row(row)) {
            if (row.size() != 3) throw ConfigError("judge scores: bad row at line " + std::to_string(r.line()));
            t.judges.push_back({row[0], opt(row[1]), static_cast<std::size_t>(std::stoull(row[2]))});
        }
        std::sort(t.judges.begin(), t.judges.end(),
                  [](const JudgeScore& a, const JudgeScore& b) { return a.judge_id < b.judge_id; });
    }
    return t;
}

}  // namespace adjvar
