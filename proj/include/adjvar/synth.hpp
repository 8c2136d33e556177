#pragma once

// Synthetic corpora with known individual (per-judge) and systemic (climate)
// effects, and a definition-literal O(n^2) scorer used as the test oracle.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "adjvar/common/keyvalue.hpp"
#include "adjvar/common/random.hpp"
#include "adjvar/ingest.hpp"
#include "adjvar/scoring.hpp"

namespace adjvar {

struct ScenarioConfig {
    std::size_t cases = 10000;
    std::size_t judges = 40;
    std::vector<double> judge_offsets;  // additive grant-probability shift per judge; missing = 0
    std::size_t nationalities = 8;
    std::size_t courts = 5;
    int first_year = 1990;
    int last_year = 2020;
    double base_rate = 0.13;
    double climate_effect = 0.0;  // added when the president's party is PartyA
    double state_effect = 0.0;    // added when the state leans PartyA
    double represented_rate = 0.43;
    double pending_rate = 0.0;
    std::uint64_t seed = 1;

    // `key = value` lines; judge_offsets is a comma-separated list.
    static ScenarioConfig parse(std::string_view text) {
        ScenarioConfig c;
        for (const auto& [k, v] : parse_key_values(text)) {
            const auto num = [&]() {
                const auto d = csv::parse_double(v);
                if (!d) throw ConfigError("scenario: '" + k + "' expects a number, got '" + v + "'");
                return *d;
            };
            const auto count = [&]() {
                const double d = num();
                if (d < 0 || d != std::floor(d)) throw ConfigError("scenario: '" + k + "' expects a count");
                return static_cast<std::size_t>(d);
            };
            if (k == "cases") c.cases = count();
            else if (k == "judges") c.judges = count();
            else if (k == "nationalities") c.nationalities = count();
            else if (k == "courts") c.courts = count();
            else if (k == "first_year") c.first_year = static_cast<int>(num());
            else if (k == "last_year") c.last_year = static_cast<int>(num());
            else if (k == "base_rate") c.base_rate = num();
            else if (k == "climate_effect") c.climate_effect = num();
            else if (k == "state_effect") c.state_effect = num();
            else if (k == "represented_rate") c.represented_rate = num();
            else if (k == "pending_rate") c.pending_rate = num();
            else if (k == "seed") c.seed = static_cast<std::uint64_t>(num());
            else if (k == "judge_offsets") {
                c.judge_offsets.clear();
                std::string_view rest = v;
                while (!rest.empty()) {
                    const auto comma = rest.find(',');
                    const auto item = trim(rest.substr(0, comma));
                    const auto d = csv::parse_double(item);
                    if (!d) throw ConfigError("scenario: bad judge offset '" + std::string(item) + "'");
                    c.judge_offsets.push_back(*d);
                    if (comma == std::string_view::npos) break;
                    rest = rest.substr(comma + 1);
                }
            } else {
                throw ConfigError("scenario: unknown key '" + k + "'");
            }
        }
        return c;
    }

    static ScenarioConfig load(const std::string& path) { return parse(read_file(path)); }

    void validate() const {
        if (cases == 0) throw ConfigError("scenario: zero cases");
        if (courts == 0 || nationalities == 0) throw ConfigError("scenario: need at least one court and nationality");
        if (judges < courts) throw ConfigError("scenario: every court needs a judge (judges >= courts)");
        if (judge_offsets.size() > judges) throw ConfigError("scenario: more judge offsets than judges");
        if (first_year < kFirstYearBin || last_year < first_year || last_year > 2024) {
            throw ConfigError("scenario: years must satisfy 1980 <= first_year <= last_year <= 2024");
        }
        if (base_rate < 0 || base_rate > 1) throw ConfigError("scenario: base_rate outside [0,1]");
        if (pending_rate < 0 || pending_rate >= 1) throw ConfigError("scenario: pending_rate outside [0,1)");
    }
};

// Court i sits in kSyntheticStates[i % size].
inline constexpr std::string_view kSyntheticStates[] = {"TX", "CA", "NY", "FL", "PA", "OH", "GA", "MI",
                                                        "AZ", "IL", "NC", "WI", "CO", "VA", "NV", "IA"};

inline std::string synthetic_id(char prefix, std::size_t n, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%c%0*zu", prefix, width, n);
    return buf;
}

// Grant probability = clamp(base_rate + judge offset + climate shifts, 0, 1).
// Judge j sits in court j % courts; each case draws court, nationality,
// decision date and a judge of that court uniformly.
inline Corpus generate(const ScenarioConfig& cfg, const ReferenceTables& tables = ReferenceTables::shipped()) {
    cfg.validate();
    Rng rng(derive_seed(cfg.seed, 0));
    std::vector<std::vector<std::size_t>> court_judges(cfg.courts);
    for (std::size_t j = 0; j < cfg.judges; ++j) court_judges[j % cfg.courts].push_back(j);

    std::vector<std::string> judge_ids(cfg.judges), nat_ids(cfg.nationalities), court_ids(cfg.courts);
    for (std::size_t j = 0; j < cfg.judges; ++j) judge_ids[j] = synthetic_id('J', j, 4);
    for (std::size_t n = 0; n < cfg.nationalities; ++n) nat_ids[n] = synthetic_id('N', n, 3);
    for (std::size_t c = 0; c < cfg.courts; ++c) court_ids[c] = synthetic_id('C', c, 3);

    const Date first = Date::from_ymd(cfg.first_year, 1, 1);
    const Date last = Date::from_ymd(cfg.last_year, 12, 31);
    const auto span_days = static_cast<std::uint64_t>(last - first + 1);

    Corpus corpus;
    corpus.records.reserve(cfg.cases);
    for (std::size_t i = 0; i < cfg.cases; ++i) {
        ProceedingRecord r;
        r.proceeding_id = synthetic_id('P', i, 9);
        const auto court = uniform_index(rng, cfg.courts);
        const auto& bench = court_judges[court];
        const auto judge = bench[uniform_index(rng, bench.size())];
        r.court_id = court_ids[court];
        r.nationality = nat_ids[uniform_index(rng, cfg.nationalities)];
        r.judge_id = judge_ids[judge];
        r.state = std::string(kSyntheticStates[court % std::size(kSyntheticStates)]);
        const Date decided = first + static_cast<std::int32_t>(uniform_index(rng, span_days));
        r.charge_date = decided - static_cast<std::int32_t>(30 + uniform_index(rng, 1200));
        r.represented = uniform01(rng) < cfg.represented_rate;
        r.custody = static_cast<Custody>(uniform_index(rng, 3));
        const double u_pending = uniform01(rng);
        const double u_decision = uniform01(rng);
        if (u_pending < cfg.pending_rate) {
            r.decision = Decision::Pending;
        } else {
            r.decision_date = decided;
            r.climate = resolve_climate(r, tables);
            double p = cfg.base_rate;
            if (judge < cfg.judge_offsets.size()) p += cfg.judge_offsets[judge];
            if (r.climate) {
                if (r.climate->president_party == Party::PartyA) p += cfg.climate_effect;
                if (r.climate->state_leaning == Party::PartyA) p += cfg.state_effect;
            }
            p = std::clamp(p, 0.0, 1.0);
            r.decision = u_decision < p ? Decision::Grant : Decision::Deny;
        }
        corpus.records.push_back(std::move(r));
    }
    return corpus;
}

class OracleRefusal : public std::length_error {
public:
    using std::length_error::length_error;
};

inline constexpr std::size_t kOracleMaxRecords = 20000;

// Literal pairwise enumeration of the counterfactual sets. Shares no lookup
// or tally code with CohortIndex.
inline ScoreTable oracle_scores(std::span<const ProceedingRecord> records,
                                ConsistencyWeighting weighting = ConsistencyWeighting::PerProceeding) {
    if (records.size() > kOracleMaxRecords) {
        throw OracleRefusal("oracle_scores: " + std::to_string(records.size()) + " records exceeds " +
                            std::to_string(kOracleMaxRecords));
    }
    const auto bin_of = [](const ProceedingRecord& r) {
        const int y = r.decision_date->year();
        return 1980 + (y - 1980) / 5 * 5;
    };
    const auto similar = [&](const ProceedingRecord& a, const ProceedingRecord& b) {
        return a.nationality == b.nationality && a.court_id == b.court_id && bin_of(a) == bin_of(b);
    };

    ScoreTable table;
    std::map<std::string, std::vector<double>> omegas_by_judge;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& self = records[i];
        if (!self.decided()) continue;
        ProceedingScore score{self.proceeding_id, std::nullopt, std::nullopt};

        std::size_t other_judge = 0, agree = 0;
        std::map<std::string, std::pair<std::size_t, std::size_t>> per_judge;  // (agree, total)
        std::size_t other_climate = 0, oppose = 0;
        for (std::size_t k = 0; k < records.size(); ++k) {
            if (k == i) continue;
            const auto& other = records[k];
            if (!other.decided() || !similar(self, other)) continue;
            if (self.judge_id && other.judge_id && *other.judge_id != *self.judge_id) {
                ++other_judge;
                agree += other.decision == self.decision;
                auto& pj = per_judge[*other.judge_id];
                pj.first += other.decision == self.decision;
                ++pj.second;
            }
            if (self.climate && other.climate &&
                (other.climate->president_party != self.climate->president_party ||
                 other.climate->state_leaning != self.climate->state_leaning)) {
                ++other_climate;
                oppose += other.decision != self.decision;
            }
        }
        if (weighting == ConsistencyWeighting::PerProceeding) {
            if (other_judge > 0) score.omega = static_cast<double>(agree) / static_cast<double>(other_judge);
        } else if (!per_judge.empty()) {
            double s = 0.0;
            for (const auto& [j, at] : per_judge) s += static_cast<double>(at.first) / static_cast<double>(at.second);
            score.omega = s / static_cast<double>(per_judge.size());
        }
        if (other_climate > 0) score.gamma = static_cast<double>(oppose) / static_cast<double>(other_climate);

        if (self.judge_id) {
            auto& v = omegas_by_judge[*self.judge_id];
            if (score.omega) v.push_back(*score.omega);
        }
        table.proceedings.push_back(std::move(score));
    }
    for (auto& [judge, v] : omegas_by_judge) {
        JudgeScore js{judge, std::nullopt, v.size()};
        if (!v.empty()) {
            std::sort(v.begin(), v.end());
            double s = 0.0;
            for (double x : v) s += x;
            js.phi = s / static_cast<double>(v.size());
        }
        table.judges.push_back(std::move(js));
    }
    return table;
}

}  // namespace adjvar
