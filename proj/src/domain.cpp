#include "wikivote/domain.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "wikivote/error.hpp"

namespace wikivote {

namespace {

bool is_percent(double v) { return std::isfinite(v) && v >= 0.0 && v <= 100.0; }

void check_row(const PartyObservation& obs) {
  const auto key = to_string(key_of(obs));
  if (obs.country.empty() || obs.party_id.empty()) {
    throw DataError("observation " + key + ": country and party_id must be non-empty");
  }
  if (!is_percent(obs.vote_share)) {
    throw DataError("observation " + key + ": vote_share outside [0,100]");
  }
  if (obs.prev_vote_share && !is_percent(*obs.prev_vote_share)) {
    throw DataError("observation " + key + ": prev_vote_share outside [0,100]");
  }
  if (obs.is_new && obs.prev_vote_share && *obs.prev_vote_share != 0.0) {
    throw DataError("observation " + key + ": new party with a non-zero previous share");
  }
  if (obs.news_mentions < 0) {
    throw DataError("observation " + key + ": negative news_mentions");
  }
  if (obs.wiki_views && !(std::isfinite(*obs.wiki_views) && *obs.wiki_views >= 0.0)) {
    throw DataError("observation " + key + ": negative or non-finite wiki_views");
  }
}

}  // namespace

ObservationKey key_of(const PartyObservation& obs) {
  return {obs.country, obs.election_date, obs.party_id};
}

std::string to_string(const ObservationKey& key) {
  return "(" + key.country + ", " + format_date(key.election_date) + ", " + key.party_id + ")";
}

std::size_t Dataset::observation_count() const {
  std::size_t n = 0;
  for (const auto& g : groups) n += g.observations.size();
  return n;
}

std::vector<PartyObservation> Dataset::flatten() const {
  std::vector<PartyObservation> rows;
  rows.reserve(observation_count());
  for (const auto& g : groups) {
    rows.insert(rows.end(), g.observations.begin(), g.observations.end());
  }
  return rows;
}

ValidationResult validate_dataset(std::vector<PartyObservation> rows,
                                  const ValidationOptions& options) {
  std::set<ObservationKey> seen;
  for (const auto& row : rows) {
    check_row(row);
    if (!seen.insert(key_of(row)).second) {
      throw DataError("duplicate observation " + to_string(key_of(row)));
    }
  }

  using GroupKey = std::pair<std::string, Date>;
  std::map<GroupKey, ElectionGroup> grouped;
  for (auto& row : rows) {
    auto& group = grouped[{row.country, row.election_date}];
    group.country = row.country;
    group.election_date = row.election_date;
    group.observations.push_back(std::move(row));
  }

  ValidationResult result;
  result.dataset.provenance = options.provenance;
  for (auto& [key, group] : grouped) {
    if (group.observations.size() < 2) {
      throw DataError("election (" + key.first + ", " + format_date(key.second) +
                      ") has fewer than 2 parties");
    }
    result.dataset.groups.push_back(std::move(group));
  }

  // Inclusion rule: a party's best showing over all its appearances.
  std::map<std::pair<std::string, std::string>, double> best_share;
  for (const auto& g : result.dataset.groups) {
    for (const auto& obs : g.observations) {
      auto [it, inserted] = best_share.try_emplace({obs.country, obs.party_id}, obs.vote_share);
      if (!inserted) it->second = std::max(it->second, obs.vote_share);
    }
  }
  for (const auto& [party, share] : best_share) {
    const bool passes = options.comparator == InclusionComparator::at_least
                            ? share >= options.inclusion_threshold
                            : share > options.inclusion_threshold;
    if (!passes) {
      result.warnings.push_back(fmt::format(
          "party ({}, {}) misses the {:g}% inclusion threshold in every election (best share {:g})",
          party.first, party.second, options.inclusion_threshold, share));
    }
  }
  return result;
}

ValidationResult validate_dataset(const Dataset& dataset, const ValidationOptions& options) {
  auto opts = options;
  if (opts.provenance.empty()) opts.provenance = dataset.provenance;
  return validate_dataset(dataset.flatten(), opts);
}

double vote_change(const PartyObservation& obs) {
  if (obs.prev_vote_share) return obs.vote_share - *obs.prev_vote_share;
  if (obs.is_new) return obs.vote_share;
  throw DataError("missing prior result for " + to_string(key_of(obs)));
}

}  // namespace wikivote
