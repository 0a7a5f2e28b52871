#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wikivote/date.hpp"

namespace wikivote {

// One party contesting one election.
struct PartyObservation {
  std::string country;
  Date election_date;  // first polling day for multi-day elections
  std::string party_id;
  std::string name_english;
  std::string name_local;
  std::string abbreviation;
  bool is_new = false;
  bool is_incumbent = false;
  double vote_share = 0.0;                 // percent, 0-100
  std::optional<double> prev_vote_share;   // absent for new parties
  std::int64_t news_mentions = 0;
  std::string wiki_project;                // e.g. "de.wikipedia"
  // Article title. Several candidate pages (coalitions) are separated by '|';
  // the one with the most views in the week window is used.
  std::string wiki_page_title;
  // Pre-computed week-before page views, when the dataset carries them.
  std::optional<double> wiki_views;

  bool operator==(const PartyObservation&) const = default;
};

struct ObservationKey {
  std::string country;
  Date election_date;
  std::string party_id;

  auto operator<=>(const ObservationKey&) const = default;
};

ObservationKey key_of(const PartyObservation& obs);
std::string to_string(const ObservationKey& key);

// All parties competing in one country on one election date; the unit over
// which Wikipedia and news shares are normalised.
struct ElectionGroup {
  std::string country;
  Date election_date;
  std::vector<PartyObservation> observations;

  bool operator==(const ElectionGroup&) const = default;
};

struct Dataset {
  std::vector<ElectionGroup> groups;
  std::string provenance;

  std::size_t observation_count() const;
  std::vector<PartyObservation> flatten() const;

  bool operator==(const Dataset&) const = default;
};

enum class InclusionComparator {
  at_least,          // max share >= threshold passes
  strictly_greater,  // max share >  threshold passes
};

struct ValidationOptions {
  double inclusion_threshold = 5.0;
  InclusionComparator comparator = InclusionComparator::at_least;
  std::string provenance;
};

struct ValidationResult {
  Dataset dataset;
  std::vector<std::string> warnings;
};

// Groups rows by (country, election_date) and checks every row and group
// invariant. Groups come out sorted by key; rows keep their input order
// within a group. Parties whose best share across their appearances misses
// the inclusion threshold are kept but reported in `warnings`.
// Throws DataError on duplicates, out-of-range values or groups of < 2.
ValidationResult validate_dataset(std::vector<PartyObservation> rows,
                                  const ValidationOptions& options = {});
ValidationResult validate_dataset(const Dataset& dataset, const ValidationOptions& options = {});

// vote_share - prev_vote_share; new parties are baselined at zero.
// Throws DataError("missing prior result") for an established party without
// a previous share.
double vote_change(const PartyObservation& obs);

}  // namespace wikivote
