#pragma once

// Success rate and delay time from a timeline and a keypress log.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mrmix/scene.hpp"

namespace mrmix {

inline constexpr double kDefaultResponseWindow = 5.0;

struct Press {
  double t = 0.0;  ///< seconds on the playback clock
  int key = 0;
  friend bool operator==(const Press&, const Press&) = default;
};

/// Presses in non-decreasing time order.
struct ResponseLog {
  std::vector<Press> presses;
  friend bool operator==(const ResponseLog&, const ResponseLog&) = default;
};

struct MatchedPair {
  std::string event_id;
  int key = 0;
  double onset = 0.0;
  double press_time = 0.0;
  double delay() const { return press_time - onset; }
  friend bool operator==(const MatchedPair&, const MatchedPair&) = default;
};

struct KeyStats {
  std::size_t events = 0;
  std::size_t matched = 0;
  double success_rate = 0.0;
  std::optional<double> mean_delay;
  friend bool operator==(const KeyStats&, const KeyStats&) = default;
};

struct MetricsReport {
  double success_rate = 0.0;
  /// Over matched presses only; empty when nothing matched.
  std::optional<double> mean_delay;
  std::map<int, KeyStats> per_key;
  std::vector<MatchedPair> matches;
  std::size_t total_events = 0;
  std::size_t matched_events = 0;
  std::size_t unmatched_presses = 0;
  /// Presses whose key is outside 1..4.
  std::size_t rejected_presses = 0;
  std::size_t dropped_events = 0;
  double window = kDefaultResponseWindow;
  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Greedy chronological matching: each press, in time order, takes the
/// earliest unmatched non-dropped event with its key whose onset lies in
/// [t - window, t]. Dropped events are excluded from the denominator.
MetricsReport score(const Timeline& timeline, const ResponseLog& responses,
                    double window = kDefaultResponseWindow);

struct ResponderProfile {
  double delay_mean = 0.8;
  /// Half-width of a uniform jitter around delay_mean.
  double delay_jitter = 0.0;
  double miss_prob = 0.0;
  std::uint64_t seed = 0;
};

/// One press per non-dropped identifiable event unless missed, at
/// onset + max(0.05, delay). Sorted by time.
ResponseLog synthetic_responder(const Timeline& timeline, const ResponderProfile& profile);

/// CSV ("t,key" with optional header), JSON lines ({"t":..,"key":..}), or
/// a JSON document {"presses":[...]}. Throws SchemaError on malformed rows
/// and InvariantError "responses.sorted" when times decrease.
ResponseLog parse_responses(std::string_view text);
std::string serialize_responses_jsonl(const ResponseLog& log);
std::string serialize_responses_csv(const ResponseLog& log);

std::string metrics_to_json(const MetricsReport& report);

}  // namespace mrmix
