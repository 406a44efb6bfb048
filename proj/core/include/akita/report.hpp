#pragma once

#include <akita/metrics.hpp>

#include <nlohmann/json.hpp>

#include <iosfwd>

namespace akita {

using Json = nlohmann::ordered_json;

/// RFC 4180 quoting for free-text CSV fields such as VM names.
[[nodiscard]] std::string csv_field(const std::string& v);

/// summary.json. Durations are integer microseconds and fractions are
/// 6-decimal strings, so the file is byte-stable across platforms.
[[nodiscard]] Json summary_json(const Summary& s);

/// Placement plan: assignments, per-core utilizations and EDF-VD terms,
/// rejections, plus the single-core figures of everything requested.
[[nodiscard]] Json plan_json(const PlacementPlan& plan, std::span<const VmInstance> vms);

/// Two-space indented JSON with a trailing newline.
void write_json(std::ostream& out, const Json& j);

/// rtt_cdf.csv: vm,rtt_us,cdf with one row per distinct RTT value.
void write_rtt_cdf(std::ostream& out, const Summary& s, const MetricsCollector& metrics);

/// tail_table.csv: per-VM latency percentiles and deadline misses.
void write_tail_table(std::ostream& out, const Summary& s);

/// shares.csv: window_start_us,vm,share.
void write_shares(std::ostream& out, const Summary& s);

/// idle.csv: per-pCPU idleness, mode switches and HI residency.
void write_idle(std::ostream& out, const Summary& s);

/// Short human-readable digest for the terminal.
[[nodiscard]] std::string console_summary(const Summary& s);

}  // namespace akita
