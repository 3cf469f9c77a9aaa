#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "specfilt/similarity.hpp"

namespace specfilt {

/// Provenance of a loaded projection matrix, recorded in report metadata.
struct ProjectionRef {
    std::string path;
    std::string fnv1a64;  // hex fingerprint of the file bytes
    std::size_t out_dim = 0;
    std::size_t in_dim = 0;
};

/// Parameters a report was produced under.
struct ReportMeta {
    std::string band_spec;                    // the textual spec as given
    std::vector<std::size_t> masked_indices;  // resolved filter
    std::optional<double> tau;
    std::optional<ProjectionRef> projection;
    std::string precision = "f32";
};

enum class ItemStatus { ok, degenerate };

/// One (stylized, content) pair of a similarity batch.
struct SimilarityItem {
    std::size_t index = 0;
    std::string stylized_path;
    std::string content_path;
    ItemStatus status = ItemStatus::ok;
    std::optional<double> directional_loss;
    std::optional<bool> rejected;  // loss <= tau; absent when degenerate
    std::optional<double> clip_score;
    std::optional<double> projected_score;
    std::string note;  // degeneracy detail, empty when ok
};

struct ScoreSummary {
    std::size_t count = 0;
    double mean = 0.0;
    double stddev = 0.0;  // population
};

struct SimilarityReport {
    ReportMeta meta;
    std::vector<SimilarityItem> items;
    std::optional<ScoreSummary> directional_loss;
    std::optional<ScoreSummary> clip_score;
    std::optional<ScoreSummary> projected_score;
    double patch_loss_total = 0.0;  // items treated as the patch batch
    std::size_t rejected_count = 0;
    std::size_t degenerate_count = 0;
};

/// c1/c2/c3 scored with their full masks, for the sweep report's ranking
/// section.
struct CombinationScore {
    std::string name;
    std::vector<std::size_t> masked;
    ScoreStats stats;
};

struct SweepReportDocument {
    ReportMeta meta;
    SweepReport sweep;
    std::vector<CombinationScore> combinations;  // ranked, possibly empty
};

// Serializers. Deterministic: identical inputs produce identical bytes.
// CSV column orders are part of the public contract (see README).
std::string to_json(const SimilarityReport& report);
std::string to_csv(const SimilarityReport& report);
std::string to_json(const SweepReportDocument& report);
std::string to_csv(const SweepReportDocument& report);

/// Shortest round-trip decimal form of v (via std::to_chars).
std::string format_double(double v);

}  // namespace specfilt
