#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "specfilt/bands.hpp"
#include "specfilt/embedding.hpp"
#include "specfilt/errors.hpp"
#include "specfilt/spectral.hpp"

namespace specfilt {

/// Vectors with a norm at or below this are degenerate cosine operands.
inline constexpr double kMinVectorNorm = 1e-12;

/// Learned out_dim x in_dim linear projection, row-major. Consumed as opaque
/// external data.
class ProjectionMatrix {
public:
    ProjectionMatrix(std::size_t out_dim, std::size_t in_dim,
                     std::vector<double> values);

    std::size_t out_dim() const { return out_dim_; }
    std::size_t in_dim() const { return in_dim_; }
    double at(std::size_t row, std::size_t col) const {
        return values_[row * in_dim_ + col];
    }
    const std::vector<double>& values() const { return values_; }

private:
    std::size_t out_dim_;
    std::size_t in_dim_;
    std::vector<double> values_;
};

/// The four embeddings entering the directional loss.
struct DirectionalLossInputs {
    Embedding stylized_image;  // from the stylized image
    Embedding content_image;   // from the content image
    Embedding style_text;      // from the style sentence
    Embedding source_text;     // from the fixed source sentence
};

/// Patch-loss settings. tau is meaningful in [0, 2] but only required finite;
/// the filter applies to every patch sequence.
struct PatchLossConfig {
    double tau = 0.7;
    BandFilter filter;
};

enum class PatchOutcome {
    kept,        // loss above tau, contributes to the total
    rejected,    // loss at or below tau, contributes zero
    degenerate,  // direction could not be formed, contributes zero
};

struct PatchLossResult {
    double total = 0.0;              // mean over all patches, rejected count as 0
    std::vector<double> per_patch;   // NaN for degenerate patches
    std::vector<PatchOutcome> outcomes;

    std::size_t count(PatchOutcome o) const;
};

/// Loss gradient with respect to a token sequence; same n x d layout as the
/// sequence itself.
struct GradientMatrix {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> values;

    double at(std::size_t token, std::size_t channel) const {
        return values[token * d + channel];
    }
};

/// Mean/stddev of a score over a batch of sequences. `skipped` counts
/// sequences dropped for degeneracy; mean/stddev are absent when nothing
/// scored. stddev is the population deviation.
struct ScoreStats {
    std::size_t used = 0;
    std::size_t skipped = 0;
    std::optional<double> mean;
    std::optional<double> stddev;
};

/// One row of a per-frequency sweep; `frequency` is empty for the unmasked
/// baseline row.
struct SweepRow {
    std::optional<std::size_t> frequency;
    ScoreStats stats;
};

struct SweepReport {
    std::size_t token_count = 0;
    std::size_t channel_count = 0;
    std::size_t sequence_count = 0;
    bool projected = false;
    std::vector<SweepRow> rows;  // frequencies 0..n-1 in order, then baseline
};

/// Class token of the band-stopped sequence: row 0 of filter_sequence.
Embedding filtered_class_token(const EmbeddingSequence& seq, const BandFilter& filter,
                               DctBackend backend = DctBackend::fast);

/// a.b / (|a||b|), clamped to [-1, 1] against rounding.
double cosine_similarity(const Embedding& a, const Embedding& b);

/// 1 - cos(stylized - content, style - source).
double directional_loss(const DirectionalLossInputs& in);

/// Per-patch directional losses from filtered class tokens, with rejection at
/// or below tau. The total divides by the full patch count.
PatchLossResult patch_directional_loss(const std::vector<EmbeddingSequence>& patches,
                                       const std::vector<EmbeddingSequence>& content_patches,
                                       const Embedding& style_text,
                                       const Embedding& source_text,
                                       const PatchLossConfig& cfg);

Embedding project(const ProjectionMatrix& p, const Embedding& v);

/// cos(P*image, P*text).
double projected_similarity(const Embedding& image, const Embedding& text,
                            const ProjectionMatrix& p);

/// Analytic gradient of directional_loss with respect to the stylized token
/// matrix, where in.stylized_image == filtered_class_token(stylized_seq, filter).
/// The filtering pipeline is linear, so this is an outer product of the
/// inverse-transform weights with the cosine gradient.
GradientMatrix directional_loss_gradient(const DirectionalLossInputs& in,
                                         const EmbeddingSequence& stylized_seq,
                                         const BandFilter& filter);

/// Scores each sequence's filtered class token against `text` (cosine, or
/// projected similarity when `projection` is non-null) and aggregates.
ScoreStats score_with_filter(const std::vector<EmbeddingSequence>& seqs,
                             const Embedding& text,
                             const ProjectionMatrix* projection,
                             const BandFilter& filter);

/// Masks each frequency individually, scores the filtered class tokens
/// against `text`, and reports per-frequency statistics plus the unmasked
/// baseline. Rows are deterministic and input-order stable for any job count.
SweepReport frequency_sweep(const std::vector<EmbeddingSequence>& seqs,
                            const Embedding& text,
                            const ProjectionMatrix* projection = nullptr,
                            unsigned jobs = 1);

}  // namespace specfilt
