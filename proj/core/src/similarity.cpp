#include "specfilt/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "specfilt/parallel.hpp"

namespace specfilt {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm_of(const std::vector<double>& v) {
    return std::sqrt(dot(v, v));
}

void require_same_dim(const Embedding& a, const Embedding& b, const char* what) {
    if (a.dim() != b.dim()) {
        throw ShapeError(std::string(what) + ": embedding dims differ (" +
                         std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) +
                         ")");
    }
}

std::vector<double> difference(const Embedding& a, const Embedding& b) {
    std::vector<double> out(a.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) out[i] = a.values[i] - b.values[i];
    return out;
}

double cosine_of(const std::vector<double>& a, const std::vector<double>& b,
                 const char* what) {
    const double na = norm_of(a);
    const double nb = norm_of(b);
    if (na <= kMinVectorNorm || nb <= kMinVectorNorm) {
        throw DegeneracyError(std::string(what) + ": operand norm at or below 1e-12");
    }
    return std::clamp(dot(a, b) / (na * nb), -1.0, 1.0);
}

ScoreStats aggregate_scores(const std::vector<double>& scores) {
    ScoreStats stats;
    double sum = 0.0;
    for (double s : scores) {
        if (std::isnan(s)) {
            ++stats.skipped;
        } else {
            ++stats.used;
            sum += s;
        }
    }
    if (stats.used == 0) return stats;
    const double mean = sum / static_cast<double>(stats.used);
    double sq = 0.0;
    for (double s : scores) {
        if (!std::isnan(s)) sq += (s - mean) * (s - mean);
    }
    stats.mean = mean;
    stats.stddev = std::sqrt(sq / static_cast<double>(stats.used));
    return stats;
}

}  // namespace

ProjectionMatrix::ProjectionMatrix(std::size_t out_dim, std::size_t in_dim,
                                   std::vector<double> values)
    : out_dim_(out_dim), in_dim_(in_dim), values_(std::move(values)) {
    if (out_dim_ == 0 || in_dim_ == 0) {
        throw DataError("projection must be at least 1x1");
    }
    if (values_.size() != out_dim_ * in_dim_) {
        throw ShapeError("projection payload size does not match out_dim*in_dim");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw DataError("projection entries must be finite");
        }
    }
}

std::size_t PatchLossResult::count(PatchOutcome o) const {
    std::size_t c = 0;
    for (PatchOutcome got : outcomes) {
        if (got == o) ++c;
    }
    return c;
}

Embedding filtered_class_token(const EmbeddingSequence& seq, const BandFilter& filter,
                               DctBackend backend) {
    return filter_sequence(seq, filter, backend).class_token();
}

double cosine_similarity(const Embedding& a, const Embedding& b) {
    require_same_dim(a, b, "cosine_similarity");
    return cosine_of(a.values, b.values, "cosine_similarity");
}

double directional_loss(const DirectionalLossInputs& in) {
    require_same_dim(in.stylized_image, in.content_image, "directional_loss");
    require_same_dim(in.style_text, in.source_text, "directional_loss");
    require_same_dim(in.stylized_image, in.style_text, "directional_loss");
    const std::vector<double> di = difference(in.stylized_image, in.content_image);
    const std::vector<double> dt = difference(in.style_text, in.source_text);
    return 1.0 - cosine_of(di, dt, "directional_loss: image or text direction");
}

PatchLossResult patch_directional_loss(const std::vector<EmbeddingSequence>& patches,
                                       const std::vector<EmbeddingSequence>& content_patches,
                                       const Embedding& style_text,
                                       const Embedding& source_text,
                                       const PatchLossConfig& cfg) {
    if (patches.size() != content_patches.size()) {
        throw ShapeError("patch lists differ in length (" +
                         std::to_string(patches.size()) + " vs " +
                         std::to_string(content_patches.size()) + ")");
    }
    if (patches.empty()) throw DataError("patch loss needs at least one patch");
    if (!std::isfinite(cfg.tau)) throw DataError("tau must be finite");

    PatchLossResult result;
    result.per_patch.resize(patches.size());
    result.outcomes.resize(patches.size());
    double sum = 0.0;
    for (std::size_t p = 0; p < patches.size(); ++p) {
        DirectionalLossInputs in;
        in.stylized_image = filtered_class_token(patches[p], cfg.filter);
        in.content_image = filtered_class_token(content_patches[p], cfg.filter);
        in.style_text = style_text;
        in.source_text = source_text;
        try {
            const double loss = directional_loss(in);
            result.per_patch[p] = loss;
            if (loss <= cfg.tau) {
                result.outcomes[p] = PatchOutcome::rejected;
            } else {
                result.outcomes[p] = PatchOutcome::kept;
                sum += loss;
            }
        } catch (const DegeneracyError&) {
            result.per_patch[p] = std::numeric_limits<double>::quiet_NaN();
            result.outcomes[p] = PatchOutcome::degenerate;
        }
    }
    result.total = sum / static_cast<double>(patches.size());
    return result;
}

Embedding project(const ProjectionMatrix& p, const Embedding& v) {
    if (p.in_dim() != v.dim()) {
        throw ShapeError("projection expects dim " + std::to_string(p.in_dim()) +
                         ", embedding has dim " + std::to_string(v.dim()));
    }
    std::vector<double> out(p.out_dim(), 0.0);
    for (std::size_t r = 0; r < p.out_dim(); ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < p.in_dim(); ++c) {
            acc += p.at(r, c) * v.values[c];
        }
        out[r] = acc;
    }
    return Embedding(std::move(out));
}

double projected_similarity(const Embedding& image, const Embedding& text,
                            const ProjectionMatrix& p) {
    return cosine_similarity(project(p, image), project(p, text));
}

GradientMatrix directional_loss_gradient(const DirectionalLossInputs& in,
                                         const EmbeddingSequence& stylized_seq,
                                         const BandFilter& filter) {
    const std::size_t n = stylized_seq.token_count();
    const std::size_t d = stylized_seq.channel_count();

    // Recompute the filtered class token from the sequence so the gradient is
    // taken at exactly the point the loss sees.
    const Embedding stylized = filtered_class_token(stylized_seq, filter);
    require_same_dim(stylized, in.content_image, "directional_loss_gradient");
    require_same_dim(in.style_text, in.source_text, "directional_loss_gradient");
    require_same_dim(stylized, in.style_text, "directional_loss_gradient");

    const std::vector<double> di = difference(stylized, in.content_image);
    const std::vector<double> dt = difference(in.style_text, in.source_text);
    const double ni = norm_of(di);
    const double nt = norm_of(dt);
    if (ni <= kMinVectorNorm || nt <= kMinVectorNorm) {
        throw DegeneracyError(
            "directional_loss_gradient: image or text direction norm at or below "
            "1e-12");
    }

    // L = 1 - <di, dt> / (|di| |dt|). With ih = di/|di| and th = dt/|dt|,
    // dL/d(di) = -(th - <ih, th> ih) / |di|.
    const double cos_it = dot(di, dt) / (ni * nt);
    std::vector<double> g(d);
    for (std::size_t j = 0; j < d; ++j) {
        const double ih = di[j] / ni;
        const double th = dt[j] / nt;
        g[j] = -(th - cos_it * ih) / ni;
    }

    // The class token of the filtered sequence depends on entry (i, j) only
    // through channel j, with weight w_i summed over the surviving
    // frequencies.
    std::vector<double> w(n, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
        if (filter.masks(m)) continue;
        const double u = detail::idct_row_weight(kClassTokenIndex, m, n);
        const double angle = std::numbers::pi * static_cast<double>(m) /
                             static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] += u * std::cos(angle * (static_cast<double>(i) + 0.5));
        }
    }

    GradientMatrix grad;
    grad.n = n;
    grad.d = d;
    grad.values.resize(n * d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            grad.values[i * d + j] = w[i] * g[j];
        }
    }
    return grad;
}

namespace {

// Scores one filtered class token against the fixed text side. Returns NaN
// when the image side is degenerate. The text side has been validated by the
// caller.
double score_token(const std::vector<double>& z, const ProjectionMatrix* projection,
                   const std::vector<double>& text_effective) {
    if (projection == nullptr) {
        const double nz = norm_of(z);
        if (nz <= kMinVectorNorm) return std::numeric_limits<double>::quiet_NaN();
        const double nt = norm_of(text_effective);
        return std::clamp(dot(z, text_effective) / (nz * nt), -1.0, 1.0);
    }
    std::vector<double> pz(projection->out_dim(), 0.0);
    for (std::size_t r = 0; r < projection->out_dim(); ++r) {
        double acc = 0.0;
        for (std::size_t c = 0; c < projection->in_dim(); ++c) {
            acc += projection->at(r, c) * z[c];
        }
        pz[r] = acc;
    }
    const double nz = norm_of(pz);
    if (nz <= kMinVectorNorm) return std::numeric_limits<double>::quiet_NaN();
    const double nt = norm_of(text_effective);
    return std::clamp(dot(pz, text_effective) / (nz * nt), -1.0, 1.0);
}

void validate_batch(const std::vector<EmbeddingSequence>& seqs, const Embedding& text,
                    const ProjectionMatrix* projection) {
    if (seqs.empty()) throw DataError("score batch needs at least one sequence");
    const std::size_t n = seqs[0].token_count();
    const std::size_t d = seqs[0].channel_count();
    for (std::size_t s = 1; s < seqs.size(); ++s) {
        if (seqs[s].token_count() != n || seqs[s].channel_count() != d) {
            throw ShapeError("sequence " + std::to_string(s) + " has shape " +
                             std::to_string(seqs[s].token_count()) + "x" +
                             std::to_string(seqs[s].channel_count()) +
                             ", expected " + std::to_string(n) + "x" +
                             std::to_string(d));
        }
    }
    if (projection != nullptr && projection->in_dim() != d) {
        throw ShapeError("projection expects dim " + std::to_string(projection->in_dim()) +
                         ", sequences have " + std::to_string(d) + " channels");
    }
    if (text.dim() != d) {
        throw ShapeError("text embedding has dim " + std::to_string(text.dim()) +
                         ", sequences have " + std::to_string(d) + " channels");
    }
}

// Projects the text side once (or passes it through) and insists it is a
// usable cosine operand.
std::vector<double> effective_text(const Embedding& text,
                                   const ProjectionMatrix* projection) {
    std::vector<double> t =
        projection == nullptr ? text.values : project(*projection, text).values;
    if (norm_of(t) <= kMinVectorNorm) {
        throw DegeneracyError("text embedding norm at or below 1e-12");
    }
    return t;
}

}  // namespace

ScoreStats score_with_filter(const std::vector<EmbeddingSequence>& seqs,
                             const Embedding& text,
                             const ProjectionMatrix* projection,
                             const BandFilter& filter) {
    validate_batch(seqs, text, projection);
    const std::vector<double> t = effective_text(text, projection);
    std::vector<double> scores(seqs.size());
    for (std::size_t s = 0; s < seqs.size(); ++s) {
        const Embedding z = filtered_class_token(seqs[s], filter);
        scores[s] = score_token(z.values, projection, t);
    }
    return aggregate_scores(scores);
}

SweepReport frequency_sweep(const std::vector<EmbeddingSequence>& seqs,
                            const Embedding& text,
                            const ProjectionMatrix* projection,
                            unsigned jobs) {
    validate_batch(seqs, text, projection);
    const std::size_t n = seqs[0].token_count();
    const std::size_t d = seqs[0].channel_count();
    const std::size_t count = seqs.size();
    const std::vector<double> t = effective_text(text, projection);

    std::vector<double> u(n);
    for (std::size_t m = 0; m < n; ++m) {
        u[m] = detail::idct_row_weight(kClassTokenIndex, m, n);
    }

    // scores[row * count + s]; rows 0..n-1 mask one frequency each, row n is
    // the unmasked baseline.
    std::vector<double> scores((n + 1) * count, 0.0);
    parallel_for(count, jobs, [&](std::size_t s) {
        const SpectralMatrix spec = dct_forward(seqs[s]);
        // Unmasked class token; masking frequency m then removes one term of
        // this sum, so each sweep row costs O(d) instead of a fresh inverse.
        std::vector<double> base(d, 0.0);
        for (std::size_t j = 0; j < d; ++j) {
            double acc = 0.0;
            for (std::size_t m = 0; m < n; ++m) acc += u[m] * spec.at(j, m);
            base[j] = acc;
        }
        std::vector<double> z(d);
        for (std::size_t m = 0; m < n; ++m) {
            for (std::size_t j = 0; j < d; ++j) {
                z[j] = base[j] - u[m] * spec.at(j, m);
            }
            scores[m * count + s] = score_token(z, projection, t);
        }
        scores[n * count + s] = score_token(base, projection, t);
    });

    SweepReport report;
    report.token_count = n;
    report.channel_count = d;
    report.sequence_count = count;
    report.projected = projection != nullptr;
    report.rows.reserve(n + 1);
    for (std::size_t row = 0; row <= n; ++row) {
        SweepRow out;
        if (row < n) out.frequency = row;
        std::vector<double> row_scores(scores.begin() + row * count,
                                       scores.begin() + (row + 1) * count);
        out.stats = aggregate_scores(row_scores);
        report.rows.push_back(std::move(out));
    }
    return report;
}

}  // namespace specfilt
