// specfilt: batch frontend for band-stop filtering of token-embedding
// sequences and the similarity/sweep reports built on top of it.
//
// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric degeneracy.
// Every failure prints exactly one line to stderr, prefixed
// "specfilt: <class>: ". Success prints nothing to stderr.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "specfilt/bands.hpp"
#include "specfilt/embedding.hpp"
#include "specfilt/errors.hpp"
#include "specfilt/io.hpp"
#include "specfilt/parallel.hpp"
#include "specfilt/reports.hpp"
#include "specfilt/similarity.hpp"
#include "specfilt/spectral.hpp"

namespace {

using namespace specfilt;

// Invocation mistakes the flag parser cannot catch (e.g. mismatched list
// lengths). Reported like CLI11 parse errors: exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BandsOptions {
    std::size_t n = 0;
};

struct FilterOptions {
    std::string input;
    std::string output;
    std::string band_spec;
    bool f64 = false;
};

struct SimilarityOptions {
    std::vector<std::string> stylized;
    std::vector<std::string> content;
    std::string style_path;
    std::string source_path;
    std::string band_spec;
    double tau = 0.7;
    std::string proj_path;
    std::string out_path;
    std::string format = "json";
    unsigned jobs = 1;
    bool f64 = false;
};

struct SweepOptions {
    std::vector<std::string> sequences;
    std::string text_path;
    std::string proj_path;
    std::string out_path;
    std::string format = "json";
    unsigned jobs = 1;
    bool f64 = false;
};

std::string single_line(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return out;
}

// Reports are assembled in memory and written in one go, so a failing
// invocation never leaves a partial output file behind.
void emit_report(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::fwrite(text.data(), 1, text.size(), stdout);
    } else {
        write_file(out_path, std::string_view(text));
    }
}

std::string format_period(const Period& p) {
    if (p.is_unbounded()) return "∞";
    if (p.denominator() == 1) return std::to_string(p.numerator());
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", p.tokens());
    return buf;
}

int run_bands(const BandsOptions& opt) {
    const BandScheme scheme = default_scheme(opt.n);
    std::string table = "band index period(tokens)\n";
    for (const Band& band : scheme.bands()) {
        const auto [shortest, longest] = scheme.period_range(band);
        table += band.name;
        table += ' ';
        table += std::to_string(band.lo);
        table += '-';
        table += std::to_string(band.hi);
        table += ' ';
        table += format_period(shortest);
        table += '-';
        table += format_period(longest);
        table += '\n';
    }
    std::fwrite(table.data(), 1, table.size(), stdout);
    return 0;
}

int run_filter(const FilterOptions& opt) {
    const Precision precision = opt.f64 ? Precision::f64 : Precision::f32;
    const EmbeddingSequence seq = load_sequence(opt.input, precision);
    const BandFilter filter =
        build_filter(parse_band_spec(opt.band_spec), seq.token_count());
    save_sequence(opt.output, filter_sequence(seq, filter), precision);
    return 0;
}

struct LoadedProjection {
    ProjectionMatrix matrix;
    ProjectionRef ref;
};

LoadedProjection load_projection_with_ref(const std::string& path) {
    ProjectionMatrix matrix = load_projection(path);
    const std::vector<std::byte> bytes = read_file(path);
    ProjectionRef ref{path, fnv1a64_hex(bytes), matrix.out_dim(), matrix.in_dim()};
    return {std::move(matrix), std::move(ref)};
}

std::optional<ScoreSummary> summarize(const std::vector<SimilarityItem>& items,
                                      std::optional<double> SimilarityItem::*field) {
    std::vector<double> values;
    for (const SimilarityItem& item : items) {
        if (item.*field) values.push_back(*(item.*field));
    }
    if (values.empty()) return std::nullopt;
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double variance = 0.0;
    for (double v : values) variance += (v - mean) * (v - mean);
    variance /= static_cast<double>(values.size());
    return ScoreSummary{values.size(), mean, std::sqrt(variance)};
}

int run_similarity(const SimilarityOptions& opt) {
    if (opt.stylized.size() != opt.content.size()) {
        throw UsageError("--stylized and --content need the same number of files (got " +
                         std::to_string(opt.stylized.size()) + " and " +
                         std::to_string(opt.content.size()) + ")");
    }
    const Precision precision = opt.f64 ? Precision::f64 : Precision::f32;

    std::vector<EmbeddingSequence> stylized;
    stylized.reserve(opt.stylized.size());
    for (const std::string& path : opt.stylized) {
        stylized.push_back(load_sequence(path, precision));
    }
    std::vector<EmbeddingSequence> content;
    content.reserve(opt.content.size());
    for (const std::string& path : opt.content) {
        content.push_back(load_sequence(path, precision));
    }
    const Embedding style_text = load_embedding_vector(opt.style_path, precision);
    const Embedding source_text = load_embedding_vector(opt.source_path, precision);

    std::optional<LoadedProjection> proj;
    if (!opt.proj_path.empty()) proj = load_projection_with_ref(opt.proj_path);

    const BandFilter filter =
        build_filter(parse_band_spec(opt.band_spec), stylized.front().token_count());

    // The batch is the patch batch: one directional loss per pair, rejection
    // at or below tau, and the aggregate patch loss over all of them.
    const PatchLossResult patch = patch_directional_loss(
        stylized, content, style_text, source_text, PatchLossConfig{opt.tau, filter});

    std::vector<SimilarityItem> items(stylized.size());
    parallel_for(stylized.size(), opt.jobs, [&](std::size_t i) {
        SimilarityItem& item = items[i];
        item.index = i;
        item.stylized_path = opt.stylized[i];
        item.content_path = opt.content[i];

        std::vector<std::string> notes;
        if (patch.outcomes[i] == PatchOutcome::degenerate) {
            notes.push_back("degenerate image or text direction");
        } else {
            item.directional_loss = patch.per_patch[i];
            item.rejected = patch.outcomes[i] == PatchOutcome::rejected;
        }

        const Embedding token = filtered_class_token(stylized[i], filter);
        try {
            item.clip_score = cosine_similarity(token, style_text);
        } catch (const DegeneracyError&) {
            notes.push_back("class token or style text below the minimum norm");
        }
        if (proj) {
            try {
                item.projected_score =
                    projected_similarity(token, style_text, proj->matrix);
            } catch (const DegeneracyError&) {
                notes.push_back("projected class token or style text below the minimum norm");
            }
        }

        item.status = notes.empty() ? ItemStatus::ok : ItemStatus::degenerate;
        for (std::size_t k = 0; k < notes.size(); ++k) {
            if (k > 0) item.note += "; ";
            item.note += notes[k];
        }
    });

    SimilarityReport report;
    report.meta.band_spec = opt.band_spec;
    report.meta.masked_indices = filter.masked();
    report.meta.tau = opt.tau;
    if (proj) report.meta.projection = proj->ref;
    report.meta.precision = opt.f64 ? "f64" : "f32";
    report.items = std::move(items);
    report.directional_loss = summarize(report.items, &SimilarityItem::directional_loss);
    report.clip_score = summarize(report.items, &SimilarityItem::clip_score);
    report.projected_score = summarize(report.items, &SimilarityItem::projected_score);
    report.patch_loss_total = patch.total;
    report.rejected_count = patch.count(PatchOutcome::rejected);
    report.degenerate_count = patch.count(PatchOutcome::degenerate);

    emit_report(opt.format == "csv" ? to_csv(report) : to_json(report), opt.out_path);
    return 0;
}

int run_sweep(const SweepOptions& opt) {
    const Precision precision = opt.f64 ? Precision::f64 : Precision::f32;

    std::vector<EmbeddingSequence> seqs;
    seqs.reserve(opt.sequences.size());
    for (const std::string& path : opt.sequences) {
        seqs.push_back(load_sequence(path, precision));
    }
    const Embedding text = load_embedding_vector(opt.text_path, precision);

    std::optional<LoadedProjection> proj;
    if (!opt.proj_path.empty()) proj = load_projection_with_ref(opt.proj_path);
    const ProjectionMatrix* matrix = proj ? &proj->matrix : nullptr;

    SweepReportDocument doc;
    doc.meta.precision = opt.f64 ? "f64" : "f32";
    if (proj) doc.meta.projection = proj->ref;
    doc.sweep = frequency_sweep(seqs, text, matrix, opt.jobs);

    // Rank the stock combinations when the default scheme applies. Report
    // only; picking a combination stays with the caller.
    try {
        const std::size_t n = doc.sweep.token_count;
        std::vector<CombinationScore> scored;
        for (const BandCombination& combo :
             {BandCombination::c1(), BandCombination::c2(), BandCombination::c3()}) {
            const BandFilter f = build_filter(combo, n);
            scored.push_back({combo.name, f.masked(),
                              score_with_filter(seqs, text, matrix, f)});
        }
        std::stable_sort(scored.begin(), scored.end(),
                         [](const CombinationScore& a, const CombinationScore& b) {
                             const bool a_scored = a.stats.mean.has_value();
                             const bool b_scored = b.stats.mean.has_value();
                             if (a_scored != b_scored) return a_scored;
                             if (a_scored && *a.stats.mean != *b.stats.mean) {
                                 return *a.stats.mean < *b.stats.mean;
                             }
                             return a.name < b.name;
                         });
        doc.combinations = std::move(scored);
    } catch (const UnsupportedLengthError&) {
        // sequences too short for the dyadic scheme: skip the ranking section
    }

    emit_report(opt.format == "csv" ? to_csv(doc) : to_json(doc), opt.out_path);
    return 0;
}

const char* error_class(const Error& e) {
    if (dynamic_cast<const IoError*>(&e)) return "io";
    if (dynamic_cast<const ParseError*>(&e)) return "parse";
    if (dynamic_cast<const LookupError*>(&e)) return "lookup";
    if (dynamic_cast<const UnsupportedLengthError*>(&e)) return "unsupported-length";
    if (dynamic_cast<const IndexError*>(&e)) return "index";
    if (dynamic_cast<const ShapeError*>(&e)) return "shape";
    if (dynamic_cast<const DegeneracyError*>(&e)) return "degeneracy";
    if (dynamic_cast<const DataError*>(&e)) return "data";
    return "error";
}

int exit_code_for(const Error& e) {
    if (dynamic_cast<const ParseError*>(&e) || dynamic_cast<const LookupError*>(&e)) {
        return 1;  // bad flag values are usage mistakes
    }
    if (dynamic_cast<const DegeneracyError*>(&e)) return 3;
    return 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Band-stop spectral filtering and similarity reports for "
                 "token-embedding sequences"};
    app.require_subcommand(1);

    BandsOptions bands_opt;
    CLI::App* bands_cmd =
        app.add_subcommand("bands", "Print the dyadic band table for a token count");
    bands_cmd->add_option("n", bands_opt.n, "number of tokens")->required();

    FilterOptions filter_opt;
    CLI::App* filter_cmd =
        app.add_subcommand("filter", "Band-stop filter a sequence file");
    filter_cmd->add_option("input", filter_opt.input, "input sequence (.eseq or JSON)")
        ->required();
    filter_cmd->add_option("output", filter_opt.output, "output sequence file")
        ->required();
    filter_cmd->add_option("--bands", filter_opt.band_spec,
                           "bands to mask: c1/c2/c3, band names, or index ranges");
    filter_cmd->add_flag("--f64", filter_opt.f64, "write a double-precision payload");

    SimilarityOptions sim_opt;
    CLI::App* sim_cmd = app.add_subcommand(
        "similarity", "Score stylized/content pairs against a style description");
    sim_cmd->add_option("--stylized", sim_opt.stylized, "stylized-image sequences")
        ->required();
    sim_cmd->add_option("--content", sim_opt.content,
                        "content-image sequences, matched to --stylized")
        ->required();
    sim_cmd->add_option("--style", sim_opt.style_path,
                        "style text embedding (single-token sequence)")
        ->required();
    sim_cmd->add_option("--source", sim_opt.source_path,
                        "source text embedding (single-token sequence)")
        ->required();
    sim_cmd->add_option("--bands", sim_opt.band_spec,
                        "bands to mask: c1/c2/c3, band names, or index ranges");
    sim_cmd->add_option("--tau", sim_opt.tau, "patch rejection threshold")
        ->capture_default_str();
    sim_cmd->add_option("--proj", sim_opt.proj_path, "projection matrix file");
    sim_cmd->add_option("--out", sim_opt.out_path,
                        "write the report here instead of stdout");
    sim_cmd->add_option("--format", sim_opt.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sim_cmd->add_option("--jobs", sim_opt.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
    sim_cmd->add_flag("--f64", sim_opt.f64,
                      "load JSON sequences without single-precision quantization");

    SweepOptions sweep_opt;
    CLI::App* sweep_cmd = app.add_subcommand(
        "sweep", "Per-frequency masking sweep over a batch of sequences");
    sweep_cmd->add_option("sequences", sweep_opt.sequences, "sequence files")
        ->required();
    sweep_cmd->add_option("--text", sweep_opt.text_path,
                          "text embedding (single-token sequence)")
        ->required();
    sweep_cmd->add_option("--proj", sweep_opt.proj_path, "projection matrix file");
    sweep_cmd->add_option("--out", sweep_opt.out_path,
                          "write the report here instead of stdout");
    sweep_cmd->add_option("--format", sweep_opt.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    sweep_cmd->add_option("--jobs", sweep_opt.jobs, "worker threads")
        ->check(CLI::PositiveNumber);
    sweep_cmd->add_flag("--f64", sweep_opt.f64,
                        "load JSON sequences without single-precision quantization");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "specfilt: usage: " << single_line(e.what()) << "\n";
        return 1;
    }

    try {
        if (*bands_cmd) return run_bands(bands_opt);
        if (*filter_cmd) return run_filter(filter_opt);
        if (*sim_cmd) return run_similarity(sim_opt);
        return run_sweep(sweep_opt);
    } catch (const UsageError& e) {
        std::cerr << "specfilt: usage: " << single_line(e.what()) << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "specfilt: " << error_class(e) << ": " << single_line(e.what())
                  << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "specfilt: internal: " << single_line(e.what()) << "\n";
        return 2;
    }
}
