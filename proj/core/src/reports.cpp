#include "specfilt/reports.hpp"

#include <charconv>
#include <nlohmann/json.hpp>

namespace specfilt {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json meta_json(const ReportMeta& meta) {
    ordered_json j;
    j["band_spec"] = meta.band_spec;
    j["masked_indices"] = meta.masked_indices;
    if (meta.tau.has_value()) j["tau"] = *meta.tau;
    if (meta.projection.has_value()) {
        ordered_json p;
        p["path"] = meta.projection->path;
        p["fnv1a64"] = meta.projection->fnv1a64;
        p["out_dim"] = meta.projection->out_dim;
        p["in_dim"] = meta.projection->in_dim;
        j["projection"] = std::move(p);
    }
    j["precision"] = meta.precision;
    return j;
}

ordered_json summary_json(const ScoreSummary& s) {
    ordered_json j;
    j["count"] = s.count;
    j["mean"] = s.mean;
    j["stddev"] = s.stddev;
    return j;
}

ordered_json stats_json(const ScoreStats& s) {
    ordered_json j;
    j["used"] = s.used;
    j["skipped"] = s.skipped;
    if (s.mean.has_value()) {
        j["mean"] = *s.mean;
        j["stddev"] = *s.stddev;
    } else {
        j["mean"] = nullptr;
        j["stddev"] = nullptr;
    }
    return j;
}

void append_csv_text(std::string& out, const std::string& text) {
    const bool needs_quotes =
        text.find_first_of(",\"\n\r") != std::string::npos;
    if (!needs_quotes) {
        out += text;
        return;
    }
    out += '"';
    for (char c : text) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace

std::string format_double(double v) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, result.ptr);
}

std::string to_json(const SimilarityReport& report) {
    ordered_json j;
    j["meta"] = meta_json(report.meta);
    ordered_json items = ordered_json::array();
    for (const SimilarityItem& item : report.items) {
        ordered_json row;
        row["index"] = item.index;
        row["stylized"] = item.stylized_path;
        row["content"] = item.content_path;
        row["status"] = item.status == ItemStatus::ok ? "ok" : "degenerate";
        row["directional_loss"] =
            item.directional_loss.has_value() ? ordered_json(*item.directional_loss)
                                              : ordered_json(nullptr);
        row["rejected"] = item.rejected.has_value() ? ordered_json(*item.rejected)
                                                    : ordered_json(nullptr);
        row["clip_score"] = item.clip_score.has_value() ? ordered_json(*item.clip_score)
                                                        : ordered_json(nullptr);
        row["projected_score"] = item.projected_score.has_value()
                                     ? ordered_json(*item.projected_score)
                                     : ordered_json(nullptr);
        if (!item.note.empty()) row["note"] = item.note;
        items.push_back(std::move(row));
    }
    j["items"] = std::move(items);
    ordered_json summaries;
    if (report.directional_loss.has_value()) {
        summaries["directional_loss"] = summary_json(*report.directional_loss);
    }
    if (report.clip_score.has_value()) {
        summaries["clip_score"] = summary_json(*report.clip_score);
    }
    if (report.projected_score.has_value()) {
        summaries["projected_score"] = summary_json(*report.projected_score);
    }
    j["summaries"] = std::move(summaries);
    ordered_json patch;
    patch["total"] = report.patch_loss_total;
    patch["rejected"] = report.rejected_count;
    patch["degenerate"] = report.degenerate_count;
    j["patch_loss"] = std::move(patch);
    return j.dump(2) + "\n";
}

std::string to_csv(const SimilarityReport& report) {
    std::string out =
        "index,stylized,content,status,directional_loss,rejected,clip_score,"
        "projected_score\n";
    for (const SimilarityItem& item : report.items) {
        out += std::to_string(item.index);
        out += ',';
        append_csv_text(out, item.stylized_path);
        out += ',';
        append_csv_text(out, item.content_path);
        out += ',';
        out += item.status == ItemStatus::ok ? "ok" : "degenerate";
        out += ',';
        if (item.directional_loss.has_value()) out += format_double(*item.directional_loss);
        out += ',';
        if (item.rejected.has_value()) out += *item.rejected ? "true" : "false";
        out += ',';
        if (item.clip_score.has_value()) out += format_double(*item.clip_score);
        out += ',';
        if (item.projected_score.has_value()) out += format_double(*item.projected_score);
        out += '\n';
    }
    return out;
}

std::string to_json(const SweepReportDocument& report) {
    ordered_json j;
    j["meta"] = meta_json(report.meta);
    ordered_json sweep;
    sweep["token_count"] = report.sweep.token_count;
    sweep["channel_count"] = report.sweep.channel_count;
    sweep["sequence_count"] = report.sweep.sequence_count;
    sweep["projected"] = report.sweep.projected;
    ordered_json rows = ordered_json::array();
    for (const SweepRow& row : report.sweep.rows) {
        ordered_json r;
        r["frequency"] = row.frequency.has_value() ? ordered_json(*row.frequency)
                                                   : ordered_json(nullptr);
        r["scores"] = stats_json(row.stats);
        rows.push_back(std::move(r));
    }
    sweep["rows"] = std::move(rows);
    j["sweep"] = std::move(sweep);
    if (!report.combinations.empty()) {
        ordered_json combos = ordered_json::array();
        for (const CombinationScore& combo : report.combinations) {
            ordered_json c;
            c["name"] = combo.name;
            c["masked"] = combo.masked;
            c["scores"] = stats_json(combo.stats);
            combos.push_back(std::move(c));
        }
        j["combinations"] = std::move(combos);
    }
    return j.dump(2) + "\n";
}

std::string to_csv(const SweepReportDocument& report) {
    std::string out = "frequency,mean,stddev,used,skipped\n";
    for (const SweepRow& row : report.sweep.rows) {
        if (row.frequency.has_value()) {
            out += std::to_string(*row.frequency);
        } else {
            out += "baseline";
        }
        out += ',';
        if (row.stats.mean.has_value()) out += format_double(*row.stats.mean);
        out += ',';
        if (row.stats.stddev.has_value()) out += format_double(*row.stats.stddev);
        out += ',';
        out += std::to_string(row.stats.used);
        out += ',';
        out += std::to_string(row.stats.skipped);
        out += '\n';
    }
    return out;
}

}  // namespace specfilt
