#include "specfilt/io.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <nlohmann/json.hpp>

namespace specfilt {

namespace {

constexpr std::size_t kHeaderSize = 16;  // magic + version + two u32 dims

std::uint32_t read_u32(std::span<const std::byte> bytes, std::size_t offset) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        v |= static_cast<std::uint32_t>(std::to_integer<std::uint8_t>(bytes[offset + i]))
             << (8 * i);
    }
    return v;
}

void append_u32(std::vector<std::byte>& out, std::uint32_t v) {
    for (std::size_t i = 0; i < 4; ++i) {
        out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xffu));
    }
}

void append_f32(std::vector<std::byte>& out, float v) {
    append_u32(out, std::bit_cast<std::uint32_t>(v));
}

void append_f64(std::vector<std::byte>& out, double v) {
    const std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (std::size_t i = 0; i < 8; ++i) {
        out.push_back(static_cast<std::byte>((bits >> (8 * i)) & 0xffu));
    }
}

double read_value(std::span<const std::byte> bytes, std::size_t offset,
                  std::uint32_t version) {
    if (version == kFormatVersionF32) {
        return static_cast<double>(std::bit_cast<float>(read_u32(bytes, offset)));
    }
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        bits |= static_cast<std::uint64_t>(std::to_integer<std::uint8_t>(bytes[offset + i]))
                << (8 * i);
    }
    return std::bit_cast<double>(bits);
}

struct Header {
    std::uint32_t version;
    std::uint32_t rows;
    std::uint32_t cols;
};

// Parses and validates a 16-byte header plus payload-size accounting shared by
// the two binary formats. `noun_rows`/`noun_cols` feed the diagnostics.
Header read_header(std::span<const std::byte> bytes, const char* magic,
                   const char* noun_rows, const char* noun_cols) {
    if (bytes.size() < 4) {
        throw IoError(IoErrorKind::truncated,
                      "file too short for a magic number (" +
                          std::to_string(bytes.size()) + " bytes)");
    }
    if (std::memcmp(bytes.data(), magic, 4) != 0) {
        std::string got(4, '?');
        for (std::size_t i = 0; i < 4; ++i) {
            const char c = static_cast<char>(std::to_integer<std::uint8_t>(bytes[i]));
            if (c >= 0x20 && c < 0x7f) got[i] = c;
        }
        throw IoError(IoErrorKind::bad_magic,
                      "bad magic '" + got + "', expected '" + magic + "'");
    }
    if (bytes.size() < kHeaderSize) {
        throw IoError(IoErrorKind::truncated,
                      "file too short for a header (" + std::to_string(bytes.size()) +
                          " bytes, need " + std::to_string(kHeaderSize) + ")");
    }
    Header h{read_u32(bytes, 4), read_u32(bytes, 8), read_u32(bytes, 12)};
    if (h.version != kFormatVersionF32 && h.version != kFormatVersionF64) {
        throw IoError(IoErrorKind::bad_version,
                      "unsupported format version " + std::to_string(h.version));
    }
    if (h.rows == 0 || h.cols == 0) {
        throw IoError(IoErrorKind::zero_dimension,
                      std::string(noun_rows) + "=" + std::to_string(h.rows) + ", " +
                          noun_cols + "=" + std::to_string(h.cols) +
                          ": both must be positive");
    }
    const std::size_t value_size = h.version == kFormatVersionF32 ? 4 : 8;
    const std::uint64_t expected =
        static_cast<std::uint64_t>(h.rows) * h.cols * value_size;
    const std::uint64_t got_payload = bytes.size() - kHeaderSize;
    if (got_payload < expected) {
        throw IoError(IoErrorKind::truncated,
                      "payload truncated: " + std::to_string(got_payload) +
                          " bytes, header declares " + std::to_string(expected));
    }
    if (got_payload > expected) {
        throw IoError(IoErrorKind::trailing_data,
                      std::to_string(got_payload - expected) +
                          " trailing bytes after the declared payload");
    }
    return h;
}

std::vector<double> read_payload(std::span<const std::byte> bytes, const Header& h,
                                 const char* noun_rows, const char* noun_cols) {
    const std::size_t count = static_cast<std::size_t>(h.rows) * h.cols;
    const std::size_t value_size = h.version == kFormatVersionF32 ? 4 : 8;
    std::vector<double> values(count);
    for (std::size_t i = 0; i < count; ++i) {
        values[i] = read_value(bytes, kHeaderSize + i * value_size, h.version);
        if (!std::isfinite(values[i])) {
            throw IoError(IoErrorKind::non_finite,
                          "non-finite value at " + std::string(noun_rows) + " " +
                              std::to_string(i / h.cols) + ", " + noun_cols + " " +
                              std::to_string(i % h.cols));
        }
    }
    return values;
}

std::vector<std::byte> write_payload(const char* magic, std::uint32_t rows,
                                     std::uint32_t cols,
                                     const std::vector<double>& values,
                                     Precision precision) {
    std::vector<std::byte> out;
    const std::size_t value_size = precision == Precision::f32 ? 4 : 8;
    out.reserve(kHeaderSize + values.size() * value_size);
    for (std::size_t i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>(magic[i]));
    append_u32(out, precision == Precision::f32 ? kFormatVersionF32 : kFormatVersionF64);
    append_u32(out, rows);
    append_u32(out, cols);
    for (double v : values) {
        if (precision == Precision::f32) {
            append_f32(out, static_cast<float>(v));
        } else {
            append_f64(out, v);
        }
    }
    return out;
}

std::uint32_t checked_u32(std::size_t v, const char* what) {
    if (v > 0xffffffffu) {
        throw DataError(std::string(what) + " too large for the file format");
    }
    return static_cast<std::uint32_t>(v);
}

}  // namespace

EmbeddingSequence read_sequence(std::span<const std::byte> bytes) {
    const Header h = read_header(bytes, "ESEQ", "n", "d");
    return EmbeddingSequence(h.rows, h.cols, read_payload(bytes, h, "token", "channel"));
}

std::vector<std::byte> write_sequence(const EmbeddingSequence& seq, Precision precision) {
    return write_payload("ESEQ", checked_u32(seq.token_count(), "token count"),
                         checked_u32(seq.channel_count(), "channel count"),
                         seq.values(), precision);
}

ProjectionMatrix read_projection(std::span<const std::byte> bytes) {
    const Header h = read_header(bytes, "PROJ", "out_dim", "in_dim");
    return ProjectionMatrix(h.rows, h.cols, read_payload(bytes, h, "row", "column"));
}

std::vector<std::byte> write_projection(const ProjectionMatrix& p, Precision precision) {
    return write_payload("PROJ", checked_u32(p.out_dim(), "out_dim"),
                         checked_u32(p.in_dim(), "in_dim"), p.values(), precision);
}

EmbeddingSequence read_sequence_json(std::string_view text, Precision precision) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw IoError(IoErrorKind::schema, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw IoError(IoErrorKind::schema, "/: expected an object");
    }
    for (const char* key : {"n", "d", "data"}) {
        if (!doc.contains(key)) {
            throw IoError(IoErrorKind::schema, std::string("/") + key + ": missing");
        }
    }
    if (!doc["n"].is_number_unsigned() || !doc["d"].is_number_unsigned()) {
        throw IoError(IoErrorKind::schema, "/n, /d: expected non-negative integers");
    }
    const std::uint64_t n = doc["n"].get<std::uint64_t>();
    const std::uint64_t d = doc["d"].get<std::uint64_t>();
    if (n == 0 || d == 0) {
        throw IoError(IoErrorKind::zero_dimension,
                      "n=" + std::to_string(n) + ", d=" + std::to_string(d) +
                          ": both must be positive");
    }
    const nlohmann::json& data = doc["data"];
    if (!data.is_array() || data.size() != n) {
        throw IoError(IoErrorKind::schema,
                      "/data: expected an array of " + std::to_string(n) + " rows" +
                          (data.is_array()
                               ? ", got " + std::to_string(data.size())
                               : std::string(", got a non-array")));
    }
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(n * d));
    for (std::size_t i = 0; i < n; ++i) {
        const nlohmann::json& row = data[i];
        if (!row.is_array() || row.size() != d) {
            throw IoError(IoErrorKind::schema,
                          "/data/" + std::to_string(i) + ": expected " +
                              std::to_string(d) + " values, got " +
                              (row.is_array() ? std::to_string(row.size())
                                              : std::string("a non-array")));
        }
        for (std::size_t j = 0; j < d; ++j) {
            if (!row[j].is_number()) {
                throw IoError(IoErrorKind::schema, "/data/" + std::to_string(i) + "/" +
                                                       std::to_string(j) +
                                                       ": expected a number");
            }
            double v = row[j].get<double>();
            if (precision == Precision::f32) v = static_cast<double>(static_cast<float>(v));
            if (!std::isfinite(v)) {
                throw IoError(IoErrorKind::non_finite,
                              "/data/" + std::to_string(i) + "/" + std::to_string(j) +
                                  ": non-finite value");
            }
            values.push_back(v);
        }
    }
    return EmbeddingSequence(static_cast<std::size_t>(n), static_cast<std::size_t>(d),
                             std::move(values));
}

std::vector<std::byte> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError(IoErrorKind::file, "cannot open '" + path.string() + "'");
    }
    std::vector<std::byte> bytes;
    in.seekg(0, std::ios::end);
    const std::streamoff size = in.tellg();
    if (size < 0) {
        throw IoError(IoErrorKind::file, "cannot determine size of '" + path.string() + "'");
    }
    in.seekg(0, std::ios::beg);
    bytes.resize(static_cast<std::size_t>(size));
    if (size > 0) {
        in.read(reinterpret_cast<char*>(bytes.data()), size);
    }
    if (!in) {
        throw IoError(IoErrorKind::file, "failed reading '" + path.string() + "'");
    }
    return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError(IoErrorKind::file, "cannot open '" + path.string() + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw IoError(IoErrorKind::file, "failed writing '" + path.string() + "'");
    }
}

void write_file(const std::filesystem::path& path, std::string_view text) {
    write_file(path, std::as_bytes(std::span(text.data(), text.size())));
}

EmbeddingSequence load_sequence(const std::filesystem::path& path, Precision precision) {
    const std::vector<std::byte> bytes = read_file(path);
    try {
        if (bytes.size() >= 4 && std::memcmp(bytes.data(), "ESEQ", 4) == 0) {
            return read_sequence(bytes);
        }
        return read_sequence_json(
            std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()),
            precision);
    } catch (const IoError& e) {
        throw IoError(e.kind(), "'" + path.string() + "': " + e.what());
    }
}

void save_sequence(const std::filesystem::path& path, const EmbeddingSequence& seq,
                   Precision precision) {
    write_file(path, std::span<const std::byte>(write_sequence(seq, precision)));
}

ProjectionMatrix load_projection(const std::filesystem::path& path) {
    try {
        return read_projection(read_file(path));
    } catch (const IoError& e) {
        if (e.kind() == IoErrorKind::file) throw;
        throw IoError(e.kind(), "'" + path.string() + "': " + e.what());
    }
}

Embedding load_embedding_vector(const std::filesystem::path& path, Precision precision) {
    const EmbeddingSequence seq = load_sequence(path, precision);
    if (seq.token_count() != 1) {
        throw ShapeError("'" + path.string() + "' holds " +
                         std::to_string(seq.token_count()) +
                         " tokens, expected a single-token embedding vector");
    }
    return seq.class_token();
}

std::uint64_t fnv1a64(std::span<const std::byte> bytes) {
    std::uint64_t hash = 14695981039346656037ull;
    for (std::byte b : bytes) {
        hash ^= std::to_integer<std::uint64_t>(b);
        hash *= 1099511628211ull;
    }
    return hash;
}

std::string fnv1a64_hex(std::span<const std::byte> bytes) {
    static const char* digits = "0123456789abcdef";
    const std::uint64_t hash = fnv1a64(bytes);
    std::string out(16, '0');
    for (std::size_t i = 0; i < 16; ++i) {
        out[15 - i] = digits[(hash >> (4 * i)) & 0xf];
    }
    return out;
}

}  // namespace specfilt
