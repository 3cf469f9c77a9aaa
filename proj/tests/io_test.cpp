#include "specfilt/io.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "specfilt/errors.hpp"
#include "specfilt/reports.hpp"
#include "support/test_util.hpp"

namespace specfilt {
namespace {

namespace fs = std::filesystem;

std::vector<std::byte> bytes_of(std::initializer_list<unsigned> values) {
    std::vector<std::byte> out;
    for (unsigned v : values) out.push_back(static_cast<std::byte>(v));
    return out;
}

void append_le32(std::vector<std::byte>& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xff));
}

std::vector<std::byte> minimal_sequence_file() {
    // "ESEQ", version 1, n=1, d=1, one f32 value 1.0.
    std::vector<std::byte> out = bytes_of({'E', 'S', 'E', 'Q'});
    append_le32(out, 1);
    append_le32(out, 1);
    append_le32(out, 1);
    append_le32(out, 0x3f800000);  // 1.0f
    return out;
}

IoErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const IoError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected an IoError";
    return IoErrorKind::file;
}

fs::path temp_path(const std::string& name) {
    return fs::path(::testing::TempDir()) / name;
}

TEST(SequenceFormat, MinimalFileParsesAndMatchesTheWriter) {
    const std::vector<std::byte> file = minimal_sequence_file();
    EXPECT_EQ(file.size(), 20u);
    EmbeddingSequence seq = read_sequence(file);
    EXPECT_EQ(seq.token_count(), 1u);
    EXPECT_EQ(seq.channel_count(), 1u);
    EXPECT_DOUBLE_EQ(seq.at(0, 0), 1.0);

    EXPECT_EQ(write_sequence(seq, Precision::f32), file);
}

TEST(SequenceFormat, RoundtripIsBitwiseStable) {
    std::mt19937_64 rng(71);
    EmbeddingSequence seq = testutil::random_sequence(rng, 5, 7);
    const std::vector<std::byte> once = write_sequence(seq, Precision::f32);
    EmbeddingSequence back = read_sequence(once);
    const std::vector<std::byte> twice = write_sequence(back, Precision::f32);
    EXPECT_EQ(once, twice);
    // Values live as exact f32 after the first write.
    for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 7; ++j) {
            EXPECT_EQ(back.at(i, j), static_cast<double>(static_cast<float>(seq.at(i, j))));
        }
    }
}

TEST(SequenceFormat, DoublePrecisionRoundtripIsExact) {
    std::mt19937_64 rng(73);
    EmbeddingSequence seq = testutil::random_sequence(rng, 4, 3);
    seq.at(0, 0) = 0.1;  // not representable in f32
    const std::vector<std::byte> file = write_sequence(seq, Precision::f64);
    EmbeddingSequence back = read_sequence(file);
    for (std::size_t k = 0; k < seq.values().size(); ++k) {
        EXPECT_EQ(back.values()[k], seq.values()[k]);
    }
    EXPECT_EQ(write_sequence(back, Precision::f64), file);
}

TEST(SequenceFormat, ErrorTaxonomy) {
    // Bad magic.
    std::vector<std::byte> wrong = minimal_sequence_file();
    wrong[0] = static_cast<std::byte>('X');
    EXPECT_EQ(kind_of([&] { read_sequence(wrong); }), IoErrorKind::bad_magic);

    // Unknown version.
    std::vector<std::byte> version = minimal_sequence_file();
    version[4] = static_cast<std::byte>(9);
    EXPECT_EQ(kind_of([&] { read_sequence(version); }), IoErrorKind::bad_version);

    // Zero dimension.
    std::vector<std::byte> zero = bytes_of({'E', 'S', 'E', 'Q'});
    append_le32(zero, 1);
    append_le32(zero, 0);
    append_le32(zero, 1);
    EXPECT_EQ(kind_of([&] { read_sequence(zero); }), IoErrorKind::zero_dimension);

    // Declared n=2, d=3 but only 5 floats of payload.
    std::vector<std::byte> shorted = bytes_of({'E', 'S', 'E', 'Q'});
    append_le32(shorted, 1);
    append_le32(shorted, 2);
    append_le32(shorted, 3);
    for (int k = 0; k < 5; ++k) append_le32(shorted, 0x3f800000);
    EXPECT_EQ(kind_of([&] { read_sequence(shorted); }), IoErrorKind::truncated);

    // Header alone, cut mid-field.
    std::vector<std::byte> stub = bytes_of({'E', 'S', 'E', 'Q', 1});
    EXPECT_EQ(kind_of([&] { read_sequence(stub); }), IoErrorKind::truncated);

    // One value too many.
    std::vector<std::byte> little = minimal_sequence_file();
    append_le32(little, 0x3f800000);
    EXPECT_EQ(kind_of([&] { read_sequence(little); }), IoErrorKind::trailing_data);

    // Non-finite payload (f32 +inf).
    std::vector<std::byte> inf = bytes_of({'E', 'S', 'E', 'Q'});
    append_le32(inf, 1);
    append_le32(inf, 1);
    append_le32(inf, 1);
    append_le32(inf, 0x7f800000);
    EXPECT_EQ(kind_of([&] { read_sequence(inf); }), IoErrorKind::non_finite);
}

TEST(ProjectionFormat, IdentityAndRoundtrip) {
    std::vector<std::byte> file = bytes_of({'P', 'R', 'O', 'J'});
    append_le32(file, 1);
    append_le32(file, 2);
    append_le32(file, 2);
    append_le32(file, 0x3f800000);
    append_le32(file, 0);
    append_le32(file, 0);
    append_le32(file, 0x3f800000);
    ProjectionMatrix p = read_projection(file);
    EXPECT_EQ(p.out_dim(), 2u);
    EXPECT_EQ(p.in_dim(), 2u);
    EXPECT_DOUBLE_EQ(p.at(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(p.at(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(p.at(1, 0), 0.0);
    EXPECT_DOUBLE_EQ(p.at(1, 1), 1.0);
    EXPECT_EQ(write_projection(p, Precision::f32), file);

    std::mt19937_64 rng(79);
    ProjectionMatrix random(8, 16, testutil::random_values(rng, 8 * 16));
    const std::vector<std::byte> once = write_projection(random, Precision::f32);
    EXPECT_EQ(write_projection(read_projection(once), Precision::f32), once);

    std::vector<std::byte> bad = file;
    bad[2] = static_cast<std::byte>('J');
    bad[3] = static_cast<std::byte>('X');
    EXPECT_EQ(kind_of([&] { read_projection(bad); }), IoErrorKind::bad_magic);
}

TEST(JsonSequence, ParsesEqualToItsBinaryTwin) {
    EmbeddingSequence binary = read_sequence([] {
        std::vector<std::byte> file = bytes_of({'E', 'S', 'E', 'Q'});
        append_le32(file, 1);
        append_le32(file, 3);
        append_le32(file, 1);
        append_le32(file, 0x3f800000);  // 1.0
        append_le32(file, 0);           // 0.0
        append_le32(file, 0);           // 0.0
        return file;
    }());
    EmbeddingSequence json =
        read_sequence_json(R"({"n": 3, "d": 1, "data": [[1.0], [0.0], [0.0]]})");
    ASSERT_EQ(json.token_count(), binary.token_count());
    ASSERT_EQ(json.channel_count(), binary.channel_count());
    EXPECT_EQ(json.values(), binary.values());
}

TEST(JsonSequence, QuantizesThroughSinglePrecisionByDefault) {
    EmbeddingSequence seq = read_sequence_json(R"({"n": 1, "d": 1, "data": [[0.1]]})");
    EXPECT_EQ(seq.at(0, 0), static_cast<double>(0.1f));
    EmbeddingSequence wide =
        read_sequence_json(R"({"n": 1, "d": 1, "data": [[0.1]]})", Precision::f64);
    EXPECT_EQ(wide.at(0, 0), 0.1);
}

TEST(JsonSequence, SchemaErrorsNameTheirPath) {
    EXPECT_EQ(kind_of([] { read_sequence_json("not json at all"); }),
              IoErrorKind::schema);
    EXPECT_EQ(kind_of([] { read_sequence_json("[1, 2]"); }), IoErrorKind::schema);
    EXPECT_EQ(kind_of([] { read_sequence_json(R"({"n": 1, "d": 1})"); }),
              IoErrorKind::schema);
    EXPECT_EQ(
        kind_of([] { read_sequence_json(R"({"n": 0, "d": 1, "data": []})"); }),
        IoErrorKind::zero_dimension);
    EXPECT_EQ(kind_of([] {
                  read_sequence_json(R"({"n": 2, "d": 1, "data": [[1.0]]})");
              }),
              IoErrorKind::schema);

    // A short row must be reported by its index.
    try {
        read_sequence_json(R"({"n": 2, "d": 2, "data": [[1.0, 2.0], [3.0]]})");
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_EQ(e.kind(), IoErrorKind::schema);
        EXPECT_NE(std::string(e.what()).find("/data/1"), std::string::npos) << e.what();
    }

    try {
        read_sequence_json(R"({"n": 1, "d": 2, "data": [[1.0, "x"]]})");
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_EQ(e.kind(), IoErrorKind::schema);
        EXPECT_NE(std::string(e.what()).find("/data/0/1"), std::string::npos) << e.what();
    }
}

TEST(Files, LoadSniffsBinaryAndJson) {
    std::mt19937_64 rng(83);
    EmbeddingSequence seq = testutil::random_sequence(rng, 3, 2);
    const fs::path binary = temp_path("io_test_sniff.eseq");
    save_sequence(binary, seq, Precision::f32);
    EmbeddingSequence from_binary = load_sequence(binary);

    const fs::path json = temp_path("io_test_sniff.json");
    std::string text = R"({"n": 3, "d": 2, "data": [)";
    for (std::size_t i = 0; i < 3; ++i) {
        text += i == 0 ? "[" : ", [";
        for (std::size_t j = 0; j < 2; ++j) {
            if (j) text += ", ";
            text += format_double(from_binary.at(i, j));
        }
        text += "]";
    }
    text += "]}";
    write_file(json, text);
    EmbeddingSequence from_json = load_sequence(json);

    EXPECT_EQ(from_json.values(), from_binary.values());
    fs::remove(binary);
    fs::remove(json);
}

TEST(Files, MissingFileIsAFileError) {
    EXPECT_EQ(kind_of([] { load_sequence("/nonexistent/specfilt.eseq"); }),
              IoErrorKind::file);
}

TEST(Files, CorruptFileDiagnosticsIncludeThePath) {
    const fs::path path = temp_path("io_test_corrupt.eseq");
    std::vector<std::byte> bad = minimal_sequence_file();
    bad.pop_back();
    write_file(path, std::span<const std::byte>(bad));
    try {
        load_sequence(path);
        FAIL() << "expected IoError";
    } catch (const IoError& e) {
        EXPECT_EQ(e.kind(), IoErrorKind::truncated);
        EXPECT_NE(std::string(e.what()).find("io_test_corrupt.eseq"), std::string::npos)
            << e.what();
    }
    fs::remove(path);
}

TEST(Files, EmbeddingVectorsAreSingleTokenSequences) {
    const fs::path good = temp_path("io_test_vector.eseq");
    EmbeddingSequence one(1, 3, {0.5, -0.25, 4.0});
    save_sequence(good, one);
    Embedding v = load_embedding_vector(good);
    EXPECT_EQ(v.dim(), 3u);
    EXPECT_DOUBLE_EQ(v.values[2], 4.0);

    const fs::path bad = temp_path("io_test_vector_bad.eseq");
    EmbeddingSequence two(2, 3);
    two.at(0, 0) = 1.0;
    save_sequence(bad, two);
    EXPECT_THROW(load_embedding_vector(bad), ShapeError);
    fs::remove(good);
    fs::remove(bad);
}

TEST(Fingerprint, MatchesPublishedFnv1aVectors) {
    auto hash_text = [](std::string_view text) {
        return fnv1a64_hex(std::as_bytes(std::span(text.data(), text.size())));
    };
    EXPECT_EQ(hash_text(""), "cbf29ce484222325");
    EXPECT_EQ(hash_text("a"), "af63dc4c8601ec8c");
    EXPECT_EQ(hash_text("foobar"), "85944171f73967e8");
}

}  // namespace
}  // namespace specfilt
