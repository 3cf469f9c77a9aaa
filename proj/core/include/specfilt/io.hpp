#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "specfilt/embedding.hpp"
#include "specfilt/errors.hpp"
#include "specfilt/similarity.hpp"

namespace specfilt {

// Binary formats, all integers and floats little-endian:
//   ESEQ: magic "ESEQ" | version u32 | n u32 | d u32 | n*d values token-major
//   PROJ: magic "PROJ" | version u32 | out_dim u32 | in_dim u32 | row-major values
// Version 1 stores IEEE-754 single precision values (the interchange
// contract); version 2 stores double precision.

enum class Precision { f32, f64 };

inline constexpr std::uint32_t kFormatVersionF32 = 1;
inline constexpr std::uint32_t kFormatVersionF64 = 2;

EmbeddingSequence read_sequence(std::span<const std::byte> bytes);
std::vector<std::byte> write_sequence(const EmbeddingSequence& seq,
                                      Precision precision = Precision::f32);

ProjectionMatrix read_projection(std::span<const std::byte> bytes);
std::vector<std::byte> write_projection(const ProjectionMatrix& p,
                                        Precision precision = Precision::f32);

/// JSON form {"n": .., "d": .., "data": [[..], ..]}. Values pass through f32
/// at Precision::f32 so the binary and JSON loaders agree on equivalent
/// content.
EmbeddingSequence read_sequence_json(std::string_view text,
                                     Precision precision = Precision::f32);

std::vector<std::byte> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::byte> bytes);
void write_file(const std::filesystem::path& path, std::string_view text);

/// Loads a sequence file, sniffing binary (ESEQ magic) vs JSON content.
EmbeddingSequence load_sequence(const std::filesystem::path& path,
                                Precision precision = Precision::f32);
void save_sequence(const std::filesystem::path& path, const EmbeddingSequence& seq,
                   Precision precision = Precision::f32);

ProjectionMatrix load_projection(const std::filesystem::path& path);

/// Loads an embedding vector stored as a single-token sequence (n == 1).
Embedding load_embedding_vector(const std::filesystem::path& path,
                                Precision precision = Precision::f32);

/// FNV-1a 64-bit fingerprint (not cryptographic) used to identify report
/// inputs.
std::uint64_t fnv1a64(std::span<const std::byte> bytes);
std::string fnv1a64_hex(std::span<const std::byte> bytes);

}  // namespace specfilt
