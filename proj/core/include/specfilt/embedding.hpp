#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "specfilt/errors.hpp"

namespace specfilt {

/// Index of the class token inside a token sequence.
inline constexpr std::size_t kClassTokenIndex = 0;

/// A single d-dimensional embedding vector.
struct Embedding {
    std::vector<double> values;

    Embedding() = default;
    explicit Embedding(std::vector<double> v) : values(std::move(v)) {}
    explicit Embedding(std::span<const double> v) : values(v.begin(), v.end()) {}

    std::size_t dim() const { return values.size(); }

    double norm() const {
        double s = 0.0;
        for (double v : values) s += v * v;
        return std::sqrt(s);
    }
};

/// Ordered sequence of n token vectors of d channels each, stored token-major
/// (row i = token i). Token 0 is the class token.
class EmbeddingSequence {
public:
    EmbeddingSequence(std::size_t token_count, std::size_t channel_count)
        : n_(token_count), d_(channel_count) {
        if (n_ == 0) throw DataError("sequence must have at least one token");
        if (d_ == 0) throw DataError("sequence must have at least one channel");
        values_.assign(n_ * d_, 0.0);
    }

    EmbeddingSequence(std::size_t token_count, std::size_t channel_count,
                      std::vector<double> values)
        : EmbeddingSequence(token_count, channel_count) {
        if (values.size() != n_ * d_) {
            throw ShapeError("sequence payload size does not match n*d");
        }
        values_ = std::move(values);
    }

    std::size_t token_count() const { return n_; }
    std::size_t channel_count() const { return d_; }

    double at(std::size_t token, std::size_t channel) const {
        return values_[token * d_ + channel];
    }
    double& at(std::size_t token, std::size_t channel) {
        return values_[token * d_ + channel];
    }

    std::span<const double> token(std::size_t i) const {
        return {values_.data() + i * d_, d_};
    }
    std::span<double> token(std::size_t i) {
        return {values_.data() + i * d_, d_};
    }

    Embedding class_token() const { return Embedding(token(kClassTokenIndex)); }

    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool all_finite() const {
        for (double v : values_) {
            if (!std::isfinite(v)) return false;
        }
        return true;
    }

private:
    std::size_t n_;
    std::size_t d_;
    std::vector<double> values_;
};

}  // namespace specfilt
