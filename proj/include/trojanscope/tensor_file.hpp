#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "trojanscope/errors.hpp"

namespace trojanscope {

// Container layout: 8-byte little-endian unsigned header length, UTF-8 JSON
// header mapping tensor name -> {dtype, shape, data_offsets}, then the raw
// little-endian row-major payload. Offsets are relative to the payload start.

enum class Dtype { Bool, U8, I8, I16, U16, F16, BF16, I32, U32, F32, F64, I64, U64 };

std::string_view dtype_tag(Dtype dtype);
std::size_t dtype_size(Dtype dtype);
std::optional<Dtype> dtype_from_tag(std::string_view tag);

struct TensorEntry {
    Dtype dtype = Dtype::F32;
    std::vector<std::size_t> shape;
    std::uint64_t begin = 0;  // byte range into the payload, [begin, end)
    std::uint64_t end = 0;

    std::size_t element_count() const;
};

/// Parsed index of one tensor container. Opening reads and validates the
/// header only; payload bytes are read on demand. Immutable after open, so
/// concurrent reads are safe.
class TensorFile {
public:
    static TensorFile open(const std::filesystem::path& path);

    const std::filesystem::path& path() const { return path_; }
    const std::map<std::string, TensorEntry>& entries() const { return entries_; }

    bool contains(std::string_view name) const;
    const TensorEntry& entry(const std::string& name) const;  // throws MissingTensor

    /// Reads one tensor's payload widened to 64-bit reals. Only F32 and F64
    /// entries support this; other dtypes raise UnsupportedDtype.
    std::vector<double> read_values(const std::string& name) const;

private:
    std::filesystem::path path_;
    std::map<std::string, TensorEntry> entries_;
    std::uint64_t payload_offset_ = 0;
    std::uint64_t payload_size_ = 0;
};

struct TensorListing {
    std::string name;
    Dtype dtype;
    std::vector<std::size_t> shape;
};

/// Names sorted lexicographically; a pure function of the file bytes.
std::vector<TensorListing> list_tensors(const TensorFile& tf);

/// A classifier layer normalized to shape [num_classes, hidden_dim], 64-bit,
/// all entries finite. `class_axis` records which axis held the classes in
/// the source tensor (1 means the load transposed).
struct ClassifierMatrix {
    std::vector<double> values;  // row-major
    std::size_t num_classes = 0;
    std::size_t hidden_dim = 0;
    std::string tensor_name;
    int class_axis = 0;

    double at(std::size_t c, std::size_t j) const { return values[c * hidden_dim + j]; }
    std::span<const double> row(std::size_t c) const {
        return std::span<const double>(values).subspan(c * hidden_dim, hidden_dim);
    }
};

ClassifierMatrix load_classifier(const TensorFile& tf, const std::string& tensor_name,
                                 std::size_t num_classes,
                                 std::optional<int> class_axis = std::nullopt);

/// The weight row of one output class: the sample points the density
/// estimate runs on. At least two entries, all finite.
struct ClassWeightVector {
    int class_label = 0;
    std::vector<double> weights;
    std::string source;  // "<model path>:<tensor name>"
};

/// Row `class_label` of the matrix; when a bias vector is supplied, the
/// scalar bias[class_label] is appended as one extra sample point.
ClassWeightVector class_vector(const ClassifierMatrix& m, int class_label,
                               std::optional<std::span<const double>> bias = std::nullopt);

struct TensorToWrite {
    std::string name;
    Dtype dtype = Dtype::F32;  // F32 or F64
    std::vector<std::size_t> shape;
    std::vector<double> values;  // rounded to float when dtype is F32
};

void write_tensor_file(const std::filesystem::path& path,
                       std::span<const TensorToWrite> tensors);

}  // namespace trojanscope
