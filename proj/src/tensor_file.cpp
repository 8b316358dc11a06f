#include "trojanscope/tensor_file.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <utility>

#include <json.hpp>

namespace trojanscope {

static_assert(std::endian::native == std::endian::little,
              "tensor container payloads are little-endian; big-endian hosts are unsupported");

namespace {

using json = nlohmann::json;

struct DtypeInfo {
    Dtype dtype;
    std::string_view tag;
    std::size_t size;
};

constexpr std::array<DtypeInfo, 13> kDtypes{{
    {Dtype::Bool, "BOOL", 1},
    {Dtype::U8, "U8", 1},
    {Dtype::I8, "I8", 1},
    {Dtype::I16, "I16", 2},
    {Dtype::U16, "U16", 2},
    {Dtype::F16, "F16", 2},
    {Dtype::BF16, "BF16", 2},
    {Dtype::I32, "I32", 4},
    {Dtype::U32, "U32", 4},
    {Dtype::F32, "F32", 4},
    {Dtype::F64, "F64", 8},
    {Dtype::I64, "I64", 8},
    {Dtype::U64, "U64", 8},
}};

// Anything bigger is a corrupt length field, not a real header.
constexpr std::uint64_t kMaxHeaderBytes = 256ull * 1024 * 1024;

std::uint64_t checked_element_count(const std::vector<std::size_t>& shape,
                                    const std::string& name) {
    std::uint64_t n = 1;
    for (std::size_t dim : shape) {
        if (dim != 0 && n > std::numeric_limits<std::uint64_t>::max() / dim) {
            throw TensorFileError(TensorFileError::Kind::HeaderField,
                                  "tensor '" + name + "': shape product overflows");
        }
        n *= dim;
    }
    return n;
}

}  // namespace

std::string_view dtype_tag(Dtype dtype) {
    for (const auto& info : kDtypes) {
        if (info.dtype == dtype) return info.tag;
    }
    return "?";
}

std::size_t dtype_size(Dtype dtype) {
    for (const auto& info : kDtypes) {
        if (info.dtype == dtype) return info.size;
    }
    return 0;
}

std::optional<Dtype> dtype_from_tag(std::string_view tag) {
    for (const auto& info : kDtypes) {
        if (info.tag == tag) return info.dtype;
    }
    return std::nullopt;
}

std::size_t TensorEntry::element_count() const {
    std::size_t n = 1;
    for (std::size_t dim : shape) n *= dim;
    return n;
}

TensorFile TensorFile::open(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    in.seekg(0, std::ios::end);
    const std::uint64_t file_size = static_cast<std::uint64_t>(in.tellg());
    in.seekg(0, std::ios::beg);

    std::uint64_t header_len = 0;
    if (file_size < sizeof(header_len)) {
        throw TensorFileError(TensorFileError::Kind::HeaderLength,
                              "file too small for the 8-byte header length field (" +
                                  std::to_string(file_size) + " bytes)");
    }
    in.read(reinterpret_cast<char*>(&header_len), sizeof(header_len));
    if (header_len == 0 || header_len > kMaxHeaderBytes ||
        header_len > file_size - sizeof(header_len)) {
        throw TensorFileError(TensorFileError::Kind::HeaderLength,
                              "declared header length " + std::to_string(header_len) +
                                  " does not fit a " + std::to_string(file_size) + "-byte file");
    }

    std::string header_bytes(header_len, '\0');
    in.read(header_bytes.data(), static_cast<std::streamsize>(header_len));
    if (!in) throw IoError("short read on header of '" + path.string() + "'");

    json header;
    try {
        header = json::parse(header_bytes);
    } catch (const json::parse_error& e) {
        throw TensorFileError(TensorFileError::Kind::HeaderJson,
                              std::string("header is not valid JSON: ") + e.what());
    }
    if (!header.is_object()) {
        throw TensorFileError(TensorFileError::Kind::HeaderJson, "header is not a JSON object");
    }

    TensorFile tf;
    tf.path_ = path;
    tf.payload_offset_ = sizeof(header_len) + header_len;
    tf.payload_size_ = file_size - tf.payload_offset_;

    for (const auto& [name, value] : header.items()) {
        if (name == "__metadata__") continue;
        if (!value.is_object()) {
            throw TensorFileError(TensorFileError::Kind::HeaderField,
                                  "tensor '" + name + "': entry is not an object");
        }

        TensorEntry entry;

        if (!value.contains("dtype") || !value["dtype"].is_string()) {
            throw TensorFileError(TensorFileError::Kind::HeaderField,
                                  "tensor '" + name + "': missing or non-string 'dtype'");
        }
        const std::string tag = value["dtype"].get<std::string>();
        const auto dtype = dtype_from_tag(tag);
        if (!dtype) {
            throw TensorFileError(TensorFileError::Kind::UnsupportedDtype,
                                  "tensor '" + name + "': unsupported dtype tag '" + tag + "'");
        }
        entry.dtype = *dtype;

        if (!value.contains("shape") || !value["shape"].is_array()) {
            throw TensorFileError(TensorFileError::Kind::HeaderField,
                                  "tensor '" + name + "': missing or non-array 'shape'");
        }
        for (const auto& dim : value["shape"]) {
            if (!dim.is_number_unsigned()) {
                throw TensorFileError(TensorFileError::Kind::HeaderField,
                                      "tensor '" + name + "': non-integer dimension in 'shape'");
            }
            entry.shape.push_back(dim.get<std::size_t>());
        }

        if (!value.contains("data_offsets") || !value["data_offsets"].is_array() ||
            value["data_offsets"].size() != 2 ||
            !value["data_offsets"][0].is_number_unsigned() ||
            !value["data_offsets"][1].is_number_unsigned()) {
            throw TensorFileError(TensorFileError::Kind::HeaderField,
                                  "tensor '" + name + "': 'data_offsets' must be two unsigned integers");
        }
        entry.begin = value["data_offsets"][0].get<std::uint64_t>();
        entry.end = value["data_offsets"][1].get<std::uint64_t>();

        if (entry.begin > entry.end || entry.end > tf.payload_size_) {
            throw TensorFileError(TensorFileError::Kind::Bounds,
                                  "tensor '" + name + "': data_offsets [" +
                                      std::to_string(entry.begin) + ", " +
                                      std::to_string(entry.end) + ") leave the " +
                                      std::to_string(tf.payload_size_) + "-byte payload");
        }
        const std::uint64_t expected =
            checked_element_count(entry.shape, name) * dtype_size(entry.dtype);
        if (entry.end - entry.begin != expected) {
            throw TensorFileError(TensorFileError::Kind::Bounds,
                                  "tensor '" + name + "': byte range length " +
                                      std::to_string(entry.end - entry.begin) +
                                      " != shape product * dtype size = " +
                                      std::to_string(expected));
        }

        tf.entries_.emplace(name, std::move(entry));
    }

    // Non-empty ranges must not overlap.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> ranges;
    std::vector<const std::string*> names;
    for (const auto& [name, entry] : tf.entries_) {
        if (entry.begin == entry.end) continue;
        ranges.emplace_back(entry.begin, entry.end);
        names.push_back(&name);
    }
    std::vector<std::size_t> order(ranges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return ranges[a].first < ranges[b].first; });
    for (std::size_t k = 1; k < order.size(); ++k) {
        if (ranges[order[k]].first < ranges[order[k - 1]].second) {
            throw TensorFileError(TensorFileError::Kind::Overlap,
                                  "tensors '" + *names[order[k - 1]] + "' and '" +
                                      *names[order[k]] + "' have overlapping byte ranges");
        }
    }

    return tf;
}

bool TensorFile::contains(std::string_view name) const {
    return entries_.find(std::string(name)) != entries_.end();
}

const TensorEntry& TensorFile::entry(const std::string& name) const {
    const auto it = entries_.find(name);
    if (it == entries_.end()) {
        throw TensorFileError(TensorFileError::Kind::MissingTensor,
                              "no tensor named '" + name + "' in '" + path_.string() + "'");
    }
    return it->second;
}

std::vector<double> TensorFile::read_values(const std::string& name) const {
    const TensorEntry& e = entry(name);
    if (e.dtype != Dtype::F32 && e.dtype != Dtype::F64) {
        throw TensorFileError(TensorFileError::Kind::UnsupportedDtype,
                              "tensor '" + name + "' has dtype " + std::string(dtype_tag(e.dtype)) +
                                  "; only F32 and F64 can be loaded as values");
    }

    std::ifstream in(path_, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path_.string() + "' for reading");
    in.seekg(static_cast<std::streamoff>(payload_offset_ + e.begin));

    const std::size_t n = e.element_count();
    std::vector<double> values(n);
    if (e.dtype == Dtype::F64) {
        in.read(reinterpret_cast<char*>(values.data()),
                static_cast<std::streamsize>(n * sizeof(double)));
    } else {
        std::vector<float> raw(n);
        in.read(reinterpret_cast<char*>(raw.data()),
                static_cast<std::streamsize>(n * sizeof(float)));
        for (std::size_t i = 0; i < n; ++i) values[i] = static_cast<double>(raw[i]);
    }
    if (!in) throw IoError("short read on tensor '" + name + "' of '" + path_.string() + "'");
    return values;
}

std::vector<TensorListing> list_tensors(const TensorFile& tf) {
    std::vector<TensorListing> out;
    out.reserve(tf.entries().size());
    for (const auto& [name, entry] : tf.entries()) {
        out.push_back({name, entry.dtype, entry.shape});
    }
    return out;  // std::map iteration is already lexicographic
}

ClassifierMatrix load_classifier(const TensorFile& tf, const std::string& tensor_name,
                                 std::size_t num_classes, std::optional<int> class_axis) {
    if (num_classes < 2) throw ValueError("num_classes must be at least 2");
    if (class_axis && *class_axis != 0 && *class_axis != 1) {
        throw ValueError("class axis must be 0 or 1");
    }

    const TensorEntry& e = tf.entry(tensor_name);
    if (e.shape.size() != 2) {
        throw TensorFileError(TensorFileError::Kind::BadShape,
                              "tensor '" + tensor_name + "' is " + std::to_string(e.shape.size()) +
                                  "-D; the classifier tensor must be 2-D");
    }

    const std::size_t rows = e.shape[0];
    const std::size_t cols = e.shape[1];
    int axis;
    if (class_axis) {
        axis = *class_axis;
        const std::size_t len = axis == 0 ? rows : cols;
        if (len != num_classes) {
            throw TensorFileError(TensorFileError::Kind::BadShape,
                                  "tensor '" + tensor_name + "': axis " + std::to_string(axis) +
                                      " has length " + std::to_string(len) + ", expected " +
                                      std::to_string(num_classes));
        }
    } else if (rows == num_classes && cols == num_classes) {
        throw TensorFileError(TensorFileError::Kind::AmbiguousAxis,
                              "tensor '" + tensor_name + "' is square [" + std::to_string(rows) +
                                  ", " + std::to_string(cols) +
                                  "]; pass an explicit class axis");
    } else if (rows == num_classes) {
        axis = 0;
    } else if (cols == num_classes) {
        axis = 1;
    } else {
        throw TensorFileError(TensorFileError::Kind::BadShape,
                              "tensor '" + tensor_name + "' has shape [" + std::to_string(rows) +
                                  ", " + std::to_string(cols) + "]; no axis has length " +
                                  std::to_string(num_classes));
    }

    const std::vector<double> raw = tf.read_values(tensor_name);

    ClassifierMatrix m;
    m.tensor_name = tensor_name;
    m.class_axis = axis;
    m.num_classes = num_classes;
    m.hidden_dim = axis == 0 ? cols : rows;
    if (m.hidden_dim == 0) {
        throw TensorFileError(TensorFileError::Kind::BadShape,
                              "tensor '" + tensor_name + "' has an empty hidden dimension");
    }

    if (axis == 0) {
        m.values = raw;
    } else {
        m.values.resize(raw.size());
        for (std::size_t c = 0; c < m.num_classes; ++c) {
            for (std::size_t j = 0; j < m.hidden_dim; ++j) {
                m.values[c * m.hidden_dim + j] = raw[j * num_classes + c];
            }
        }
    }

    for (double v : m.values) {
        if (!std::isfinite(v)) {
            throw TensorFileError(TensorFileError::Kind::NonFinite,
                                  "tensor '" + tensor_name + "' contains NaN or Inf entries");
        }
    }
    return m;
}

ClassWeightVector class_vector(const ClassifierMatrix& m, int class_label,
                               std::optional<std::span<const double>> bias) {
    if (class_label < 0 || static_cast<std::size_t>(class_label) >= m.num_classes) {
        throw ValueError("class label " + std::to_string(class_label) + " out of range [0, " +
                         std::to_string(m.num_classes) + ")");
    }
    if (bias && bias->size() != m.num_classes) {
        throw ValueError("bias length " + std::to_string(bias->size()) + " != num_classes " +
                         std::to_string(m.num_classes));
    }

    ClassWeightVector v;
    v.class_label = class_label;
    const auto row = m.row(static_cast<std::size_t>(class_label));
    v.weights.assign(row.begin(), row.end());
    if (bias) v.weights.push_back((*bias)[static_cast<std::size_t>(class_label)]);
    v.source = m.tensor_name;
    if (v.weights.size() < 2) {
        throw ValueError("class weight vector needs at least 2 sample points, got " +
                         std::to_string(v.weights.size()));
    }
    return v;
}

void write_tensor_file(const std::filesystem::path& path,
                       std::span<const TensorToWrite> tensors) {
    // Layout in lexicographic name order so the header is deterministic.
    std::vector<const TensorToWrite*> order;
    order.reserve(tensors.size());
    for (const auto& t : tensors) order.push_back(&t);
    std::sort(order.begin(), order.end(),
              [](const TensorToWrite* a, const TensorToWrite* b) { return a->name < b->name; });

    json header = json::object();
    std::uint64_t offset = 0;
    for (const TensorToWrite* t : order) {
        if (t->dtype != Dtype::F32 && t->dtype != Dtype::F64) {
            throw ValueError("tensor '" + t->name + "': writer supports F32 and F64 only");
        }
        std::size_t n = 1;
        for (std::size_t dim : t->shape) n *= dim;
        if (n != t->values.size()) {
            throw ValueError("tensor '" + t->name + "': shape product " + std::to_string(n) +
                             " != value count " + std::to_string(t->values.size()));
        }
        const std::uint64_t bytes = n * dtype_size(t->dtype);
        header[t->name] = {{"dtype", dtype_tag(t->dtype)},
                           {"shape", t->shape},
                           {"data_offsets", {offset, offset + bytes}}};
        offset += bytes;
    }

    std::string header_str = header.dump();
    while (header_str.size() % 8 != 0) header_str.push_back(' ');  // keep payload 8-aligned
    const std::uint64_t header_len = header_str.size();

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(&header_len), sizeof(header_len));
    out.write(header_str.data(), static_cast<std::streamsize>(header_str.size()));

    for (const TensorToWrite* t : order) {
        if (t->dtype == Dtype::F64) {
            out.write(reinterpret_cast<const char*>(t->values.data()),
                      static_cast<std::streamsize>(t->values.size() * sizeof(double)));
        } else {
            std::vector<float> raw(t->values.size());
            for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = static_cast<float>(t->values[i]);
            out.write(reinterpret_cast<const char*>(raw.data()),
                      static_cast<std::streamsize>(raw.size() * sizeof(float)));
        }
    }
    if (!out) throw IoError("write failure on '" + path.string() + "'");
}

}  // namespace trojanscope
