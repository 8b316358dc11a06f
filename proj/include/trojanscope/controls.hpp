#pragma once

#include <cstdint>
#include <filesystem>

#include "trojanscope/tensor_file.hpp"

namespace trojanscope {

/// Synthetic classifier-weight generator: every class row is i.i.d.
/// Normal(0, sigma^2) except the target row, which is shifted by delta.
/// delta = 0 is the negative control (no signature); delta around 2*sigma
/// is the positive control the detector must flag.
///
/// Entry (c, j) is Normal(mu_c, sigma^2) drawn from the counter-based stream
/// in rng.hpp, keyed by exactly (seed, c, j):
///
///   z(c, j) = to_normal(word(seed, c, 2j), word(seed, c, 2j + 1))
///   entry   = (c == target_class ? delta : 0) + sigma * z(c, j)
///
/// so matrices are bit-identical for a given (spec, seed) no matter how
/// generation is scheduled.
struct ControlSpec {
    std::size_t hidden_dim = 768;
    std::size_t num_classes = 2;
    double sigma = 1.0;
    double delta = 0.0;  // shift added to the target class
    int target_class = 0;
    std::uint64_t seed = 0;
    std::string tensor_name = "classifier.weight";

    void validate() const;  // throws ValueError
};

ClassifierMatrix generate(const ControlSpec& spec);

/// Writes the generated matrix as a single float32 tensor; round-trips
/// through TensorFile up to float32 rounding.
void write_control(const ControlSpec& spec, const std::filesystem::path& path);

}  // namespace trojanscope
