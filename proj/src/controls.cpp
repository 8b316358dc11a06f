#include "trojanscope/controls.hpp"

#include <cmath>

#include "trojanscope/errors.hpp"
#include "trojanscope/rng.hpp"

namespace trojanscope {

void ControlSpec::validate() const {
    if (hidden_dim < 2) throw ValueError("hidden_dim must be at least 2");
    if (num_classes < 2) throw ValueError("num_classes must be at least 2");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValueError("sigma must be positive");
    if (!std::isfinite(delta)) throw ValueError("delta must be finite");
    if (target_class < 0 || static_cast<std::size_t>(target_class) >= num_classes) {
        throw ValueError("target_class out of range");
    }
    if (tensor_name.empty()) throw ValueError("tensor_name must be non-empty");
}

ClassifierMatrix generate(const ControlSpec& spec) {
    spec.validate();

    ClassifierMatrix m;
    m.num_classes = spec.num_classes;
    m.hidden_dim = spec.hidden_dim;
    m.tensor_name = spec.tensor_name;
    m.class_axis = 0;
    m.values.resize(spec.num_classes * spec.hidden_dim);

    const auto classes = static_cast<std::ptrdiff_t>(spec.num_classes);
    const auto dim = static_cast<std::ptrdiff_t>(spec.hidden_dim);
#pragma omp parallel for collapse(2) schedule(static)
    for (std::ptrdiff_t c = 0; c < classes; ++c) {
        for (std::ptrdiff_t j = 0; j < dim; ++j) {
            const double mu = c == spec.target_class ? spec.delta : 0.0;
            const std::uint64_t w1 =
                rng::word(spec.seed, static_cast<std::uint64_t>(c), 2 * static_cast<std::uint64_t>(j));
            const std::uint64_t w2 = rng::word(spec.seed, static_cast<std::uint64_t>(c),
                                               2 * static_cast<std::uint64_t>(j) + 1);
            m.values[static_cast<std::size_t>(c * dim + j)] =
                mu + spec.sigma * rng::to_normal(w1, w2);
        }
    }
    return m;
}

void write_control(const ControlSpec& spec, const std::filesystem::path& path) {
    const ClassifierMatrix m = generate(spec);
    TensorToWrite t;
    t.name = spec.tensor_name;
    t.dtype = Dtype::F32;
    t.shape = {m.num_classes, m.hidden_dim};
    t.values = m.values;
    write_tensor_file(path, std::span<const TensorToWrite>(&t, 1));
}

}  // namespace trojanscope
