#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "cmsent/error.hpp"

namespace cmsent {

// Customization point for the vector types the SVR can train on.
// Specializations provide dimension, dot and squared_distance.
template <typename Sample>
struct SampleTraits;

template <typename Sample>
concept KernelSample = requires(const Sample& a, const Sample& b) {
    { SampleTraits<Sample>::dimension(a) } -> std::convertible_to<std::size_t>;
    { SampleTraits<Sample>::dot(a, b) } -> std::convertible_to<double>;
    { SampleTraits<Sample>::squared_distance(a, b) } -> std::convertible_to<double>;
};

using DenseVector = std::vector<double>;

template <>
struct SampleTraits<DenseVector> {
    static std::size_t dimension(const DenseVector& v) { return v.size(); }

    static double dot(const DenseVector& a, const DenseVector& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    }

    static double squared_distance(const DenseVector& a, const DenseVector& b) {
        double s = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            const double d = a[i] - b[i];
            s += d * d;
        }
        return s;
    }
};

enum class KernelType { linear, rbf };

inline std::string_view to_string(KernelType k) { return k == KernelType::linear ? "linear" : "rbf"; }

inline KernelType parse_kernel(std::string_view text) {
    if (text == "linear") return KernelType::linear;
    if (text == "rbf") return KernelType::rbf;
    throw ConfigError("unknown kernel '" + std::string(text) + "' (expected linear or rbf)");
}

template <KernelSample Sample>
void require_same_dimension(const Sample& a, const Sample& b) {
    const auto da = SampleTraits<Sample>::dimension(a);
    const auto db = SampleTraits<Sample>::dimension(b);
    if (da != db)
        throw DataError("dimension mismatch: " + std::to_string(da) + " vs " + std::to_string(db));
}

// Kernel value without the dimension check; used on validated training sets.
template <KernelSample Sample>
double kernel_value(KernelType kernel, double gamma, const Sample& a, const Sample& b) {
    if (kernel == KernelType::linear) return SampleTraits<Sample>::dot(a, b);
    return std::exp(-gamma * SampleTraits<Sample>::squared_distance(a, b));
}

}  // namespace cmsent
