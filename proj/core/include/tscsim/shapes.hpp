#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace tscsim {

using Waveform = std::vector<double>;

/// The five shape kernels every simulator draws from. The numeric order is
/// fixed: it is the order in which shapes are sampled and serialized.
enum class ShapeKind : int {
    Triangle = 0,
    Sine = 1,
    Step = 2,
    Spike = 3,
    HeadAndShoulders = 4,
};

inline constexpr std::array<ShapeKind, 5> kAllShapeKinds{
    ShapeKind::Triangle, ShapeKind::Sine, ShapeKind::Step, ShapeKind::Spike,
    ShapeKind::HeadAndShoulders};

std::string_view to_string(ShapeKind kind);
ShapeKind shape_kind_from_string(std::string_view name);

struct ShapeSpec {
    ShapeKind kind = ShapeKind::Triangle;
    std::size_t length = 2;
    double amplitude = 1.0;
};

/// Renders a shape with t = i / (length - 1):
///
///   Triangle          a * (1 - |2t - 1|)
///   Spike             -a * (1 - |2t - 1|)
///   Sine              a * sin(2 pi t)
///   Step              -a for t < 0.5, +a otherwise
///   HeadAndShoulders  three adjacent triangles over thirds of the length with
///                     peaks a/2, a, a/2; the middle third takes the remainder
///
/// Throws InvalidSpecError when length < 2 or amplitude is not positive.
Waveform render_shape(const ShapeSpec& spec);

/// Adds `shape` onto `series` starting at `start`. Throws PlacementError if
/// the shape does not fit entirely inside the series.
Waveform insert_shape(Waveform series, std::span<const double> shape, std::size_t start);

/// In-place variant of insert_shape.
void add_shape_in_place(std::span<double> series, std::span<const double> shape,
                        std::size_t start);

} // namespace tscsim
