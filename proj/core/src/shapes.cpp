#include "tscsim/shapes.hpp"

#include "tscsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace tscsim {

namespace {

// Peak-normalised triangle of the given length written into `out`. The
// formula 1 - |2t - 1| only touches 1 at odd lengths; at even lengths the two
// central samples are scaled up to the peak so every non-degenerate triangle
// reaches its amplitude exactly. Lengths below 3 have no interior sample and
// stay at zero.
void write_triangle(std::span<double> out, double peak) {
    const std::size_t n = out.size();
    if (n < 3) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    const double last = static_cast<double>(n - 1);
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / last;
        out[i] = 1.0 - std::abs(2.0 * t - 1.0);
        top = std::max(top, out[i]);
    }
    for (auto& v : out) {
        v = peak * (v / top);
    }
}

void write_sine(std::span<double> out, double amplitude) {
    const std::size_t n = out.size();
    const double last = static_cast<double>(n - 1);
    double top = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / last;
        out[i] = std::sin(2.0 * std::numbers::pi * t);
        top = std::max(top, std::abs(out[i]));
    }
    // n <= 3 samples only hit the zero crossings.
    if (top < 1e-9) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    for (auto& v : out) {
        v = amplitude * (v / top);
    }
}

} // namespace

std::string_view to_string(ShapeKind kind) {
    switch (kind) {
    case ShapeKind::Triangle:
        return "triangle";
    case ShapeKind::Sine:
        return "sine";
    case ShapeKind::Step:
        return "step";
    case ShapeKind::Spike:
        return "spike";
    case ShapeKind::HeadAndShoulders:
        return "head_and_shoulders";
    }
    return "unknown";
}

ShapeKind shape_kind_from_string(std::string_view name) {
    for (const auto kind : kAllShapeKinds) {
        if (to_string(kind) == name) {
            return kind;
        }
    }
    throw InvalidSpecError("unknown shape kind '" + std::string(name) + "'");
}

Waveform render_shape(const ShapeSpec& spec) {
    if (spec.length < 2) {
        throw InvalidSpecError("shape length must be at least 2, got " +
                               std::to_string(spec.length));
    }
    if (!(spec.amplitude > 0.0) || !std::isfinite(spec.amplitude)) {
        throw InvalidSpecError("shape amplitude must be positive and finite");
    }
    const double a = spec.amplitude;
    const std::size_t n = spec.length;
    Waveform out(n, 0.0);

    switch (spec.kind) {
    case ShapeKind::Triangle:
        write_triangle(out, a);
        break;
    case ShapeKind::Spike:
        write_triangle(out, a);
        for (auto& v : out) {
            v = -v;
        }
        break;
    case ShapeKind::Sine:
        write_sine(out, a);
        break;
    case ShapeKind::Step: {
        const double last = static_cast<double>(n - 1);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = static_cast<double>(i) / last < 0.5 ? -a : a;
        }
        break;
    }
    case ShapeKind::HeadAndShoulders: {
        const std::size_t third = n / 3;
        const std::size_t middle = n - 2 * third;
        std::span<double> all(out);
        write_triangle(all.subspan(0, third), a / 2.0);
        write_triangle(all.subspan(third, middle), a);
        write_triangle(all.subspan(third + middle, third), a / 2.0);
        break;
    }
    }
    return out;
}

void add_shape_in_place(std::span<double> series, std::span<const double> shape,
                        std::size_t start) {
    if (start > series.size() || shape.size() > series.size() - start) {
        throw PlacementError("shape of length " + std::to_string(shape.size()) +
                             " at start " + std::to_string(start) +
                             " exceeds series length " + std::to_string(series.size()));
    }
    for (std::size_t i = 0; i < shape.size(); ++i) {
        series[start + i] += shape[i];
    }
}

Waveform insert_shape(Waveform series, std::span<const double> shape, std::size_t start) {
    add_shape_in_place(series, shape, start);
    return series;
}

} // namespace tscsim
