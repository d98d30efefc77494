#pragma once

#include <span>
#include <string_view>

#include "metallic/manifold.hpp"

namespace metallic {

struct BuiltinExample {
  const char* id;
  const char* description;
  const char* manifest;
};

// E1: flat neutral metric with a constant structure (parallel, flat).
// E2: golden projector field on Euclidean R^2 (non-parallel structure).
// E3: polar-type flat metric with the trivial golden structure
//     (zero curvature, nonzero Christoffel symbols).
// E4: sphere-type metric with a constant diagonal golden structure
//     (nonzero curvature, non-parallel structure).
std::span<const BuiltinExample> builtin_examples();

// Throws SchemaError for an unknown id.
ChartManifold load_example(std::string_view id);

}  // namespace metallic
