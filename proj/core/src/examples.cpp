#include "metallic/examples.hpp"

namespace metallic {

namespace {

const BuiltinExample kExamples[] = {
    {"E1", "flat neutral metric, constant J, p=2 q=-2 (parallel, flat)",
     R"json({
  "name": "E1",
  "dim": 2,
  "coords": ["x", "y"],
  "p": 2, "q": -2,
  "domain": [[-1, 1], [-1, 1]],
  "g": [["1", "0"], ["0", "-1"]],
  "J": [["1", "1"], ["-1", "1"]]
})json"},
    {"E2", "golden projector field on Euclidean R^2, p=1 q=1 (non-parallel)",
     R"json({
  "name": "E2",
  "dim": 2,
  "coords": ["u", "v"],
  "p": 1, "q": 1,
  "domain": [[-1, 1], [-1, 1]],
  "g": [["1", "0"], ["0", "1"]],
  "J": [["(1 - sqrt(5))/2 + sqrt(5)*cos(u)^2", "sqrt(5)*sin(u)*cos(u)"],
        ["sqrt(5)*sin(u)*cos(u)", "(1 - sqrt(5))/2 + sqrt(5)*sin(u)^2"]]
})json"},
    {"E3", "polar-type flat metric, trivial golden J, p=1 q=1 (flat, Gamma != 0)",
     R"json({
  "name": "E3",
  "dim": 2,
  "coords": ["u", "v"],
  "p": 1, "q": 1,
  "domain": [[1, 2], [0, 1]],
  "g": [["1", "0"], ["0", "u^2"]],
  "J": [["1.6180339887498949", "0"], ["0", "1.6180339887498949"]]
})json"},
    {"E4", "sphere-type metric, constant diagonal golden J, p=1 q=1 (curved, non-parallel)",
     R"json({
  "name": "E4",
  "dim": 2,
  "coords": ["u", "v"],
  "p": 1, "q": 1,
  "domain": [[0.5, 1.0], [0, 1]],
  "g": [["1", "0"], ["0", "sin(u)^2"]],
  "J": [["1.6180339887498949", "0"], ["0", "-0.6180339887498949"]]
})json"},
};

}  // namespace

std::span<const BuiltinExample> builtin_examples() { return kExamples; }

ChartManifold load_example(std::string_view id) {
  for (const auto& e : kExamples)
    if (id == e.id) return load_manifest(e.manifest);
  throw SchemaError("unknown built-in example '" + std::string(id) + "'");
}

}  // namespace metallic
