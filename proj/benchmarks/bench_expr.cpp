#include <benchmark/benchmark.h>

#include "metallic/expr.hpp"

using metallic::Expr;
using metallic::parse_expression;

namespace {

const std::vector<std::string> kCoords{"u", "v"};
const char* kText = "sin(u)*cos(v) + exp(u*v)/(1 + u^2) - sqrt(3 + v^2)*ln(2 + u^2)";

void BM_parse(benchmark::State& state) {
  for (auto _ : state) {
    Expr e = parse_expression(kText, kCoords);
    benchmark::DoNotOptimize(e);
  }
}

void BM_eval(benchmark::State& state) {
  const Expr e = parse_expression(kText, kCoords);
  const std::vector<double> x{0.7, -0.3};
  for (auto _ : state) {
    double v = e.eval(x);
    benchmark::DoNotOptimize(v);
  }
}

void BM_derivative(benchmark::State& state) {
  const Expr e = parse_expression(kText, kCoords);
  for (auto _ : state) {
    Expr d = e.derivative(0);
    benchmark::DoNotOptimize(d);
  }
}

void BM_second_derivative_eval(benchmark::State& state) {
  const Expr d2 = parse_expression(kText, kCoords).derivative(0).derivative(1);
  const std::vector<double> x{0.7, -0.3};
  for (auto _ : state) {
    double v = d2.eval(x);
    benchmark::DoNotOptimize(v);
  }
}

}  // namespace

BENCHMARK(BM_parse);
BENCHMARK(BM_eval);
BENCHMARK(BM_derivative);
BENCHMARK(BM_second_derivative_eval);
