#include "degfem/quadrature.hpp"

#include <cmath>

namespace degfem {

namespace {

constexpr std::array<TriQuadPoint, 3> kMidpoint{{
    {{0.5, 0.5, 0.0}, 1.0 / 3.0},
    {{0.0, 0.5, 0.5}, 1.0 / 3.0},
    {{0.5, 0.0, 0.5}, 1.0 / 3.0},
}};

std::array<TriQuadPoint, 7> make_radon() {
  const double s = std::sqrt(15.0);
  const double a = (6.0 - s) / 21.0;
  const double b = (6.0 + s) / 21.0;
  const double wa = (155.0 - s) / 1200.0;
  const double wb = (155.0 + s) / 1200.0;
  return {{
      {{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0}, 9.0 / 40.0},
      {{a, a, 1.0 - 2.0 * a}, wa},
      {{a, 1.0 - 2.0 * a, a}, wa},
      {{1.0 - 2.0 * a, a, a}, wa},
      {{b, b, 1.0 - 2.0 * b}, wb},
      {{b, 1.0 - 2.0 * b, b}, wb},
      {{1.0 - 2.0 * b, b, b}, wb},
  }};
}

const std::array<TriQuadPoint, 7> kRadon = make_radon();

std::array<LineQuadPoint, 3> make_gauss3() {
  const double d = 0.5 * std::sqrt(0.6);
  return {{{0.5 - d, 5.0 / 18.0}, {0.5, 8.0 / 18.0}, {0.5 + d, 5.0 / 18.0}}};
}

const std::array<LineQuadPoint, 3> kGauss3 = make_gauss3();

}  // namespace

std::span<const TriQuadPoint> edge_midpoint_rule() { return kMidpoint; }
std::span<const TriQuadPoint> radon7_rule() { return kRadon; }

std::span<const TriQuadPoint> triangle_rule(QuadDegree degree) {
  return degree == QuadDegree::Two ? edge_midpoint_rule() : radon7_rule();
}

std::span<const LineQuadPoint> gauss3_rule() { return kGauss3; }

}  // namespace degfem
