#include "stwave/quadrature.hpp"

#include <array>
#include <stdexcept>

namespace stwave {

namespace {

constexpr std::array<TrianglePoint, 1> kTriDeg1{{{1. / 3, 1. / 3, 1. / 3, 1.0}}};

// Midpoint rule, exact for quadratics.
constexpr std::array<TrianglePoint, 3> kTriDeg2{{
    {0.5, 0.5, 0.0, 1. / 3},
    {0.0, 0.5, 0.5, 1. / 3},
    {0.5, 0.0, 0.5, 1. / 3},
}};

// Dunavant degree 4, 6 points.
constexpr double d4a1 = 0.445948490915965;
constexpr double d4w1 = 0.223381589678011;
constexpr double d4a2 = 0.091576213509771;
constexpr double d4w2 = 0.109951743655322;
constexpr std::array<TrianglePoint, 6> kTriDeg4{{
    {1 - 2 * d4a1, d4a1, d4a1, d4w1},
    {d4a1, 1 - 2 * d4a1, d4a1, d4w1},
    {d4a1, d4a1, 1 - 2 * d4a1, d4w1},
    {1 - 2 * d4a2, d4a2, d4a2, d4w2},
    {d4a2, 1 - 2 * d4a2, d4a2, d4w2},
    {d4a2, d4a2, 1 - 2 * d4a2, d4w2},
}};

// Dunavant degree 6, 12 points.
constexpr double d6a1 = 0.063089014491502, d6w1 = 0.050844906370207;
constexpr double d6a2 = 0.249286745170910, d6w2 = 0.116786275726379;
constexpr double d6b = 0.310352451033785, d6c = 0.053145049844816, d6w3 = 0.082851075618374;
constexpr std::array<TrianglePoint, 12> kTriDeg6{{
    {1 - 2 * d6a1, d6a1, d6a1, d6w1},
    {d6a1, 1 - 2 * d6a1, d6a1, d6w1},
    {d6a1, d6a1, 1 - 2 * d6a1, d6w1},
    {1 - 2 * d6a2, d6a2, d6a2, d6w2},
    {d6a2, 1 - 2 * d6a2, d6a2, d6w2},
    {d6a2, d6a2, 1 - 2 * d6a2, d6w2},
    {1 - d6b - d6c, d6b, d6c, d6w3},
    {1 - d6b - d6c, d6c, d6b, d6w3},
    {d6b, 1 - d6b - d6c, d6c, d6w3},
    {d6c, 1 - d6b - d6c, d6b, d6w3},
    {d6b, d6c, 1 - d6b - d6c, d6w3},
    {d6c, d6b, 1 - d6b - d6c, d6w3},
}};

// Dunavant degree 8, 16 points.
constexpr double d8w0 = 0.144315607677787;
constexpr double d8a1 = 0.459292588292723, d8w1 = 0.095091634413923;
constexpr double d8a2 = 0.170569307751760, d8w2 = 0.103217370534718;
constexpr double d8a3 = 0.050547228317031, d8w3 = 0.032458497623198;
constexpr double d8b = 0.263112829634638, d8c = 0.728492392955404, d8w4 = 0.027230314174435;
constexpr std::array<TrianglePoint, 16> kTriDeg8{{
    {1. / 3, 1. / 3, 1. / 3, d8w0},
    {1 - 2 * d8a1, d8a1, d8a1, d8w1},
    {d8a1, 1 - 2 * d8a1, d8a1, d8w1},
    {d8a1, d8a1, 1 - 2 * d8a1, d8w1},
    {1 - 2 * d8a2, d8a2, d8a2, d8w2},
    {d8a2, 1 - 2 * d8a2, d8a2, d8w2},
    {d8a2, d8a2, 1 - 2 * d8a2, d8w2},
    {1 - 2 * d8a3, d8a3, d8a3, d8w3},
    {d8a3, 1 - 2 * d8a3, d8a3, d8w3},
    {d8a3, d8a3, 1 - 2 * d8a3, d8w3},
    {1 - d8b - d8c, d8b, d8c, d8w4},
    {1 - d8b - d8c, d8c, d8b, d8w4},
    {d8b, 1 - d8b - d8c, d8c, d8w4},
    {d8c, 1 - d8b - d8c, d8b, d8w4},
    {d8b, d8c, 1 - d8b - d8c, d8w4},
    {d8c, d8b, 1 - d8b - d8c, d8w4},
}};

// Gauss-Legendre nodes on [0,1].
constexpr std::array<GaussPoint, 1> kG1{{{0.5, 1.0}}};
constexpr std::array<GaussPoint, 2> kG2{{
    {0.21132486540518711775, 0.5},
    {0.78867513459481288225, 0.5},
}};
constexpr std::array<GaussPoint, 3> kG3{{
    {0.11270166537925831148, 5. / 18},
    {0.5, 4. / 9},
    {0.88729833462074168852, 5. / 18},
}};
constexpr std::array<GaussPoint, 4> kG4{{
    {0.069431844202973712388, 0.173927422568726928687},
    {0.330009478207571867598, 0.326072577431273071313},
    {0.669990521792428132402, 0.326072577431273071313},
    {0.930568155797026287612, 0.173927422568726928687},
}};
constexpr std::array<GaussPoint, 5> kG5{{
    {0.046910077030668003601, 0.118463442528094543757},
    {0.230765344947158454481, 0.239314335249683234021},
    {0.5, 0.284444444444444444444},
    {0.769234655052841545519, 0.239314335249683234021},
    {0.953089922969331996399, 0.118463442528094543757},
}};
constexpr std::array<GaussPoint, 6> kG6{{
    {0.033765242898423986094, 0.085662246189585172520},
    {0.169395306766867743169, 0.180380786524069303785},
    {0.380690406958401545685, 0.233956967286345523695},
    {0.619309593041598454315, 0.233956967286345523695},
    {0.830604693233132256831, 0.180380786524069303785},
    {0.966234757101576013906, 0.085662246189585172520},
}};

}  // namespace

std::span<const TrianglePoint> triangle_rule(int degree) {
  if (degree <= 1) return kTriDeg1;
  if (degree <= 2) return kTriDeg2;
  if (degree <= 4) return kTriDeg4;
  if (degree <= 6) return kTriDeg6;
  if (degree <= 8) return kTriDeg8;
  throw std::invalid_argument("triangle_rule: degree > 8 not available");
}

std::span<const GaussPoint> gauss_rule(int n_points) {
  switch (n_points) {
    case 1: return kG1;
    case 2: return kG2;
    case 3: return kG3;
    case 4: return kG4;
    case 5: return kG5;
    case 6: return kG6;
    default: throw std::invalid_argument("gauss_rule: 1..6 points available");
  }
}

int gauss_points_for_degree(int degree) {
  int n = degree / 2 + 1;
  return n < 1 ? 1 : (n > 6 ? 6 : n);
}

}  // namespace stwave
