#pragma once

// Published ground-state energies of -Delta_D + r^2 + g^2 r^4, kept as
// printed so the number of digits defines the comparison tolerance.

#include <array>
#include <cmath>
#include <string>

namespace anharmonic {

struct ReferenceEnergy {
  int D;
  double g2;
  const char* digits;

  double value() const { return std::stod(digits); }
  /// One unit in the last printed digit.
  double last_digit() const {
    const std::string s(digits);
    const auto dot = s.find('.');
    const int decimals = dot == std::string::npos ? 0 : static_cast<int>(s.size() - dot - 1);
    return std::pow(10.0, -decimals);
  }
};

inline constexpr std::array<ReferenceEnergy, 12> kReferenceTable{{
    {1, 0.1, "1.06528550954"}, {2, 0.1, "2.1685972113"}, {3, 0.1, "3.3068720132"}, {6, 0.1, "6.9083321112"},
    {1, 1.0, "1.392351642"},   {2, 1.0, "2.952050092"},  {3, 1.0, "4.648812704"},  {6, 1.0, "10.390627296"},
    {1, 10.0, "2.44917407"},   {2, 10.0, "5.34935282"},  {3, 10.0, "8.59900346"},  {6, 10.0, "19.9369004"},
}};

}  // namespace anharmonic
